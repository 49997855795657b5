#ifndef HQSIM_DENSE_HPP
#define HQSIM_DENSE_HPP

#include <cstdint>
#include <vector>

#include "hqsim/circuit.hpp"

namespace hqsim {

// Default ceiling for dense statevector work; 2^14 amplitudes.
inline constexpr std::uint32_t kDenseMaxQubits = 14;

// Plain statevector, qubit i = bit i of the index. This is the semantic
// reference: every gate is applied from its definition, with no stabilizer
// machinery involved.
struct DenseState {
  std::uint32_t n = 0;
  std::vector<cdouble> amp;
};

DenseState dense_init(std::uint32_t n);

void dense_apply_clifford(DenseState& st, const CliffordOp& op);
void dense_apply_gate(DenseState& st, const GateIr& g, const Circuit& c);

// Output of the query function on input x.
std::uint64_t query_fn_value(const QueryFn& fn, std::uint64_t x, std::uint32_t width);

// Simulate the whole circuit from |0...0>. Throws std::invalid_argument when
// the circuit is wider than max_qubits.
DenseState dense_simulate(const Circuit& c, std::uint32_t max_qubits = kDenseMaxQubits);

}  // namespace hqsim

#endif
