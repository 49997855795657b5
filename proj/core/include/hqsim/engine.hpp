#ifndef HQSIM_ENGINE_HPP
#define HQSIM_ENGINE_HPP

#include <cstdint>
#include <vector>

#include "hqsim/bitvec.hpp"
#include "hqsim/circuit.hpp"
#include "hqsim/lowering.hpp"

namespace hqsim {

struct EngineOptions {
  int workers = 1;
};

struct EngineStats {
  std::uint64_t terms = 0;       // stabilizer runs performed
  std::uint64_t zero_terms = 0;  // runs annihilated by a projection
  double chi = 1.0;              // decomposition size of the whole circuit
  std::uint32_t total_qubits = 0;
  double time_ms = 0.0;
};

// Amplitude <x, 0...0| C |0...0>: the lowered circuit from the all-zeros
// state, read out at data value x with every ancilla back in |0>. Terms are
// split into one contiguous range per worker; each range is summed with
// compensated addition and the partials combine in worker order, so a given
// worker count always produces the identical result.
cdouble strong_amplitude(const GadgetizedCircuit& g, const BitVec& x,
                         const EngineOptions& opt = {}, EngineStats* stats = nullptr);
cdouble strong_amplitude(const GadgetizedCircuit& g, std::uint64_t x,
                         const EngineOptions& opt = {}, EngineStats* stats = nullptr);

// All 2^n data amplitudes in one pass over the decomposition (n data qubits
// must fit a table in memory).
std::vector<cdouble> strong_amplitudes_all(const GadgetizedCircuit& g,
                                           const EngineOptions& opt = {},
                                           EngineStats* stats = nullptr);

// Lower-and-evaluate conveniences.
cdouble strong_amplitude(const Circuit& c, std::uint64_t x, const EngineOptions& opt = {},
                         EngineStats* stats = nullptr);
double strong_probability(const Circuit& c, std::uint64_t x, const EngineOptions& opt = {},
                          EngineStats* stats = nullptr);

}  // namespace hqsim

#endif
