#ifndef HQSIM_LOWERING_HPP
#define HQSIM_LOWERING_HPP

#include <cstdint>
#include <vector>

#include "hqsim/circuit.hpp"
#include "hqsim/decomp.hpp"
#include "hqsim/stabilizer.hpp"

namespace hqsim {

// One step of a lowered gate's deterministic part: a Clifford op or a
// destructive projection of qubit q onto |outcome> (no renormalization).
struct SimOp {
  enum class Kind { Clifford, Project };

  Kind kind = Kind::Clifford;
  CliffordOp cliff{CliffordOp::Kind::H, 0, 0};
  std::uint32_t q = 0;
  bool outcome = false;

  static SimOp clifford(CliffordOp op) {
    SimOp s;
    s.cliff = op;
    return s;
  }
  static SimOp project(std::uint32_t q, bool outcome) {
    SimOp s;
    s.kind = Kind::Project;
    s.q = q;
    s.outcome = outcome;
    return s;
  }
};

// A gate lowered to a sum over ancilla preps followed by fixed glue:
//   gate = 2^{comp_s2e/2} * sum_i [apply terms[i] to the ancillae, then glue].
// Every prep's ops address absolute qubit indices; terms is never empty, and
// a deterministic gate is the one-term case with an empty prep.
struct LoweredGate {
  std::size_t source = 0;  // index into the original circuit's gate list
  std::vector<WeightedPrep> terms;
  std::vector<SimOp> glue;
  int comp_s2e = 0;
};

// Lowered circuit over num_data_qubits data qubits plus a shared ancilla
// pool at indices [num_data_qubits, total_qubits). Every gadget returns its
// ancillae to |0>, so the pool is sized by the widest gadget, not the sum.
struct GadgetizedCircuit {
  std::uint32_t num_data_qubits = 0;
  std::uint32_t total_qubits = 0;
  std::vector<LoweredGate> gates;
  std::vector<std::size_t> source_terms;  // decomposition size per original gate

  // Number of stabilizer runs a full strong simulation needs.
  double chi() const {
    double n = 1.0;
    for (const LoweredGate& g : gates) n *= static_cast<double>(g.terms.size());
    return n;
  }
};

GadgetizedCircuit gadgetize(const Circuit& c);

// Per-gate decomposition sizes, for inspecting how a circuit's cost splits.
struct RankReport {
  struct Entry {
    std::size_t gate = 0;
    std::size_t terms = 1;
  };
  std::vector<Entry> gates;
  double chi = 1.0;
  std::uint32_t total_qubits = 0;
};

RankReport rank_report(const Circuit& c);

}  // namespace hqsim

#endif
