#ifndef HQSIM_DECOMP_HPP
#define HQSIM_DECOMP_HPP

#include <cstdint>
#include <vector>

#include "hqsim/circuit.hpp"

namespace hqsim {

// One decomposition term: a Clifford prep applied to |0...0> on a block of
// slot qubits (indices are block-local), scaled by coeff * 2^{s2e/2}.
struct WeightedPrep {
  std::vector<CliffordOp> ops;
  cdouble coeff{1.0, 0.0};
  int s2e = 0;
};

// Predicate with registers flattened to qubit lists, so decompositions can
// be built for synthesized operands (e.g. a control set) as well as for
// parsed registers.
struct RPred {
  Pred::Kind kind = Pred::Kind::True;
  std::vector<std::uint32_t> qa, qb;  // operand qubits, most significant first
  std::uint64_t value = 0;            // EqConst
  std::vector<std::uint64_t> rows;    // Table accepted values over qa
  std::vector<RPred> children;
};

RPred resolve_pred(const Pred& p, const Circuit& c);

// Slot layout of a predicate: one slot per operand bit, claimed depth-first;
// every atom occurrence gets fresh slots, so repeated registers appear once
// per use. The entry is the data qubit the slot mirrors.
std::vector<std::uint32_t> pred_slot_layout(const RPred& p);

// Both tracks of the sum-over-terms form of the indicator:
//   sum_i pos[i] = sum_{z : phi(z)} |z>     (over the slot block)
//   sum_i neg[i] = sum_{z : !phi(z)} |z>
// with phi evaluated treating every slot as a free variable.
struct EffectualPair {
  std::vector<WeightedPrep> pos, neg;
  std::uint32_t width = 0;
};

EffectualPair build_effectual(const RPred& p);

// Number of accepted assignments over the slot block, from the term list.
double model_count(const std::vector<WeightedPrep>& terms, std::uint32_t width);

// Magic states for gate injection, as unit-norm-state term sums. Terms whose
// total weight is below 1e-12 are dropped.
//
// Diagonal phase on the predicate block: 2^{-w/2} sum_z e^{i theta [phi(z)]} |z>.
std::vector<WeightedPrep> build_magic_diag(const RPred& p, double theta);

// Same with one extra slot (last) that also conditions the phase:
// 2^{-(w+1)/2} sum_{z,t} e^{i theta [phi(z) and t]} |z,t>.
std::vector<WeightedPrep> build_magic_cond_rz(const RPred& p, double theta);

// Conditional Choi state on (pred block, t', t''):
// 2^{-(w+1)/2} [ sum_{z:!phi} sum_c |z,c,c> + sum_{z:phi} sum_{c,d} U_{dc} |z,c,d> ].
std::vector<WeightedPrep> build_magic_teleport(const RPred& p, const Unitary2& u);

// Single-qubit diagonal magic |0> + e^{i theta}|1> over one slot.
std::vector<WeightedPrep> build_magic_phase_single(double theta);

}  // namespace hqsim

#endif
