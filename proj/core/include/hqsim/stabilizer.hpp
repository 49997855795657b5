#ifndef HQSIM_STABILIZER_HPP
#define HQSIM_STABILIZER_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hqsim/bitvec.hpp"

namespace hqsim {

using cdouble = std::complex<double>;

// 2^{e/2} with a single rounding.
double pow_sqrt2(int e);

struct CliffordOp {
  enum class Kind : std::uint8_t { H, S, Sdg, X, Z, CX, CZ };
  Kind kind;
  std::uint32_t q0 = 0;
  std::uint32_t q1 = 0;  // second operand of CX (target) and CZ

  static CliffordOp h(std::uint32_t q) { return {Kind::H, q, 0}; }
  static CliffordOp s(std::uint32_t q) { return {Kind::S, q, 0}; }
  static CliffordOp sdg(std::uint32_t q) { return {Kind::Sdg, q, 0}; }
  static CliffordOp x(std::uint32_t q) { return {Kind::X, q, 0}; }
  static CliffordOp z(std::uint32_t q) { return {Kind::Z, q, 0}; }
  static CliffordOp cx(std::uint32_t c, std::uint32_t t) { return {Kind::CX, c, t}; }
  static CliffordOp cz(std::uint32_t a, std::uint32_t b) { return {Kind::CZ, a, b}; }

  bool operator==(const CliffordOp&) const = default;
};

// Phase-exact stabilizer state, a complex scale times a unit-norm core
//
//   core = 2^{-r/2} sum_{u in F_2^r} i^{phi(u)} |B u xor c> ,
//   phi(u) = sum_p L_p u_p + 2 sum_{p<q} Q_{pq} u_p u_q   (mod 4),
//
// where B is an n x r binary matrix of full column rank. Clifford gates
// preserve |scale| exactly; project() multiplies scale by exactly 2^{-1/2}
// per newly constrained qubit, or annihilates the state (scale becomes
// exactly 0 and the zero flag sticks). States are plain values: copy to
// hand a private instance to another worker.
class ScaledStabilizerState {
public:
  ScaledStabilizerState() = default;
  explicit ScaledStabilizerState(std::uint32_t n);

  std::uint32_t num_qubits() const { return n_; }
  cdouble scale() const { return mant_ * pow_sqrt2(s2e_); }
  bool is_zero() const { return zero_; }
  std::uint32_t rank() const { return r_; }

  void apply_clifford(const CliffordOp& op);
  void apply_h(std::uint32_t q);
  void apply_s(std::uint32_t q);
  void apply_sdg(std::uint32_t q);
  void apply_x(std::uint32_t q);
  void apply_z(std::uint32_t q);
  void apply_cx(std::uint32_t c, std::uint32_t t);
  void apply_cz(std::uint32_t a, std::uint32_t b);

  // Unnormalized projection of qubit q onto |outcome>.
  void project(std::uint32_t q, bool outcome);

  // <x|state>, including scale. x holds one bit per qubit.
  cdouble amplitude(const BitVec& x) const;
  cdouble amplitude_u64(std::uint64_t x) const;  // bit i of x -> qubit i; n <= 64

private:
  void make_zero();
  void normalize_mant();
  void mul_omega();      // exp(+i pi/4)
  void mul_omega_bar();  // exp(-i pi/4)
  void substitute_xor(std::size_t q, std::size_t v);  // u_q := u_q xor u_v
  void fix_var(std::size_t p, bool a);                // u_p := a, then remove p
  void remove_var(std::size_t p);                     // rename last var to slot p
  void drop_phase_only_var(std::size_t p);            // pre: column p is zero
  void impose_constraint(BitVec lam, bool a);         // restrict to lam(u) = a

  std::uint32_t n_ = 0;
  std::uint32_t r_ = 0;
  std::vector<BitVec> rows_;   // n rows over variable columns (capacity n+1)
  BitVec c_;                   // n bits
  std::vector<std::uint8_t> L_;  // mod 4, capacity n+1
  std::vector<BitVec> Q_;        // symmetric, zero diagonal, capacity n+1
  // scale = mant * 2^{s2e/2}; mant stays a (dyadically rescaled) Gaussian
  // integer, so Clifford evolution rounds only once, at readout.
  cdouble mant_ = {1.0, 0.0};
  int s2e_ = 0;
  bool zero_ = false;
};

ScaledStabilizerState init_state(std::uint32_t num_qubits);
void run_clifford_fragment(ScaledStabilizerState& state, std::span<const CliffordOp> ops);

}  // namespace hqsim

#endif
