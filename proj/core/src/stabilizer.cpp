#include "hqsim/stabilizer.hpp"

#include <cassert>
#include <cmath>

namespace hqsim {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

cdouble i_pow(std::uint8_t e) {
  switch (e & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

double pow_sqrt2(int e) {
  if ((e & 1) == 0) return std::ldexp(1.0, e / 2);
  return std::ldexp(kSqrt2, (e - 1) / 2);  // e - 1 is even, division is exact
}

ScaledStabilizerState::ScaledStabilizerState(std::uint32_t n)
    : n_(n),
      r_(0),
      rows_(n, BitVec(n + 1)),
      c_(n),
      L_(n + 1, 0),
      Q_(n + 1, BitVec(n + 1)) {}

ScaledStabilizerState init_state(std::uint32_t num_qubits) {
  return ScaledStabilizerState(num_qubits);
}

void ScaledStabilizerState::make_zero() {
  zero_ = true;
  mant_ = {0.0, 0.0};
  s2e_ = 0;
}

void ScaledStabilizerState::normalize_mant() {
  // Unit-phase mantissas live in {+-1, +-i, +-1 +- i}; one halving suffices.
  while (std::abs(mant_.real()) >= 2.0 || std::abs(mant_.imag()) >= 2.0) {
    mant_ *= 0.5;
    s2e_ += 2;
  }
}

void ScaledStabilizerState::mul_omega() {
  mant_ *= cdouble(1.0, 1.0);
  s2e_ -= 1;
  normalize_mant();
}

void ScaledStabilizerState::mul_omega_bar() {
  mant_ *= cdouble(1.0, -1.0);
  s2e_ -= 1;
  normalize_mant();
}

void ScaledStabilizerState::apply_clifford(const CliffordOp& op) {
  switch (op.kind) {
    case CliffordOp::Kind::H: apply_h(op.q0); break;
    case CliffordOp::Kind::S: apply_s(op.q0); break;
    case CliffordOp::Kind::Sdg: apply_sdg(op.q0); break;
    case CliffordOp::Kind::X: apply_x(op.q0); break;
    case CliffordOp::Kind::Z: apply_z(op.q0); break;
    case CliffordOp::Kind::CX: apply_cx(op.q0, op.q1); break;
    case CliffordOp::Kind::CZ: apply_cz(op.q0, op.q1); break;
  }
}

void run_clifford_fragment(ScaledStabilizerState& state, std::span<const CliffordOp> ops) {
  for (const CliffordOp& op : ops) {
    if (state.is_zero()) return;
    state.apply_clifford(op);
  }
}

void ScaledStabilizerState::apply_x(std::uint32_t q) {
  if (zero_) return;
  c_.flip(q);
}

void ScaledStabilizerState::apply_z(std::uint32_t q) {
  if (zero_) return;
  rows_[q].for_each_set([&](std::size_t k) { L_[k] = (L_[k] + 2) & 3; });
  if (c_.get(q)) mant_ = -mant_;
}

void ScaledStabilizerState::apply_s(std::uint32_t q) {
  if (zero_) return;
  const BitVec& row = rows_[q];
  const bool cq = c_.get(q);
  const std::uint8_t add = cq ? 3 : 1;  // 1 + 2 c_q
  row.for_each_set([&](std::size_t k) { L_[k] = (L_[k] + add) & 3; });
  // Pairwise cross terms among the row's variables.
  row.for_each_set([&](std::size_t k) {
    Q_[k].xor_in(row);
    Q_[k].flip(k);  // keep the diagonal clear
  });
  if (cq) mant_ *= cdouble(0.0, 1.0);
}

void ScaledStabilizerState::apply_sdg(std::uint32_t q) {
  if (zero_) return;
  const BitVec& row = rows_[q];
  const bool cq = c_.get(q);
  const std::uint8_t add = cq ? 1 : 3;  // 3 + 2 c_q
  row.for_each_set([&](std::size_t k) { L_[k] = (L_[k] + add) & 3; });
  row.for_each_set([&](std::size_t k) {
    Q_[k].xor_in(row);
    Q_[k].flip(k);
  });
  if (cq) mant_ *= cdouble(0.0, -1.0);
}

void ScaledStabilizerState::apply_cx(std::uint32_t c, std::uint32_t t) {
  if (zero_) return;
  rows_[t].xor_in(rows_[c]);
  if (c_.get(c)) c_.flip(t);
}

void ScaledStabilizerState::apply_cz(std::uint32_t a, std::uint32_t b) {
  if (zero_) return;
  const BitVec& ra = rows_[a];
  const BitVec& rb = rows_[b];
  const bool ca = c_.get(a);
  const bool cb = c_.get(b);
  if (ca) rb.for_each_set([&](std::size_t k) { L_[k] = (L_[k] + 2) & 3; });
  if (cb) ra.for_each_set([&](std::size_t k) { L_[k] = (L_[k] + 2) & 3; });
  BitVec both = ra;
  both.and_in(rb);
  both.for_each_set([&](std::size_t k) { L_[k] = (L_[k] + 2) & 3; });
  // Cross terms u_p u_q with p from row a and q from row b. Pairs lying in
  // both rows cancel mod 2, which the double xor below reproduces.
  ra.for_each_set([&](std::size_t k) {
    Q_[k].xor_in(rb);
    if (rb.get(k)) Q_[k].flip(k);
  });
  rb.for_each_set([&](std::size_t k) {
    Q_[k].xor_in(ra);
    if (ra.get(k)) Q_[k].flip(k);
  });
  if (ca && cb) mant_ = -mant_;
}

void ScaledStabilizerState::substitute_xor(std::size_t q, std::size_t v) {
  // Replace u_q by u_q xor u_v everywhere.
  for (std::uint32_t i = 0; i < n_; ++i) {
    if (rows_[i].get(q)) rows_[i].flip(v);
  }
  const bool qv = Q_[q].get(v);
  L_[v] = static_cast<std::uint8_t>((L_[v] + L_[q] + (qv ? 2 : 0)) & 3);
  BitVec cross = Q_[q];
  cross.set(v, false);
  cross.set(q, false);
  Q_[v].xor_in(cross);
  cross.for_each_set([&](std::size_t k) { Q_[k].flip(v); });
  if (L_[q] & 1) {
    Q_[q].flip(v);
    Q_[v].flip(q);
  }
}

void ScaledStabilizerState::remove_var(std::size_t p) {
  const std::size_t last = r_ - 1;
  for (std::uint32_t i = 0; i < n_; ++i) {
    rows_[i].set(p, rows_[i].get(last));
    rows_[i].set(last, false);
  }
  L_[p] = L_[last];
  L_[last] = 0;
  if (p != last) Q_[p] = Q_[last];
  for (std::size_t k = 0; k < r_; ++k) {
    Q_[k].set(p, Q_[k].get(last));
    Q_[k].set(last, false);
  }
  Q_[last].clear();
  r_ = static_cast<std::uint32_t>(last);
}

void ScaledStabilizerState::fix_var(std::size_t p, bool a) {
  if (a) {
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (rows_[i].get(p)) c_.flip(i);
    }
    mant_ *= i_pow(L_[p]);
    Q_[p].for_each_set([&](std::size_t k) { L_[k] = (L_[k] + 2) & 3; });
  }
  // Detach p's couplings before the slot is reused.
  Q_[p].for_each_set([&](std::size_t k) { Q_[k].set(p, false); });
  Q_[p].clear();
  remove_var(p);
}

void ScaledStabilizerState::impose_constraint(BitVec lam, bool a) {
  if (!lam.any()) {
    if (a) make_zero();
    return;
  }
  const std::size_t p = lam.lowest();
  lam.set(p, false);
  lam.for_each_set([&](std::size_t k) { substitute_xor(p, k); });
  fix_var(p, a);
  s2e_ -= 1;
}

void ScaledStabilizerState::drop_phase_only_var(std::size_t p) {
  const std::uint8_t lp = L_[p];
  BitVec lam = Q_[p];
  lam.for_each_set([&](std::size_t k) { Q_[k].set(p, false); });
  Q_[p].clear();
  if (!lam.any()) {
    // sum_{u_p} i^{lp u_p} = 2, 1+i, 0, 1-i for lp = 0..3.
    switch (lp) {
      case 0: s2e_ += 1; break;
      case 1: mul_omega(); break;
      case 2: make_zero(); return;
      default: mul_omega_bar(); break;
    }
    remove_var(p);
    return;
  }
  if ((lp & 1) == 0) {
    // sum_u i^{2 a u} = 0 or 2: folding p leaves a parity constraint.
    s2e_ += 1;
    const std::size_t old_last = r_ - 1;
    remove_var(p);
    if (p != old_last && lam.get(old_last)) {
      lam.set(old_last, false);
      lam.set(p, true);
    }
    impose_constraint(lam, lp == 2);
    return;
  }
  // Odd linear part: 1 + i^{lp} i^{2 m} = sqrt(2) exp(+-i pi/4) i^{-+ m},
  // with m the parity carried by the couplings.
  if (lp == 1) mul_omega(); else mul_omega_bar();
  const std::uint8_t t = (lp == 1) ? 3 : 1;
  lam.for_each_set([&](std::size_t k) { L_[k] = (L_[k] + t) & 3; });
  lam.for_each_set([&](std::size_t k) {
    Q_[k].xor_in(lam);
    Q_[k].flip(k);
  });
  remove_var(p);
}

void ScaledStabilizerState::apply_h(std::uint32_t q) {
  if (zero_) return;
  BitVec rho = rows_[q];
  const bool gamma = c_.get(q);
  const std::size_t w = r_;
  rows_[q].clear();
  rows_[q].set(w, true);
  c_.set(q, false);
  L_[w] = gamma ? 2 : 0;
  rho.for_each_set([&](std::size_t p) {
    Q_[w].set(p, true);
    Q_[p].set(w, true);
  });
  r_ += 1;
  if (!rho.any()) return;

  // Zeroing row q may have dropped the column rank by one. Look for a
  // dependency among the old columns; the new column w cannot take part.
  struct Pivot {
    BitVec vec;    // n bits
    BitVec combo;  // which original columns sum to vec
    std::size_t bit;
  };
  std::vector<Pivot> pivots;
  pivots.reserve(r_ - 1);
  std::vector<BitVec> cols(r_ - 1, BitVec(n_));
  for (std::uint32_t i = 0; i < n_; ++i) {
    rows_[i].for_each_set([&](std::size_t p) {
      if (p < r_ - 1) cols[p].set(i, true);
    });
  }
  BitVec dep(r_);
  bool found = false;
  for (std::size_t p = 0; p < r_ - 1 && !found; ++p) {
    BitVec v = cols[p];
    BitVec combo(r_);
    combo.set(p, true);
    for (const Pivot& piv : pivots) {
      if (v.get(piv.bit)) {
        v.xor_in(piv.vec);
        combo.xor_in(piv.combo);
      }
    }
    if (!v.any()) {
      dep = combo;
      found = true;
    } else {
      pivots.push_back({std::move(v), std::move(combo), 0});
      pivots.back().bit = pivots.back().vec.lowest();
    }
  }
  if (!found) return;

  const std::size_t pstar = dep.lowest();
  dep.set(pstar, false);
  dep.for_each_set([&](std::size_t k) { substitute_xor(k, pstar); });
  drop_phase_only_var(pstar);
}

void ScaledStabilizerState::project(std::uint32_t q, bool outcome) {
  if (zero_) return;
  const BitVec& row = rows_[q];
  if (!row.any()) {
    if (c_.get(q) != outcome) make_zero();
    return;
  }
  BitVec lam = row;
  impose_constraint(std::move(lam), outcome != c_.get(q));
}

cdouble ScaledStabilizerState::amplitude(const BitVec& x) const {
  if (zero_) return {0.0, 0.0};
  BitVec target = x;
  target.xor_in(c_);
  if (r_ == 0) {
    if (target.any()) return {0.0, 0.0};
    return mant_ * pow_sqrt2(s2e_);
  }
  std::vector<BitVec> cols(r_, BitVec(n_));
  for (std::uint32_t i = 0; i < n_; ++i) {
    rows_[i].for_each_set([&](std::size_t p) { cols[p].set(i, true); });
  }
  struct Pivot {
    BitVec vec;
    BitVec combo;
    std::size_t bit;
  };
  std::vector<Pivot> pivots;
  pivots.reserve(r_);
  for (std::size_t p = 0; p < r_; ++p) {
    BitVec v = cols[p];
    BitVec combo(r_);
    combo.set(p, true);
    for (const Pivot& piv : pivots) {
      if (v.get(piv.bit)) {
        v.xor_in(piv.vec);
        combo.xor_in(piv.combo);
      }
    }
    // Full column rank: every column introduces a pivot.
    pivots.push_back({std::move(v), std::move(combo), 0});
    pivots.back().bit = pivots.back().vec.lowest();
  }
  BitVec u(r_);
  for (const Pivot& piv : pivots) {
    if (target.get(piv.bit)) {
      target.xor_in(piv.vec);
      u.xor_in(piv.combo);
    }
  }
  if (target.any()) return {0.0, 0.0};
  std::uint32_t phi = 0;
  std::size_t cross = 0;
  u.for_each_set([&](std::size_t p) {
    phi += L_[p];
    cross += Q_[p].count_and(u);
  });
  phi += static_cast<std::uint32_t>(cross);  // cross counts each pair twice
  return mant_ * pow_sqrt2(s2e_ - static_cast<int>(r_)) * i_pow(static_cast<std::uint8_t>(phi & 3));
}

cdouble ScaledStabilizerState::amplitude_u64(std::uint64_t x) const {
  assert(n_ <= 64);
  BitVec v(n_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    if ((x >> i) & 1) v.set(i, true);
  }
  return amplitude(v);
}

}  // namespace hqsim
