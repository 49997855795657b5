#include "hqsim/dense.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace hqsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void apply_1q_where(DenseState& st, std::uint32_t q, const Unitary2& u,
                    const Pred& pred, const Circuit& c) {
  const std::size_t b = std::size_t{1} << q;
  for (std::size_t i = 0; i < st.amp.size(); ++i) {
    if (i & b) continue;
    if (!eval_pred_u64(pred, c, i)) continue;  // pred never reads qubit q
    const cdouble a0 = st.amp[i];
    const cdouble a1 = st.amp[i | b];
    st.amp[i] = u.u00 * a0 + u.u01 * a1;
    st.amp[i | b] = u.u10 * a0 + u.u11 * a1;
  }
}

Unitary2 hp_theta_h(double theta) {
  // H P(theta) H
  const cdouble e = std::polar(1.0, theta);
  Unitary2 u;
  u.u00 = (1.0 + e) * 0.5;
  u.u01 = (1.0 - e) * 0.5;
  u.u10 = u.u01;
  u.u11 = u.u00;
  return u;
}

std::uint64_t set_reg_bits(const Register& r, std::uint64_t basis, std::uint64_t value) {
  const std::uint32_t k = r.width();
  for (std::uint32_t j = 0; j < k; ++j) {
    const std::uint64_t bit = (value >> (k - 1 - j)) & 1u;
    const std::uint64_t mask = std::uint64_t{1} << r.qubits[j];
    basis = (basis & ~mask) | (bit ? mask : 0);
  }
  return basis;
}

void apply_query(DenseState& st, const GateIr& g, const Circuit& c) {
  const Register& x = *c.find_register(g.xreg);
  const Register& y = *c.find_register(g.yreg);
  std::vector<cdouble> out(st.amp.size(), cdouble{0.0, 0.0});
  const bool conditional = g.kind == GateIr::Kind::CondQuery;
  for (std::size_t i = 0; i < st.amp.size(); ++i) {
    if (st.amp[i] == cdouble{0.0, 0.0}) continue;
    const std::uint64_t yv = reg_value_u64(y, i);
    if (conditional && !eval_pred_u64(g.pred, c, i)) {
      if (yv == 0) out[i] += st.amp[i];
      continue;
    }
    const std::uint64_t xv = reg_value_u64(x, i);
    const std::uint64_t gv = query_fn_value(g.fn, xv, x.width());
    const bool flip = (std::popcount(yv & gv) & 1) != 0;
    const std::size_t dest = set_reg_bits(y, i, gv);
    out[dest] += flip ? -st.amp[i] : st.amp[i];
  }
  st.amp = std::move(out);
}

}  // namespace

DenseState dense_init(std::uint32_t n) {
  DenseState st;
  st.n = n;
  st.amp.assign(std::size_t{1} << n, cdouble{0.0, 0.0});
  st.amp[0] = 1.0;
  return st;
}

std::uint64_t query_fn_value(const QueryFn& fn, std::uint64_t x, std::uint32_t width) {
  if (fn.kind == QueryFn::Kind::Inc) {
    const std::uint64_t mask =
        width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
    return (x + 1) & mask;
  }
  return fn.map[x].second;  // total and sorted: entry i has first == i
}

void dense_apply_clifford(DenseState& st, const CliffordOp& op) {
  const std::size_t b0 = std::size_t{1} << op.q0;
  const std::size_t b1 = std::size_t{1} << op.q1;
  switch (op.kind) {
    case CliffordOp::Kind::H:
      for (std::size_t i = 0; i < st.amp.size(); ++i) {
        if (i & b0) continue;
        const cdouble a0 = st.amp[i];
        const cdouble a1 = st.amp[i | b0];
        st.amp[i] = (a0 + a1) * kInvSqrt2;
        st.amp[i | b0] = (a0 - a1) * kInvSqrt2;
      }
      break;
    case CliffordOp::Kind::S:
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if (i & b0) st.amp[i] *= cdouble(0.0, 1.0);
      break;
    case CliffordOp::Kind::Sdg:
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if (i & b0) st.amp[i] *= cdouble(0.0, -1.0);
      break;
    case CliffordOp::Kind::X:
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if (!(i & b0)) std::swap(st.amp[i], st.amp[i | b0]);
      break;
    case CliffordOp::Kind::Z:
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if (i & b0) st.amp[i] = -st.amp[i];
      break;
    case CliffordOp::Kind::CX:
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if ((i & b0) && !(i & b1)) std::swap(st.amp[i], st.amp[i | b1]);
      break;
    case CliffordOp::Kind::CZ:
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if ((i & b0) && (i & b1)) st.amp[i] = -st.amp[i];
      break;
  }
}

void dense_apply_gate(DenseState& st, const GateIr& g, const Circuit& c) {
  switch (g.kind) {
    case GateIr::Kind::Clifford:
      dense_apply_clifford(st, g.cliff);
      break;
    case GateIr::Kind::T: {
      const cdouble e{kInvSqrt2, kInvSqrt2};
      const std::size_t b = std::size_t{1} << g.q0;
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if (i & b) st.amp[i] *= e;
      break;
    }
    case GateIr::Kind::Rz: {
      const cdouble e = std::polar(1.0, g.theta);
      const std::size_t b = std::size_t{1} << g.q0;
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if (i & b) st.amp[i] *= e;
      break;
    }
    case GateIr::Kind::Mcx:
    case GateIr::Kind::Mcu: {
      std::size_t cm = 0;
      for (std::uint32_t q : g.controls) cm |= std::size_t{1} << q;
      const std::size_t b = std::size_t{1} << g.q0;
      const Unitary2 u = g.kind == GateIr::Kind::Mcx
                             ? Unitary2{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}}
                             : g.u;
      for (std::size_t i = 0; i < st.amp.size(); ++i) {
        if (i & b) continue;
        if ((i & cm) != cm) continue;
        const cdouble a0 = st.amp[i];
        const cdouble a1 = st.amp[i | b];
        st.amp[i] = u.u00 * a0 + u.u01 * a1;
        st.amp[i | b] = u.u10 * a0 + u.u11 * a1;
      }
      break;
    }
    case GateIr::Kind::OracleRz: {
      const cdouble e = std::polar(1.0, g.theta);
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if (eval_pred_u64(g.pred, c, i)) st.amp[i] *= e;
      break;
    }
    case GateIr::Kind::OracleX:
      apply_1q_where(st, g.q0, Unitary2{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}}, g.pred, c);
      break;
    case GateIr::Kind::OracleRx:
      apply_1q_where(st, g.q0, hp_theta_h(g.theta), g.pred, c);
      break;
    case GateIr::Kind::OracleU:
      apply_1q_where(st, g.q0, g.u, g.pred, c);
      break;
    case GateIr::Kind::Query:
    case GateIr::Kind::CondQuery:
      apply_query(st, g, c);
      break;
    case GateIr::Kind::Postselect: {
      const std::size_t b = std::size_t{1} << g.q0;
      for (std::size_t i = 0; i < st.amp.size(); ++i)
        if (((i & b) != 0) != g.outcome) st.amp[i] = 0.0;
      break;
    }
  }
}

DenseState dense_simulate(const Circuit& c, std::uint32_t max_qubits) {
  if (c.num_qubits > max_qubits)
    throw std::invalid_argument("circuit needs " + std::to_string(c.num_qubits) +
                                " qubits, dense limit is " + std::to_string(max_qubits));
  DenseState st = dense_init(c.num_qubits);
  for (const GateIr& g : c.gates) dense_apply_gate(st, g, c);
  return st;
}

}  // namespace hqsim
