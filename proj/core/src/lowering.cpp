#include "hqsim/lowering.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace hqsim {

namespace {

constexpr double kPi = std::numbers::pi;

bool theta_is_trivial(double theta) {
  const double twopi = 2.0 * kPi;
  double m = std::fmod(theta, twopi);
  if (m < 0) m += twopi;
  return m <= 1e-12 || twopi - m <= 1e-12;
}

bool is_identity(const Unitary2& u) {
  return std::abs(u.u00 - 1.0) <= 1e-12 && std::abs(u.u11 - 1.0) <= 1e-12 &&
         std::abs(u.u01) <= 1e-12 && std::abs(u.u10) <= 1e-12;
}

class Lowerer {
 public:
  explicit Lowerer(const Circuit& c) : c_(c) {
    out_.num_data_qubits = c.num_qubits;
    out_.source_terms.assign(c.gates.size(), 1);
  }

  GadgetizedCircuit run() {
    for (std::size_t i = 0; i < c_.gates.size(); ++i) lower(i, c_.gates[i]);
    out_.total_qubits = c_.num_qubits + pool_;
    return std::move(out_);
  }

 private:
  std::uint32_t anc(std::uint32_t slot) const { return c_.num_qubits + slot; }

  void claim_pool(std::uint32_t need) { pool_ = std::max(pool_, need); }

  LoweredGate& trivial(std::size_t src) {
    const bool mergeable = !out_.gates.empty() && out_.gates.back().terms.size() == 1 &&
                           out_.gates.back().terms[0].ops.empty();
    if (!mergeable) {
      LoweredGate g;
      g.source = src;
      g.terms.push_back(WeightedPrep{});
      out_.gates.push_back(std::move(g));
    }
    return out_.gates.back();
  }

  void emit_clifford(std::size_t src, CliffordOp op) {
    trivial(src).glue.push_back(SimOp::clifford(op));
  }

  void push_gadget(std::size_t src, std::vector<WeightedPrep> terms, std::vector<SimOp> glue,
                   int comp) {
    LoweredGate g;
    g.source = src;
    g.terms = std::move(terms);
    g.glue = std::move(glue);
    g.comp_s2e = comp;
    out_.source_terms[src] *= g.terms.size();
    out_.gates.push_back(std::move(g));
  }

  static std::vector<WeightedPrep> offset_terms(std::vector<WeightedPrep> terms,
                                                std::uint32_t base) {
    for (WeightedPrep& t : terms)
      for (CliffordOp& op : t.ops) {
        op.q0 += base;
        if (op.kind == CliffordOp::Kind::CX || op.kind == CliffordOp::Kind::CZ) op.q1 += base;
      }
    return terms;
  }

  // Entangle each slot with the data qubit it mirrors, then force agreement.
  void glue_fan(std::vector<SimOp>& glue, const std::vector<std::uint32_t>& layout,
                std::uint32_t slot_base) {
    for (std::size_t j = 0; j < layout.size(); ++j) {
      const std::uint32_t a = anc(slot_base + static_cast<std::uint32_t>(j));
      glue.push_back(SimOp::clifford(CliffordOp::cx(layout[j], a)));
      glue.push_back(SimOp::project(a, false));
    }
  }

  void phase_gadget(std::size_t src, std::uint32_t q, double theta) {
    auto terms = offset_terms(build_magic_phase_single(theta), anc(0));
    std::vector<SimOp> glue;
    glue.push_back(SimOp::clifford(CliffordOp::cx(q, anc(0))));
    glue.push_back(SimOp::project(anc(0), false));
    claim_pool(1);
    push_gadget(src, std::move(terms), std::move(glue), 1);
  }

  void diag_gadget(std::size_t src, const RPred& r, double theta) {
    if (r.kind == Pred::Kind::False) return;
    if (r.kind == Pred::Kind::True) {
      trivial(src).terms[0].coeff *= std::polar(1.0, theta);
      return;
    }
    const auto layout = pred_slot_layout(r);
    const auto w = static_cast<std::uint32_t>(layout.size());
    auto terms = offset_terms(build_magic_diag(r, theta), anc(0));
    std::vector<SimOp> glue;
    glue_fan(glue, layout, 0);
    claim_pool(w);
    push_gadget(src, std::move(terms), std::move(glue), static_cast<int>(w));
  }

  // Pred-controlled H P(theta) H on target; theta = pi gives the controlled X.
  void cond_apply(std::size_t src, const RPred& r, std::uint32_t target, double theta,
                  bool is_x) {
    if (r.kind == Pred::Kind::False) return;
    if (r.kind == Pred::Kind::True) {
      if (is_x) {
        emit_clifford(src, CliffordOp::x(target));
      } else {
        emit_clifford(src, CliffordOp::h(target));
        phase_gadget(src, target, theta);
        emit_clifford(src, CliffordOp::h(target));
      }
      return;
    }
    const auto layout = pred_slot_layout(r);
    const auto w = static_cast<std::uint32_t>(layout.size());
    auto terms = offset_terms(build_magic_cond_rz(r, theta), anc(0));
    std::vector<SimOp> glue;
    glue.push_back(SimOp::clifford(CliffordOp::h(target)));
    glue_fan(glue, layout, 0);
    glue.push_back(SimOp::clifford(CliffordOp::cx(target, anc(w))));
    glue.push_back(SimOp::project(anc(w), false));
    glue.push_back(SimOp::clifford(CliffordOp::h(target)));
    claim_pool(w + 1);
    push_gadget(src, std::move(terms), std::move(glue), static_cast<int>(w + 1));
  }

  // Pred-controlled single-qubit unitary by gate teleportation: the magic
  // state absorbs the target through a Bell-type measurement and hands back
  // the (conditionally) rotated qubit on the last slot.
  void teleport_gadget(std::size_t src, const RPred& r, std::uint32_t target,
                       const Unitary2& u) {
    if (r.kind == Pred::Kind::False) return;
    const auto layout = pred_slot_layout(r);
    const auto w = static_cast<std::uint32_t>(layout.size());
    auto terms = offset_terms(build_magic_teleport(r, u), anc(0));
    std::vector<SimOp> glue;
    glue_fan(glue, layout, 0);
    glue.push_back(SimOp::clifford(CliffordOp::cx(target, anc(w))));
    glue.push_back(SimOp::project(anc(w), false));
    glue.push_back(SimOp::clifford(CliffordOp::h(target)));
    glue.push_back(SimOp::project(target, false));
    // target sits in |0> now, so two CX complete the swap with the out slot
    glue.push_back(SimOp::clifford(CliffordOp::cx(anc(w + 1), target)));
    glue.push_back(SimOp::clifford(CliffordOp::cx(target, anc(w + 1))));
    claim_pool(w + 2);
    push_gadget(src, std::move(terms), std::move(glue), static_cast<int>(w + 2));
  }

  // Computes psi of the data into the pool's flag qubit, projects the flag
  // onto |sel>, and leaves it back in |0>. pre_glue runs before everything
  // else that touches the data.
  void flag_select(std::size_t src, const RPred& psi, std::vector<SimOp> pre_glue, bool sel,
                   int extra_comp) {
    const auto layout = pred_slot_layout(psi);
    const auto w = static_cast<std::uint32_t>(layout.size());
    const std::uint32_t f = anc(0);
    auto terms = offset_terms(build_magic_cond_rz(psi, kPi), anc(1));
    std::vector<SimOp> glue = std::move(pre_glue);
    glue.push_back(SimOp::clifford(CliffordOp::h(f)));
    glue_fan(glue, layout, 1);
    glue.push_back(SimOp::clifford(CliffordOp::cx(f, anc(1 + w))));
    glue.push_back(SimOp::project(anc(1 + w), false));
    glue.push_back(SimOp::clifford(CliffordOp::h(f)));
    glue.push_back(SimOp::project(f, sel));
    if (sel) glue.push_back(SimOp::clifford(CliffordOp::x(f)));
    claim_pool(w + 2);
    push_gadget(src, std::move(terms), std::move(glue), static_cast<int>(w + 1) + extra_comp);
  }

  RPred relation_pred(const GateIr& g) const {
    const Register& xr = *c_.find_register(g.xreg);
    const Register& yr = *c_.find_register(g.yreg);
    RPred r;
    if (g.fn.kind == QueryFn::Kind::Inc) {
      r.kind = Pred::Kind::Inc;
      r.qa = xr.qubits;
      r.qb = yr.qubits;
    } else {
      r.kind = Pred::Kind::Table;
      r.qa = xr.qubits;
      r.qa.insert(r.qa.end(), yr.qubits.begin(), yr.qubits.end());
      for (const auto& [x, y] : g.fn.map)
        r.rows.push_back((x << yr.qubits.size()) | y);
    }
    return r;
  }

  static RPred all_ones(const std::vector<std::uint32_t>& controls) {
    RPred r;
    r.kind = Pred::Kind::EqConst;
    r.qa = controls;
    r.value = controls.size() >= 64 ? ~std::uint64_t{0}
                                    : (std::uint64_t{1} << controls.size()) - 1;
    return r;
  }

  // |x>|y> -> (-1)^{y.g(x)} |x>|g(x)>: spread y over the X basis, then keep
  // exactly the branch satisfying the graph relation y' = g(x).
  void lower_query(std::size_t src, const GateIr& g) {
    const Register& yr = *c_.find_register(g.yreg);
    std::vector<SimOp> pre;
    for (std::uint32_t q : yr.qubits) pre.push_back(SimOp::clifford(CliffordOp::h(q)));
    flag_select(src, relation_pred(g), std::move(pre),
                /*sel=*/true, static_cast<int>(yr.qubits.size()));
  }

  void lower_cond_query(std::size_t src, const GateIr& g) {
    RPred phi = resolve_pred(g.pred, c_);
    if (phi.kind == Pred::Kind::True) {
      lower_query(src, g);
      return;
    }
    const Register& yr = *c_.find_register(g.yreg);
    RPred y0;
    y0.kind = Pred::Kind::EqConst;
    y0.qa = yr.qubits;
    y0.value = 0;
    RPred not_phi;
    not_phi.kind = Pred::Kind::Not;
    not_phi.children.push_back(phi);

    // First drop the amplitude that the gate discards: pred false and y != 0.
    RPred not_y0;
    not_y0.kind = Pred::Kind::Not;
    not_y0.children.push_back(y0);
    RPred bad;
    bad.kind = Pred::Kind::And;
    bad.children = {not_phi, not_y0};
    flag_select(src, bad, {}, /*sel=*/false, 0);

    // Then run the query on the pred branch while freezing y at 0 elsewhere.
    RPred on;
    on.kind = Pred::Kind::And;
    on.children = {phi, relation_pred(g)};
    RPred off;
    off.kind = Pred::Kind::And;
    off.children = {not_phi, y0};
    RPred keep;
    keep.kind = Pred::Kind::Or;
    keep.children = {std::move(on), std::move(off)};
    std::vector<SimOp> pre;
    for (std::uint32_t q : yr.qubits) pre.push_back(SimOp::clifford(CliffordOp::h(q)));
    flag_select(src, keep, std::move(pre), /*sel=*/true,
                static_cast<int>(yr.qubits.size()));
  }

  void lower(std::size_t i, const GateIr& g) {
    switch (g.kind) {
      case GateIr::Kind::Clifford:
        emit_clifford(i, g.cliff);
        break;
      case GateIr::Kind::Postselect:
        trivial(i).glue.push_back(SimOp::project(g.q0, g.outcome));
        break;
      case GateIr::Kind::T:
        phase_gadget(i, g.q0, kPi / 4);
        break;
      case GateIr::Kind::Rz:
        if (!theta_is_trivial(g.theta)) phase_gadget(i, g.q0, g.theta);
        break;
      case GateIr::Kind::OracleRz:
        if (!theta_is_trivial(g.theta)) diag_gadget(i, resolve_pred(g.pred, c_), g.theta);
        break;
      case GateIr::Kind::OracleX:
        cond_apply(i, resolve_pred(g.pred, c_), g.q0, kPi, /*is_x=*/true);
        break;
      case GateIr::Kind::OracleRx:
        if (!theta_is_trivial(g.theta))
          cond_apply(i, resolve_pred(g.pred, c_), g.q0, g.theta, /*is_x=*/false);
        break;
      case GateIr::Kind::Mcx:
        cond_apply(i, all_ones(g.controls), g.q0, kPi, /*is_x=*/true);
        break;
      case GateIr::Kind::Mcu:
        if (!is_identity(g.u)) teleport_gadget(i, all_ones(g.controls), g.q0, g.u);
        break;
      case GateIr::Kind::OracleU:
        if (!is_identity(g.u)) teleport_gadget(i, resolve_pred(g.pred, c_), g.q0, g.u);
        break;
      case GateIr::Kind::Query:
        lower_query(i, g);
        break;
      case GateIr::Kind::CondQuery:
        lower_cond_query(i, g);
        break;
    }
  }

  const Circuit& c_;
  GadgetizedCircuit out_;
  std::uint32_t pool_ = 0;
};

}  // namespace

GadgetizedCircuit gadgetize(const Circuit& c) { return Lowerer(c).run(); }

RankReport rank_report(const Circuit& c) {
  GadgetizedCircuit g = gadgetize(c);
  RankReport r;
  r.total_qubits = g.total_qubits;
  r.chi = g.chi();
  r.gates.reserve(g.source_terms.size());
  for (std::size_t i = 0; i < g.source_terms.size(); ++i)
    r.gates.push_back(RankReport::Entry{i, g.source_terms[i]});
  return r;
}

}  // namespace hqsim
