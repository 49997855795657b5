#include "hqsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

namespace hqsim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Pred Pred::eq_vars(std::string a, std::string b) {
  Pred p;
  p.kind = Kind::EqVars;
  p.rega = std::move(a);
  p.regb = std::move(b);
  return p;
}

Pred Pred::eq_const(std::string a, std::uint64_t v) {
  Pred p;
  p.kind = Kind::EqConst;
  p.rega = std::move(a);
  p.value = v;
  return p;
}

Pred Pred::gt(std::string a, std::string b) {
  Pred p;
  p.kind = Kind::Gt;
  p.rega = std::move(a);
  p.regb = std::move(b);
  return p;
}

Pred Pred::inc(std::string a, std::string b) {
  Pred p;
  p.kind = Kind::Inc;
  p.rega = std::move(a);
  p.regb = std::move(b);
  return p;
}

Pred Pred::table(std::vector<std::string> regs, std::string file,
                 std::vector<std::uint64_t> rows) {
  Pred p;
  p.kind = Kind::Table;
  p.regs = std::move(regs);
  p.file = std::move(file);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  p.rows = std::move(rows);
  return p;
}

Pred Pred::not_of(Pred c) {
  Pred p;
  p.kind = Kind::Not;
  p.children.push_back(std::move(c));
  return p;
}

Pred Pred::and_of(std::vector<Pred> ps) {
  Pred p;
  p.kind = Kind::And;
  p.children = std::move(ps);
  return p;
}

Pred Pred::or_of(std::vector<Pred> ps) {
  Pred p;
  p.kind = Kind::Or;
  p.children = std::move(ps);
  return p;
}

QueryFn QueryFn::make_table(std::string file,
                            std::vector<std::pair<std::uint64_t, std::uint64_t>> map) {
  QueryFn f;
  f.kind = Kind::Table;
  f.file = std::move(file);
  std::sort(map.begin(), map.end());
  f.map = std::move(map);
  return f;
}

GateIr GateIr::clifford(CliffordOp op) {
  GateIr g;
  g.kind = Kind::Clifford;
  g.cliff = op;
  return g;
}

GateIr GateIr::t(std::uint32_t q) {
  GateIr g;
  g.kind = Kind::T;
  g.q0 = q;
  return g;
}

GateIr GateIr::rz(double theta, std::uint32_t q) {
  GateIr g;
  g.kind = Kind::Rz;
  g.theta = theta;
  g.q0 = q;
  return g;
}

GateIr GateIr::mcx(std::vector<std::uint32_t> controls, std::uint32_t target) {
  GateIr g;
  g.kind = Kind::Mcx;
  g.controls = std::move(controls);
  g.q0 = target;
  return g;
}

GateIr GateIr::mcu(std::vector<std::uint32_t> controls, std::uint32_t target, Unitary2 u) {
  GateIr g;
  g.kind = Kind::Mcu;
  g.controls = std::move(controls);
  g.q0 = target;
  g.u = u;
  return g;
}

GateIr GateIr::oracle_rz(Pred pred, double theta) {
  GateIr g;
  g.kind = Kind::OracleRz;
  g.pred = std::move(pred);
  g.theta = theta;
  return g;
}

GateIr GateIr::oracle_x(Pred pred, std::uint32_t target) {
  GateIr g;
  g.kind = Kind::OracleX;
  g.pred = std::move(pred);
  g.q0 = target;
  return g;
}

GateIr GateIr::oracle_rx(Pred pred, double theta, std::uint32_t target) {
  GateIr g;
  g.kind = Kind::OracleRx;
  g.pred = std::move(pred);
  g.theta = theta;
  g.q0 = target;
  return g;
}

GateIr GateIr::oracle_u(Pred pred, std::uint32_t target, Unitary2 u) {
  GateIr g;
  g.kind = Kind::OracleU;
  g.pred = std::move(pred);
  g.q0 = target;
  g.u = u;
  return g;
}

GateIr GateIr::query(QueryFn fn, std::string xreg, std::string yreg) {
  GateIr g;
  g.kind = Kind::Query;
  g.fn = std::move(fn);
  g.xreg = std::move(xreg);
  g.yreg = std::move(yreg);
  return g;
}

GateIr GateIr::cond_query(Pred pred, QueryFn fn, std::string xreg, std::string yreg) {
  GateIr g;
  g.kind = Kind::CondQuery;
  g.pred = std::move(pred);
  g.fn = std::move(fn);
  g.xreg = std::move(xreg);
  g.yreg = std::move(yreg);
  return g;
}

GateIr GateIr::postselect(std::uint32_t q, bool outcome) {
  GateIr g;
  g.kind = Kind::Postselect;
  g.q0 = q;
  g.outcome = outcome;
  return g;
}

const Register* Circuit::find_register(std::string_view name) const {
  for (const Register& r : registers)
    if (r.name == name) return &r;
  return nullptr;
}

std::uint64_t reg_value_u64(const Register& r, std::uint64_t x) {
  std::uint64_t v = 0;
  for (std::uint32_t q : r.qubits) v = (v << 1) | ((x >> q) & 1u);
  return v;
}

bool eval_pred_u64(const Pred& p, const Circuit& c, std::uint64_t x) {
  switch (p.kind) {
    case Pred::Kind::True:
      return true;
    case Pred::Kind::False:
      return false;
    case Pred::Kind::EqVars:
      return reg_value_u64(*c.find_register(p.rega), x) ==
             reg_value_u64(*c.find_register(p.regb), x);
    case Pred::Kind::EqConst:
      return reg_value_u64(*c.find_register(p.rega), x) == p.value;
    case Pred::Kind::Gt:
      return reg_value_u64(*c.find_register(p.rega), x) >
             reg_value_u64(*c.find_register(p.regb), x);
    case Pred::Kind::Inc: {
      const Register& a = *c.find_register(p.rega);
      const Register& b = *c.find_register(p.regb);
      const std::uint64_t mask =
          a.width() >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << a.width()) - 1);
      return reg_value_u64(b, x) == ((reg_value_u64(a, x) + 1) & mask);
    }
    case Pred::Kind::Table: {
      std::uint64_t v = 0;
      for (const std::string& rn : p.regs) {
        const Register& r = *c.find_register(rn);
        v = (v << r.width()) | reg_value_u64(r, x);
      }
      return std::binary_search(p.rows.begin(), p.rows.end(), v);
    }
    case Pred::Kind::Not:
      return !eval_pred_u64(p.children[0], c, x);
    case Pred::Kind::And:
      for (const Pred& ch : p.children)
        if (!eval_pred_u64(ch, c, x)) return false;
      return true;
    case Pred::Kind::Or:
      for (const Pred& ch : p.children)
        if (eval_pred_u64(ch, c, x)) return true;
      return false;
  }
  return false;
}

namespace {

void collect_registers(const Pred& p, std::vector<std::string>& out) {
  auto add = [&out](const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  switch (p.kind) {
    case Pred::Kind::True:
    case Pred::Kind::False:
      break;
    case Pred::Kind::EqConst:
      add(p.rega);
      break;
    case Pred::Kind::EqVars:
    case Pred::Kind::Gt:
    case Pred::Kind::Inc:
      add(p.rega);
      add(p.regb);
      break;
    case Pred::Kind::Table:
      for (const std::string& r : p.regs) add(r);
      break;
    case Pred::Kind::Not:
    case Pred::Kind::And:
    case Pred::Kind::Or:
      for (const Pred& ch : p.children) collect_registers(ch, out);
      break;
  }
}

}  // namespace

std::vector<std::string> pred_registers(const Pred& p) {
  std::vector<std::string> out;
  collect_registers(p, out);
  return out;
}

EulerZxz euler_zxz(const Unitary2& u) {
  EulerZxz e;
  const double m00 = std::abs(u.u00);
  const double m01 = std::abs(u.u01);
  e.beta = 2.0 * std::atan2(m01, m00);
  constexpr double kTiny = 1e-14;
  if (m00 > kTiny) {
    e.delta = std::arg(u.u00) - e.beta / 2.0;
    e.gamma = m01 > kTiny ? std::arg(u.u01) - e.delta - e.beta / 2.0 + kPi / 2.0 : 0.0;
    if (std::abs(u.u10) > kTiny) {
      e.alpha = std::arg(u.u10) - e.delta - e.beta / 2.0 + kPi / 2.0;
    } else {
      e.alpha = std::abs(u.u11) > kTiny ? std::arg(u.u11) - e.delta - e.gamma : 0.0;
    }
  } else {
    // Anti-diagonal: beta = pi, pick gamma = 0.
    e.beta = kPi;
    e.delta = std::arg(u.u01);
    e.gamma = 0.0;
    e.alpha = std::arg(u.u10) - e.delta;
  }
  return e;
}

Unitary2 euler_compose(const EulerZxz& e) {
  // P(a) H P(b) H P(g) = e^{i b/2} P(a) [cos(b/2), -i sin(b/2); -i sin(b/2), cos(b/2)] P(g)
  const cdouble ph = std::polar(1.0, e.delta + e.beta / 2.0);
  const double cb = std::cos(e.beta / 2.0);
  const double sb = std::sin(e.beta / 2.0);
  const cdouble mi{0.0, -1.0};
  Unitary2 u;
  u.u00 = ph * cb;
  u.u01 = ph * mi * sb * std::polar(1.0, e.gamma);
  u.u10 = ph * mi * sb * std::polar(1.0, e.alpha);
  u.u11 = ph * cb * std::polar(1.0, e.alpha + e.gamma);
  return u;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_unitary(const Unitary2& u, const std::string& where) {
  const double c0 = std::norm(u.u00) + std::norm(u.u10);
  const double c1 = std::norm(u.u01) + std::norm(u.u11);
  const cdouble dot = std::conj(u.u00) * u.u01 + std::conj(u.u10) * u.u11;
  if (std::abs(c0 - 1.0) > 1e-10 || std::abs(c1 - 1.0) > 1e-10 || std::abs(dot) > 1e-10)
    fail(where + ": matrix is not unitary");
}

class Validator {
public:
  explicit Validator(const Circuit& c) : c_(c) {}

  void run() {
    if (c_.num_qubits == 0) fail("circuit needs at least one qubit");
    check_registers();
    for (std::size_t i = 0; i < c_.gates.size(); ++i) check_gate(c_.gates[i], i);
  }

private:
  void check_registers() {
    std::unordered_set<std::string> names;
    for (const Register& r : c_.registers) {
      if (r.name.empty()) fail("register with empty name");
      if (!names.insert(r.name).second) fail("duplicate register " + r.name);
      if (r.qubits.empty()) fail("register " + r.name + " has no qubits");
      if (r.width() > 64) fail("register " + r.name + " wider than 64 bits");
      std::set<std::uint32_t> seen;
      for (std::uint32_t q : r.qubits) {
        check_qubit(q, "register " + r.name);
        if (!seen.insert(q).second) fail("register " + r.name + " repeats qubit " + std::to_string(q));
      }
    }
  }

  void check_qubit(std::uint32_t q, const std::string& where) {
    if (q >= c_.num_qubits) fail(where + ": qubit " + std::to_string(q) + " out of range");
  }

  const Register& resolve(const std::string& name, const std::string& where) {
    const Register* r = c_.find_register(name);
    if (!r) fail(where + ": unknown register " + name);
    return *r;
  }

  void pred_qubits(const Pred& p, const std::string& where, std::set<std::uint32_t>& out) {
    for (const std::string& rn : pred_registers(p))
      for (std::uint32_t q : resolve(rn, where).qubits) out.insert(q);
  }

  void check_pred(const Pred& p, const std::string& where) {
    switch (p.kind) {
      case Pred::Kind::True:
      case Pred::Kind::False:
        break;
      case Pred::Kind::EqConst: {
        const Register& a = resolve(p.rega, where);
        if (a.width() < 64 && p.value >> a.width())
          fail(where + ": constant " + std::to_string(p.value) + " does not fit register " + p.rega);
        break;
      }
      case Pred::Kind::EqVars:
      case Pred::Kind::Gt:
      case Pred::Kind::Inc: {
        const Register& a = resolve(p.rega, where);
        const Register& b = resolve(p.regb, where);
        if (a.width() != b.width())
          fail(where + ": registers " + p.rega + " and " + p.regb + " differ in width");
        break;
      }
      case Pred::Kind::Table: {
        if (p.regs.empty()) fail(where + ": table predicate lists no registers");
        std::uint32_t total = 0;
        for (const std::string& rn : p.regs) total += resolve(rn, where).width();
        if (total > 63) fail(where + ": table predicate wider than 63 bits");
        for (std::uint64_t row : p.rows)
          if (row >> total) fail(where + ": table row does not fit operand width");
        break;
      }
      case Pred::Kind::Not:
        if (p.children.size() != 1) fail(where + ": not takes one operand");
        check_pred(p.children[0], where);
        break;
      case Pred::Kind::And:
      case Pred::Kind::Or:
        if (p.children.empty()) fail(where + ": empty connective");
        for (const Pred& ch : p.children) check_pred(ch, where);
        break;
    }
  }

  void check_target_clear_of(const Pred& p, std::uint32_t target, const std::string& where) {
    std::set<std::uint32_t> qs;
    pred_qubits(p, where, qs);
    if (qs.count(target)) fail(where + ": target qubit appears in the predicate");
  }

  void check_query(const GateIr& g, const std::string& where) {
    const Register& x = resolve(g.xreg, where);
    const Register& y = resolve(g.yreg, where);
    std::set<std::uint32_t> xq(x.qubits.begin(), x.qubits.end());
    for (std::uint32_t q : y.qubits)
      if (xq.count(q)) fail(where + ": x and y registers overlap");
    if (g.fn.kind == QueryFn::Kind::Inc) {
      if (x.width() != y.width()) fail(where + ": inc needs equal register widths");
    } else {
      if (x.width() > 63) fail(where + ": table argument wider than 63 bits");
      const std::uint64_t domain = std::uint64_t{1} << x.width();
      if (g.fn.map.size() != domain) fail(where + ": table does not cover every input");
      for (std::size_t i = 0; i < g.fn.map.size(); ++i) {
        if (g.fn.map[i].first != i) fail(where + ": table does not cover every input");
        if (y.width() < 64 && (g.fn.map[i].second >> y.width()))
          fail(where + ": table output does not fit the y register");
      }
    }
    if (g.kind == GateIr::Kind::CondQuery) {
      check_pred(g.pred, where);
      std::set<std::uint32_t> pq;
      pred_qubits(g.pred, where, pq);
      for (std::uint32_t q : y.qubits)
        if (pq.count(q)) fail(where + ": predicate reads the y register");
    }
  }

  void check_gate(const GateIr& g, std::size_t idx) {
    const std::string where = "gate " + std::to_string(idx);
    switch (g.kind) {
      case GateIr::Kind::Clifford:
        check_qubit(g.cliff.q0, where);
        if (g.cliff.kind == CliffordOp::Kind::CX || g.cliff.kind == CliffordOp::Kind::CZ) {
          check_qubit(g.cliff.q1, where);
          if (g.cliff.q0 == g.cliff.q1) fail(where + ": two-qubit gate needs distinct qubits");
        }
        break;
      case GateIr::Kind::T:
        check_qubit(g.q0, where);
        break;
      case GateIr::Kind::Rz:
        check_qubit(g.q0, where);
        check_theta(g.theta, where);
        break;
      case GateIr::Kind::Mcx:
      case GateIr::Kind::Mcu: {
        if (g.controls.empty()) fail(where + ": no control qubits");
        std::set<std::uint32_t> seen;
        for (std::uint32_t q : g.controls) {
          check_qubit(q, where);
          if (!seen.insert(q).second) fail(where + ": repeated control qubit");
        }
        check_qubit(g.q0, where);
        if (seen.count(g.q0)) fail(where + ": target among controls");
        if (g.kind == GateIr::Kind::Mcu) check_unitary(g.u, where);
        break;
      }
      case GateIr::Kind::OracleRz:
        check_pred(g.pred, where);
        check_theta(g.theta, where);
        break;
      case GateIr::Kind::OracleX:
        check_pred(g.pred, where);
        check_qubit(g.q0, where);
        check_target_clear_of(g.pred, g.q0, where);
        break;
      case GateIr::Kind::OracleRx:
        check_pred(g.pred, where);
        check_qubit(g.q0, where);
        check_target_clear_of(g.pred, g.q0, where);
        check_theta(g.theta, where);
        break;
      case GateIr::Kind::OracleU:
        check_pred(g.pred, where);
        check_qubit(g.q0, where);
        check_target_clear_of(g.pred, g.q0, where);
        check_unitary(g.u, where);
        break;
      case GateIr::Kind::Query:
      case GateIr::Kind::CondQuery:
        check_query(g, where);
        break;
      case GateIr::Kind::Postselect:
        check_qubit(g.q0, where);
        break;
    }
  }

  void check_theta(double theta, const std::string& where) {
    if (!std::isfinite(theta)) fail(where + ": angle is not finite");
  }

  const Circuit& c_;
};

}  // namespace

void validate(const Circuit& c) { Validator(c).run(); }

}  // namespace hqsim
