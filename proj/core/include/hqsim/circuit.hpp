#ifndef HQSIM_CIRCUIT_HPP
#define HQSIM_CIRCUIT_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hqsim/stabilizer.hpp"

namespace hqsim {

// A named view of qubits. The first listed qubit is the most significant bit
// of the register's value.
struct Register {
  std::string name;
  std::vector<std::uint32_t> qubits;

  std::uint32_t width() const { return static_cast<std::uint32_t>(qubits.size()); }
  bool operator==(const Register&) const = default;
};

// Boolean predicate over register values. Leaves compare registers; inner
// nodes combine children. Table leaves keep both the accepted values and the
// file they came from so emitted text stays loadable.
struct Pred {
  enum class Kind { True, False, EqVars, EqConst, Gt, Inc, Table, Not, And, Or };

  Kind kind = Kind::True;
  std::string rega;                     // EqVars/EqConst/Gt/Inc
  std::string regb;                     // EqVars/Gt/Inc
  std::uint64_t value = 0;              // EqConst
  std::vector<std::string> regs;        // Table operand registers, MSB block first
  std::string file;                     // Table source path as written
  std::vector<std::uint64_t> rows;      // Table accepted values, sorted ascending
  std::vector<Pred> children;           // Not (1), And/Or (>= 2)

  bool operator==(const Pred&) const = default;

  static Pred make_true() { return Pred{}; }
  static Pred make_false() {
    Pred p;
    p.kind = Kind::False;
    return p;
  }
  static Pred eq_vars(std::string a, std::string b);
  static Pred eq_const(std::string a, std::uint64_t v);
  static Pred gt(std::string a, std::string b);
  static Pred inc(std::string a, std::string b);
  static Pred table(std::vector<std::string> regs, std::string file,
                    std::vector<std::uint64_t> rows);
  static Pred not_of(Pred p);
  static Pred and_of(std::vector<Pred> ps);
  static Pred or_of(std::vector<Pred> ps);
};

// Dense 2x2 unitary, row major.
struct Unitary2 {
  cdouble u00{1.0, 0.0}, u01{0.0, 0.0};
  cdouble u10{0.0, 0.0}, u11{1.0, 0.0};

  bool operator==(const Unitary2&) const = default;
};

// U = exp(i delta) P(alpha) H P(beta) H P(gamma) with P(t) = diag(1, e^{it}).
struct EulerZxz {
  double delta = 0.0, alpha = 0.0, beta = 0.0, gamma = 0.0;
};

EulerZxz euler_zxz(const Unitary2& u);
Unitary2 euler_compose(const EulerZxz& e);

struct QueryFn {
  enum class Kind { Inc, Table };
  Kind kind = Kind::Inc;
  std::string file;                                        // Table source path
  std::vector<std::pair<std::uint64_t, std::uint64_t>> map;  // Table rows (x, y), sorted by x

  bool operator==(const QueryFn&) const = default;

  static QueryFn make_inc() { return QueryFn{}; }
  static QueryFn make_table(std::string file, std::vector<std::pair<std::uint64_t, std::uint64_t>> map);
};

struct GateIr {
  enum class Kind {
    Clifford,    // h s sdg x z cx cz
    T,           // diag(1, e^{i pi/4}) on q0
    Rz,          // diag(1, e^{i theta}) on q0
    Mcx,         // controls all-1 -> X on q0
    Mcu,         // controls all-1 -> u on q0
    OracleRz,    // |x> -> e^{i theta [pred(x)]} |x>
    OracleX,     // X on q0 where pred holds
    OracleRx,    // H P(theta) H on q0 where pred holds
    OracleU,     // u on q0 where pred holds
    Query,       // |x>|y> -> (-1)^{y.g(x)} |x>|g(x)>
    CondQuery,   // as Query where pred holds, else y is forced to 0
    Postselect,  // project q0 onto |outcome>, no renormalization
  };

  Kind kind = Kind::Clifford;
  CliffordOp cliff{CliffordOp::Kind::H, 0, 0};
  std::uint32_t q0 = 0;
  double theta = 0.0;
  Pred pred;
  Unitary2 u;
  std::vector<std::uint32_t> controls;
  QueryFn fn;
  std::string xreg, yreg;
  bool outcome = false;

  bool operator==(const GateIr&) const = default;

  static GateIr clifford(CliffordOp op);
  static GateIr t(std::uint32_t q);
  static GateIr rz(double theta, std::uint32_t q);
  static GateIr mcx(std::vector<std::uint32_t> controls, std::uint32_t target);
  static GateIr mcu(std::vector<std::uint32_t> controls, std::uint32_t target, Unitary2 u);
  static GateIr oracle_rz(Pred pred, double theta);
  static GateIr oracle_x(Pred pred, std::uint32_t target);
  static GateIr oracle_rx(Pred pred, double theta, std::uint32_t target);
  static GateIr oracle_u(Pred pred, std::uint32_t target, Unitary2 u);
  static GateIr query(QueryFn fn, std::string xreg, std::string yreg);
  static GateIr cond_query(Pred pred, QueryFn fn, std::string xreg, std::string yreg);
  static GateIr postselect(std::uint32_t q, bool outcome);
};

struct Circuit {
  std::uint32_t num_qubits = 0;
  std::vector<Register> registers;  // declaration order
  std::vector<GateIr> gates;

  bool operator==(const Circuit&) const = default;
  const Register* find_register(std::string_view name) const;
};

// Structural checks: register names and widths, qubit ranges, predicate
// operand compatibility, target/control overlap, query function arity,
// unitarity of 2x2 blocks. Throws std::invalid_argument on the first problem.
void validate(const Circuit& c);

// Value of a register in computational basis state |x>, qubit i = bit i of x.
std::uint64_t reg_value_u64(const Register& r, std::uint64_t x);

// Evaluate a predicate on basis state |x>. Registers resolve against c.
bool eval_pred_u64(const Pred& p, const Circuit& c, std::uint64_t x);

// Registers referenced by a predicate, in first-use order, duplicates kept
// out. Order matters: it fixes slot layout downstream.
std::vector<std::string> pred_registers(const Pred& p);

}  // namespace hqsim

#endif
