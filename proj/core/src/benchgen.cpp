#include "hqsim/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace hqsim {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double unit_double(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// Box-Muller, spelled out so the draw sequence is identical on every stdlib.
cdouble gaussian(std::mt19937_64& rng) {
  const double r = std::sqrt(-2.0 * std::log1p(-unit_double(rng)));
  const double a = 2.0 * kPi * unit_double(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

void h_layer(Circuit& c, std::uint32_t first, std::uint32_t count) {
  for (std::uint32_t q = first; q < first + count; ++q)
    c.gates.push_back(GateIr::clifford(CliffordOp::h(q)));
}

Register span_reg(std::string name, std::uint32_t first, std::uint32_t count) {
  Register r{std::move(name), {}};
  for (std::uint32_t q = first; q < first + count; ++q) r.qubits.push_back(q);
  return r;
}

// Register value (first qubit most significant) -> basis index (qubit i = bit i).
std::uint64_t basis_index(const Register& reg, std::uint64_t value) {
  std::uint64_t idx = 0;
  const std::uint32_t w = static_cast<std::uint32_t>(reg.qubits.size());
  for (std::uint32_t i = 0; i < w; ++i)
    if ((value >> (w - 1 - i)) & 1u) idx |= std::uint64_t{1} << reg.qubits[i];
  return idx;
}

int default_rounds(std::uint32_t n, std::uint64_t solutions) {
  if (solutions == 0) return 0;
  const double ratio = std::exp2(static_cast<double>(n)) / static_cast<double>(solutions);
  return static_cast<int>(std::floor(kPi / 4.0 * std::sqrt(ratio)));
}

BenchInstance grover_allneg(BenchSpec s) {
  require(s.n >= 1 && s.n <= 62, "grover-allneg: n must be in 1..62");
  if (s.rounds < 0) s.rounds = default_rounds(s.n, 1);
  BenchInstance inst;
  Circuit& c = inst.circuit;
  c.num_qubits = s.n;
  c.registers.push_back(span_reg("x", 0, s.n));
  const Pred marked = Pred::eq_const("x", 0);  // every variable negated
  h_layer(c, 0, s.n);
  for (int r = 0; r < s.rounds; ++r) {
    c.gates.push_back(GateIr::oracle_rz(marked, kPi));
    h_layer(c, 0, s.n);
    c.gates.push_back(GateIr::oracle_rz(marked, kPi));  // reflection about |0..0>
    h_layer(c, 0, s.n);
  }
  inst.target = 0;
  inst.spec = std::move(s);
  return inst;
}

BenchInstance grover_cnf(BenchSpec s) {
  require(s.n >= 2 && s.n <= 62, "grover-cnf: n must be in 2..62");
  std::mt19937_64 rng(s.seed);
  BenchInstance inst;
  Circuit& c = inst.circuit;
  c.num_qubits = s.n;
  for (std::uint32_t i = 0; i < s.n; ++i)
    c.registers.push_back(Register{"b" + std::to_string(i), {i}});
  c.registers.push_back(span_reg("x", 0, s.n));

  // Three clauses, each holding one literal per variable of random polarity;
  // a clause excludes exactly the assignment falsifying all its literals.
  std::vector<Pred> clauses;
  std::set<std::uint64_t> excluded;
  for (int cl = 0; cl < 3; ++cl) {
    std::vector<Pred> lits;
    std::uint64_t falsifier = 0;
    for (std::uint32_t i = 0; i < s.n; ++i) {
      const std::uint64_t polarity = rng() & 1u;
      lits.push_back(Pred::eq_const("b" + std::to_string(i), polarity));
      falsifier |= (1 - polarity) << (s.n - 1 - i);
    }
    clauses.push_back(Pred::or_of(std::move(lits)));
    excluded.insert(falsifier);
  }
  const std::uint64_t solutions = (std::uint64_t{1} << s.n) - excluded.size();
  if (s.rounds < 0) s.rounds = default_rounds(s.n, solutions);

  const Pred formula = Pred::and_of(std::move(clauses));
  const Pred zero = Pred::eq_const("x", 0);
  h_layer(c, 0, s.n);
  for (int r = 0; r < s.rounds; ++r) {
    c.gates.push_back(GateIr::oracle_rz(formula, kPi));
    h_layer(c, 0, s.n);
    c.gates.push_back(GateIr::oracle_rz(zero, kPi));
    h_layer(c, 0, s.n);
  }
  std::uint64_t lowest = 0;
  while (excluded.count(lowest)) ++lowest;
  inst.target = basis_index(*c.find_register("x"), lowest);
  inst.spec = std::move(s);
  return inst;
}

BenchInstance cvo_qram(BenchSpec s) {
  require(s.n >= 1 && s.n <= 62, "cvo-qram: n must be in 1..62");
  const std::uint64_t space = (std::uint64_t{1} << s.n) - 1;  // nonzero patterns
  require(s.k >= 1 && s.k <= space, "cvo-qram: k must be in 1..2^n-1");
  std::mt19937_64 rng(s.seed);
  BenchInstance inst;
  Circuit& c = inst.circuit;
  c.num_qubits = s.n + 1;
  c.registers.push_back(Register{"u", {0}});
  c.registers.push_back(span_reg("m", 1, s.n));

  std::vector<std::uint64_t> patterns;
  std::set<std::uint64_t> seen;
  while (patterns.size() < s.k) {
    const std::uint64_t x = rng() % space + 1;
    if (seen.insert(x).second) patterns.push_back(x);
  }
  std::vector<cdouble> amps(s.k);
  double norm2 = 0.0;
  for (cdouble& a : amps) {
    a = gaussian(rng);
    norm2 += std::norm(a);
  }
  for (cdouble& a : amps) a /= std::sqrt(norm2);

  std::vector<std::uint32_t> controls;
  for (std::uint32_t q = 1; q <= s.n; ++q) controls.push_back(q);
  c.gates.push_back(GateIr::clifford(CliffordOp::x(0)));
  double rprev = 1.0;
  for (std::uint32_t j = 0; j < s.k; ++j) {
    const std::uint64_t x = patterns[j];
    auto each_bit = [&](auto&& fn) {
      for (std::uint32_t i = 0; i < s.n; ++i)
        fn(1 + i, ((x >> (s.n - 1 - i)) & 1u) != 0);
    };
    // move the carrier to |1>|x_j>, select it, rotate part of it off |1>_u
    each_bit([&](std::uint32_t q, bool set) {
      if (set) c.gates.push_back(GateIr::clifford(CliffordOp::cx(0, q)));
    });
    each_bit([&](std::uint32_t q, bool set) {
      if (!set) c.gates.push_back(GateIr::clifford(CliffordOp::x(q)));
    });
    const double rnext =
        std::sqrt(std::max(0.0, rprev * rprev - std::norm(amps[j])));
    const cdouble c0 = amps[j] / rprev;
    const double c1 = rnext / rprev;
    Unitary2 u;
    u.u00 = c1;
    u.u01 = c0;
    u.u10 = -std::conj(c0);
    u.u11 = c1;
    c.gates.push_back(GateIr::mcu(controls, 0, u));
    each_bit([&](std::uint32_t q, bool set) {
      if (!set) c.gates.push_back(GateIr::clifford(CliffordOp::x(q)));
    });
    each_bit([&](std::uint32_t q, bool set) {
      if (set) c.gates.push_back(GateIr::clifford(CliffordOp::cx(0, q)));
    });
    rprev = rnext;
    inst.prepared.emplace_back(x, amps[j]);
  }
  inst.target = basis_index(*c.find_register("m"), patterns[0]);
  inst.spec = std::move(s);
  return inst;
}

BenchInstance oracle_chain(BenchSpec s) {
  require(s.k >= 1 && s.k <= 1000, "oracle-chain: k must be in 1..1000");
  std::mt19937_64 rng(s.seed);
  BenchInstance inst;
  Circuit& c = inst.circuit;
  s.n = 5;  // each oracle reads five bits
  c.num_qubits = 5 * s.k + 1;
  for (std::uint32_t b = 0; b < s.k; ++b)
    c.registers.push_back(span_reg("in" + std::to_string(b + 1), 5 * b, 5));
  for (std::uint32_t b = 0; b < s.k; ++b) {
    // the first block spreads all five inputs; later blocks inherit the
    // previous target as their top bit and spread the four fresh ones
    if (b == 0)
      h_layer(c, 0, 5);
    else
      h_layer(c, 5 * b + 1, 4);
    std::vector<std::uint64_t> rows;
    for (std::uint64_t v = 0; v < 32; ++v)
      if (rng() & 1u) rows.push_back(v);
    const std::string file = "chain" + std::to_string(b + 1) + ".rows";
    c.gates.push_back(GateIr::oracle_x(
        Pred::table({"in" + std::to_string(b + 1)}, file, std::move(rows)), 5 * (b + 1)));
  }
  inst.target = 0;
  inst.spec = std::move(s);
  return inst;
}

BenchInstance comparator(BenchSpec s) {
  require(s.k >= 1 && s.k <= 62, "comparator: k must be in 1..62");
  BenchInstance inst;
  Circuit& c = inst.circuit;
  c.num_qubits = 2 * s.k + 1;
  c.registers.push_back(span_reg("x", 0, s.k));
  c.registers.push_back(span_reg("y", s.k, s.k));
  h_layer(c, 0, 2 * s.k);
  c.gates.push_back(GateIr::oracle_x(Pred::gt("x", "y"), 2 * s.k));
  inst.target = 0;
  inst.spec = std::move(s);
  return inst;
}

}  // namespace

BenchInstance generate(const BenchSpec& spec) {
  BenchInstance inst;
  if (spec.family == "grover-allneg")
    inst = grover_allneg(spec);
  else if (spec.family == "grover-cnf")
    inst = grover_cnf(spec);
  else if (spec.family == "cvo-qram")
    inst = cvo_qram(spec);
  else if (spec.family == "oracle-chain")
    inst = oracle_chain(spec);
  else if (spec.family == "comparator")
    inst = comparator(spec);
  else
    throw std::invalid_argument("unknown benchmark family '" + spec.family + "'");
  validate(inst.circuit);
  return inst;
}

void write_side_files(const Circuit& c, const std::string& dir) {
  auto path = [&](const std::string& file) {
    return dir.empty() || file.starts_with('/') ? file : dir + "/" + file;
  };
  auto write_rows = [&](const std::string& file, const std::vector<std::uint64_t>& rows,
                        std::uint32_t width) {
    std::ofstream out(path(file));
    if (!out) throw std::runtime_error("cannot write table file '" + path(file) + "'");
    for (std::uint64_t row : rows) {
      for (std::uint32_t i = 0; i < width; ++i) out << ((row >> (width - 1 - i)) & 1u);
      out << '\n';
    }
  };
  auto walk_pred = [&](const Pred& p, auto&& self) -> void {
    if (p.kind == Pred::Kind::Table) {
      std::uint32_t width = 0;
      for (const std::string& rn : p.regs) width += c.find_register(rn)->width();
      write_rows(p.file, p.rows, width);
    }
    for (const Pred& ch : p.children) self(ch, self);
  };
  for (const GateIr& g : c.gates) {
    switch (g.kind) {
      case GateIr::Kind::OracleRz:
      case GateIr::Kind::OracleX:
      case GateIr::Kind::OracleRx:
      case GateIr::Kind::OracleU:
      case GateIr::Kind::CondQuery:
        walk_pred(g.pred, walk_pred);
        break;
      default:
        break;
    }
    if ((g.kind == GateIr::Kind::Query || g.kind == GateIr::Kind::CondQuery) &&
        g.fn.kind == QueryFn::Kind::Table) {
      const std::uint32_t yw = c.find_register(g.yreg)->width();
      std::vector<std::uint64_t> rows;
      for (const auto& [x, y] : g.fn.map) rows.push_back((x << yw) | y);
      write_rows(g.fn.file, rows, c.find_register(g.xreg)->width() + yw);
    }
  }
}

}  // namespace hqsim
