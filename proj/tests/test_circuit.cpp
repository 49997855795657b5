#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <random>

#include "hqsim/circuit.hpp"
#include "hqsim/dense.hpp"
#include "hqsim/parse.hpp"

using namespace hqsim;

namespace {

const char* kSink = R"(# exercise every directive
qubits 9
reg x 0..2
reg y 3..5
reg b [7,6]
h 0
s 1
sdg 2
x 3
z 4
cx 0 1
cz 1 2
t 0
rz 0.25 2
mcx [0,1] 8
mcu [0,2] 8 u=(0+0i,1+0i;1+0i,0+0i)
oracle_rz (and (eq x y) (not (gt x y))) 0.5
oracle_x (eq x 5) 8
oracle_rx (gt x y) 1.25 8
oracle_u (or (eq x y) (inc x y)) 8 u=(1+0i,0+0i;0+0i,0+1i)
query inc x -> y
cond_query (eq b 3) inc x -> y
postselect 8 -> 1
)";

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("kitchen sink parses and validates") {
  Circuit c = parse_hqc(kSink);
  REQUIRE(c.num_qubits == 9);
  REQUIRE(c.registers.size() == 3);
  REQUIRE(c.registers[2].qubits == std::vector<std::uint32_t>{7, 6});
  REQUIRE(c.gates.size() == 18);
  REQUIRE(c.gates[9].kind == GateIr::Kind::Mcx);
  REQUIRE(c.gates[11].pred.kind == Pred::Kind::And);
  REQUIRE(c.gates[17].kind == GateIr::Kind::Postselect);
  REQUIRE(c.gates[17].outcome == true);
  validate(c);
}

TEST_CASE("emit then parse is the identity") {
  Circuit c = parse_hqc(kSink);
  const std::string text = emit_hqc(c);
  Circuit c2 = parse_hqc(text);
  REQUIRE(c == c2);
  REQUIRE(emit_hqc(c2) == text);
}

TEST_CASE("table predicates round-trip through files") {
  write_file("pred_rows.txt", "# accepted\n0101\n1100\n");
  const std::string text =
      "qubits 4\nreg a 0..1\nreg b 2..3\noracle_rz (table a b pred_rows.txt) 0.5\n";
  Circuit c = parse_hqc(text);
  validate(c);
  const Pred& p = c.gates[0].pred;
  REQUIRE(p.kind == Pred::Kind::Table);
  REQUIRE(p.rows == std::vector<std::uint64_t>{0b0101, 0b1100});
  Circuit c2 = parse_hqc(emit_hqc(c));
  REQUIRE(c == c2);
}

TEST_CASE("query tables round-trip and validate totality") {
  write_file("fn_rows.txt", "00 11\n01 10\n10 00\n11 01\n");
  // Spaces are not allowed inside a row; rewrite without them.
  write_file("fn_rows.txt", "0011\n0110\n1000\n1101\n");
  const std::string text = "qubits 4\nreg x 0..1\nreg y 2..3\nquery table:fn_rows.txt x -> y\n";
  Circuit c = parse_hqc(text);
  validate(c);
  REQUIRE(query_fn_value(c.gates[0].fn, 0, 2) == 3);
  REQUIRE(query_fn_value(c.gates[0].fn, 3, 2) == 1);
  REQUIRE(c == parse_hqc(emit_hqc(c)));

  write_file("fn_bad.txt", "0011\n0110\n");
  Circuit bad = parse_hqc("qubits 4\nreg x 0..1\nreg y 2..3\nquery table:fn_bad.txt x -> y\n");
  REQUIRE_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_hqc("qubits 3\nh 0\nfrobnicate 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.line == 3);
  }
  REQUIRE_THROWS_AS(parse_hqc("h 0\n"), ParseError);            // qubits must come first
  REQUIRE_THROWS_AS(parse_hqc("qubits 2\nh 5\n"), ParseError);  // out of range
  REQUIRE_THROWS_AS(parse_hqc("qubits 2\nreg a 0..1\nreg a 0..0\n"), ParseError);
  REQUIRE_THROWS_AS(parse_hqc("qubits 2\noracle_rz (nope) 1.0\n"), ParseError);
  REQUIRE_THROWS_AS(parse_hqc("qubits 2\noracle_rz (eq a b 1.0\n"), ParseError);
  REQUIRE_THROWS_AS(parse_hqc("qubits 2\npostselect 0 -> 2\n"), ParseError);
}

TEST_CASE("validate rejects structural problems") {
  // Target inside the predicate's registers.
  Circuit c = parse_hqc("qubits 3\nreg a 0..1\noracle_x (eq a 1) 1\n");
  REQUIRE_THROWS_AS(validate(c), std::invalid_argument);
  // Width mismatch.
  c = parse_hqc("qubits 4\nreg a 0..1\nreg b 2..3\nreg w 0..2\noracle_rz (eq a w) 1.0\n");
  REQUIRE_THROWS_AS(validate(c), std::invalid_argument);
  // Constant too wide.
  c = parse_hqc("qubits 2\nreg a 0..1\noracle_rz (eq a 4) 1.0\n");
  REQUIRE_THROWS_AS(validate(c), std::invalid_argument);
  // Overlapping query registers.
  c = parse_hqc("qubits 3\nreg x 0..1\nreg y 1..2\nquery inc x -> y\n");
  REQUIRE_THROWS_AS(validate(c), std::invalid_argument);
  // Non-unitary 2x2 block.
  c = parse_hqc("qubits 2\nmcu [0] 1 u=(1+0i,0+0i;0+0i,2+0i)\n");
  REQUIRE_THROWS_AS(validate(c), std::invalid_argument);
  // Target among controls.
  c = parse_hqc("qubits 2\nmcx [0,1] 1\n");
  REQUIRE_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("register values read MSB first") {
  Circuit c = parse_hqc("qubits 3\nreg a [0,1]\nreg r [2]\n");
  const Register& a = c.registers[0];
  // Basis index 0b001: qubit 0 set. Qubit 0 is the MSB of a.
  REQUIRE(reg_value_u64(a, 1) == 2);
  REQUIRE(reg_value_u64(a, 2) == 1);
  REQUIRE(reg_value_u64(a, 3) == 3);
}

TEST_CASE("predicate evaluation matches boolean semantics") {
  Circuit c = parse_hqc("qubits 6\nreg a 0..2\nreg b 3..5\n");
  const Pred eq = Pred::eq_vars("a", "b");
  const Pred gt = Pred::gt("a", "b");
  const Pred inc = Pred::inc("a", "b");
  for (std::uint64_t x = 0; x < 64; ++x) {
    const std::uint64_t av = reg_value_u64(c.registers[0], x);
    const std::uint64_t bv = reg_value_u64(c.registers[1], x);
    REQUIRE(eval_pred_u64(eq, c, x) == (av == bv));
    REQUIRE(eval_pred_u64(gt, c, x) == (av > bv));
    REQUIRE(eval_pred_u64(inc, c, x) == (bv == ((av + 1) & 7)));
    REQUIRE(eval_pred_u64(Pred::not_of(eq), c, x) == (av != bv));
    REQUIRE(eval_pred_u64(Pred::and_of({eq, Pred::make_true()}), c, x) == (av == bv));
    REQUIRE(eval_pred_u64(Pred::or_of({gt, eq}), c, x) == (av >= bv));
  }
}

TEST_CASE("euler angles reconstruct the unitary") {
  std::mt19937_64 rng(0x5eed0010);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    EulerZxz e{ang(rng), ang(rng), ang(rng), ang(rng)};
    const Unitary2 u = euler_compose(e);
    const EulerZxz got = euler_zxz(u);
    const Unitary2 back = euler_compose(got);
    REQUIRE(std::abs(back.u00 - u.u00) < 1e-12);
    REQUIRE(std::abs(back.u01 - u.u01) < 1e-12);
    REQUIRE(std::abs(back.u10 - u.u10) < 1e-12);
    REQUIRE(std::abs(back.u11 - u.u11) < 1e-12);
  }
  SECTION("diagonal and antidiagonal corners") {
    const Unitary2 t{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.70710678118654752, 0.70710678118654752}};
    const EulerZxz et = euler_zxz(t);
    REQUIRE(std::abs(et.beta) < 1e-12);
    const Unitary2 bt = euler_compose(et);
    REQUIRE(std::abs(bt.u11 - t.u11) < 1e-12);
    const Unitary2 xg{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
    const Unitary2 bx = euler_compose(euler_zxz(xg));
    REQUIRE(std::abs(bx.u01 - xg.u01) < 1e-12);
    REQUIRE(std::abs(bx.u10 - xg.u10) < 1e-12);
    REQUIRE(std::abs(bx.u00) < 1e-12);
  }
}

TEST_CASE("dense semantics of the high level gates") {
  SECTION("mcx equals the matching oracle_x") {
    Circuit c = parse_hqc("qubits 3\nreg r 0..1\nh 0\nh 1\nmcx [0,1] 2\n");
    Circuit o = parse_hqc("qubits 3\nreg r 0..1\nh 0\nh 1\noracle_x (eq r 3) 2\n");
    DenseState a = dense_simulate(c);
    DenseState b = dense_simulate(o);
    for (std::size_t i = 0; i < a.amp.size(); ++i) REQUIRE(std::abs(a.amp[i] - b.amp[i]) < 1e-14);
  }
  SECTION("query inc moves y and phases by the old y") {
    Circuit c = parse_hqc("qubits 4\nreg x 0..1\nreg y 2..3\nquery inc x -> y\n");
    DenseState st = dense_init(4);
    // x = 1 (qubit1 set), y = 0.
    st.amp[0] = 0.0;
    st.amp[2] = 1.0;
    dense_apply_gate(st, c.gates[0], c);
    // g(1) = 2, y MSB is qubit 2.
    REQUIRE(std::abs(st.amp[2 | 4] - cdouble(1.0, 0.0)) < 1e-14);
    double total = 0.0;
    for (const cdouble& a : st.amp) total += std::norm(a);
    REQUIRE(std::abs(total - 1.0) < 1e-14);
  }
  SECTION("cond_query keeps y=0 branch where the predicate fails") {
    Circuit c = parse_hqc(
        "qubits 5\nreg b [4]\nreg x 0..1\nreg y 2..3\ncond_query (eq b 1) inc x -> y\n");
    DenseState st = dense_init(5);
    st.amp[0] = {0.6, 0.0};           // b=0, x=0, y=0: survives untouched
    st.amp[16] = {0.0, 0.8};          // b=1, x=0, y=0: y becomes g(0)=1
    dense_apply_gate(st, c.gates[0], c);
    REQUIRE(std::abs(st.amp[0] - cdouble(0.6, 0.0)) < 1e-14);
    // y=1 means its LSB qubit 3 is set.
    REQUIRE(std::abs(st.amp[16 | 8] - cdouble(0.0, 0.8)) < 1e-14);
  }
  SECTION("postselect zeroes the other branch without renormalizing") {
    Circuit c = parse_hqc("qubits 1\nh 0\npostselect 0 -> 1\n");
    DenseState st = dense_simulate(c);
    REQUIRE(std::abs(st.amp[0]) < 1e-14);
    REQUIRE(std::abs(st.amp[1] - cdouble(0.70710678118654752, 0.0)) < 1e-14);
  }
}
