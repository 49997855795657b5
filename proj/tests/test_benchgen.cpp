#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "hqsim/benchgen.hpp"
#include "hqsim/dense.hpp"
#include "hqsim/engine.hpp"
#include "hqsim/lowering.hpp"
#include "hqsim/parse.hpp"

using namespace hqsim;

namespace {

std::size_t count_kind(const Circuit& c, GateIr::Kind k) {
  std::size_t n = 0;
  for (const GateIr& g : c.gates) n += g.kind == k ? 1 : 0;
  return n;
}

void check_against_dense(const BenchInstance& inst, double tol = 1e-8) {
  DenseState want = dense_simulate(inst.circuit);
  auto got = strong_amplitudes_all(gadgetize(inst.circuit));
  REQUIRE(got.size() == want.amp.size());
  for (std::size_t x = 0; x < got.size(); ++x) {
    CAPTURE(x);
    CHECK(std::abs(got[x] - want.amp[x]) < tol);
  }
}

void check_round_trip(const BenchInstance& inst) {
  const std::string text = emit_hqc(inst.circuit);
  write_side_files(inst.circuit, "");
  const Circuit back = parse_hqc(text);
  CHECK(back == inst.circuit);
  CHECK(emit_hqc(back) == text);
}

}  // namespace

TEST_CASE("grover-allneg hits the marked state") {
  BenchInstance inst = generate({.family = "grover-allneg", .n = 3, .rounds = 2});
  CHECK(inst.circuit.num_qubits == 3);
  CHECK(count_kind(inst.circuit, GateIr::Kind::OracleRz) == 4);  // 2 oracle + 2 reflection
  CHECK(inst.target == 0);
  CHECK(rank_report(inst.circuit).chi == 16.0);

  const double p = strong_probability(inst.circuit, inst.target);
  CHECK(p == Catch::Approx(0.9453125).margin(1e-8));
  check_against_dense(inst);
  check_round_trip(inst);

  BenchInstance def = generate({.family = "grover-allneg", .n = 3});
  CHECK(def.spec.rounds == 2);  // floor(pi/4 * sqrt(8))
}

TEST_CASE("grover-cnf builds three full-width clauses") {
  BenchInstance inst = generate({.family = "grover-cnf", .n = 4, .rounds = 1, .seed = 7});
  CHECK(inst.circuit.num_qubits == 4);
  CHECK(rank_report(inst.circuit).chi == 18.0);  // 9-term oracle, 2-term reflection
  check_against_dense(inst);
  check_round_trip(inst);

  // the reported state is a satisfying assignment of the formula
  DenseState probe = dense_simulate(inst.circuit);
  CHECK(std::norm(probe.amp[inst.target]) ==
        Catch::Approx(strong_probability(inst.circuit, inst.target)).margin(1e-10));

  // with at most three excluded assignments the standard count rounds to zero
  BenchInstance wide = generate({.family = "grover-cnf", .n = 10, .seed = 3});
  CHECK(wide.spec.rounds == 0);
}

TEST_CASE("cvo-qram prepares the seeded amplitudes") {
  BenchInstance inst = generate({.family = "cvo-qram", .n = 3, .k = 3, .seed = 11});
  REQUIRE(inst.prepared.size() == 3);
  double norm2 = 0.0;
  for (const auto& [x, amp] : inst.prepared) {
    CHECK(x >= 1);
    norm2 += std::norm(amp);
  }
  CHECK(norm2 == Catch::Approx(1.0).margin(1e-12));

  GadgetizedCircuit g = gadgetize(inst.circuit);
  const Register& m = *inst.circuit.find_register("m");
  for (const auto& [x, amp] : inst.prepared) {
    std::uint64_t idx = 0;
    for (std::uint32_t i = 0; i < 3; ++i)
      if ((x >> (2 - i)) & 1u) idx |= std::uint64_t{1} << m.qubits[i];
    CHECK(std::abs(strong_amplitude(g, idx) - amp) < 1e-8);
  }
  CHECK(strong_probability(inst.circuit, inst.target) ==
        Catch::Approx(std::norm(inst.prepared[0].second)).margin(1e-8));
  check_against_dense(inst);
  check_round_trip(inst);
}

TEST_CASE("cvo-qram gate budget matches the construction") {
  BenchInstance inst = generate({.family = "cvo-qram", .n = 5, .k = 2, .seed = 4});
  CHECK(inst.circuit.num_qubits == 6);
  CHECK(count_kind(inst.circuit, GateIr::Kind::Mcu) == 2);
  std::size_t cx = 0;
  for (const GateIr& g : inst.circuit.gates)
    cx += g.kind == GateIr::Kind::Clifford && g.cliff.kind == CliffordOp::Kind::CX ? 1 : 0;
  CHECK(cx <= 2 * 2 * 5);
}

TEST_CASE("oracle-chain threads each target into the next block") {
  BenchInstance inst = generate({.family = "oracle-chain", .k = 2, .seed = 9});
  CHECK(inst.circuit.num_qubits == 11);
  CHECK(count_kind(inst.circuit, GateIr::Kind::OracleX) == 2);
  const Register& in2 = *inst.circuit.find_register("in2");
  CHECK(in2.qubits.front() == 5);  // block 1's target leads block 2's input
  check_against_dense(inst);
  check_round_trip(inst);
}

TEST_CASE("comparator spreads both operands into one flag oracle") {
  BenchInstance inst = generate({.family = "comparator", .k = 3});
  CHECK(inst.circuit.num_qubits == 7);
  CHECK(count_kind(inst.circuit, GateIr::Kind::OracleX) == 1);
  CHECK(count_kind(inst.circuit, GateIr::Kind::Clifford) == 6);
  CHECK(rank_report(inst.circuit).chi == 4.0);  // k + 1

  BenchInstance small = generate({.family = "comparator", .k = 2});
  CHECK(strong_probability(small.circuit, small.target) ==
        Catch::Approx(1.0 / 16.0).margin(1e-12));
  check_against_dense(small);
  check_round_trip(small);
}

TEST_CASE("generation is deterministic in the seed") {
  const BenchSpec spec{.family = "grover-cnf", .n = 5, .rounds = 1, .seed = 42};
  CHECK(emit_hqc(generate(spec).circuit) == emit_hqc(generate(spec).circuit));
  BenchSpec other = spec;
  other.seed = 43;
  CHECK(emit_hqc(generate(other).circuit) != emit_hqc(generate(spec).circuit));

  const BenchSpec qram{.family = "cvo-qram", .n = 4, .k = 3, .seed = 8};
  CHECK(generate(qram).circuit == generate(qram).circuit);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate({.family = "nope"}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.family = "grover-allneg", .n = 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.family = "grover-cnf", .n = 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.family = "cvo-qram", .n = 2, .k = 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.family = "cvo-qram", .n = 2, .k = 4}), std::invalid_argument);
  CHECK_THROWS_AS(generate({.family = "comparator", .k = 0}), std::invalid_argument);
}
