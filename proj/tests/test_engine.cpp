#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "hqsim/circuit.hpp"
#include "hqsim/dense.hpp"
#include "hqsim/engine.hpp"
#include "hqsim/lowering.hpp"

using namespace hqsim;

namespace {

constexpr double kPi = std::numbers::pi;

// Registers a = qubits 0..1, b = 2..3, free target qubit 4.
Circuit scaffold() {
  Circuit c;
  c.num_qubits = 5;
  c.registers.push_back(Register{"a", {0, 1}});
  c.registers.push_back(Register{"b", {2, 3}});
  return c;
}

Pred random_pred(std::mt19937_64& rng) {
  switch (rng() % 6) {
    case 0:
      return Pred::gt("a", "b");
    case 1:
      return Pred::eq_vars("a", "b");
    case 2:
      return Pred::inc("a", "b");
    case 3:
      return Pred::eq_const("a", rng() % 4);
    case 4:
      return Pred::and_of({Pred::eq_const("a", rng() % 4), Pred::eq_const("b", rng() % 4)});
    default:
      return Pred::or_of({Pred::gt("a", "b"), Pred::eq_const("b", rng() % 4)});
  }
}

Circuit random_magic_circuit(std::mt19937_64& rng, int len) {
  Circuit c = scaffold();
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  auto q = [&] { return static_cast<std::uint32_t>(rng() % 5); };
  int magic = 0;
  for (int i = 0; i < len; ++i) {
    switch (magic < 4 ? rng() % 8 : rng() % 3) {
      case 0:
        c.gates.push_back(GateIr::clifford(CliffordOp::h(q())));
        break;
      case 1: {
        std::uint32_t x = q(), y = q();
        if (x == y) y = (y + 1) % 5;
        c.gates.push_back(GateIr::clifford(CliffordOp::cx(x, y)));
        break;
      }
      case 2:
        c.gates.push_back(GateIr::clifford(CliffordOp::s(q())));
        break;
      case 3:
        c.gates.push_back(GateIr::t(q()));
        ++magic;
        break;
      case 4:
        c.gates.push_back(GateIr::rz(ang(rng), q()));
        ++magic;
        break;
      case 5:
        c.gates.push_back(GateIr::oracle_rz(random_pred(rng), ang(rng)));
        ++magic;
        break;
      case 6:
        c.gates.push_back(GateIr::oracle_x(random_pred(rng), 4));
        ++magic;
        break;
      default:
        c.gates.push_back(GateIr::query(QueryFn::make_inc(), "a", "b"));
        ++magic;
        break;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("engine reproduces dense amplitudes on random circuits") {
  std::mt19937_64 rng(2026);
  for (int rep = 0; rep < 25; ++rep) {
    Circuit c = random_magic_circuit(rng, 10);
    CAPTURE(rep);
    DenseState want = dense_simulate(c);
    GadgetizedCircuit g = gadgetize(c);
    EngineStats stats;
    auto got = strong_amplitudes_all(g, {}, &stats);
    REQUIRE(got.size() == want.amp.size());
    for (std::size_t x = 0; x < got.size(); ++x) {
      CAPTURE(x);
      CHECK(std::abs(got[x] - want.amp[x]) < 1e-9);
    }
    CHECK(stats.chi == g.chi());
    CHECK(stats.terms >= 1);
    CHECK(stats.zero_terms <= stats.terms);
    // spot-check the scalar path against the table
    const std::uint64_t x = rng() % got.size();
    CHECK(std::abs(strong_amplitude(g, x) - got[x]) < 1e-12);
  }
}

TEST_CASE("bell state probability is exact") {
  Circuit c;
  c.num_qubits = 2;
  c.gates.push_back(GateIr::clifford(CliffordOp::h(0)));
  c.gates.push_back(GateIr::clifford(CliffordOp::cx(0, 1)));
  CHECK(strong_probability(c, 0b00) == Catch::Approx(0.5).margin(1e-12));
  CHECK(strong_probability(c, 0b11) == Catch::Approx(0.5).margin(1e-12));
  CHECK(strong_probability(c, 0b01) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("worker count never changes the result") {
  std::mt19937_64 rng(99);
  Circuit c = random_magic_circuit(rng, 14);
  GadgetizedCircuit g = gadgetize(c);
  const cdouble base = strong_amplitude(g, 3, EngineOptions{1});
  for (int w : {2, 4, 8, 16}) {
    const cdouble got = strong_amplitude(g, 3, EngineOptions{w});
    CAPTURE(w);
    CHECK(std::abs(got - base) < 1e-13);
  }
  // and the same worker count is bit-for-bit reproducible
  const cdouble again = strong_amplitude(g, 3, EngineOptions{4});
  CHECK(strong_amplitude(g, 3, EngineOptions{4}) == again);
}

TEST_CASE("annihilated branches are counted, not summed") {
  Circuit c;
  c.num_qubits = 2;
  c.gates.push_back(GateIr::clifford(CliffordOp::x(0)));
  c.gates.push_back(GateIr::postselect(0, false));  // contradiction
  c.gates.push_back(GateIr::t(1));
  EngineStats stats;
  const cdouble a = strong_amplitude(gadgetize(c), 0, {}, &stats);
  CHECK(a == cdouble{0.0, 0.0});
  CHECK(stats.zero_terms == stats.terms);
}

TEST_CASE("postselection keeps unnormalized weight") {
  Circuit c;
  c.num_qubits = 2;
  c.gates.push_back(GateIr::clifford(CliffordOp::h(0)));
  c.gates.push_back(GateIr::clifford(CliffordOp::h(1)));
  c.gates.push_back(GateIr::postselect(0, true));
  const double p = strong_probability(c, 0b01);
  CHECK(p == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("wide circuits go through the bitvec interface") {
  // 70 data qubits: beyond any dense check, but a pure stabilizer flow
  Circuit c;
  c.num_qubits = 70;
  for (std::uint32_t q = 0; q < 70; q += 2) {
    c.gates.push_back(GateIr::clifford(CliffordOp::h(q)));
    c.gates.push_back(GateIr::clifford(CliffordOp::cx(q, q + 1)));
  }
  GadgetizedCircuit g = gadgetize(c);
  BitVec x(70);  // all zeros: every pair contributes 2^{-1/2}
  const cdouble a = strong_amplitude(g, x);
  CHECK(std::abs(a - cdouble{std::pow(0.5, 17.5), 0.0}) < 1e-19);
  BitVec odd(70);
  odd.set(1, true);  // breaks the first pair
  CHECK(std::abs(strong_amplitude(g, odd)) < 1e-19);
}
