// Micro-benchmarks for the hot paths: the stabilizer core, predicate
// decomposition, and the end-to-end strong simulation of the benchmark
// families. Run with --benchmark_filter=<regex> to focus.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "hqsim/benchgen.hpp"
#include "hqsim/circuit.hpp"
#include "hqsim/decomp.hpp"
#include "hqsim/engine.hpp"
#include "hqsim/lowering.hpp"
#include "hqsim/stabilizer.hpp"

namespace {

using namespace hqsim;

std::vector<CliffordOp> random_fragment(std::uint32_t n, int ops, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CliffordOp> out;
  out.reserve(ops);
  while (out.size() < static_cast<std::size_t>(ops)) {
    std::uint32_t a = rng() % n, b = rng() % n;
    switch (rng() % 7) {
      case 0: out.push_back(CliffordOp::h(a)); break;
      case 1: out.push_back(CliffordOp::s(a)); break;
      case 2: out.push_back(CliffordOp::sdg(a)); break;
      case 3: out.push_back(CliffordOp::x(a)); break;
      case 4: out.push_back(CliffordOp::z(a)); break;
      case 5:
        if (a != b) out.push_back(CliffordOp::cx(a, b));
        break;
      default:
        if (a != b) out.push_back(CliffordOp::cz(a, b));
        break;
    }
  }
  return out;
}

void BM_CliffordFragment(benchmark::State& state) {
  std::uint32_t n = state.range(0);
  std::vector<CliffordOp> ops = random_fragment(n, 400, 17);
  for (auto _ : state) {
    ScaledStabilizerState st = init_state(n);
    for (const CliffordOp& op : ops) st.apply_clifford(op);
    benchmark::DoNotOptimize(st.amplitude_u64(0));
  }
}
BENCHMARK(BM_CliffordFragment)->Arg(8)->Arg(32)->Arg(128);

void BM_AmplitudeReadout(benchmark::State& state) {
  std::uint32_t n = state.range(0);
  ScaledStabilizerState st = init_state(n);
  for (const CliffordOp& op : random_fragment(n, 400, 23)) st.apply_clifford(op);
  std::uint64_t x = 0x5a5a5a5a5a5a5a5aULL & ((n < 64) ? (std::uint64_t{1} << n) - 1 : ~0ULL);
  for (auto _ : state) benchmark::DoNotOptimize(st.amplitude_u64(x));
}
BENCHMARK(BM_AmplitudeReadout)->Arg(16)->Arg(64);

void BM_DecompGt(benchmark::State& state) {
  std::uint32_t k = state.range(0);
  RPred p;
  p.kind = Pred::Kind::Gt;
  for (std::uint32_t i = 0; i < k; ++i) p.qa.push_back(i);
  for (std::uint32_t i = 0; i < k; ++i) p.qb.push_back(k + i);
  for (auto _ : state) benchmark::DoNotOptimize(build_effectual(p));
}
BENCHMARK(BM_DecompGt)->Arg(4)->Arg(8)->Arg(16);

void BM_Gadgetize(benchmark::State& state) {
  BenchInstance inst = generate({"grover-cnf", 10, 0, 1, 5});
  for (auto _ : state) benchmark::DoNotOptimize(gadgetize(inst.circuit));
}
BENCHMARK(BM_Gadgetize);

// One multi-controlled X across control counts: the decomposition stays at
// two terms, so the cost is the Clifford replay alone.
void BM_McxAmplitude(benchmark::State& state) {
  std::uint32_t k = state.range(0);
  Circuit c;
  c.num_qubits = k + 1;
  std::vector<std::uint32_t> controls(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    controls[i] = i;
    c.gates.push_back(GateIr::clifford(CliffordOp::h(i)));
  }
  c.gates.push_back(GateIr::mcx(controls, k));
  GadgetizedCircuit g = gadgetize(c);
  BitVec target(c.num_qubits);
  for (auto _ : state) benchmark::DoNotOptimize(strong_amplitude(g, target));
}
BENCHMARK(BM_McxAmplitude)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void BM_GroverAllNeg(benchmark::State& state) {
  BenchInstance inst = generate({"grover-allneg", static_cast<std::uint32_t>(state.range(0)),
                                 0, 2, 7});
  GadgetizedCircuit g = gadgetize(inst.circuit);
  for (auto _ : state) benchmark::DoNotOptimize(strong_amplitude(g, inst.target));
}
BENCHMARK(BM_GroverAllNeg)->Arg(3)->Arg(6);

void BM_Comparator(benchmark::State& state) {
  BenchInstance inst = generate({"comparator", 0, static_cast<std::uint32_t>(state.range(0)),
                                 -1, 7});
  GadgetizedCircuit g = gadgetize(inst.circuit);
  for (auto _ : state) benchmark::DoNotOptimize(strong_amplitude(g, inst.target));
}
BENCHMARK(BM_Comparator)->Arg(4)->Arg(8)->Arg(16);

void BM_GroverCnfWorkers(benchmark::State& state) {
  BenchInstance inst = generate({"grover-cnf", 10, 0, 1, 5});
  GadgetizedCircuit g = gadgetize(inst.circuit);
  EngineOptions opt{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(strong_amplitude(g, inst.target, opt));
}
BENCHMARK(BM_GroverCnfWorkers)->Arg(1)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
