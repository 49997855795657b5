#include "hqsim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace hqsim {

namespace {

struct KahanSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct Partial {
  KahanSum re, im;
  std::uint64_t zeros = 0;
  std::vector<cdouble> table;  // used by the all-amplitudes path
};

std::uint64_t term_count(const GadgetizedCircuit& g) {
  if (g.chi() > 9.0e18) throw std::runtime_error("decomposition too large to enumerate");
  std::uint64_t n = 1;
  for (const LoweredGate& lg : g.gates) n *= lg.terms.size();
  return n;
}

int total_comp(const GadgetizedCircuit& g) {
  int comp = 0;
  for (const LoweredGate& lg : g.gates) comp += lg.comp_s2e;
  return comp;
}

// Replays decomposition branch `index`; false means a projection killed it.
bool run_term(const GadgetizedCircuit& g, std::uint64_t index, ScaledStabilizerState& st,
              cdouble& weight, int& s2e) {
  st = init_state(g.total_qubits);
  weight = cdouble{1.0, 0.0};
  s2e = total_comp(g);
  for (const LoweredGate& lg : g.gates) {
    const std::size_t k = lg.terms.size();
    const WeightedPrep& term = lg.terms[index % k];
    index /= k;
    for (const CliffordOp& op : term.ops) st.apply_clifford(op);
    weight *= term.coeff;
    s2e += term.s2e;
    for (const SimOp& op : lg.glue) {
      if (op.kind == SimOp::Kind::Clifford)
        st.apply_clifford(op.cliff);
      else
        st.project(op.q, op.outcome);
    }
    if (st.is_zero()) return false;
  }
  return true;
}

template <typename Body>
void run_partitioned(std::uint64_t n, int workers, std::vector<Partial>& parts, Body body) {
  int w = std::max(1, workers);
  if (static_cast<std::uint64_t>(w) > n) w = static_cast<int>(n ? n : 1);
  parts.resize(w);
  const std::uint64_t q = n / w, r = n % w;
  auto range = [&](int i) {
    const std::uint64_t lo = i * q + std::min<std::uint64_t>(i, r);
    return std::pair{lo, lo + q + (static_cast<std::uint64_t>(i) < r ? 1 : 0)};
  };
  if (w == 1) {
    auto [lo, hi] = range(0);
    body(parts[0], lo, hi);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (int i = 0; i < w; ++i)
    threads.emplace_back([&, i] {
      auto [lo, hi] = range(i);
      body(parts[i], lo, hi);
    });
  for (std::thread& t : threads) t.join();
}

void fill_stats(EngineStats* stats, const GadgetizedCircuit& g, std::uint64_t n,
                std::uint64_t zeros,
                std::chrono::steady_clock::time_point t0) {
  if (!stats) return;
  stats->terms = n;
  stats->zero_terms = zeros;
  stats->chi = g.chi();
  stats->total_qubits = g.total_qubits;
  stats->time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

cdouble strong_amplitude(const GadgetizedCircuit& g, const BitVec& x, const EngineOptions& opt,
                         EngineStats* stats) {
  const auto t0 = std::chrono::steady_clock::now();
  if (x.size() != g.num_data_qubits)
    throw std::invalid_argument("amplitude index width does not match the circuit");
  BitVec target(g.total_qubits);
  for (std::size_t i = 0; i < x.size(); ++i) target.set(i, x.get(i));
  const std::uint64_t n = term_count(g);
  std::vector<Partial> parts;
  run_partitioned(n, opt.workers, parts,
                  [&](Partial& p, std::uint64_t lo, std::uint64_t hi) {
                    ScaledStabilizerState st = init_state(g.total_qubits);
                    for (std::uint64_t t = lo; t < hi; ++t) {
                      cdouble w;
                      int s2e;
                      if (!run_term(g, t, st, w, s2e)) {
                        ++p.zeros;
                        continue;
                      }
                      const cdouble c = w * pow_sqrt2(s2e) * st.amplitude(target);
                      p.re.add(c.real());
                      p.im.add(c.imag());
                    }
                  });
  cdouble total{0.0, 0.0};
  std::uint64_t zeros = 0;
  for (const Partial& p : parts) {
    total += cdouble{p.re.sum, p.im.sum};
    zeros += p.zeros;
  }
  fill_stats(stats, g, n, zeros, t0);
  return total;
}

cdouble strong_amplitude(const GadgetizedCircuit& g, std::uint64_t x, const EngineOptions& opt,
                         EngineStats* stats) {
  BitVec bits(g.num_data_qubits);
  for (std::uint32_t i = 0; i < g.num_data_qubits && i < 64; ++i)
    bits.set(i, (x >> i) & 1u);
  return strong_amplitude(g, bits, opt, stats);
}

std::vector<cdouble> strong_amplitudes_all(const GadgetizedCircuit& g, const EngineOptions& opt,
                                           EngineStats* stats) {
  const auto t0 = std::chrono::steady_clock::now();
  if (g.num_data_qubits > 26)
    throw std::invalid_argument("amplitude table would not fit in memory");
  const std::size_t dim = std::size_t{1} << g.num_data_qubits;
  const std::uint64_t n = term_count(g);
  std::vector<Partial> parts;
  run_partitioned(n, opt.workers, parts,
                  [&](Partial& p, std::uint64_t lo, std::uint64_t hi) {
                    p.table.assign(dim, cdouble{0.0, 0.0});
                    ScaledStabilizerState st = init_state(g.total_qubits);
                    BitVec target(g.total_qubits);
                    for (std::uint64_t t = lo; t < hi; ++t) {
                      cdouble w;
                      int s2e;
                      if (!run_term(g, t, st, w, s2e)) {
                        ++p.zeros;
                        continue;
                      }
                      const cdouble scale = w * pow_sqrt2(s2e);
                      for (std::size_t x = 0; x < dim; ++x) {
                        for (std::uint32_t i = 0; i < g.num_data_qubits; ++i)
                          target.set(i, (x >> i) & 1u);
                        p.table[x] += scale * st.amplitude(target);
                      }
                    }
                  });
  std::vector<cdouble> total(dim, cdouble{0.0, 0.0});
  std::uint64_t zeros = 0;
  for (const Partial& p : parts) {
    if (!p.table.empty())
      for (std::size_t x = 0; x < dim; ++x) total[x] += p.table[x];
    zeros += p.zeros;
  }
  fill_stats(stats, g, n, zeros, t0);
  return total;
}

cdouble strong_amplitude(const Circuit& c, std::uint64_t x, const EngineOptions& opt,
                         EngineStats* stats) {
  return strong_amplitude(gadgetize(c), x, opt, stats);
}

double strong_probability(const Circuit& c, std::uint64_t x, const EngineOptions& opt,
                          EngineStats* stats) {
  const cdouble a = strong_amplitude(c, x, opt, stats);
  return std::norm(a);
}

}  // namespace hqsim
