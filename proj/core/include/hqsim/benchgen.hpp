#ifndef HQSIM_BENCHGEN_HPP
#define HQSIM_BENCHGEN_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hqsim/circuit.hpp"

namespace hqsim {

// Families: cvo-qram (n-bit patterns, k of them), oracle-chain (k chained
// 5-bit truth-table oracles), grover-allneg (all-negated conjunction, n
// qubits), grover-cnf (3 random full-width clauses over n variables),
// comparator (k-bit greater-than into a flag).
struct BenchSpec {
  std::string family;
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  int rounds = -1;  // grover iterations; -1 picks the standard count
  std::uint64_t seed = 0;
};

struct BenchInstance {
  BenchSpec spec;  // rounds and implied sizes resolved
  Circuit circuit;
  std::uint64_t target = 0;  // basis index (qubit i = bit i) whose probability is reported
  std::vector<std::pair<std::uint64_t, cdouble>> prepared;  // cvo-qram (pattern, amplitude)
};

// Deterministic in spec+seed. Throws std::invalid_argument on bad parameters.
BenchInstance generate(const BenchSpec& spec);

// Writes the table files a generated circuit's text form refers to, so the
// emitted .hqc parses back from `dir`.
void write_side_files(const Circuit& c, const std::string& dir);

}  // namespace hqsim

#endif
