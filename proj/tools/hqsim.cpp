#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hqsim/benchgen.hpp"
#include "hqsim/decomp.hpp"
#include "hqsim/dense.hpp"
#include "hqsim/engine.hpp"
#include "hqsim/lowering.hpp"
#include "hqsim/parse.hpp"

namespace {

using namespace hqsim;

int default_workers() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

std::string fmt_g(double v, int digits = 15) {
  std::ostringstream o;
  o << std::setprecision(digits) << v;
  return o.str();
}

// chi and model counts are integers stored as doubles; print them as such
// while they are exactly representable.
std::string fmt_count(double v) {
  if (v >= 0 && v < 9.0e18 && v == std::floor(v)) {
    std::ostringstream o;
    o << static_cast<std::uint64_t>(v);
    return o.str();
  }
  return fmt_g(v);
}

// Bit string over the data qubits, character i giving qubit i.
BitVec parse_bits(const std::string& s, std::uint32_t n) {
  if (s.size() != n)
    throw std::invalid_argument("--x wants " + std::to_string(n) + " bits, got " +
                                std::to_string(s.size()));
  BitVec b(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("--x must be over {0,1}");
    b.set(i, s[i] == '1');
  }
  return b;
}

std::uint64_t bits_to_index(const BitVec& b) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.get(i)) v |= std::uint64_t{1} << i;
  return v;
}

std::string fmt_clifford(const CliffordOp& op) {
  switch (op.kind) {
    case CliffordOp::Kind::H: return "h" + std::to_string(op.q0);
    case CliffordOp::Kind::S: return "s" + std::to_string(op.q0);
    case CliffordOp::Kind::Sdg: return "sdg" + std::to_string(op.q0);
    case CliffordOp::Kind::X: return "x" + std::to_string(op.q0);
    case CliffordOp::Kind::Z: return "z" + std::to_string(op.q0);
    case CliffordOp::Kind::CX:
      return "cx" + std::to_string(op.q0) + "," + std::to_string(op.q1);
    case CliffordOp::Kind::CZ:
      return "cz" + std::to_string(op.q0) + "," + std::to_string(op.q1);
  }
  return "?";
}

std::string fmt_sim_op(const SimOp& op) {
  if (op.kind == SimOp::Kind::Clifford) return fmt_clifford(op.cliff);
  return "proj" + std::to_string(op.q) + "=" + std::to_string(op.outcome);
}

std::string fmt_coeff(cdouble c) {
  return "(" + fmt_g(c.real(), 12) + "," + fmt_g(c.imag(), 12) + ")";
}

int run_simulate(const std::string& file, const std::string& bits, int threads) {
  Circuit c = parse_hqc_file(file);
  GadgetizedCircuit g = gadgetize(c);
  BitVec x = parse_bits(bits, c.num_qubits);
  EngineOptions opt{threads};
  EngineStats st;
  cdouble a = strong_amplitude(g, x, opt, &st);
  std::cout << fmt_g(std::norm(a)) << "\n";
  std::cerr << "chi " << fmt_count(st.chi) << ", terms " << st.terms << " (" << st.zero_terms
            << " annihilated), qubits " << st.total_qubits << ", " << fmt_g(st.time_ms, 4)
            << " ms\n";
  return 0;
}

int run_lower(const std::string& file) {
  Circuit c = parse_hqc_file(file);
  GadgetizedCircuit g = gadgetize(c);
  std::cout << "data qubits   " << g.num_data_qubits << "\n"
            << "total qubits  " << g.total_qubits << "\n"
            << "chi           " << fmt_count(g.chi()) << "\n";
  for (std::size_t i = 0; i < g.gates.size(); ++i) {
    const LoweredGate& lg = g.gates[i];
    std::cout << "gate " << i << " (source op " << lg.source << "): " << lg.terms.size()
              << (lg.terms.size() == 1 ? " term" : " terms") << ", compensation 2^{"
              << lg.comp_s2e << "/2}\n";
    for (std::size_t t = 0; t < lg.terms.size(); ++t) {
      const WeightedPrep& term = lg.terms[t];
      std::cout << "  term " << t << ": coeff " << fmt_coeff(term.coeff) << " s2e " << term.s2e
                << ":";
      if (term.ops.empty()) std::cout << " (empty prep)";
      for (const CliffordOp& op : term.ops) std::cout << " " << fmt_clifford(op);
      std::cout << "\n";
    }
    if (!lg.glue.empty()) {
      std::cout << "  glue:";
      for (const SimOp& op : lg.glue) std::cout << " " << fmt_sim_op(op);
      std::cout << "\n";
    }
  }
  return 0;
}

// Widths spec "x=4,y=2": registers in listed order on consecutive qubits.
std::vector<std::pair<std::string, std::uint32_t>> parse_widths(const std::string& s) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("--widths wants name=width pairs, got '" + item + "'");
    std::string name = item.substr(0, eq);
    int w = std::stoi(item.substr(eq + 1));
    if (w < 1 || w > 62) throw std::invalid_argument("register width out of range: " + item);
    out.emplace_back(name, static_cast<std::uint32_t>(w));
  }
  if (out.empty()) throw std::invalid_argument("--widths is empty");
  return out;
}

int run_decomp(const std::string& pred, const std::string& widths_spec) {
  auto widths = parse_widths(widths_spec);
  std::uint32_t total = 0;
  for (auto& [name, w] : widths) total += w;
  // Reuse the circuit parser: wrap the predicate in a minimal phase oracle.
  std::string text = "qubits " + std::to_string(total) + "\n";
  std::uint32_t at = 0;
  for (auto& [name, w] : widths) {
    text += "reg " + name + " " + std::to_string(at) + ".." + std::to_string(at + w - 1) + "\n";
    at += w;
  }
  text += "oracle_rz " + pred + " 1\n";
  Circuit c = parse_hqc(text);
  RPred rp = resolve_pred(c.gates[0].pred, c);
  EffectualPair ep = build_effectual(rp);
  std::cout << "slots " << ep.width << "\n";
  for (std::size_t t = 0; t < ep.pos.size(); ++t) {
    const WeightedPrep& term = ep.pos[t];
    std::cout << "term " << t << ": coeff " << fmt_coeff(term.coeff) << " s2e " << term.s2e
              << ":";
    if (term.ops.empty()) std::cout << " (empty prep)";
    for (const CliffordOp& op : term.ops) std::cout << " " << fmt_clifford(op);
    std::cout << "\n";
  }
  std::cout << "terms " << ep.pos.size() << "\n"
            << "complement terms " << ep.neg.size() << "\n"
            << "models " << fmt_count(model_count(ep.pos, ep.width)) << "\n";
  return 0;
}

int run_verify(const std::string& file, const std::string& bits, std::uint32_t cap) {
  Circuit c = parse_hqc_file(file);
  if (c.num_qubits > cap) {
    std::cerr << "verify: circuit has " << c.num_qubits << " qubits, reference cap is " << cap
              << " (raise with --cap)\n";
    return 2;
  }
  BitVec x = parse_bits(bits, c.num_qubits);
  std::uint64_t idx = bits_to_index(x);
  DenseState ref = dense_simulate(c, cap);
  double p_ref = std::norm(ref.amp[idx]);
  EngineOptions opt{default_workers()};
  double p_strong = strong_probability(c, idx, opt);
  double diff = std::abs(p_strong - p_ref);
  std::cout << "strong     " << fmt_g(p_strong) << "\n"
            << "reference  " << fmt_g(p_ref) << "\n"
            << "diff       " << fmt_g(diff) << "\n";
  if (diff < 1e-8) {
    std::cout << "verify: OK\n";
    return 0;
  }
  std::cerr << "verify: MISMATCH (diff " << fmt_g(diff) << " >= 1e-8)\n";
  return 1;
}

constexpr const char* kCsvHeader =
    "family,n,k,rounds,seed,chi,total_qubits,terms,zero_terms,probability,time_ms";

int run_bench(const BenchSpec& spec, const std::string& csv, int threads) {
  BenchInstance inst = generate(spec);
  GadgetizedCircuit g = gadgetize(inst.circuit);
  EngineOptions opt{threads};
  EngineStats st;
  cdouble a = strong_amplitude(g, inst.target, opt, &st);
  double p = std::norm(a);

  std::ostringstream row;
  row << inst.spec.family << "," << inst.spec.n << "," << inst.spec.k << ","
      << std::max(0, inst.spec.rounds) << "," << inst.spec.seed << "," << fmt_count(st.chi)
      << "," << st.total_qubits << "," << st.terms << "," << st.zero_terms << ","
      << fmt_g(p) << "," << fmt_g(st.time_ms, 4);

  if (!csv.empty()) {
    std::error_code ec;
    bool fresh = !std::filesystem::exists(csv, ec) || std::filesystem::file_size(csv, ec) == 0;
    std::ofstream out(csv, std::ios::app);
    if (!out) throw std::runtime_error("cannot open csv file: " + csv);
    if (fresh) out << kCsvHeader << "\n";
    out << row.str() << "\n";
  }
  std::cout << row.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strong simulator for circuits with high-level non-stabilizer gates"};
  app.require_subcommand(1);

  std::string file, bits, pred, widths_spec, csv;
  int threads = default_workers();
  std::uint32_t cap = kDenseMaxQubits;
  BenchSpec spec;

  CLI::App* sim = app.add_subcommand("simulate", "probability of one basis outcome");
  sim->add_option("file", file, "circuit file (.hqc)")->required();
  sim->add_option("--x", bits, "outcome bits, character i giving qubit i")->required();
  sim->add_option("--threads", threads, "worker threads");

  CLI::App* low = app.add_subcommand("lower", "print the gadgetized circuit");
  low->add_option("file", file, "circuit file (.hqc)")->required();

  CLI::App* dec = app.add_subcommand("decomp", "print a predicate's stabilizer decomposition");
  dec->add_option("pred", pred, "predicate, e.g. \"(gt x y)\"")->required();
  dec->add_option("--widths", widths_spec, "register widths, e.g. x=4,y=4")->required();

  CLI::App* ver = app.add_subcommand("verify", "cross-check against the dense reference");
  ver->add_option("file", file, "circuit file (.hqc)")->required();
  ver->add_option("--x", bits, "outcome bits, character i giving qubit i")->required();
  ver->add_option("--cap", cap, "reference qubit cap");

  CLI::App* ben = app.add_subcommand("bench", "generate, run and record a benchmark instance");
  ben->add_option("--family", spec.family,
                  "grover-allneg | grover-cnf | cvo-qram | oracle-chain | comparator")
      ->required();
  ben->add_option("--n", spec.n, "problem size");
  ben->add_option("--k", spec.k, "family parameter");
  ben->add_option("--rounds", spec.rounds, "iteration count (-1 picks the standard count)");
  ben->add_option("--seed", spec.seed, "rng seed");
  ben->add_option("--csv", csv, "append the result row to this file");
  ben->add_option("--threads", threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return run_simulate(file, bits, threads);
    if (low->parsed()) return run_lower(file);
    if (dec->parsed()) return run_decomp(pred, widths_spec);
    if (ver->parsed()) return run_verify(file, bits, cap);
    if (ben->parsed()) return run_bench(spec, csv, threads);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
