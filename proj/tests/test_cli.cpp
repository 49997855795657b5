// Contract tests for the command-line tool: subcommand output, exit codes
// (0 success, 1 verification failure, 2 usage or parse errors) and the csv
// schema, exercised through the installed binary.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hqsim-cli-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

RunResult run_cli(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  fs::path err = work_dir() / "stderr.txt";
  std::string cmd = std::string(HQSIM_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                    err.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_file(const std::string& name, const std::string& text) {
  fs::path p = work_dir() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("simulate prints the outcome probability") {
  fs::path bell = write_file("bell.hqc", "qubits 2\nh 0\ncx 0 1\n");
  RunResult r = run_cli("simulate " + bell.string() + " --x 00");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0.5\n");

  r = run_cli("simulate " + bell.string() + " --x 01");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0\n");
}

TEST_CASE("verify agrees with the reference and respects the qubit cap") {
  fs::path bell = write_file("bell.hqc", "qubits 2\nh 0\ncx 0 1\n");
  RunResult r = run_cli("verify " + bell.string() + " --x 11");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("verify: OK") != std::string::npos);

  // 15 qubits sits above the default dense cap of 14; raising the cap works.
  std::ostringstream wide;
  wide << "qubits 15\nh 0\n";
  fs::path w = write_file("wide.hqc", wide.str());
  r = run_cli("verify " + w.string() + " --x 000000000000000");
  CHECK(r.exit_code == 2);
  r = run_cli("verify " + w.string() + " --x 000000000000000 --cap 15");
  CHECK(r.exit_code == 0);
}

TEST_CASE("usage and parse errors exit with code 2") {
  CHECK(run_cli("simulate /nonexistent.hqc --x 0").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("simulate").exit_code == 2);

  fs::path bad = write_file("bad.hqc", "qubits 2\nnope 0\n");
  RunResult r = run_cli("simulate " + bad.string() + " --x 00");
  CHECK(r.exit_code == 2);
  CHECK(!r.err.empty());

  fs::path bell = write_file("bell.hqc", "qubits 2\nh 0\ncx 0 1\n");
  CHECK(run_cli("simulate " + bell.string() + " --x 012").exit_code == 2);
  CHECK(run_cli("bench --family no-such-family").exit_code == 2);
}

TEST_CASE("decomp prints the term list") {
  RunResult r = run_cli("decomp \"(gt x y)\" --widths x=4,y=4");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("terms 4") != std::string::npos);
  CHECK(r.out.find("models 120") != std::string::npos);
}

TEST_CASE("lower reports the decomposition size") {
  fs::path f = write_file("mcx.hqc", "qubits 4\nmcx [0,1,2] 3\n");
  RunResult r = run_cli("lower " + f.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("chi           2") != std::string::npos);
}

TEST_CASE("bench appends csv rows under a fixed header") {
  fs::path csv = work_dir() / "bench.csv";
  fs::remove(csv);
  RunResult r = run_cli("bench --family grover-allneg --n 3 --seed 9 --csv " + csv.string());
  CHECK(r.exit_code == 0);
  r = run_cli("bench --family comparator --k 2 --seed 9 --csv " + csv.string());
  CHECK(r.exit_code == 0);

  std::istringstream in(slurp(csv));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "family,n,k,rounds,seed,chi,total_qubits,terms,zero_terms,probability,time_ms");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.find("family") == std::string::npos);  // header written once
  }
  CHECK(rows == 2);
}

TEST_CASE("bench rows are deterministic in the seed") {
  RunResult a = run_cli("bench --family cvo-qram --n 4 --k 2 --seed 3");
  RunResult b = run_cli("bench --family cvo-qram --n 4 --k 2 --seed 3");
  CHECK(a.exit_code == 0);
  // Timing differs between runs; everything before the last column must not.
  auto strip_time = [](const std::string& s) { return s.substr(0, s.rfind(',')); };
  CHECK(strip_time(a.out) == strip_time(b.out));
}
