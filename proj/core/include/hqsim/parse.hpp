#ifndef HQSIM_PARSE_HPP
#define HQSIM_PARSE_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "hqsim/circuit.hpp"

namespace hqsim {

struct ParseError : std::runtime_error {
  int line;  // 1-based source line

  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Parse circuit text. Table files referenced by predicates and query
// functions are loaded relative to base_dir when their paths are relative.
// Throws ParseError; run validate() separately for semantic checks.
Circuit parse_hqc(std::string_view text, const std::string& base_dir = {});

// Parse from a file; table paths resolve relative to the file's directory.
Circuit parse_hqc_file(const std::string& path);

// Canonical text form. parse_hqc(emit_hqc(c)) reproduces c exactly.
std::string emit_hqc(const Circuit& c);

}  // namespace hqsim

#endif
