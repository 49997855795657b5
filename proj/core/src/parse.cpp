#include "hqsim/parse.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hqsim {

namespace {

bool is_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return true;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_path(const std::string& base, const std::string& rel) {
  if (base.empty() || rel.empty() || rel.front() == '/') return rel;
  if (base.back() == '/') return base + rel;
  return base + "/" + rel;
}

class Parser {
public:
  Parser(std::string_view text, std::string base_dir)
      : text_(text), base_dir_(std::move(base_dir)) {}

  Circuit run() {
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      const std::size_t eol = text_.find('\n', pos);
      std::string_view raw =
          eol == std::string_view::npos ? text_.substr(pos) : text_.substr(pos, eol - pos);
      ++line_;
      parse_line(raw);
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
    if (!saw_qubits_) err("missing qubits declaration");
    return std::move(c_);
  }

private:
  [[noreturn]] void err(const std::string& msg) const { throw ParseError(line_, msg); }

  void parse_line(std::string_view raw) {
    const std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (b == e) return;
    const std::string body(raw.substr(b, e - b));

    const std::size_t sp = body.find_first_of(" \t");
    const std::string head = sp == std::string::npos ? body : body.substr(0, sp);
    const std::string rest = sp == std::string::npos ? std::string() : body.substr(sp + 1);

    if (head == "qubits") return parse_qubits(rest);
    if (!saw_qubits_) err("qubits must come first");
    if (head == "reg") return parse_reg(rest);
    if (head == "h" || head == "s" || head == "sdg" || head == "x" || head == "z")
      return parse_single(head, rest);
    if (head == "cx" || head == "cz") return parse_pair(head, rest);
    if (head == "t") return parse_t(rest);
    if (head == "rz") return parse_rz(rest);
    if (head == "mcx" || head == "mcu") return parse_mc(head, rest);
    if (head == "oracle_rz" || head == "oracle_x" || head == "oracle_rx" || head == "oracle_u")
      return parse_oracle(head, rest);
    if (head == "query" || head == "cond_query") return parse_query(head, rest);
    if (head == "postselect") return parse_postselect(rest);
    err("unknown directive '" + head + "'");
  }

  std::uint64_t parse_uint(const std::string& tok, const char* what) {
    if (!is_number(tok)) err(std::string("expected ") + what + ", got '" + tok + "'");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (errno != 0 || end != tok.c_str() + tok.size())
      err(std::string("bad ") + what + " '" + tok + "'");
    return v;
  }

  std::uint32_t parse_qubit(const std::string& tok) {
    const std::uint64_t v = parse_uint(tok, "qubit index");
    if (saw_qubits_ && v >= c_.num_qubits) err("qubit " + tok + " out of range");
    return static_cast<std::uint32_t>(v);
  }

  double parse_double(const std::string& tok, const char* what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || errno == ERANGE)
      err(std::string("bad ") + what + " '" + tok + "'");
    return v;
  }

  void parse_qubits(const std::string& rest) {
    if (saw_qubits_) err("duplicate qubits declaration");
    const auto toks = split_ws(rest);
    if (toks.size() != 1) err("usage: qubits N");
    const std::uint64_t n = parse_uint(toks[0], "qubit count");
    if (n == 0 || n > 100000) err("qubit count out of range");
    c_.num_qubits = static_cast<std::uint32_t>(n);
    saw_qubits_ = true;
  }

  void parse_reg(const std::string& rest) {
    const auto toks = split_ws(rest);
    if (toks.size() != 2) err("usage: reg NAME lo..hi | reg NAME [a,b,...]");
    if (!is_ident(toks[0])) err("bad register name '" + toks[0] + "'");
    if (c_.find_register(toks[0])) err("duplicate register " + toks[0]);
    Register r;
    r.name = toks[0];
    const std::string& spec = toks[1];
    if (!spec.empty() && spec.front() == '[') {
      if (spec.back() != ']') err("unterminated qubit list");
      std::string inner = spec.substr(1, spec.size() - 2);
      std::stringstream ss(inner);
      std::string item;
      while (std::getline(ss, item, ','))
        r.qubits.push_back(parse_qubit(item));
      if (r.qubits.empty()) err("empty qubit list");
    } else {
      const std::size_t dots = spec.find("..");
      if (dots == std::string::npos) err("bad register spec '" + spec + "'");
      const std::uint32_t lo = parse_qubit(spec.substr(0, dots));
      const std::uint32_t hi = parse_qubit(spec.substr(dots + 2));
      if (hi < lo) err("register range runs backwards");
      for (std::uint32_t q = lo; q <= hi; ++q) r.qubits.push_back(q);
    }
    c_.registers.push_back(std::move(r));
  }

  void parse_single(const std::string& head, const std::string& rest) {
    const auto toks = split_ws(rest);
    if (toks.size() != 1) err("usage: " + head + " QUBIT");
    const std::uint32_t q = parse_qubit(toks[0]);
    CliffordOp op = CliffordOp::h(q);
    if (head == "s") op = CliffordOp::s(q);
    else if (head == "sdg") op = CliffordOp::sdg(q);
    else if (head == "x") op = CliffordOp::x(q);
    else if (head == "z") op = CliffordOp::z(q);
    c_.gates.push_back(GateIr::clifford(op));
  }

  void parse_pair(const std::string& head, const std::string& rest) {
    const auto toks = split_ws(rest);
    if (toks.size() != 2) err("usage: " + head + " QUBIT QUBIT");
    const std::uint32_t a = parse_qubit(toks[0]);
    const std::uint32_t b = parse_qubit(toks[1]);
    c_.gates.push_back(
        GateIr::clifford(head == "cx" ? CliffordOp::cx(a, b) : CliffordOp::cz(a, b)));
  }

  void parse_t(const std::string& rest) {
    const auto toks = split_ws(rest);
    if (toks.size() != 1) err("usage: t QUBIT");
    c_.gates.push_back(GateIr::t(parse_qubit(toks[0])));
  }

  void parse_rz(const std::string& rest) {
    const auto toks = split_ws(rest);
    if (toks.size() != 2) err("usage: rz THETA QUBIT");
    const double theta = parse_double(toks[0], "angle");
    c_.gates.push_back(GateIr::rz(theta, parse_qubit(toks[1])));
  }

  std::vector<std::uint32_t> parse_qubit_list(const std::string& tok) {
    if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']')
      err("expected [q,q,...], got '" + tok + "'");
    std::vector<std::uint32_t> out;
    std::stringstream ss(tok.substr(1, tok.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_qubit(item));
    if (out.empty()) err("empty qubit list");
    return out;
  }

  cdouble parse_complex(const char*& p) {
    char* end = nullptr;
    const double re = std::strtod(p, &end);
    if (end == p) err("bad complex number");
    p = end;
    const double im = std::strtod(p, &end);
    if (end == p) err("bad complex number");
    p = end;
    if (*p != 'i') err("complex number missing trailing i");
    ++p;
    return {re, im};
  }

  Unitary2 parse_u(const std::string& tok) {
    // u=(re+imi,re+imi;re+imi,re+imi)
    if (tok.rfind("u=(", 0) != 0 || tok.back() != ')') err("expected u=(...), got '" + tok + "'");
    const std::string inner = tok.substr(3, tok.size() - 4);
    const char* p = inner.c_str();
    Unitary2 u;
    u.u00 = parse_complex(p);
    if (*p++ != ',') err("expected ',' in u=(...)");
    u.u01 = parse_complex(p);
    if (*p++ != ';') err("expected ';' in u=(...)");
    u.u10 = parse_complex(p);
    if (*p++ != ',') err("expected ',' in u=(...)");
    u.u11 = parse_complex(p);
    if (*p != '\0') err("trailing characters in u=(...)");
    return u;
  }

  void parse_mc(const std::string& head, const std::string& rest) {
    const auto toks = split_ws(rest);
    if (head == "mcx") {
      if (toks.size() != 2) err("usage: mcx [c,...] TARGET");
      c_.gates.push_back(GateIr::mcx(parse_qubit_list(toks[0]), parse_qubit(toks[1])));
    } else {
      if (toks.size() != 3) err("usage: mcu [c,...] TARGET u=(...)");
      c_.gates.push_back(
          GateIr::mcu(parse_qubit_list(toks[0]), parse_qubit(toks[1]), parse_u(toks[2])));
    }
  }

  // Predicate s-expressions.

  std::vector<std::string> pred_tokens(const std::string& s, std::size_t& pos) {
    // Extract one balanced (...) group starting at pos, then tokenize it.
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size() || s[pos] != '(') err("expected predicate starting with '('");
    int depth = 0;
    const std::size_t start = pos;
    for (; pos < s.size(); ++pos) {
      if (s[pos] == '(') ++depth;
      else if (s[pos] == ')' && --depth == 0) { ++pos; break; }
    }
    if (depth != 0) err("unbalanced parentheses in predicate");
    std::vector<std::string> toks;
    std::string cur;
    for (std::size_t i = start; i < pos; ++i) {
      const char ch = s[i];
      if (ch == '(' || ch == ')') {
        if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
        toks.push_back(std::string(1, ch));
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!cur.empty()) { toks.push_back(cur); cur.clear(); }
      } else {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
  }

  Pred parse_pred(const std::vector<std::string>& toks, std::size_t& i) {
    if (i >= toks.size() || toks[i] != "(") err("expected '(' in predicate");
    ++i;
    if (i >= toks.size()) err("truncated predicate");
    const std::string op = toks[i++];
    auto atom = [&]() -> std::string {
      if (i >= toks.size() || toks[i] == "(" || toks[i] == ")") err("expected name in predicate");
      return toks[i++];
    };
    Pred p;
    if (op == "true") {
      p = Pred::make_true();
    } else if (op == "false") {
      p = Pred::make_false();
    } else if (op == "eq") {
      const std::string a = atom();
      const std::string b = atom();
      if (is_number(b)) p = Pred::eq_const(a, parse_uint(b, "constant"));
      else p = Pred::eq_vars(a, b);
    } else if (op == "gt") {
      const std::string a = atom();
      p = Pred::gt(a, atom());
    } else if (op == "inc") {
      const std::string a = atom();
      p = Pred::inc(a, atom());
    } else if (op == "table") {
      std::vector<std::string> items;
      while (i < toks.size() && toks[i] != ")") items.push_back(atom());
      if (items.size() < 2) err("table needs registers and a file");
      const std::string file = items.back();
      items.pop_back();
      std::uint32_t width = 0;
      for (const std::string& rn : items) {
        const Register* r = c_.find_register(rn);
        if (!r) err("unknown register '" + rn + "' in table predicate");
        width += r->width();
      }
      if (width == 0 || width > 63) err("table operand width out of range");
      p = Pred::table(std::move(items), file, load_bit_rows(file, width));
    } else if (op == "not") {
      p = Pred::not_of(parse_pred(toks, i));
    } else if (op == "and" || op == "or") {
      std::vector<Pred> children;
      while (i < toks.size() && toks[i] == "(") children.push_back(parse_pred(toks, i));
      if (children.empty()) err(op + " needs at least one operand");
      p = op == "and" ? Pred::and_of(std::move(children)) : Pred::or_of(std::move(children));
    } else {
      err("unknown predicate '" + op + "'");
    }
    if (i >= toks.size() || toks[i] != ")") err("expected ')' in predicate");
    ++i;
    return p;
  }

  Pred parse_pred_str(const std::string& s, std::size_t& pos) {
    const auto toks = pred_tokens(s, pos);
    std::size_t i = 0;
    Pred p = parse_pred(toks, i);
    if (i != toks.size()) err("trailing tokens in predicate");
    return p;
  }

  std::vector<std::uint64_t> load_bit_rows(const std::string& file, std::uint32_t width) {
    std::ifstream in(join_path(base_dir_, file));
    if (!in) err("cannot open table file '" + file + "'");
    std::vector<std::uint64_t> rows;
    std::string ln;
    int fline = 0;
    while (std::getline(in, ln)) {
      ++fline;
      const std::size_t hash = ln.find('#');
      if (hash != std::string::npos) ln = ln.substr(0, hash);
      const auto toks = split_ws(ln);
      if (toks.empty()) continue;
      if (toks.size() != 1 || toks[0].size() != width)
        err("table file '" + file + "' row " + std::to_string(fline) + ": expected " +
            std::to_string(width) + " bits");
      std::uint64_t v = 0;
      for (char ch : toks[0]) {
        if (ch != '0' && ch != '1')
          err("table file '" + file + "' row " + std::to_string(fline) + ": bad bit");
        v = (v << 1) | static_cast<std::uint64_t>(ch - '0');
      }
      rows.push_back(v);
    }
    return rows;
  }

  void parse_oracle(const std::string& head, const std::string& rest) {
    std::size_t pos = 0;
    Pred pred = parse_pred_str(rest, pos);
    const auto toks = split_ws(std::string_view(rest).substr(pos));
    if (head == "oracle_rz") {
      if (toks.size() != 1) err("usage: oracle_rz PRED THETA");
      c_.gates.push_back(GateIr::oracle_rz(std::move(pred), parse_double(toks[0], "angle")));
    } else if (head == "oracle_x") {
      if (toks.size() != 1) err("usage: oracle_x PRED TARGET");
      c_.gates.push_back(GateIr::oracle_x(std::move(pred), parse_qubit(toks[0])));
    } else if (head == "oracle_rx") {
      if (toks.size() != 2) err("usage: oracle_rx PRED THETA TARGET");
      const double theta = parse_double(toks[0], "angle");
      c_.gates.push_back(GateIr::oracle_rx(std::move(pred), theta, parse_qubit(toks[1])));
    } else {
      if (toks.size() != 2) err("usage: oracle_u PRED TARGET u=(...)");
      c_.gates.push_back(
          GateIr::oracle_u(std::move(pred), parse_qubit(toks[0]), parse_u(toks[1])));
    }
  }

  QueryFn parse_fn(const std::string& tok, const std::string& xname, const std::string& yname) {
    if (tok == "inc") return QueryFn::make_inc();
    if (tok.rfind("table:", 0) == 0) {
      const std::string file = tok.substr(6);
      if (file.empty()) err("table: needs a file path");
      const Register* x = c_.find_register(xname);
      const Register* y = c_.find_register(yname);
      if (!x) err("unknown register '" + xname + "'");
      if (!y) err("unknown register '" + yname + "'");
      const std::uint32_t width = x->width() + y->width();
      if (width > 63) err("query table operand width out of range");
      std::vector<std::pair<std::uint64_t, std::uint64_t>> map;
      for (std::uint64_t row : load_bit_rows(file, width))
        map.emplace_back(row >> y->width(), row & ((std::uint64_t{1} << y->width()) - 1));
      return QueryFn::make_table(file, std::move(map));
    }
    err("unknown query function '" + tok + "'");
  }

  void parse_query(const std::string& head, const std::string& rest) {
    if (head == "query") {
      const auto toks = split_ws(rest);
      if (toks.size() != 4 || toks[2] != "->") err("usage: query FN XREG -> YREG");
      c_.gates.push_back(GateIr::query(parse_fn(toks[0], toks[1], toks[3]), toks[1], toks[3]));
    } else {
      std::size_t pos = 0;
      Pred pred = parse_pred_str(rest, pos);
      const auto toks = split_ws(std::string_view(rest).substr(pos));
      if (toks.size() != 4 || toks[2] != "->") err("usage: cond_query PRED FN XREG -> YREG");
      c_.gates.push_back(GateIr::cond_query(std::move(pred), parse_fn(toks[0], toks[1], toks[3]),
                                            toks[1], toks[3]));
    }
  }

  void parse_postselect(const std::string& rest) {
    const auto toks = split_ws(rest);
    if (toks.size() != 3 || toks[1] != "->") err("usage: postselect QUBIT -> BIT");
    const std::uint32_t q = parse_qubit(toks[0]);
    if (toks[2] != "0" && toks[2] != "1") err("postselect outcome must be 0 or 1");
    c_.gates.push_back(GateIr::postselect(q, toks[2] == "1"));
  }

  std::string_view text_;
  std::string base_dir_;
  Circuit c_;
  bool saw_qubits_ = false;
  int line_ = 0;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_complex(cdouble z) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

std::string fmt_u(const Unitary2& u) {
  return "u=(" + fmt_complex(u.u00) + "," + fmt_complex(u.u01) + ";" + fmt_complex(u.u10) + "," +
         fmt_complex(u.u11) + ")";
}

std::string fmt_qubit_list(const std::vector<std::uint32_t>& qs) {
  std::string out = "[";
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(qs[i]);
  }
  return out + "]";
}

void emit_pred(const Pred& p, std::string& out) {
  switch (p.kind) {
    case Pred::Kind::True: out += "(true)"; return;
    case Pred::Kind::False: out += "(false)"; return;
    case Pred::Kind::EqVars: out += "(eq " + p.rega + " " + p.regb + ")"; return;
    case Pred::Kind::EqConst: out += "(eq " + p.rega + " " + std::to_string(p.value) + ")"; return;
    case Pred::Kind::Gt: out += "(gt " + p.rega + " " + p.regb + ")"; return;
    case Pred::Kind::Inc: out += "(inc " + p.rega + " " + p.regb + ")"; return;
    case Pred::Kind::Table:
      out += "(table";
      for (const std::string& r : p.regs) out += " " + r;
      out += " " + p.file + ")";
      return;
    case Pred::Kind::Not:
      out += "(not ";
      emit_pred(p.children[0], out);
      out += ")";
      return;
    case Pred::Kind::And:
    case Pred::Kind::Or:
      out += p.kind == Pred::Kind::And ? "(and" : "(or";
      for (const Pred& ch : p.children) {
        out += " ";
        emit_pred(ch, out);
      }
      out += ")";
      return;
  }
}

std::string fmt_pred(const Pred& p) {
  std::string out;
  emit_pred(p, out);
  return out;
}

std::string fmt_fn(const QueryFn& fn) {
  return fn.kind == QueryFn::Kind::Inc ? "inc" : "table:" + fn.file;
}

}  // namespace

Circuit parse_hqc(std::string_view text, const std::string& base_dir) {
  return Parser(text, base_dir).run();
}

Circuit parse_hqc_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::size_t slash = path.rfind('/');
  return parse_hqc(ss.str(), slash == std::string::npos ? std::string() : path.substr(0, slash));
}

std::string emit_hqc(const Circuit& c) {
  std::string out = "qubits " + std::to_string(c.num_qubits) + "\n";
  for (const Register& r : c.registers) {
    bool contiguous = true;
    for (std::size_t i = 1; i < r.qubits.size(); ++i)
      if (r.qubits[i] != r.qubits[i - 1] + 1) contiguous = false;
    out += "reg " + r.name + " ";
    if (contiguous)
      out += std::to_string(r.qubits.front()) + ".." + std::to_string(r.qubits.back());
    else
      out += fmt_qubit_list(r.qubits);
    out += "\n";
  }
  for (const GateIr& g : c.gates) {
    switch (g.kind) {
      case GateIr::Kind::Clifford: {
        const CliffordOp& op = g.cliff;
        switch (op.kind) {
          case CliffordOp::Kind::H: out += "h " + std::to_string(op.q0); break;
          case CliffordOp::Kind::S: out += "s " + std::to_string(op.q0); break;
          case CliffordOp::Kind::Sdg: out += "sdg " + std::to_string(op.q0); break;
          case CliffordOp::Kind::X: out += "x " + std::to_string(op.q0); break;
          case CliffordOp::Kind::Z: out += "z " + std::to_string(op.q0); break;
          case CliffordOp::Kind::CX:
            out += "cx " + std::to_string(op.q0) + " " + std::to_string(op.q1);
            break;
          case CliffordOp::Kind::CZ:
            out += "cz " + std::to_string(op.q0) + " " + std::to_string(op.q1);
            break;
        }
        break;
      }
      case GateIr::Kind::T: out += "t " + std::to_string(g.q0); break;
      case GateIr::Kind::Rz: out += "rz " + fmt_double(g.theta) + " " + std::to_string(g.q0); break;
      case GateIr::Kind::Mcx:
        out += "mcx " + fmt_qubit_list(g.controls) + " " + std::to_string(g.q0);
        break;
      case GateIr::Kind::Mcu:
        out += "mcu " + fmt_qubit_list(g.controls) + " " + std::to_string(g.q0) + " " + fmt_u(g.u);
        break;
      case GateIr::Kind::OracleRz:
        out += "oracle_rz " + fmt_pred(g.pred) + " " + fmt_double(g.theta);
        break;
      case GateIr::Kind::OracleX:
        out += "oracle_x " + fmt_pred(g.pred) + " " + std::to_string(g.q0);
        break;
      case GateIr::Kind::OracleRx:
        out += "oracle_rx " + fmt_pred(g.pred) + " " + fmt_double(g.theta) + " " +
               std::to_string(g.q0);
        break;
      case GateIr::Kind::OracleU:
        out += "oracle_u " + fmt_pred(g.pred) + " " + std::to_string(g.q0) + " " + fmt_u(g.u);
        break;
      case GateIr::Kind::Query:
        out += "query " + fmt_fn(g.fn) + " " + g.xreg + " -> " + g.yreg;
        break;
      case GateIr::Kind::CondQuery:
        out += "cond_query " + fmt_pred(g.pred) + " " + fmt_fn(g.fn) + " " + g.xreg + " -> " +
               g.yreg;
        break;
      case GateIr::Kind::Postselect:
        out += "postselect " + std::to_string(g.q0) + " -> " + (g.outcome ? "1" : "0");
        break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace hqsim
