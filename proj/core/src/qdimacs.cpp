#include "qbf/qdimacs.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qbf {

namespace {

struct Token {
  std::string text;
  int line;
};

// Whitespace-separated tokens with line tracking; comment lines dropped.
std::vector<Token> tokenize(std::istream& in) {
  std::vector<Token> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i < line.size() && line[i] == 'c') continue;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) tokens.push_back(Token{tok, lineno});
  }
  return tokens;
}

int64_t to_number(const Token& t) {
  size_t pos = 0;
  int64_t value = 0;
  try {
    value = std::stoll(t.text, &pos);
  } catch (const std::exception&) {
    throw ParseError(t.line, "expected a number, got '" + t.text + "'");
  }
  if (pos != t.text.size())
    throw ParseError(t.line, "expected a number, got '" + t.text + "'");
  return value;
}

}  // namespace

Pcnf parse_qdimacs(std::istream& in) {
  std::vector<Token> tokens = tokenize(in);
  size_t pos = 0;
  auto next = [&]() -> const Token& {
    if (pos >= tokens.size()) {
      int line = tokens.empty() ? 1 : tokens.back().line;
      throw ParseError(line, "unexpected end of input");
    }
    return tokens[pos++];
  };

  if (tokens.empty()) throw ParseError(1, "empty input");
  const Token& p = next();
  if (p.text != "p") throw ParseError(p.line, "expected 'p cnf' header");
  const Token& cnf = next();
  if (cnf.text != "cnf") throw ParseError(cnf.line, "expected 'p cnf' header");
  int64_t num_vars = to_number(next());
  int64_t num_clauses = to_number(next());
  if (num_vars < 0 || num_clauses < 0)
    throw ParseError(p.line, "negative counts in header");

  auto check_var = [&](int64_t v, int line) {
    if (v < 1 || v > num_vars)
      throw ParseError(line, "variable " + std::to_string(v) +
                                 " exceeds declared maximum " +
                                 std::to_string(num_vars));
    return static_cast<Var>(v);
  };

  std::vector<QuantBlock> blocks;
  std::vector<std::vector<Lit>> clauses;
  bool in_prefix = true;

  while (pos < tokens.size()) {
    const Token& t = tokens[pos];
    if (t.text == "a" || t.text == "e") {
      if (!in_prefix)
        throw ParseError(t.line, "quantifier line after first clause");
      ++pos;
      QuantBlock b{t.text == "e" ? Quant::Exists : Quant::Forall, 0, {}};
      while (true) {
        const Token& vt = next();
        int64_t v = to_number(vt);
        if (v == 0) break;
        if (v < 0) throw ParseError(vt.line, "negative variable in prefix");
        b.vars.push_back(check_var(v, vt.line));
      }
      if (b.vars.empty())
        throw ParseError(t.line, "empty quantifier block");
      blocks.push_back(std::move(b));
    } else {
      in_prefix = false;
      std::vector<Lit> clause;
      while (true) {
        const Token& lt = next();
        int64_t v = to_number(lt);
        if (v == 0) break;
        check_var(std::llabs(v), lt.line);
        clause.push_back(Lit(static_cast<int32_t>(v)));
      }
      clauses.push_back(std::move(clause));
    }
  }

  if (static_cast<int64_t>(clauses.size()) != num_clauses) {
    int line = tokens.back().line;
    throw ParseError(line, "clause count " + std::to_string(clauses.size()) +
                               " does not match header " +
                               std::to_string(num_clauses));
  }
  try {
    return Pcnf::create(std::move(blocks), std::move(clauses));
  } catch (const std::invalid_argument& e) {
    throw ParseError(tokens.front().line, e.what());
  }
}

Pcnf parse_qdimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_qdimacs(in);
}

Pcnf parse_qdimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read formula: " + path);
  return parse_qdimacs(in);
}

void emit_qdimacs(const Pcnf& p, std::ostream& out) {
  out << "p cnf " << p.max_var() << " " << p.num_clauses() << "\n";
  for (const auto& b : p.blocks()) {
    out << (b.kind == Quant::Exists ? "e" : "a");
    for (Var v : b.vars) out << " " << v;
    out << " 0\n";
  }
  for (const auto& c : p.clauses()) {
    for (const Lit& l : c) out << l.to_dimacs() << " ";
    out << "0\n";
  }
}

std::string emit_qdimacs(const Pcnf& p) {
  std::ostringstream out;
  emit_qdimacs(p, out);
  return out.str();
}

}  // namespace qbf
