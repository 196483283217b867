#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qbf/formula.hpp"

namespace qbf {

// Syntax or semantic error in a QDIMACS document; carries the input line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Pcnf parse_qdimacs(std::istream& in);
Pcnf parse_qdimacs(const std::string& text);
Pcnf parse_qdimacs_file(const std::string& path);

std::string emit_qdimacs(const Pcnf& p);
void emit_qdimacs(const Pcnf& p, std::ostream& out);

}  // namespace qbf
