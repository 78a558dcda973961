#ifndef SYMTA_SEXPR_HPP
#define SYMTA_SEXPR_HPP

#include <string>
#include <vector>

#include "symta/errors.hpp"

namespace symta {

/// Minimal s-expression value: an atom or a list. Comments run from ';' to
/// the end of the line.
struct Sexpr {
  bool atom = false;
  std::string text;          // for atoms
  std::vector<Sexpr> items;  // for lists

  static Sexpr make_atom(std::string s) { return {true, std::move(s), {}}; }
  static Sexpr make_list(std::vector<Sexpr> xs) { return {false, {}, std::move(xs)}; }

  bool is_atom(const std::string& s) const { return atom && text == s; }
  const Sexpr& at(std::size_t i) const;
  std::size_t size() const { return items.size(); }
  /// Head atom of a list, or "" when not applicable.
  std::string head() const;

  std::string str() const;
};

/// Parses a single s-expression.
Sexpr parse_sexpr(const std::string& text);

/// Parses a whole file: a sequence of s-expressions.
std::vector<Sexpr> parse_sexpr_file(const std::string& text);

} // namespace symta

#endif
