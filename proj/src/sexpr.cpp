#include "symta/sexpr.hpp"

#include <cctype>

namespace symta {

const Sexpr& Sexpr::at(std::size_t i) const {
  if (atom || i >= items.size())
    throw parse_error("s-expression " + str() + " has no element " + std::to_string(i));
  return items[i];
}

std::string Sexpr::head() const {
  if (atom || items.empty() || !items.front().atom) return "";
  return items.front().text;
}

std::string Sexpr::str() const {
  if (atom) return text;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += " ";
    out += items[i].str();
  }
  return out + ")";
}

namespace {

struct Reader {
  const std::string& text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
  }

  bool done() {
    skip();
    return pos >= text.size();
  }

  Sexpr read() {
    skip();
    if (pos >= text.size()) throw parse_error("unexpected end of s-expression input");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      std::vector<Sexpr> items;
      while (true) {
        skip();
        if (pos >= text.size()) throw parse_error("unterminated list");
        if (text[pos] == ')') {
          ++pos;
          return Sexpr::make_list(std::move(items));
        }
        items.push_back(read());
      }
    }
    if (c == ')') throw parse_error("unexpected ')' at offset " + std::to_string(pos));
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != ';')
      ++pos;
    return Sexpr::make_atom(text.substr(start, pos - start));
  }
};

} // namespace

Sexpr parse_sexpr(const std::string& text) {
  Reader r{text};
  Sexpr s = r.read();
  if (!r.done())
    throw parse_error("trailing input after s-expression at offset " + std::to_string(r.pos));
  return s;
}

std::vector<Sexpr> parse_sexpr_file(const std::string& text) {
  Reader r{text};
  std::vector<Sexpr> out;
  while (!r.done()) out.push_back(r.read());
  return out;
}

} // namespace symta
