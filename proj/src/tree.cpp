#include "symta/tree.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "symta/errors.hpp"

namespace symta {

int Tree::rank() const {
  int r = static_cast<int>(children_.size());
  for (const auto& c : children_) r = std::max(r, c->rank());
  return r;
}

int Tree::depth() const {
  int d = 0;
  for (const auto& c : children_) d = std::max(d, c->depth());
  return d + 1;
}

std::size_t Tree::size() const {
  std::size_t n = 1;
  for (const auto& c : children_) n += c->size();
  return n;
}

std::string Tree::str() const {
  std::string out = label_.str();
  if (!children_.empty()) {
    out += "(";
    for (std::size_t i = 0; i < children_.size(); ++i) {
      if (i) out += ",";
      out += children_[i]->str();
    }
    out += ")";
  }
  return out;
}

bool tree_equal(const TreePtr& a, const TreePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->label() != b->label() || a->arity() != b->arity()) return false;
  for (std::size_t i = 0; i < a->arity(); ++i)
    if (!tree_equal(a->children()[i], b->children()[i])) return false;
  return true;
}

bool tree_less(const TreePtr& a, const TreePtr& b) { return a->str() < b->str(); }

std::string position_str(const Position& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(w[i]);
  }
  return out;
}

QueryResult query(const TreePtr& xi, const Position& w) {
  TreePtr cur = xi;
  for (int i : w) {
    if (i < 1 || static_cast<std::size_t>(i) > cur->arity())
      throw position_error(position_str(w) + " is not a position of " + xi->str());
    cur = cur->children()[i - 1];
  }
  return {cur->label(), cur, static_cast<int>(cur->arity())};
}

namespace {

void collect_positions(const TreePtr& xi, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < xi->arity(); ++i) {
    cur.push_back(static_cast<int>(i + 1));
    collect_positions(xi->children()[i], cur, out);
    cur.pop_back();
  }
}

} // namespace

std::vector<Position> positions(const TreePtr& xi) {
  std::vector<Position> out;
  Position cur;
  collect_positions(xi, cur, out);
  return out;
}

TreePtr replace_at(const TreePtr& xi, const Position& w, const TreePtr& zeta) {
  if (w.empty()) return zeta;
  int i = w.front();
  if (i < 1 || static_cast<std::size_t>(i) > xi->arity())
    throw position_error(position_str(w) + " is not a position of " + xi->str());
  std::vector<TreePtr> children = xi->children();
  children[i - 1] = replace_at(children[i - 1], Position(w.begin() + 1, w.end()), zeta);
  return Tree::node(xi->label(), std::move(children));
}

TreePtr substitute(const PatternPtr& u, const std::vector<TreePtr>& zetas) {
  if (u->is_var()) {
    int i = u->var_index();
    if (i < 1 || static_cast<std::size_t>(i) > zetas.size())
      throw arity_error("variable x" + std::to_string(i) + " is unbound in substitution");
    return zetas[i - 1];
  }
  std::vector<TreePtr> children;
  children.reserve(u->children().size());
  for (const auto& c : u->children()) children.push_back(substitute(c, zetas));
  return Tree::node(u->label(), std::move(children));
}

namespace {

void collect_vars(const PatternPtr& u, std::vector<int>& out) {
  if (u->is_var()) {
    out.push_back(u->var_index());
    return;
  }
  for (const auto& c : u->children()) collect_vars(c, out);
}

} // namespace

bool is_context(const PatternPtr& u, int l) {
  std::vector<int> vars;
  collect_vars(u, vars);
  if (static_cast<int>(vars.size()) != l) return false;
  for (int i = 0; i < l; ++i)
    if (vars[i] != i + 1) return false;
  return true;
}

const Predicate& Relabeling::at(const RankedSymbol& sym) const {
  auto it = map_.find(sym);
  if (it == map_.end())
    throw format_error("symbol " + sym.str() + " is not in the relabeling alphabet");
  return it->second;
}

std::vector<RankedSymbol> Relabeling::alphabet() const {
  std::vector<RankedSymbol> out;
  for (const auto& [sym, _] : map_) out.push_back(sym);
  return out;
}

int Relabeling::max_rank() const {
  int r = 0;
  for (const auto& [sym, _] : map_) r = std::max(r, sym.rank);
  return r;
}

bool relabel_member(const Relabeling& tau, const TreePtr& xi, const TreePtr& zeta) {
  if (xi->arity() != zeta->arity()) return false;
  RankedSymbol sym{xi->label().str(), static_cast<int>(xi->arity())};
  if (!eval_pred(tau.at(sym), zeta->label())) return false;
  for (std::size_t i = 0; i < xi->arity(); ++i)
    if (!relabel_member(tau, xi->children()[i], zeta->children()[i])) return false;
  return true;
}

std::optional<TreePtr> relabel_witness(const Theory& th, const Relabeling& tau, const TreePtr& xi) {
  RankedSymbol sym{xi->label().str(), static_cast<int>(xi->arity())};
  auto w = satisfiable(th, tau.at(sym));
  if (!w) return std::nullopt;
  std::vector<TreePtr> children;
  for (const auto& c : xi->children()) {
    auto sub = relabel_witness(th, tau, c);
    if (!sub) return std::nullopt;
    children.push_back(*sub);
  }
  return Tree::node(*w, std::move(children));
}

Relabeling compose_relabelings(const Theory& mid, const Relabeling& tau1, const Relabeling& tau2) {
  Relabeling out;
  for (const auto& [sym, pred] : tau1.entries()) {
    std::vector<Predicate> parts;
    for (const Label& b : finite_extent(mid, pred)) {
      RankedSymbol mid_sym{b.sym(), sym.rank};
      parts.push_back(tau2.at(mid_sym));
    }
    out.set(sym, Predicate::disj_all(parts));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tree text syntax
// ---------------------------------------------------------------------------

namespace {

struct TreeParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg + " at offset " + std::to_string(pos) + " in tree text");
  }

  Label parse_label() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    bool digits = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      digits = true;
    }
    if (digits && (pos == text.size() || !is_ident_char(text[pos]))) {
      return Label(static_cast<std::int64_t>(std::stoll(text.substr(start, pos - start))));
    }
    pos = start;
    while (pos < text.size() && is_ident_char(text[pos])) ++pos;
    if (pos == start) fail("expected a label");
    return Label(text.substr(start, pos - start));
  }

  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '\'' || c == '.' || c == '<' || c == '>' || c == '{' || c == '}' ||
           c == '[' || c == ']' || c == ':' || c == '+';
  }

  TreePtr parse() {
    Label l = parse_label();
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      std::vector<TreePtr> children;
      skip_ws();
      if (pos < text.size() && text[pos] == ')') {
        ++pos; // LABEL() is the same as a leaf
        return Tree::node(std::move(l), {});
      }
      while (true) {
        children.push_back(parse());
        skip_ws();
        if (pos >= text.size()) fail("unterminated subtree list");
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        fail("expected ',' or ')'");
      }
      return Tree::node(std::move(l), std::move(children));
    }
    return Tree::leaf(std::move(l));
  }
};

} // namespace

TreePtr parse_tree(const std::string& text) {
  TreeParser p{text};
  TreePtr t = p.parse();
  p.skip_ws();
  if (p.pos != text.size())
    throw parse_error("trailing characters after tree at offset " + std::to_string(p.pos));
  return t;
}

} // namespace symta
