#ifndef SYMTA_TREE_HPP
#define SYMTA_TREE_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symta/label.hpp"
#include "symta/theory.hpp"

namespace symta {

class Tree;
using TreePtr = std::shared_ptr<const Tree>;

/// Finite unranked ordered tree. Immutable; subtrees are shared freely.
class Tree {
public:
  explicit Tree(Label label, std::vector<TreePtr> children = {})
      : label_(std::move(label)), children_(std::move(children)) {}

  static TreePtr leaf(Label l) { return std::make_shared<Tree>(std::move(l)); }
  static TreePtr node(Label l, std::vector<TreePtr> children) {
    return std::make_shared<Tree>(std::move(l), std::move(children));
  }

  const Label& label() const { return label_; }
  const std::vector<TreePtr>& children() const { return children_; }
  std::size_t arity() const { return children_.size(); }

  /// max child count over all nodes
  int rank() const;
  int depth() const;
  std::size_t size() const;

  std::string str() const;

private:
  Label label_;
  std::vector<TreePtr> children_;
};

bool tree_equal(const TreePtr& a, const TreePtr& b);
bool tree_less(const TreePtr& a, const TreePtr& b); // by serialized form

/// Sequence of 1-based child indices; empty = the root.
using Position = std::vector<int>;

std::string position_str(const Position& w);

struct QueryResult {
  Label label;
  TreePtr subtree;
  int rank_at;
};

/// Label, subtree and rank at a position; throws position_error when w is
/// not a position of xi.
QueryResult query(const TreePtr& xi, const Position& w);

std::vector<Position> positions(const TreePtr& xi);

/// xi[zeta]_w
TreePtr replace_at(const TreePtr& xi, const Position& w, const TreePtr& zeta);

/// Tree with variable leaves x1..xl; used for substitution and contexts.
class PatternTree;
using PatternPtr = std::shared_ptr<const PatternTree>;

class PatternTree {
public:
  static PatternPtr var(int index) {
    return std::make_shared<PatternTree>(index, Label(), std::vector<PatternPtr>{});
  }
  static PatternPtr node(Label l, std::vector<PatternPtr> children = {}) {
    return std::make_shared<PatternTree>(0, std::move(l), std::move(children));
  }

  PatternTree(int var, Label l, std::vector<PatternPtr> children)
      : var_(var), label_(std::move(l)), children_(std::move(children)) {}

  bool is_var() const { return var_ > 0; }
  int var_index() const { return var_; }
  const Label& label() const { return label_; }
  const std::vector<PatternPtr>& children() const { return children_; }

private:
  int var_; // 0 = not a variable
  Label label_;
  std::vector<PatternPtr> children_;
};

/// u[zeta_1, ..., zeta_l]; throws arity_error when u mentions x_i with
/// i > l. Duplicated variables are allowed.
TreePtr substitute(const PatternPtr& u, const std::vector<TreePtr>& zetas);

/// True when every variable x_1..x_l occurs exactly once, in left-to-right
/// order (the l-context condition).
bool is_context(const PatternPtr& u, int l);

/// A ranked symbol NAME/RANK of a classical alphabet.
struct RankedSymbol {
  std::string name;
  int rank = 0;

  std::string str() const { return name + "/" + std::to_string(rank); }
  friend bool operator==(const RankedSymbol& a, const RankedSymbol& b) {
    return a.name == b.name && a.rank == b.rank;
  }
  friend bool operator<(const RankedSymbol& a, const RankedSymbol& b) {
    return a.name != b.name ? a.name < b.name : a.rank < b.rank;
  }
};

/// Trees over a ranked alphabet are ordinary trees whose labels are symbol
/// names; the alphabet fixes the arity of every node.
class Relabeling {
public:
  Relabeling() = default;

  void set(const RankedSymbol& sym, Predicate pred) { map_[sym] = std::move(pred); }
  bool has(const RankedSymbol& sym) const { return map_.count(sym) > 0; }
  const Predicate& at(const RankedSymbol& sym) const;
  const std::map<RankedSymbol, Predicate>& entries() const { return map_; }

  /// Alphabet symbols, sorted.
  std::vector<RankedSymbol> alphabet() const;
  int max_rank() const;

private:
  std::map<RankedSymbol, Predicate> map_;
};

/// zeta in tau(xi)? xi is a tree over tau's alphabet (labels are symbol
/// names, arities must match the symbol ranks).
bool relabel_member(const Relabeling& tau, const TreePtr& xi, const TreePtr& zeta);

/// One concrete element of tau(xi) assembled from per-node witnesses, or
/// nullopt when some node predicate is empty.
std::optional<TreePtr> relabel_witness(const Theory& th, const Relabeling& tau, const TreePtr& xi);

/// Composition: tau1 maps Sigma into predicates over a finite theory whose
/// labels name tau2's alphabet symbols; the result maps Sigma directly into
/// tau2's target predicates.
Relabeling compose_relabelings(const Theory& mid, const Relabeling& tau1, const Relabeling& tau2);

/// Parses `LABEL` / `LABEL(T1,...,Tl)`; whitespace-insensitive. Labels are
/// decimal integers or identifiers.
TreePtr parse_tree(const std::string& text);

} // namespace symta

#endif
