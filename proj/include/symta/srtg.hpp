#ifndef SYMTA_SRTG_HPP
#define SYMTA_SRTG_HPP

#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "symta/classical.hpp"
#include "symta/sta.hpp"
#include "symta/theory.hpp"
#include "symta/tree.hpp"

namespace symta {

/// Right-hand side of a grammar rule: a tree over predicates with state
/// leaves.
class SrtgRhs;
using SrtgRhsPtr = std::shared_ptr<const SrtgRhs>;

class SrtgRhs {
public:
  static SrtgRhsPtr state(std::string q) {
    return std::make_shared<SrtgRhs>(std::move(q), Predicate::top(),
                                     std::vector<SrtgRhsPtr>{});
  }
  static SrtgRhsPtr pred(Predicate p, std::vector<SrtgRhsPtr> children = {}) {
    return std::make_shared<SrtgRhs>("", std::move(p), std::move(children));
  }

  SrtgRhs(std::string q, Predicate p, std::vector<SrtgRhsPtr> children)
      : state_(std::move(q)), pred_(std::move(p)), children_(std::move(children)) {}

  bool is_state() const { return !state_.empty(); }
  const std::string& state_name() const { return state_; }
  const Predicate& predicate() const { return pred_; }
  const std::vector<SrtgRhsPtr>& children() const { return children_; }

  int rank() const;
  std::string str() const;

private:
  std::string state_;
  Predicate pred_;
  std::vector<SrtgRhsPtr> children_;
};

struct SrtgRule {
  std::string lhs;
  SrtgRhsPtr rhs;
};

/// Symbolic k-bounded regular tree grammar.
class Srtg {
public:
  Srtg(int k, Theory theory, std::string init)
      : k_(k), theory_(std::move(theory)), init_(std::move(init)) {
    states_.insert(init_);
  }

  int k() const { return k_; }
  const Theory& theory() const { return theory_; }
  const std::string& init() const { return init_; }
  const std::set<std::string>& states() const { return states_; }
  const std::vector<SrtgRule>& rules() const { return rules_; }

  void add_state(const std::string& q) { states_.insert(q); }
  void add_rule(SrtgRule rule);

private:
  int k_;
  Theory theory_;
  std::string init_;
  std::set<std::string> states_;
  std::vector<SrtgRule> rules_;
};

/// Sentential tree: a k-bounded tree over labels with state leaves.
class SentTree;
using SentPtr = std::shared_ptr<const SentTree>;

class SentTree {
public:
  static SentPtr state(std::string q) {
    return std::make_shared<SentTree>(std::move(q), Label(), std::vector<SentPtr>{});
  }
  static SentPtr node(Label a, std::vector<SentPtr> children = {}) {
    return std::make_shared<SentTree>("", std::move(a), std::move(children));
  }
  static SentPtr from_tree(const TreePtr& t);

  SentTree(std::string q, Label a, std::vector<SentPtr> children)
      : state_(std::move(q)), label_(std::move(a)), children_(std::move(children)) {}

  bool is_state() const { return !state_.empty(); }
  const std::string& state_name() const { return state_; }
  const Label& label() const { return label_; }
  const std::vector<SentPtr>& children() const { return children_; }

  bool terminal() const;
  /// Conversion to a plain tree; requires terminal().
  TreePtr to_tree() const;
  std::string str() const;

private:
  std::string state_;
  Label label_;
  std::vector<SentPtr> children_;
};

/// All one-step successors of a sentential tree, one per (state position,
/// applicable rule); predicates instantiate to their deterministic theory
/// witness, and rules with an unsatisfiable predicate are skipped.
std::vector<SentPtr> srtg_step(const Srtg& g, const SentPtr& sent);

/// Draws one terminal tree from the grammar: uniform rule choice, witnesses
/// drawn through the theory sampler. Returns nullopt when the depth budget
/// is exceeded (the sample is abandoned, never truncated) or no rule
/// applies.
std::optional<TreePtr> srtg_sample(const Srtg& g, int depth_budget, std::mt19937& rng);

/// Drops every rule containing an unsatisfiable predicate.
Srtg srtg_clean(const Srtg& g);

/// Characterization through the classical side: symbols [phi,l] per
/// distinct predicate/arity occurrence.
std::pair<Rtg, Relabeling> srtg_to_rtg(const Srtg& g);
Srtg rtg_to_srtg(const Rtg& g, const Relabeling& tau, const Theory& th, int k);

/// clean -> classical normal form -> back; the result is clean, reduced and
/// in normal form.
Srtg srtg_normalize(const Srtg& g);

bool srtg_is_clean(const Srtg& g);
bool srtg_is_normal_form(const Srtg& g);
bool srtg_is_reduced(const Srtg& g);

/// Equivalence with symbolic automata, through the classical conversions.
Sta srtg_to_sta(const Srtg& g);
Srtg sta_to_srtg(const Sta& a);

/// Membership via srtg_to_sta; converts on every call.
bool srtg_member(const Srtg& g, const TreePtr& xi);

/// Grammar of all k-bounded trees.
Srtg srtg_universe(const Theory& th, int k);

} // namespace symta

#endif
