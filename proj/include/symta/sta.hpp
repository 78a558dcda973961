#ifndef SYMTA_STA_HPP
#define SYMTA_STA_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "symta/classical.hpp"
#include "symta/theory.hpp"
#include "symta/tree.hpp"

namespace symta {

struct StaRule {
  std::vector<std::string> lhs; // state sequence, length <= k
  Predicate guard;
  std::string rhs;
};

/// Symbolic k-bounded tree automaton.
class Sta {
public:
  Sta(int k, Theory theory) : k_(k), theory_(std::move(theory)) {}

  int k() const { return k_; }
  const Theory& theory() const { return theory_; }
  const std::set<std::string>& states() const { return states_; }
  const std::set<std::string>& finals() const { return finals_; }
  const std::vector<StaRule>& rules() const { return rules_; }

  void add_state(const std::string& q) { states_.insert(q); }
  void add_final(const std::string& q);
  void add_rule(StaRule rule);

  /// Reinterprets the automaton with a larger bound; k-boundedness is
  /// monotone so the language is unchanged on old trees.
  Sta lifted(int k) const;

private:
  int k_;
  Theory theory_;
  std::set<std::string> states_;
  std::set<std::string> finals_;
  std::vector<StaRule> rules_;
};

struct StaRun {
  std::set<std::string> root_states;
  bool accepted = false;
};

/// Bottom-up state sets; throws bound_error when rank(xi) > k and
/// domain_error when a label is outside the universe.
StaRun sta_member(const Sta& a, const TreePtr& xi);

/// Least-fixpoint emptiness test; returns a witness tree assembled from
/// guard witnesses when the language is nonempty.
std::optional<TreePtr> sta_empty(const Sta& a);

/// Complete deterministic automaton over subset states and guard minterms;
/// every k-bounded tree reaches exactly one state.
Sta sta_determinize(const Sta& a);

/// Boolean operations; complement is relative to T_U^(k). Binary operations
/// lift both operands to the larger bound.
Sta sta_complement(const Sta& a);
Sta sta_intersect(const Sta& a, const Sta& b);
Sta sta_union(const Sta& a, const Sta& b);

/// Restriction of A to a single final state.
Sta sta_with_final(const Sta& a, const std::string& q);

/// nullopt when L(a) is a subset of L(b); otherwise a tree in L(a)\L(b).
std::optional<TreePtr> sta_included(const Sta& a, const Sta& b);

/// L(a) = tau(L(fta)) with symbols [phi,l] per distinct guard/arity pair.
std::pair<Fta, Relabeling> sta_to_fta(const Sta& a);
Sta fta_to_sta(const Fta& a, const Relabeling& tau, const Theory& th, int k);

/// T_U^(k) and the empty language.
Sta sta_all(const Theory& th, int k);
Sta sta_none(const Theory& th, int k);

} // namespace symta

#endif
