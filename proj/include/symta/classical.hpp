#ifndef SYMTA_CLASSICAL_HPP
#define SYMTA_CLASSICAL_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "symta/tree.hpp"

namespace symta {

/// Classical finite-state tree automaton over a ranked alphabet. Trees fed
/// to it carry symbol names as labels; arities must match symbol ranks.
struct Fta {
  std::set<std::string> states;
  std::set<RankedSymbol> alphabet;
  std::set<std::string> finals;
  // delta_sigma as (q_1...q_l, q) tuples
  std::map<RankedSymbol, std::vector<std::pair<std::vector<std::string>, std::string>>> delta;

  void add_transition(const RankedSymbol& sym, std::vector<std::string> lhs, std::string rhs);
  int max_rank() const;
};

/// Bottom-up reachable state set at the root.
std::set<std::string> fta_states_of(const Fta& a, const TreePtr& xi);
bool fta_member(const Fta& a, const TreePtr& xi);

/// Right-hand side of a regular tree grammar rule: a tree over ranked
/// symbols with state leaves.
class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
  static TermPtr state(std::string q) {
    return std::make_shared<Term>(std::move(q), RankedSymbol{}, std::vector<TermPtr>{});
  }
  static TermPtr node(RankedSymbol sym, std::vector<TermPtr> children);

  Term(std::string q, RankedSymbol sym, std::vector<TermPtr> children)
      : state_(std::move(q)), sym_(std::move(sym)), children_(std::move(children)) {}

  bool is_state() const { return !state_.empty(); }
  const std::string& state_name() const { return state_; }
  const RankedSymbol& symbol() const { return sym_; }
  const std::vector<TermPtr>& children() const { return children_; }

  std::string str() const;

private:
  std::string state_;
  RankedSymbol sym_;
  std::vector<TermPtr> children_;
};

struct RtgRule {
  std::string lhs;
  TermPtr rhs;
};

/// Regular tree grammar; rules q -> u with u in T_Sigma(Q). The declared
/// alphabet may be larger than the set of symbols the rules use.
struct Rtg {
  std::set<std::string> states;
  std::set<RankedSymbol> sigma;
  std::string init;
  std::vector<RtgRule> rules;

  /// Declared alphabet together with every symbol occurring in a rule.
  std::set<RankedSymbol> alphabet() const;
  int max_rank() const;
};

/// Language-preserving transformation into a reduced grammar in normal form
/// (every rule q -> sigma(q_1...q_l), all states reachable and productive).
/// An empty language yields the canonical empty grammar (initial state, no
/// rules).
Rtg rtg_normalize(const Rtg& g);

/// Conversions between the two classical representations; both preserve the
/// language.
Fta rtg_to_fta(const Rtg& g);
Rtg fta_to_rtg(const Fta& a);

} // namespace symta

#endif
