#ifndef SYMTA_STT_HPP
#define SYMTA_STT_HPP

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "symta/sta.hpp"
#include "symta/theory.hpp"
#include "symta/tree.hpp"

namespace symta {

/// Right-hand side of a transducer rule: a tree over unary functions whose
/// leaves may also be state calls q'(x_i).
class SttRhs;
using SttRhsPtr = std::shared_ptr<const SttRhs>;

class SttRhs {
public:
  static SttRhsPtr call(std::string q, int var) {
    return std::make_shared<SttRhs>(std::move(q), var, FnTerm(), std::vector<SttRhsPtr>{});
  }
  static SttRhsPtr fn(FnTerm f, std::vector<SttRhsPtr> children = {}) {
    return std::make_shared<SttRhs>("", 0, std::move(f), std::move(children));
  }

  SttRhs(std::string q, int var, FnTerm f, std::vector<SttRhsPtr> children)
      : state_(std::move(q)), var_(var), fn_(std::move(f)), children_(std::move(children)) {}

  bool is_call() const { return !state_.empty(); }
  const std::string& call_state() const { return state_; }
  int call_var() const { return var_; }
  const FnTerm& fn_term() const { return fn_; }
  const std::vector<SttRhsPtr>& children() const { return children_; }

  int rank() const;
  int fn_count() const;
  std::string str() const;

private:
  std::string state_;
  int var_;
  FnTerm fn_;
  std::vector<SttRhsPtr> children_;
};

/// All q'(x_i) leaves, left to right.
std::vector<std::pair<std::string, int>> rhs_calls(const SttRhsPtr& rhs);

struct SttRule {
  std::string state;
  int arity = 0;
  Predicate guard;
  SttRhsPtr rhs;
};

/// Symbolic k-bounded tree transducer.
class Stt {
public:
  Stt(int k, Theory in_theory, Theory out_theory, std::string init)
      : k_(k), in_(std::move(in_theory)), out_(std::move(out_theory)), init_(std::move(init)) {
    states_.insert(init_);
  }

  int k() const { return k_; }
  const Theory& in_theory() const { return in_; }
  const Theory& out_theory() const { return out_; }
  const std::string& init() const { return init_; }
  const std::set<std::string>& states() const { return states_; }
  const std::vector<SttRule>& rules() const { return rules_; }

  void add_state(const std::string& q) { states_.insert(q); }
  void add_rule(SttRule rule);

  Stt lifted(int k) const;

private:
  int k_;
  Theory in_, out_;
  std::string init_;
  std::set<std::string> states_;
  std::vector<SttRule> rules_;
};

/// The complete output set { zeta : q(xi) =>* zeta }, sorted by serialized
/// form. Throws partial_fn_error when an applicable rule evaluates a
/// function outside its domain.
std::vector<TreePtr> stt_apply(const Stt& m, const std::string& q, const TreePtr& xi);
std::vector<TreePtr> stt_apply(const Stt& m, const TreePtr& xi);

struct SttProps {
  bool linear = false;
  bool nondeleting = false;
  bool deterministic = false;
  bool total = false;
  bool simple = false;
  bool alphabetic = false;
};

SttProps stt_props(const Stt& m);

/// The identity transducer of an automaton: the transformation
/// { (xi, xi) : xi in L(A) }, realized with a fresh initial state holding a
/// copy of each final state's rules. Simple, linear and nondeleting.
Stt identity_stt(const Sta& a);

// ---------------------------------------------------------------------------
// Classical top-down transducer view of alphabetic transducers.
// ---------------------------------------------------------------------------

class TdRhs;
using TdRhsPtr = std::shared_ptr<const TdRhs>;

class TdRhs {
public:
  static TdRhsPtr call(std::string q, int var) {
    return std::make_shared<TdRhs>(std::move(q), var, RankedSymbol{}, std::vector<TdRhsPtr>{});
  }
  static TdRhsPtr node(RankedSymbol sym, std::vector<TdRhsPtr> children);

  TdRhs(std::string q, int var, RankedSymbol sym, std::vector<TdRhsPtr> children)
      : state_(std::move(q)), var_(var), sym_(std::move(sym)), children_(std::move(children)) {}

  bool is_call() const { return !state_.empty(); }
  const std::string& call_state() const { return state_; }
  int call_var() const { return var_; }
  const RankedSymbol& symbol() const { return sym_; }
  const std::vector<TdRhsPtr>& children() const { return children_; }

private:
  std::string state_;
  int var_;
  RankedSymbol sym_;
  std::vector<TdRhsPtr> children_;
};

struct TdttRule {
  std::string state;
  RankedSymbol in_sym;
  TdRhsPtr rhs;
};

struct Tdtt {
  std::set<std::string> states;
  std::string init;
  std::vector<TdttRule> rules;
};

std::vector<TreePtr> tdtt_apply(const Tdtt& t, const std::string& q, const TreePtr& xi);

/// Bridge to the classical model; requires stt_props(m).alphabetic.
Tdtt stt_to_tdtt(const Stt& m);
/// Reconstructs the alphabetic transducer with singleton guards and
/// constant functions over the alphabets of t.
Stt tdtt_to_stt(const Tdtt& t, int k);

} // namespace symta

#endif
