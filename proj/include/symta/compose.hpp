#ifndef SYMTA_COMPOSE_HPP
#define SYMTA_COMPOSE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symta/stt.hpp"

namespace symta {

/// Tree carrier of the symbolic derivation relation: output-function nodes
/// over pending applications p(t) of second-transducer states to
/// first-transducer right-hand-side fragments, and resolved pair-state
/// leaves <p,q>(x_i).
class SymTree;
using SymPtr = std::shared_ptr<const SymTree>;

class SymTree {
public:
  enum class Kind { fn, app, pair };

  static SymPtr fn(FnTerm f, std::vector<SymPtr> children);
  static SymPtr app(std::string p, SttRhsPtr payload);
  static SymPtr pair(std::string p, std::string q, int var);

  Kind kind() const { return kind_; }
  const FnTerm& fn_term() const { return fn_; }
  const std::vector<SymPtr>& children() const { return children_; }
  const std::string& p_state() const { return p_; }
  const std::string& q_state() const { return q_; }
  int var() const { return var_; }
  const SttRhsPtr& payload() const { return payload_; }

  bool has_app() const;
  std::string str() const;

  SymTree(Kind k, FnTerm f, std::vector<SymPtr> children, std::string p, std::string q,
          int var, SttRhsPtr payload)
      : kind_(k), fn_(std::move(f)), children_(std::move(children)), p_(std::move(p)),
        q_(std::move(q)), var_(var), payload_(std::move(payload)) {}

private:
  Kind kind_;
  FnTerm fn_;
  std::vector<SymPtr> children_;
  std::string p_, q_;
  int var_ = 0;
  SttRhsPtr payload_;
};

/// A configuration of the symbolic derivation: an accumulated guard over
/// the first transducer's input theory (kept as a sorted conjunct list so
/// equal configurations collapse) and the carrier tree. Configurations with
/// an unsatisfiable guard are never created.
struct SymConfig {
  std::vector<Predicate> guard_parts;
  SymPtr tree;
  Theory guard_theory = Theory::integers();

  Predicate guard() const { return Predicate::conj_all(guard_parts); }
  std::string key() const;
};

/// All one-step successors of c under the symbolic derivation relation of
/// n: pending-application leaves either convert a call p(q(x_i)) into a
/// pair leaf, or consume an output-function node with an n-rule, composing
/// functions and pulling the rule guard back through the consumed function.
std::vector<SymConfig> sym_step(const Stt& n, const SymConfig& c);

/// Name of the composite state <p,q>.
std::string pair_state(const std::string& p, const std::string& q);

struct ComposeProvenance {
  std::size_t m_rule;  // index into m.rules()
  std::string n_state; // the seed state p
  SymConfig seed;
  SymConfig terminal;
};

struct Composition {
  Stt stt;
  std::vector<ComposeProvenance> provenance; // parallel to stt.rules()
};

/// Syntactic composition m;n: seeds one symbolic derivation per (m-rule,
/// n-state) pair, closes it, and emits one composite rule per terminal
/// configuration with a satisfiable accumulated guard; the result is
/// restricted to the part reachable from <p0,q0>.
Composition syntactic_compose_traced(const Stt& m, const Stt& n);
Stt syntactic_compose(const Stt& m, const Stt& n);

struct SemanticsCheck {
  bool guaranteed = false;
  std::string reason_a, reason_b; // which side satisfied conditions (a) and (b)
};

/// Sufficient conditions under which m;n computes the relational
/// composition of m and n: (a) m deterministic or n linear, and (b) m total
/// or n nondeleting.
SemanticsCheck compose_semantics_check(const Stt& m, const Stt& n);

} // namespace symta

#endif
