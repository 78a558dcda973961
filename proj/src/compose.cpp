#include "symta/compose.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "symta/errors.hpp"

namespace symta {

SymPtr SymTree::fn(FnTerm f, std::vector<SymPtr> children) {
  return std::make_shared<SymTree>(Kind::fn, std::move(f), std::move(children), "", "", 0,
                                   nullptr);
}

SymPtr SymTree::app(std::string p, SttRhsPtr payload) {
  return std::make_shared<SymTree>(Kind::app, FnTerm(), std::vector<SymPtr>{}, std::move(p),
                                   "", 0, std::move(payload));
}

SymPtr SymTree::pair(std::string p, std::string q, int var) {
  return std::make_shared<SymTree>(Kind::pair, FnTerm(), std::vector<SymPtr>{}, std::move(p),
                                   std::move(q), var, nullptr);
}

bool SymTree::has_app() const {
  if (kind_ == Kind::app) return true;
  for (const auto& c : children_)
    if (c->has_app()) return true;
  return false;
}

std::string SymTree::str() const {
  switch (kind_) {
    case Kind::app: return "app(" + p_ + "," + payload_->str() + ")";
    case Kind::pair: return "<" + p_ + "," + q_ + ">(x" + std::to_string(var_) + ")";
    case Kind::fn: {
      std::string out = "fn(" + fn_.key();
      for (const auto& c : children_) out += "," + c->str();
      return out + ")";
    }
  }
  return "";
}

std::string SymConfig::key() const {
  std::vector<std::string> parts;
  for (const auto& g : guard_parts) parts.push_back(g.key());
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + " & ";
  return out + "| " + tree->str();
}

std::string pair_state(const std::string& p, const std::string& q) {
  return "<" + p + "," + q + ">";
}

namespace {

// Adds a conjunct, keeping the list sorted and duplicate-free.
std::vector<Predicate> extend_guard(const std::vector<Predicate>& parts, const Predicate& g) {
  std::vector<Predicate> out = parts;
  if (!g.is_top()) {
    auto pos = std::lower_bound(out.begin(), out.end(), g);
    if (pos == out.end() || !(*pos == g)) out.insert(pos, g);
  }
  return out;
}

// Replaces the index-th application node (preorder) by the given subtree.
SymPtr replace_app(const SymPtr& t, int& counter, int target, const SymPtr& replacement) {
  switch (t->kind()) {
    case SymTree::Kind::app:
      if (counter++ == target) return replacement;
      return t;
    case SymTree::Kind::pair: return t;
    case SymTree::Kind::fn: {
      std::vector<SymPtr> kids;
      for (const auto& c : t->children()) kids.push_back(replace_app(c, counter, target, replacement));
      return SymTree::fn(t->fn_term(), std::move(kids));
    }
  }
  return t;
}

void collect_apps(const SymPtr& t, std::vector<SymPtr>& out) {
  switch (t->kind()) {
    case SymTree::Kind::app: out.push_back(t); return;
    case SymTree::Kind::pair: return;
    case SymTree::Kind::fn:
      for (const auto& c : t->children()) collect_apps(c, out);
      return;
  }
}

// f composed into an n-rule right-hand side: every function g becomes
// f;g, every call pbar(x_i) becomes a pending application of pbar to the
// i-th subtree under the consumed function node.
SymPtr weave(const FnTerm& f, const SttRhsPtr& v, const std::vector<SttRhsPtr>& subtrees) {
  if (v->is_call()) return SymTree::app(v->call_state(), subtrees[v->call_var() - 1]);
  std::vector<SymPtr> kids;
  for (const auto& c : v->children()) kids.push_back(weave(f, c, subtrees));
  return SymTree::fn(compose_fn(f, v->fn_term()), std::move(kids));
}

} // namespace

std::vector<SymConfig> sym_step(const Stt& n, const SymConfig& c) {
  std::vector<SymPtr> apps;
  collect_apps(c.tree, apps);
  std::vector<SymConfig> out;
  for (int pos = 0; pos < static_cast<int>(apps.size()); ++pos) {
    const SymPtr& app = apps[pos];
    const SttRhsPtr& payload = app->payload();
    if (payload->is_call()) {
      // clause (i): p(q(x_i)) becomes <p,q>(x_i)
      int counter = 0;
      out.push_back(
          {c.guard_parts,
           replace_app(c.tree, counter, pos,
                       SymTree::pair(app->p_state(), payload->call_state(),
                                     payload->call_var())),
           c.guard_theory});
      continue;
    }
    // clause (ii): consume the function node with every applicable n-rule
    const FnTerm& f = payload->fn_term();
    int l = static_cast<int>(payload->children().size());
    for (const auto& rule : n.rules()) {
      if (rule.state != app->p_state() || rule.arity != l) continue;
      Predicate pulled = preimage(f, rule.guard);
      std::vector<Predicate> parts = extend_guard(c.guard_parts, pulled);
      if (!satisfiable(c.guard_theory, Predicate::conj_all(parts)))
        continue; // unsatisfiable configurations are discarded
      int counter = 0;
      out.push_back({std::move(parts),
                     replace_app(c.tree, counter, pos,
                                 weave(f, rule.rhs, payload->children())),
                     c.guard_theory});
    }
  }
  return out;
}

namespace {

// A terminal carrier tree is one without pending applications; it converts
// directly into a composite-rule right-hand side.
SttRhsPtr to_rhs(const SymPtr& t) {
  switch (t->kind()) {
    case SymTree::Kind::pair:
      return SttRhs::call(pair_state(t->p_state(), t->q_state()), t->var());
    case SymTree::Kind::fn: {
      std::vector<SttRhsPtr> kids;
      for (const auto& c : t->children()) kids.push_back(to_rhs(c));
      return SttRhs::fn(t->fn_term(), std::move(kids));
    }
    case SymTree::Kind::app:
      throw format_error("pending application in a terminal configuration");
  }
  throw format_error("bad symbolic tree");
}

} // namespace

Composition syntactic_compose_traced(const Stt& m0, const Stt& n0) {
  if (m0.out_theory() != n0.in_theory())
    throw type_error("composition requires the first output theory to equal the second "
                     "input theory");
  int k = std::max(m0.k(), n0.k());
  Stt m = m0.lifted(k), n = n0.lifted(k);

  struct Pending {
    std::size_t m_rule;
    std::string p;
    SymConfig seed;
    SymConfig terminal;
    SttRule rule;
  };
  std::vector<Pending> emitted;
  std::set<std::string> emitted_keys;

  for (std::size_t ri = 0; ri < m.rules().size(); ++ri) {
    const SttRule& mrule = m.rules()[ri];
    for (const auto& p : n.states()) {
      SymConfig seed{extend_guard({}, mrule.guard), SymTree::app(p, mrule.rhs),
                     m.in_theory()};
      if (!satisfiable(m.in_theory(), seed.guard())) continue;
      std::deque<SymConfig> work{seed};
      std::set<std::string> visited{seed.key()};
      while (!work.empty()) {
        SymConfig cur = work.front();
        work.pop_front();
        if (!cur.tree->has_app()) {
          SttRule rule{pair_state(p, mrule.state), mrule.arity, cur.guard(),
                       to_rhs(cur.tree)};
          std::string key = rule.state + "/" + std::to_string(rule.arity) + " " +
                            rule.guard.key() + " -> " + rule.rhs->str();
          if (emitted_keys.insert(key).second)
            emitted.push_back({ri, p, seed, cur, std::move(rule)});
          continue;
        }
        for (auto& next : sym_step(n, cur))
          if (visited.insert(next.key()).second) work.push_back(std::move(next));
      }
    }
  }

  // Restrict to the part reachable from <p0,q0>.
  std::string init = pair_state(n.init(), m.init());
  std::set<std::string> reachable{init};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : emitted) {
      if (!reachable.count(e.rule.state)) continue;
      for (const auto& [q, i] : rhs_calls(e.rule.rhs))
        if (reachable.insert(q).second) changed = true;
    }
  }

  Composition out{Stt(k, m.in_theory(), n.out_theory(), init), {}};
  for (const auto& q : reachable) out.stt.add_state(q);
  for (auto& e : emitted) {
    if (!reachable.count(e.rule.state)) continue;
    out.stt.add_rule(e.rule);
    out.provenance.push_back({e.m_rule, e.p, e.seed, e.terminal});
  }
  return out;
}

Stt syntactic_compose(const Stt& m, const Stt& n) {
  return syntactic_compose_traced(m, n).stt;
}

SemanticsCheck compose_semantics_check(const Stt& m, const Stt& n) {
  SttProps pm = stt_props(m), pn = stt_props(n);
  SemanticsCheck out;
  if (pm.deterministic) out.reason_a = "first transducer is deterministic";
  else if (pn.linear) out.reason_a = "second transducer is linear";
  if (pm.total) out.reason_b = "first transducer is total";
  else if (pn.nondeleting) out.reason_b = "second transducer is nondeleting";
  out.guaranteed = !out.reason_a.empty() && !out.reason_b.empty();
  return out;
}

} // namespace symta
