#include "symta/classical.hpp"

#include <algorithm>

#include "symta/errors.hpp"

namespace symta {

void Fta::add_transition(const RankedSymbol& sym, std::vector<std::string> lhs,
                         std::string rhs) {
  if (static_cast<int>(lhs.size()) != sym.rank)
    throw format_error("transition arity does not match rank of " + sym.str());
  alphabet.insert(sym);
  for (const auto& q : lhs) states.insert(q);
  states.insert(rhs);
  delta[sym].emplace_back(std::move(lhs), std::move(rhs));
}

int Fta::max_rank() const {
  int r = 0;
  for (const auto& sym : alphabet) r = std::max(r, sym.rank);
  return r;
}

std::set<std::string> fta_states_of(const Fta& a, const TreePtr& xi) {
  RankedSymbol sym{xi->label().str(), static_cast<int>(xi->arity())};
  if (!a.alphabet.count(sym))
    throw domain_error("symbol " + sym.str() + " is not in the automaton alphabet");
  std::vector<std::set<std::string>> child_sets;
  child_sets.reserve(xi->arity());
  for (const auto& c : xi->children()) child_sets.push_back(fta_states_of(a, c));
  std::set<std::string> out;
  auto it = a.delta.find(sym);
  if (it == a.delta.end()) return out;
  for (const auto& [lhs, rhs] : it->second) {
    bool ok = true;
    for (std::size_t i = 0; i < lhs.size() && ok; ++i)
      ok = child_sets[i].count(lhs[i]) > 0;
    if (ok) out.insert(rhs);
  }
  return out;
}

bool fta_member(const Fta& a, const TreePtr& xi) {
  std::set<std::string> root = fta_states_of(a, xi);
  for (const auto& q : root)
    if (a.finals.count(q)) return true;
  return false;
}

TermPtr Term::node(RankedSymbol sym, std::vector<TermPtr> children) {
  if (static_cast<int>(children.size()) != sym.rank)
    throw format_error("term arity does not match rank of " + sym.str());
  return std::make_shared<Term>("", std::move(sym), std::move(children));
}

std::string Term::str() const {
  if (is_state()) return state_;
  std::string out = sym_.str();
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

namespace {

void collect_symbols(const TermPtr& u, std::set<RankedSymbol>& out) {
  if (u->is_state()) return;
  out.insert(u->symbol());
  for (const auto& c : u->children()) collect_symbols(c, out);
}

void collect_states(const TermPtr& u, std::set<std::string>& out) {
  if (u->is_state()) {
    out.insert(u->state_name());
    return;
  }
  for (const auto& c : u->children()) collect_states(c, out);
}

bool states_within(const TermPtr& u, const std::set<std::string>& allowed) {
  if (u->is_state()) return allowed.count(u->state_name()) > 0;
  for (const auto& c : u->children())
    if (!states_within(c, allowed)) return false;
  return true;
}

Rtg empty_grammar(const Rtg& src) {
  Rtg g;
  g.sigma = src.alphabet();
  g.init = src.init.empty() ? "q0" : src.init;
  g.states.insert(g.init);
  return g;
}

// Drops rules touching unproductive states, then unreachable ones.
Rtg reduce(const Rtg& g) {
  std::set<std::string> productive;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules) {
      if (productive.count(r.lhs)) continue;
      if (states_within(r.rhs, productive)) {
        productive.insert(r.lhs);
        changed = true;
      }
    }
  }
  if (!productive.count(g.init)) return empty_grammar(g);

  std::vector<RtgRule> alive;
  for (const auto& r : g.rules)
    if (productive.count(r.lhs) && states_within(r.rhs, productive)) alive.push_back(r);

  std::set<std::string> reachable{g.init};
  changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : alive) {
      if (!reachable.count(r.lhs)) continue;
      std::set<std::string> used;
      collect_states(r.rhs, used);
      for (const auto& q : used)
        if (reachable.insert(q).second) changed = true;
    }
  }

  Rtg out;
  out.sigma = g.alphabet();
  out.init = g.init;
  out.states = reachable;
  for (const auto& r : alive)
    if (reachable.count(r.lhs)) out.rules.push_back(r);
  return out;
}

std::string fresh_state(const std::set<std::string>& taken, const std::string& base) {
  if (!taken.count(base)) return base;
  int i = 1;
  while (taken.count(base + "_" + std::to_string(i))) ++i;
  return base + "_" + std::to_string(i);
}

} // namespace

std::set<RankedSymbol> Rtg::alphabet() const {
  std::set<RankedSymbol> out = sigma;
  for (const auto& r : rules) collect_symbols(r.rhs, out);
  return out;
}

int Rtg::max_rank() const {
  int r = 0;
  for (const auto& sym : alphabet()) r = std::max(r, sym.rank);
  return r;
}

Rtg rtg_normalize(const Rtg& g0) {
  Rtg g = reduce(g0);
  if (g.rules.empty()) return g;

  // Chain rules q -> q': replace by copies of the non-chain rules of q',
  // iterated to closure over chains of chains.
  std::vector<RtgRule> flat_rules;
  std::map<std::string, std::vector<std::string>> chain_to; // q -> successor states
  for (const auto& r : g.rules) {
    if (r.rhs->is_state()) {
      chain_to[r.lhs].push_back(r.rhs->state_name());
    } else {
      flat_rules.push_back(r);
    }
  }
  // chain_closure[q] = all states reachable from q via chain rules.
  std::map<std::string, std::set<std::string>> chain_closure;
  for (const auto& q : g.states) chain_closure[q] = {q};
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [q, cl] : chain_closure) {
      std::set<std::string> next = cl;
      for (const auto& p : cl) {
        auto it = chain_to.find(p);
        if (it == chain_to.end()) continue;
        for (const auto& r : it->second) next.insert(r);
      }
      if (next.size() != cl.size()) {
        cl = std::move(next);
        changed = true;
      }
    }
  }
  std::vector<RtgRule> chain_free;
  for (const auto& [q, cl] : chain_closure) {
    for (const auto& p : cl) {
      for (const auto& r : flat_rules)
        if (r.lhs == p) chain_free.push_back({q, r.rhs});
    }
  }

  // Flatten nested right-hand sides: one fresh state per distinct non-state
  // proper subterm.
  std::set<std::string> taken = g.states;
  std::map<std::string, std::string> subterm_state; // rhs text -> state
  std::vector<RtgRule> out_rules;

  auto flatten_child = [&](auto&& self, const TermPtr& u) -> std::string {
    if (u->is_state()) return u->state_name();
    auto it = subterm_state.find(u->str());
    if (it != subterm_state.end()) return it->second;
    std::string q = fresh_state(taken, "n" + std::to_string(subterm_state.size()));
    taken.insert(q);
    subterm_state.emplace(u->str(), q);
    std::vector<TermPtr> kids;
    for (const auto& c : u->children()) kids.push_back(Term::state(self(self, c)));
    out_rules.push_back({q, Term::node(u->symbol(), std::move(kids))});
    return q;
  };

  for (const auto& r : chain_free) {
    std::vector<TermPtr> kids;
    for (const auto& c : r.rhs->children())
      kids.push_back(Term::state(flatten_child(flatten_child, c)));
    out_rules.push_back({r.lhs, Term::node(r.rhs->symbol(), std::move(kids))});
  }

  Rtg out;
  out.sigma = g.alphabet();
  out.init = g.init;
  out.states = taken;
  // Deduplicate syntactically equal rules.
  std::set<std::string> seen;
  for (const auto& r : out_rules)
    if (seen.insert(r.lhs + " -> " + r.rhs->str()).second) out.rules.push_back(r);
  return reduce(out);
}

Fta rtg_to_fta(const Rtg& g0) {
  Rtg g = rtg_normalize(g0);
  Fta a;
  a.alphabet = g.alphabet();
  a.states = g.states;
  a.states.insert(g.init);
  a.finals = {g.init};
  for (const auto& r : g.rules) {
    std::vector<std::string> lhs;
    for (const auto& c : r.rhs->children()) lhs.push_back(c->state_name());
    a.add_transition(r.rhs->symbol(), std::move(lhs), r.lhs);
  }
  return a;
}

Rtg fta_to_rtg(const Fta& a) {
  Rtg g;
  g.sigma = a.alphabet;
  g.states = a.states;
  g.init = fresh_state(a.states, "q0");
  g.states.insert(g.init);
  for (const auto& [sym, transitions] : a.delta) {
    for (const auto& [lhs, rhs] : transitions) {
      std::vector<TermPtr> kids;
      for (const auto& q : lhs) kids.push_back(Term::state(q));
      g.rules.push_back({rhs, Term::node(sym, std::move(kids))});
    }
  }
  for (const auto& qf : a.finals) g.rules.push_back({g.init, Term::state(qf)});
  return g;
}

} // namespace symta
