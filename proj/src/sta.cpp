#include "symta/sta.hpp"

#include <algorithm>
#include <map>

#include "symta/errors.hpp"

namespace symta {

void Sta::add_final(const std::string& q) {
  states_.insert(q);
  finals_.insert(q);
}

void Sta::add_rule(StaRule rule) {
  if (static_cast<int>(rule.lhs.size()) > k_)
    throw bound_error("rule left-hand side longer than k=" + std::to_string(k_));
  for (const auto& q : rule.lhs) states_.insert(q);
  states_.insert(rule.rhs);
  rules_.push_back(std::move(rule));
}

Sta Sta::lifted(int k) const {
  if (k < k_) throw bound_error("cannot lower the bound of an automaton");
  Sta out(k, theory_);
  out.states_ = states_;
  out.finals_ = finals_;
  out.rules_ = rules_;
  return out;
}

namespace {

std::set<std::string> run_states(const Sta& a, const TreePtr& xi) {
  if (static_cast<int>(xi->arity()) > a.k())
    throw bound_error("tree rank exceeds automaton bound k=" + std::to_string(a.k()));
  a.theory().check_label(xi->label());
  std::vector<std::set<std::string>> child_sets;
  child_sets.reserve(xi->arity());
  for (const auto& c : xi->children()) child_sets.push_back(run_states(a, c));
  std::set<std::string> out;
  for (const auto& rule : a.rules()) {
    if (rule.lhs.size() != xi->arity()) continue;
    if (out.count(rule.rhs)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < rule.lhs.size() && ok; ++i)
      ok = child_sets[i].count(rule.lhs[i]) > 0;
    if (ok && eval_pred(rule.guard, xi->label())) out.insert(rule.rhs);
  }
  return out;
}

std::string subset_name(const std::set<std::string>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& q : s) {
    if (!first) out += ",";
    out += q;
    first = false;
  }
  return out + "}";
}

} // namespace

StaRun sta_member(const Sta& a, const TreePtr& xi) {
  StaRun r;
  r.root_states = run_states(a, xi);
  for (const auto& q : r.root_states)
    if (a.finals().count(q)) {
      r.accepted = true;
      break;
    }
  return r;
}

std::optional<TreePtr> sta_empty(const Sta& a) {
  struct Note {
    std::size_t rule;
    Label witness;
  };
  std::map<std::string, Note> notes;
  std::optional<std::string> winner;
  bool changed = true;
  while (changed && !winner) {
    changed = false;
    for (std::size_t i = 0; i < a.rules().size() && !winner; ++i) {
      const StaRule& rule = a.rules()[i];
      if (notes.count(rule.rhs)) continue;
      bool ready = true;
      for (const auto& q : rule.lhs)
        if (!notes.count(q)) {
          ready = false;
          break;
        }
      if (!ready) continue;
      auto w = satisfiable(a.theory(), rule.guard);
      if (!w) continue;
      notes.emplace(rule.rhs, Note{i, *w});
      changed = true;
      if (a.finals().count(rule.rhs)) winner = rule.rhs;
    }
  }
  if (!winner) return std::nullopt;
  auto build = [&](auto&& self, const std::string& q) -> TreePtr {
    const Note& n = notes.at(q);
    const StaRule& rule = a.rules()[n.rule];
    std::vector<TreePtr> children;
    for (const auto& p : rule.lhs) children.push_back(self(self, p));
    return Tree::node(n.witness, std::move(children));
  };
  return build(build, *winner);
}

Sta sta_determinize(const Sta& a) {
  // Minterms per arity over the syntactically deduplicated guards, with a
  // per-rule index into the sign vector.
  std::vector<std::vector<Minterm>> mts(a.k() + 1);
  std::vector<std::vector<std::pair<const StaRule*, std::size_t>>> rules_at(a.k() + 1);
  for (int l = 0; l <= a.k(); ++l) {
    std::vector<Predicate> guards;
    std::map<std::string, std::size_t> guard_idx;
    for (const auto& rule : a.rules()) {
      if (static_cast<int>(rule.lhs.size()) != l) continue;
      auto it = guard_idx.find(rule.guard.key());
      if (it == guard_idx.end()) {
        it = guard_idx.emplace(rule.guard.key(), guards.size()).first;
        guards.push_back(rule.guard);
      }
      rules_at[l].emplace_back(&rule, it->second);
    }
    mts[l] = minterms_signed(a.theory(), guards);
  }

  Sta out(a.k(), a.theory());
  std::vector<std::set<std::string>> subsets; // in discovery order
  std::set<std::string> known;
  auto discover = [&](const std::set<std::string>& s) {
    std::string name = subset_name(s);
    if (known.insert(name).second) subsets.push_back(s);
    return name;
  };

  // Fixpoint: per pass, run every l-tuple over the subsets known at pass
  // start (l = 0 contributes the single empty tuple that seeds the set).
  std::set<std::string> emitted;
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t snapshot = subsets.size();
    for (int l = 0; l <= a.k(); ++l) {
      if (l > 0 && snapshot == 0) continue;
      std::vector<std::size_t> idx(l, 0);
      while (true) {
        for (const auto& mt : mts[l]) {
          std::set<std::string> target;
          for (const auto& [rule, gi] : rules_at[l]) {
            if (!mt.signs[gi]) continue;
            bool ok = true;
            for (int i = 0; i < l && ok; ++i)
              ok = subsets[idx[i]].count(rule->lhs[i]) > 0;
            if (ok) target.insert(rule->rhs);
          }
          std::vector<std::string> lhs;
          for (int i = 0; i < l; ++i) lhs.push_back(subset_name(subsets[idx[i]]));
          std::string tname = discover(target);
          std::string rule_key;
          for (const auto& s : lhs) rule_key += s + " ";
          rule_key += "| " + mt.pred.key() + " -> " + tname;
          if (emitted.insert(rule_key).second) {
            out.add_rule({std::move(lhs), mt.pred, tname});
            changed = true;
          }
        }
        int i = l - 1;
        for (; i >= 0; --i) {
          if (++idx[i] < snapshot) break;
          idx[i] = 0;
        }
        if (i < 0) break;
      }
    }
    if (subsets.size() > snapshot) changed = true;
  }

  for (const auto& s : subsets) {
    out.add_state(subset_name(s));
    for (const auto& q : s)
      if (a.finals().count(q)) {
        out.add_final(subset_name(s));
        break;
      }
  }
  return out;
}

Sta sta_complement(const Sta& a) {
  Sta det = sta_determinize(a);
  Sta out(det.k(), det.theory());
  for (const auto& rule : det.rules()) out.add_rule(rule);
  for (const auto& q : det.states()) {
    out.add_state(q);
    if (!det.finals().count(q)) out.add_final(q);
  }
  return out;
}

namespace {

void check_same_theory(const Sta& a, const Sta& b) {
  if (a.theory() != b.theory())
    throw type_error("boolean operation over mismatched theories");
}

} // namespace

Sta sta_intersect(const Sta& a0, const Sta& b0) {
  check_same_theory(a0, b0);
  int k = std::max(a0.k(), b0.k());
  Sta a = a0.lifted(k), b = b0.lifted(k);
  Sta out(k, a.theory());
  auto pair_name = [](const std::string& x, const std::string& y) {
    return x + "|" + y;
  };
  for (const auto& ra : a.rules()) {
    for (const auto& rb : b.rules()) {
      if (ra.lhs.size() != rb.lhs.size()) continue;
      Predicate g = Predicate::conj(ra.guard, rb.guard);
      if (!satisfiable(a.theory(), g)) continue;
      std::vector<std::string> lhs;
      for (std::size_t i = 0; i < ra.lhs.size(); ++i)
        lhs.push_back(pair_name(ra.lhs[i], rb.lhs[i]));
      out.add_rule({std::move(lhs), g, pair_name(ra.rhs, rb.rhs)});
    }
  }
  for (const auto& qa : a.finals())
    for (const auto& qb : b.finals()) {
      out.add_state(pair_name(qa, qb));
      out.add_final(pair_name(qa, qb));
    }
  return out;
}

Sta sta_union(const Sta& a0, const Sta& b0) {
  check_same_theory(a0, b0);
  int k = std::max(a0.k(), b0.k());
  Sta a = a0.lifted(k), b = b0.lifted(k);
  Sta out(k, a.theory());
  auto rename = [](const std::string& prefix, const std::string& q) { return prefix + q; };
  for (const auto& rule : a.rules()) {
    std::vector<std::string> lhs;
    for (const auto& q : rule.lhs) lhs.push_back(rename("l:", q));
    out.add_rule({std::move(lhs), rule.guard, rename("l:", rule.rhs)});
  }
  for (const auto& rule : b.rules()) {
    std::vector<std::string> lhs;
    for (const auto& q : rule.lhs) lhs.push_back(rename("r:", q));
    out.add_rule({std::move(lhs), rule.guard, rename("r:", rule.rhs)});
  }
  for (const auto& q : a.finals()) out.add_final(rename("l:", q));
  for (const auto& q : b.finals()) out.add_final(rename("r:", q));
  return out;
}

Sta sta_with_final(const Sta& a, const std::string& q) {
  if (!a.states().count(q)) throw format_error("unknown state " + q);
  Sta out(a.k(), a.theory());
  for (const auto& rule : a.rules()) out.add_rule(rule);
  for (const auto& s : a.states()) out.add_state(s);
  out.add_final(q);
  return out;
}

std::optional<TreePtr> sta_included(const Sta& a, const Sta& b) {
  int k = std::max(a.k(), b.k());
  return sta_empty(sta_intersect(a.lifted(k), sta_complement(b.lifted(k))));
}

std::pair<Fta, Relabeling> sta_to_fta(const Sta& a) {
  Fta fta;
  Relabeling tau;
  fta.states = a.states();
  fta.finals = a.finals();
  std::map<std::string, RankedSymbol> symbol_of; // guard key + arity -> symbol
  for (const auto& rule : a.rules()) {
    int l = static_cast<int>(rule.lhs.size());
    std::string key = std::to_string(l) + ":" + rule.guard.key();
    auto it = symbol_of.find(key);
    if (it == symbol_of.end()) {
      RankedSymbol sym{"g" + std::to_string(symbol_of.size()), l};
      it = symbol_of.emplace(key, sym).first;
      tau.set(sym, rule.guard);
    }
    fta.add_transition(it->second, rule.lhs, rule.rhs);
  }
  return {std::move(fta), std::move(tau)};
}

Sta fta_to_sta(const Fta& a, const Relabeling& tau, const Theory& th, int k) {
  if (a.max_rank() > k)
    throw bound_error("alphabet rank " + std::to_string(a.max_rank()) +
                      " exceeds requested bound " + std::to_string(k));
  Sta out(k, th);
  for (const auto& [sym, transitions] : a.delta) {
    const Predicate& guard = tau.at(sym);
    for (const auto& [lhs, rhs] : transitions) out.add_rule({lhs, guard, rhs});
  }
  for (const auto& q : a.states) out.add_state(q);
  for (const auto& q : a.finals) out.add_final(q);
  return out;
}

Sta sta_all(const Theory& th, int k) {
  Sta out(k, th);
  for (int l = 0; l <= k; ++l)
    out.add_rule({std::vector<std::string>(l, "q"), Predicate::top(), "q"});
  out.add_final("q");
  return out;
}

Sta sta_none(const Theory& th, int k) {
  Sta out(k, th);
  out.add_state("q");
  return out;
}

} // namespace symta
