#include "symta/stt.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "symta/errors.hpp"

namespace symta {

int SttRhs::rank() const {
  if (is_call()) return 0;
  int r = static_cast<int>(children_.size());
  for (const auto& c : children_) r = std::max(r, c->rank());
  return r;
}

int SttRhs::fn_count() const {
  if (is_call()) return 0;
  int n = 1;
  for (const auto& c : children_) n += c->fn_count();
  return n;
}

std::string SttRhs::str() const {
  if (is_call()) return "(call " + state_ + " " + std::to_string(var_) + ")";
  std::string out = "(fn " + fn_.key();
  for (const auto& c : children_) out += " " + c->str();
  return out + ")";
}

std::vector<std::pair<std::string, int>> rhs_calls(const SttRhsPtr& rhs) {
  std::vector<std::pair<std::string, int>> out;
  std::function<void(const SttRhsPtr&)> visit = [&](const SttRhsPtr& u) {
    if (u->is_call()) {
      out.emplace_back(u->call_state(), u->call_var());
      return;
    }
    for (const auto& c : u->children()) visit(c);
  };
  visit(rhs);
  return out;
}

void Stt::add_rule(SttRule rule) {
  if (rule.arity > k_)
    throw bound_error("rule arity exceeds bound k=" + std::to_string(k_));
  if (rule.rhs->rank() > k_)
    throw bound_error("rule right-hand side exceeds bound k=" + std::to_string(k_));
  for (const auto& [q, i] : rhs_calls(rule.rhs)) {
    if (i < 1 || i > rule.arity)
      throw format_error("call variable x" + std::to_string(i) +
                         " outside arity " + std::to_string(rule.arity));
    states_.insert(q);
  }
  states_.insert(rule.state);
  rules_.push_back(std::move(rule));
}

Stt Stt::lifted(int k) const {
  if (k < k_) throw bound_error("cannot lower the bound of a transducer");
  Stt out(k, in_, out_, init_);
  out.states_ = states_;
  out.rules_ = rules_;
  return out;
}

namespace {

using OutputSet = std::vector<TreePtr>;

struct ApplyEngine {
  const Stt& m;
  std::map<std::pair<std::string, const Tree*>, OutputSet> memo;

  OutputSet run(const std::string& q, const TreePtr& xi) {
    auto key = std::make_pair(q, xi.get());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    std::vector<TreePtr> results;
    std::set<std::string> seen;
    for (std::size_t ri = 0; ri < m.rules().size(); ++ri) {
      const SttRule& rule = m.rules()[ri];
      if (rule.state != q || rule.arity != static_cast<int>(xi->arity())) continue;
      if (!eval_pred(rule.guard, xi->label())) continue;
      check_functions(rule, ri, xi->label());
      for (auto& t : build(rule.rhs, xi))
        if (seen.insert(t->str()).second) results.push_back(std::move(t));
    }
    std::sort(results.begin(), results.end(), tree_less);
    memo.emplace(key, results);
    return results;
  }

  // The paper instantiates u(a) the moment a rule fires, so every function
  // of an applicable rule must be defined at the label.
  void check_functions(const SttRule& rule, std::size_t index, const Label& a) {
    std::function<void(const SttRhsPtr&)> visit = [&](const SttRhsPtr& u) {
      if (u->is_call()) return;
      if (!apply_fn(u->fn_term(), a))
        throw partial_fn_error("rule #" + std::to_string(index + 1) + " for state " +
                               rule.state + ": function " + u->fn_term().key() +
                               " is undefined at label " + a.str());
      for (const auto& c : u->children()) visit(c);
    };
    visit(rule.rhs);
  }

  OutputSet build(const SttRhsPtr& u, const TreePtr& xi) {
    if (u->is_call()) return run(u->call_state(), xi->children()[u->call_var() - 1]);
    Label value = *apply_fn(u->fn_term(), xi->label());
    std::vector<OutputSet> kid_sets;
    for (const auto& c : u->children()) {
      kid_sets.push_back(build(c, xi));
      if (kid_sets.back().empty()) return {};
    }
    OutputSet out;
    std::vector<std::size_t> idx(kid_sets.size(), 0);
    while (true) {
      std::vector<TreePtr> kids;
      for (std::size_t i = 0; i < kid_sets.size(); ++i) kids.push_back(kid_sets[i][idx[i]]);
      out.push_back(Tree::node(value, std::move(kids)));
      int i = static_cast<int>(kid_sets.size()) - 1;
      for (; i >= 0; --i) {
        if (++idx[i] < kid_sets[i].size()) break;
        idx[i] = 0;
      }
      if (i < 0) break;
    }
    return out;
  }
};

void check_input(const Stt& m, const TreePtr& xi) {
  if (xi->rank() > m.k())
    throw bound_error("input rank exceeds transducer bound k=" + std::to_string(m.k()));
  std::function<void(const TreePtr&)> visit = [&](const TreePtr& t) {
    m.in_theory().check_label(t->label());
    for (const auto& c : t->children()) visit(c);
  };
  visit(xi);
}

} // namespace

std::vector<TreePtr> stt_apply(const Stt& m, const std::string& q, const TreePtr& xi) {
  check_input(m, xi);
  ApplyEngine engine{m, {}};
  return engine.run(q, xi);
}

std::vector<TreePtr> stt_apply(const Stt& m, const TreePtr& xi) {
  return stt_apply(m, m.init(), xi);
}

SttProps stt_props(const Stt& m) {
  SttProps p;
  p.linear = true;
  p.nondeleting = true;
  p.simple = true;
  for (const auto& rule : m.rules()) {
    std::vector<int> occurrences(rule.arity + 1, 0);
    for (const auto& [q, i] : rhs_calls(rule.rhs)) ++occurrences[i];
    for (int i = 1; i <= rule.arity; ++i) {
      if (occurrences[i] > 1) p.linear = false;
      if (occurrences[i] < 1) p.nondeleting = false;
    }
    if (rule.rhs->fn_count() != 1) p.simple = false;
  }

  p.deterministic = true;
  for (std::size_t i = 0; i < m.rules().size() && p.deterministic; ++i)
    for (std::size_t j = i + 1; j < m.rules().size() && p.deterministic; ++j) {
      const SttRule& a = m.rules()[i];
      const SttRule& b = m.rules()[j];
      if (a.state != b.state || a.arity != b.arity) continue;
      if (satisfiable(m.in_theory(), Predicate::conj(a.guard, b.guard)))
        p.deterministic = false;
    }

  p.total = true;
  for (const auto& q : m.states()) {
    for (int l = 0; l <= m.k() && p.total; ++l) {
      std::vector<Predicate> guards;
      for (const auto& rule : m.rules())
        if (rule.state == q && rule.arity == l) guards.push_back(rule.guard);
      if (satisfiable(m.in_theory(), Predicate::negate(Predicate::disj_all(guards))))
        p.total = false;
    }
    if (!p.total) break;
  }

  // Alphabetic: finite alphabets, singleton guards with a consistent input
  // rank, constant functions with a consistent output rank.
  p.alphabetic = m.in_theory().is_finite() && m.out_theory().is_finite();
  std::map<std::string, int> in_rank, out_rank;
  if (p.alphabetic) {
    for (const auto& rule : m.rules()) {
      auto ext = finite_extent(m.in_theory(), rule.guard);
      if (ext.size() != 1) {
        p.alphabetic = false;
        break;
      }
      auto [it, fresh] = in_rank.emplace(ext.front().sym(), rule.arity);
      if (!fresh && it->second != rule.arity) {
        p.alphabetic = false;
        break;
      }
      std::function<bool(const SttRhsPtr&)> ok = [&](const SttRhsPtr& u) -> bool {
        if (u->is_call()) return true;
        auto b = u->fn_term().constant_value(m.in_theory());
        if (!b || !m.out_theory().contains(*b)) return false;
        auto [oit, onew] = out_rank.emplace(b->sym(), static_cast<int>(u->children().size()));
        if (!onew && oit->second != static_cast<int>(u->children().size())) return false;
        for (const auto& c : u->children())
          if (!ok(c)) return false;
        return true;
      };
      if (!ok(rule.rhs)) {
        p.alphabetic = false;
        break;
      }
    }
  }
  return p;
}

namespace {

std::string fresh_name(const std::set<std::string>& taken, std::string base) {
  while (taken.count(base)) base += "'";
  return base;
}

} // namespace

Stt identity_stt(const Sta& a) {
  std::string init = fresh_name(a.states(), "qid");
  Stt m(a.k(), a.theory(), a.theory(), init);
  FnTerm id = FnTerm::identity(a.theory());
  auto make_rhs = [&](const StaRule& rule) {
    std::vector<SttRhsPtr> kids;
    for (std::size_t i = 0; i < rule.lhs.size(); ++i)
      kids.push_back(SttRhs::call(rule.lhs[i], static_cast<int>(i + 1)));
    return SttRhs::fn(id, std::move(kids));
  };
  for (const auto& rule : a.rules()) {
    m.add_rule({rule.rhs, static_cast<int>(rule.lhs.size()), rule.guard, make_rhs(rule)});
    if (a.finals().count(rule.rhs))
      m.add_rule({init, static_cast<int>(rule.lhs.size()), rule.guard, make_rhs(rule)});
  }
  for (const auto& q : a.states()) m.add_state(q);
  return m;
}

TdRhsPtr TdRhs::node(RankedSymbol sym, std::vector<TdRhsPtr> children) {
  if (static_cast<int>(children.size()) != sym.rank)
    throw format_error("output arity does not match rank of " + sym.str());
  return std::make_shared<TdRhs>("", 0, std::move(sym), std::move(children));
}

std::vector<TreePtr> tdtt_apply(const Tdtt& t, const std::string& q, const TreePtr& xi) {
  RankedSymbol in_sym{xi->label().str(), static_cast<int>(xi->arity())};
  std::vector<TreePtr> results;
  std::set<std::string> seen;
  for (const auto& rule : t.rules) {
    if (rule.state != q || !(rule.in_sym == in_sym)) continue;
    std::function<std::vector<TreePtr>(const TdRhsPtr&)> build =
        [&](const TdRhsPtr& u) -> std::vector<TreePtr> {
      if (u->is_call()) return tdtt_apply(t, u->call_state(), xi->children()[u->call_var() - 1]);
      std::vector<std::vector<TreePtr>> kid_sets;
      for (const auto& c : u->children()) {
        kid_sets.push_back(build(c));
        if (kid_sets.back().empty()) return {};
      }
      std::vector<TreePtr> out;
      std::vector<std::size_t> idx(kid_sets.size(), 0);
      while (true) {
        std::vector<TreePtr> kids;
        for (std::size_t i = 0; i < kid_sets.size(); ++i) kids.push_back(kid_sets[i][idx[i]]);
        out.push_back(Tree::node(Label(u->symbol().name), std::move(kids)));
        int i = static_cast<int>(kid_sets.size()) - 1;
        for (; i >= 0; --i) {
          if (++idx[i] < kid_sets[i].size()) break;
          idx[i] = 0;
        }
        if (i < 0) break;
      }
      return out;
    };
    for (auto& z : build(rule.rhs))
      if (seen.insert(z->str()).second) results.push_back(std::move(z));
  }
  std::sort(results.begin(), results.end(), tree_less);
  return results;
}

Tdtt stt_to_tdtt(const Stt& m) {
  if (!stt_props(m).alphabetic)
    throw capability_error("classical view requires an alphabetic transducer");
  Tdtt t;
  t.init = m.init();
  t.states = m.states();
  for (const auto& rule : m.rules()) {
    Label sigma = finite_extent(m.in_theory(), rule.guard).front();
    std::function<TdRhsPtr(const SttRhsPtr&)> convert = [&](const SttRhsPtr& u) -> TdRhsPtr {
      if (u->is_call()) return TdRhs::call(u->call_state(), u->call_var());
      Label b = *u->fn_term().constant_value(m.in_theory());
      std::vector<TdRhsPtr> kids;
      for (const auto& c : u->children()) kids.push_back(convert(c));
      RankedSymbol out_sym{b.sym(), static_cast<int>(kids.size())};
      return TdRhs::node(std::move(out_sym), std::move(kids));
    };
    t.rules.push_back({rule.state, {sigma.sym(), rule.arity}, convert(rule.rhs)});
  }
  return t;
}

Stt tdtt_to_stt(const Tdtt& t, int k) {
  std::set<std::string> in_syms, out_syms;
  std::function<void(const TdRhsPtr&)> collect_out = [&](const TdRhsPtr& u) {
    if (u->is_call()) return;
    out_syms.insert(u->symbol().name);
    for (const auto& c : u->children()) collect_out(c);
  };
  for (const auto& rule : t.rules) {
    in_syms.insert(rule.in_sym.name);
    collect_out(rule.rhs);
  }
  if (in_syms.empty()) in_syms.insert("a");
  if (out_syms.empty()) out_syms.insert("a");
  Theory in_th = Theory::finite(in_syms);
  Theory out_th = Theory::finite(out_syms);
  Stt m(k, in_th, out_th, t.init);
  for (const auto& q : t.states) m.add_state(q);
  for (const auto& rule : t.rules) {
    std::function<SttRhsPtr(const TdRhsPtr&)> convert = [&](const TdRhsPtr& u) -> SttRhsPtr {
      if (u->is_call()) return SttRhs::call(u->call_state(), u->call_var());
      std::vector<SttRhsPtr> kids;
      for (const auto& c : u->children()) kids.push_back(convert(c));
      return SttRhs::fn(FnTerm::constant_finite(in_th, Label(u->symbol().name)),
                        std::move(kids));
    };
    m.add_rule({rule.state, rule.in_sym.rank, Predicate::in_set({rule.in_sym.name}),
                convert(rule.rhs)});
  }
  return m;
}

} // namespace symta
