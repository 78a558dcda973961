#include "symta/srtg.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "symta/errors.hpp"

namespace symta {

int SrtgRhs::rank() const {
  int r = static_cast<int>(children_.size());
  for (const auto& c : children_) r = std::max(r, c->rank());
  return r;
}

std::string SrtgRhs::str() const {
  if (is_state()) return "(state " + state_ + ")";
  std::string out = "(pred " + pred_.key();
  for (const auto& c : children_) out += " " + c->str();
  return out + ")";
}

void Srtg::add_rule(SrtgRule rule) {
  if (rule.rhs->rank() > k_)
    throw bound_error("rule right-hand side exceeds bound k=" + std::to_string(k_));
  states_.insert(rule.lhs);
  std::function<void(const SrtgRhsPtr&)> visit = [&](const SrtgRhsPtr& u) {
    if (u->is_state()) {
      states_.insert(u->state_name());
      return;
    }
    for (const auto& c : u->children()) visit(c);
  };
  visit(rule.rhs);
  rules_.push_back(std::move(rule));
}

SentPtr SentTree::from_tree(const TreePtr& t) {
  std::vector<SentPtr> children;
  for (const auto& c : t->children()) children.push_back(from_tree(c));
  return node(t->label(), std::move(children));
}

bool SentTree::terminal() const {
  if (is_state()) return false;
  for (const auto& c : children_)
    if (!c->terminal()) return false;
  return true;
}

TreePtr SentTree::to_tree() const {
  if (is_state()) throw format_error("sentential tree still contains state " + state_);
  std::vector<TreePtr> children;
  for (const auto& c : children_) children.push_back(c->to_tree());
  return Tree::node(label_, std::move(children));
}

std::string SentTree::str() const {
  if (is_state()) return "<" + state_ + ">";
  std::string out = label_.str();
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

// Instantiates a rule right-hand side with deterministic witnesses; nullopt
// when some predicate is empty.
std::optional<SentPtr> instantiate(const Theory& th, const SrtgRhsPtr& u) {
  if (u->is_state()) return SentTree::state(u->state_name());
  auto w = satisfiable(th, u->predicate());
  if (!w) return std::nullopt;
  std::vector<SentPtr> children;
  for (const auto& c : u->children()) {
    auto sub = instantiate(th, c);
    if (!sub) return std::nullopt;
    children.push_back(*sub);
  }
  return SentTree::node(*w, std::move(children));
}

SentPtr replace_state_at(const SentPtr& sent, int target_index, int& counter,
                         const SentPtr& replacement) {
  if (sent->is_state()) {
    if (counter++ == target_index) return replacement;
    return sent;
  }
  std::vector<SentPtr> children;
  for (const auto& c : sent->children())
    children.push_back(replace_state_at(c, target_index, counter, replacement));
  return SentTree::node(sent->label(), std::move(children));
}

void collect_state_leaves(const SentPtr& sent, std::vector<std::string>& out) {
  if (sent->is_state()) {
    out.push_back(sent->state_name());
    return;
  }
  for (const auto& c : sent->children()) collect_state_leaves(c, out);
}

} // namespace

std::vector<SentPtr> srtg_step(const Srtg& g, const SentPtr& sent) {
  std::vector<std::string> leaves;
  collect_state_leaves(sent, leaves);
  std::vector<SentPtr> out;
  for (int pos = 0; pos < static_cast<int>(leaves.size()); ++pos) {
    for (const auto& rule : g.rules()) {
      if (rule.lhs != leaves[pos]) continue;
      auto body = instantiate(g.theory(), rule.rhs);
      if (!body) continue;
      int counter = 0;
      out.push_back(replace_state_at(sent, pos, counter, *body));
    }
  }
  return out;
}

std::optional<TreePtr> srtg_sample(const Srtg& g, int depth_budget, std::mt19937& rng) {
  std::function<std::optional<TreePtr>(const std::string&, int)> grow =
      [&](const std::string& q, int budget) -> std::optional<TreePtr> {
    if (budget <= 0) return std::nullopt;
    std::vector<const SrtgRule*> applicable;
    for (const auto& rule : g.rules())
      if (rule.lhs == q) applicable.push_back(&rule);
    if (applicable.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, applicable.size() - 1);
    const SrtgRule* rule = applicable[pick(rng)];
    std::function<std::optional<TreePtr>(const SrtgRhsPtr&, int)> build =
        [&](const SrtgRhsPtr& u, int b) -> std::optional<TreePtr> {
      if (u->is_state()) return grow(u->state_name(), b);
      auto w = sample_label(g.theory(), u->predicate(), rng);
      if (!w) return std::nullopt;
      std::vector<TreePtr> children;
      for (const auto& c : u->children()) {
        auto sub = build(c, b - 1);
        if (!sub) return std::nullopt;
        children.push_back(*sub);
      }
      return Tree::node(*w, std::move(children));
    };
    return build(rule->rhs, budget);
  };
  return grow(g.init(), depth_budget);
}

namespace {

bool rhs_feasible(const Theory& th, const SrtgRhsPtr& u) {
  if (u->is_state()) return true;
  if (!satisfiable(th, u->predicate())) return false;
  for (const auto& c : u->children())
    if (!rhs_feasible(th, c)) return false;
  return true;
}

} // namespace

Srtg srtg_clean(const Srtg& g) {
  Srtg out(g.k(), g.theory(), g.init());
  for (const auto& q : g.states()) out.add_state(q);
  for (const auto& rule : g.rules())
    if (rhs_feasible(g.theory(), rule.rhs)) out.add_rule(rule);
  return out;
}

std::pair<Rtg, Relabeling> srtg_to_rtg(const Srtg& g) {
  Rtg rtg;
  Relabeling tau;
  rtg.init = g.init();
  rtg.states = g.states();
  std::map<std::string, RankedSymbol> symbol_of;
  std::function<TermPtr(const SrtgRhsPtr&)> convert = [&](const SrtgRhsPtr& u) -> TermPtr {
    if (u->is_state()) return Term::state(u->state_name());
    int l = static_cast<int>(u->children().size());
    std::string key = std::to_string(l) + ":" + u->predicate().key();
    auto it = symbol_of.find(key);
    if (it == symbol_of.end()) {
      RankedSymbol sym{"p" + std::to_string(symbol_of.size()), l};
      it = symbol_of.emplace(key, sym).first;
      tau.set(sym, u->predicate());
    }
    std::vector<TermPtr> children;
    for (const auto& c : u->children()) children.push_back(convert(c));
    return Term::node(it->second, std::move(children));
  };
  for (const auto& rule : g.rules()) rtg.rules.push_back({rule.lhs, convert(rule.rhs)});
  return {std::move(rtg), std::move(tau)};
}

Srtg rtg_to_srtg(const Rtg& g, const Relabeling& tau, const Theory& th, int k) {
  if (g.max_rank() > k)
    throw bound_error("alphabet rank " + std::to_string(g.max_rank()) +
                      " exceeds requested bound " + std::to_string(k));
  Srtg out(k, th, g.init);
  for (const auto& q : g.states) out.add_state(q);
  std::function<SrtgRhsPtr(const TermPtr&)> convert = [&](const TermPtr& u) -> SrtgRhsPtr {
    if (u->is_state()) return SrtgRhs::state(u->state_name());
    std::vector<SrtgRhsPtr> children;
    for (const auto& c : u->children()) children.push_back(convert(c));
    return SrtgRhs::pred(tau.at(u->symbol()), std::move(children));
  };
  for (const auto& rule : g.rules) out.add_rule({rule.lhs, convert(rule.rhs)});
  return out;
}

Srtg srtg_normalize(const Srtg& g) {
  Srtg cleaned = srtg_clean(g);
  auto [rtg, tau] = srtg_to_rtg(cleaned);
  Rtg normal = rtg_normalize(rtg);
  return rtg_to_srtg(normal, tau, g.theory(), g.k());
}

bool srtg_is_clean(const Srtg& g) {
  for (const auto& rule : g.rules())
    if (!rhs_feasible(g.theory(), rule.rhs)) return false;
  return true;
}

bool srtg_is_normal_form(const Srtg& g) {
  for (const auto& rule : g.rules()) {
    if (rule.rhs->is_state()) return false;
    for (const auto& c : rule.rhs->children())
      if (!c->is_state()) return false;
  }
  return true;
}

bool srtg_is_reduced(const Srtg& g) {
  // productive states
  std::set<std::string> productive;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : g.rules()) {
      if (productive.count(rule.lhs)) continue;
      std::function<bool(const SrtgRhsPtr&)> ok = [&](const SrtgRhsPtr& u) -> bool {
        if (u->is_state()) return productive.count(u->state_name()) > 0;
        if (!satisfiable(g.theory(), u->predicate())) return false;
        for (const auto& c : u->children())
          if (!ok(c)) return false;
        return true;
      };
      if (ok(rule.rhs)) {
        productive.insert(rule.lhs);
        changed = true;
      }
    }
  }
  // reachable states
  std::set<std::string> reachable{g.init()};
  changed = true;
  while (changed) {
    changed = false;
    for (const auto& rule : g.rules()) {
      if (!reachable.count(rule.lhs)) continue;
      std::vector<std::string> used;
      std::function<void(const SrtgRhsPtr&)> visit = [&](const SrtgRhsPtr& u) {
        if (u->is_state()) {
          used.push_back(u->state_name());
          return;
        }
        for (const auto& c : u->children()) visit(c);
      };
      visit(rule.rhs);
      for (const auto& q : used)
        if (reachable.insert(q).second) changed = true;
    }
  }
  for (const auto& q : g.states())
    if (!productive.count(q) || !reachable.count(q)) return false;
  return true;
}

Sta srtg_to_sta(const Srtg& g) {
  auto [rtg, tau] = srtg_to_rtg(g);
  Fta fta = rtg_to_fta(rtg);
  return fta_to_sta(fta, tau, g.theory(), g.k());
}

Srtg sta_to_srtg(const Sta& a) {
  auto [fta, tau] = sta_to_fta(a);
  Rtg rtg = fta_to_rtg(fta);
  return rtg_to_srtg(rtg, tau, a.theory(), a.k());
}

bool srtg_member(const Srtg& g, const TreePtr& xi) {
  return sta_member(srtg_to_sta(g), xi).accepted;
}

Srtg srtg_universe(const Theory& th, int k) {
  Srtg g(k, th, "q0");
  for (int l = 0; l <= k; ++l) {
    std::vector<SrtgRhsPtr> children;
    for (int i = 0; i < l; ++i) children.push_back(SrtgRhs::state("q0"));
    g.add_rule({"q0", SrtgRhs::pred(Predicate::top(), std::move(children))});
  }
  return g;
}

} // namespace symta
