// Test-side reference implementations, kept independent of the library
// algorithms they check.
#ifndef SYMTA_TESTS_ORACLES_HPP
#define SYMTA_TESTS_ORACLES_HPP

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "symta/stt.hpp"
#include "symta/tree.hpp"

namespace testutil {

using namespace symta;

inline TreePtr random_int_tree(std::mt19937& rng, int depth, int max_label = 12) {
  std::uniform_int_distribution<std::int64_t> lab(0, max_label);
  std::uniform_int_distribution<int> width(0, depth > 1 ? 2 : 0);
  int w = width(rng);
  std::vector<TreePtr> children;
  for (int i = 0; i < w; ++i) children.push_back(random_int_tree(rng, depth - 1, max_label));
  return Tree::node(Label(lab(rng)), std::move(children));
}

/// All integer-labeled trees with rank <= 2 up to the depth (1 = leaves).
/// Only sensible for small depths; depth 3 with 13 labels is ~73 million
/// trees, use the signature-based checks for that scale.
inline std::vector<TreePtr> enumerate_int_trees(int depth, int max_label = 12) {
  std::vector<TreePtr> out;
  if (depth <= 0) return out;
  std::vector<TreePtr> sub = enumerate_int_trees(depth - 1, max_label);
  for (std::int64_t a = 0; a <= max_label; ++a) {
    out.push_back(Tree::leaf(Label(a)));
    for (const auto& c1 : sub) {
      out.push_back(Tree::node(Label(a), {c1}));
      for (const auto& c2 : sub) out.push_back(Tree::node(Label(a), {c1, c2}));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Literal derivation-relation closure for transducers: sentential trees in
// T_V(Q(T_U)), expanded one application at a time until no application
// remains.
// ---------------------------------------------------------------------------

struct Sent;
using SentP = std::shared_ptr<const Sent>;

struct Sent {
  // application q(xi)
  std::string state;
  TreePtr input;
  // or an output node
  Label out;
  std::vector<SentP> kids;

  bool is_app() const { return !state.empty(); }

  std::string str() const {
    if (is_app()) return state + "[" + input->str() + "]";
    std::string s = out.str();
    if (!kids.empty()) {
      s += "(";
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) s += ",";
        s += kids[i]->str();
      }
      s += ")";
    }
    return s;
  }
};

inline SentP sent_app(std::string q, TreePtr xi) {
  auto s = std::make_shared<Sent>();
  s->state = std::move(q);
  s->input = std::move(xi);
  return s;
}

inline SentP sent_out(Label a, std::vector<SentP> kids) {
  auto s = std::make_shared<Sent>();
  s->out = std::move(a);
  s->kids = std::move(kids);
  return s;
}

inline bool sent_terminal(const SentP& s) {
  if (s->is_app()) return false;
  for (const auto& c : s->kids)
    if (!sent_terminal(c)) return false;
  return true;
}

inline TreePtr sent_to_tree(const SentP& s) {
  std::vector<TreePtr> kids;
  for (const auto& c : s->kids) kids.push_back(sent_to_tree(c));
  return Tree::node(s->out, std::move(kids));
}

// One rewrite of the application found at app_index (preorder numbering).
inline SentP sent_rewrite(const SentP& s, int& counter, int target, const SentP& replacement) {
  if (s->is_app()) {
    if (counter++ == target) return replacement;
    return s;
  }
  std::vector<SentP> kids;
  for (const auto& c : s->kids) kids.push_back(sent_rewrite(c, counter, target, replacement));
  return sent_out(s->out, std::move(kids));
}

inline void sent_apps(const SentP& s, std::vector<SentP>& out) {
  if (s->is_app()) {
    out.push_back(s);
    return;
  }
  for (const auto& c : s->kids) sent_apps(c, out);
}

/// { zeta : q(xi) =>*_M zeta } by exhaustive closure over the derivation
/// relation, sorted by serialized form.
inline std::vector<TreePtr> rewrite_oracle(const Stt& m, const std::string& q,
                                           const TreePtr& xi) {
  std::deque<SentP> work{sent_app(q, xi)};
  std::set<std::string> visited{work.front()->str()};
  std::vector<TreePtr> results;
  std::set<std::string> result_keys;

  while (!work.empty()) {
    SentP cur = work.front();
    work.pop_front();
    if (sent_terminal(cur)) {
      TreePtr t = sent_to_tree(cur);
      if (result_keys.insert(t->str()).second) results.push_back(t);
      continue;
    }
    std::vector<SentP> apps;
    sent_apps(cur, apps);
    for (int pos = 0; pos < static_cast<int>(apps.size()); ++pos) {
      const SentP& app = apps[pos];
      for (const auto& rule : m.rules()) {
        if (rule.state != app->state ||
            rule.arity != static_cast<int>(app->input->arity()))
          continue;
        if (!eval_pred(rule.guard, app->input->label())) continue;
        std::function<SentP(const SttRhsPtr&)> inst = [&](const SttRhsPtr& u) -> SentP {
          if (u->is_call())
            return sent_app(u->call_state(), app->input->children()[u->call_var() - 1]);
          auto v = apply_fn(u->fn_term(), app->input->label());
          if (!v) throw partial_fn_error("oracle: undefined function application");
          std::vector<SentP> kids;
          for (const auto& c : u->children()) kids.push_back(inst(c));
          return sent_out(*v, std::move(kids));
        };
        int counter = 0;
        SentP next = sent_rewrite(cur, counter, pos, inst(rule.rhs));
        if (visited.insert(next->str()).second) work.push_back(next);
      }
    }
  }
  std::sort(results.begin(), results.end(), tree_less);
  return results;
}

inline bool same_tree_sets(const std::vector<TreePtr>& a, const std::vector<TreePtr>& b) {
  std::set<std::string> sa, sb;
  for (const auto& t : a) sa.insert(t->str());
  for (const auto& t : b) sb.insert(t->str());
  return sa == sb;
}

} // namespace testutil

#endif
