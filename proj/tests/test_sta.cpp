#include <doctest.h>

#include <map>
#include <random>

#include "symta/sta.hpp"

using namespace symta;

namespace {

const Theory kInt = Theory::integers();

TreePtr t(const std::string& s) { return parse_tree(s); }

// The divisibility automaton of the running example: binary trees whose
// labels are all divisible by 2 or all divisible by 3.
Sta example_sta() {
  Sta a(2, kInt);
  for (int i : {2, 3}) {
    std::string q = std::to_string(i);
    a.add_rule({{}, Predicate::div(i), q});
    a.add_rule({{q, q}, Predicate::div(i), q});
    a.add_final(q);
  }
  return a;
}

TreePtr random_tree(std::mt19937& rng, int depth, int max_label = 12) {
  std::uniform_int_distribution<std::int64_t> lab(0, max_label);
  std::uniform_int_distribution<int> width(0, depth > 1 ? 2 : 0);
  int w = width(rng);
  std::vector<TreePtr> children;
  for (int i = 0; i < w; ++i) children.push_back(random_tree(rng, depth - 1, max_label));
  return Tree::node(Label(lab(rng)), std::move(children));
}

Predicate random_guard(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 5);
  switch (pick(rng)) {
    case 0: return Predicate::div(2);
    case 1: return Predicate::div(3);
    case 2: return Predicate::range(0, 6);
    case 3: return Predicate::negate(Predicate::div(2));
    case 4: return Predicate::top();
    default: return Predicate::cong(4, 1);
  }
}

Sta random_sta(std::mt19937& rng, int max_states = 4) {
  std::uniform_int_distribution<int> st(0, max_states - 1), coin(0, 1), cnt(1, 2);
  Sta a(2, kInt);
  auto q = [&](int i) { return "q" + std::to_string(i); };
  for (int i = 0; i < max_states; ++i) a.add_state(q(i));
  for (int l = 0; l <= 2; ++l) {
    for (int i = cnt(rng); i > 0; --i) {
      std::vector<std::string> lhs;
      for (int j = 0; j < l; ++j) lhs.push_back(q(st(rng)));
      a.add_rule({std::move(lhs), random_guard(rng), q(st(rng))});
    }
  }
  a.add_final(q(st(rng)));
  if (coin(rng)) a.add_final(q(st(rng)));
  return a;
}

// Naive fixpoint over the set of subtrees: the least Q-family satisfying
// the two defining clauses, iterated chaotically.
std::set<std::string> oracle_states(const Sta& a, const TreePtr& xi) {
  std::vector<const Tree*> subs;
  std::function<void(const TreePtr&)> collect = [&](const TreePtr& s) {
    subs.push_back(s.get());
    for (const auto& c : s->children()) collect(c);
  };
  collect(xi);
  std::map<const Tree*, std::set<std::string>> L;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Tree* s : subs) {
      for (const auto& rule : a.rules()) {
        if (rule.lhs.size() != s->children().size()) continue;
        if (L[s].count(rule.rhs)) continue;
        if (!eval_pred(rule.guard, s->label())) continue;
        bool ok = true;
        for (std::size_t i = 0; i < rule.lhs.size() && ok; ++i)
          ok = L[s->children()[i].get()].count(rule.lhs[i]) > 0;
        if (ok) {
          L[s].insert(rule.rhs);
          changed = true;
        }
      }
    }
  }
  return L[xi.get()];
}

bool member(const Sta& a, const TreePtr& xi) { return sta_member(a, xi).accepted; }

} // namespace

TEST_CASE("running example: membership and root state sets") {
  Sta a = example_sta();
  CHECK(member(a, t("2(4,6)")));
  CHECK(member(a, t("3(15,18)")));
  CHECK(member(a, t("6(12,18)")));

  auto run = sta_member(a, t("6(12,18)"));
  CHECK(run.root_states == std::set<std::string>{"2", "3"});

  CHECK_FALSE(member(a, t("2(3,4)")));
  CHECK_FALSE(member(a, t("5")));

  CHECK_THROWS_AS(sta_member(a, t("2(4,6,8)")), bound_error);
}

TEST_CASE("sta_member equals the naive fixpoint oracle") {
  std::mt19937 rng(2024);
  for (int iter = 0; iter < 30; ++iter) {
    Sta a = random_sta(rng);
    for (int j = 0; j < 40; ++j) {
      TreePtr xi = random_tree(rng, 3);
      CHECK(sta_member(a, xi).root_states == oracle_states(a, xi));
    }
  }
}

TEST_CASE("sta_empty: witness extraction and trivial empties") {
  Sta a = example_sta();
  auto w = sta_empty(a);
  REQUIRE(w);
  CHECK(member(a, *w));

  Sta nofinal(2, kInt);
  nofinal.add_rule({{}, Predicate::top(), "q"});
  CHECK_FALSE(sta_empty(nofinal));

  Sta bottomed(2, kInt);
  bottomed.add_rule({{}, Predicate::bottom(), "q"});
  bottomed.add_final("q");
  CHECK_FALSE(sta_empty(bottomed));

  // Witness search must thread through intermediate states.
  Sta chain(2, kInt);
  chain.add_rule({{}, Predicate::div(3), "leaf"});
  chain.add_rule({{"leaf", "leaf"}, Predicate::div(2), "root"});
  chain.add_final("root");
  auto cw = sta_empty(chain);
  REQUIRE(cw);
  CHECK(member(chain, *cw));
  CHECK((*cw)->arity() == 2);
}

TEST_CASE("double complement preserves membership") {
  std::mt19937 rng(5150);
  for (int iter = 0; iter < 10; ++iter) {
    Sta a = random_sta(rng, 3);
    Sta cc = sta_complement(sta_complement(a));
    for (int j = 0; j < 200; ++j) {
      TreePtr xi = random_tree(rng, 3);
      CHECK(member(a, xi) == member(cc, xi));
    }
  }
}

TEST_CASE("complement is relative to k-bounded trees") {
  Sta a = example_sta();
  Sta c = sta_complement(a);
  CHECK_FALSE(member(c, t("2(4,6)")));
  CHECK(member(c, t("5")));
  CHECK(member(c, t("2(3,4)")));
  CHECK(member(c, t("7(2)"))); // unary shape is outside L(A), inside T^(2)

  // A tree and its complement never overlap and jointly cover samples.
  std::mt19937 rng(99);
  for (int j = 0; j < 200; ++j) {
    TreePtr xi = random_tree(rng, 3);
    CHECK(member(a, xi) != member(c, xi));
  }

  CHECK_FALSE(sta_empty(sta_intersect(a, c)));
}

TEST_CASE("union of single-final restrictions equals the full automaton") {
  Sta a = example_sta();
  Sta u = sta_union(sta_with_final(a, "2"), sta_with_final(a, "3"));
  std::mt19937 rng(123);
  for (int j = 0; j < 300; ++j) {
    TreePtr xi = random_tree(rng, 3);
    CHECK(member(a, xi) == member(u, xi));
  }
  CHECK_FALSE(sta_included(a, u));
  CHECK_FALSE(sta_included(u, a));
}

TEST_CASE("after determinization exactly one guard fires per label and arity") {
  std::mt19937 rng(314);
  std::uniform_int_distribution<std::int64_t> lab(-20, 20);
  for (int iter = 0; iter < 8; ++iter) {
    Sta det = sta_determinize(random_sta(rng, 3));
    // Guards per arity over distinct left-hand-side tuples must form a
    // partition: exactly one holds for any label.
    for (int l = 0; l <= det.k(); ++l) {
      std::map<std::string, std::vector<Predicate>> by_tuple;
      for (const auto& rule : det.rules()) {
        if (static_cast<int>(rule.lhs.size()) != l) continue;
        std::string key;
        for (const auto& q : rule.lhs) key += q + " ";
        by_tuple[key].push_back(rule.guard);
      }
      for (const auto& [key, guards] : by_tuple) {
        for (int j = 0; j < 40; ++j) {
          Label x(lab(rng));
          int hits = 0;
          for (const auto& g : guards) hits += eval_pred(g, x);
          CHECK(hits == 1);
        }
      }
    }
  }
}

TEST_CASE("inclusion: reflexivity, empties and counterexample validity") {
  Sta a = example_sta();
  CHECK_FALSE(sta_included(a, a));

  Sta none = sta_none(kInt, 2);
  CHECK_FALSE(sta_included(none, a));
  CHECK_FALSE(sta_included(none, none));

  // All-labels-divisible-by-2 automaton over every arity up to 2.
  Sta even(2, kInt);
  for (int l = 0; l <= 2; ++l)
    even.add_rule({std::vector<std::string>(l, "p"), Predicate::div(2), "p"});
  even.add_final("p");

  auto cx = sta_included(a, even);
  REQUIRE(cx);
  CHECK(member(a, *cx));
  CHECK_FALSE(member(even, *cx));
  bool has_odd_multiple_of_3 = false;
  std::function<void(const TreePtr&)> scan = [&](const TreePtr& s) {
    if (s->label().num() % 3 == 0 && s->label().num() % 2 != 0)
      has_odd_multiple_of_3 = true;
    for (const auto& c : s->children()) scan(c);
  };
  scan(*cx);
  CHECK(has_odd_multiple_of_3);

  CHECK_FALSE(sta_included(even, sta_all(kInt, 2)));
}

TEST_CASE("sta_to_fta produces the guard/arity alphabet of the example") {
  Sta a = example_sta();
  auto [fta, tau] = sta_to_fta(a);
  std::multiset<std::pair<int, std::string>> syms;
  for (const auto& [sym, pred] : tau.entries()) syms.insert({sym.rank, pred.key()});
  std::multiset<std::pair<int, std::string>> expect = {
      {0, Predicate::div(2).key()},
      {0, Predicate::div(3).key()},
      {2, Predicate::div(2).key()},
      {2, Predicate::div(3).key()},
  };
  CHECK(syms == expect);
  CHECK(fta.states == a.states());
  CHECK(fta.finals == a.finals());
}

TEST_CASE("relabeling characterization: both directions by sampling") {
  std::mt19937 rng(808);
  for (int iter = 0; iter < 10; ++iter) {
    Sta a = random_sta(rng, 3);
    auto [fta, tau] = sta_to_fta(a);

    // xi in L(A) iff some same-shaped symbol tree is in L(fta) and relabels
    // to xi; enumerate all symbol assignments per shape.
    auto check_char = [&](const TreePtr& xi) {
      std::vector<RankedSymbol> syms = tau.alphabet();
      std::function<std::vector<TreePtr>(const TreePtr&)> builds =
          [&](const TreePtr& node) -> std::vector<TreePtr> {
        std::vector<std::vector<TreePtr>> kid_choices;
        for (const auto& c : node->children()) kid_choices.push_back(builds(c));
        std::vector<TreePtr> out;
        for (const auto& sym : syms) {
          if (sym.rank != static_cast<int>(node->arity())) continue;
          if (!eval_pred(tau.at(sym), node->label())) continue;
          std::vector<std::vector<TreePtr>> acc = {{}};
          for (const auto& choices : kid_choices) {
            std::vector<std::vector<TreePtr>> next;
            for (const auto& partial : acc)
              for (const auto& c : choices) {
                auto copy = partial;
                copy.push_back(c);
                next.push_back(std::move(copy));
              }
            acc = std::move(next);
          }
          for (auto& kids : acc) out.push_back(Tree::node(Label(sym.name), std::move(kids)));
        }
        return out;
      };
      bool any = false;
      for (const auto& zeta : builds(xi))
        if (fta_member(fta, zeta)) any = true;
      CHECK(member(a, xi) == any);
    };
    for (int j = 0; j < 25; ++j) check_char(random_tree(rng, 3, 8));

    // Round trip through the classical side.
    Sta back = fta_to_sta(fta, tau, kInt, a.k());
    for (int j = 0; j < 200; ++j) {
      TreePtr xi = random_tree(rng, 3);
      CHECK(member(a, xi) == member(back, xi));
    }
  }
}

TEST_CASE("identity relabeling embeds a recognizable language") {
  // Classical automaton over {a/0, f/1, g/2}: trees with an even number of
  // f-nodes along every path are not expressible; keep it simple instead:
  // exactly the trees whose leaves are all 'a' and with at least one g.
  Fta cls;
  cls.add_transition({"a", 0}, {}, "leaf");
  cls.add_transition({"f", 1}, {"leaf"}, "leaf");
  cls.add_transition({"g", 2}, {"leaf", "leaf"}, "hit");
  cls.add_transition({"f", 1}, {"hit"}, "hit");
  cls.add_transition({"g", 2}, {"hit", "leaf"}, "hit");
  cls.add_transition({"g", 2}, {"leaf", "hit"}, "hit");
  cls.add_transition({"g", 2}, {"hit", "hit"}, "hit");
  cls.finals = {"hit"};

  Theory fin = Theory::finite({"a", "f", "g"});
  Relabeling id;
  for (const auto& sym : cls.alphabet) id.set(sym, Predicate::in_set({sym.name}));
  Sta sym = fta_to_sta(cls, id, fin, 2);

  std::function<std::vector<TreePtr>(int)> enumerate = [&](int depth) {
    std::vector<TreePtr> out;
    out.push_back(t("a"));
    if (depth <= 1) return out;
    auto sub = enumerate(depth - 1);
    for (const auto& s : sub) out.push_back(Tree::node(Label("f"), {s}));
    for (const auto& s1 : sub)
      for (const auto& s2 : sub) out.push_back(Tree::node(Label("g"), {s1, s2}));
    return out;
  };
  for (const auto& xi : enumerate(3)) CHECK(fta_member(cls, xi) == member(sym, xi));

  CHECK_THROWS_AS(fta_to_sta(cls, id, fin, 1), bound_error);
}

TEST_CASE("empty predicate for a symbol removes its derived nodes") {
  Fta cls;
  cls.add_transition({"a", 0}, {}, "q");
  cls.add_transition({"f", 1}, {"q"}, "q");
  cls.finals = {"q"};
  Relabeling tau;
  tau.set({"a", 0}, Predicate::eq(1));
  tau.set({"f", 1}, Predicate::bottom());
  Sta sym = fta_to_sta(cls, tau, kInt, 2);
  CHECK(member(sym, t("1")));
  CHECK_FALSE(member(sym, t("1(1)")));
  CHECK_FALSE(member(sym, t("2")));
}

TEST_CASE("universe and empty constants") {
  Sta all = sta_all(kInt, 2);
  Sta none = sta_none(kInt, 2);
  std::mt19937 rng(7);
  for (int j = 0; j < 100; ++j) {
    TreePtr xi = random_tree(rng, 3);
    CHECK(member(all, xi));
    CHECK_FALSE(member(none, xi));
  }
  CHECK_FALSE(sta_empty(none));
  CHECK(sta_empty(all));
  CHECK_THROWS_AS(sta_member(sta_all(kInt, 1), t("2(4,6)")), bound_error);
}

TEST_CASE("boolean operations reject mismatched theories") {
  Sta a = example_sta();
  Sta b(2, Theory::finite({"x"}));
  b.add_rule({{}, Predicate::in_set({"x"}), "q"});
  b.add_final("q");
  CHECK_THROWS_AS(sta_intersect(a, b), type_error);
  CHECK_THROWS_AS(sta_union(a, b), type_error);
}

TEST_CASE("binary operations lift to the larger bound") {
  Sta a = example_sta(); // k = 2
  Sta leaf_only(1, kInt);
  leaf_only.add_rule({{}, Predicate::div(2), "q"});
  leaf_only.add_final("q");

  Sta both = sta_intersect(a, leaf_only);
  CHECK(both.k() == 2);
  CHECK(member(both, t("4")));
  CHECK_FALSE(member(both, t("2(4,6)"))); // right operand only has leaves

  Sta u = sta_union(a, leaf_only);
  CHECK(member(u, t("2(4,6)")));
  CHECK(member(u, t("4")));
}
