#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "symta/stt.hpp"

using namespace symta;

namespace {

const Theory kInt = Theory::integers();

TreePtr t(const std::string& s) { return parse_tree(s); }

// The divide-by-six transducer: reproduce any binary tree; additionally, at
// labels divisible by 6, divide by 6, drop the second subtree and process
// two copies of the first.
Stt example_stt() {
  Stt m(2, kInt, kInt, "q");
  m.add_rule({"q", 2, Predicate::conj(Predicate::div(2), Predicate::div(3)),
              SttRhs::fn(FnTerm::affine(1, 0, 6),
                         {SttRhs::call("q", 1), SttRhs::call("q", 1)})});
  m.add_rule({"q", 2, Predicate::top(),
              SttRhs::fn(FnTerm::identity_int(),
                         {SttRhs::call("q", 1), SttRhs::call("q", 2)})});
  m.add_rule({"q", 0, Predicate::top(), SttRhs::fn(FnTerm::identity_int())});
  return m;
}

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

std::set<std::string> keys(const std::vector<TreePtr>& ts) {
  std::set<std::string> out;
  for (const auto& x : ts) out.insert(x->str());
  return out;
}

} // namespace

TEST_CASE("worked derivation: the full output set on 6(12(4,6),7)") {
  Stt m = example_stt();
  auto outs = stt_apply(m, t("6(12(4,6),7)"));
  CHECK(outs.size() == 6);
  auto got = keys(outs);
  CHECK(got.count("1(2(4,4),12(4,6))"));
  CHECK(got.count("6(12(4,6),7)")); // pure identity derivation
  CHECK(got.count("6(2(4,4),7)"));
  CHECK(got.count("1(2(4,4),2(4,4))"));
  CHECK(got.count("1(12(4,6),2(4,4))"));
  CHECK(got.count("1(12(4,6),12(4,6))"));
}

TEST_CASE("stt_apply equals the literal rewriting closure") {
  Stt m = example_stt();
  std::mt19937 rng(42);
  for (int i = 0; i < 60; ++i) {
    TreePtr xi = testutil::random_int_tree(rng, 3);
    CHECK(testutil::same_tree_sets(stt_apply(m, xi), testutil::rewrite_oracle(m, "q", xi)));
  }
}

TEST_CASE("output boundedness") {
  Stt m = example_stt();
  std::mt19937 rng(8);
  for (int i = 0; i < 100; ++i) {
    TreePtr xi = testutil::random_int_tree(rng, 3);
    for (const auto& z : stt_apply(m, xi)) CHECK(z->rank() <= m.k());
  }
  CHECK_THROWS_AS(stt_apply(m, t("1(2,3,4)")), bound_error);
}

TEST_CASE("property flags of the worked example") {
  SttProps p = stt_props(example_stt());
  CHECK_FALSE(p.deterministic); // div(2) and div(3) overlap with top
  CHECK_FALSE(p.total);         // no rule for arity 1
  CHECK_FALSE(p.linear);        // x1 twice in the first rule
  CHECK_FALSE(p.nondeleting);   // x2 missing in the first rule
  CHECK(p.simple);              // exactly one function symbol per right-hand side
  CHECK_FALSE(p.alphabetic);
}

TEST_CASE("deterministic and total transducers bound their output counts") {
  // Deterministic: disjoint guards per (state, arity).
  Stt det(1, kInt, kInt, "q");
  det.add_rule({"q", 0, Predicate::div(2), SttRhs::fn(FnTerm::constant(Label(std::int64_t{0})))});
  det.add_rule({"q", 0, Predicate::negate(Predicate::div(2)),
                SttRhs::fn(FnTerm::identity_int())});
  det.add_rule({"q", 1, Predicate::div(3),
                SttRhs::fn(FnTerm::affine(2, 0, 1), {SttRhs::call("q", 1)})});
  CHECK(stt_props(det).deterministic);
  CHECK_FALSE(stt_props(det).total);

  // Total: guards cover every arity up to k.
  Stt tot(1, kInt, kInt, "q");
  tot.add_rule({"q", 0, Predicate::top(), SttRhs::fn(FnTerm::identity_int())});
  tot.add_rule({"q", 1, Predicate::top(),
                SttRhs::fn(FnTerm::identity_int(), {SttRhs::call("q", 1)})});
  CHECK(stt_props(tot).total);
  CHECK(stt_props(tot).deterministic);

  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    std::uniform_int_distribution<std::int64_t> lab(0, 12);
    std::uniform_int_distribution<int> deep(1, 3);
    // unary-shaped random input
    TreePtr xi = Tree::leaf(Label(lab(rng)));
    for (int d = deep(rng); d > 0; --d) xi = Tree::node(Label(lab(rng)), {xi});
    CHECK(stt_apply(det, xi).size() <= 1);
    CHECK(stt_apply(tot, xi).size() >= 1);
  }
}

TEST_CASE("partial function inside an applicable rule is a hard error") {
  Stt m(1, kInt, kInt, "q");
  m.add_rule({"q", 0, Predicate::top(), SttRhs::fn(FnTerm::affine(1, 0, 6))});
  auto ok = stt_apply(m, t("12"));
  REQUIRE(ok.size() == 1);
  CHECK(ok.front()->str() == "2");
  CHECK_THROWS_AS(stt_apply(m, t("7")), partial_fn_error);

  // A rule whose guard excludes the label is not applicable: no error.
  Stt guarded(1, kInt, kInt, "q");
  guarded.add_rule({"q", 0, Predicate::div(6), SttRhs::fn(FnTerm::affine(1, 0, 6))});
  CHECK(stt_apply(guarded, t("7")).empty());
}

TEST_CASE("identity transducer of an automaton") {
  Sta a = example_sta();
  Stt id = identity_stt(a);

  auto at2 = stt_apply(id, "2", t("2(4,6)"));
  REQUIRE(at2.size() == 1);
  CHECK(at2.front()->str() == "2(4,6)");
  CHECK(stt_apply(id, "2", t("2(3,4)")).empty());

  SttProps p = stt_props(id);
  CHECK(p.simple);
  CHECK(p.linear);
  CHECK(p.nondeleting);

  std::mt19937 rng(31337);
  for (int i = 0; i < 200; ++i) {
    TreePtr xi = testutil::random_int_tree(rng, 3);
    auto outs = stt_apply(id, xi);
    if (sta_member(a, xi).accepted) {
      REQUIRE(outs.size() == 1);
      CHECK(tree_equal(outs.front(), xi));
    } else {
      CHECK(outs.empty());
    }
  }
}

TEST_CASE("alphabetic bridge round trip") {
  Theory in = Theory::finite({"s", "e"});
  Theory out = Theory::finite({"d", "z"});
  Stt m(2, in, out, "q");
  m.add_rule({"q", 2, Predicate::in_set({"s"}),
              SttRhs::fn(FnTerm::constant_finite(in, Label("d")),
                         {SttRhs::call("q", 1), SttRhs::call("q", 2)})});
  m.add_rule({"q", 0, Predicate::in_set({"e"}),
              SttRhs::fn(FnTerm::constant_finite(in, Label("z")))});
  REQUIRE(stt_props(m).alphabetic);

  Tdtt td = stt_to_tdtt(m);
  Stt back = tdtt_to_stt(td, 2);
  CHECK(stt_props(back).alphabetic);

  // Guard reconstruction is exact: singleton alphabetic predicates.
  for (const auto& rule : back.rules()) {
    auto ext = finite_extent(back.in_theory(), rule.guard);
    CHECK(ext.size() == 1);
  }

  // Outputs agree on every input of depth <= 2 over the input alphabet.
  std::vector<TreePtr> inputs;
  inputs.push_back(t("e"));
  inputs.push_back(t("s(e,e)"));
  inputs.push_back(t("s(s(e,e),e)"));
  inputs.push_back(t("s(e,s(e,e))"));
  for (const auto& xi : inputs) {
    auto direct = stt_apply(m, xi);
    auto via_td = tdtt_apply(td, td.init, xi);
    auto round = stt_apply(back, xi);
    CHECK(testutil::same_tree_sets(direct, via_td));
    CHECK(testutil::same_tree_sets(direct, round));
  }

  // Empty rule set round-trips.
  Stt none(1, in, out, "q");
  REQUIRE(stt_props(none).alphabetic);
  Tdtt tdnone = stt_to_tdtt(none);
  CHECK(tdnone.rules.empty());
  CHECK(tdtt_to_stt(tdnone, 1).rules().empty());

  // Non-alphabetic input is refused.
  CHECK_THROWS_AS(stt_to_tdtt(example_stt()), capability_error);
}

TEST_CASE("input validation") {
  Stt m = example_stt();
  CHECK_THROWS_AS(stt_apply(m, Tree::leaf(Label("sym"))), domain_error);
  CHECK_THROWS_AS(m.add_rule({"q", 3, Predicate::top(), SttRhs::fn(FnTerm::identity_int())}),
                  bound_error);
  CHECK_THROWS_AS(m.add_rule({"q", 1, Predicate::top(), SttRhs::call("q", 2)}), format_error);
}
