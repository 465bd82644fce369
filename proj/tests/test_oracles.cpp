#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "justec/oracles.hpp"
#include "justec/parser.hpp"

using namespace justec;

TEST_CASE("propositional evaluation") {
    CHECK_FALSE(prop_eval(Formula::bottom(), {}));
    CHECK(prop_eval(parse_formula("p | ~p"), {{"p", false}}));
    CHECK_FALSE(prop_eval(parse_formula("(p -> q) & p & ~q"), {{"p", true}, {"q", false}}));
    CHECK_THROWS(prop_eval(parse_formula("p"), {}));
}

TEST_CASE("qbf2 evaluation") {
    CHECK(qbf2_eval(parse_qbf2("exists p forall q : p | q")));
    CHECK_FALSE(qbf2_eval(parse_qbf2("exists p forall q : p & q")));
    CHECK(qbf2_eval(parse_qbf2("true")));
    CHECK_FALSE(qbf2_eval(parse_qbf2("forall q : q")));
    CHECK(qbf2_eval(parse_qbf2("exists p : p & ~false")));
}

TEST_CASE("two-element first-order models") {
    auto sb = parse_sb("rel R 1\nexists x : R(x)");
    CHECK(bsb_models(sb).size() == 4);
    auto m = bsb_sat(sb);
    REQUIRE(m);
    CHECK(m->holds("R", {m->interp.at("x")}));
    CHECK(fol2_eval(sb, *m));

    auto bad = parse_sb("rel R 1\nexists x forall y : R(y) & ~R(x)");
    CHECK_FALSE(bsb_sat(bad));
    for (const auto& cand : bsb_models(bad)) CHECK_FALSE(fol2_eval(bad, cand));

    CHECK(bsb_sat(parse_sb("true")));

    // holding x fixed: R = {1}, x = 0 makes ∃x R(x) false
    TwoElementModel fixed;
    fixed.tables["R"] = {false, true};
    fixed.interp["x"] = 0;
    CHECK_FALSE(fol2_eval(sb, fixed));
    fixed.interp.clear();
    CHECK(fol2_eval(sb, fixed));
}

TEST_CASE("tuples index tables little-endian") {
    auto sb = parse_sb("rel E 2\nexists x y : E(x,y) & ~E(y,x)");
    TwoElementModel m;
    m.tables["E"] = {false, true, false, false};  // only E(1,0)
    CHECK(m.holds("E", {1, 0}));
    CHECK_FALSE(m.holds("E", {0, 1}));
    CHECK(fol2_eval(sb, m));
}

TEST_CASE("bounded universe search") {
    // three distinct elements need three elements
    auto three = parse_sb("exists a b c : ~(a = b) & ~(b = c) & ~(a = c)");
    CHECK(sb_sat_upto(three, 3) == 3);
    CHECK_FALSE(sb_sat_upto(three, 2));
    // a strict order without maximum has no finite model
    auto chain = parse_sb("rel L 2\nexists x forall y z : ~L(y,y) & (L(y,z) -> ~L(z,y)) & L(x,y)");
    CHECK_FALSE(sb_sat_upto(chain, 3));
    CHECK(sb_sat_upto(parse_sb("rel R 1\nexists x forall y : R(x) & (R(y) -> x = y)"), 2) == 1);
}

TEST_CASE("forward closure") {
    auto spec = builtin_spec("JH");
    std::vector<StarExpr> prem{parse_star("*1 {x} p").expr, parse_star("*4 {y} p -> q").expr,
                               parse_star("*4 {z} p").expr};
    auto sum = parse_term("[x + y]");
    auto app = parse_term("[y . z]");
    auto c = star_forward_closure(spec, prem, {sum, app});
    CHECK(c.count(parse_star("*1 {[x + y]} p").expr));
    CHECK(c.count(parse_star("*4 {[y . z]} q").expr));
    CHECK(c.count(parse_star("*3 {[y . z]} q").expr));  // 3 ⊂ 4
    CHECK_FALSE(c.count(parse_star("*1 {[y . z]} q").expr));
    CHECK_FALSE(c.count(parse_star("*3 {[z . y]} q").expr));
    // idempotent
    std::vector<StarExpr> again(c.begin(), c.end());
    CHECK(star_forward_closure(spec, again, {sum, app}) == c);
    CHECK_THROWS_AS(star_forward_closure(spec, prem, {parse_term("!x")}), std::invalid_argument);
    CHECK_THROWS_AS(star_forward_closure(spec, prem, {parse_term("c_id")}), std::invalid_argument);
}

TEST_CASE("M_H model enumeration") {
    CHECK_FALSE(kripke_mh_sat(parse_formula("[]3 p & <>3 ~p"), 4));
    CHECK_FALSE(kripke_mh_sat(parse_formula("[]4 p & <>3 ~p"), 4));
    CHECK_FALSE(kripke_mh_sat(parse_formula("[]3 false"), 4));

    auto p = kripke_mh_sat(parse_formula("p"), 4);
    REQUIRE(p);
    CHECK(p->first.frame.worlds.size() == 1);
    CHECK(p->first.frame.related(3, 0, 0));
    CHECK(p->first.frame.related(4, 0, 0));
    CHECK(mh_frame_violations(p->first.frame).empty());

    auto b1 = kripke_mh_sat(parse_formula("[]1 false"), 4);
    REQUIRE(b1);
    CHECK(b1->first.frame.relations[1].empty());

    // needs R1 closed under R2 steps: <>2<>1 q forces a 1-edge from the root
    auto comp = kripke_mh_sat(parse_formula("<>2 <>1 q & []1 ~q"), 4);
    CHECK_FALSE(comp);
    // but not under R3 steps
    auto no13 = kripke_mh_sat(parse_formula("<>3 <>1 q & []1 ~q"), 4);
    REQUIRE(no13);
    CHECK(modal_eval(no13->first, 0, parse_formula("<>3 <>1 q & []1 ~q")));
    CHECK(mh_frame_violations(no13->first.frame).empty());
}
