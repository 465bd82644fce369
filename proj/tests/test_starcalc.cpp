#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "justec/starcalc.hpp"

using namespace justec;

namespace {
StarExpr S(const char* s) { return parse_star(s).expr; }
PrefixedStarExpr P(const char* s) {
    auto p = parse_star(s);
    return {p.world.value_or(0), p.expr};
}

std::optional<Derivation> d(const LogicSpec& spec, std::vector<const char*> prem, const char* goal) {
    std::vector<StarExpr> ps;
    for (auto p : prem) ps.push_back(S(p));
    auto r = derive(spec, ps, S(goal));
    if (r) {
        std::vector<PrefixedStarExpr> pp;
        for (auto& p : ps) pp.push_back({0, p});
        auto c = check_derivation(spec, nullptr, *r, &pp);
        INFO(c.reason << " at " << c.node);
        CHECK(c.ok);
    }
    return r;
}
}  // namespace

TEST_CASE("frame-free rules") {
    LogicSpec j = builtin_spec("J");
    auto leaf = d(j, {"*1 {x} p"}, "*1 {x} p");
    REQUIRE(leaf);
    CHECK(leaf->rule == Rule::Premise);
    auto sum = d(j, {"*1 {x} p"}, "*1 {[x + y]} p");
    REQUIRE(sum);
    CHECK(sum->rule == Rule::SumL);
    auto sumr = d(j, {"*1 {x} p"}, "*1 {[y + x]} p");
    REQUIRE(sumr);
    CHECK(sumr->rule == Rule::SumR);
    auto app = d(j, {"*1 {x} p -> q", "*1 {y} p"}, "*1 {[x . y]} q");
    REQUIRE(app);
    CHECK(app->rule == Rule::App);
    CHECK_FALSE(d(j, {"*1 {x} p -> q", "*1 {y} p"}, "*1 {[y . x]} q"));
    CHECK_FALSE(d(j, {"*1 {x} p"}, "*1 {x} q"));
}

TEST_CASE("interaction rules in J_H") {
    LogicSpec jh = builtin_spec("JH");
    auto hook = d(jh, {"*1 {x} p"}, "*2 {!x} {x}:1 p");
    REQUIRE(hook);
    CHECK(hook->rule == Rule::Hook);
    CHECK_FALSE(d(jh, {"*1 {x} p"}, "*3 {!x} {x}:1 p"));
    CHECK_FALSE(d(jh, {"*2 {x} p"}, "*1 {!x} {x}:2 p"));
    auto sub = d(jh, {"*4 {x} p"}, "*3 {x} p");
    REQUIRE(sub);
    CHECK(sub->rule == Rule::Subset);
    CHECK_FALSE(d(jh, {"*3 {x} p"}, "*4 {x} p"));
    // positive introspection of agent 4, then conversion
    CHECK(d(jh, {"*4 {x} p"}, "*3 {!x} {x}:4 p"));
    CHECK(d(jh, {"*4 {x} p"}, "*4 {!!x} {!x}:4 {x}:4 p"));
}

TEST_CASE("axiom necessitation and schematic CS") {
    LogicSpec j = builtin_spec("J");
    auto an = d(j, {}, "*1 {c} p -> q -> p");
    REQUIRE(an);
    CHECK(an->rule == Rule::AN);
    CHECK(d(j, {}, "*1 {!c} {c}:1 (p -> q -> p)"));
    // p -> p from the P1/P2 derivation
    CHECK(d(j, {}, "*1 {[[c0 . c0] . c0]} p -> p"));
    CHECK(d(j, {"*1 {x} p", "*1 {y} q"}, "*1 {[[c . x] . y]} p & q"));
    CHECK_FALSE(d(j, {}, "*1 {c} p"));
    LogicSpec st = load_spec("J:standard");
    CHECK(d(st, {"*1 {x} p & q"}, "*1 {[c_left . x]} p"));
    CHECK_FALSE(d(st, {"*1 {x} p & q"}, "*1 {[c_right . x]} p"));
    CHECK(d(st, {"*1 {x} p & q"}, "*1 {[c_right . x]} q"));
}

TEST_CASE("schematic premises") {
    LogicSpec jh = builtin_spec("JH");
    std::map<std::string, int> fm;
    ParseOptions o;
    o.formula_metas = &fm;
    std::vector<PrefixedStarExpr> prem{{0, parse_star("*3 {rho} ?F -> ?F", o).expr}};
    Prover pr(jh, trivial_frame(4), prem);
    CHECK(pr.holds(P("0 *3 {rho} p -> p")));
    CHECK_FALSE(pr.holds(P("0 *3 {rho} p -> q")));
    CHECK(pr.holds(P("0 *3 {[rho . [rho + y]]} {y}:1 q -> {y}:1 q")));
    CHECK_FALSE(pr.holds(P("0 *3 {[rho . y]} q -> q")));
}

TEST_CASE("frame-relative derivations") {
    LogicSpec jh = builtin_spec("JH");
    Frame f({0, 1}, 4);
    f.add_edge(3, 0, 1);
    std::vector<PrefixedStarExpr> prem{P("0 *2 {x} p")};
    auto r = derive_in_frame(jh, f, prem, P("1 *2 {x} p"));
    REQUIRE(r);
    CHECK(r->rule == Rule::Dis);
    CHECK(check_derivation(jh, &f, *r, &prem).ok);
    CHECK_FALSE(check_derivation(jh, nullptr, *r, &prem).ok);

    std::vector<PrefixedStarExpr> prem1{P("0 *1 {x} p")};
    CHECK_FALSE(derive_in_frame(jh, f, prem1, P("1 *1 {x} p")));
    CHECK(derive_in_frame(jh, f, prem1, P("0 *1 {x} p")));

    // movement applied to a compound conclusion
    std::vector<PrefixedStarExpr> prem2{P("0 *2 {x} p -> q"), P("0 *2 {y} p")};
    auto app = derive_in_frame(jh, f, prem2, P("1 *2 {[x . y]} q"));
    REQUIRE(app);
    CHECK(check_derivation(jh, &f, *app, &prem2).ok);

    // agent 4 moves along R_4 and converts to agent 3
    Frame g({0, 1, 2}, 4);
    g.add_edge(4, 0, 1);
    g.add_edge(4, 1, 2);
    std::vector<PrefixedStarExpr> prem3{P("0 *4 {x} p")};
    auto mv = derive_in_frame(jh, g, prem3, P("2 *3 {x} p"));
    REQUIRE(mv);
    CHECK(check_derivation(jh, &g, *mv, &prem3).ok);
}

TEST_CASE("derivation checking rejects broken trees") {
    LogicSpec j = builtin_spec("J");
    std::vector<StarExpr> ps{S("*1 {x} p -> q"), S("*1 {y} p")};
    auto r = derive(j, ps, S("*1 {[x . y]} q"));
    REQUIRE(r);
    Derivation swapped = *r;
    std::swap(swapped.children[0], swapped.children[1]);
    CHECK_FALSE(check_derivation(j, nullptr, swapped).ok);

    LogicSpec jh = builtin_spec("JH");
    Frame f({0, 1}, 4);
    f.add_edge(1, 0, 1);
    Derivation dis;
    dis.rule = Rule::Dis;
    dis.world = 1;
    dis.conclusion = S("*1 {x} p");
    Derivation leaf;
    leaf.world = 0;
    leaf.conclusion = S("*1 {x} p");
    dis.children.push_back(leaf);
    CHECK_FALSE(check_derivation(jh, &f, dis).ok);
}

TEST_CASE("certificates round trip") {
    LogicSpec jh = builtin_spec("JH");
    Frame f({-1, 0}, 4);
    f.add_edge(3, -1, 0);
    std::vector<PrefixedStarExpr> prem{P("-1 *2 {x} p -> q"), P("0 *1 {y} p")};
    auto r = derive_in_frame(jh, f, prem, P("0 *2 {[x . !y]} q"));
    CHECK_FALSE(r);
    std::vector<PrefixedStarExpr> prem2{P("-1 *2 {x} ({y}:1 p) -> q"), P("0 *1 {y} p")};
    r = derive_in_frame(jh, f, prem2, P("0 *2 {[x . !y]} q"));
    REQUIRE(r);
    std::string cert = to_certificate(*r);
    Derivation back = parse_certificate(cert);
    CHECK(to_certificate(back) == cert);
    CHECK(check_derivation(jh, &f, back, &prem2).ok);
}

TEST_CASE("budget") {
    LogicSpec j = builtin_spec("J");
    SearchOptions o;
    o.budget = 3;
    CHECK_THROWS_AS(derive(j, {}, S("*1 {[[c0 . c0] . [c0 . c0]]} p -> p"), o), BudgetExceeded);
}
