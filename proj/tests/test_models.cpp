#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "justec/models.hpp"
#include "justec/parser.hpp"

using namespace justec;

namespace {
Formula F(const char* s) { return parse_formula(s); }
Term T(const char* s) { return parse_term(s); }

FModel one_world(const char* extra) {
    return parse_model(std::string("worlds 0\nagents 1\n") + extra);
}
}  // namespace

TEST_CASE("frame conditions") {
    auto jh = builtin_spec("JH");
    Frame fr({0}, 4);
    auto v = check_frame(jh, fr);
    CHECK(v.size() == 2);  // agents 3 and 4 not serial
    fr.add_edge(3, 0, 0);
    v = check_frame(jh, fr);
    REQUIRE(v.size() == 2);  // R4 still empty, and R3 ⊄ R4
    fr.add_edge(4, 0, 0);
    CHECK(check_frame(jh, fr).empty());

    LogicSpec two = builtin_spec("J");
    two.n = 2;
    two.logics = {BaseLogic::J, BaseLogic::J};
    two.subset = {{1, 2}};
    Frame g({0, 1}, 2);
    g.add_edge(1, 0, 1);
    auto sv = check_frame(two, g);
    REQUIRE(sv.size() == 1);
    CHECK(sv[0].find("subset") != std::string::npos);

    auto jt = builtin_spec("JT");
    Frame h({0, 1}, 1);
    h.add_edge(1, 0, 0);
    CHECK(check_frame(jt, h).size() == 1);

    // verification for LP: R transitive
    auto lp = builtin_spec("LP");
    Frame t({0, 1, 2}, 1);
    for (int w : {0, 1, 2}) t.add_edge(1, w, w);
    t.add_edge(1, 0, 1);
    t.add_edge(1, 1, 2);
    CHECK(check_frame(lp, t).size() == 1);
    t.add_edge(1, 0, 2);
    CHECK(check_frame(lp, t).empty());
}

TEST_CASE("admissible evidence membership") {
    auto j = builtin_spec("J");
    auto m = one_world("aef: 0 *1 {x} p\n");
    CHECK(aef_member(j, m, 0, 1, T("x"), F("p")));
    CHECK(aef_member(j, m, 0, 1, T("[x + y]"), F("p")));
    CHECK_FALSE(aef_member(j, m, 0, 1, T("y"), F("p")));
    auto empty = one_world("");
    CHECK(aef_member(j, empty, 0, 1, T("c0"), F("p -> (q -> p)")));
    CHECK(aef_member(j, empty, 0, 1, T("!c0"), F("{c0}:1 (p -> (q -> p))")));
}

TEST_CASE("truth clauses") {
    auto j = builtin_spec("J");
    auto m = one_world("rel 1: (0 0)\nval p: 0\naef: 0 *1 {x} p\n");
    CHECK_FALSE(evaluate(j, m, 0, Formula::bottom()));
    CHECK(evaluate(j, m, 0, F("{x}:1 p")));
    CHECK_FALSE(evaluate(j, m, 0, F("{y}:1 p")));
    auto n = one_world("rel 1: (0 0)\naef: 0 *1 {x} p\n");
    CHECK_FALSE(evaluate(j, n, 0, F("{x}:1 p")));
    CHECK(evaluate(j, n, 0, F("~{x}:1 p | q -> ~q")));
}

TEST_CASE("strong evidence") {
    auto j = builtin_spec("J");
    auto m = one_world("rel 1: (0 0)\naef: 0 *1 {x} false\n");
    CHECK(strong_evidence_holds(j, m, {}));
    CHECK_FALSE(strong_evidence_holds(j, m, {{0, parse_star("*1 {x} false").expr}}));
    auto ok = one_world("aef: 0 *1 {x} false\n");
    CHECK(strong_evidence_holds(j, ok, {{0, parse_star("*1 {x} false").expr}}));
}

TEST_CASE("bounded satisfiability") {
    auto j = builtin_spec("J");
    auto r = sat_bounded(j, F("{x}:1 p"), 2);
    REQUIRE(r.kind == SatResult::Kind::Sat);
    CHECK(r.states == 1);
    CHECK(r.model->frame.relations[1].empty());
    CHECK(evaluate(j, *r.model, r.world, F("{x}:1 p")));
    CHECK(check_frame(j, r.model->frame).empty());

    CHECK(sat_bounded(j, F("{x}:1 false"), 2).kind == SatResult::Kind::Sat);
    auto jd = builtin_spec("JD");
    auto u = sat_bounded(jd, F("{x}:1 false"), 2);
    CHECK(u.kind == SatResult::Kind::UnsatUpTo);
    CHECK(u.states == 2);

    // internalized tautology cannot fail
    CHECK(sat_bounded(j, F("~{c0}:1 (p -> p -> p)"), 2).kind == SatResult::Kind::UnsatUpTo);
    CHECK(sat_bounded(j, F("{x}:1 p & ~{[x + y]}:1 p"), 2).kind == SatResult::Kind::UnsatUpTo);
    auto jt = builtin_spec("JT");
    CHECK(sat_bounded(jt, F("{x}:1 p & ~p"), 2).kind == SatResult::Kind::UnsatUpTo);
    CHECK(sat_bounded(j, F("{x}:1 p & ~p"), 1).kind == SatResult::Kind::Sat);

    CHECK(sat_bounded(j, F("{x}:1 p & ~{[x + y]}:1 p"), 3, 5).kind ==
          SatResult::Kind::BudgetExceeded);
}

TEST_CASE("model text round trip") {
    auto m = parse_model("worlds -1 0 1\nrel 3: (-1 0) (0 1)\nrel 4: (-1,1)\nval p: 0 1\naef: -1 *3 {[x . y]} p -> q\n");
    CHECK(m.frame.worlds.size() == 3);
    CHECK(m.frame.related(3, -1, 0));
    CHECK(m.frame.related(4, -1, 1));
    CHECK(m.val("p", 1));
    REQUIRE(m.aef_base.size() == 1);
    CHECK(m.aef_base[0].world == -1);
    auto again = parse_model(to_string(m));
    CHECK(to_string(again) == to_string(m));
    CHECK_THROWS_AS(parse_model("rel 1: (0 1)\n"), ParseError);
    CHECK_THROWS_AS(parse_model("worlds 0\nrel 1: (0)\n"), ParseError);
    CHECK_THROWS_AS(parse_model("worlds 0\nfoo\n"), ParseError);
}
