#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "justec/modal.hpp"
#include "justec/oracles.hpp"
#include "justec/parser.hpp"

using namespace justec;

namespace {
Formula F(const char* s) { return parse_formula(s); }

void check_model(const TableauResult& r, Formula f) {
    REQUIRE(r.model);
    CHECK(mh_frame_violations(r.model->frame).empty());
    CHECK(modal_eval(*r.model, 0, f));
    for (const auto& p : r.branch->prefixes) {
        if (p.loop_to >= 0) continue;
    }
}
}  // namespace

TEST_CASE("forgetful projection") {
    CHECK(forgetful(F("{x}:1 p")) == F("[]1 p"));
    CHECK(forgetful(F("~{[x . y]}:3 false")) == F("~[]3 false"));
    CHECK(forgetful(F("{!x}:2 {x}:1 p")) == F("[]2 []1 p"));
    CHECK(is_modal_formula(forgetful(F("{x}:4 p -> ({y}:2 q | r)"))));
    CHECK_FALSE(is_modal_formula(F("{x}:1 p")));
    CHECK_FALSE(is_modal_formula(F("[]5 p")));
}

TEST_CASE("frame conditions") {
    Frame fr({0, 1}, 4);
    for (int i : {3, 4}) fr.add_edge(i, 0, 1), fr.add_edge(i, 1, 1);
    CHECK(mh_frame_violations(fr).empty());
    fr.add_edge(2, 0, 1);
    fr.add_edge(1, 1, 0);
    CHECK(mh_frame_violations(fr).size() == 1);  // 0 R2 1 R1 0 needs 0 R1 0
    fr.add_edge(1, 0, 0);
    CHECK(mh_frame_violations(fr).empty());
    fr.relations[4].erase({0, 1});
    CHECK_FALSE(mh_frame_violations(fr).empty());
}

TEST_CASE("unsatisfiable anchors") {
    for (const char* s : {"[]3 p & <>3 ~p", "[]4 p & <>3 ~p", "[]3 false", "[]4 false", "[]2 p & <>3 <>2 ~p",
                          "[]1 p & <>2 <>1 ~p", "[]4 p & <>4 <>3 <>4 ~p"}) {
        INFO(s);
        CHECK(mh_tableau(F(s)).status == TableauStatus::Unsat);
    }
}

TEST_CASE("satisfiable formulas and extracted models") {
    for (const char* s : {"p", "[]1 false", "[]2 false", "<>3 p", "[]3 p & <>3 <>3 ~p", "[]1 p & <>3 <>1 ~p",
                          "<>4 p & []3 ~p", "~[]3 p & []4 (p | q)", "[]3 []3 p & <>3 ~p | q"}) {
        INFO(s);
        auto r = mh_tableau(F(s));
        REQUIRE(r.status == TableauStatus::Sat);
        check_model(r, F(s));
    }
}

TEST_CASE("model shapes") {
    auto p = mh_tableau(F("p"));
    REQUIRE(p.model);
    CHECK(p.model->frame.worlds.size() == 1);
    CHECK(p.model->frame.related(3, 0, 0));
    CHECK(p.model->frame.related(4, 0, 0));

    auto d = mh_tableau(F("<>3 p"));
    REQUIRE(d.model);
    CHECK(d.model->frame.worlds.size() == 2);
    for (auto e : d.model->frame.relations[3]) CHECK(d.model->frame.relations[4].count(e));

    auto empty = mh_tableau(F("p -> q"));
    REQUIRE(empty.model);
    CHECK(empty.model->frame.relations[1].empty());
    CHECK(empty.model->frame.relations[2].empty());
}

TEST_CASE("loop check keeps transitive chains finite") {
    auto r = mh_tableau(F("[]4 <>4 p"));
    REQUIRE(r.status == TableauStatus::Sat);
    bool looped = false;
    for (const auto& pr : r.branch->prefixes) looped = looped || pr.loop_to >= 0;
    CHECK(looped);
    check_model(r, F("[]4 <>4 p"));
}

TEST_CASE("caps produce unknown") {
    TableauCaps tiny;
    tiny.prefix_cap = 1;
    CHECK(mh_tableau(F("<>3 p & <>3 q"), tiny).status == TableauStatus::Unknown);
    CHECK_THROWS(mh_tableau(F("p"), TableauCaps{0, 1}));
}

TEST_CASE("agreement with enumeration on a fixed sample") {
    for (const char* s : {"<>2 <>1 q & []1 ~q", "<>3 <>1 q & []1 ~q", "[]4 p & <>3 []3 ~p", "<>1 p & []2 false",
                          "[]3 <>2 p & []2 false", "~<>4 p & <>3 true", "[]2 []1 p & <>3 <>2 <>1 ~p"}) {
        INFO(s);
        auto t = mh_tableau(F(s));
        auto o = kripke_mh_sat(F(s), 4);
        CHECK(t.status != TableauStatus::Unknown);
        CHECK((t.status == TableauStatus::Sat) == o.has_value());
    }
}
