#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "justec/kernel.hpp"

using namespace justec;

namespace {
Formula F(const char* s) { return parse_formula(s); }
Term T(const char* s) { return parse_term(s); }

bool has_scheme(const std::vector<SchemePattern>& cat, const std::string& id) {
    return find_scheme(cat, id) != nullptr;
}
}  // namespace

TEST_CASE("J_H validates") {
    auto v = validate_spec(parse_config_text(
        "n = 4\nsubset = (3 4)\nhook = (2 1) (3 2) (4 4)\nlogics = J J JD JD\ncs = total\n"));
    CHECK(v.appropriate);
    CHECK(v.spec.n == 4);
    CHECK(v.spec.is_subset(3, 4));
    CHECK(v.spec.is_hook(3, 2));
    CHECK(v.spec.subset_up(3) == std::vector<AgentId>{3, 4});
    CHECK(v.spec.verifiers_of(1) == std::vector<AgentId>{2});
    CHECK(v.spec.verifiers_of(4) == std::vector<AgentId>{4});
}

TEST_CASE("spec validation errors") {
    CHECK_NOTHROW(validate_spec(parse_config_text("n = 1\nlogics = J\n")));
    CHECK_THROWS_AS(validate_spec(parse_config_text("n = 2\nhook = (1 3)\n")), SpecError);
    CHECK_THROWS_AS(validate_spec(parse_config_text("n = 1\ncs = (c 1 P99)\n")), SpecError);
    try {
        validate_spec(parse_config_text("n = 1\nlogics = JD4\n"));
        FAIL("JD4 accepted");
    } catch (const SpecError& e) {
        std::string msg = e.what();
        CHECK(msg.find("F(1)=JD") != std::string::npos);
        CHECK(msg.find("(1 1)") != std::string::npos);
    }
    auto partial = validate_spec(parse_config_text("n = 1\ncs = (c 1 P1)\n"));
    CHECK_FALSE(partial.appropriate);
    CHECK_FALSE(partial.warnings.empty());
}

TEST_CASE("spec config round trips") {
    for (const char* name : {"J", "JD", "JT", "LP", "JH"}) {
        LogicSpec s = builtin_spec(name);
        LogicSpec back = validate_spec(parse_config_text(spec_to_config(s))).spec;
        CHECK(back.n == s.n);
        CHECK(back.subset == s.subset);
        CHECK(back.hook == s.hook);
        CHECK(back.logics == s.logics);
        CHECK(back.cs.total == s.cs.total);
    }
    LogicSpec st = load_spec("JH:standard");
    CHECK(validate_spec(parse_config_text(spec_to_config(st))).appropriate);
}

TEST_CASE("scheme catalog") {
    auto j = axiom_schemes(builtin_spec("J"));
    // 12 propositional schemes, 7 standard-term tautologies, App and two Sum schemes
    CHECK(j.size() == 22);
    auto jh = axiom_schemes(builtin_spec("JH"));
    CHECK(has_scheme(jh, "Cons_3"));
    CHECK(has_scheme(jh, "Cons_4"));
    CHECK_FALSE(has_scheme(jh, "Cons_1"));
    CHECK(has_scheme(jh, "Conv_4_3"));
    CHECK(has_scheme(jh, "Ver_1_2"));
    CHECK(has_scheme(jh, "Ver_2_3"));
    CHECK(has_scheme(jh, "Ver_4_4"));
    CHECK_FALSE(has_scheme(jh, "Ver_2_1"));
    auto jt = axiom_schemes(builtin_spec("JT"));
    const SchemePattern* fact = find_scheme(jt, "Fact_1");
    REQUIRE(fact);
    CHECK(match_scheme(*fact, F("{t}:1 p -> p")).has_value());
    // Conversion direction: 4 ⊃ 3 gives t:_4 A -> t:_3 A
    CHECK(match_scheme(*find_scheme(jh, "Conv_4_3"), F("{x}:4 p -> {x}:3 p")).has_value());
    CHECK(match_scheme(*find_scheme(jh, "Ver_1_2"), F("{x}:1 p -> {!x}:2 {x}:1 p")).has_value());
}

TEST_CASE("match_scheme") {
    auto cat = axiom_schemes(builtin_spec("J"));
    const SchemePattern& p1 = *find_scheme(cat, "P1");
    auto s = match_scheme(p1, F("p -> q -> p"));
    REQUIRE(s);
    CHECK(s->formulas.at(0) == F("p"));
    CHECK(s->formulas.at(1) == F("q"));
    CHECK(s->apply(p1.skeleton) == F("p -> q -> p"));
    CHECK_FALSE(match_scheme(p1, F("p -> q -> r")));
    auto app = match_scheme(*find_scheme(cat, "App_1"), F("{s}:1 (p -> q) -> {t}:1 p -> {[s . t]}:1 q"));
    REQUIRE(app);
    CHECK(app->terms.at(0) == T("s"));
    CHECK(app->terms.at(1) == T("t"));
}

TEST_CASE("unify") {
    std::map<std::string, int> fm, tm;
    ParseOptions o;
    o.formula_metas = &fm;
    o.term_metas = &tm;
    auto u = unify(parse_formula("?X -> p", o), parse_formula("q -> ?Y", o));
    REQUIRE(u);
    CHECK(u->formulas.at(fm["X"]) == F("q"));
    CHECK(u->formulas.at(fm["Y"]) == F("p"));
    CHECK_FALSE(unify(parse_formula("?X", o), parse_formula("p -> ?X", o)));
    auto w = unify(parse_formula("{?t}:1 ?Z", o), F("{c}:1 (p & q)"));
    REQUIRE(w);
    CHECK(w->terms.at(tm["t"]) == T("c"));
    CHECK(w->formulas.at(fm["Z"]) == F("p & q"));
    // symmetric success
    Formula a = parse_formula("(?X -> ?X) & ?Z", o), b = parse_formula("(?Z -> p) & ?W", o);
    CHECK(unify(a, b).has_value() == unify(b, a).has_value());
}

TEST_CASE("AN") {
    LogicSpec j = builtin_spec("J");
    CHECK(an_holds(j, 1, T("c"), F("p -> q -> p")));
    CHECK(an_holds(j, 1, T("!c"), F("{c}:1 (p -> q -> p)")));
    CHECK(an_holds(j, 1, T("!!c"), F("{!c}:1 {c}:1 (p -> q -> p)")));
    CHECK_FALSE(an_holds(j, 1, T("x"), F("p -> q -> p")));
    CHECK_FALSE(an_holds(j, 1, T("c"), F("p")));
    // as written: any inner agent
    LogicSpec jh = builtin_spec("JH");
    CHECK(an_holds(jh, 1, T("!c"), F("{c}:3 (p -> q -> p)")));
    jh.an_restrict = true;
    CHECK_FALSE(an_holds(jh, 1, T("!c"), F("{c}:3 (p -> q -> p)")));
    CHECK(an_holds(jh, 2, T("!c"), F("{c}:1 (p -> q -> p)")));
    // custom CS
    auto v = validate_spec(parse_config_text("n = 1\ncs = (c1 1 P1) (c2 * P4)\n"));
    CHECK(an_holds(v.spec, 1, T("c1"), F("p -> q -> p")));
    CHECK_FALSE(an_holds(v.spec, 1, T("c2"), F("p -> q -> p")));
    CHECK(an_holds(v.spec, 1, T("c2"), F("p & q -> p")));
}

namespace {
HilbertLine axiom(const char* f, const char* scheme = "") {
    HilbertLine l;
    l.formula = F(f);
    l.scheme = scheme;
    return l;
}
HilbertLine mp(const char* f, int major, int minor) {
    HilbertLine l;
    l.formula = F(f);
    l.kind = HilbertLine::Kind::ModusPonens;
    l.major = major;
    l.minor = minor;
    return l;
}
}  // namespace

TEST_CASE("Hilbert proofs and internalization") {
    LogicSpec j = builtin_spec("J");
    HilbertProof one{{axiom("p -> q -> p", "P1")}};
    CHECK(check_hilbert_proof(j, one).ok);
    CHECK(internalize(j, 1, one) == T("c0"));

    // p -> p from P1/P2
    HilbertProof id{{
        axiom("(p -> (p -> p) -> p) -> (p -> p -> p) -> p -> p", "P2"),
        axiom("p -> (p -> p) -> p", "P1"),
        mp("(p -> p -> p) -> p -> p", 0, 1),
        axiom("p -> p -> p", "P1"),
        mp("p -> p", 2, 3),
    }};
    CHECK(check_hilbert_proof(j, id).ok);
    CHECK(internalize(j, 1, id) == T("[[c0 . c0] . c0]"));

    HilbertProof bad{{axiom("p -> q", ""), axiom("p", ""), mp("q", 0, 1)}};
    auto r = check_hilbert_proof(j, bad);
    CHECK_FALSE(r.ok);
    CHECK(r.bad_line == 0);

    HilbertProof mism{{axiom("p -> q -> p", "P1"), axiom("q -> p -> q", "P1"), mp("p", 0, 1)}};
    CHECK_FALSE(check_hilbert_proof(j, mism).ok);

    HilbertLine an;
    an.kind = HilbertLine::Kind::AN;
    an.formula = F("{c}:1 (p -> q -> p)");
    HilbertProof anp{{an}};
    CHECK(check_hilbert_proof(j, anp).ok);
    CHECK(internalize(j, 1, anp) == T("!c"));

    auto v = validate_spec(parse_config_text("n = 1\ncs = (c1 1 P2)\n"));
    CHECK_THROWS_AS(internalize(v.spec, 1, id), SpecError);
}
