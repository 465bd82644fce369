#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "justec/parser.hpp"

using namespace justec;

TEST_CASE("terms parse to the expected constructors") {
    CHECK(parse_term("x1") == Term::variable("x1"));
    CHECK(parse_term("[c . x]") == Term::app(Term::constant("c"), Term::variable("x")));
    CHECK(parse_term("(c . x)") == parse_term("[c . x]"));
    Term t = parse_term("![x + y]");
    CHECK(t.kind() == TermKind::Bang);
    CHECK(t.inner().kind() == TermKind::Sum);
    CHECK(parse_term(to_string(t)) == t);
    CHECK(parse_term("[a . b . c]") == Term::app(Term::app(Term::variable("a"), Term::variable("b")),
                                                Term::constant("c")));
}

TEST_CASE("constant naming and declarations") {
    CHECK(parse_term("c").kind() == TermKind::Constant);
    CHECK(parse_term("c12").kind() == TermKind::Constant);
    CHECK(parse_term("c_tran").kind() == TermKind::Constant);
    CHECK(parse_term("cat").kind() == TermKind::Variable);
    ParseOptions o;
    o.constants.insert("k");
    o.variables.insert("c3");
    CHECK(parse_term("k", o).kind() == TermKind::Constant);
    CHECK(parse_term("c3", o).kind() == TermKind::Variable);
}

TEST_CASE("formulas") {
    CHECK(parse_formula("false") == Formula::bottom());
    CHECK(parse_formula("true") == Formula::top());
    CHECK(parse_formula("{x}:1 p") == Formula::just(Term::variable("x"), 1, Formula::atom("p")));
    Formula f = parse_formula("{!x}:2 {x}:1 p");
    CHECK(f == Formula::just(Term::bang(Term::variable("x")), 2,
                             Formula::just(Term::variable("x"), 1, Formula::atom("p"))));
    CHECK(parse_formula(to_string(f)) == f);
    // precedence and associativity
    Formula p = Formula::atom("p"), q = Formula::atom("q"), r = Formula::atom("r");
    CHECK(parse_formula("p -> q -> r") == Formula::implies(p, Formula::implies(q, r)));
    CHECK(parse_formula("p & q | r") == Formula::disj(Formula::conj(p, q), r));
    CHECK(parse_formula("~p & q") == Formula::conj(Formula::negation(p), q));
    CHECK(parse_formula("{x}:1 p -> q") ==
          Formula::implies(Formula::just(Term::variable("x"), 1, p), q));
    CHECK(parse_formula("[]3 <>4 p") == Formula::box(3, Formula::diamond(4, p)));
}

TEST_CASE("syntax errors carry a position") {
    CHECK_THROWS_AS(parse_formula("p &"), ParseError);
    CHECK_THROWS_AS(parse_formula("{x:1 p"), ParseError);
    CHECK_THROWS_AS(parse_term("[a . b + c]"), ParseError);
    try {
        parse_formula("p q");
        FAIL("expected error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 2);
    }
}

TEST_CASE("star expressions") {
    auto s = parse_star("-1 *3 {rho} active");
    REQUIRE(s.world.has_value());
    CHECK(*s.world == -1);
    CHECK(s.expr.agent == 3);
    auto u = parse_star("*1 {[x . y]} q");
    CHECK_FALSE(u.world.has_value());
    CHECK(parse_star(to_string(u.expr)).expr == u.expr);
}

TEST_CASE("metavariables") {
    std::map<std::string, int> fm, tm;
    ParseOptions o;
    o.formula_metas = &fm;
    o.term_metas = &tm;
    Formula a = parse_formula("?A -> {?s}:1 ?A", o);
    CHECK(a.right().body() == a.left());
    CHECK(a.right().term().kind() == TermKind::Meta);
    CHECK_FALSE(a.is_ground());
    CHECK(parse_formula("?F3").meta_id() == 3);
    CHECK(parse_formula(to_string(a)) == a);
}

namespace {

Term random_term(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
    static const char* vars[] = {"x", "y", "z1", "truth3"};
    static const char* consts[] = {"c", "c0", "c_left"};
    switch (pick(rng)) {
        case 0:
            return Term::variable(vars[rng() % 4]);
        case 1:
            return Term::constant(consts[rng() % 3]);
        case 2:
            return Term::app(random_term(rng, depth - 1), random_term(rng, depth - 1));
        case 3:
            return Term::sum(random_term(rng, depth - 1), random_term(rng, depth - 1));
        default:
            return Term::bang(random_term(rng, depth - 1));
    }
}

Formula random_formula(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    switch (pick(rng)) {
        case 0:
            return Formula::bottom();
        case 1:
            return Formula::atom(rng() % 2 ? "p" : "q_2");
        case 2:
            return Formula::negation(random_formula(rng, depth - 1));
        case 3:
            return Formula::implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
        case 4:
            return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
        case 5:
            return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
        case 6:
        case 7:
            return Formula::just(random_term(rng, 2), 1 + rng() % 4, random_formula(rng, depth - 1));
        case 8:
            return Formula::box(1 + rng() % 4, random_formula(rng, depth - 1));
        default:
            return Formula::diamond(1 + rng() % 4, random_formula(rng, depth - 1));
    }
}

}  // namespace

TEST_CASE("printer/parser round trip on random syntax") {
    std::mt19937 rng(20261016);
    for (int i = 0; i < 2000; ++i) {
        Term t = random_term(rng, 4);
        REQUIRE(parse_term(to_string(t)) == t);
        Formula f = random_formula(rng, 5);
        INFO(to_string(f));
        REQUIRE(parse_formula(to_string(f)) == f);
    }
}

TEST_CASE("hash consing shares structure") {
    Term a = Term::app(Term::variable("x"), Term::variable("y"));
    Term b = Term::app(Term::variable("x"), Term::variable("y"));
    CHECK(a == b);
    CHECK(a.node() == b.node());
    CHECK(a.size() == 3);
    CHECK(Formula::conj_all({}) == Formula::top());
    CHECK(Formula::disj_all({}) == Formula::bottom());
    std::vector<Formula> subs;
    collect_subformulas(parse_formula("(p & q) -> p"), subs);
    CHECK(subs.size() == 4);
    CHECK(count_occurrences(parse_term("[x . [x + y]]"), Term::variable("x")) == 2);
}
