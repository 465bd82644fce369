#include "justec/corpus.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace justec::corpus {

namespace {

Formula random_modal(Rng& rng, int budget) {
    std::uniform_int_distribution<int> pick(0, 9);
    std::uniform_int_distribution<int> agent(1, kMhAgents);
    int k = budget <= 1 ? pick(rng) % 2 : pick(rng);
    switch (k) {
        case 0:
            return Formula::atom(pick(rng) < 5 ? "p" : "q");
        case 1:
            return pick(rng) < 8 ? Formula::atom("p") : Formula::bottom();
        case 2:
        case 3:
            return Formula::negation(random_modal(rng, budget - 1));
        case 4:
        case 5:
            return Formula::box(agent(rng), random_modal(rng, budget - 1));
        case 6:
        case 7:
            return Formula::diamond(agent(rng), random_modal(rng, budget - 1));
        case 8:
            return Formula::conj(random_modal(rng, budget / 2), random_modal(rng, budget / 2));
        default:
            return pick(rng) < 5 ? Formula::disj(random_modal(rng, budget / 2), random_modal(rng, budget / 2))
                                 : Formula::implies(random_modal(rng, budget / 2), random_modal(rng, budget / 2));
    }
}

}  // namespace

std::vector<ModalFormula> modal_formulas(std::uint64_t seed, int count, int max_subformulas, int max_depth) {
    Rng rng(seed);
    std::set<Formula> seen;
    std::vector<ModalFormula> out;
    std::uniform_int_distribution<int> size(2, 6);
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts++ < count * 1000) {
        Formula f = random_modal(rng, size(rng));
        std::vector<Formula> subs;
        collect_subformulas(f, subs);
        if (static_cast<int>(subs.size()) > max_subformulas || modal_depth(f) > max_depth) continue;
        if (modal_depth(f) == 0) continue;
        if (seen.insert(f).second) out.push_back(f);
    }
    return out;
}

namespace {

template <typename T>
const T& choose(Rng& rng, const std::vector<T>& xs) {
    std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
    return xs[d(rng)];
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Formula A(const char* n) { return Formula::atom(n); }

// Small formulas the derivation corpora draw premises and goals from.
const std::vector<Formula>& formula_pool() {
    static const std::vector<Formula> pool{
        A("p"),
        A("q"),
        A("r"),
        Formula::negation(A("p")),
        Formula::implies(A("p"), A("q")),
        Formula::implies(A("q"), A("r")),
        Formula::implies(A("p"), A("r")),
        Formula::implies(A("q"), A("p")),
        Formula::implies(A("p"), Formula::implies(A("q"), A("r"))),
        Formula::implies(Formula::implies(A("p"), A("q")), A("r")),
        Formula::conj(A("p"), A("q")),
    };
    return pool;
}

Term random_var_term(Rng& rng, int max_size, const std::vector<std::string>& vars) {
    if (max_size < 3 || uniform(rng, 0, 2) == 0) return Term::variable(choose(rng, vars));
    int left = uniform(rng, 1, max_size - 2);
    Term l = random_var_term(rng, left, vars);
    Term r = random_var_term(rng, max_size - 1 - static_cast<int>(l.size()), vars);
    return uniform(rng, 0, 3) == 0 ? Term::sum(l, r) : Term::app(l, r);
}

std::vector<Formula> consequents(Formula f) {
    std::vector<Formula> out;
    while (f.kind() == FormulaKind::Implies) {
        f = f.right();
        out.push_back(f);
    }
    return out;
}

}  // namespace

std::vector<StarInstance> star_instances(std::uint64_t seed, int count) {
    Rng rng(seed);
    const std::vector<std::string> names{"J", "JD", "JT", "JH"};
    std::map<std::string, LogicSpec> specs;
    for (const auto& n : names) specs[n] = builtin_spec(n);
    const std::vector<std::string> vars{"x", "y", "z"};
    std::set<std::string> seen;
    std::vector<StarInstance> out;
    while (static_cast<int>(out.size()) < count) {
        StarInstance inst;
        inst.spec = specs.at(choose(rng, names));
        const int n = inst.spec.n;
        int np = uniform(rng, 1, 4);
        for (int i = 0; i < np; ++i)
            inst.premises.push_back(
                StarExpr{uniform(rng, 1, n), Term::variable(choose(rng, vars)), choose(rng, formula_pool())});
        Term t = random_var_term(rng, 6, vars);
        // aim the goal at something the premises could produce about half the time
        std::vector<Formula> targets = formula_pool();
        for (const auto& p : inst.premises)
            for (Formula c : consequents(p.formula)) targets.push_back(c);
        Formula goal = uniform(rng, 0, 1) ? choose(rng, targets) : inst.premises[uniform(rng, 0, np - 1)].formula;
        AgentId agent = uniform(rng, 0, 1) ? inst.premises[0].agent : uniform(rng, 1, n);
        inst.goal = StarExpr{agent, t, goal};
        std::string key = inst.spec.name;
        for (const auto& p : inst.premises) key += "|" + to_string(p);
        key += "|" + to_string(inst.goal);
        if (seen.insert(key).second) out.push_back(std::move(inst));
    }
    return out;
}

std::vector<HilbertProof> hilbert_proofs(const LogicSpec& spec, std::uint64_t seed, int count, int max_lines) {
    Rng rng(seed);
    auto catalog = axiom_schemes(spec);
    auto inst = [&](const std::string& id, std::vector<Formula> args) {
        const SchemePattern* s = find_scheme(catalog, id);
        if (!s) throw std::invalid_argument("scheme " + id + " missing from the catalog");
        Substitution sub;
        for (int m = 0; m < s->formula_metas; ++m) sub.formulas[m] = args.at(m);
        HilbertLine line;
        line.formula = sub.apply(s->skeleton);
        line.scheme = id;
        line.subst = sub;
        return line;
    };
    auto mp = [](const std::vector<HilbertLine>& ls, int major, int minor) {
        HilbertLine line;
        line.kind = HilbertLine::Kind::ModusPonens;
        line.formula = ls.at(major).formula.right();
        line.major = major;
        line.minor = minor;
        return line;
    };
    const std::vector<Formula> small{A("p"), A("q"), Formula::negation(A("p")), Formula::implies(A("p"), A("q")),
                                     Formula::conj(A("q"), A("p"))};
    const std::vector<std::string> unary{"P1", "P4", "P5", "P6", "P7", "P8"};
    std::set<std::string> seen;
    std::vector<HilbertProof> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts++ < count * 200) {
        Formula a = choose(rng, small), b = choose(rng, small), c = choose(rng, small);
        HilbertProof pr;
        auto& L = pr.lines;
        switch (uniform(rng, 0, 4)) {
            case 0:  // a single axiom
                L.push_back(inst(choose(rng, unary), {a, b, c}));
                break;
            case 1: {  // a → a
                Formula aa = Formula::implies(a, a);
                L.push_back(inst("P2", {a, aa, a}));
                L.push_back(inst("P1", {a, aa}));
                L.push_back(mp(L, 0, 1));
                L.push_back(inst("P1", {a, a}));
                L.push_back(mp(L, 2, 3));
                break;
            }
            case 2: {  // weaken an axiom by a hypothesis
                L.push_back(inst(choose(rng, unary), {a, b, c}));
                L.push_back(inst("P1", {L[0].formula, c}));
                L.push_back(mp(L, 1, 0));
                break;
            }
            case 3: {  // weaken twice
                L.push_back(inst(choose(rng, unary), {a, b, c}));
                L.push_back(inst("P1", {L[0].formula, b}));
                L.push_back(mp(L, 1, 0));
                L.push_back(inst("P1", {L[2].formula, c}));
                L.push_back(mp(L, 3, 2));
                break;
            }
            default: {  // chain two implications through P2
                Formula bc = Formula::implies(b, c);
                L.push_back(inst("P1", {bc, a}));
                L.push_back(inst("P2", {a, b, c}));
                L.push_back(inst("P1", {L[1].formula, bc}));
                L.push_back(mp(L, 2, 1));
                break;
            }
        }
        if (static_cast<int>(L.size()) > max_lines || !check_hilbert_proof(spec, pr).ok) continue;
        std::string key;
        for (const auto& l : L) key += to_string(l.formula) + ";";
        if (seen.insert(key).second) out.push_back(std::move(pr));
    }
    return out;
}

std::vector<OneInstance> one_instances(std::uint64_t seed, int count, int max_alternatives) {
    Rng rng(seed);
    const std::vector<std::string> names{"J", "JH"};
    Term x = Term::variable("x"), y = Term::variable("y"), z = Term::variable("z");
    const std::vector<Term> shapes{
        Term::app(y, x),
        Term::app(x, y),
        Term::app_chain({y, x, z}),
        Term::app(y, Term::app(z, x)),
        Term::app(Term::app(x, y), z),
        Term::sum(x, y),
        Term::sum(Term::app(y, x), z),
        Term::app(Term::sum(y, z), x),
        Term::app(Term::sum(x, z), y),
    };
    std::set<std::string> seen;
    std::vector<OneInstance> out;
    while (static_cast<int>(out.size()) < count) {
        OneInstance inst;
        inst.spec = builtin_spec(choose(rng, names));
        inst.s = x;
        AgentId agent = uniform(rng, 1, inst.spec.n);
        int nb = uniform(rng, 1, 3);
        for (int i = 0; i < nb; ++i)
            inst.base.push_back(StarExpr{uniform(rng, 0, 3) ? agent : uniform(rng, 1, inst.spec.n),
                                         uniform(rng, 0, 1) ? y : z, choose(rng, formula_pool())});
        int k = uniform(rng, 1, max_alternatives);
        for (int i = 0; i < k; ++i) inst.alternatives.push_back(StarExpr{agent, x, choose(rng, formula_pool())});
        std::vector<Formula> targets = formula_pool();
        for (const auto& p : inst.base)
            for (Formula c : consequents(p.formula)) targets.push_back(c);
        for (const auto& p : inst.alternatives)
            for (Formula c : consequents(p.formula)) targets.push_back(c);
        inst.goal = StarExpr{agent, choose(rng, shapes), choose(rng, targets)};
        if (uniform(rng, 0, 1)) {
            // plant a derivation through one alternative, then maybe spoil it
            const std::vector<Formula> lits{A("p"), A("q"), A("r"), Formula::negation(A("q"))};
            Formula a = choose(rng, lits), b = choose(rng, lits), g = choose(rng, lits);
            StarExpr& planted = inst.alternatives[uniform(rng, 0, k - 1)];
            switch (uniform(rng, 0, 3)) {
                case 0:
                    inst.goal.term = Term::app(y, x);
                    inst.base.push_back(StarExpr{agent, y, Formula::implies(a, g)});
                    planted.formula = a;
                    break;
                case 1:
                    inst.goal.term = Term::app(x, y);
                    inst.base.push_back(StarExpr{agent, y, a});
                    planted.formula = Formula::implies(a, g);
                    break;
                case 2:
                    inst.goal.term = uniform(rng, 0, 1) ? Term::sum(x, y) : Term::sum(Term::app(y, x), z);
                    planted.formula = g;
                    break;
                default:
                    inst.goal.term = Term::app_chain({y, x, z});
                    inst.base.push_back(StarExpr{agent, y, Formula::implies(a, Formula::implies(b, g))});
                    inst.base.push_back(StarExpr{agent, z, b});
                    planted.formula = a;
                    break;
            }
            inst.goal.formula = g;
            if (uniform(rng, 0, 3) == 0) planted.formula = choose(rng, lits);
        }
        std::string key = inst.spec.name;
        for (const auto& p : inst.base) key += "|" + to_string(p);
        for (const auto& p : inst.alternatives) key += "|" + to_string(p);
        key += "|" + to_string(inst.goal);
        if (seen.insert(key).second) out.push_back(std::move(inst));
    }
    return out;
}

std::vector<Formula> prop_formulas_exhaustive(const std::vector<std::string>& atoms, int max_connectives) {
    // by_count[c]: formulas with exactly c connectives
    std::vector<std::vector<Formula>> by_count(max_connectives + 1);
    for (const auto& a : atoms) by_count[0].push_back(Formula::atom(a));
    for (int c = 1; c <= max_connectives; ++c) {
        for (Formula f : by_count[c - 1]) by_count[c].push_back(Formula::negation(f));
        for (int left = 0; left <= c - 1; ++left)
            for (Formula l : by_count[left])
                for (Formula r : by_count[c - 1 - left]) {
                    by_count[c].push_back(Formula::conj(l, r));
                    by_count[c].push_back(Formula::disj(l, r));
                    by_count[c].push_back(Formula::implies(l, r));
                }
    }
    std::vector<Formula> out;
    for (const auto& v : by_count) out.insert(out.end(), v.begin(), v.end());
    return out;
}

namespace {

Formula random_prop(Rng& rng, int connectives, const std::vector<std::string>& atoms) {
    if (connectives == 0) return Formula::atom(choose(rng, atoms));
    int k = uniform(rng, 0, 3);
    if (k == 0) return Formula::negation(random_prop(rng, connectives - 1, atoms));
    int left = uniform(rng, 0, connectives - 1);
    Formula l = random_prop(rng, left, atoms), r = random_prop(rng, connectives - 1 - left, atoms);
    return k == 1 ? Formula::conj(l, r) : k == 2 ? Formula::disj(l, r) : Formula::implies(l, r);
}

bool uses_all(Formula f, const std::vector<std::string>& atoms) {
    std::vector<std::string> have;
    collect_atoms(f, have);
    return std::all_of(atoms.begin(), atoms.end(),
                       [&](const std::string& a) { return std::find(have.begin(), have.end(), a) != have.end(); });
}

}  // namespace

std::vector<Formula> prop_formulas_sampled(std::uint64_t seed, int count, const std::vector<std::string>& atoms,
                                           int max_connectives) {
    Rng rng(seed);
    std::set<Formula> seen;
    std::vector<Formula> out;
    int min_connectives = std::max(1, static_cast<int>(atoms.size()) - 1);
    while (static_cast<int>(out.size()) < count) {
        Formula f = random_prop(rng, uniform(rng, min_connectives, max_connectives), atoms);
        if (uses_all(f, atoms) && seen.insert(f).second) out.push_back(f);
    }
    return out;
}

std::vector<QBF2> qbf_instances(std::uint64_t seed, int count, int max_exists, int max_forall, int max_connectives) {
    Rng rng(seed);
    std::set<std::string> seen;
    std::vector<QBF2> out;
    while (static_cast<int>(out.size()) < count) {
        QBF2 q;
        int k = uniform(rng, 0, max_exists), kk = uniform(rng, 0, max_forall);
        if (k + kk == 0) continue;
        for (int i = 1; i <= k; ++i) q.exists.push_back("p" + std::to_string(i));
        for (int i = 1; i <= kk; ++i) q.forall.push_back("q" + std::to_string(i));
        std::vector<std::string> atoms = q.exists;
        atoms.insert(atoms.end(), q.forall.begin(), q.forall.end());
        q.matrix = random_prop(rng, uniform(rng, 0, max_connectives), atoms);
        if (seen.insert(to_string(q)).second) out.push_back(std::move(q));
    }
    return out;
}

std::vector<SBFormula> sb_instances(std::uint64_t seed, int count, const SbShape& shape) {
    Rng rng(seed);
    std::set<std::string> seen;
    std::vector<SBFormula> out;
    const std::vector<std::string> rel_names{"R", "E", "S"};
    while (static_cast<int>(out.size()) < count) {
        SBFormula sb;
        int k = uniform(rng, shape.require_exists ? 1 : 0, shape.max_exists);
        int kk = uniform(rng, 0, shape.max_forall);
        for (int i = 1; i <= k; ++i) sb.exists.push_back("x" + std::to_string(i));
        for (int i = 1; i <= kk; ++i) sb.forall.push_back("y" + std::to_string(i));
        std::vector<std::string> vars = sb.exists;
        vars.insert(vars.end(), sb.forall.begin(), sb.forall.end());
        if (vars.empty()) continue;
        int nr = uniform(rng, 1, shape.max_relations);
        std::vector<std::string> rels(rel_names.begin(), rel_names.begin() + nr);
        for (const auto& r : rels) declare_relation(sb, r, uniform(rng, 1, shape.max_arity));
        std::function<Formula(int)> gen = [&](int c) -> Formula {
            if (c == 0) {
                if (shape.equality && uniform(rng, 0, 3) == 0)
                    return fo_atom(sb, FoAtom{true, "", {choose(rng, vars), choose(rng, vars)}});
                FoAtom a{false, choose(rng, rels), {}};
                for (int j = 0; j < sb.arity.at(a.relation); ++j) a.args.push_back(choose(rng, vars));
                return fo_atom(sb, a);
            }
            int kind = uniform(rng, 0, 3);
            if (kind == 0) return Formula::negation(gen(c - 1));
            int left = uniform(rng, 0, c - 1);
            Formula l = gen(left), r = gen(c - 1 - left);
            return kind == 1 ? Formula::conj(l, r) : kind == 2 ? Formula::disj(l, r) : Formula::implies(l, r);
        };
        sb.matrix = gen(uniform(rng, 0, shape.max_connectives));
        // drop declarations the matrix never uses
        std::set<std::string> used;
        for (const auto& [key, a] : sb.atoms)
            if (!a.equality) used.insert(a.relation);
        SBFormula clean;
        clean.exists = sb.exists;
        clean.forall = sb.forall;
        for (const auto& r : sb.relation_order)
            if (used.count(r)) declare_relation(clean, r, sb.arity.at(r));
        clean.atoms = sb.atoms;
        clean.matrix = sb.matrix;
        std::vector<std::string> keys;
        collect_atoms(clean.matrix, keys);
        std::erase_if(clean.atoms, [&](const auto& kv) { return std::find(keys.begin(), keys.end(), kv.first) == keys.end(); });
        validate_sb(clean);
        if (seen.insert(to_string(clean)).second) out.push_back(std::move(clean));
    }
    return out;
}

}  // namespace justec::corpus
