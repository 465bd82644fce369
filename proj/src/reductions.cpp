#include "justec/reductions.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace justec {

// ------------------------------------------------------------ standard terms

const std::vector<StandardField>& standard_fields() {
    static const std::vector<StandardField> fields{
        {"id", "Id", &StandardTerms::id},
        {"left", "P4", &StandardTerms::left},
        {"right", "P5", &StandardTerms::right},
        {"tran", "Tran", &StandardTerms::tran},
        {"append", "P6", &StandardTerms::append},
        {"hypappend", "HypAppend", &StandardTerms::hypappend},
        {"appendconc", "AppendConc", &StandardTerms::appendconc},
        {"addhyp", "P1", &StandardTerms::addhyp},
        {"replaceleft", "ReplaceLeft", &StandardTerms::replaceleft},
        {"replaceright", "ReplaceRight", &StandardTerms::replaceright},
        {"mphypoth", "MpHypoth", &StandardTerms::mphypoth},
        {"c_dot", "App_1", &StandardTerms::c_dot},
    };
    return fields;
}

namespace {

bool selects(const std::string& selector, const std::string& id) {
    return selector == id || (id.size() > selector.size() && id.compare(0, selector.size(), selector) == 0 &&
                              id[selector.size()] == '_');
}

std::optional<std::string> constant_for(const LogicSpec& spec, AgentId agent, const std::string& scheme) {
    if (spec.cs.total) return kTotalConstant;
    // Prefer a constant declared for exactly this scheme over a catch-all.
    for (const auto& e : spec.cs.entries)
        if ((e.agent == 0 || e.agent == agent) && e.scheme != "*" && selects(e.scheme, scheme)) return e.constant;
    for (const auto& e : spec.cs.entries)
        if ((e.agent == 0 || e.agent == agent) && e.scheme == "*") return e.constant;
    return std::nullopt;
}

}  // namespace

StandardTerms standard_terms(const LogicSpec& spec, AgentId agent) {
    if (agent < 1 || agent > spec.n) throw SpecError("agent " + std::to_string(agent) + " out of range");
    StandardTerms st;
    for (const auto& f : standard_fields()) {
        auto c = constant_for(spec, agent, f.scheme);
        if (!c)
            throw SpecError(std::string("no constant justifies ") + f.scheme + " for agent " + std::to_string(agent) +
                            " (standard term `" + f.name + "`)");
        st.*(f.slot) = Term::constant(*c);
    }
    return st;
}

Term mk_proj(int r, int x, const StandardTerms& st) {
    if (r < 1 || x < 1 || x > r) throw std::out_of_range("proj index out of range");
    if (r == 1) return st.id;
    if (x == r) return st.right;
    return Term::app_chain({st.tran, st.left, mk_proj(r - 1, x, st)});
}

Term mk_replace(int k, int l, const StandardTerms& st) {
    if (k < 1 || l < 1 || l > k) throw std::out_of_range("replace index out of range");
    if (l == k) return k == 1 ? st.id : st.replaceright;
    return Term::app_chain({st.tran, mk_replace(k - 1, l, st), st.replaceleft});
}

Formula proj_contract(const std::vector<Formula>& parts, int x) {
    return Formula::implies(Formula::conj_all(parts), parts.at(x - 1));
}

Formula replace_contract(const std::vector<Formula>& parts, int l, Formula replacement) {
    auto changed = parts;
    changed.at(l - 1) = replacement;
    return Formula::implies(Formula::implies(parts[l - 1], replacement),
                            Formula::implies(Formula::conj_all(parts), Formula::conj_all(changed)));
}

// ------------------------------------------------------------ shared helpers

namespace {

void preorder(Formula f, std::vector<Formula>& out) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    switch (f.kind()) {
        case FormulaKind::Not:
            preorder(f.body(), out);
            break;
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            preorder(f.left(), out);
            preorder(f.right(), out);
            break;
        case FormulaKind::Atom:
        case FormulaKind::Bottom:
            break;
        default:
            throw std::invalid_argument("not a propositional formula: " + to_string(f));
    }
}

void sort_by_size(std::vector<Formula>& fs) {
    std::stable_sort(fs.begin(), fs.end(), [](Formula a, Formula b) { return a.size() < b.size(); });
}

// Truth-table rows (γ, δ, value) for a binary connective.
std::vector<std::array<bool, 3>> rows(FormulaKind k) {
    auto op = [k](bool a, bool b) {
        switch (k) {
            case FormulaKind::And:
                return a && b;
            case FormulaKind::Or:
                return a || b;
            default:
                return !a || b;
        }
    };
    std::vector<std::array<bool, 3>> out;
    for (bool a : {true, false})
        for (bool b : {true, false}) out.push_back({a, b, op(a, b)});
    return out;
}

// Eval conjuncts of a connective node; `at(f, v)` names [f]^v, `truth` is the
// justification variable of the node.
std::vector<Formula> connective_eval(Formula f, Term truth, AgentId agent,
                                     const std::function<Formula(Formula, bool)>& at) {
    std::vector<Formula> out;
    auto J = [&](Formula body) { out.push_back(Formula::just(truth, agent, body)); };
    switch (f.kind()) {
        case FormulaKind::Bottom:
            J(at(f, false));
            break;
        case FormulaKind::Not:
            J(Formula::implies(at(f.body(), true), at(f, false)));
            J(Formula::implies(at(f.body(), false), at(f, true)));
            break;
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
            for (auto [a, b, v] : rows(f.kind()))
                J(Formula::implies(Formula::conj(at(f.left(), a), at(f.right(), b)), at(f, v)));
            break;
        default:
            throw std::invalid_argument("no truth table for " + to_string(f));
    }
    return out;
}

// One step of the connective tower over a conjunction of length n whose
// positions are given by `pos`.
Term connective_step(Formula f, Term prev, Term truth, int n, const std::function<int(Formula)>& pos,
                     const StandardTerms& st) {
    switch (f.kind()) {
        case FormulaKind::Bottom:
            return Term::app_chain({st.append, prev, truth});
        case FormulaKind::Not:
            return Term::app(
                Term::app(st.hypappend, Term::app_chain({st.tran, mk_proj(n, pos(f.body()), st), truth})), prev);
        default: {
            Term both = Term::app_chain({st.appendconc, mk_proj(n, pos(f.left()), st), mk_proj(n, pos(f.right()), st)});
            return Term::app(Term::app(st.hypappend, Term::app_chain({st.tran, both, truth})), prev);
        }
    }
}

}  // namespace

// ------------------------------------------------------------ propositional

int PropContext::index_of(Formula f) const {
    auto it = std::find(psi.begin(), psi.end(), f);
    return it == psi.end() ? 0 : static_cast<int>(it - psi.begin()) + 1;
}

Formula PropContext::truth_atom(int j, bool value) const {
    return Formula::atom((value ? "tt_" : "ff_") + std::to_string(j));
}

Term PropContext::x(int j) const { return Term::variable("x" + std::to_string(j)); }
Term PropContext::truth(int j) const { return Term::variable("truth" + std::to_string(j)); }

PropContext make_prop_context(const LogicSpec& spec, Formula phi, AgentId agent,
                              std::vector<std::string> atom_order) {
    PropContext ctx;
    ctx.agent = agent;
    ctx.phi = phi;
    ctx.st = standard_terms(spec, agent);
    std::vector<Formula> all;
    preorder(phi, all);
    if (atom_order.empty()) collect_atoms(phi, atom_order);
    for (Formula f : all)
        if (f.kind() == FormulaKind::Atom &&
            std::find(atom_order.begin(), atom_order.end(), f.name()) == atom_order.end())
            throw std::invalid_argument("atom " + f.name() + " missing from the atom order");
    for (const auto& a : atom_order) ctx.psi.push_back(Formula::atom(a));
    ctx.rho = static_cast<int>(ctx.psi.size());
    std::vector<Formula> rest;
    for (Formula f : all)
        if (f.kind() != FormulaKind::Atom) rest.push_back(f);
    sort_by_size(rest);
    ctx.psi.insert(ctx.psi.end(), rest.begin(), rest.end());
    return ctx;
}

std::vector<Formula> eval_q_conjuncts(const PropContext& ctx, int j) {
    if (j <= ctx.rho || j > ctx.l()) throw std::out_of_range("Eval index " + std::to_string(j) + " is not a connective");
    auto at = [&](Formula f, bool v) { return ctx.truth_atom(ctx.index_of(f), v); };
    return connective_eval(ctx.psi[j - 1], ctx.truth(j), ctx.agent, at);
}

Formula build_eval_q(const PropContext& ctx, int j) { return Formula::conj_all(eval_q_conjuncts(ctx, j)); }

TTower build_T_q(const PropContext& ctx) {
    TTower out;
    const auto& st = ctx.st;
    for (int a = 1; a <= ctx.l(); ++a) {
        Formula f = ctx.psi[a - 1];
        if (a <= ctx.rho) {
            out.T.push_back(a == 1 ? ctx.x(1) : Term::app_chain({st.append, out.T.back(), ctx.x(a)}));
        } else if (a == 1) {
            out.T.push_back(ctx.truth(1));  // ⊥ with nothing before it
        } else {
            auto pos = [&](Formula g) { return ctx.index_of(g); };
            out.T.push_back(connective_step(f, out.T.back(), ctx.truth(a), a - 1, pos, st));
        }
    }
    out.TJ = Term::app(mk_proj(ctx.l(), ctx.index_of(ctx.phi), st), out.T.back());
    return out;
}

std::vector<Formula> s_conjuncts(const PropContext& ctx) {
    std::vector<Formula> out;
    for (int j = ctx.rho + 1; j <= ctx.l(); ++j) {
        auto e = eval_q_conjuncts(ctx, j);
        out.insert(out.end(), e.begin(), e.end());
    }
    return out;
}

Formula build_S_q(const PropContext& ctx) { return Formula::conj_all(s_conjuncts(ctx)); }

std::vector<Formula> build_Sv(const PropContext& ctx, const Valuation& v) {
    std::vector<Formula> out;
    for (int j = 1; j <= ctx.rho; ++j)
        out.push_back(Formula::just(ctx.x(j), ctx.agent, ctx.truth_atom(j, v.at(ctx.psi[j - 1].name()))));
    return out;
}

StarExpr star_of(Formula just) {
    if (just.kind() != FormulaKind::Just) throw std::invalid_argument("not a justification assertion: " + to_string(just));
    return StarExpr{just.agent(), just.term(), just.body()};
}

namespace {

std::vector<StarExpr> stars(const std::vector<Formula>& fs) {
    std::vector<StarExpr> out;
    for (Formula f : fs) out.push_back(star_of(f));
    return out;
}

bool derives(const LogicSpec& spec, std::vector<StarExpr> premises, const StarExpr& goal, const SearchOptions& opts) {
    return derive(spec, premises, goal, opts).has_value();
}

}  // namespace

bool check_tarski(const LogicSpec& spec, const PropContext& ctx, const Valuation& v, const SearchOptions& opts) {
    auto premises = stars(build_Sv(ctx, v));
    auto s = stars(s_conjuncts(ctx));
    premises.insert(premises.end(), s.begin(), s.end());
    StarExpr goal{ctx.agent, build_T_q(ctx).TJ, ctx.truth_atom(ctx.index_of(ctx.phi), true)};
    return derives(spec, premises, goal, opts);
}

PropContext qbf_context(const LogicSpec& spec, const QBF2& qbf, AgentId agent) {
    validate_qbf2(qbf);
    std::vector<std::string> order = qbf.exists;
    order.insert(order.end(), qbf.forall.begin(), qbf.forall.end());
    return make_prop_context(spec, Formula::negation(qbf.matrix), agent, order);
}

Formula reduce_qbf2(const LogicSpec& spec, const QBF2& qbf, AgentId agent) {
    PropContext ctx = qbf_context(spec, qbf, agent);
    const int k = static_cast<int>(qbf.exists.size());
    std::vector<Formula> parts;
    for (int j = 1; j <= ctx.rho; ++j) {
        Formula t = Formula::just(ctx.x(j), agent, ctx.truth_atom(j, true));
        Formula f = Formula::just(ctx.x(j), agent, ctx.truth_atom(j, false));
        parts.push_back(j <= k ? Formula::disj(t, f) : Formula::conj(t, f));
    }
    auto s = s_conjuncts(ctx);
    parts.insert(parts.end(), s.begin(), s.end());
    parts.push_back(Formula::negation(
        Formula::just(build_T_q(ctx).TJ, agent, ctx.truth_atom(ctx.index_of(ctx.phi), true))));
    return Formula::conj_all(parts);
}

namespace {

// Premises x_j:[p_j]^v for a choice of existential bits; universals get the
// bits of `ubits`, or both values when `joint`.
std::vector<StarExpr> qbf_premises(const PropContext& ctx, int k, unsigned ebits, unsigned ubits, bool joint) {
    std::vector<StarExpr> out;
    for (int j = 1; j <= ctx.rho; ++j) {
        if (j <= k) {
            out.push_back({ctx.agent, ctx.x(j), ctx.truth_atom(j, (ebits >> (j - 1)) & 1u)});
        } else if (joint) {
            out.push_back({ctx.agent, ctx.x(j), ctx.truth_atom(j, true)});
            out.push_back({ctx.agent, ctx.x(j), ctx.truth_atom(j, false)});
        } else {
            out.push_back({ctx.agent, ctx.x(j), ctx.truth_atom(j, (ubits >> (j - k - 1)) & 1u)});
        }
    }
    auto s = stars(s_conjuncts(ctx));
    out.insert(out.end(), s.begin(), s.end());
    return out;
}

}  // namespace

bool qbf_characterization_check(const LogicSpec& spec, const QBF2& qbf, AgentId agent, const SearchOptions& opts) {
    PropContext ctx = qbf_context(spec, qbf, agent);
    const int k = static_cast<int>(qbf.exists.size()), k2 = static_cast<int>(qbf.forall.size());
    StarExpr goal{agent, build_T_q(ctx).TJ, ctx.truth_atom(ctx.index_of(ctx.phi), true)};
    for (unsigned e = 0; e < (1u << k); ++e) {
        bool all_fail = true;
        for (unsigned u = 0; u < (1u << k2) && all_fail; ++u)
            if (derives(spec, qbf_premises(ctx, k, e, u, false), goal, opts)) all_fail = false;
        if (all_fail) return true;
    }
    return false;
}

bool qbf_joint_premise_check(const LogicSpec& spec, const QBF2& qbf, AgentId agent, const SearchOptions& opts) {
    PropContext ctx = qbf_context(spec, qbf, agent);
    const int k = static_cast<int>(qbf.exists.size());
    StarExpr goal{agent, build_T_q(ctx).TJ, ctx.truth_atom(ctx.index_of(ctx.phi), true)};
    for (unsigned e = 0; e < (1u << k); ++e)
        if (!derives(spec, qbf_premises(ctx, k, e, 0, true), goal, opts)) return true;
    return false;
}

std::vector<Term> repeated_variables(Term t, const std::vector<Term>& vars) {
    std::vector<Term> out;
    for (Term v : vars)
        if (count_occurrences(t, v) > 1) out.push_back(v);
    return out;
}

// ------------------------------------------------------------ binarization

namespace {

Formula map_atoms(Formula f, const std::function<Formula(const std::string&)>& g) {
    switch (f.kind()) {
        case FormulaKind::Atom:
            return g(f.name());
        case FormulaKind::Not:
            return Formula::negation(map_atoms(f.body(), g));
        case FormulaKind::Implies:
            return Formula::implies(map_atoms(f.left(), g), map_atoms(f.right(), g));
        case FormulaKind::And:
            return Formula::conj(map_atoms(f.left(), g), map_atoms(f.right(), g));
        case FormulaKind::Or:
            return Formula::disj(map_atoms(f.left(), g), map_atoms(f.right(), g));
        default:
            return f;
    }
}

std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& taken) {
    std::string s = base;
    while (taken(s)) s += "_";
    return s;
}

}  // namespace

SBFormula binarize_sb(const SBFormula& sb) {
    const int k = static_cast<int>(sb.exists.size());
    if (k < 1) throw std::invalid_argument("binarization needs at least one existential variable");
    int w = 0;
    while ((1 << w) < k) ++w;
    w = std::max(w, 1);
    auto bits = [w](const std::string& z) {
        std::vector<std::string> out;
        for (int i = 1; i <= w; ++i) out.push_back(z + "_b" + std::to_string(i));
        return out;
    };

    SBFormula out;
    out.binary = true;
    for (const auto& x : sb.exists)
        for (const auto& b : bits(x)) out.exists.push_back(b);
    for (const auto& y : sb.forall)
        for (const auto& b : bits(y)) out.forall.push_back(b);
    for (const auto& r : sb.relation_order) declare_relation(out, r, sb.arity.at(r) * w);

    auto vec_eq = [&](const std::string& a, const std::string& b) {
        std::vector<Formula> eqs;
        auto ba = bits(a), bb = bits(b);
        for (int i = 0; i < w; ++i) eqs.push_back(fo_atom(out, FoAtom{true, "", {ba[i], bb[i]}}));
        return Formula::conj_all(eqs);
    };
    Formula body = map_atoms(sb.matrix, [&](const std::string& key) {
        const FoAtom& a = sb.atoms.at(key);
        if (a.equality) return vec_eq(a.args[0], a.args[1]);
        FoAtom wide{false, a.relation, {}};
        for (const auto& z : a.args)
            for (const auto& b : bits(z)) wide.args.push_back(b);
        return fo_atom(out, wide);
    });
    if (!sb.forall.empty()) {
        std::vector<Formula> guard;
        for (const auto& y : sb.forall) {
            std::vector<Formula> any;
            for (const auto& x : sb.exists) any.push_back(vec_eq(x, y));
            guard.push_back(Formula::disj_all(any));
        }
        body = Formula::implies(Formula::conj_all(guard), body);
    }
    out.matrix = body;
    validate_sb(out);
    return out;
}

SBFormula eliminate_equality(const SBFormula& sb) {
    if (!sb.has_equality()) return sb;
    SBFormula out;
    out.binary = sb.binary;
    auto var_taken = [&](const std::string& s) {
        return std::count(sb.exists.begin(), sb.exists.end(), s) || std::count(sb.forall.begin(), sb.forall.end(), s);
    };
    const std::string e1 = fresh_name("e_top", var_taken), e0 = fresh_name("e_bot", var_taken);
    const std::string sep = fresh_name("Sep", [&](const std::string& s) { return sb.arity.count(s) > 0; });
    out.exists = sb.exists;
    out.exists.push_back(e1);
    out.exists.push_back(e0);
    out.forall = sb.forall;
    for (const auto& r : sb.relation_order) declare_relation(out, r, sb.arity.at(r));
    auto S = [&](const std::string& z) { return fo_atom(out, FoAtom{false, sep, {z}}); };
    Formula body = map_atoms(sb.matrix, [&](const std::string& key) {
        const FoAtom& a = sb.atoms.at(key);
        if (!a.equality) return fo_atom(out, a);
        Formula l = S(a.args[0]), r = S(a.args[1]);
        return Formula::disj(Formula::conj(l, r), Formula::conj(Formula::negation(l), Formula::negation(r)));
    });
    out.matrix = Formula::conj(Formula::conj(S(e1), Formula::negation(S(e0))), body);
    validate_sb(out);
    return out;
}

// ------------------------------------------------------------ first order

int FoContext::index_of(Formula f) const {
    auto it = std::find(sub.begin(), sub.end(), f);
    return it == sub.end() ? 0 : rho0 + static_cast<int>(it - sub.begin()) + 1;
}

const FoAtom& FoContext::atom_at(int a) const {
    if (a <= rho0 || a > rho1) throw std::out_of_range("position " + std::to_string(a) + " is not a relation atom");
    return sb.atoms.at(psi(a).name());
}

int FoContext::z_index(const std::string& var) const {
    auto it = std::find(z.begin(), z.end(), var);
    if (it == z.end()) throw std::out_of_range("unknown variable " + var);
    return static_cast<int>(it - z.begin()) + 1;
}

Formula FoContext::truth_atom(int a, bool value) const {
    return Formula::atom((value ? "tt_" : "ff_") + std::to_string(a));
}

Formula FoContext::bit(int l, bool value) const {
    Formula p = Formula::atom("p" + std::to_string(l));
    return value ? p : Formula::negation(p);
}

Formula FoContext::ok(int l) const { return Formula::atom("ok" + std::to_string(l)); }

Formula FoContext::rel_atom(const std::string& r, bool value) const {
    return Formula::atom((value ? "rt_" : "rf_") + r);
}

Formula FoContext::active() const { return Formula::atom("active"); }

Term FoContext::var(int a) const { return Term::variable("var" + std::to_string(a)); }
Term FoContext::rel(const std::string& r) const { return Term::variable("rel_" + r); }
Term FoContext::value(const std::string& v) const { return Term::variable("value_" + v); }
Term FoContext::match_var(const std::string& v, int l) const {
    return Term::variable("match_" + v + "_" + std::to_string(l));
}
Term FoContext::truth(int a) const { return Term::variable("truth" + std::to_string(a)); }
Term FoContext::rho() const { return Term::variable("rho"); }

FoContext make_fo_context(const LogicSpec& jh, const SBFormula& sb, Formula theta) {
    if (jh.n < 2) throw std::invalid_argument("the first-order construction needs agents 1 and 2");
    if (sb.has_equality()) throw std::invalid_argument("equality atoms must be eliminated first");
    FoContext ctx;
    ctx.sb = sb;
    ctx.theta = theta;
    ctx.z = sb.exists;
    ctx.z.insert(ctx.z.end(), sb.forall.begin(), sb.forall.end());
    ctx.rho0 = static_cast<int>(ctx.z.size());
    if (ctx.rho0 < 1) throw std::invalid_argument("the first-order construction needs at least one variable");
    std::vector<Formula> all;
    preorder(theta, all);
    std::vector<Formula> rest;
    for (Formula f : all) {
        if (f.kind() != FormulaKind::Atom) {
            rest.push_back(f);
            continue;
        }
        auto it = sb.atoms.find(f.name());
        if (it == sb.atoms.end()) throw std::invalid_argument("unregistered atom " + f.name());
        for (const auto& v : it->second.args) ctx.z_index(v);
        ctx.sub.push_back(f);
        ctx.alpha = std::max(ctx.alpha, static_cast<int>(it->second.args.size()));
    }
    if (ctx.sub.empty()) throw std::invalid_argument("the first-order construction needs a relation atom");
    ctx.rho1 = ctx.rho0 + static_cast<int>(ctx.sub.size());
    sort_by_size(rest);
    ctx.sub.insert(ctx.sub.end(), rest.begin(), rest.end());
    ctx.st1 = standard_terms(jh, 1);
    ctx.st2 = standard_terms(jh, 2);
    return ctx;
}

namespace {

int arity_of(const FoContext& ctx, const std::string& r) { return ctx.sb.arity.at(r); }

// T^{ρ0}: the value variables gathered into one conjunction.
Term value_chain(const FoContext& ctx) {
    Term t = ctx.value(ctx.z[0]);
    for (std::size_t j = 1; j < ctx.z.size(); ++j) t = Term::app_chain({ctx.st1.append, t, ctx.value(ctx.z[j])});
    return t;
}

// The step term of match_b: turns (V → C_{b-1}) into (V → C_b).
Term match_step(const FoContext& ctx, const FoAtom& atom, int b) {
    const auto& st = ctx.st1;
    const std::string& zb = atom.args.at(b - 1);
    Term pick = Term::app_chain({st.tran, mk_proj(ctx.rho0, ctx.z_index(zb), st), ctx.match_var(zb, b)});
    return Term::app_chain({st.tran, pick, mk_replace(arity_of(ctx, atom.relation) + 1, b, st)});
}

std::vector<std::string> relations_of(const FoContext& ctx) {
    std::vector<std::string> out;
    for (int a = ctx.rho0 + 1; a <= ctx.rho1; ++a) {
        const std::string& r = ctx.atom_at(a).relation;
        if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    }
    return out;
}

}  // namespace

Term build_gather(const FoContext& ctx, const std::string& r) {
    int ar = arity_of(ctx, r);
    if (ar == 0) return ctx.rel(r);
    Term g = ctx.var(1);
    for (int j = 2; j <= ar; ++j) g = Term::app_chain({ctx.st1.append, g, ctx.var(j)});
    return Term::app_chain({ctx.st1.append, g, ctx.rel(r)});
}

Term build_match(const FoContext& ctx, int a, int b) {
    const FoAtom& atom = ctx.atom_at(a);
    if (b < 0 || b > static_cast<int>(atom.args.size())) throw std::out_of_range("match index out of range");
    Term m = Term::app(ctx.st1.addhyp, build_gather(ctx, atom.relation));
    for (int j = 1; j <= b; ++j) m = Term::app_chain({ctx.st1.mphypoth, m, match_step(ctx, atom, j)});
    return m;
}

Term build_bang_match(const FoContext& ctx, int a, int b) {
    const FoAtom& atom = ctx.atom_at(a);
    if (b < 0 || b > static_cast<int>(atom.args.size())) throw std::out_of_range("match index out of range");
    const Term dot = ctx.st2.c_dot;
    Term m = Term::app_chain({dot, Term::bang(ctx.st1.addhyp), Term::bang(build_gather(ctx, atom.relation))});
    for (int j = 1; j <= b; ++j) {
        Term lifted = Term::app_chain({dot, Term::bang(ctx.st1.mphypoth), m});
        m = Term::app_chain({dot, lifted, Term::bang(match_step(ctx, atom, j))});
    }
    return m;
}

std::vector<Formula> match_conjuncts(const FoContext& ctx) {
    std::vector<Formula> out;
    for (int l = 1; l <= ctx.alpha; ++l)
        for (const auto& v : ctx.z)
            for (bool tv : {true, false})
                out.push_back(Formula::just(
                    ctx.match_var(v, l), 1,
                    Formula::implies(ctx.truth_atom(ctx.z_index(v), tv), Formula::implies(ctx.bit(l, tv), ctx.ok(l)))));
    return out;
}

Formula build_match_formula(const FoContext& ctx) { return Formula::conj_all(match_conjuncts(ctx)); }

std::vector<Formula> eval_fo_conjuncts(const FoContext& ctx, int a) {
    if (a <= ctx.rho0 || a > ctx.l()) throw std::out_of_range("Eval index " + std::to_string(a) + " is out of range");
    if (a <= ctx.rho1) {
        const FoAtom& atom = ctx.atom_at(a);
        int ar = static_cast<int>(atom.args.size());
        Term applied = Term::app(build_match(ctx, a, ar), value_chain(ctx));
        std::vector<Formula> out;
        for (bool v : {true, false}) {
            std::vector<Formula> oks;
            for (int j = 1; j <= ar; ++j) oks.push_back(ctx.ok(j));
            oks.push_back(ctx.rel_atom(atom.relation, v));
            Formula matched = Formula::just(applied, 1, Formula::conj_all(oks));
            out.push_back(Formula::just(ctx.truth(a), 2, Formula::implies(matched, ctx.truth_atom(a, v))));
        }
        return out;
    }
    auto at = [&](Formula f, bool v) { return ctx.truth_atom(ctx.index_of(f), v); };
    return connective_eval(ctx.psi(a), ctx.truth(a), 2, at);
}

Formula build_eval_fo(const FoContext& ctx, int a) { return Formula::conj_all(eval_fo_conjuncts(ctx, a)); }

std::vector<Formula> eval_fo_all(const FoContext& ctx) {
    std::vector<Formula> out;
    for (int a = ctx.rho0 + 1; a <= ctx.l(); ++a) {
        auto e = eval_fo_conjuncts(ctx, a);
        out.insert(out.end(), e.begin(), e.end());
    }
    return out;
}

FoTower build_T_fo(const FoContext& ctx) {
    FoTower out;
    const auto& st1 = ctx.st1;
    const auto& st2 = ctx.st2;
    for (int a = 1; a <= ctx.rho0; ++a)
        out.T.push_back(a == 1 ? ctx.value(ctx.z[0]) : Term::app_chain({st1.append, out.T.back(), ctx.value(ctx.z[a - 1])}));

    const int K = ctx.rho1 - ctx.rho0;
    Term gathrel;
    for (int a = ctx.rho0 + 1; a <= ctx.rho1; ++a) {
        int ar = static_cast<int>(ctx.atom_at(a).args.size());
        Term piece = Term::app(st2.c_dot, build_bang_match(ctx, a, ar));
        gathrel = a == ctx.rho0 + 1 ? piece : Term::app_chain({st2.appendconc, gathrel, piece});
    }
    Term gathered = Term::app(gathrel, Term::bang(out.T[ctx.rho0 - 1]));
    for (int a = ctx.rho0 + 1; a <= ctx.rho1; ++a) {
        Term prev = a == ctx.rho0 + 1 ? gathered : out.T.back();
        out.T.push_back(Term::app_chain({mk_replace(K, a - ctx.rho0, st2), ctx.truth(a), prev}));
    }
    auto pos = [&](Formula g) { return ctx.index_of(g) - ctx.rho0; };
    for (int a = ctx.rho1 + 1; a <= ctx.l(); ++a)
        out.T.push_back(connective_step(ctx.psi(a), out.T.back(), ctx.truth(a), a - 1 - ctx.rho0, pos, st2));
    out.t_phi = Term::app(mk_proj(ctx.l() - ctx.rho0, ctx.index_of(ctx.theta) - ctx.rho0, st2), out.T.back());
    return out;
}

Formula gather_body(const FoContext& ctx, const std::string& r, const std::vector<bool>& tuple, bool v) {
    if (static_cast<int>(tuple.size()) != arity_of(ctx, r))
        throw std::invalid_argument("tuple length does not match the arity of " + r);
    std::vector<Formula> parts;
    for (std::size_t j = 0; j < tuple.size(); ++j) parts.push_back(ctx.bit(static_cast<int>(j) + 1, tuple[j]));
    parts.push_back(ctx.rel_atom(r, v));
    return Formula::just(build_gather(ctx, r), 1, Formula::conj_all(parts));
}

FoContext bsb_context(const LogicSpec& jh, const SBFormula& bsb) {
    SBFormula sb = eliminate_equality(bsb);
    return make_fo_context(jh, sb, Formula::negation(sb.matrix));
}

Formula reduce_bsb(const LogicSpec& jh, const SBFormula& bsb) {
    if (jh.n < 4) throw std::invalid_argument("the first-order reduction needs four agents");
    FoContext ctx = bsb_context(jh, bsb);
    const Term rho = ctx.rho();
    auto var = [&](int a, bool v) { return Formula::just(ctx.var(a), 1, ctx.bit(a, v)); };
    auto r3 = [&](Formula f) { return Formula::just(rho, 3, f); };
    auto r4 = [&](Formula f) { return Formula::just(rho, 4, f); };
    const Formula active = ctx.active();
    const int alpha = ctx.alpha;

    std::vector<Formula> zeros, some_zero, all_ones, B, C, D;
    for (int a = 1; a <= alpha; ++a) {
        zeros.push_back(var(a, false));
        some_zero.push_back(var(a, false));
        all_ones.push_back(var(a, true));
    }
    Formula start = Formula::conj(Formula::negation(active), r3(Formula::conj(active, Formula::conj_all(zeros))));
    Formula forward_a = r4(Formula::implies(Formula::conj(Formula::disj_all(some_zero), active), r3(active)));
    for (int a = 1; a <= alpha; ++a) {
        std::vector<Formula> low_ones, low_zeros, low_any_zero;
        for (int b = 1; b < a; ++b) {
            low_ones.push_back(var(b, true));
            low_zeros.push_back(var(b, false));
            low_any_zero.push_back(var(b, false));
        }
        Formula carry = Formula::conj(Formula::conj(Formula::conj_all(low_ones), var(a, false)), active);
        B.push_back(Formula::implies(carry, r3(Formula::conj(Formula::conj_all(low_zeros), var(a, true)))));
        for (bool v : {false, true}) {
            Formula keep = Formula::conj(Formula::conj(Formula::disj_all(low_any_zero), var(a, v)), active);
            (v ? D : C).push_back(Formula::implies(keep, r3(var(a, v))));
        }
    }
    Formula end = r4(Formula::implies(Formula::conj(Formula::conj_all(all_ones), active), r4(Formula::negation(active))));

    std::vector<Formula> choice_r;
    for (const auto& r : relations_of(ctx))
        choice_r.push_back(r4(Formula::implies(
            active, Formula::disj(Formula::just(ctx.rel(r), 1, ctx.rel_atom(r, true)),
                                  Formula::just(ctx.rel(r), 1, ctx.rel_atom(r, false))))));

    std::vector<Formula> values;
    const int k = static_cast<int>(ctx.sb.exists.size());
    for (int j = 1; j <= ctx.rho0; ++j) {
        Formula t = Formula::just(ctx.value(ctx.z[j - 1]), 1, ctx.truth_atom(j, true));
        Formula f = Formula::just(ctx.value(ctx.z[j - 1]), 1, ctx.truth_atom(j, false));
        values.push_back(j <= k ? Formula::disj(t, f) : Formula::conj(t, f));
    }
    Formula choice_v = r4(Formula::implies(Formula::negation(active), Formula::conj_all(values)));

    Formula t_phi_claim = Formula::just(build_T_fo(ctx).t_phi, 2, ctx.truth_atom(ctx.index_of(ctx.theta), true));
    Formula test = r4(Formula::implies(
        Formula::negation(active),
        Formula::conj(Formula::conj(build_match_formula(ctx), Formula::conj_all(eval_fo_all(ctx))),
                      Formula::negation(t_phi_claim))));

    return Formula::conj_all({start, forward_a, r4(Formula::conj_all(B)), r4(Formula::conj_all(C)),
                              r4(Formula::conj_all(D)), end, Formula::conj_all(choice_r), choice_v, test});
}

bool check_star2model(const LogicSpec& jh, const FoContext& ctx, const std::vector<GatherFact>& gathers,
                      const std::vector<std::pair<std::string, bool>>& values, const SearchOptions& opts) {
    std::map<std::pair<std::string, std::vector<bool>>, bool> seen;
    std::vector<StarExpr> premises;
    for (const auto& g : gathers) {
        if (!ctx.sb.arity.count(g.relation)) throw std::invalid_argument("unknown relation " + g.relation);
        auto [it, fresh] = seen.emplace(std::make_pair(g.relation, g.tuple), g.value);
        if (!fresh && it->second != g.value)
            throw std::invalid_argument("inconsistent premises for relation " + g.relation);
        premises.push_back(StarExpr{2, Term::bang(build_gather(ctx, g.relation)),
                                    gather_body(ctx, g.relation, g.tuple, g.value)});
    }
    for (Formula f : match_conjuncts(ctx)) premises.push_back(star_of(f));
    for (Formula f : eval_fo_all(ctx)) premises.push_back(star_of(f));
    for (const auto& [v, tv] : values) premises.push_back(StarExpr{1, ctx.value(v), ctx.truth_atom(ctx.z_index(v), tv)});
    StarExpr goal{2, build_T_fo(ctx).t_phi, ctx.truth_atom(ctx.index_of(ctx.theta), true)};
    return derives(jh, premises, goal, opts);
}

namespace {

void collect_bangs(Term t, std::vector<Term>& out) {
    switch (t.kind()) {
        case TermKind::Bang:
            out.push_back(t.inner());
            collect_bangs(t.inner(), out);
            break;
        case TermKind::App:
        case TermKind::Sum:
            collect_bangs(t.left(), out);
            collect_bangs(t.right(), out);
            break;
        default:
            break;
    }
}

}  // namespace

std::vector<std::string> fo_structure_violations(const FoContext& ctx, Term t_phi) {
    std::vector<std::string> out;
    for (const auto& v : ctx.z) {
        std::size_t n = count_occurrences(t_phi, ctx.value(v));
        if (n != 1) out.push_back(to_string(ctx.value(v)) + " occurs " + std::to_string(n) + " times");
    }
    std::set<Term> allowed{ctx.st1.addhyp, ctx.st1.mphypoth, value_chain(ctx)};
    for (const auto& r : relations_of(ctx)) {
        std::size_t expected = 0;
        for (int a = ctx.rho0 + 1; a <= ctx.rho1; ++a) expected += ctx.atom_at(a).relation == r;
        std::size_t n = count_occurrences(t_phi, Term::bang(build_gather(ctx, r)));
        if (n != expected)
            out.push_back("!gather for " + r + " occurs " + std::to_string(n) + " times, expected " +
                          std::to_string(expected));
        allowed.insert(build_gather(ctx, r));
    }
    for (int a = ctx.rho0 + 1; a <= ctx.rho1; ++a) {
        const FoAtom& atom = ctx.atom_at(a);
        for (int b = 1; b <= static_cast<int>(atom.args.size()); ++b) allowed.insert(match_step(ctx, atom, b));
    }
    std::vector<Term> inners;
    collect_bangs(t_phi, inners);
    for (Term inner : inners) {
        if (inner.has_bang()) out.push_back("nested ! in " + to_string(inner));
        else if (!allowed.count(inner)) out.push_back("unexpected ! block " + to_string(inner));
    }
    if (count_occurrences(t_phi, ctx.rho()) != 0) out.push_back("rho occurs in t^phi");
    return out;
}

WitnessModel build_jh_witness_model(const LogicSpec& jh, const SBFormula& bsb, const TwoElementModel& m) {
    if (jh.n < 4) throw std::invalid_argument("the witness model needs four agents");
    WitnessModel out;
    out.ctx = bsb_context(jh, bsb);
    const FoContext& ctx = out.ctx;

    // equality elimination adds a separating relation and two witnesses
    TwoElementModel mm = m;
    for (const auto& [r, ar] : ctx.sb.arity)
        if (!bsb.arity.count(r)) mm.tables[r] = {false, true};
    for (const auto& x : ctx.sb.exists)
        if (std::find(bsb.exists.begin(), bsb.exists.end(), x) == bsb.exists.end())
            mm.interp[x] = x == ctx.sb.exists[ctx.sb.exists.size() - 2] ? 1 : 0;
    for (const auto& x : ctx.sb.exists)
        if (!mm.interp.count(x)) throw std::invalid_argument("no witness for " + x);

    const int N = 1 << ctx.alpha;
    out.last = N;
    std::vector<WorldId> worlds;
    for (int w = -1; w <= N; ++w) worlds.push_back(w);
    Frame fr(worlds, jh.n);
    for (int w = -1; w < N; ++w) fr.add_edge(3, w, w + 1);
    fr.add_edge(3, N, N);
    for (int a = -1; a <= N; ++a)
        for (int b = a + 1; b <= N; ++b) fr.add_edge(4, a, b);
    fr.add_edge(4, N, N);
    out.model.frame = fr;
    for (int w = 0; w < N; ++w) out.model.valuation["active"].insert(w);

    auto& base = out.model.aef_base;
    for (int w = -1; w <= N; ++w)
        for (AgentId i : {3, 4}) base.push_back({w, StarExpr{i, ctx.rho(), Formula::meta(0)}});
    for (int w = 0; w < N; ++w) {
        for (int a = 1; a <= ctx.alpha; ++a) base.push_back({w, StarExpr{1, ctx.var(a), ctx.bit(a, (w >> (a - 1)) & 1)}});
        for (const auto& r : relations_of(ctx)) {
            std::vector<int> tuple;
            for (int j = 0; j < arity_of(ctx, r); ++j) tuple.push_back((w >> j) & 1);
            base.push_back({w, StarExpr{1, ctx.rel(r), ctx.rel_atom(r, mm.holds(r, tuple))}});
        }
    }
    const int k = static_cast<int>(ctx.sb.exists.size());
    for (int j = 1; j <= ctx.rho0; ++j) {
        const std::string& v = ctx.z[j - 1];
        for (bool tv : {true, false})
            if (j > k || (mm.interp.at(v) == 1) == tv)
                base.push_back({N, StarExpr{1, ctx.value(v), ctx.truth_atom(j, tv)}});
    }
    for (Formula f : match_conjuncts(ctx)) base.push_back({N, star_of(f)});
    for (Formula f : eval_fo_all(ctx)) base.push_back({N, star_of(f)});
    return out;
}

}  // namespace justec
