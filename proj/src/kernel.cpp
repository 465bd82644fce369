#include <algorithm>
#include <functional>

#include "justec/kernel.hpp"

namespace justec {

// ------------------------------------------------------------ catalog

namespace {

SchemePattern make_scheme(std::string id, Formula skeleton, AgentId a = 0, AgentId b = 0) {
    SchemePattern p;
    p.id = std::move(id);
    p.skeleton = skeleton;
    p.formula_metas = max_meta_id(skeleton) + 1;
    // term metas are tracked separately; schemes use at most two
    std::function<int(Formula)> tmax = [&](Formula f) -> int {
        if (f.is_ground()) return -1;
        switch (f.kind()) {
            case FormulaKind::Just:
                return std::max(max_meta_id(f.term()), tmax(f.body()));
            case FormulaKind::Not:
            case FormulaKind::Box:
            case FormulaKind::Diamond:
                return tmax(f.body());
            case FormulaKind::Implies:
            case FormulaKind::And:
            case FormulaKind::Or:
                return std::max(tmax(f.left()), tmax(f.right()));
            default:
                return -1;
        }
    };
    p.term_metas = tmax(skeleton) + 1;
    p.agent = a;
    p.agent2 = b;
    return p;
}

}  // namespace

std::vector<SchemePattern> axiom_schemes(const LogicSpec& spec) {
    using F = Formula;
    const F A = F::meta(0), B = F::meta(1), C = F::meta(2), A2 = F::meta(3);
    const Term s = Term::meta(0), t = Term::meta(1);
    auto imp = [](F x, F y) { return F::implies(x, y); };
    auto neg = [](F x) { return F::negation(x); };
    auto con = [](F x, F y) { return F::conj(x, y); };
    auto dis = [](F x, F y) { return F::disj(x, y); };
    const F bot = F::bottom();

    std::vector<SchemePattern> out;
    out.push_back(make_scheme("P1", imp(A, imp(B, A))));
    out.push_back(make_scheme("P2", imp(imp(A, imp(B, C)), imp(imp(A, B), imp(A, C)))));
    out.push_back(make_scheme("P3", imp(imp(neg(A), neg(B)), imp(B, A))));
    out.push_back(make_scheme("P4", imp(con(A, B), A)));
    out.push_back(make_scheme("P5", imp(con(A, B), B)));
    out.push_back(make_scheme("P6", imp(A, imp(B, con(A, B)))));
    out.push_back(make_scheme("P7", imp(A, dis(A, B))));
    out.push_back(make_scheme("P8", imp(B, dis(A, B))));
    out.push_back(make_scheme("P9", imp(imp(A, C), imp(imp(B, C), imp(dis(A, B), C)))));
    out.push_back(make_scheme("P10", imp(bot, A)));
    out.push_back(make_scheme("P11", imp(A, imp(neg(A), bot))));
    out.push_back(make_scheme("P12", imp(imp(A, bot), neg(A))));
    // Tautology schemes backing the standard terms of the reductions.
    out.push_back(make_scheme("Id", imp(A, A)));
    out.push_back(make_scheme("Tran", imp(imp(A, B), imp(imp(B, C), imp(A, C)))));
    out.push_back(make_scheme("HypAppend", imp(imp(A, B), imp(A, con(A, B)))));
    out.push_back(make_scheme("AppendConc", imp(imp(A, B), imp(imp(A, C), imp(A, con(B, C))))));
    out.push_back(make_scheme("ReplaceLeft", imp(imp(A, A2), imp(con(A, B), con(A2, B)))));
    out.push_back(make_scheme("ReplaceRight", imp(imp(B, A2), imp(con(A, B), con(A, A2)))));
    out.push_back(make_scheme("MpHypoth", imp(imp(A, B), imp(imp(A, imp(B, C)), imp(A, C)))));

    for (AgentId i = 1; i <= spec.n; ++i) {
        std::string k = std::to_string(i);
        out.push_back(make_scheme(
            "App_" + k,
            imp(F::just(s, i, imp(A, B)), imp(F::just(t, i, A), F::just(Term::app(s, t), i, B))), i));
        out.push_back(make_scheme("SumL_" + k, imp(F::just(s, i, A), F::just(Term::sum(s, t), i, A)), i));
        out.push_back(make_scheme("SumR_" + k, imp(F::just(t, i, A), F::just(Term::sum(s, t), i, A)), i));
        if (spec.logic(i) == BaseLogic::JT)
            out.push_back(make_scheme("Fact_" + k, imp(F::just(t, i, A), A), i));
        if (spec.logic(i) == BaseLogic::JD)
            out.push_back(make_scheme("Cons_" + k, imp(F::just(t, i, bot), bot), i));
    }
    // Conversion for i ⊃ j, i.e. (j, i) in ⊂: t:_i A -> t:_j A.
    for (auto [j, i] : spec.subset)
        out.push_back(make_scheme("Conv_" + std::to_string(i) + "_" + std::to_string(j),
                                  imp(F::just(t, i, A), F::just(t, j, A)), i, j));
    // Verification for i ↩ j, i.e. (j, i) in ↪: t:_i A -> !t:_j t:_i A.
    for (auto [j, i] : spec.hook)
        out.push_back(make_scheme("Ver_" + std::to_string(i) + "_" + std::to_string(j),
                                  imp(F::just(t, i, A), F::just(Term::bang(t), j, F::just(t, i, A))),
                                  i, j));
    return out;
}

const SchemePattern* find_scheme(const std::vector<SchemePattern>& catalog,
                                 const std::string& id) {
    for (const auto& s : catalog)
        if (s.id == id) return &s;
    return nullptr;
}

// ------------------------------------------------------------ substitution

Term Substitution::apply(Term t) const {
    if (t.is_ground()) return t;
    switch (t.kind()) {
        case TermKind::Meta: {
            auto it = terms.find(t.meta_id());
            return it == terms.end() ? t : apply(it->second);
        }
        case TermKind::App:
            return Term::app(apply(t.left()), apply(t.right()));
        case TermKind::Sum:
            return Term::sum(apply(t.left()), apply(t.right()));
        case TermKind::Bang:
            return Term::bang(apply(t.inner()));
        default:
            return t;
    }
}

Formula Substitution::apply(Formula f) const {
    if (f.is_ground()) return f;
    switch (f.kind()) {
        case FormulaKind::Meta: {
            auto it = formulas.find(f.meta_id());
            return it == formulas.end() ? f : apply(it->second);
        }
        case FormulaKind::Not:
            return Formula::negation(apply(f.body()));
        case FormulaKind::Box:
            return Formula::box(f.agent(), apply(f.body()));
        case FormulaKind::Diamond:
            return Formula::diamond(f.agent(), apply(f.body()));
        case FormulaKind::Just:
            return Formula::just(apply(f.term()), f.agent(), apply(f.body()));
        case FormulaKind::Implies:
            return Formula::implies(apply(f.left()), apply(f.right()));
        case FormulaKind::And:
            return Formula::conj(apply(f.left()), apply(f.right()));
        case FormulaKind::Or:
            return Formula::disj(apply(f.left()), apply(f.right()));
        default:
            return f;
    }
}

// ------------------------------------------------------------ unifier

Term Unifier::walk(Term t) const {
    while (t.kind() == TermKind::Meta) {
        auto it = tbind_.find(t.meta_id());
        if (it == tbind_.end()) break;
        t = it->second;
    }
    return t;
}

Formula Unifier::walk(Formula f) const {
    while (f.kind() == FormulaKind::Meta) {
        auto it = fbind_.find(f.meta_id());
        if (it == fbind_.end()) break;
        f = it->second;
    }
    return f;
}

bool Unifier::occurs_term(int id, Term t) const {
    t = walk(t);
    if (t.is_ground()) return false;
    switch (t.kind()) {
        case TermKind::Meta:
            return t.meta_id() == id;
        case TermKind::App:
        case TermKind::Sum:
            return occurs_term(id, t.left()) || occurs_term(id, t.right());
        case TermKind::Bang:
            return occurs_term(id, t.inner());
        default:
            return false;
    }
}

bool Unifier::occurs(int id, Formula f) const {
    f = walk(f);
    if (f.is_ground()) return false;
    switch (f.kind()) {
        case FormulaKind::Meta:
            return f.meta_id() == id;
        case FormulaKind::Not:
        case FormulaKind::Box:
        case FormulaKind::Diamond:
        case FormulaKind::Just:
            return occurs(id, f.body());
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            return occurs(id, f.left()) || occurs(id, f.right());
        default:
            return false;
    }
}

bool Unifier::occurs_term_in_formula(int id, Formula f) const {
    f = walk(f);
    if (f.is_ground()) return false;
    switch (f.kind()) {
        case FormulaKind::Just:
            return occurs_term(id, f.term()) || occurs_term_in_formula(id, f.body());
        case FormulaKind::Not:
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            return occurs_term_in_formula(id, f.body());
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            return occurs_term_in_formula(id, f.left()) || occurs_term_in_formula(id, f.right());
        default:
            return false;
    }
}

bool Unifier::unify(Term a, Term b) {
    a = walk(a);
    b = walk(b);
    if (a == b) return true;
    if (b.kind() == TermKind::Meta && a.kind() != TermKind::Meta) std::swap(a, b);
    if (a.kind() == TermKind::Meta) {
        if (occurs_term(a.meta_id(), b)) return false;
        tbind_.emplace(a.meta_id(), b);
        trail_.emplace_back(false, a.meta_id());
        return true;
    }
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case TermKind::App:
        case TermKind::Sum:
            return unify(a.left(), b.left()) && unify(a.right(), b.right());
        case TermKind::Bang:
            return unify(a.inner(), b.inner());
        default:
            return false;  // distinct leaves (interned, so names differ)
    }
}

bool Unifier::unify(Formula a, Formula b) {
    a = walk(a);
    b = walk(b);
    if (a == b) return true;
    if (b.kind() == FormulaKind::Meta && a.kind() != FormulaKind::Meta) std::swap(a, b);
    if (a.kind() == FormulaKind::Meta) {
        if (occurs(a.meta_id(), b)) return false;
        fbind_.emplace(a.meta_id(), b);
        trail_.emplace_back(true, a.meta_id());
        return true;
    }
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case FormulaKind::Not:
            return unify(a.body(), b.body());
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            return a.agent() == b.agent() && unify(a.body(), b.body());
        case FormulaKind::Just:
            return a.agent() == b.agent() && unify(a.term(), b.term()) && unify(a.body(), b.body());
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            return unify(a.left(), b.left()) && unify(a.right(), b.right());
        default:
            return false;
    }
}

void Unifier::undo(std::size_t mark) {
    while (trail_.size() > mark) {
        auto [is_formula, id] = trail_.back();
        trail_.pop_back();
        if (is_formula) fbind_.erase(id);
        else tbind_.erase(id);
    }
}

Term Unifier::resolve(Term t) const {
    if (t.is_ground()) return t;
    t = walk(t);
    switch (t.kind()) {
        case TermKind::App:
            return Term::app(resolve(t.left()), resolve(t.right()));
        case TermKind::Sum:
            return Term::sum(resolve(t.left()), resolve(t.right()));
        case TermKind::Bang:
            return Term::bang(resolve(t.inner()));
        default:
            return t;
    }
}

Formula Unifier::resolve(Formula f) const {
    if (f.is_ground()) return f;
    f = walk(f);
    if (f.is_ground()) return f;
    switch (f.kind()) {
        case FormulaKind::Not:
            return Formula::negation(resolve(f.body()));
        case FormulaKind::Box:
            return Formula::box(f.agent(), resolve(f.body()));
        case FormulaKind::Diamond:
            return Formula::diamond(f.agent(), resolve(f.body()));
        case FormulaKind::Just:
            return Formula::just(resolve(f.term()), f.agent(), resolve(f.body()));
        case FormulaKind::Implies:
            return Formula::implies(resolve(f.left()), resolve(f.right()));
        case FormulaKind::And:
            return Formula::conj(resolve(f.left()), resolve(f.right()));
        case FormulaKind::Or:
            return Formula::disj(resolve(f.left()), resolve(f.right()));
        default:
            return f;
    }
}

Substitution Unifier::snapshot() const {
    Substitution s;
    for (const auto& [id, f] : fbind_) s.formulas.emplace(id, resolve(f));
    for (const auto& [id, t] : tbind_) s.terms.emplace(id, resolve(t));
    return s;
}

Term shift_metas(Term t, int offset) {
    if (t.is_ground() || offset == 0) return t;
    switch (t.kind()) {
        case TermKind::Meta:
            return Term::meta(t.meta_id() + offset);
        case TermKind::App:
            return Term::app(shift_metas(t.left(), offset), shift_metas(t.right(), offset));
        case TermKind::Sum:
            return Term::sum(shift_metas(t.left(), offset), shift_metas(t.right(), offset));
        case TermKind::Bang:
            return Term::bang(shift_metas(t.inner(), offset));
        default:
            return t;
    }
}

Formula shift_metas(Formula f, int offset) {
    if (f.is_ground() || offset == 0) return f;
    switch (f.kind()) {
        case FormulaKind::Meta:
            return Formula::meta(f.meta_id() + offset);
        case FormulaKind::Not:
            return Formula::negation(shift_metas(f.body(), offset));
        case FormulaKind::Box:
            return Formula::box(f.agent(), shift_metas(f.body(), offset));
        case FormulaKind::Diamond:
            return Formula::diamond(f.agent(), shift_metas(f.body(), offset));
        case FormulaKind::Just:
            return Formula::just(shift_metas(f.term(), offset), f.agent(),
                                 shift_metas(f.body(), offset));
        case FormulaKind::Implies:
            return Formula::implies(shift_metas(f.left(), offset), shift_metas(f.right(), offset));
        case FormulaKind::And:
            return Formula::conj(shift_metas(f.left(), offset), shift_metas(f.right(), offset));
        case FormulaKind::Or:
            return Formula::disj(shift_metas(f.left(), offset), shift_metas(f.right(), offset));
        default:
            return f;
    }
}

std::optional<Substitution> unify(Formula a, Formula b) {
    Unifier u;
    if (!u.unify(a, b)) return std::nullopt;
    return u.snapshot();
}

std::optional<Substitution> match_scheme(const SchemePattern& pattern, Formula formula) {
    Unifier u;
    if (!u.unify(pattern.skeleton, formula)) return std::nullopt;
    return u.snapshot();
}

// ------------------------------------------------------------ AN

bool an_holds(const LogicSpec& spec, const std::vector<SchemePattern>& catalog,
              AgentId agent, Term term, Formula formula) {
    if (term.kind() == TermKind::Constant) {
        for (const auto& s : catalog)
            if (spec.cs_justifies(term.name(), agent, s.id) && match_scheme(s, formula))
                return true;
        return false;
    }
    if (term.kind() == TermKind::Bang && formula.kind() == FormulaKind::Just &&
        formula.term() == term.inner()) {
        if (spec.an_restrict && !spec.is_hook(agent, formula.agent())) return false;
        return an_holds(spec, catalog, formula.agent(), term.inner(), formula.body());
    }
    return false;
}

bool an_holds(const LogicSpec& spec, AgentId agent, Term term, Formula formula) {
    return an_holds(spec, axiom_schemes(spec), agent, term, formula);
}

// ------------------------------------------------------------ Hilbert proofs

ProofCheck check_hilbert_proof(const LogicSpec& spec, const HilbertProof& proof) {
    auto catalog = axiom_schemes(spec);
    auto bad = [](int i, std::string why) { return ProofCheck{false, i, std::move(why)}; };
    for (int i = 0; i < static_cast<int>(proof.lines.size()); ++i) {
        const HilbertLine& line = proof.lines[i];
        if (line.formula.is_null() || !line.formula.is_ground())
            return bad(i, "line formula missing or not ground");
        switch (line.kind) {
            case HilbertLine::Kind::Axiom: {
                if (line.scheme.empty()) {
                    bool any = false;
                    for (const auto& s : catalog) any = any || match_scheme(s, line.formula).has_value();
                    if (!any) return bad(i, "not an instance of any catalog scheme");
                    break;
                }
                const SchemePattern* s = find_scheme(catalog, line.scheme);
                if (!s) return bad(i, "unknown scheme " + line.scheme);
                if (!line.subst.empty()) {
                    if (line.subst.apply(s->skeleton) != line.formula)
                        return bad(i, "substitution does not produce the line");
                } else if (!match_scheme(*s, line.formula)) {
                    return bad(i, "not an instance of " + line.scheme);
                }
                break;
            }
            case HilbertLine::Kind::AN: {
                Formula f = line.formula;
                if (f.kind() != FormulaKind::Just || f.agent() < 1 || f.agent() > spec.n ||
                    !an_holds(spec, catalog, f.agent(), f.term(), f.body()))
                    return bad(i, "not an AN instance");
                break;
            }
            case HilbertLine::Kind::ModusPonens: {
                if (line.major < 0 || line.major >= i || line.minor < 0 || line.minor >= i)
                    return bad(i, "modus ponens must cite earlier lines");
                Formula maj = proof.lines[line.major].formula;
                if (maj.kind() != FormulaKind::Implies ||
                    maj.left() != proof.lines[line.minor].formula || maj.right() != line.formula)
                    return bad(i, "modus ponens sources do not match");
                break;
            }
        }
    }
    return {};
}

Term internalize(const LogicSpec& spec, AgentId agent, const HilbertProof& proof) {
    if (proof.lines.empty()) throw SpecError("internalize: empty proof");
    ProofCheck pc = check_hilbert_proof(spec, proof);
    if (!pc.ok)
        throw SpecError("internalize: line " + std::to_string(pc.bad_line + 1) + ": " + pc.reason);
    auto catalog = axiom_schemes(spec);
    auto constants = spec.cs_constants();
    std::vector<Term> terms;
    for (std::size_t i = 0; i < proof.lines.size(); ++i) {
        const HilbertLine& line = proof.lines[i];
        switch (line.kind) {
            case HilbertLine::Kind::Axiom: {
                std::vector<std::string> ids;
                if (!line.scheme.empty()) ids.push_back(line.scheme);
                else
                    for (const auto& s : catalog)
                        if (match_scheme(s, line.formula)) ids.push_back(s.id);
                Term found;
                for (const auto& id : ids) {
                    for (const auto& c : constants)
                        if (spec.cs_justifies(c, agent, id)) {
                            found = Term::constant(c);
                            break;
                        }
                    if (!found.is_null()) break;
                }
                if (found.is_null())
                    throw SpecError("internalize: no constant justifies line " +
                                    std::to_string(i + 1) + " for agent " + std::to_string(agent));
                terms.push_back(found);
                break;
            }
            case HilbertLine::Kind::AN:
                terms.push_back(Term::bang(line.formula.term()));
                break;
            case HilbertLine::Kind::ModusPonens:
                terms.push_back(Term::app(terms[line.major], terms[line.minor]));
                break;
        }
    }
    return terms.back();
}

}  // namespace justec
