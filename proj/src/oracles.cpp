#include "justec/oracles.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace justec {

bool prop_eval(Formula f, const Valuation& v) {
    switch (f.kind()) {
        case FormulaKind::Bottom:
            return false;
        case FormulaKind::Atom:
            return v.at(f.name());
        case FormulaKind::Not:
            return !prop_eval(f.body(), v);
        case FormulaKind::Implies:
            return !prop_eval(f.left(), v) || prop_eval(f.right(), v);
        case FormulaKind::And:
            return prop_eval(f.left(), v) && prop_eval(f.right(), v);
        case FormulaKind::Or:
            return prop_eval(f.left(), v) || prop_eval(f.right(), v);
        default:
            throw std::invalid_argument("prop_eval: not a propositional formula");
    }
}

bool qbf2_eval(const QBF2& q) {
    const std::size_t k = q.exists.size(), k2 = q.forall.size();
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << k); ++a) {
        Valuation v;
        for (std::size_t i = 0; i < k; ++i) v[q.exists[i]] = (a >> i) & 1;
        bool all = true;
        for (std::uint64_t b = 0; all && b < (std::uint64_t{1} << k2); ++b) {
            for (std::size_t i = 0; i < k2; ++i) v[q.forall[i]] = (b >> i) & 1;
            all = prop_eval(q.matrix, v);
        }
        if (all) return true;
    }
    return false;
}

// ------------------------------------------------------------ first order

namespace {

// Generic evaluation: elements are ints, `rel` answers relation atoms.
bool fo_eval(const SBFormula& sb, Formula f, const std::map<std::string, int>& asg,
             const std::function<bool(const std::string&, const std::vector<int>&)>& rel) {
    switch (f.kind()) {
        case FormulaKind::Bottom:
            return false;
        case FormulaKind::Atom: {
            const FoAtom& a = sb.atoms.at(f.name());
            if (a.equality) return asg.at(a.args[0]) == asg.at(a.args[1]);
            std::vector<int> tuple;
            for (const auto& z : a.args) tuple.push_back(asg.at(z));
            return rel(a.relation, tuple);
        }
        case FormulaKind::Not:
            return !fo_eval(sb, f.body(), asg, rel);
        case FormulaKind::Implies:
            return !fo_eval(sb, f.left(), asg, rel) || fo_eval(sb, f.right(), asg, rel);
        case FormulaKind::And:
            return fo_eval(sb, f.left(), asg, rel) && fo_eval(sb, f.right(), asg, rel);
        case FormulaKind::Or:
            return fo_eval(sb, f.left(), asg, rel) || fo_eval(sb, f.right(), asg, rel);
        default:
            throw std::invalid_argument("first-order matrix contains a non-propositional connective");
    }
}

std::uint64_t ipow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// ∃ (free existentials) ∀ universals over a universe of `size` elements.
// Returns the witnessing assignment of the free existentials.
std::optional<std::map<std::string, int>> sentence_witness(
    const SBFormula& sb, int size, const std::map<std::string, int>& fixed,
    const std::function<bool(const std::string&, const std::vector<int>&)>& rel) {
    std::vector<std::string> free;
    for (const auto& x : sb.exists)
        if (!fixed.count(x)) free.push_back(x);
    const std::uint64_t ne = ipow(size, static_cast<int>(free.size()));
    const std::uint64_t nu = ipow(size, static_cast<int>(sb.forall.size()));
    std::map<std::string, int> asg = fixed;
    for (std::uint64_t a = 0; a < ne; ++a) {
        std::uint64_t c = a;
        for (const auto& x : free) {
            asg[x] = static_cast<int>(c % size);
            c /= size;
        }
        bool all = true;
        for (std::uint64_t b = 0; all && b < nu; ++b) {
            std::uint64_t d = b;
            for (const auto& y : sb.forall) {
                asg[y] = static_cast<int>(d % size);
                d /= size;
            }
            all = fo_eval(sb, sb.matrix, asg, rel);
        }
        if (all) {
            std::map<std::string, int> out = fixed;
            for (const auto& x : free) out[x] = asg[x];
            return out;
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<TwoElementModel> bsb_models(const SBFormula& sb) {
    std::size_t bits = 0;
    for (const auto& r : sb.relation_order) bits += std::size_t{1} << sb.arity.at(r);
    if (bits > 24) throw std::invalid_argument("bsb_models: signature too large for enumeration");
    std::vector<TwoElementModel> out;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
        TwoElementModel m;
        std::size_t at = 0;
        for (const auto& r : sb.relation_order) {
            std::size_t n = std::size_t{1} << sb.arity.at(r);
            std::vector<bool> t(n);
            for (std::size_t i = 0; i < n; ++i) t[i] = (code >> (at + i)) & 1;
            at += n;
            m.tables[r] = std::move(t);
        }
        out.push_back(std::move(m));
    }
    return out;
}

bool fol2_eval(const SBFormula& sb, const TwoElementModel& m) {
    std::map<std::string, int> fixed;
    for (const auto& x : sb.exists)
        if (auto it = m.interp.find(x); it != m.interp.end()) fixed[x] = it->second;
    auto rel = [&](const std::string& r, const std::vector<int>& t) { return m.holds(r, t); };
    return sentence_witness(sb, 2, fixed, rel).has_value();
}

std::optional<TwoElementModel> bsb_sat(const SBFormula& sb) {
    for (auto& m : bsb_models(sb)) {
        auto rel = [&](const std::string& r, const std::vector<int>& t) { return m.holds(r, t); };
        if (auto w = sentence_witness(sb, 2, {}, rel)) {
            m.interp = *w;
            return m;
        }
    }
    return std::nullopt;
}

std::optional<int> sb_sat_upto(const SBFormula& sb, int max_elements) {
    for (int size = 1; size <= max_elements; ++size) {
        std::vector<std::uint64_t> cells;
        std::uint64_t bits = 0;
        for (const auto& r : sb.relation_order) {
            cells.push_back(ipow(size, sb.arity.at(r)));
            bits += cells.back();
        }
        if (bits > 24) throw std::invalid_argument("sb_sat_upto: signature too large for enumeration");
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
            auto rel = [&](const std::string& r, const std::vector<int>& t) {
                std::uint64_t at = 0;
                for (std::size_t k = 0; k < sb.relation_order.size(); ++k) {
                    if (sb.relation_order[k] == r) break;
                    at += cells[k];
                }
                std::uint64_t idx = 0;
                for (std::size_t j = t.size(); j-- > 0;) idx = idx * size + t[j];
                return ((code >> (at + idx)) & 1) != 0;
            };
            if (sentence_witness(sb, size, {}, rel)) return size;
        }
    }
    return std::nullopt;
}

// ------------------------------------------------------------ forward closure

namespace {

bool plain_term(Term t) {
    switch (t.kind()) {
        case TermKind::Variable:
            return true;
        case TermKind::App:
        case TermKind::Sum:
            return plain_term(t.left()) && plain_term(t.right());
        default:
            return false;
    }
}

}  // namespace

std::set<StarExpr> star_forward_closure(const LogicSpec& spec, const std::vector<StarExpr>& premises,
                                        const std::vector<Term>& terms) {
    for (const auto& p : premises)
        if (!plain_term(p.term) || !p.formula.is_ground())
            throw std::invalid_argument("forward closure only covers ground, !-free, constant-free inputs");
    std::vector<Term> universe;
    for (Term t : terms) {
        if (!plain_term(t)) throw std::invalid_argument("forward closure universe must be !-free and constant-free");
        collect_subterms(t, universe);
    }
    std::sort(universe.begin(), universe.end(),
              [](Term a, Term b) { return a.size() < b.size() || (a.size() == b.size() && a < b); });

    std::map<Term, std::set<std::pair<AgentId, Formula>>> facts;
    std::set<StarExpr> out(premises.begin(), premises.end());
    for (const auto& p : premises) facts[p.term].insert({p.agent, p.formula});

    for (Term t : universe) {
        auto& mine = facts[t];
        if (t.kind() == TermKind::Sum) {
            for (Term part : {t.left(), t.right()})
                for (const auto& f : facts[part]) mine.insert(f);
        } else if (t.kind() == TermKind::App) {
            const auto& ls = facts[t.left()];
            const auto& rs = facts[t.right()];
            for (const auto& [i, f] : ls) {
                if (f.kind() != FormulaKind::Implies) continue;
                if (rs.count({i, f.left()})) mine.insert({i, f.right()});
            }
        }
        // conversion: j ⊂ h turns agent-h facts into agent-j facts
        bool grew = true;
        while (grew) {
            grew = false;
            for (auto [j, h] : spec.subset)
                for (const auto& [i, f] : std::vector<std::pair<AgentId, Formula>>(mine.begin(), mine.end()))
                    if (i == h && mine.insert({j, f}).second) grew = true;
        }
        for (const auto& [i, f] : mine) out.insert(StarExpr{i, t, f});
    }
    return out;
}

// ------------------------------------------------------------ M_H enumeration

namespace {

enum Tri : signed char { kFalse = 0, kTrue = 1, kUnknown = 2 };

struct KripkeSearch {
    Formula root;
    int s = 1;
    std::vector<std::string> atoms;
    bool enumerated[kMhAgents + 1] = {};
    // rel[i][a * s + b], val[atom * s + w]; -1 undecided
    std::vector<signed char> rel[kMhAgents + 1];
    std::vector<signed char> val;
    std::vector<std::pair<int, int>> order;  // (kind, index): kind 0 val, kind i relation i
    std::optional<KripkeModel> found;

    signed char r(int i, int a, int b) const { return rel[i][a * s + b]; }

    // Three-valued truth under the partial assignment; `pick` receives the
    // first undecided cell the evaluation depended on.
    Tri eval(Formula f, int w, signed char*& pick) {
        switch (f.kind()) {
            case FormulaKind::Bottom:
                return kFalse;
            case FormulaKind::Atom: {
                int k = static_cast<int>(std::find(atoms.begin(), atoms.end(), f.name()) - atoms.begin());
                signed char& v = val[k * s + w];
                if (v < 0 && !pick) pick = &v;
                return v < 0 ? kUnknown : v ? kTrue : kFalse;
            }
            case FormulaKind::Not: {
                Tri x = eval(f.body(), w, pick);
                return x == kUnknown ? kUnknown : x == kTrue ? kFalse : kTrue;
            }
            case FormulaKind::And: {
                Tri a = eval(f.left(), w, pick);
                if (a == kFalse) return kFalse;
                Tri b = eval(f.right(), w, pick);
                if (b == kFalse) return kFalse;
                return a == kTrue && b == kTrue ? kTrue : kUnknown;
            }
            case FormulaKind::Or: {
                Tri a = eval(f.left(), w, pick);
                if (a == kTrue) return kTrue;
                Tri b = eval(f.right(), w, pick);
                if (b == kTrue) return kTrue;
                return a == kFalse && b == kFalse ? kFalse : kUnknown;
            }
            case FormulaKind::Implies: {
                Tri a = eval(f.left(), w, pick);
                if (a == kFalse) return kTrue;
                Tri b = eval(f.right(), w, pick);
                if (b == kTrue) return kTrue;
                return a == kTrue && b == kFalse ? kFalse : kUnknown;
            }
            case FormulaKind::Box:
            case FormulaKind::Diamond: {
                bool box = f.kind() == FormulaKind::Box;
                // box: false if a definite successor falsifies, true if every
                // possible successor satisfies. Diamond dually.
                Tri acc = box ? kTrue : kFalse;
                for (int b = 0; b < s; ++b) {
                    signed char& e = rel[f.agent()][w * s + b];
                    if (e == 0) continue;
                    if (e < 0 && !pick) pick = &e;
                    Tri x = eval(f.body(), b, pick);
                    Tri hit = box ? kFalse : kTrue;
                    if (x == hit) {
                        if (e == 1) return hit;
                        acc = kUnknown;
                    } else if (x == kUnknown) {
                        acc = kUnknown;
                    }
                }
                return acc;
            }
            default:
                throw std::invalid_argument("kripke_mh_sat: not a modal formula");
        }
    }

    // Completes the relations of agents absent from the formula and checks
    // the result. Absent 1 and 2 are empty. An absent 3 takes every R4
    // successor b with R2(b) ⊆ R2(a) (the identity when 4 is absent too); an
    // absent 4 is the transitive closure of R3. Each choice is without loss
    // of generality for the formula's truth.
    bool build(const std::vector<signed char>* R, const std::vector<signed char>& V) {
        auto edge = [&](int i, int a, int b) { return R[i][a * s + b] == 1; };
        std::vector<std::vector<char>> full(kMhAgents + 1, std::vector<char>(s * s, 0));
        for (int i = 1; i <= kMhAgents; ++i)
            if (enumerated[i])
                for (int k = 0; k < s * s; ++k) full[i][k] = R[i][k] == 1;
        if (!enumerated[3]) {
            for (int a = 0; a < s; ++a) {
                bool any = false;
                for (int b = 0; b < s; ++b) {
                    bool ok = enumerated[4] ? edge(4, a, b) : a == b;
                    for (int c = 0; ok && c < s; ++c)
                        if (full[2][b * s + c] && !full[2][a * s + c]) ok = false;
                    full[3][a * s + b] = ok;
                    any = any || ok;
                }
                if (!any) return false;
            }
        }
        if (!enumerated[4]) {
            full[4] = full[3];
            for (int k = 0; k < s; ++k)
                for (int a = 0; a < s; ++a)
                    for (int b = 0; b < s; ++b)
                        if (full[4][a * s + k] && full[4][k * s + b]) full[4][a * s + b] = 1;
        }
        KripkeModel m;
        std::vector<WorldId> ws;
        for (int w = 0; w < s; ++w) ws.push_back(w);
        m.frame = Frame(ws, kMhAgents);
        for (int i = 1; i <= kMhAgents; ++i)
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b)
                    if (full[i][a * s + b]) m.frame.add_edge(i, a, b);
        for (std::size_t a = 0; a < atoms.size(); ++a)
            for (int w = 0; w < s; ++w)
                if (V[a * s + w] == 1) m.valuation[atoms[a]].insert(w);
        if (!mh_frame_violations(m.frame).empty() || !modal_eval(m, 0, root)) return false;
        found = std::move(m);
        return true;
    }

    // Frame conditions over decided bits only.
    bool frame_ok() const {
        for (int i : {3, 4}) {
            if (!enumerated[i]) continue;
            for (int a = 0; a < s; ++a) {
                bool any = false, all_decided = true;
                for (int b = 0; b < s; ++b) {
                    any = any || r(i, a, b) == 1;
                    all_decided = all_decided && r(i, a, b) >= 0;
                }
                if (all_decided && !any) return false;
            }
        }
        if (enumerated[3] && enumerated[4])
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b)
                    if (r(3, a, b) == 1 && r(4, a, b) == 0) return false;
        // a R_j b R_i c ⇒ a R_i c for (i, j) in {(1,2), (2,3), (4,4)}
        const int pairs[3][2] = {{1, 2}, {2, 3}, {4, 4}};
        for (auto [i, j] : pairs) {
            if (!enumerated[i] || !enumerated[j]) continue;
            for (int a = 0; a < s; ++a)
                for (int b = 0; b < s; ++b) {
                    if (r(j, a, b) != 1) continue;
                    for (int c = 0; c < s; ++c)
                        if (r(i, b, c) == 1 && r(i, a, c) == 0) return false;
                }
        }
        return true;
    }

    // Once the root formula is settled true, any frame-respecting completion
    // will do: undecided bits go to 0, then edges forced by the closure
    // conditions and by seriality are added.
    bool try_complete() {
        std::vector<signed char> R[kMhAgents + 1];
        for (int i = 1; i <= kMhAgents; ++i) {
            R[i] = rel[i];
            for (auto& x : R[i]) x = x < 0 ? 2 : x;  // 2: free zero
        }
        auto raise = [&](int i, int a, int b, bool& changed) {
            signed char& x = R[i][a * s + b];
            if (x == 1) return true;
            if (x == 0) return false;
            x = 1;
            changed = true;
            return true;
        };
        const int pairs[3][2] = {{1, 2}, {2, 3}, {4, 4}};
        bool changed = true;
        while (changed) {
            changed = false;
            if (enumerated[3] && enumerated[4])
                for (int k = 0; k < s * s; ++k)
                    if (R[3][k] == 1 && !raise(4, k / s, k % s, changed)) return false;
            for (auto [i, j] : pairs) {
                if (!enumerated[i] || !enumerated[j]) continue;
                for (int a = 0; a < s; ++a)
                    for (int b = 0; b < s; ++b) {
                        if (R[j][a * s + b] != 1) continue;
                        for (int c = 0; c < s; ++c)
                            if (R[i][b * s + c] == 1 && !raise(i, a, c, changed)) return false;
                    }
            }
            for (int i : {3, 4}) {
                if (!enumerated[i]) continue;
                for (int a = 0; a < s; ++a) {
                    bool any = false;
                    for (int b = 0; b < s; ++b) any = any || R[i][a * s + b] == 1;
                    if (any) continue;
                    int pick = R[i][a * s + a] == 2 ? a : -1;
                    for (int b = 0; pick < 0 && b < s; ++b)
                        if (R[i][a * s + b] == 2) pick = b;
                    if (pick < 0) return false;
                    raise(i, a, pick, changed);
                }
            }
        }
        for (int i = 1; i <= kMhAgents; ++i)
            for (auto& x : R[i]) x = x == 2 ? 0 : x;
        std::vector<signed char> V = val;
        for (auto& x : V) x = x < 0 ? 0 : x;
        return build(R, V);
    }

    std::vector<signed char*> trail;

    bool force(signed char& x, signed char v, bool& changed) {
        if (x == v) return true;
        if (x >= 0) return false;
        x = v;
        trail.push_back(&x);
        changed = true;
        return true;
    }

    // Unit propagation of the closure conditions; false on conflict.
    bool propagate() {
        const int pairs[3][2] = {{1, 2}, {2, 3}, {4, 4}};
        bool changed = true;
        while (changed) {
            changed = false;
            if (enumerated[3] && enumerated[4])
                for (int k = 0; k < s * s; ++k) {
                    if (rel[3][k] == 1 && !force(rel[4][k], 1, changed)) return false;
                    if (rel[4][k] == 0 && !force(rel[3][k], 0, changed)) return false;
                }
            for (auto [i, j] : pairs) {
                if (!enumerated[i] || !enumerated[j]) continue;
                for (int a = 0; a < s; ++a)
                    for (int b = 0; b < s; ++b)
                        for (int c = 0; c < s; ++c) {
                            signed char& ab = rel[j][a * s + b];
                            signed char& bc = rel[i][b * s + c];
                            signed char& ac = rel[i][a * s + c];
                            if (ab == 1 && bc == 1 && !force(ac, 1, changed)) return false;
                            if (ac == 0 && ab == 1 && !force(bc, 0, changed)) return false;
                            if (ac == 0 && bc == 1 && !force(ab, 0, changed)) return false;
                        }
            }
        }
        return true;
    }

    // Branches first on the cells the root's truth depends on; once it is
    // settled true and the greedy completion fails, on the rest in order.
    bool dfs() {
        signed char* pick = nullptr;
        Tri t = eval(root, 0, pick);
        if (t == kFalse) return false;
        if (t == kTrue) {
            if (try_complete()) return true;
            pick = nullptr;
        }
        if (!pick)
            for (auto [kind, idx] : order) {
                signed char& c = kind == 0 ? val[idx] : rel[kind][idx];
                if (c < 0) {
                    pick = &c;
                    break;
                }
            }
        if (!pick) return false;
        for (signed char v : {0, 1}) {
            const std::size_t mark = trail.size();
            *pick = v;
            trail.push_back(pick);
            bool ok = propagate() && frame_ok() && dfs();
            while (trail.size() > mark) {
                *trail.back() = -1;
                trail.pop_back();
            }
            if (ok) return true;
        }
        return false;
    }
};

void mark_agents(Formula f, bool* used) {
    switch (f.kind()) {
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            used[f.agent()] = true;
            mark_agents(f.body(), used);
            return;
        case FormulaKind::Not:
            mark_agents(f.body(), used);
            return;
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            mark_agents(f.left(), used);
            mark_agents(f.right(), used);
            return;
        default:
            return;
    }
}

}  // namespace

std::optional<std::pair<KripkeModel, WorldId>> kripke_mh_sat(ModalFormula f, int max_states) {
    if (!is_modal_formula(f)) throw std::invalid_argument("kripke_mh_sat: not an M_H formula");
    for (int s = 1; s <= max_states; ++s) {
        KripkeSearch ks;
        ks.root = f;
        ks.s = s;
        collect_atoms(f, ks.atoms);
        mark_agents(f, ks.enumerated);
        for (int i = 0; i <= kMhAgents; ++i) ks.rel[i].assign(s * s, -1);
        ks.val.assign(ks.atoms.size() * s, -1);
        for (int w = 0; w < s; ++w) {
            for (std::size_t a = 0; a < ks.atoms.size(); ++a) ks.order.push_back({0, static_cast<int>(a) * s + w});
            for (int i = 1; i <= kMhAgents; ++i)
                if (ks.enumerated[i])
                    for (int b = 0; b < s; ++b) ks.order.push_back({i, w * s + b});
        }
        for (int i = 1; i <= kMhAgents; ++i)
            if (!ks.enumerated[i]) std::fill(ks.rel[i].begin(), ks.rel[i].end(), 0);
        if (ks.dfs()) return std::make_pair(*ks.found, WorldId{0});
    }
    return std::nullopt;
}

}  // namespace justec
