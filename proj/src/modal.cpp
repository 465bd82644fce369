#include "justec/modal.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace justec {

bool is_modal_formula(Formula f, int agents) {
    switch (f.kind()) {
        case FormulaKind::Bottom:
        case FormulaKind::Atom:
            return true;
        case FormulaKind::Not:
            return is_modal_formula(f.body(), agents);
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            return is_modal_formula(f.left(), agents) && is_modal_formula(f.right(), agents);
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            return f.agent() >= 1 && f.agent() <= agents && is_modal_formula(f.body(), agents);
        default:
            return false;
    }
}

int modal_depth(Formula f) {
    switch (f.kind()) {
        case FormulaKind::Not:
            return modal_depth(f.body());
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            return std::max(modal_depth(f.left()), modal_depth(f.right()));
        case FormulaKind::Box:
        case FormulaKind::Diamond:
        case FormulaKind::Just:
            return 1 + modal_depth(f.body());
        default:
            return 0;
    }
}

ModalFormula forgetful(Formula f) {
    switch (f.kind()) {
        case FormulaKind::Just:
            return Formula::box(f.agent(), forgetful(f.body()));
        case FormulaKind::Not:
            return Formula::negation(forgetful(f.body()));
        case FormulaKind::Implies:
            return Formula::implies(forgetful(f.left()), forgetful(f.right()));
        case FormulaKind::And:
            return Formula::conj(forgetful(f.left()), forgetful(f.right()));
        case FormulaKind::Or:
            return Formula::disj(forgetful(f.left()), forgetful(f.right()));
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            return f.kind() == FormulaKind::Box ? Formula::box(f.agent(), forgetful(f.body()))
                                                : Formula::diamond(f.agent(), forgetful(f.body()));
        default:
            return f;
    }
}

bool KripkeModel::val(const std::string& atom, WorldId w) const {
    auto it = valuation.find(atom);
    return it != valuation.end() && it->second.count(w);
}

bool modal_eval(const KripkeModel& m, WorldId w, ModalFormula f) {
    switch (f.kind()) {
        case FormulaKind::Bottom:
            return false;
        case FormulaKind::Atom:
            return m.val(f.name(), w);
        case FormulaKind::Not:
            return !modal_eval(m, w, f.body());
        case FormulaKind::Implies:
            return !modal_eval(m, w, f.left()) || modal_eval(m, w, f.right());
        case FormulaKind::And:
            return modal_eval(m, w, f.left()) && modal_eval(m, w, f.right());
        case FormulaKind::Or:
            return modal_eval(m, w, f.left()) || modal_eval(m, w, f.right());
        case FormulaKind::Box:
            for (WorldId v : m.frame.successors(f.agent(), w))
                if (!modal_eval(m, v, f.body())) return false;
            return true;
        case FormulaKind::Diamond:
            for (WorldId v : m.frame.successors(f.agent(), w))
                if (modal_eval(m, v, f.body())) return true;
            return false;
        default:
            throw std::invalid_argument("modal_eval: not a modal formula");
    }
}

std::vector<std::string> mh_frame_violations(const Frame& f) {
    std::vector<std::string> out;
    if (f.agents() < kMhAgents) {
        out.push_back("frame has fewer than 4 relations");
        return out;
    }
    auto ws = [](WorldId w) { return std::to_string(w); };
    for (int i : {3, 4})
        for (WorldId a : f.worlds)
            if (f.successors(i, a).empty()) out.push_back("R" + std::to_string(i) + " not serial at " + ws(a));
    for (auto [a, b] : f.relations[3])
        if (!f.related(4, a, b)) out.push_back("R3 edge " + ws(a) + "->" + ws(b) + " missing from R4");
    const int pairs[3][2] = {{1, 2}, {2, 3}, {4, 4}};
    for (auto [i, j] : pairs)
        for (auto [a, b] : f.relations[j])
            for (WorldId c : f.successors(i, b))
                if (!f.related(i, a, c))
                    out.push_back(ws(a) + " R" + std::to_string(j) + " " + ws(b) + " R" + std::to_string(i) +
                                  " " + ws(c) + " without " + ws(a) + " R" + std::to_string(i) + " " + ws(c));
    return out;
}

std::string to_string(TableauStatus s) {
    switch (s) {
        case TableauStatus::Sat:
            return "sat";
        case TableauStatus::Unsat:
            return "unsat";
        default:
            return "unknown";
    }
}

// ------------------------------------------------------------ tableau

namespace {

using Label = std::set<SignedFormula>;

// Box-like: T []i X or F <>i X (every i-successor gets the body with the same
// sign). Diamond-like: T <>i X or F []i X (some i-successor does).
bool box_like(const SignedFormula& s) {
    return (s.sign && s.formula.kind() == FormulaKind::Box) || (!s.sign && s.formula.kind() == FormulaKind::Diamond);
}
bool diamond_like(const SignedFormula& s) {
    return (s.sign && s.formula.kind() == FormulaKind::Diamond) || (!s.sign && s.formula.kind() == FormulaKind::Box);
}
// Same modality family as `s` (box for T box, diamond for F diamond).
Formula rewrap(const SignedFormula& s, AgentId agent, Formula body) {
    return s.formula.kind() == FormulaKind::Box ? Formula::box(agent, body) : Formula::diamond(agent, body);
}
Formula dual(const SignedFormula& s, Formula body) {
    return s.formula.kind() == FormulaKind::Box ? Formula::diamond(s.formula.agent(), body)
                                                : Formula::box(s.formula.agent(), body);
}

bool closed(const Label& l) {
    for (const auto& s : l) {
        if (s.sign && s.formula.kind() == FormulaKind::Bottom) return true;
        if (s.sign && l.count({false, s.formula})) return true;
    }
    return false;
}

// α-rules and the modal rules that stay at the prefix, to a fixpoint.
void saturate_local(Label& l) {
    std::vector<SignedFormula> todo(l.begin(), l.end());
    auto add = [&](bool sign, Formula f) {
        if (l.insert({sign, f}).second) todo.push_back({sign, f});
    };
    while (!todo.empty()) {
        SignedFormula s = todo.back();
        todo.pop_back();
        Formula f = s.formula;
        switch (f.kind()) {
            case FormulaKind::Not:
                add(!s.sign, f.body());
                break;
            case FormulaKind::And:
                if (s.sign) add(true, f.left()), add(true, f.right());
                break;
            case FormulaKind::Or:
                if (!s.sign) add(false, f.left()), add(false, f.right());
                break;
            case FormulaKind::Implies:
                if (!s.sign) add(true, f.left()), add(false, f.right());
                break;
            default:
                break;
        }
        if (!box_like(s)) continue;
        AgentId i = f.agent();
        // introspection along the two composition conditions: R2∘R1 ⊆ R1 and R3∘R2 ⊆ R2
        if (i == 1 || i == 2) add(s.sign, rewrap(s, i + 1, f));
        if (i == 4) add(s.sign, rewrap(s, 3, f.body()));
        // seriality of R3 and R4
        if (i == 3 || i == 4) add(s.sign, dual(s, f.body()));
    }
}

// First β-formula not yet decided by one of its options.
std::optional<std::pair<SignedFormula, SignedFormula>> pending_beta(const Label& l) {
    for (const auto& s : l) {
        Formula f = s.formula;
        std::optional<std::pair<SignedFormula, SignedFormula>> opts;
        if (s.sign && f.kind() == FormulaKind::Or)
            opts = {{true, f.left()}, {true, f.right()}};
        else if (!s.sign && f.kind() == FormulaKind::And)
            opts = {{false, f.left()}, {false, f.right()}};
        else if (s.sign && f.kind() == FormulaKind::Implies)
            opts = {{false, f.left()}, {true, f.right()}};
        if (opts && !l.count(opts->first) && !l.count(opts->second)) return opts;
    }
    return std::nullopt;
}

// Initial label of an agent-`i` child created for diamond-like `d`.
Label child_label(const Label& l, AgentId i, const SignedFormula& d) {
    Label c{{d.sign, d.formula.body()}};
    for (const auto& s : l) {
        if (!box_like(s)) continue;
        AgentId j = s.formula.agent();
        if (j == i && i < 4) c.insert({s.sign, s.formula.body()});
        if (j == 4 && (i == 3 || i == 4)) {
            c.insert({s.sign, s.formula.body()});
            c.insert(s);
        }
    }
    return c;
}

struct TableauSearch {
    TableauCaps caps;
    std::vector<Prefix> out;
    std::set<Label> unsat;
    std::uint64_t created = 0;
    int next_g = 0;
    bool capped = false;
    std::vector<std::pair<const Label*, int>> ancestors;

    bool expand(const Label& init, int parent, AgentId agent, int depth) {
        for (const auto& [l, idx] : ancestors)
            if (*l == init) {
                Prefix p;
                p.parent = parent;
                p.g = next_g++;
                p.agent = agent;
                p.labels = init;
                p.loop_to = idx;
                out.push_back(std::move(p));
                return true;
            }
        if (unsat.count(init)) return false;
        if (created >= static_cast<std::uint64_t>(caps.prefix_cap) || depth > caps.per_prefix_cap) {
            capped = true;
            return false;
        }
        ++created;
        const int idx = static_cast<int>(out.size());
        Prefix p;
        p.parent = parent;
        p.g = parent < 0 ? 0 : next_g++;
        p.agent = agent;
        out.push_back(p);
        ancestors.push_back({&init, idx});
        const bool was_capped = capped;
        capped = false;
        Label l = init;
        saturate_local(l);
        bool ok = choose(l, idx, depth);
        ancestors.pop_back();
        if (!ok) {
            out.resize(idx);
            if (!capped) unsat.insert(init);
        }
        capped = capped || was_capped;
        return ok;
    }

    bool choose(Label l, int idx, int depth) {
        if (closed(l)) return false;
        if (auto beta = pending_beta(l)) {
            for (const auto& opt : {beta->first, beta->second}) {
                Label next = l;
                next.insert(opt);
                saturate_local(next);
                if (choose(std::move(next), idx, depth)) return true;
            }
            return false;
        }
        out[idx].labels = l;
        const std::size_t mark = out.size();
        std::set<std::pair<AgentId, Label>> made;
        for (const auto& d : l) {
            if (!diamond_like(d)) continue;
            AgentId i = d.formula.agent();
            Label c = child_label(l, i, d);
            if (!made.insert({i, c}).second) continue;
            if (!expand(c, idx, i, depth + 1)) {
                out.resize(mark);
                return false;
            }
        }
        return true;
    }
};

}  // namespace

TableauResult mh_tableau(ModalFormula f, const TableauCaps& caps) {
    if (caps.prefix_cap <= 0 || caps.per_prefix_cap <= 0) throw std::invalid_argument("tableau caps must be positive");
    if (!is_modal_formula(f)) throw std::invalid_argument("mh_tableau: not an M_H formula");
    TableauSearch ts;
    ts.caps = caps;
    Label root{{true, f}};
    bool ok = ts.expand(root, -1, 0, 0);
    TableauResult r;
    r.prefixes_created = ts.created;
    if (ok) {
        r.status = TableauStatus::Sat;
        Branch b;
        b.prefixes = std::move(ts.out);
        r.model = mh_model_from_branch(b);
        r.branch = std::move(b);
    } else {
        r.status = ts.capped ? TableauStatus::Unknown : TableauStatus::Unsat;
    }
    return r;
}

KripkeModel mh_model_from_branch(const Branch& b) {
    if (b.closed || b.prefixes.empty()) throw std::invalid_argument("not an accepting branch");
    const int n = static_cast<int>(b.prefixes.size());
    std::vector<WorldId> worlds;
    for (int k = 0; k < n; ++k) {
        if (closed(b.prefixes[k].labels)) throw std::invalid_argument("not an accepting branch");
        if (b.prefixes[k].loop_to < 0) worlds.push_back(k);
    }
    // r_i: parent to child, with looped children redirected to their ancestor
    std::vector<std::set<std::pair<WorldId, WorldId>>> r(kMhAgents + 1);
    for (int k = 1; k < n; ++k) {
        const Prefix& p = b.prefixes[k];
        r[p.agent].insert({p.parent, p.loop_to >= 0 ? p.loop_to : k});
    }
    // agents 3 and 4 must be serial; a prefix without an r3 child loops on itself
    for (WorldId w : worlds) {
        bool has = false;
        for (auto [a, c] : r[3]) has = has || a == w;
        if (!has) r[3].insert({w, w});
    }
    auto compose_star = [&](const std::set<std::pair<WorldId, WorldId>>& step,
                            const std::set<std::pair<WorldId, WorldId>>& tail) {
        // step* ∘ tail: a step^k c tail d
        std::set<std::pair<WorldId, WorldId>> reach;
        for (WorldId w : worlds) reach.insert({w, w});
        bool grew = true;
        while (grew) {
            grew = false;
            for (auto [a, c] : std::vector<std::pair<WorldId, WorldId>>(reach.begin(), reach.end()))
                for (auto [x, y] : step)
                    if (x == c && reach.insert({a, y}).second) grew = true;
        }
        std::set<std::pair<WorldId, WorldId>> out;
        for (auto [a, c] : reach)
            for (auto [x, y] : tail)
                if (x == c) out.insert({a, y});
        return out;
    };
    KripkeModel m;
    m.frame = Frame(worlds, kMhAgents);
    m.frame.relations[3] = r[3];
    m.frame.relations[2] = compose_star(r[3], r[2]);
    m.frame.relations[1] = compose_star(m.frame.relations[2], r[1]);
    std::set<std::pair<WorldId, WorldId>> r34 = r[3];
    r34.insert(r[4].begin(), r[4].end());
    // transitive closure: r34 ∘ r34* equals the closure
    m.frame.relations[4] = compose_star(r34, r34);
    for (WorldId w : worlds)
        for (const auto& s : b.prefixes[w].labels)
            if (s.sign && s.formula.kind() == FormulaKind::Atom) m.valuation[s.formula.name()].insert(w);
    return m;
}

}  // namespace justec
