#include "justec/starcalc.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace justec {

std::string to_string(Rule r) {
    switch (r) {
        case Rule::Premise:
            return "Premise";
        case Rule::AN:
            return "AN";
        case Rule::App:
            return "App";
        case Rule::SumL:
            return "SumL";
        case Rule::SumR:
            return "SumR";
        case Rule::Hook:
            return "Hook";
        case Rule::Subset:
            return "Subset";
        case Rule::Dis:
            return "Dis";
    }
    return "?";
}

std::size_t Derivation::size() const {
    std::size_t s = 1;
    for (const auto& c : children) s += c.size();
    return s;
}

// ------------------------------------------------------------ search

namespace {

constexpr int kFreshBase = 1 << 20;
constexpr int kAnswerBase = 1 << 30;

struct PNode;
using PNodePtr = std::shared_ptr<const PNode>;

struct PNode {
    Rule rule;
    int pos;  // world index * (n + 1) + agent
    Term term;
    Formula formula;
    std::vector<PNodePtr> kids;
    bool frozen = false;
};

struct MemoKey {
    int pos;
    const TermNode* term;
    const FormulaNode* formula;
    bool operator==(const MemoKey& o) const {
        return pos == o.pos && term == o.term && formula == o.formula;
    }
};

struct MemoKeyHash {
    std::size_t operator()(const MemoKey& k) const {
        std::size_t h = std::hash<const void*>{}(k.term);
        h ^= std::hash<const void*>{}(k.formula) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h ^ (static_cast<std::size_t>(k.pos) * 0x100000001b3ULL);
    }
};

// Rename metavariables by first occurrence so alpha-equivalent patterns share
// one memo entry.
// Ids below `keep_below` are left alone; renamed ids start at `base`.
struct Canonicalizer {
    std::unordered_map<int, int> fm, tm;
    int keep_below = 0;
    int base = 0;
    Term term(Term t) {
        if (t.is_ground()) return t;
        switch (t.kind()) {
            case TermKind::Meta: {
                if (t.meta_id() < keep_below) return t;
                auto [it, _] = tm.emplace(t.meta_id(), base + static_cast<int>(tm.size()));
                return Term::meta(it->second);
            }
            case TermKind::App:
                return Term::app(term(t.left()), term(t.right()));
            case TermKind::Sum:
                return Term::sum(term(t.left()), term(t.right()));
            case TermKind::Bang:
                return Term::bang(term(t.inner()));
            default:
                return t;
        }
    }
    Formula formula(Formula f) {
        if (f.is_ground()) return f;
        switch (f.kind()) {
            case FormulaKind::Meta: {
                if (f.meta_id() < keep_below) return f;
                auto [it, _] = fm.emplace(f.meta_id(), base + static_cast<int>(fm.size()));
                return Formula::meta(it->second);
            }
            case FormulaKind::Not:
                return Formula::negation(formula(f.body()));
            case FormulaKind::Just: {
                Term t = term(f.term());
                return Formula::just(t, f.agent(), formula(f.body()));
            }
            case FormulaKind::Implies: {
                Formula l = formula(f.left());
                return Formula::implies(l, formula(f.right()));
            }
            case FormulaKind::And: {
                Formula l = formula(f.left());
                return Formula::conj(l, formula(f.right()));
            }
            case FormulaKind::Or: {
                Formula l = formula(f.left());
                return Formula::disj(l, formula(f.right()));
            }
            case FormulaKind::Box:
                return Formula::box(f.agent(), formula(f.body()));
            case FormulaKind::Diamond:
                return Formula::diamond(f.agent(), formula(f.body()));
            default:
                return f;
        }
    }
};

int count_metas(Formula f) {
    if (f.is_ground()) return 0;
    switch (f.kind()) {
        case FormulaKind::Meta:
            return 1;
        case FormulaKind::Just:
            return (f.term().is_ground() ? 0 : 1) + count_metas(f.body());
        case FormulaKind::Not:
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            return count_metas(f.body());
        default:
            return count_metas(f.left()) + count_metas(f.right());
    }
}

// Leftover metavariables after a successful search are unconstrained; any
// uniform instance keeps the derivation valid, so they become false / x.
Term ground_term(Term t) {
    if (t.is_ground()) return t;
    switch (t.kind()) {
        case TermKind::Meta:
            return Term::variable("x");
        case TermKind::App:
            return Term::app(ground_term(t.left()), ground_term(t.right()));
        case TermKind::Sum:
            return Term::sum(ground_term(t.left()), ground_term(t.right()));
        case TermKind::Bang:
            return Term::bang(ground_term(t.inner()));
        default:
            return t;
    }
}

Formula ground_formula(Formula f) {
    if (f.is_ground()) return f;
    switch (f.kind()) {
        case FormulaKind::Meta:
            return Formula::bottom();
        case FormulaKind::Not:
            return Formula::negation(ground_formula(f.body()));
        case FormulaKind::Just:
            return Formula::just(ground_term(f.term()), f.agent(), ground_formula(f.body()));
        case FormulaKind::Implies:
            return Formula::implies(ground_formula(f.left()), ground_formula(f.right()));
        case FormulaKind::And:
            return Formula::conj(ground_formula(f.left()), ground_formula(f.right()));
        case FormulaKind::Or:
            return Formula::disj(ground_formula(f.left()), ground_formula(f.right()));
        case FormulaKind::Box:
            return Formula::box(f.agent(), ground_formula(f.body()));
        case FormulaKind::Diamond:
            return Formula::diamond(f.agent(), ground_formula(f.body()));
        default:
            return f;
    }
}

using Kont = std::function<bool(const PNodePtr&)>;

}  // namespace

struct Prover::Impl {
    LogicSpec spec;
    Frame frame;
    SearchOptions opts;
    SearchStats stats;
    std::vector<SchemePattern> catalog;
    int n = 1;
    int stride = 2;

    struct Prem {
        int pos;
        Formula formula;
        int span;  // number of meta ids to reserve on renaming; 0 when ground
    };
    std::unordered_map<Term, std::vector<Prem>> prem_by_term;

    // next_step[target][source]: the position one rule closer to target,
    // -1 when source == target, -2 when target is unreachable from source.
    std::vector<std::vector<int>> next_step;
    std::vector<std::vector<int>> sources;

    Unifier u;
    int fresh = kFreshBase;
    std::unordered_set<MemoKey, MemoKeyHash> fail_memo;
    std::unordered_map<MemoKey, PNodePtr, MemoKeyHash> ground_memo;

    Impl(const LogicSpec& s, const Frame& f, const std::vector<PrefixedStarExpr>& premises,
         SearchOptions o)
        : spec(s), frame(f), opts(o), catalog(axiom_schemes(s)), n(s.n), stride(s.n + 1) {
        if (frame.agents() < n) frame.relations.resize(n + 1);
        for (const auto& p : premises) {
            int w = frame.index_of(p.world);
            if (w < 0) throw std::invalid_argument("premise world " + std::to_string(p.world) + " not in frame");
            if (p.expr.agent < 1 || p.expr.agent > n) throw std::invalid_argument("premise agent out of range");
            int span = 0;
            if (!p.expr.formula.is_ground()) span = max_meta_id(p.expr.formula) + 1;
            prem_by_term[p.expr.term].push_back({w * stride + p.expr.agent, p.expr.formula, span});
        }
        build_reachability();
    }

    int world_of(int pos) const { return pos / stride; }
    AgentId agent_of(int pos) const { return pos % stride; }

    void build_reachability() {
        int P = static_cast<int>(frame.worlds.size()) * stride;
        // predecessors: one rule application from pred to pos
        std::vector<std::vector<int>> preds(P);
        for (int w = 0; w < static_cast<int>(frame.worlds.size()); ++w) {
            for (AgentId i = 1; i <= n; ++i) {
                int pos = w * stride + i;
                for (auto [a, b] : spec.subset)
                    if (a == i) preds[pos].push_back(w * stride + b);
                for (AgentId m : spec.verifiers_of(i))
                    for (auto [x, y] : frame.relations[m])
                        if (y == frame.worlds[w]) {
                            int xw = frame.index_of(x);
                            if (xw >= 0) preds[pos].push_back(xw * stride + i);
                        }
            }
        }
        next_step.assign(P, std::vector<int>(P, -2));
        sources.assign(P, {});
        for (int t = 0; t < P; ++t) {
            if (agent_of(t) == 0) continue;
            std::deque<int> q{t};
            next_step[t][t] = -1;
            while (!q.empty()) {
                int cur = q.front();
                q.pop_front();
                sources[t].push_back(cur);
                for (int p : preds[cur])
                    if (next_step[t][p] == -2) {
                        next_step[t][p] = cur;
                        q.push_back(p);
                    }
            }
        }
    }

    PNodePtr mk(Rule r, int pos, Term t, Formula f, std::vector<PNodePtr> kids = {}) {
        return std::make_shared<PNode>(PNode{r, pos, t, f, std::move(kids), false});
    }

    // Wrap `node` (concluded at src) in Subset/Dis steps until it reaches tgt.
    PNodePtr move_chain(PNodePtr node, int src, int tgt) {
        while (src != tgt) {
            int nxt = next_step[tgt][src];
            Rule r = world_of(nxt) == world_of(src) ? Rule::Subset : Rule::Dis;
            node = mk(r, nxt, node->term, node->formula, {node});
            src = nxt;
        }
        return node;
    }

    PNodePtr freeze(const PNodePtr& n) {
        if (n->frozen) return n;
        std::vector<PNodePtr> kids;
        kids.reserve(n->kids.size());
        for (const auto& k : n->kids) kids.push_back(freeze(k));
        Formula f = ground_formula(u.resolve(n->formula));
        return std::make_shared<PNode>(PNode{n->rule, n->pos, n->term, f, std::move(kids), true});
    }

    void tick() {
        ++stats.nodes;
        if (opts.budget && stats.nodes > opts.budget) throw BudgetExceeded();
    }

    bool solve(int pos, Term term, Formula pattern, const Kont& k) {
        tick();
        Formula pat = u.resolve(pattern);
        if (pat.is_ground()) {
            MemoKey key{pos, term.node(), pat.node()};
            if (fail_memo.count(key)) {
                ++stats.memo_hits;
                return false;
            }
            if (auto it = ground_memo.find(key); it != ground_memo.end()) {
                ++stats.memo_hits;
                return k(it->second);
            }
            PNodePtr found;
            std::size_t m = u.mark();
            solve_raw(pos, term, pat, [&](const PNodePtr& node) {
                found = freeze(node);
                return true;
            });
            u.undo(m);
            if (!found) {
                fail_memo.insert(key);
                return false;
            }
            ground_memo.emplace(key, found);
            return k(found);
        }
        Canonicalizer c;
        MemoKey key{pos, term.node(), c.formula(pat).node()};
        if (fail_memo.count(key)) {
            ++stats.memo_hits;
            return false;
        }
        // Answers that bind the pattern the same way up to renaming of metas
        // created below would replay the same continuation, so only the first
        // is passed on. On failure every binding made below has been undone
        // and the meta ids allocated below are dead, so they are reused;
        // without this every failed branch interns fresh renamed skeletons.
        int f0 = fresh;
        std::unordered_set<const FormulaNode*> seen;
        bool produced = false;
        bool stop = solve_raw(pos, term, pat, [&](const PNodePtr& node) {
            produced = true;
            Canonicalizer answer;
            answer.keep_below = f0;
            answer.base = kAnswerBase;
            if (!seen.insert(answer.formula(u.resolve(pat)).node()).second) return false;
            return k(node);
        });
        if (!stop && !produced) fail_memo.insert(key);
        if (!stop) fresh = f0;
        return stop;
    }

    bool solve_raw(int pos, Term term, Formula pat, const Kont& k) {
        // premises, moved from any source position
        if (auto it = prem_by_term.find(term); it != prem_by_term.end()) {
            for (const Prem& p : it->second) {
                if (next_step[pos][p.pos] == -2) continue;
                Formula pf = p.formula;
                int f0 = fresh;
                if (p.span) {
                    pf = shift_metas(pf, fresh);
                    fresh += p.span;
                }
                std::size_t m = u.mark();
                if (u.unify(pat, pf)) {
                    if (k(move_chain(mk(Rule::Premise, p.pos, term, pf), p.pos, pos))) return true;
                }
                u.undo(m);
                fresh = f0;
            }
        }
        // axiom necessitation, for any agent above in the subset order
        if (term.kind() == TermKind::Constant || term.kind() == TermKind::Bang) {
            int w = world_of(pos);
            for (int src : sources[pos]) {
                if (world_of(src) != w) continue;
                AgentId h = agent_of(src);
                bool stop = an_search(h, term, pat, [&]() {
                    return k(move_chain(mk(Rule::AN, src, term, pat), src, pos));
                });
                if (stop) return true;
            }
        }
        switch (term.kind()) {
            case TermKind::App:
                return solve_app(pos, term, pat, k);
            case TermKind::Sum:
                if (solve(pos, term.left(), pat, [&](const PNodePtr& c) {
                        return k(mk(Rule::SumL, pos, term, pat, {c}));
                    }))
                    return true;
                return solve(pos, term.right(), pat, [&](const PNodePtr& c) {
                    return k(mk(Rule::SumR, pos, term, pat, {c}));
                });
            case TermKind::Bang:
                return solve_bang(pos, term, pat, k);
            default:
                return false;
        }
    }

    bool solve_bang(int pos, Term term, Formula pat, const Kont& k) {
        Term inner = term.inner();
        for (int src : sources[pos]) {
            AgentId h = agent_of(src);
            int w = world_of(src);
            for (auto [a, b] : spec.hook) {
                if (a != h) continue;  // h ↪ b: h verifies b
                Formula x = Formula::meta(fresh++);
                Formula shape = Formula::just(inner, b, x);
                std::size_t m = u.mark();
                if (u.unify(pat, shape)) {
                    bool stop = solve(w * stride + b, inner, x, [&](const PNodePtr& c) {
                        return k(move_chain(mk(Rule::Hook, src, term, shape, {c}), src, pos));
                    });
                    if (stop) return true;
                }
                u.undo(m);
            }
        }
        return false;
    }

    bool an_search(AgentId h, Term term, Formula pat, const std::function<bool()>& k) {
        if (term.kind() == TermKind::Constant) {
            Formula head = u.walk(pat);
            bool open = head.kind() == FormulaKind::Meta;
            for (const auto& s : catalog) {
                if (!open && s.skeleton.kind() != FormulaKind::Meta && s.skeleton.kind() != head.kind()) continue;
                if (!spec.cs_justifies(term.name(), h, s.id)) continue;
                int f0 = fresh;
                Formula sk = shift_metas(s.skeleton, fresh);
                fresh += 8;
                std::size_t m = u.mark();
                if (u.unify(pat, sk) && k()) return true;
                u.undo(m);
                fresh = f0;
            }
            return false;
        }
        if (term.kind() == TermKind::Bang) {
            Term inner = term.inner();
            for (AgentId j = 1; j <= n; ++j) {
                if (spec.an_restrict && !spec.is_hook(h, j)) continue;
                Formula y = Formula::meta(fresh++);
                std::size_t m = u.mark();
                if (u.unify(pat, Formula::just(inner, j, y)) && an_search(j, inner, y, k))
                    return true;
                u.undo(m);
            }
        }
        return false;
    }

    int score(Term t, Formula pattern) {
        Formula p = u.resolve(pattern);
        if (p.is_ground()) return 0;
        bool bare = p.kind() == FormulaKind::Meta;
        switch (t.kind()) {
            case TermKind::Variable: {
                auto it = prem_by_term.find(t);
                return 1 + (it == prem_by_term.end() ? 0 : static_cast<int>(it->second.size()));
            }
            case TermKind::Constant:
                return bare ? 500 : 10 + count_metas(p);
            case TermKind::Bang:
                return bare ? 400 : 20 + count_metas(p);
            default:
                return bare ? 1000 : 30 + count_metas(p);
        }
    }

    // [[h . a1] . ... . ak]: solve the head against a1 -> ... -> ak -> pat and
    // every argument against its antecedent, most constrained leaf first.
    bool solve_app(int pos, Term term, Formula pat, const Kont& k) {
        std::vector<Term> spine;  // prefixes: spine[0] = head, spine[j] = [spine[j-1] . args[j]]
        Term t = term;
        std::vector<Term> args;
        while (t.kind() == TermKind::App) {
            args.push_back(t.right());
            t = t.left();
        }
        std::reverse(args.begin(), args.end());
        std::size_t K = args.size();
        spine.push_back(t);
        for (std::size_t j = 0; j < K; ++j) spine.push_back(Term::app(spine.back(), args[j]));

        std::vector<Formula> ante(K);
        for (auto& a : ante) a = Formula::meta(fresh++);
        // types[j]: pattern of spine[j]
        std::vector<Formula> types(K + 1);
        types[K] = pat;
        for (std::size_t j = K; j-- > 0;) types[j] = Formula::implies(ante[j], types[j + 1]);

        // goal items: 0 = head, j + 1 = argument j
        std::vector<Term> item_term(K + 1);
        std::vector<Formula> item_pat(K + 1);
        item_term[0] = spine[0];
        item_pat[0] = types[0];
        for (std::size_t j = 0; j < K; ++j) {
            item_term[j + 1] = args[j];
            item_pat[j + 1] = ante[j];
        }
        std::vector<PNodePtr> got(K + 1);
        std::vector<bool> done(K + 1, false);

        std::function<bool(std::size_t)> step = [&](std::size_t remaining) -> bool {
            if (remaining == 0) {
                PNodePtr node = got[0];
                for (std::size_t j = 0; j < K; ++j)
                    node = mk(Rule::App, pos, spine[j + 1], types[j + 1], {node, got[j + 1]});
                return k(node);
            }
            std::size_t best = K + 1;
            int best_score = 0;
            for (std::size_t j = 0; j <= K; ++j) {
                if (done[j]) continue;
                int s = score(item_term[j], item_pat[j]);
                if (best == K + 1 || s < best_score) {
                    best = j;
                    best_score = s;
                }
            }
            done[best] = true;
            bool stop = solve(pos, item_term[best], item_pat[best], [&](const PNodePtr& c) {
                got[best] = c;
                return step(remaining - 1);
            });
            done[best] = false;
            return stop;
        };
        return step(K + 1);
    }

    Derivation to_derivation(const PNodePtr& n) const {
        Derivation d;
        d.rule = n->rule;
        d.world = frame.worlds[world_of(n->pos)];
        d.conclusion = StarExpr{agent_of(n->pos), n->term, n->formula};
        for (const auto& k : n->kids) d.children.push_back(to_derivation(k));
        return d;
    }

    std::optional<Derivation> prove(const PrefixedStarExpr& goal) {
        int w = frame.index_of(goal.world);
        if (w < 0) throw std::invalid_argument("goal world " + std::to_string(goal.world) + " not in frame");
        if (goal.expr.agent < 1 || goal.expr.agent > n) throw std::invalid_argument("goal agent out of range");
        u = Unifier();
        PNodePtr result;
        solve(w * stride + goal.expr.agent, goal.expr.term, goal.expr.formula,
              [&](const PNodePtr& node) {
                  result = freeze(node);
                  return true;
              });
        u = Unifier();
        if (!result) return std::nullopt;
        return to_derivation(result);
    }
};

Prover::Prover(const LogicSpec& spec, const Frame& frame, std::vector<PrefixedStarExpr> premises,
               SearchOptions opts)
    : impl_(std::make_unique<Impl>(spec, frame, premises, opts)) {}

Prover::~Prover() = default;

std::optional<Derivation> Prover::prove(const PrefixedStarExpr& goal) { return impl_->prove(goal); }

bool Prover::holds(const PrefixedStarExpr& goal) { return prove(goal).has_value(); }

const SearchStats& Prover::stats() const { return impl_->stats; }

void Prover::reset_budget() { impl_->stats.nodes = 0; }

std::optional<Derivation> derive(const LogicSpec& spec, const std::vector<StarExpr>& premises,
                                 const StarExpr& goal, const SearchOptions& opts) {
    std::vector<PrefixedStarExpr> prefixed;
    for (const auto& p : premises) prefixed.push_back({0, p});
    Prover prover(spec, trivial_frame(spec.n), prefixed, opts);
    return prover.prove({0, goal});
}

std::optional<Derivation> derive_in_frame(const LogicSpec& spec, const Frame& frame,
                                          const std::vector<PrefixedStarExpr>& premises,
                                          const PrefixedStarExpr& goal, const SearchOptions& opts) {
    Prover prover(spec, frame, premises, opts);
    return prover.prove(goal);
}

// ------------------------------------------------------------ checking

namespace {

struct Checker {
    const LogicSpec& spec;
    const Frame* frame;
    const std::vector<PrefixedStarExpr>* premises;
    std::vector<SchemePattern> catalog;
    DerivationCheck result;

    bool fail(const Derivation& d, std::string why) {
        result.ok = false;
        result.reason = std::move(why);
        result.node = std::to_string(d.world) + " " + to_string(d.conclusion);
        return false;
    }

    bool premise_ok(const Derivation& d) {
        if (!premises) return true;
        for (const auto& p : *premises) {
            if (p.world != d.world || p.expr.agent != d.conclusion.agent ||
                p.expr.term != d.conclusion.term)
                continue;
            if (p.expr.formula == d.conclusion.formula) return true;
            if (!p.expr.formula.is_ground() && unify(p.expr.formula, d.conclusion.formula))
                return true;
        }
        return false;
    }

    bool check(const Derivation& d) {
        const StarExpr& c = d.conclusion;
        if (c.agent < 1 || c.agent > spec.n) return fail(d, "agent out of range");
        if (c.term.is_null() || c.formula.is_null() || !c.term.is_ground() || !c.formula.is_ground())
            return fail(d, "conclusion not ground");
        if (frame && !frame->has_world(d.world)) return fail(d, "world not in frame");
        auto arity = [&](std::size_t k) {
            return d.children.size() == k ? true : fail(d, "wrong number of premises");
        };
        switch (d.rule) {
            case Rule::Premise:
                if (!arity(0)) return false;
                if (!premise_ok(d)) return fail(d, "not a premise");
                return true;
            case Rule::AN:
                if (!arity(0)) return false;
                if (!an_holds(spec, catalog, c.agent, c.term, c.formula))
                    return fail(d, "not an AN instance");
                return true;
            case Rule::App: {
                if (!arity(2)) return false;
                const auto& l = d.children[0];
                const auto& r = d.children[1];
                if (c.term.kind() != TermKind::App || l.conclusion.term != c.term.left() ||
                    r.conclusion.term != c.term.right())
                    return fail(d, "App terms do not match");
                if (l.world != d.world || r.world != d.world || l.conclusion.agent != c.agent ||
                    r.conclusion.agent != c.agent)
                    return fail(d, "App premises at a different position");
                if (l.conclusion.formula != Formula::implies(r.conclusion.formula, c.formula))
                    return fail(d, "App formulas do not match");
                return check(l) && check(r);
            }
            case Rule::SumL:
            case Rule::SumR: {
                if (!arity(1)) return false;
                const auto& ch = d.children[0];
                Term want = d.rule == Rule::SumL ? c.term.left() : c.term.right();
                if (c.term.kind() != TermKind::Sum || ch.conclusion.term != want)
                    return fail(d, "Sum terms do not match");
                if (ch.world != d.world || ch.conclusion.agent != c.agent ||
                    ch.conclusion.formula != c.formula)
                    return fail(d, "Sum premise differs");
                return check(ch);
            }
            case Rule::Hook: {
                if (!arity(1)) return false;
                const auto& ch = d.children[0];
                const StarExpr& e = ch.conclusion;
                if (ch.world != d.world) return fail(d, "Hook premise at another world");
                if (c.term != Term::bang(e.term) || c.formula != Formula::just(e.term, e.agent, e.formula))
                    return fail(d, "Hook shape mismatch");
                if (!spec.is_hook(c.agent, e.agent))
                    return fail(d, "agent " + std::to_string(c.agent) + " does not verify agent " +
                                       std::to_string(e.agent));
                return check(ch);
            }
            case Rule::Subset: {
                if (!arity(1)) return false;
                const auto& ch = d.children[0];
                if (ch.world != d.world || ch.conclusion.term != c.term ||
                    ch.conclusion.formula != c.formula)
                    return fail(d, "Subset premise differs");
                if (!spec.is_subset(c.agent, ch.conclusion.agent))
                    return fail(d, "no conversion from agent " + std::to_string(ch.conclusion.agent));
                return check(ch);
            }
            case Rule::Dis: {
                if (!arity(1)) return false;
                if (!frame) return fail(d, "Dis outside a frame");
                const auto& ch = d.children[0];
                if (!(ch.conclusion == c)) return fail(d, "Dis premise differs");
                bool edge = false;
                for (AgentId m : spec.verifiers_of(c.agent))
                    if (m < static_cast<int>(frame->relations.size()))
                        edge = edge || frame->related(m, ch.world, d.world);
                if (!edge) return fail(d, "no verifying edge for the move");
                return check(ch);
            }
        }
        return fail(d, "unknown rule");
    }
};

}  // namespace

DerivationCheck check_derivation(const LogicSpec& spec, const Frame* frame, const Derivation& d,
                                 const std::vector<PrefixedStarExpr>* premises) {
    Checker c{spec, frame, premises, axiom_schemes(spec), {}};
    c.check(d);
    return c.result;
}

// ------------------------------------------------------------ certificates

namespace {

void write_cert(std::ostream& os, const Derivation& d, int indent) {
    os << std::string(indent, ' ') << '(' << to_string(d.rule) << ' ' << d.world << " \""
       << to_string(d.conclusion) << '"';
    for (const auto& c : d.children) {
        os << '\n';
        write_cert(os, c, indent + 2);
    }
    os << ')';
}

struct CertReader {
    const std::string& s;
    std::size_t i = 0;
    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    [[noreturn]] void fail(const std::string& m) { throw ParseError("certificate: " + m, i); }
    Derivation node() {
        ws();
        if (i >= s.size() || s[i] != '(') fail("expected '('");
        ++i;
        ws();
        std::size_t b = i;
        while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
        std::string rule = s.substr(b, i - b);
        Derivation d;
        static const std::map<std::string, Rule> rules{
            {"Premise", Rule::Premise}, {"AN", Rule::AN},         {"App", Rule::App},
            {"SumL", Rule::SumL},       {"SumR", Rule::SumR},     {"Hook", Rule::Hook},
            {"Subset", Rule::Subset},   {"Dis", Rule::Dis}};
        auto it = rules.find(rule);
        if (it == rules.end()) fail("unknown rule '" + rule + "'");
        d.rule = it->second;
        ws();
        b = i;
        if (i < s.size() && s[i] == '-') ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (b == i) fail("expected world");
        d.world = std::stoi(s.substr(b, i - b));
        ws();
        if (i >= s.size() || s[i] != '"') fail("expected quoted expression");
        std::size_t e = s.find('"', i + 1);
        if (e == std::string::npos) fail("unterminated expression");
        d.conclusion = parse_star(s.substr(i + 1, e - i - 1)).expr;
        i = e + 1;
        ws();
        while (i < s.size() && s[i] == '(') {
            d.children.push_back(node());
            ws();
        }
        if (i >= s.size() || s[i] != ')') fail("expected ')'");
        ++i;
        return d;
    }
};

}  // namespace

std::string to_certificate(const Derivation& d) {
    std::ostringstream os;
    write_cert(os, d, 0);
    os << '\n';
    return os.str();
}

Derivation parse_certificate(const std::string& text) {
    CertReader r{text};
    Derivation d = r.node();
    r.ws();
    if (r.i != text.size()) r.fail("trailing input");
    return d;
}

}  // namespace justec
