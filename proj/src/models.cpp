#include "justec/models.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "justec/parser.hpp"

namespace justec {

bool FModel::val(const std::string& atom, WorldId w) const {
    auto it = valuation.find(atom);
    return it != valuation.end() && it->second.count(w);
}

std::vector<std::string> check_frame(const LogicSpec& spec, const Frame& frame) {
    std::vector<std::string> out;
    auto w2s = [](WorldId w) { return std::to_string(w); };
    auto rel = [&](AgentId i) -> const std::set<std::pair<WorldId, WorldId>>& {
        static const std::set<std::pair<WorldId, WorldId>> none;
        return i < static_cast<AgentId>(frame.relations.size()) ? frame.relations[i] : none;
    };
    auto related = [&](AgentId i, WorldId a, WorldId b) { return rel(i).count({a, b}) != 0; };
    for (AgentId i = 1; i < static_cast<AgentId>(frame.relations.size()); ++i)
        for (auto [a, b] : frame.relations[i])
            if (!frame.has_world(a) || !frame.has_world(b))
                out.push_back("edge " + w2s(a) + "->" + w2s(b) + " of R" + std::to_string(i) + " leaves the world set");
    for (AgentId i = 1; i <= spec.n; ++i) {
        BaseLogic l = spec.logic(i);
        for (WorldId a : frame.worlds) {
            if (l == BaseLogic::JT && !related(i, a, a))
                out.push_back("reflexivity: R" + std::to_string(i) + " lacks (" + w2s(a) + "," + w2s(a) + ")");
            if (l == BaseLogic::JD) {
                bool any = false;
                for (auto [x, y] : rel(i)) any = any || x == a;
                if (!any) out.push_back("seriality: R" + std::to_string(i) + " has no successor of " + w2s(a));
            }
        }
    }
    for (auto [i, j] : spec.hook)
        for (auto [a, b] : rel(i))
            for (auto [x, c] : rel(j))
                if (x == b && !related(j, a, c))
                    out.push_back("verification " + std::to_string(i) + "->" + std::to_string(j) + ": " + w2s(a) +
                                  " R" + std::to_string(i) + " " + w2s(b) + " R" + std::to_string(j) + " " + w2s(c) +
                                  " but not " + w2s(a) + " R" + std::to_string(j) + " " + w2s(c));
    for (auto [i, j] : spec.subset)
        for (auto [a, b] : rel(i))
            if (!related(j, a, b))
                out.push_back("subset " + std::to_string(i) + "<" + std::to_string(j) + ": (" + w2s(a) + "," + w2s(b) +
                              ") in R" + std::to_string(i) + " but not in R" + std::to_string(j));
    return out;
}

// ------------------------------------------------------------ evaluation

namespace {

FModel padded(const LogicSpec& spec, const FModel& m) {
    FModel c = m;
    if (static_cast<int>(c.frame.relations.size()) < spec.n + 1) c.frame.relations.resize(spec.n + 1);
    return c;
}

}  // namespace

ModelChecker::ModelChecker(const LogicSpec& spec, const FModel& model, SearchOptions opts)
    : spec_(spec), model_(model) {
    // the prover keeps a reference to the frame; callers pad it first
    if (static_cast<int>(model.frame.relations.size()) < spec.n + 1)
        throw std::invalid_argument("model has fewer relations than the spec has agents");
    prover_ = std::make_unique<Prover>(spec, model_.frame, model_.aef_base, opts);
}

ModelChecker::~ModelChecker() = default;

bool ModelChecker::aef_member(WorldId w, const StarExpr& e) {
    prover_->reset_budget();
    return prover_->holds({w, e});
}

bool ModelChecker::evaluate(WorldId w, Formula f) {
    switch (f.kind()) {
        case FormulaKind::Bottom:
            return false;
        case FormulaKind::Atom:
            return model_.val(f.name(), w);
        case FormulaKind::Not:
            return !evaluate(w, f.body());
        case FormulaKind::Implies:
            return !evaluate(w, f.left()) || evaluate(w, f.right());
        case FormulaKind::And:
            return evaluate(w, f.left()) && evaluate(w, f.right());
        case FormulaKind::Or:
            return evaluate(w, f.left()) || evaluate(w, f.right());
        case FormulaKind::Just: {
            for (WorldId v : model_.frame.successors(f.agent(), w))
                if (!evaluate(v, f.body())) return false;
            return aef_member(w, StarExpr{f.agent(), f.term(), f.body()});
        }
        case FormulaKind::Box:
            for (WorldId v : model_.frame.successors(f.agent(), w))
                if (!evaluate(v, f.body())) return false;
            return true;
        case FormulaKind::Diamond:
            for (WorldId v : model_.frame.successors(f.agent(), w))
                if (evaluate(v, f.body())) return true;
            return false;
        default:
            throw std::invalid_argument("cannot evaluate a formula with metavariables");
    }
}

bool ModelChecker::strong_evidence_holds(const std::vector<PrefixedStarExpr>& pairs) {
    for (const auto& p : pairs) {
        if (!aef_member(p.world, p.expr)) continue;
        for (WorldId v : model_.frame.successors(p.expr.agent, p.world))
            if (!evaluate(v, p.expr.formula)) return false;
    }
    return true;
}

bool aef_member(const LogicSpec& spec, const FModel& m, WorldId w, AgentId i, Term t, Formula f,
                const SearchOptions& opts) {
    FModel p = padded(spec, m);
    ModelChecker mc(spec, p, opts);
    return mc.aef_member(w, StarExpr{i, t, f});
}

bool evaluate(const LogicSpec& spec, const FModel& m, WorldId w, Formula f, const SearchOptions& opts) {
    FModel p = padded(spec, m);
    ModelChecker mc(spec, p, opts);
    return mc.evaluate(w, f);
}

bool strong_evidence_holds(const LogicSpec& spec, const FModel& m, const std::vector<PrefixedStarExpr>& pairs,
                           const SearchOptions& opts) {
    FModel p = padded(spec, m);
    ModelChecker mc(spec, p, opts);
    return mc.strong_evidence_holds(pairs);
}

// ------------------------------------------------------------ bounded search

std::string to_string(SatResult::Kind k) {
    switch (k) {
        case SatResult::Kind::Sat:
            return "sat";
        case SatResult::Kind::UnsatUpTo:
            return "unsat-up-to";
        default:
            return "budget-exceeded";
    }
}

SatResult sat_bounded(const LogicSpec& spec, Formula f, int max_states, std::uint64_t budget) {
    std::vector<std::string> atoms;
    collect_atoms(f, atoms);
    std::vector<Formula> subs;
    collect_subformulas(f, subs);
    std::vector<StarExpr> justs;
    for (Formula g : subs)
        if (g.kind() == FormulaKind::Just) justs.push_back({g.agent(), g.term(), g.body()});

    SatResult res;
    SearchOptions opts;
    opts.budget = budget;
    auto over = [&] { return budget && res.candidates > budget; };
    for (int s = 1; s <= max_states; ++s) {
        std::vector<WorldId> ws;
        for (int w = 0; w < s; ++w) ws.push_back(w);
        const std::size_t rel_bits = static_cast<std::size_t>(spec.n) * s * s;
        const std::size_t val_bits = atoms.size() * s;
        const std::size_t base_bits = justs.size() * s;
        if (rel_bits + val_bits + base_bits >= 63) {
            res.kind = SatResult::Kind::BudgetExceeded;
            return res;
        }
        for (std::uint64_t rc = 0; rc < (std::uint64_t{1} << rel_bits); ++rc) {
            Frame fr(ws, spec.n);
            for (std::size_t b = 0; b < rel_bits; ++b)
                if ((rc >> b) & 1) {
                    int i = static_cast<int>(b / (s * s)) + 1, a = static_cast<int>(b % (s * s)) / s, c = static_cast<int>(b % s);
                    fr.add_edge(i, a, c);
                }
            ++res.candidates;
            if (over()) return res;
            if (!check_frame(spec, fr).empty()) continue;
            for (std::uint64_t vc = 0; vc < (std::uint64_t{1} << val_bits); ++vc) {
                for (std::uint64_t bc = 0; bc < (std::uint64_t{1} << base_bits); ++bc) {
                    ++res.candidates;
                    if (over()) return res;
                    FModel m;
                    m.frame = fr;
                    for (std::size_t k = 0; k < val_bits; ++k)
                        if ((vc >> k) & 1) m.valuation[atoms[k / s]].insert(static_cast<WorldId>(k % s));
                    for (std::size_t k = 0; k < base_bits; ++k)
                        if ((bc >> k) & 1) m.aef_base.push_back({static_cast<WorldId>(k % s), justs[k / s]});
                    try {
                        ModelChecker mc(spec, m, opts);
                        for (WorldId w : ws)
                            if (mc.evaluate(w, f)) {
                                res.kind = SatResult::Kind::Sat;
                                res.states = s;
                                res.world = w;
                                res.model = std::move(m);
                                return res;
                            }
                    } catch (const BudgetExceeded&) {
                        res.kind = SatResult::Kind::BudgetExceeded;
                        return res;
                    }
                }
            }
        }
    }
    res.kind = SatResult::Kind::UnsatUpTo;
    res.states = max_states;
    return res;
}

// ------------------------------------------------------------ text format

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<WorldId> ints(const std::string& s, std::size_t line) {
    std::vector<WorldId> out;
    std::string t = s;
    for (char& c : t)
        if (c == '(' || c == ')' || c == ',') c = ' ';
    std::istringstream in(t);
    std::string w;
    while (in >> w) {
        try {
            std::size_t used = 0;
            int v = std::stoi(w, &used);
            if (used != w.size()) throw std::invalid_argument(w);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("bad world id '" + w + "' on line " + std::to_string(line), 0);
        }
    }
    return out;
}

}  // namespace

FModel parse_model(const std::string& text, const ParseOptions& opts) {
    FModel m;
    std::vector<std::pair<AgentId, std::pair<WorldId, WorldId>>> edges;
    int agents = 0;
    bool have_worlds = false;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::string line = trim(raw);
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) { throw ParseError(msg + " on line " + std::to_string(lineno), 0); };
        if (line.rfind("worlds", 0) == 0) {
            m.frame.worlds = ints(line.substr(6), lineno);
            have_worlds = true;
        } else if (line.rfind("agents", 0) == 0) {
            auto v = ints(line.substr(6), lineno);
            if (v.size() != 1 || v[0] < 0) fail("bad agents line");
            agents = std::max(agents, v[0]);
        } else if (line.rfind("rel", 0) == 0) {
            auto colon = line.find(':');
            if (colon == std::string::npos) fail("expected ':' in rel line");
            auto head = ints(line.substr(3, colon - 3), lineno);
            if (head.size() != 1 || head[0] < 1) fail("bad agent in rel line");
            auto ends = ints(line.substr(colon + 1), lineno);
            if (ends.size() % 2) fail("odd number of endpoints");
            for (std::size_t k = 0; k < ends.size(); k += 2) edges.push_back({head[0], {ends[k], ends[k + 1]}});
            agents = std::max(agents, head[0]);
        } else if (line.rfind("val", 0) == 0) {
            auto colon = line.find(':');
            if (colon == std::string::npos) fail("expected ':' in val line");
            std::string atom = trim(line.substr(3, colon - 3));
            if (atom.empty()) fail("missing atom name");
            auto& set = m.valuation[atom];
            for (WorldId w : ints(line.substr(colon + 1), lineno)) set.insert(w);
        } else if (line.rfind("aef:", 0) == 0) {
            auto p = parse_star(line.substr(4), opts);
            if (!p.world) fail("aef line needs a world prefix");
            m.aef_base.push_back({*p.world, p.expr});
            agents = std::max(agents, p.expr.agent);
        } else {
            fail("unrecognized line '" + line + "'");
        }
    }
    if (!have_worlds) throw ParseError("model lacks a 'worlds' line", 0);
    m.frame.relations.assign(agents + 1, {});
    for (auto& [i, e] : edges) m.frame.add_edge(i, e.first, e.second);
    return m;
}

std::string to_string(const FModel& m) {
    std::ostringstream os;
    os << "worlds";
    for (WorldId w : m.frame.worlds) os << " " << w;
    os << "\n";
    if (m.frame.agents() > 0) os << "agents " << m.frame.agents() << "\n";
    for (AgentId i = 1; i <= m.frame.agents(); ++i) {
        if (m.frame.relations[i].empty()) continue;
        os << "rel " << i << ":";
        for (auto [a, b] : m.frame.relations[i]) os << " (" << a << " " << b << ")";
        os << "\n";
    }
    for (const auto& [p, ws] : m.valuation) {
        os << "val " << p << ":";
        for (WorldId w : ws) os << " " << w;
        os << "\n";
    }
    for (const auto& e : m.aef_base) os << "aef: " << to_string(e) << "\n";
    return os.str();
}

}  // namespace justec
