#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "justec/kernel.hpp"

namespace justec {

std::string to_string(BaseLogic l) {
    switch (l) {
        case BaseLogic::J:
            return "J";
        case BaseLogic::JD:
            return "JD";
        case BaseLogic::JT:
            return "JT";
    }
    return "?";
}

bool LogicSpec::is_subset(AgentId i, AgentId j) const {
    return std::find(subset.begin(), subset.end(), std::make_pair(i, j)) != subset.end();
}

bool LogicSpec::is_hook(AgentId i, AgentId j) const {
    return std::find(hook.begin(), hook.end(), std::make_pair(i, j)) != hook.end();
}

std::vector<AgentId> LogicSpec::subset_up(AgentId i) const {
    std::vector<AgentId> out{i};
    for (std::size_t k = 0; k < out.size(); ++k)
        for (auto [a, b] : subset)
            if (a == out[k] && std::find(out.begin(), out.end(), b) == out.end())
                out.push_back(b);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<AgentId> LogicSpec::verifiers_of(AgentId i) const {
    std::vector<AgentId> out;
    for (auto [a, b] : hook)
        if (b == i) out.push_back(a);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

bool scheme_selector_matches(const std::string& sel, const std::string& id) {
    if (sel == "*" || sel == id) return true;
    return id.size() > sel.size() && id.compare(0, sel.size(), sel) == 0 &&
           id[sel.size()] == '_';
}

}  // namespace

bool LogicSpec::cs_justifies(const std::string& constant, AgentId agent,
                             const std::string& scheme_id) const {
    if (cs.total) return true;
    for (const auto& e : cs.entries)
        if (e.constant == constant && (e.agent == 0 || e.agent == agent) &&
            scheme_selector_matches(e.scheme, scheme_id))
            return true;
    return false;
}

std::vector<std::string> LogicSpec::cs_constants() const {
    if (cs.total) return {kTotalConstant};
    std::vector<std::string> out;
    for (const auto& e : cs.entries)
        if (std::find(out.begin(), out.end(), e.constant) == out.end())
            out.push_back(e.constant);
    return out;
}

ConstantSpec total_cs() {
    ConstantSpec cs;
    cs.total = true;
    cs.label = "total";
    return cs;
}

ConstantSpec standard_cs() {
    ConstantSpec cs;
    cs.label = "standard";
    const std::pair<const char*, const char*> table[] = {
        {"c_id", "Id"},
        {"c_left", "P4"},
        {"c_right", "P5"},
        {"c_tran", "Tran"},
        {"c_append", "P6"},
        {"c_hypappend", "HypAppend"},
        {"c_appendconc", "AppendConc"},
        {"c_addhyp", "P1"},
        {"c_replaceleft", "ReplaceLeft"},
        {"c_replaceright", "ReplaceRight"},
        {"c_mphypoth", "MpHypoth"},
        {"c_dot", "App"},
        {"c", "*"},
    };
    for (auto [c, s] : table) cs.entries.push_back({c, 0, s});
    return cs;
}

// ------------------------------------------------------------ config text

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// "(a b) (c d e)" -> {{a,b},{c,d,e}}
std::vector<std::vector<std::string>> parse_groups(const std::string& v) {
    std::vector<std::vector<std::string>> out;
    std::size_t i = 0;
    while (i < v.size()) {
        if (std::isspace(static_cast<unsigned char>(v[i])) || v[i] == ',') {
            ++i;
            continue;
        }
        if (v[i] != '(') throw SpecError("expected '(' in list: " + v);
        std::size_t j = v.find(')', i);
        if (j == std::string::npos) throw SpecError("unclosed '(' in list: " + v);
        std::istringstream in(v.substr(i + 1, j - i - 1));
        std::vector<std::string> g;
        for (std::string w; in >> w;) g.push_back(w);
        out.push_back(std::move(g));
        i = j + 1;
    }
    return out;
}

int parse_agent(const std::string& s, int n, const std::string& where) {
    int a = 0;
    try {
        std::size_t used = 0;
        a = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw SpecError(where + ": '" + s + "' is not an agent index");
    }
    if (a < 1 || a > n)
        throw SpecError(where + ": agent " + s + " out of range 1.." + std::to_string(n));
    return a;
}

}  // namespace

RawConfig parse_config_text(const std::string& text) {
    RawConfig out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            // bare flags such as `an_restrict`
            out.emplace_back(line, "true");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw SpecError("line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

ValidatedSpec validate_spec(const RawConfig& raw) {
    ValidatedSpec out;
    LogicSpec& spec = out.spec;
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : raw) {
        static const std::set<std::string> known{"n",  "subset",      "hook", "logics",
                                                 "cs", "an_restrict", "name"};
        if (!known.count(k)) throw SpecError("unknown key '" + k + "'");
        kv[k] = v;
    }
    if (!kv.count("n")) throw SpecError("missing key 'n'");
    try {
        spec.n = std::stoi(kv["n"]);
    } catch (const std::exception&) {
        throw SpecError("n: not an integer");
    }
    if (spec.n < 1) throw SpecError("n must be at least 1");
    spec.name = kv.count("name") ? kv["name"] : "custom";

    for (const char* key : {"subset", "hook"}) {
        if (!kv.count(key)) continue;
        for (const auto& g : parse_groups(kv[key])) {
            if (g.size() != 2) throw SpecError(std::string(key) + ": pairs must have two agents");
            auto p = std::make_pair(parse_agent(g[0], spec.n, key), parse_agent(g[1], spec.n, key));
            auto& rel = std::string(key) == "subset" ? spec.subset : spec.hook;
            if (std::find(rel.begin(), rel.end(), p) == rel.end()) rel.push_back(p);
        }
    }

    std::vector<std::string> ls;
    if (kv.count("logics")) {
        std::istringstream in(kv["logics"]);
        for (std::string w; in >> w;) ls.push_back(w);
    } else {
        ls.assign(spec.n, "J");
    }
    if (static_cast<int>(ls.size()) != spec.n)
        throw SpecError("logics: expected " + std::to_string(spec.n) + " entries, got " +
                        std::to_string(ls.size()));
    for (std::size_t i = 0; i < ls.size(); ++i) {
        std::string w = ls[i];
        std::string agent = std::to_string(i + 1);
        if (w == "J") {
            spec.logics.push_back(BaseLogic::J);
        } else if (w == "JD") {
            spec.logics.push_back(BaseLogic::JD);
        } else if (w == "JT") {
            spec.logics.push_back(BaseLogic::JT);
        } else if (w == "J4" || w == "JD4" || w == "JT4" || w == "LP") {
            std::string base = w == "J4" ? "J" : w == "JD4" ? "JD" : "JT";
            throw SpecError("logics: agent " + agent + " uses " + w +
                            "; positive introspection is a Verification self-loop, write F(" +
                            agent + ")=" + base + " and add (" + agent + " " + agent +
                            ") to hook");
        } else {
            throw SpecError("logics: agent " + agent + " has '" + w +
                            "', expected one of J, JD, JT");
        }
    }

    std::string cs = kv.count("cs") ? kv["cs"] : "total";
    if (cs == "total") {
        spec.cs = total_cs();
    } else if (cs == "standard") {
        spec.cs = standard_cs();
    } else {
        spec.cs.label = "custom";
        for (const auto& g : parse_groups(cs)) {
            if (g.size() != 3) throw SpecError("cs: entries are (constant agent scheme)");
            if (!is_default_constant_name(g[0]))
                throw SpecError("cs: '" + g[0] + "' is not a constant name");
            AgentId a = g[1] == "*" ? 0 : parse_agent(g[1], spec.n, "cs");
            spec.cs.entries.push_back({g[0], a, g[2]});
        }
    }
    spec.an_restrict = kv.count("an_restrict") && kv["an_restrict"] != "false";

    auto catalog = axiom_schemes(spec);
    for (const auto& e : spec.cs.entries) {
        bool any = false;
        for (const auto& s : catalog) any = any || scheme_selector_matches(e.scheme, s.id);
        if (!any) throw SpecError("cs: unknown scheme '" + e.scheme + "'");
    }
    for (AgentId a = 1; a <= spec.n; ++a) {
        for (const auto& s : catalog) {
            bool covered = false;
            for (const auto& c : spec.cs_constants()) covered = covered || spec.cs_justifies(c, a, s.id);
            if (!covered) {
                out.appropriate = false;
                out.warnings.push_back("not axiomatically appropriate: no constant justifies " +
                                       s.id + " for agent " + std::to_string(a));
            }
        }
    }
    return out;
}

LogicSpec builtin_spec(const std::string& name) {
    std::string text;
    if (name == "J") {
        text = "n = 1\nlogics = J\n";
    } else if (name == "JD") {
        text = "n = 1\nlogics = JD\n";
    } else if (name == "JT") {
        text = "n = 1\nlogics = JT\n";
    } else if (name == "LP") {
        text = "n = 1\nlogics = JT\nhook = (1 1)\n";
    } else if (name == "JH") {
        text = "n = 4\nsubset = (3 4)\nhook = (2 1) (3 2) (4 4)\nlogics = J J JD JD\n";
    } else {
        throw SpecError("unknown built-in spec '" + name + "'");
    }
    LogicSpec s = validate_spec(parse_config_text(text + "name = " + name + "\n")).spec;
    return s;
}

LogicSpec load_spec(const std::string& name_or_path) {
    // `JH:standard` selects a built-in with a different constant specification.
    std::string base = name_or_path, cs;
    if (auto colon = name_or_path.find(':'); colon != std::string::npos) {
        base = name_or_path.substr(0, colon);
        cs = name_or_path.substr(colon + 1);
    }
    static const std::set<std::string> builtins{"J", "JD", "JT", "LP", "JH"};
    LogicSpec spec;
    if (builtins.count(base)) {
        spec = builtin_spec(base);
    } else {
        std::ifstream in(base);
        if (!in) throw SpecError("cannot open spec file '" + base + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        spec = validate_spec(parse_config_text(buf.str())).spec;
    }
    if (cs == "standard") spec.cs = standard_cs();
    else if (cs == "total") spec.cs = total_cs();
    else if (!cs.empty()) throw SpecError("unknown cs selector '" + cs + "'");
    return spec;
}

std::string spec_to_config(const LogicSpec& spec) {
    std::ostringstream os;
    os << "name = " << spec.name << "\n";
    os << "n = " << spec.n << "\n";
    if (!spec.subset.empty()) {
        os << "subset =";
        for (auto [a, b] : spec.subset) os << " (" << a << " " << b << ")";
        os << "\n";
    }
    if (!spec.hook.empty()) {
        os << "hook =";
        for (auto [a, b] : spec.hook) os << " (" << a << " " << b << ")";
        os << "\n";
    }
    os << "logics =";
    for (auto l : spec.logics) os << " " << to_string(l);
    os << "\n";
    if (spec.cs.total) {
        os << "cs = total\n";
    } else if (spec.cs.label == "standard") {
        os << "cs = standard\n";
    } else {
        os << "cs =";
        for (const auto& e : spec.cs.entries)
            os << " (" << e.constant << " " << (e.agent == 0 ? std::string("*") : std::to_string(e.agent))
               << " " << e.scheme << ")";
        os << "\n";
    }
    if (spec.an_restrict) os << "an_restrict = true\n";
    return os.str();
}

}  // namespace justec
