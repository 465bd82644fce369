// justec: command-line entry point.
//
// Exit codes: 0 success / derivable / Sat / true, 1 negative answer,
// 2 usage or input error, 3 search budget exhausted.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "justec/corpus.hpp"
#include "justec/models.hpp"
#include "justec/oracles.hpp"
#include "justec/parser.hpp"
#include "justec/reductions.hpp"
#include "justec/starcalc.hpp"
#include "justec/suite.hpp"

using namespace justec;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kBudget = 3 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Non-blank lines with `#` comments removed.
std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(line);
    }
    return out;
}

std::string joined(const std::string& text) {
    std::string out;
    for (const auto& l : content_lines(text)) out += l + " ";
    return out;
}

// Meta tables shared across every parse of one invocation.
struct Parsing {
    std::map<std::string, int> fmetas, tmetas;
    ParseOptions opts() {
        ParseOptions o;
        o.formula_metas = &fmetas;
        o.term_metas = &tmetas;
        return o;
    }
};

Formula read_formula(const std::string& path, Parsing& p) { return parse_formula(joined(slurp(path)), p.opts()); }

std::vector<ParsedStar> read_stars(const std::string& path, Parsing& p) {
    std::vector<ParsedStar> out;
    for (const auto& l : content_lines(slurp(path))) out.push_back(parse_star(l, p.opts()));
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

FModel kripke_as_model(const KripkeModel& k) {
    FModel m;
    m.frame = k.frame;
    m.valuation = k.valuation;
    return m;
}

std::string manifest(const PropContext& ctx) {
    std::ostringstream os;
    os << "# agent " << ctx.agent << ", " << ctx.rho << " atoms, " << ctx.l() << " subformulas\n";
    for (int j = 1; j <= ctx.l(); ++j) os << "# psi " << j << " " << to_string(ctx.psi[j - 1]) << "\n";
    return os.str();
}

std::string manifest(const FoContext& ctx) {
    std::ostringstream os;
    os << "# rho0 " << ctx.rho0 << ", rho1 " << ctx.rho1 << ", alpha " << ctx.alpha << ", l " << ctx.l() << "\n";
    os << "# theta " << to_string(ctx.theta) << "\n";
    for (std::size_t b = 0; b < ctx.z.size(); ++b) os << "# z " << b + 1 << " " << ctx.z[b] << "\n";
    for (int a = ctx.rho0 + 1; a <= ctx.l(); ++a) os << "# psi " << a << " " << to_string(ctx.psi(a)) << "\n";
    return os.str();
}

const std::map<std::string, std::vector<int>>& suite_names() {
    static const std::map<std::string, std::vector<int>> names{
        {"all", {}},          {"closure", {1}},   {"internalize", {2}}, {"one", {3}},
        {"tarski", {4}},      {"qbf", {5}},       {"star2model", {6}},  {"witness", {7}},
        {"binarize", {8}},    {"modal", {9}},     {"structure", {10}},
    };
    return names;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"justec: justification logic workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string spec_name = "J";
    std::uint64_t seed = corpus::kDefaultSeed;
    app.add_option("--spec", spec_name, "built-in spec name (J, JD, JT, LP, JH, with optional :standard or :total) or a spec file");
    app.add_option("--seed", seed, "corpus seed");
    std::uint64_t budget = 0;
    app.add_option("--budget", budget, "search budget (0: unlimited)");

    int code = kOk;
    Parsing parsing;
    auto spec = [&] { return load_spec(spec_name); };

    // derive
    auto* derive_cmd = app.add_subcommand("derive", "search for a *-calculus derivation");
    std::string premises_path, goal_path, frame_path, out_path;
    derive_cmd->add_option("premises", premises_path, "file with one *-expression per line")->required();
    derive_cmd->add_option("goal", goal_path, "file with the goal *-expression")->required();
    derive_cmd->add_option("--frame", frame_path, "model file whose frame is used (world-prefixed input)");
    derive_cmd->add_option("-o,--out", out_path, "certificate output (default stdout)");
    derive_cmd->callback([&] {
        LogicSpec s = spec();
        auto prem = read_stars(premises_path, parsing);
        auto goals = read_stars(goal_path, parsing);
        if (goals.size() != 1) throw InputError("goal file must hold exactly one *-expression");
        SearchOptions opts{budget};
        std::optional<Derivation> d;
        if (frame_path.empty()) {
            std::vector<StarExpr> ps;
            for (const auto& p : prem) ps.push_back(p.expr);
            d = derive(s, ps, goals[0].expr, opts);
        } else {
            Frame frame = parse_model(slurp(frame_path), parsing.opts()).frame;
            auto prefixed = [](const ParsedStar& p) {
                if (!p.world) throw InputError("frame derivations need world-prefixed expressions");
                return PrefixedStarExpr{*p.world, p.expr};
            };
            std::vector<PrefixedStarExpr> ps;
            for (const auto& p : prem) ps.push_back(prefixed(p));
            d = derive_in_frame(s, frame, ps, prefixed(goals[0]), opts);
        }
        if (!d) {
            std::cerr << "not derivable\n";
            code = kNegative;
            return;
        }
        write_output(out_path, to_certificate(*d) + "\n");
    });

    // certify
    auto* cert_cmd = app.add_subcommand("certify", "check a derivation certificate");
    std::string cert_path;
    cert_cmd->add_option("certificate", cert_path)->required();
    cert_cmd->add_option("premises", premises_path, "premises the leaves must come from");
    cert_cmd->add_option("--frame", frame_path, "model file whose frame is used");
    cert_cmd->callback([&] {
        LogicSpec s = spec();
        Derivation d = parse_certificate(slurp(cert_path));
        std::optional<Frame> frame;
        if (!frame_path.empty()) frame = parse_model(slurp(frame_path), parsing.opts()).frame;
        std::optional<std::vector<PrefixedStarExpr>> prem;
        if (!premises_path.empty()) {
            prem.emplace();
            for (const auto& p : read_stars(premises_path, parsing)) prem->push_back({p.world.value_or(0), p.expr});
        }
        auto r = check_derivation(s, frame ? &*frame : nullptr, d, prem ? &*prem : nullptr);
        if (r.ok) {
            std::cout << "valid " << to_string(d.conclusion) << "\n";
        } else {
            std::cout << "invalid: " << r.reason << (r.node.empty() ? "" : " at " + r.node) << "\n";
            code = kNegative;
        }
    });

    // sat
    auto* sat_cmd = app.add_subcommand("sat", "bounded search for an F-model");
    std::string formula_path;
    int max_states = 2;
    sat_cmd->add_option("formula", formula_path)->required();
    sat_cmd->add_option("--max-states", max_states);
    sat_cmd->add_option("-o,--out", out_path, "model output (default stdout)");
    sat_cmd->callback([&] {
        LogicSpec s = spec();
        auto r = sat_bounded(s, read_formula(formula_path, parsing), max_states, budget);
        switch (r.kind) {
            case SatResult::Kind::Sat:
                write_output(out_path, "# sat at world " + std::to_string(r.world) + "\n" + to_string(*r.model));
                break;
            case SatResult::Kind::UnsatUpTo:
                std::cout << "unsat up to " << r.states << " states\n";
                code = kNegative;
                break;
            default:
                std::cout << "budget exceeded after " << r.candidates << " candidates\n";
                code = kBudget;
        }
    });

    // check-model
    auto* check_cmd = app.add_subcommand("check-model", "frame conditions and truth of a formula");
    std::string model_path;
    WorldId world = 0;
    check_cmd->add_option("model", model_path)->required();
    check_cmd->add_option("formula", formula_path);
    check_cmd->add_option("--world", world);
    check_cmd->callback([&] {
        LogicSpec s = spec();
        FModel m = parse_model(slurp(model_path), parsing.opts());
        auto violations = check_frame(s, m.frame);
        for (const auto& v : violations) std::cout << "frame: " << v << "\n";
        if (!violations.empty()) code = kNegative;
        if (formula_path.empty()) return;
        if (!m.frame.has_world(world)) throw InputError("no world " + std::to_string(world) + " in the model");
        bool truth = evaluate(s, m, world, read_formula(formula_path, parsing), SearchOptions{budget});
        std::cout << (truth ? "true" : "false") << " at world " << world << "\n";
        if (!truth) code = kNegative;
    });

    // reduce
    auto* reduce_cmd = app.add_subcommand("reduce", "build a reduction formula with its manifest");
    std::string problem, input_path;
    reduce_cmd->add_option("problem", problem)->required()->check(CLI::IsMember({"qbf2", "bsb"}));
    reduce_cmd->add_option("input", input_path)->required();
    reduce_cmd->add_option("-o,--out", out_path);
    reduce_cmd->callback([&] {
        std::string text = slurp(input_path);
        if (problem == "qbf2") {
            LogicSpec s = spec();
            QBF2 q = parse_qbf2(joined(text));
            write_output(out_path, to_string(reduce_qbf2(s, q)) + "\n" + manifest(qbf_context(s, q)));
        } else {
            if (spec_name == "J") spec_name = "JH:standard";
            LogicSpec s = spec();
            SBFormula sb = parse_sb(text);
            write_output(out_path, to_string(reduce_bsb(s, sb)) + "\n" + manifest(bsb_context(s, sb)));
        }
    });

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference answers");
    std::string oracle_kind;
    int oracle_states = 4;
    oracle_cmd->add_option("kind", oracle_kind)->required()->check(CLI::IsMember({"qbf", "fol", "modal"}));
    oracle_cmd->add_option("input", input_path)->required();
    oracle_cmd->add_option("--max-states", oracle_states, "modal: largest model size, fol: largest universe");
    oracle_cmd->callback([&] {
        std::string text = slurp(input_path);
        if (oracle_kind == "qbf") {
            bool v = qbf2_eval(parse_qbf2(joined(text)));
            std::cout << (v ? "true" : "false") << "\n";
            if (!v) code = kNegative;
        } else if (oracle_kind == "fol") {
            SBFormula sb = parse_sb(text);
            if (sb.binary) {
                auto m = bsb_sat(sb);
                if (m)
                    std::cout << "sat\n" << to_string(*m) << "\n";
                else
                    std::cout << "unsat\n";
                if (!m) code = kNegative;
            } else {
                auto n = sb_sat_upto(sb, oracle_states);
                if (n)
                    std::cout << "sat with " << *n << " elements\n";
                else
                    std::cout << "unsat up to " << oracle_states << " elements\n";
                if (!n) code = kNegative;
            }
        } else {
            auto r = kripke_mh_sat(parse_formula(joined(text)), oracle_states);
            if (r) {
                std::cout << "# sat at world " << r->second << "\n" << to_string(kripke_as_model(r->first));
            } else {
                std::cout << "unsat up to " << oracle_states << " states\n";
                code = kNegative;
            }
        }
    });

    // modal-sat
    auto* modal_cmd = app.add_subcommand("modal-sat", "M_H tableau");
    TableauCaps caps;
    modal_cmd->add_option("formula", formula_path)->required();
    modal_cmd->add_option("--prefix-cap", caps.prefix_cap);
    modal_cmd->add_option("--depth-cap", caps.per_prefix_cap);
    modal_cmd->callback([&] {
        auto r = mh_tableau(read_formula(formula_path, parsing), caps);
        std::cout << to_string(r.status) << "\n";
        if (r.model) std::cout << to_string(kripke_as_model(*r.model));
        if (r.status == TableauStatus::Unsat) code = kNegative;
        if (r.status == TableauStatus::Unknown) code = kBudget;
    });

    // witness
    auto* witness_cmd = app.add_subcommand("witness", "build and check the witness F-model of a sentence");
    witness_cmd->add_option("problem", problem)->required()->check(CLI::IsMember({"bsb"}));
    witness_cmd->add_option("input", input_path)->required();
    witness_cmd->add_option("-o,--out", out_path, "model output");
    witness_cmd->callback([&] {
        if (spec_name == "J") spec_name = "JH:standard";
        LogicSpec s = spec();
        SBFormula sb = parse_sb(slurp(input_path));
        auto m = bsb_sat(sb);
        if (!m) {
            std::cout << "unsat: no two-element model\n";
            code = kNegative;
            return;
        }
        auto w = build_jh_witness_model(s, sb, *m);
        auto violations = check_frame(s, w.model.frame);
        for (const auto& v : violations) std::cout << "frame: " << v << "\n";
        bool truth = evaluate(s, w.model, -1, reduce_bsb(s, sb), SearchOptions{budget});
        std::cout << "reduction formula " << (truth ? "true" : "false") << " at world -1\n";
        if (!out_path.empty()) write_output(out_path, to_string(w.model));
        if (!violations.empty() || !truth) code = kNegative;
    });

    // suite
    auto* suite_cmd = app.add_subcommand("suite", "run acceptance criteria");
    std::vector<std::string> suite_args;
    suite_cmd->add_option("names", suite_args, "criterion names or numbers (default: all)");
    suite_cmd->callback([&] {
        std::vector<int> which;
        for (const auto& a : suite_args) {
            auto it = suite_names().find(a);
            if (it != suite_names().end()) {
                which.insert(which.end(), it->second.begin(), it->second.end());
                continue;
            }
            try {
                which.push_back(std::stoi(a));
            } catch (const std::exception&) {
                throw InputError("unknown suite '" + a + "'");
            }
        }
        suite::SuiteOptions opts;
        opts.seed = seed;
        for (const auto& r : suite::run_suite(opts, which)) {
            std::cout << suite::report_line(r) << "\n";
            if (!r.pass) code = kNegative;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "justec: " << e.what() << "\n";
        return kBudget;
    } catch (const std::exception& e) {
        std::cerr << "justec: " << e.what() << "\n";
        return kUsage;
    }
    return code;
}
