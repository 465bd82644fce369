#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "justec/parser.hpp"
#include "justec/syntax.hpp"

namespace justec {

enum class BaseLogic { J, JD, JT };

std::string to_string(BaseLogic l);

// One CS line: `constant` justifies scheme `scheme` for `agent`. The scheme
// field selects by id: "*" matches every scheme, a family name such as "App"
// matches every "App_<k>", anything else must be an exact id. Agent 0 means
// every agent.
struct CsEntry {
    std::string constant;
    AgentId agent = 0;
    std::string scheme;
};

struct ConstantSpec {
    bool total = false;
    std::vector<CsEntry> entries;
    std::string label;  // "total", "standard" or "custom"
};

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LogicSpec {
    int n = 1;
    std::vector<std::pair<AgentId, AgentId>> subset;  // (i, j) means i ⊂ j
    std::vector<std::pair<AgentId, AgentId>> hook;    // (i, j) means i ↪ j
    std::vector<BaseLogic> logics;                    // index 0 is agent 1
    ConstantSpec cs;
    bool an_restrict = false;
    std::string name;

    BaseLogic logic(AgentId i) const { return logics.at(i - 1); }
    bool is_subset(AgentId i, AgentId j) const;
    bool is_hook(AgentId i, AgentId j) const;
    // {h : i ⊂* h}, reflexive-transitive, sorted.
    std::vector<AgentId> subset_up(AgentId i) const;
    // Agents j with j ↪ i, i.e. the agents verifying i.
    std::vector<AgentId> verifiers_of(AgentId i) const;

    bool cs_justifies(const std::string& constant, AgentId agent,
                      const std::string& scheme_id) const;
    // Constants named in the CS (Total yields the designated constant).
    std::vector<std::string> cs_constants() const;
};

// Raw config document: key -> value text, in file order.
using RawConfig = std::vector<std::pair<std::string, std::string>>;

RawConfig parse_config_text(const std::string& text);

struct ValidatedSpec {
    LogicSpec spec;
    bool appropriate = true;
    std::vector<std::string> warnings;
};

ValidatedSpec validate_spec(const RawConfig& raw);
LogicSpec builtin_spec(const std::string& name);  // J, JD, JT, LP, JH
LogicSpec load_spec(const std::string& name_or_path);
std::string spec_to_config(const LogicSpec& spec);

// The designated constant of a Total CS.
inline const std::string kTotalConstant = "c0";

ConstantSpec total_cs();
// One named constant per standard propositional scheme (c_id, c_left, ...),
// c_dot for every Application scheme, and a catch-all `c` so the CS stays
// axiomatically appropriate.
ConstantSpec standard_cs();

// ------------------------------------------------------------ schemes

struct SchemePattern {
    std::string id;
    Formula skeleton;        // formula metas and term metas, numbered from 0
    int formula_metas = 0;   // ids used: [0, formula_metas)
    int term_metas = 0;      // ids used: [0, term_metas)
    AgentId agent = 0;       // agent slot (0 for propositional schemes)
    AgentId agent2 = 0;      // second slot for Conversion / Verification
};

std::vector<SchemePattern> axiom_schemes(const LogicSpec& spec);
const SchemePattern* find_scheme(const std::vector<SchemePattern>& catalog,
                                 const std::string& id);

// ------------------------------------------------------------ unification

struct Substitution {
    std::map<int, Formula> formulas;
    std::map<int, Term> terms;

    Formula apply(Formula f) const;
    Term apply(Term t) const;
    bool empty() const { return formulas.empty() && terms.empty(); }
};

// Trail-based unifier over both metavariable sorts. Bindings are undone with
// mark()/undo(); resolve() applies the current bindings completely.
class Unifier {
public:
    bool unify(Formula a, Formula b);
    bool unify(Term a, Term b);

    Formula walk(Formula f) const;
    Term walk(Term t) const;
    Formula resolve(Formula f) const;
    Term resolve(Term t) const;

    std::size_t mark() const { return trail_.size(); }
    void undo(std::size_t mark);

    Substitution snapshot() const;

private:
    bool occurs(int id, Formula f) const;
    bool occurs_term(int id, Term t) const;
    bool occurs_term_in_formula(int id, Formula f) const;

    std::unordered_map<int, Formula> fbind_;
    std::unordered_map<int, Term> tbind_;
    std::vector<std::pair<bool, int>> trail_;  // (is_formula, id)
};

// Shift every metavariable id by `offset` (renaming apart).
Formula shift_metas(Formula f, int offset);
Term shift_metas(Term t, int offset);

std::optional<Substitution> match_scheme(const SchemePattern& pattern, Formula formula);
std::optional<Substitution> unify(Formula a, Formula b);

// ------------------------------------------------------------ AN

bool an_holds(const LogicSpec& spec, AgentId agent, Term term, Formula formula);
bool an_holds(const LogicSpec& spec, const std::vector<SchemePattern>& catalog,
              AgentId agent, Term term, Formula formula);

// ------------------------------------------------------------ Hilbert proofs

struct HilbertLine {
    enum class Kind { Axiom, AN, ModusPonens };
    Formula formula;
    Kind kind = Kind::Axiom;
    std::string scheme;          // Axiom
    Substitution subst;          // Axiom, optional witness
    int major = -1, minor = -1;  // ModusPonens: major is A->B, minor is A (0-based)
};

struct HilbertProof {
    std::vector<HilbertLine> lines;
    Formula conclusion() const { return lines.empty() ? Formula() : lines.back().formula; }
};

struct ProofCheck {
    bool ok = true;
    int bad_line = -1;
    std::string reason;
};

ProofCheck check_hilbert_proof(const LogicSpec& spec, const HilbertProof& proof);

// Throws SpecError when an axiom line has no justifying constant for `agent`.
Term internalize(const LogicSpec& spec, AgentId agent, const HilbertProof& proof);

}  // namespace justec
