#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "justec/frame.hpp"
#include "justec/kernel.hpp"
#include "justec/starcalc.hpp"

namespace justec {

// Kripke model plus the base of a minimal admissible evidence function: the
// evidence function is the closure of `aef_base` under the calculus rules.
struct FModel {
    Frame frame;
    std::map<std::string, std::set<WorldId>> valuation;
    std::vector<PrefixedStarExpr> aef_base;

    bool val(const std::string& atom, WorldId w) const;
};

// Empty iff the frame meets the spec: JD agents serial, JT agents reflexive,
// i ↪ j gives a R_i b R_j c ⇒ a R_j c, and i ⊂ j gives R_i ⊆ R_j. Also
// reports edges with endpoints outside the world set.
std::vector<std::string> check_frame(const LogicSpec& spec, const Frame& frame);

// Evaluation against one model. Owns a prover over the model's base, so
// repeated membership queries share memo tables.
class ModelChecker {
public:
    ModelChecker(const LogicSpec& spec, const FModel& model, SearchOptions opts = {});
    ~ModelChecker();

    bool aef_member(WorldId w, const StarExpr& e);
    bool evaluate(WorldId w, Formula f);
    // For each (w, *_i(t, φ)): membership implies truth of t:_i φ at w.
    bool strong_evidence_holds(const std::vector<PrefixedStarExpr>& pairs);

private:
    const LogicSpec& spec_;
    const FModel& model_;
    std::unique_ptr<Prover> prover_;
};

bool aef_member(const LogicSpec& spec, const FModel& m, WorldId w, AgentId i, Term t, Formula f,
                const SearchOptions& opts = {});
bool evaluate(const LogicSpec& spec, const FModel& m, WorldId w, Formula f, const SearchOptions& opts = {});
bool strong_evidence_holds(const LogicSpec& spec, const FModel& m, const std::vector<PrefixedStarExpr>& pairs,
                           const SearchOptions& opts = {});

struct SatResult {
    enum class Kind { Sat, UnsatUpTo, BudgetExceeded };
    Kind kind = Kind::BudgetExceeded;
    std::optional<FModel> model;
    WorldId world = 0;
    int states = 0;         // UnsatUpTo bound, or size of the Sat model
    std::uint64_t candidates = 0;
};

std::string to_string(SatResult::Kind k);

// Exhaustive search over models with 1..max_states worlds: frames passing
// check_frame, valuations of the formula's atoms, and aef bases drawn from
// {(w, *_i(t, ψ)) : t:_i ψ a subformula}. `budget` caps the number of
// candidate models and the prover nodes per query (0: unlimited).
SatResult sat_bounded(const LogicSpec& spec, Formula f, int max_states, std::uint64_t budget = 0);

// Text format:
//   worlds -1 0 1
//   rel 3: (-1 0) (0 1)
//   val p: 0 1
//   aef: 0 *1 {x} p
FModel parse_model(const std::string& text, const ParseOptions& opts = {});
std::string to_string(const FModel& m);

}  // namespace justec
