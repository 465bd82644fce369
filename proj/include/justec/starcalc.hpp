#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "justec/frame.hpp"
#include "justec/kernel.hpp"

namespace justec {

enum class Rule { Premise, AN, App, SumL, SumR, Hook, Subset, Dis };

std::string to_string(Rule r);

// A derivation tree of the *-calculus. In frame-free derivations every world
// is 0 and Dis never occurs.
struct Derivation {
    Rule rule = Rule::Premise;
    WorldId world = 0;
    StarExpr conclusion;
    std::vector<Derivation> children;

    std::size_t size() const;
};

struct DerivationCheck {
    bool ok = true;
    std::string reason;
    std::string node;  // printed conclusion of the first bad node
};

// Validates every node against its rule. Premise leaves are checked against
// `premises` when given (schematic premises match by instance).
DerivationCheck check_derivation(const LogicSpec& spec, const Frame* frame,
                                 const Derivation& d,
                                 const std::vector<PrefixedStarExpr>* premises = nullptr);

// s-expression certificate: (Rule world "*i {t} F" child...)
std::string to_certificate(const Derivation& d);
Derivation parse_certificate(const std::string& text);

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded() : std::runtime_error("search budget exceeded") {}
};

struct SearchOptions {
    std::uint64_t budget = 0;  // 0: unlimited search nodes
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t memo_hits = 0;
};

// Backward, term-directed search for one fixed premise set. Memo tables live
// as long as the object, so repeated queries against the same premises (as
// issued by model evaluation) share work.
class Prover {
public:
    Prover(const LogicSpec& spec, const Frame& frame, std::vector<PrefixedStarExpr> premises,
           SearchOptions opts = {});
    ~Prover();
    Prover(const Prover&) = delete;
    Prover& operator=(const Prover&) = delete;

    std::optional<Derivation> prove(const PrefixedStarExpr& goal);
    bool holds(const PrefixedStarExpr& goal);

    const SearchStats& stats() const;
    void reset_budget();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::optional<Derivation> derive(const LogicSpec& spec, const std::vector<StarExpr>& premises,
                                 const StarExpr& goal, const SearchOptions& opts = {});

std::optional<Derivation> derive_in_frame(const LogicSpec& spec, const Frame& frame,
                                          const std::vector<PrefixedStarExpr>& premises,
                                          const PrefixedStarExpr& goal,
                                          const SearchOptions& opts = {});

}  // namespace justec
