#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "justec/kernel.hpp"
#include "justec/modal.hpp"
#include "justec/parser.hpp"
#include "justec/problems.hpp"

namespace justec::corpus {

using Rng = std::mt19937_64;

constexpr std::uint64_t kDefaultSeed = 20140901;

// Distinct modal formulas over atoms p, q and agents 1..4 with at most
// `max_subformulas` distinct subformulas and modal depth at most `max_depth`.
std::vector<ModalFormula> modal_formulas(std::uint64_t seed, int count, int max_subformulas = 6,
                                         int max_depth = 2);

// Ground, !-free, constant-free derivation questions: at most four premises
// over variables x, y, z and a goal term of size at most six. The spec is
// drawn from J, JD, JT and JH.
struct StarInstance {
    LogicSpec spec;
    std::vector<StarExpr> premises;
    StarExpr goal;
};
std::vector<StarInstance> star_instances(std::uint64_t seed, int count);

// Premise-free Hilbert proofs of at most `max_lines` lines, each checked by
// check_hilbert_proof against `spec`.
std::vector<HilbertProof> hilbert_proofs(const LogicSpec& spec, std::uint64_t seed, int count, int max_lines = 6);

// One-occurrence questions: the goal term contains `s` once and no `!`; the
// alternatives are the candidate premises s:_agent φ_a.
struct OneInstance {
    LogicSpec spec;
    std::vector<StarExpr> base;
    Term s;
    std::vector<StarExpr> alternatives;
    StarExpr goal;
};
std::vector<OneInstance> one_instances(std::uint64_t seed, int count, int max_alternatives = 3);

// Every formula over `atoms` with at most `max_connectives` of ¬, ∧, ∨, →.
std::vector<Formula> prop_formulas_exhaustive(const std::vector<std::string>& atoms, int max_connectives);
// Random formulas using every one of `atoms` at least once.
std::vector<Formula> prop_formulas_sampled(std::uint64_t seed, int count, const std::vector<std::string>& atoms,
                                           int max_connectives);

// ∃∀ QBFs with at most `max_exists` / `max_forall` variables and matrices of
// at most `max_connectives` connectives.
std::vector<QBF2> qbf_instances(std::uint64_t seed, int count, int max_exists = 2, int max_forall = 2,
                                int max_connectives = 4);

// Schönfinkel-Bernays sentences with at most `max_exists` existential and
// `max_forall` universal variables over relations of arity at most
// `max_arity`, equality included when `equality` is set.
struct SbShape {
    int max_exists = 3;
    int max_forall = 2;
    int max_relations = 2;
    int max_arity = 2;
    int max_connectives = 4;
    bool equality = true;
    bool require_exists = true;
};
std::vector<SBFormula> sb_instances(std::uint64_t seed, int count, const SbShape& shape);

}  // namespace justec::corpus
