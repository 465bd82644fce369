#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "justec/kernel.hpp"
#include "justec/models.hpp"
#include "justec/oracles.hpp"
#include "justec/problems.hpp"
#include "justec/starcalc.hpp"

namespace justec {

// Constants justifying the tautology schemes the reduction terms are built
// from. `c_dot` justifies the agent-1 Application scheme for the agent the
// table was built for.
struct StandardTerms {
    Term id, left, right, tran, append, hypappend, appendconc, addhyp, replaceleft, replaceright,
        mphypoth, c_dot;
};

struct StandardField {
    const char* name;
    const char* scheme;
    Term StandardTerms::*slot;
};
const std::vector<StandardField>& standard_fields();

// Throws SpecError naming the first field without a justifying constant.
StandardTerms standard_terms(const LogicSpec& spec, AgentId agent);

// proj^r_x: justifies (φ1 ∧ ... ∧ φr) → φx for left-nested conjunctions.
Term mk_proj(int r, int x, const StandardTerms& st);
// replace^k_l: justifies (φl → φ'l) → (φ1 ∧ ... ∧ φk → φ1 ∧ ... φ'l ... ∧ φk).
Term mk_replace(int k, int l, const StandardTerms& st);

// The formula a standard field or a proj/replace term is meant to justify,
// with the conjuncts taken from `parts` (replace uses parts plus one more
// formula as φ'l). Used by contract tests.
Formula proj_contract(const std::vector<Formula>& parts, int x);
Formula replace_contract(const std::vector<Formula>& parts, int l, Formula replacement);

// ------------------------------------------------------------ propositional

struct PropContext {
    AgentId agent = 1;
    Formula phi;
    std::vector<Formula> psi;  // ψ1..ψl, stored 0-based
    int rho = 0;               // ψ1..ψρ are the atoms
    StandardTerms st;

    int l() const { return static_cast<int>(psi.size()); }
    int index_of(Formula f) const;  // 1-based, 0 when absent
    Formula truth_atom(int j, bool value) const;  // [ψj]^⊤ / [ψj]^⊥
    Term x(int j) const;
    Term truth(int j) const;
};

// Atoms come first, in `atom_order` (the formula's own atoms in first-occurrence
// order when empty), then the remaining subformulas by size with ties broken
// by first occurrence in a left-to-right traversal.
PropContext make_prop_context(const LogicSpec& spec, Formula phi, AgentId agent = 1,
                              std::vector<std::string> atom_order = {});

std::vector<Formula> eval_q_conjuncts(const PropContext& ctx, int j);
Formula build_eval_q(const PropContext& ctx, int j);

struct TTower {
    std::vector<Term> T;  // T^1..T^l, 0-based
    Term TJ;
};
TTower build_T_q(const PropContext& ctx);

std::vector<Formula> s_conjuncts(const PropContext& ctx);
Formula build_S_q(const PropContext& ctx);
// x_j:_i[p_j]^{v(p_j)} for every atom position j.
std::vector<Formula> build_Sv(const PropContext& ctx, const Valuation& v);

StarExpr star_of(Formula just);

bool check_tarski(const LogicSpec& spec, const PropContext& ctx, const Valuation& v,
                  const SearchOptions& opts = {});

Formula reduce_qbf2(const LogicSpec& spec, const QBF2& qbf, AgentId agent = 1);
PropContext qbf_context(const LogicSpec& spec, const QBF2& qbf, AgentId agent = 1);
// ∃c1 ∀c2: premises(c1, c2) ∪ S(¬φ) does not derive T^J(¬φ) : [¬φ]^⊤.
bool qbf_characterization_check(const LogicSpec& spec, const QBF2& qbf, AgentId agent = 1,
                                const SearchOptions& opts = {});
// Same question with both universal premises present at once, the form the
// reduction formula actually asserts.
bool qbf_joint_premise_check(const LogicSpec& spec, const QBF2& qbf, AgentId agent = 1,
                             const SearchOptions& opts = {});

// Every listed variable occurs at most once; returns the offenders.
std::vector<Term> repeated_variables(Term t, const std::vector<Term>& vars);

// ------------------------------------------------------------ first order

// Bit-vector encoding of an SB sentence over a two-element universe. Needs at
// least one existential variable.
SBFormula binarize_sb(const SBFormula& sb);
// Replaces z = z' by a fresh unary relation that separates the two elements,
// witnessed by two fresh existential variables.
SBFormula eliminate_equality(const SBFormula& sb);

struct FoContext {
    SBFormula sb;                // equality-free
    Formula theta;               // the quantifier-free formula the tower evaluates
    std::vector<std::string> z;  // x1..xk, y1..yk'
    std::vector<Formula> sub;    // ψ_{ρ0+1}..ψ_l: relation atoms, then the rest
    int rho0 = 0, rho1 = 0, alpha = 0;
    StandardTerms st1, st2;

    int l() const { return rho0 + static_cast<int>(sub.size()); }
    Formula psi(int a) const { return sub.at(a - rho0 - 1); }
    int index_of(Formula f) const;
    const FoAtom& atom_at(int a) const;  // relation atom at position a
    int z_index(const std::string& var) const;  // 1-based

    Formula truth_atom(int a, bool value) const;
    Formula bit(int l, bool value) const;  // [p_l]^⊤ = p_l, [p_l]^⊥ = ¬p_l
    Formula ok(int l) const;
    Formula rel_atom(const std::string& r, bool value) const;
    Formula active() const;

    Term var(int a) const;
    Term rel(const std::string& r) const;
    Term value(const std::string& z) const;
    Term match_var(const std::string& z, int l) const;
    Term truth(int a) const;
    Term rho() const;
};

FoContext make_fo_context(const LogicSpec& jh, const SBFormula& sb, Formula theta);

Term build_gather(const FoContext& ctx, const std::string& r);
// match_b for the relation atom at position a.
Term build_match(const FoContext& ctx, int a, int b);
Term build_bang_match(const FoContext& ctx, int a, int b);
std::vector<Formula> match_conjuncts(const FoContext& ctx);
Formula build_match_formula(const FoContext& ctx);
std::vector<Formula> eval_fo_conjuncts(const FoContext& ctx, int a);
Formula build_eval_fo(const FoContext& ctx, int a);
std::vector<Formula> eval_fo_all(const FoContext& ctx);

struct FoTower {
    std::vector<Term> T;  // T^1..T^l, 0-based
    Term t_phi;
};
FoTower build_T_fo(const FoContext& ctx);

// gather_r:_1(lits ∧ [R]^v) where lits spell the tuple.
Formula gather_body(const FoContext& ctx, const std::string& r, const std::vector<bool>& tuple, bool v);

// The built context for the test formula, over the negated matrix.
FoContext bsb_context(const LogicSpec& jh, const SBFormula& bsb);
Formula reduce_bsb(const LogicSpec& jh, const SBFormula& bsb);

struct GatherFact {
    std::string relation;
    std::vector<bool> tuple;
    bool value = false;
};

bool check_star2model(const LogicSpec& jh, const FoContext& ctx, const std::vector<GatherFact>& gathers,
                      const std::vector<std::pair<std::string, bool>>& values,
                      const SearchOptions& opts = {});

// Structural discipline of t^φ: each value_z once, one !gather_r per relation
// atom, and `!` applied only to !-free agent-1 blocks. Returns violations.
std::vector<std::string> fo_structure_violations(const FoContext& ctx, Term t_phi);

// The model of the hardness proof for a two-element model of the sentence
// with its existential witnesses in `m.interp`. Worlds -1..2^α.
struct WitnessModel {
    FModel model;
    FoContext ctx;
    WorldId last = 0;  // 2^α
};
WitnessModel build_jh_witness_model(const LogicSpec& jh, const SBFormula& bsb, const TwoElementModel& m);

}  // namespace justec
