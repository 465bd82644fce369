#pragma once

#include <map>
#include <string>
#include <vector>

#include "justec/syntax.hpp"

namespace justec {

// ∃x1..xk ∀y1..yk' matrix, matrix propositional over the listed atoms.
struct QBF2 {
    std::vector<std::string> exists;
    std::vector<std::string> forall;
    Formula matrix;
};

// `exists p1 p2 forall q1 : <matrix>`; either block may be omitted.
QBF2 parse_qbf2(const std::string& text);
std::string to_string(const QBF2& q);
// Throws std::invalid_argument on overlapping blocks or stray atoms.
void validate_qbf2(const QBF2& q);

// First-order atom: R(z1,...,zm) or z = z'.
struct FoAtom {
    bool equality = false;
    std::string relation;
    std::vector<std::string> args;
};

// ∃x⃗∀y⃗ψ with ψ quantifier-free over relation atoms and equalities. The
// matrix is an ordinary Formula whose atom names are keys of `atoms`.
// `binary` marks the two-element-universe variant.
struct SBFormula {
    std::vector<std::string> exists;
    std::vector<std::string> forall;
    std::map<std::string, int> arity;  // relation name -> arity, in declaration order by name
    std::vector<std::string> relation_order;
    std::map<std::string, FoAtom> atoms;
    Formula matrix;
    bool binary = false;

    bool has_equality() const;
};

std::string atom_key(const FoAtom& a);
Formula fo_atom(SBFormula& sb, const FoAtom& a);  // registers and returns the atom
void declare_relation(SBFormula& sb, const std::string& name, int arity);

// Header lines `rel R 2`, optional `binary`, then one formula line
// `exists x1 forall y1 : R(x1,y1) & ~(x1 = y1)`.
SBFormula parse_sb(const std::string& text);
std::string to_string(const SBFormula& sb);
void validate_sb(const SBFormula& sb);

// Two-element structure over {0, 1} (0 plays ⊥, 1 plays ⊤). Table entries are
// indexed by the tuple read as a little-endian bit string: argument j
// contributes bit j.
struct TwoElementModel {
    std::map<std::string, std::vector<bool>> tables;
    std::map<std::string, int> interp;  // variable -> element

    bool holds(const std::string& rel, const std::vector<int>& tuple) const;
};

std::string to_string(const TwoElementModel& m);

}  // namespace justec
