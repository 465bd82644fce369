#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "justec/kernel.hpp"
#include "justec/modal.hpp"
#include "justec/problems.hpp"

namespace justec {

using Valuation = std::map<std::string, bool>;

// Classical truth; throws std::out_of_range when an atom is unassigned.
bool prop_eval(Formula f, const Valuation& v);

bool qbf2_eval(const QBF2& q);

// All relation tables over {0,1} for the formula's signature (variable
// interpretations left empty), in a fixed order.
std::vector<TwoElementModel> bsb_models(const SBFormula& sb);

// Truth of the sentence in the two-element structure. Existential variables
// already interpreted by the model are held fixed; the rest are quantified.
bool fol2_eval(const SBFormula& sb, const TwoElementModel& m);

// First satisfying two-element model, with the existential witnesses filled in.
std::optional<TwoElementModel> bsb_sat(const SBFormula& sb);

// Direct search for a model of the SB sentence with 1..max_elements elements
// (equality is identity). Returns the universe size found.
std::optional<int> sb_sat_upto(const SBFormula& sb, int max_elements);

// Least fixpoint of the frame-free App/Sum/conversion rules over the
// premises, restricted to terms in `terms`. Formulas stay inside the
// premises' subformulas by construction. Throws std::invalid_argument for
// inputs with `!`, constants or metavariables.
std::set<StarExpr> star_forward_closure(const LogicSpec& spec, const std::vector<StarExpr>& premises,
                                        const std::vector<Term>& terms);

// First pointed M_H model with at most max_states worlds, by enumeration.
std::optional<std::pair<KripkeModel, WorldId>> kripke_mh_sat(ModalFormula f, int max_states);

}  // namespace justec
