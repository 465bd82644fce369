#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "justec/frame.hpp"
#include "justec/syntax.hpp"

namespace justec {

// Modal formulas share the Formula representation: Box/Diamond with agents
// 1..4 and no justification assertions.
using ModalFormula = Formula;

constexpr int kMhAgents = 4;

bool is_modal_formula(Formula f, int agents = kMhAgents);
int modal_depth(Formula f);

// t:_i φ becomes []_i φ; everything else is kept.
ModalFormula forgetful(Formula f);

struct KripkeModel {
    Frame frame;
    std::map<std::string, std::set<WorldId>> valuation;

    bool val(const std::string& atom, WorldId w) const;
};

bool modal_eval(const KripkeModel& m, WorldId w, ModalFormula f);

// The M_H frame conditions: R3 and R4 serial, R3 ⊆ R4, and for
// (i, j) in {(1,2), (2,3), (4,4)}: a R_j b R_i c implies a R_i c.
std::vector<std::string> mh_frame_violations(const Frame& f);

// ------------------------------------------------------------ tableau

struct SignedFormula {
    bool sign;  // true: T, false: F
    ModalFormula formula;
    friend bool operator<(const SignedFormula& a, const SignedFormula& b) {
        if (a.sign != b.sign) return a.sign < b.sign;
        return a.formula < b.formula;
    }
    friend bool operator==(const SignedFormula& a, const SignedFormula& b) {
        return a.sign == b.sign && a.formula == b.formula;
    }
};

// Prefix σ.(g,i): parent index, creation counter g and agent i. Index 0 is
// the root (0,0).
struct Prefix {
    int parent = -1;
    int g = 0;
    AgentId agent = 0;
    std::set<SignedFormula> labels;
    // Set when this prefix's initial label set repeats an ancestor's; the
    // prefix is then identified with that ancestor.
    int loop_to = -1;
};

// An accepting (open, saturated) branch fragment.
struct Branch {
    std::vector<Prefix> prefixes;
    bool closed = false;
};

enum class TableauStatus { Sat, Unsat, Unknown };

std::string to_string(TableauStatus s);

struct TableauCaps {
    int prefix_cap = 4000;     // total prefixes created across the search
    int per_prefix_cap = 64;   // maximal prefix depth
};

struct TableauResult {
    TableauStatus status = TableauStatus::Unknown;
    std::optional<Branch> branch;
    std::optional<KripkeModel> model;
    std::uint64_t prefixes_created = 0;
};

TableauResult mh_tableau(ModalFormula f, const TableauCaps& caps = {});

// Worlds are the prefix indices (loop prefixes merged into their ancestor).
KripkeModel mh_model_from_branch(const Branch& b);

}  // namespace justec
