#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace justec {

// Agents are 1-based indices into the governing LogicSpec.
using AgentId = int;

enum class TermKind : std::uint8_t { Variable, Constant, App, Sum, Bang, Meta };

struct TermNode;

/// Immutable, hash-consed justification term. Two structurally equal terms
/// always share the same node, so equality and hashing are pointer-based.
class Term {
public:
    Term() = default;

    static Term variable(std::string_view name);
    static Term constant(std::string_view name);
    static Term app(Term left, Term right);
    static Term sum(Term left, Term right);
    static Term bang(Term inner);
    static Term meta(int id);

    // Left-associated n-ary sugar: [t1 . t2 . ... . tk].
    static Term app_chain(const std::vector<Term>& ts);
    static Term sum_chain(const std::vector<Term>& ts);

    TermKind kind() const;
    const std::string& name() const;
    int meta_id() const;
    Term left() const;
    Term right() const;
    Term inner() const { return left(); }

    bool is_null() const { return node_ == nullptr; }
    bool is_ground() const;
    bool has_bang() const;
    std::size_t size() const;
    const TermNode* node() const { return node_; }

    friend bool operator==(Term a, Term b) { return a.node_ == b.node_; }
    friend bool operator!=(Term a, Term b) { return a.node_ != b.node_; }
    friend bool operator<(Term a, Term b);

private:
    explicit Term(const TermNode* n) : node_(n) {}
    const TermNode* node_ = nullptr;
    friend struct TermNode;
    friend class Interner;
};

enum class FormulaKind : std::uint8_t {
    Bottom,
    Atom,
    Not,
    Implies,
    And,
    Or,
    Just,
    Box,
    Diamond,
    Meta
};

struct FormulaNode;

/// Immutable, hash-consed formula of L_n. Box and Diamond only appear in
/// modal formulas (see modal.hpp); everything else is justification syntax.
class Formula {
public:
    Formula() = default;

    static Formula bottom();
    static Formula top();  // ~false
    static Formula atom(std::string_view name);
    static Formula negation(Formula f);
    static Formula implies(Formula a, Formula b);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula just(Term t, AgentId agent, Formula body);
    static Formula box(AgentId agent, Formula body);
    static Formula diamond(AgentId agent, Formula body);
    static Formula meta(int id);

    // Left-associated conjunction; the empty conjunction is top().
    static Formula conj_all(const std::vector<Formula>& fs);
    // Left-associated disjunction; the empty disjunction is bottom().
    static Formula disj_all(const std::vector<Formula>& fs);

    FormulaKind kind() const;
    const std::string& name() const;
    int meta_id() const;
    AgentId agent() const;
    Term term() const;
    Formula left() const;
    Formula right() const;
    Formula body() const { return left(); }

    bool is_null() const { return node_ == nullptr; }
    bool is_ground() const;
    bool is_modal_free() const;
    bool has_just() const;
    std::size_t size() const;
    std::size_t hash() const;
    const FormulaNode* node() const { return node_; }

    friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
    friend bool operator!=(Formula a, Formula b) { return a.node_ != b.node_; }
    friend bool operator<(Formula a, Formula b);

private:
    explicit Formula(const FormulaNode* n) : node_(n) {}
    const FormulaNode* node_ = nullptr;
    friend class Interner;
};

struct TermNode {
    TermKind kind;
    std::string name;
    int meta = -1;
    const TermNode* left = nullptr;
    const TermNode* right = nullptr;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::uint64_t serial = 0;
    bool ground = true;
    bool bang = false;
};

struct FormulaNode {
    FormulaKind kind;
    std::string name;
    int meta = -1;
    AgentId agent = 0;
    const TermNode* term = nullptr;
    const FormulaNode* left = nullptr;
    const FormulaNode* right = nullptr;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::uint64_t serial = 0;
    bool ground = true;
    bool modal = false;
    bool just = false;
};

std::string to_string(Term t);
std::string to_string(Formula f);
std::ostream& operator<<(std::ostream& os, Term t);
std::ostream& operator<<(std::ostream& os, Formula f);

// Default naming convention for the parser: `c`, `c<digits>` and `c_<...>`
// are constants, every other identifier is a variable.
bool is_default_constant_name(std::string_view name);

// Structural helpers.
void collect_subterms(Term t, std::vector<Term>& out);
void collect_subformulas(Formula f, std::vector<Formula>& out);
void collect_atoms(Formula f, std::vector<std::string>& out);
std::size_t count_occurrences(Term haystack, Term needle);
int max_meta_id(Formula f);
int max_meta_id(Term t);

}  // namespace justec

template <>
struct std::hash<justec::Term> {
    std::size_t operator()(justec::Term t) const noexcept {
        return std::hash<const void*>{}(t.node());
    }
};

template <>
struct std::hash<justec::Formula> {
    std::size_t operator()(justec::Formula f) const noexcept {
        return std::hash<const void*>{}(f.node());
    }
};
