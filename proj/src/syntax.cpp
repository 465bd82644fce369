#include "justec/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace justec {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct TermKey {
    const TermNode* n;
};
struct TermKeyHash {
    std::size_t operator()(const TermNode* n) const { return n->hash; }
};
struct TermKeyEq {
    bool operator()(const TermNode* a, const TermNode* b) const {
        return a->kind == b->kind && a->meta == b->meta && a->left == b->left &&
               a->right == b->right && a->name == b->name;
    }
};
struct FormulaKeyHash {
    std::size_t operator()(const FormulaNode* n) const { return n->hash; }
};
struct FormulaKeyEq {
    bool operator()(const FormulaNode* a, const FormulaNode* b) const {
        return a->kind == b->kind && a->meta == b->meta && a->agent == b->agent &&
               a->term == b->term && a->left == b->left && a->right == b->right &&
               a->name == b->name;
    }
};

}  // namespace

// Global hash-consing store. Nodes live for the whole process; interning is
// guarded by a mutex so independent sessions may build syntax concurrently.
class Interner {
public:
    static Interner& instance() {
        static Interner in;
        return in;
    }

    const TermNode* intern(TermNode proto) {
        std::size_t h = std::hash<int>{}(static_cast<int>(proto.kind));
        h = mix(h, std::hash<std::string>{}(proto.name));
        h = mix(h, std::hash<int>{}(proto.meta));
        h = mix(h, proto.left ? proto.left->hash : 0);
        h = mix(h, proto.right ? proto.right->hash : 0);
        proto.hash = h;
        std::lock_guard<std::mutex> lock(mu_);
        auto it = terms_.find(&proto);
        if (it != terms_.end()) return *it;
        auto owned = std::make_unique<TermNode>(std::move(proto));
        owned->serial = next_serial_++;
        const TermNode* raw = owned.get();
        term_store_.push_back(std::move(owned));
        terms_.insert(raw);
        return raw;
    }

    const FormulaNode* intern(FormulaNode proto) {
        std::size_t h = std::hash<int>{}(static_cast<int>(proto.kind)) * 31;
        h = mix(h, std::hash<std::string>{}(proto.name));
        h = mix(h, std::hash<int>{}(proto.meta));
        h = mix(h, std::hash<int>{}(proto.agent));
        h = mix(h, proto.term ? proto.term->hash : 0);
        h = mix(h, proto.left ? proto.left->hash : 0);
        h = mix(h, proto.right ? proto.right->hash : 0);
        proto.hash = h;
        std::lock_guard<std::mutex> lock(mu_);
        auto it = formulas_.find(&proto);
        if (it != formulas_.end()) return *it;
        auto owned = std::make_unique<FormulaNode>(std::move(proto));
        owned->serial = next_serial_++;
        const FormulaNode* raw = owned.get();
        formula_store_.push_back(std::move(owned));
        formulas_.insert(raw);
        return raw;
    }

    static Term wrap(const TermNode* n) { return Term(n); }
    static Formula wrap(const FormulaNode* n) { return Formula(n); }

private:
    std::mutex mu_;
    std::uint64_t next_serial_ = 1;
    std::vector<std::unique_ptr<TermNode>> term_store_;
    std::vector<std::unique_ptr<FormulaNode>> formula_store_;
    std::unordered_set<const TermNode*, TermKeyHash, TermKeyEq> terms_;
    std::unordered_set<const FormulaNode*, FormulaKeyHash, FormulaKeyEq> formulas_;
};

// ---------------------------------------------------------------- Term

namespace {

Term make_term(TermKind kind, std::string name, int meta, const TermNode* l,
               const TermNode* r) {
    TermNode n{};
    n.kind = kind;
    n.name = std::move(name);
    n.meta = meta;
    n.left = l;
    n.right = r;
    n.size = 1 + (l ? l->size : 0) + (r ? r->size : 0);
    n.ground = kind != TermKind::Meta && (!l || l->ground) && (!r || r->ground);
    n.bang = kind == TermKind::Bang || (l && l->bang) || (r && r->bang);
    return Interner::wrap(Interner::instance().intern(std::move(n)));
}

}  // namespace

Term Term::variable(std::string_view name) {
    return make_term(TermKind::Variable, std::string(name), -1, nullptr, nullptr);
}
Term Term::constant(std::string_view name) {
    return make_term(TermKind::Constant, std::string(name), -1, nullptr, nullptr);
}
Term Term::app(Term l, Term r) {
    return make_term(TermKind::App, {}, -1, l.node_, r.node_);
}
Term Term::sum(Term l, Term r) {
    return make_term(TermKind::Sum, {}, -1, l.node_, r.node_);
}
Term Term::bang(Term inner) {
    return make_term(TermKind::Bang, {}, -1, inner.node_, nullptr);
}
Term Term::meta(int id) { return make_term(TermKind::Meta, {}, id, nullptr, nullptr); }

Term Term::app_chain(const std::vector<Term>& ts) {
    if (ts.empty()) throw std::invalid_argument("app_chain: empty");
    Term acc = ts.front();
    for (std::size_t i = 1; i < ts.size(); ++i) acc = app(acc, ts[i]);
    return acc;
}
Term Term::sum_chain(const std::vector<Term>& ts) {
    if (ts.empty()) throw std::invalid_argument("sum_chain: empty");
    Term acc = ts.front();
    for (std::size_t i = 1; i < ts.size(); ++i) acc = sum(acc, ts[i]);
    return acc;
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
int Term::meta_id() const { return node_->meta; }
Term Term::left() const { return Term(node_->left); }
Term Term::right() const { return Term(node_->right); }
bool Term::is_ground() const { return node_->ground; }
bool Term::has_bang() const { return node_->bang; }
std::size_t Term::size() const { return node_->size; }
bool operator<(Term a, Term b) { return a.node_->serial < b.node_->serial; }

// ---------------------------------------------------------------- Formula

namespace {

Formula make_formula(FormulaKind kind, std::string name, int meta, AgentId agent,
                     const TermNode* t, const FormulaNode* l, const FormulaNode* r) {
    FormulaNode n{};
    n.kind = kind;
    n.name = std::move(name);
    n.meta = meta;
    n.agent = agent;
    n.term = t;
    n.left = l;
    n.right = r;
    n.size = 1 + (l ? l->size : 0) + (r ? r->size : 0);
    n.ground = kind != FormulaKind::Meta && (!t || t->ground) && (!l || l->ground) &&
               (!r || r->ground);
    n.modal = kind == FormulaKind::Box || kind == FormulaKind::Diamond ||
              (l && l->modal) || (r && r->modal);
    n.just = kind == FormulaKind::Just || (l && l->just) || (r && r->just);
    return Interner::wrap(Interner::instance().intern(std::move(n)));
}

}  // namespace

Formula Formula::bottom() {
    return make_formula(FormulaKind::Bottom, {}, -1, 0, nullptr, nullptr, nullptr);
}
Formula Formula::top() { return negation(bottom()); }
Formula Formula::atom(std::string_view name) {
    return make_formula(FormulaKind::Atom, std::string(name), -1, 0, nullptr, nullptr,
                        nullptr);
}
Formula Formula::negation(Formula f) {
    return make_formula(FormulaKind::Not, {}, -1, 0, nullptr, f.node_, nullptr);
}
Formula Formula::implies(Formula a, Formula b) {
    return make_formula(FormulaKind::Implies, {}, -1, 0, nullptr, a.node_, b.node_);
}
Formula Formula::conj(Formula a, Formula b) {
    return make_formula(FormulaKind::And, {}, -1, 0, nullptr, a.node_, b.node_);
}
Formula Formula::disj(Formula a, Formula b) {
    return make_formula(FormulaKind::Or, {}, -1, 0, nullptr, a.node_, b.node_);
}
Formula Formula::just(Term t, AgentId agent, Formula body) {
    return make_formula(FormulaKind::Just, {}, -1, agent, t.node(), body.node_, nullptr);
}
Formula Formula::box(AgentId agent, Formula body) {
    return make_formula(FormulaKind::Box, {}, -1, agent, nullptr, body.node_, nullptr);
}
Formula Formula::diamond(AgentId agent, Formula body) {
    return make_formula(FormulaKind::Diamond, {}, -1, agent, nullptr, body.node_, nullptr);
}
Formula Formula::meta(int id) {
    return make_formula(FormulaKind::Meta, {}, id, 0, nullptr, nullptr, nullptr);
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}
Formula Formula::disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bottom();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
int Formula::meta_id() const { return node_->meta; }
AgentId Formula::agent() const { return node_->agent; }
Term Formula::term() const { return Interner::wrap(node_->term); }
Formula Formula::left() const { return Formula(node_->left); }
Formula Formula::right() const { return Formula(node_->right); }
bool Formula::is_ground() const { return node_->ground; }
bool Formula::is_modal_free() const { return !node_->modal; }
bool Formula::has_just() const { return node_->just; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::hash() const { return node_->hash; }
bool operator<(Formula a, Formula b) { return a.node_->serial < b.node_->serial; }

// ---------------------------------------------------------------- printing

bool is_default_constant_name(std::string_view name) {
    if (name.empty() || name[0] != 'c') return false;
    if (name.size() == 1) return true;
    return std::isdigit(static_cast<unsigned char>(name[1])) || name[1] == '_';
}

namespace {

void print_term(std::ostream& os, Term t) {
    switch (t.kind()) {
        case TermKind::Variable:
        case TermKind::Constant:
            os << t.name();
            return;
        case TermKind::Meta:
            os << "?t" << t.meta_id();
            return;
        case TermKind::Bang:
            os << '!';
            print_term(os, t.inner());
            return;
        case TermKind::App:
        case TermKind::Sum:
            os << '[';
            print_term(os, t.left());
            os << (t.kind() == TermKind::App ? " . " : " + ");
            print_term(os, t.right());
            os << ']';
            return;
    }
}

// Precedence: 1 implies, 2 or, 3 and, 4 unary / atomic.
int precedence(Formula f) {
    switch (f.kind()) {
        case FormulaKind::Implies:
            return 1;
        case FormulaKind::Or:
            return 2;
        case FormulaKind::And:
            return 3;
        default:
            return 4;
    }
}

void print_formula(std::ostream& os, Formula f);

void print_wrapped(std::ostream& os, Formula f, bool paren) {
    if (paren) os << '(';
    print_formula(os, f);
    if (paren) os << ')';
}

void print_formula(std::ostream& os, Formula f) {
    switch (f.kind()) {
        case FormulaKind::Bottom:
            os << "false";
            return;
        case FormulaKind::Atom:
            os << f.name();
            return;
        case FormulaKind::Meta:
            os << "?F" << f.meta_id();
            return;
        case FormulaKind::Not:
            os << '~';
            print_wrapped(os, f.body(), precedence(f.body()) < 4);
            return;
        case FormulaKind::Just:
            os << '{';
            print_term(os, f.term());
            os << "}:" << f.agent() << ' ';
            print_wrapped(os, f.body(), precedence(f.body()) < 4);
            return;
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            os << (f.kind() == FormulaKind::Box ? "[]" : "<>") << f.agent() << ' ';
            print_wrapped(os, f.body(), precedence(f.body()) < 4);
            return;
        case FormulaKind::Implies:
            print_wrapped(os, f.left(), precedence(f.left()) <= 1);
            os << " -> ";
            print_wrapped(os, f.right(), precedence(f.right()) < 1);
            return;
        case FormulaKind::And:
        case FormulaKind::Or: {
            int p = precedence(f);
            print_wrapped(os, f.left(), precedence(f.left()) < p);
            os << (f.kind() == FormulaKind::And ? " & " : " | ");
            print_wrapped(os, f.right(), precedence(f.right()) <= p);
            return;
        }
    }
}

}  // namespace

std::string to_string(Term t) {
    std::ostringstream os;
    print_term(os, t);
    return os.str();
}
std::string to_string(Formula f) {
    std::ostringstream os;
    print_formula(os, f);
    return os.str();
}
std::ostream& operator<<(std::ostream& os, Term t) {
    print_term(os, t);
    return os;
}
std::ostream& operator<<(std::ostream& os, Formula f) {
    print_formula(os, f);
    return os;
}

// ---------------------------------------------------------------- helpers

void collect_subterms(Term t, std::vector<Term>& out) {
    if (std::find(out.begin(), out.end(), t) != out.end()) return;
    switch (t.kind()) {
        case TermKind::App:
        case TermKind::Sum:
            collect_subterms(t.left(), out);
            collect_subterms(t.right(), out);
            break;
        case TermKind::Bang:
            collect_subterms(t.inner(), out);
            break;
        default:
            break;
    }
    out.push_back(t);
}

void collect_subformulas(Formula f, std::vector<Formula>& out) {
    if (std::find(out.begin(), out.end(), f) != out.end()) return;
    switch (f.kind()) {
        case FormulaKind::Not:
        case FormulaKind::Just:
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            collect_subformulas(f.body(), out);
            break;
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            collect_subformulas(f.left(), out);
            collect_subformulas(f.right(), out);
            break;
        default:
            break;
    }
    out.push_back(f);
}

void collect_atoms(Formula f, std::vector<std::string>& out) {
    switch (f.kind()) {
        case FormulaKind::Atom:
            if (std::find(out.begin(), out.end(), f.name()) == out.end())
                out.push_back(f.name());
            return;
        case FormulaKind::Not:
        case FormulaKind::Just:
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            collect_atoms(f.body(), out);
            return;
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            collect_atoms(f.left(), out);
            collect_atoms(f.right(), out);
            return;
        default:
            return;
    }
}

std::size_t count_occurrences(Term haystack, Term needle) {
    if (haystack == needle) return 1;
    switch (haystack.kind()) {
        case TermKind::App:
        case TermKind::Sum:
            return count_occurrences(haystack.left(), needle) +
                   count_occurrences(haystack.right(), needle);
        case TermKind::Bang:
            return count_occurrences(haystack.inner(), needle);
        default:
            return 0;
    }
}

int max_meta_id(Term t) {
    if (t.is_ground()) return -1;
    switch (t.kind()) {
        case TermKind::Meta:
            return t.meta_id();
        case TermKind::App:
        case TermKind::Sum:
            return std::max(max_meta_id(t.left()), max_meta_id(t.right()));
        case TermKind::Bang:
            return max_meta_id(t.inner());
        default:
            return -1;
    }
}

int max_meta_id(Formula f) {
    if (f.is_ground()) return -1;
    switch (f.kind()) {
        case FormulaKind::Meta:
            return f.meta_id();
        case FormulaKind::Not:
        case FormulaKind::Box:
        case FormulaKind::Diamond:
            return max_meta_id(f.body());
        case FormulaKind::Just:
            return std::max(max_meta_id(f.term()), max_meta_id(f.body()));
        case FormulaKind::Implies:
        case FormulaKind::And:
        case FormulaKind::Or:
            return std::max(max_meta_id(f.left()), max_meta_id(f.right()));
        default:
            return -1;
    }
}

}  // namespace justec
