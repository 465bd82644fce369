#include "justec/problems.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "justec/parser.hpp"

namespace justec {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Splits `exists a b forall c : body` into the two variable blocks and body.
void split_prefix(const std::string& text, std::vector<std::string>& ex,
                  std::vector<std::string>& fa, std::string& body) {
    auto colon = text.find(':');
    std::string head = colon == std::string::npos ? "" : text.substr(0, colon);
    std::istringstream in(head);
    std::string w;
    int mode = 0;
    bool any = false;
    while (in >> w) {
        any = true;
        if (w == "exists") {
            if (mode == 2) throw ParseError("'exists' after 'forall'", 0);
            mode = 1;
        } else if (w == "forall") {
            mode = 2;
        } else if (mode == 1) {
            ex.push_back(w);
        } else if (mode == 2) {
            fa.push_back(w);
        } else {
            throw ParseError("expected 'exists' or 'forall' before ':'", 0);
        }
    }
    if (colon != std::string::npos && !any) throw ParseError("empty quantifier prefix", colon);
    body = colon == std::string::npos ? text : text.substr(colon + 1);
}

class FoParser {
public:
    FoParser(const std::string& s, SBFormula& sb) : s_(s), sb_(sb) {}

    Formula parse() {
        Formula f = implication();
        ws();
        if (i_ != s_.size()) fail("trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& m) { throw ParseError(m, i_); }
    void ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool accept(const char* tok) {
        ws();
        std::size_t n = std::char_traits<char>::length(tok);
        if (s_.compare(i_, n, tok) == 0) {
            i_ += n;
            return true;
        }
        return false;
    }
    std::string ident() {
        ws();
        std::size_t b = i_;
        if (i_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[i_]))) fail("expected identifier");
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        return s_.substr(b, i_ - b);
    }
    Formula implication() {
        Formula l = disjunction();
        if (accept("->")) return Formula::implies(l, implication());
        return l;
    }
    Formula disjunction() {
        Formula f = conjunction();
        while (accept("|")) f = Formula::disj(f, conjunction());
        return f;
    }
    Formula conjunction() {
        Formula f = unary();
        while (accept("&")) f = Formula::conj(f, unary());
        return f;
    }
    Formula unary() {
        if (accept("~")) return Formula::negation(unary());
        if (accept("(")) {
            Formula f = implication();
            if (!accept(")")) fail("expected ')'");
            return f;
        }
        std::string name = ident();
        if (name == "true") return Formula::top();
        if (name == "false") return Formula::bottom();
        FoAtom a;
        if (accept("(")) {
            a.relation = name;
            if (!accept(")")) {
                do a.args.push_back(ident());
                while (accept(","));
                if (!accept(")")) fail("expected ')' after arguments");
            }
            return fo_atom(sb_, a);
        }
        if (accept("=")) {
            a.equality = true;
            a.args = {name, ident()};
            return fo_atom(sb_, a);
        }
        fail("expected a relation atom or an equality");
    }

    const std::string& s_;
    SBFormula& sb_;
    std::size_t i_ = 0;
};

}  // namespace

QBF2 parse_qbf2(const std::string& text) {
    QBF2 q;
    std::string body;
    split_prefix(text, q.exists, q.forall, body);
    q.matrix = parse_formula(body);
    validate_qbf2(q);
    return q;
}

void validate_qbf2(const QBF2& q) {
    std::set<std::string> seen;
    for (const auto& v : q.exists)
        if (!seen.insert(v).second) throw std::invalid_argument("variable " + v + " quantified twice");
    for (const auto& v : q.forall)
        if (!seen.insert(v).second) throw std::invalid_argument("variable " + v + " quantified twice");
    if (q.matrix.is_null() || !q.matrix.is_modal_free() || q.matrix.has_just() || !q.matrix.is_ground())
        throw std::invalid_argument("QBF matrix must be propositional");
    std::vector<std::string> atoms;
    collect_atoms(q.matrix, atoms);
    for (const auto& a : atoms)
        if (!seen.count(a)) throw std::invalid_argument("atom " + a + " is not quantified");
}

std::string to_string(const QBF2& q) {
    std::string s;
    if (!q.exists.empty()) {
        s += "exists";
        for (const auto& v : q.exists) s += " " + v;
        s += " ";
    }
    if (!q.forall.empty()) {
        s += "forall";
        for (const auto& v : q.forall) s += " " + v;
        s += " ";
    }
    if (!s.empty()) s += ": ";
    return s + to_string(q.matrix);
}

bool SBFormula::has_equality() const {
    for (const auto& [k, a] : atoms)
        if (a.equality) return true;
    return false;
}

std::string atom_key(const FoAtom& a) {
    if (a.equality) return a.args.at(0) + "=" + a.args.at(1);
    std::string s = a.relation + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) s += (i ? "," : "") + a.args[i];
    return s + ")";
}

void declare_relation(SBFormula& sb, const std::string& name, int arity) {
    auto it = sb.arity.find(name);
    if (it != sb.arity.end()) {
        if (it->second != arity)
            throw std::invalid_argument("relation " + name + " used with arities " +
                                        std::to_string(it->second) + " and " + std::to_string(arity));
        return;
    }
    sb.arity.emplace(name, arity);
    sb.relation_order.push_back(name);
}

Formula fo_atom(SBFormula& sb, const FoAtom& a) {
    if (!a.equality) declare_relation(sb, a.relation, static_cast<int>(a.args.size()));
    std::string key = atom_key(a);
    sb.atoms.emplace(key, a);
    return Formula::atom(key);
}

SBFormula parse_sb(const std::string& text) {
    SBFormula sb;
    std::istringstream in(text);
    std::string line, formula_text;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::istringstream ws(t);
        std::string first;
        ws >> first;
        if (first == "rel" && formula_text.empty()) {
            std::string name;
            int ar = -1;
            if (!(ws >> name >> ar) || ar < 0) throw ParseError("bad relation header: " + t, 0);
            declare_relation(sb, name, ar);
        } else if (first == "binary" && formula_text.empty()) {
            sb.binary = true;
        } else {
            formula_text += " " + t;
        }
    }
    std::string body;
    split_prefix(formula_text, sb.exists, sb.forall, body);
    sb.matrix = FoParser(body, sb).parse();
    validate_sb(sb);
    return sb;
}

void validate_sb(const SBFormula& sb) {
    std::set<std::string> vars;
    for (const auto& v : sb.exists)
        if (!vars.insert(v).second) throw std::invalid_argument("variable " + v + " quantified twice");
    for (const auto& v : sb.forall)
        if (!vars.insert(v).second) throw std::invalid_argument("variable " + v + " quantified twice");
    for (const auto& [k, a] : sb.atoms) {
        for (const auto& z : a.args)
            if (!vars.count(z)) throw std::invalid_argument("unbound variable " + z + " in " + k);
        if (!a.equality && static_cast<int>(a.args.size()) != sb.arity.at(a.relation))
            throw std::invalid_argument("arity mismatch in " + k);
    }
}

std::string to_string(const SBFormula& sb) {
    std::ostringstream os;
    if (sb.binary) os << "binary\n";
    for (const auto& r : sb.relation_order) os << "rel " << r << " " << sb.arity.at(r) << "\n";
    if (!sb.exists.empty()) {
        os << "exists";
        for (const auto& v : sb.exists) os << " " << v;
        os << " ";
    }
    if (!sb.forall.empty()) {
        os << "forall";
        for (const auto& v : sb.forall) os << " " << v;
        os << " ";
    }
    if (!sb.exists.empty() || !sb.forall.empty()) os << ": ";
    os << to_string(sb.matrix) << "\n";
    return os.str();
}

bool TwoElementModel::holds(const std::string& rel, const std::vector<int>& tuple) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < tuple.size(); ++j)
        if (tuple[j]) idx |= std::size_t{1} << j;
    return tables.at(rel).at(idx);
}

std::string to_string(const TwoElementModel& m) {
    std::ostringstream os;
    for (const auto& [r, t] : m.tables) {
        os << r << " = {";
        bool first = true;
        for (std::size_t idx = 0; idx < t.size(); ++idx) {
            if (!t[idx]) continue;
            os << (first ? "" : ", ") << "(";
            std::size_t ar = 0;
            while ((std::size_t{1} << ar) < t.size()) ++ar;
            for (std::size_t j = 0; j < ar; ++j) os << (j ? "," : "") << ((idx >> j) & 1);
            os << ")";
            first = false;
        }
        os << "}\n";
    }
    for (const auto& [v, e] : m.interp) os << v << " = " << e << "\n";
    return os.str();
}

}  // namespace justec
