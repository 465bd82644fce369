#include "justec/parser.hpp"

#include <cctype>
#include <vector>

namespace justec {

namespace {

constexpr int kNamedMetaBase = 10000;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opts) : s_(text), opts_(opts) {}

    void skip_ws() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_ws();
        return pos_ >= s_.size();
    }

    bool peek(std::string_view tok) {
        skip_ws();
        return s_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok) {
        if (!peek(tok)) return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    std::string ident() {
        skip_ws();
        if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected identifier");
        std::size_t b = pos_;
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        return std::string(s_.substr(b, pos_ - b));
    }

    int integer() {
        skip_ws();
        std::size_t b = pos_;
        if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            fail("expected integer");
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::stoi(std::string(s_.substr(b, pos_ - b)));
    }

    int agent() {
        int a = integer();
        if (a < 1) fail("agent index must be positive");
        return a;
    }

    int meta_id(std::map<std::string, int>* table, char numbered_prefix,
                std::map<std::string, int>& local) {
        std::string name = ident();
        if (name.size() > 1 && name[0] == numbered_prefix) {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
            if (digits) return std::stoi(name.substr(1));
        }
        auto& tab = table ? *table : local;
        auto it = tab.find(name);
        if (it != tab.end()) return it->second;
        int id = kNamedMetaBase + static_cast<int>(tab.size());
        tab.emplace(name, id);
        return id;
    }

    Term term() {
        skip_ws();
        if (accept("!")) return Term::bang(term());
        if (accept("?")) return Term::meta(meta_id(opts_.term_metas, 't', local_term_metas_));
        if (peek("[") || peek("(")) {
            char close = s_[pos_] == '[' ? ']' : ')';
            ++pos_;
            std::vector<Term> parts{term()};
            int op = 0;  // 1 app, 2 sum
            while (!accept(std::string_view(&close, 1))) {
                int this_op = accept(".") ? 1 : accept("+") ? 2 : 0;
                if (this_op == 0) fail("expected '.', '+' or closing bracket");
                if (op != 0 && op != this_op) fail("mixed '.' and '+' in one bracket");
                op = this_op;
                parts.push_back(term());
            }
            if (parts.size() == 1) return parts[0];
            return op == 1 ? Term::app_chain(parts) : Term::sum_chain(parts);
        }
        std::string name = ident();
        bool constant = opts_.constants.count(name) ||
                        (!opts_.variables.count(name) && is_default_constant_name(name));
        return constant ? Term::constant(name) : Term::variable(name);
    }

    // implies < or < and < unary
    Formula formula() {
        Formula lhs = disjunction();
        if (accept("->")) return Formula::implies(lhs, formula());
        return lhs;
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
        skip_ws();
        if (accept("~")) return Formula::negation(unary());
        if (accept("{")) {
            Term t = term();
            expect("}");
            expect(":");
            int a = agent();
            return Formula::just(t, a, unary());
        }
        if (accept("[]")) {
            int a = agent();
            return Formula::box(a, unary());
        }
        if (accept("<>")) {
            int a = agent();
            return Formula::diamond(a, unary());
        }
        if (accept("(")) {
            Formula f = formula();
            expect(")");
            return f;
        }
        if (accept("?")) return Formula::meta(meta_id(opts_.formula_metas, 'F', local_formula_metas_));
        std::string name = ident();
        if (name == "false") return Formula::bottom();
        if (name == "true") return Formula::top();
        return Formula::atom(name);
    }

    ParsedStar star() {
        ParsedStar out;
        skip_ws();
        if (!peek("*")) out.world = integer();
        expect("*");
        out.expr.agent = agent();
        expect("{");
        out.expr.term = term();
        expect("}");
        out.expr.formula = formula();
        return out;
    }

    void finish() {
        if (!at_end()) fail("trailing input");
    }

private:
    std::string_view s_;
    const ParseOptions& opts_;
    std::size_t pos_ = 0;
    std::map<std::string, int> local_term_metas_;
    std::map<std::string, int> local_formula_metas_;
};

}  // namespace

Term parse_term(std::string_view text, const ParseOptions& opts) {
    Parser p(text, opts);
    Term t = p.term();
    p.finish();
    return t;
}

Formula parse_formula(std::string_view text, const ParseOptions& opts) {
    Parser p(text, opts);
    Formula f = p.formula();
    p.finish();
    return f;
}

ParsedStar parse_star(std::string_view text, const ParseOptions& opts) {
    Parser p(text, opts);
    ParsedStar s = p.star();
    p.finish();
    return s;
}

std::string to_string(const StarExpr& e) {
    return "*" + std::to_string(e.agent) + " {" + to_string(e.term) + "} " +
           to_string(e.formula);
}

std::string to_string(const PrefixedStarExpr& e) {
    return std::to_string(e.world) + " " + to_string(e.expr);
}

}  // namespace justec
