#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "justec/syntax.hpp"

namespace justec {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Controls how bare identifiers in term position are classified. Declared
// names win; anything undeclared falls back to is_default_constant_name.
// Named metavariables (`?A`, `?s`) get ids from the two tables, which the
// caller may share across several parses so that names stay consistent.
struct ParseOptions {
    std::set<std::string> constants;
    std::set<std::string> variables;
    std::map<std::string, int>* formula_metas = nullptr;
    std::map<std::string, int>* term_metas = nullptr;
};

Term parse_term(std::string_view text, const ParseOptions& opts = {});
Formula parse_formula(std::string_view text, const ParseOptions& opts = {});

using WorldId = int;

struct StarExpr {
    AgentId agent = 1;
    Term term;
    Formula formula;

    friend bool operator==(const StarExpr& a, const StarExpr& b) {
        return a.agent == b.agent && a.term == b.term && a.formula == b.formula;
    }
    friend bool operator<(const StarExpr& a, const StarExpr& b) {
        if (a.agent != b.agent) return a.agent < b.agent;
        if (a.term != b.term) return a.term < b.term;
        return a.formula < b.formula;
    }
};

struct PrefixedStarExpr {
    WorldId world = 0;
    StarExpr expr;

    friend bool operator==(const PrefixedStarExpr& a, const PrefixedStarExpr& b) {
        return a.world == b.world && a.expr == b.expr;
    }
    friend bool operator<(const PrefixedStarExpr& a, const PrefixedStarExpr& b) {
        if (a.world != b.world) return a.world < b.world;
        return a.expr < b.expr;
    }
};

// `w *i {t} F` or `*i {t} F`; the world is absent in the second form.
struct ParsedStar {
    std::optional<WorldId> world;
    StarExpr expr;
};
ParsedStar parse_star(std::string_view text, const ParseOptions& opts = {});

std::string to_string(const StarExpr& e);
std::string to_string(const PrefixedStarExpr& e);

}  // namespace justec
