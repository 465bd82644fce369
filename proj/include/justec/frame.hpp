#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "justec/parser.hpp"

namespace justec {

// Finite frame: worlds plus one accessibility relation per agent.
// relations[i] holds R_i for agents 1..n; relations[0] is unused.
struct Frame {
    std::vector<WorldId> worlds;
    std::vector<std::set<std::pair<WorldId, WorldId>>> relations;

    Frame() = default;
    Frame(std::vector<WorldId> ws, int agents)
        : worlds(std::move(ws)), relations(agents + 1) {}

    int agents() const { return relations.empty() ? 0 : static_cast<int>(relations.size()) - 1; }
    bool has_world(WorldId w) const;
    int index_of(WorldId w) const;  // -1 when absent
    bool related(AgentId i, WorldId a, WorldId b) const {
        return relations[i].count({a, b}) != 0;
    }
    void add_edge(AgentId i, WorldId a, WorldId b) { relations[i].insert({a, b}); }
    std::vector<WorldId> successors(AgentId i, WorldId a) const;
};

// A single-world frame with empty relations: derivations in it are exactly the
// frame-free *-calculus derivations.
Frame trivial_frame(int agents);

}  // namespace justec
