#include "justec/frame.hpp"

#include <algorithm>
#include <limits>

namespace justec {

bool Frame::has_world(WorldId w) const { return index_of(w) >= 0; }

int Frame::index_of(WorldId w) const {
    auto it = std::find(worlds.begin(), worlds.end(), w);
    return it == worlds.end() ? -1 : static_cast<int>(it - worlds.begin());
}

std::vector<WorldId> Frame::successors(AgentId i, WorldId a) const {
    std::vector<WorldId> out;
    for (auto it = relations[i].lower_bound({a, std::numeric_limits<WorldId>::min()});
         it != relations[i].end() && it->first == a; ++it)
        out.push_back(it->second);
    return out;
}

Frame trivial_frame(int agents) { return Frame({0}, agents); }

}  // namespace justec
