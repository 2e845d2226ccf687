#ifndef CONTACTLOC_GENERATE_HPP
#define CONTACTLOC_GENERATE_HPP

// Nested uncertainty families: axis-aligned offset boxes of growing
// half-width around a nominal pose, optionally crossed with a rotation set.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "contactloc/errors.hpp"
#include "contactloc/scenario.hpp"
#include "contactloc/world.hpp"

namespace contactloc {

enum class Axes { X, XY };

struct NestedSpec {
    Hypothesis nominal;
    std::vector<int> extents;
    Axes axes = Axes::X;
    /// Empty means the nominal rotation only.
    std::vector<Rotation> rotations;
};

/// One hypothesis set per extent, smallest first; duplicate sets are dropped.
/// Throws ConfigError when any pose leaves the grid, overlaps an obstacle or
/// covers `robot_start`.
inline std::vector<std::vector<Hypothesis>> generate_nested_sets(const GridWorld& grid,
                                                                 const ObjectModel& model,
                                                                 Cell robot_start,
                                                                 const NestedSpec& spec) {
    std::vector<Rotation> rots = spec.rotations;
    if (rots.empty()) rots.push_back(spec.nominal.rot);
    std::sort(rots.begin(), rots.end());
    rots.erase(std::unique(rots.begin(), rots.end()), rots.end());

    std::vector<int> extents = spec.extents;
    std::sort(extents.begin(), extents.end());
    extents.erase(std::unique(extents.begin(), extents.end()), extents.end());

    std::vector<std::vector<Hypothesis>> out;
    std::set<std::vector<Hypothesis>> seen;
    for (int e : extents) {
        if (e < 0) throw ConfigError("extents", "extent must be >= 0");
        const int ey = spec.axes == Axes::XY ? e : 0;
        std::vector<Hypothesis> set;
        for (int dx = -e; dx <= e; ++dx)
            for (int dy = -ey; dy <= ey; ++dy)
                for (Rotation r : rots) {
                    const Hypothesis h{spec.nominal.x + dx, spec.nominal.y + dy, r};
                    for (const Cell& c : model.cells(h)) {
                        if (!grid.contains(c) || grid.is_obstacle(c) || c == robot_start)
                            throw ConfigError("extents",
                                              "extent " + std::to_string(e) +
                                                  " places the object outside the free grid");
                    }
                    set.push_back(h);
                }
        std::sort(set.begin(), set.end());
        if (seen.insert(set).second) out.push_back(std::move(set));
    }
    return out;
}

/// Copies `base` and replaces its uncertainty sets with a nested family.
inline Scenario generate_nested_scenarios(const Scenario& base, const NestedSpec& spec) {
    Scenario s = base;
    s.uncertainty_sets =
        generate_nested_sets(base.domain.grid, base.domain.object, base.robot_start, spec);
    return s;
}

}  // namespace contactloc

#endif  // CONTACTLOC_GENERATE_HPP
