#ifndef CONTACTLOC_PRESETS_HPP
#define CONTACTLOC_PRESETS_HPP

// Named scenario families used by the test suite and the benchmark tool.

#include <optional>
#include <string>
#include <vector>

#include "contactloc/scenario.hpp"
#include "contactloc/world.hpp"

namespace contactloc::presets {

/// 10x1 corridor, single-cell object, unit moves along x, start sets
/// {5,7} and {5,6,7}.
inline Scenario w1() {
    Domain d{GridWorld(10, 1), ObjectModel({{0, 0}}),
             {Action::move(Direction::PosX), Action::move(Direction::NegX)}};
    return {"w1",
            std::move(d),
            {0, 0},
            {{{5, 0, Rotation::R0}, {7, 0, Rotation::R0}},
             {{5, 0, Rotation::R0}, {6, 0, Rotation::R0}, {7, 0, Rotation::R0}}},
            Hypothesis{7, 0, Rotation::R0}};
}

/// Open 6x2 room with two clusters of poses. The greedy information-gain
/// choice here costs about 1.57 times the optimum.
inline Scenario myopia() {
    Domain d{GridWorld(6, 2), ObjectModel({{0, 0}}),
             {Action::move(Direction::PosX), Action::move(Direction::NegX),
              Action::move(Direction::PosY), Action::move(Direction::NegY),
              Action::guarded(Direction::PosX, 6), Action::guarded(Direction::PosY, 2)}};
    std::vector<Hypothesis> hs;
    for (Cell c : std::vector<Cell>{{1, 1}, {2, 1}, {3, 0}, {3, 1}, {5, 0}, {5, 1}})
        hs.push_back({c.x, c.y, Rotation::R0});
    return {"myopia", std::move(d), {0, 0}, {std::move(hs)}, std::nullopt};
}

/// Geometry of the pocket family.
struct PocketLayout {
    int width = 107;
    int height = 21;
    int row = 10;      // the only open row of the channel
    int x0 = 55;       // first pose of every start set
    int channel = 28;  // channel entrance column
    int wall_x = 16;   // thick back wall of the pocket
    int wall_t = 10;
    int arm_y0 = 6;  // pocket arms
    int arm_y1 = 14;
    int arm_x = 2;
    int reach = 110;  // guarded-move step limit
    std::vector<int> sizes{2, 4, 6, 8, 12, 16, 24, 32, 40, 50};
};

/// A room opening into a long one-cell channel that holds the object, with
/// start sets of growing length along the channel. A walled pocket between
/// the start and the channel looks close to the object by Manhattan
/// distance but leads nowhere.
inline Scenario pocket(const PocketLayout& p = {}) {
    std::vector<Cell> obs;
    for (int x = p.channel; x < p.width; ++x)
        for (int y = 0; y < p.height; ++y)
            if (y != p.row) obs.push_back({x, y});
    for (int x = p.wall_x; x < p.wall_x + p.wall_t; ++x)
        for (int y = p.arm_y0; y <= p.arm_y1; ++y) obs.push_back({x, y});
    for (int x = p.arm_x; x < p.wall_x; ++x) {
        obs.push_back({x, p.arm_y0});
        obs.push_back({x, p.arm_y1});
    }
    Domain d{GridWorld(p.width, p.height, std::move(obs)), ObjectModel({{0, 0}}), {}};
    for (auto dir : {Direction::PosX, Direction::NegX, Direction::PosY, Direction::NegY})
        d.actions.push_back(Action::guarded(dir, p.reach));
    for (auto dir : {Direction::PosX, Direction::NegX, Direction::PosY, Direction::NegY})
        d.actions.push_back(Action::move(dir));
    Scenario s{"pocket", std::move(d), {0, p.row}, {}, std::nullopt};
    for (int k : p.sizes) {
        std::vector<Hypothesis> hs;
        for (int j = 0; j < k; ++j) hs.push_back({p.x0 + j, p.row, Rotation::R0});
        s.uncertainty_sets.push_back(std::move(hs));
    }
    s.groundtruth = Hypothesis{p.x0 + 1, p.row, Rotation::R0};
    return s;
}

inline std::optional<Scenario> by_name(const std::string& name) {
    if (name == "w1") return w1();
    if (name == "myopia") return myopia();
    if (name == "pocket") return pocket();
    return std::nullopt;
}

}  // namespace contactloc::presets

#endif  // CONTACTLOC_PRESETS_HPP
