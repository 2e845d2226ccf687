#ifndef CONTACTLOC_TESTS_FIXTURES_HPP
#define CONTACTLOC_TESTS_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "contactloc/contactloc.hpp"

namespace fx {

using namespace contactloc;

inline Hypothesis hyp(int x, int y = 0, Rotation r = Rotation::R0) { return {x, y, r}; }

// 10x1 corridor, single-cell object, unit moves along x.
inline Domain w1_domain() {
    return {GridWorld(10, 1), ObjectModel({{0, 0}}),
            {Action::move(Direction::PosX), Action::move(Direction::NegX)}};
}
inline std::vector<Hypothesis> H2() { return {hyp(5), hyp(7)}; }
inline std::vector<Hypothesis> H3() { return {hyp(5), hyp(6), hyp(7)}; }
inline BeliefState w1_belief(int x, std::vector<Hypothesis> hs) {
    return BeliefState({x, 0}, std::move(hs));
}
inline Problem w1_problem(std::vector<Hypothesis> hs, std::string id = "w1") {
    return {std::move(id), w1_domain(), w1_belief(0, std::move(hs))};
}
inline ProblemFamily w1_family() {
    return {w1_domain(), {0, 0}, {"set000", "set001"}, {H2(), H3()}};
}

inline Scenario w1_scenario() { return presets::w1(); }

/// Converged optimal policy for a W1 start set.
inline HistoryPolicy w1_policy(std::vector<Hypothesis> hs) {
    const auto p = w1_problem(std::move(hs));
    SolverParams sp;
    auto r = solve(p, sp);
    return extract_history_policy(p, r.values);
}

inline Domain myopia_domain() { return presets::myopia().domain; }
inline BeliefState myopia_start() { return presets::myopia().start_belief(0); }

using presets::PocketLayout;
inline Scenario pocket_scenario(const PocketLayout& p = {}) { return presets::pocket(p); }

/// Small random world with a nested family of start sets. Every set is
/// pairwise distinguishable and avoids the robot start.
struct RandomInstance {
    Scenario scenario;
    bool rotated = false;
};

inline RandomInstance random_instance(std::uint64_t seed, bool rotated) {
    std::mt19937_64 rng(seed);
    auto uni = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (;;) {
        const int w = uni(3, 9), h = uni(2, 7);
        std::vector<Cell> obs;
        for (int x = 0; x < w; ++x)
            for (int y = 0; y < h; ++y)
                if (uni(0, 99) < 12) obs.push_back({x, y});
        GridWorld grid(w, h, obs);
        const std::vector<Cell> shape =
            rotated ? std::vector<Cell>{{0, 0}, {1, 0}, {0, 1}} : std::vector<Cell>{{0, 0}};
        ObjectModel model(shape);
        Cell start{uni(0, w - 1), uni(0, h - 1)};
        if (grid.is_obstacle(start)) continue;

        std::vector<Hypothesis> pool;
        const std::vector<Rotation> rots =
            rotated ? std::vector<Rotation>{Rotation::R0, Rotation::R90, Rotation::R180,
                                            Rotation::R270}
                    : std::vector<Rotation>{Rotation::R0};
        for (int x = 0; x < w; ++x)
            for (int y = 0; y < h; ++y)
                for (Rotation r : rots) {
                    const Hypothesis cand{x, y, r};
                    bool ok = true;
                    for (const Cell& c : model.cells(cand))
                        ok = ok && grid.contains(c) && !grid.is_obstacle(c) && c != start;
                    if (ok) pool.push_back(cand);
                }
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::size_t k = static_cast<std::size_t>(uni(3, 8));
        if (pool.size() < k) continue;
        std::vector<Hypothesis> big(pool.begin(), pool.begin() + static_cast<long>(k));
        if (find_indistinguishable(model, big)) continue;

        std::vector<Action> actions;
        for (auto dir : {Direction::PosX, Direction::NegX, Direction::PosY, Direction::NegY})
            actions.push_back(Action::move(dir));
        if (uni(0, 1)) {
            actions.push_back(Action::guarded(Direction::PosX, w));
            actions.push_back(Action::guarded(Direction::NegY, h));
        }

        Scenario s{"rand" + std::to_string(seed),
                   {std::move(grid), std::move(model), std::move(actions)},
                   start,
                   {},
                   std::nullopt};
        for (std::size_t n : {std::size_t{2}, (k + 2) / 2, k}) {
            std::vector<Hypothesis> set(big.begin(), big.begin() + static_cast<long>(n));
            std::sort(set.begin(), set.end());
            if (s.uncertainty_sets.empty() || s.uncertainty_sets.back() != set)
                s.uncertainty_sets.push_back(std::move(set));
        }
        // The localization goal must be reachable from every start set.
        bool solvable = true;
        for (std::size_t i = 0; i < s.uncertainty_sets.size() && solvable; ++i) {
            try {
                oracle_optimal(s.domain, s.start_belief(i), 200'000);
            } catch (const Error&) {
                solvable = false;
            } catch (const std::length_error&) {
                solvable = false;
            }
        }
        if (solvable) return {std::move(s), rotated};
    }
}

}  // namespace fx

#endif  // CONTACTLOC_TESTS_FIXTURES_HPP
