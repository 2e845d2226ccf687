#ifndef CONTACTLOC_BELIEF_HPP
#define CONTACTLOC_BELIEF_HPP

// Belief MDP over (robot cell, uniform hypothesis set): successor generation,
// hypothesis elimination, goal test, expected cost and heuristics.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "contactloc/errors.hpp"
#include "contactloc/world.hpp"

namespace contactloc {

/// Robot cell plus a uniform hypothesis set, kept sorted and duplicate-free so
/// that equal beliefs compare (and encode) identically.
class BeliefState {
public:
    BeliefState(Cell robot, std::vector<Hypothesis> hypotheses)
        : robot_(robot), hypotheses_(std::move(hypotheses)) {
        std::sort(hypotheses_.begin(), hypotheses_.end());
        hypotheses_.erase(std::unique(hypotheses_.begin(), hypotheses_.end()), hypotheses_.end());
        if (hypotheses_.empty()) throw UnrealizableTask("belief with no hypotheses");
    }

    Cell robot() const noexcept { return robot_; }
    const std::vector<Hypothesis>& hypotheses() const noexcept { return hypotheses_; }
    std::size_t size() const noexcept { return hypotheses_.size(); }

    bool contains(const Hypothesis& h) const noexcept {
        return std::binary_search(hypotheses_.begin(), hypotheses_.end(), h);
    }

    friend bool operator==(const BeliefState&, const BeliefState&) = default;
    friend auto operator<=>(const BeliefState&, const BeliefState&) = default;

private:
    Cell robot_;
    std::vector<Hypothesis> hypotheses_;
};

/// `<x>,<y>,<rot>` triples joined by `;`, in canonical order.
inline std::string encode_hypotheses(const std::vector<Hypothesis>& hs) {
    std::string out;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(hs[i].x) + ',' + std::to_string(hs[i].y) + ',' +
               std::to_string(degrees(hs[i].rot));
    }
    return out;
}

/// `r=<x>,<y>|H=<x1>,<y1>,<rot1>;...`
inline std::string encode(const BeliefState& b) {
    return "r=" + std::to_string(b.robot().x) + ',' + std::to_string(b.robot().y) +
           "|H=" + encode_hypotheses(b.hypotheses());
}

struct BeliefHash {
    std::size_t operator()(const BeliefState& b) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        mix(static_cast<std::uint32_t>(b.robot().x));
        mix(static_cast<std::uint32_t>(b.robot().y));
        for (const auto& hyp : b.hypotheses())
            mix((static_cast<std::uint64_t>(static_cast<std::uint32_t>(hyp.x)) << 32) ^
                (static_cast<std::uint64_t>(static_cast<std::uint16_t>(hyp.y)) << 16) ^
                static_cast<std::uint64_t>(degrees(hyp.rot)));
        return static_cast<std::size_t>(h);
    }
};

/// Post-action robot cell and contact flag.
struct Observation {
    Cell robot;
    bool contact = false;

    friend auto operator<=>(const Observation&, const Observation&) = default;
};

/// One observation branch of (b, a). Probability is the exact ratio
/// `count / total` under the uniform belief.
struct SuccessorBranch {
    Observation observation;
    BeliefState next;
    std::size_t count;
    std::size_t total;
    int cost;

    double probability() const noexcept {
        return static_cast<double>(count) / static_cast<double>(total);
    }
};

inline bool is_goal(const BeliefState& b) noexcept { return b.size() == 1; }

/// Groups the hypotheses of `b` by their outcome under `a`. Branches are
/// ordered by the smallest hypothesis they contain.
inline std::vector<SuccessorBranch> successors(const Domain& d, const BeliefState& b,
                                               const Action& a) {
    struct Group {
        Outcome outcome;
        std::vector<Hypothesis> members;
    };
    std::vector<Group> groups;
    for (const auto& h : b.hypotheses()) {
        const Outcome o = simulate_action(d, h, b.robot(), a);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const Group& g) { return g.outcome == o; });
        if (it == groups.end())
            groups.push_back({o, {h}});
        else
            it->members.push_back(h);
    }
    std::vector<SuccessorBranch> out;
    out.reserve(groups.size());
    for (auto& g : groups) {
        const std::size_t n = g.members.size();
        out.push_back({{g.outcome.next, g.outcome.contact},
                       BeliefState(g.outcome.next, std::move(g.members)),
                       n,
                       b.size(),
                       g.outcome.cost});
    }
    return out;
}

/// Hypotheses of `b` consistent with observing `z` after `a`.
inline BeliefState belief_update(const Domain& d, const BeliefState& b, const Action& a,
                                 const Observation& z) {
    std::vector<Hypothesis> kept;
    for (const auto& h : b.hypotheses()) {
        const Outcome o = simulate_action(d, h, b.robot(), a);
        if (o.next == z.robot && o.contact == z.contact) kept.push_back(h);
    }
    if (kept.empty())
        throw UnrealizableTask("no hypothesis explains observation at (" +
                               std::to_string(z.robot.x) + "," + std::to_string(z.robot.y) +
                               (z.contact ? ") with contact" : ") without contact"));
    return BeliefState(z.robot, std::move(kept));
}

/// Sum over hypotheses of the per-hypothesis action cost; divide by |H| for
/// the expected cost.
inline long weighted_cost(const Domain& d, const BeliefState& b, const Action& a) {
    long total = 0;
    for (const auto& h : b.hypotheses()) total += simulate_action(d, h, b.robot(), a).cost;
    return total;
}

inline double expected_cost(const Domain& d, const BeliefState& b, const Action& a) {
    return static_cast<double>(weighted_cost(d, b, a)) / static_cast<double>(b.size());
}

/// Lower bound on the cost to the first disambiguating attempt: travel next
/// to the nearest differing cell, then try to enter it.
inline double base_heuristic(const ObjectModel& model, const BeliefState& b) {
    if (is_goal(b)) return 0.0;
    const auto cells = differing_cells(model, b.hypotheses());
    if (cells.empty())
        throw IndistinguishableHypotheses("hypotheses of " + encode(b) +
                                          " occupy identical cells");
    int best = std::numeric_limits<int>::max();
    for (const Cell& c : cells) best = std::min(best, std::max(manhattan(b.robot(), c), 1));
    return static_cast<double>(best);
}

inline double base_heuristic(const Domain& d, const BeliefState& b) {
    return base_heuristic(d.object, b);
}

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_subset(const std::vector<Hypothesis>& sub, const std::vector<Hypothesis>& super) {
    return sub.size() <= super.size() &&
           std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

/// Cost estimate for moving from `from` to `to`. Hypotheses are never
/// re-added, so a target with any hypothesis outside `from` is unreachable.
inline double pair_heuristic(const BeliefState& from, const BeliefState& to) {
    if (!is_subset(to.hypotheses(), from.hypotheses())) return kInfinity;
    return static_cast<double>(manhattan(from.robot(), to.robot()));
}

}  // namespace contactloc

#endif  // CONTACTLOC_BELIEF_HPP
