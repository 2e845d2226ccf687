#ifndef CONTACTLOC_TBL_HPP
#define CONTACTLOC_TBL_HPP

// Myopic touch-based localization: execute the single action with the
// largest expected entropy reduction, update, repeat.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "contactloc/belief.hpp"
#include "contactloc/errors.hpp"
#include "contactloc/policy.hpp"
#include "contactloc/world.hpp"

namespace contactloc {

struct TblParams {
    std::size_t step_cap = 10'000;
};

/// Expected entropy reduction in bits for a uniform belief.
inline double info_gain(const Domain& d, const BeliefState& b, const Action& a) {
    double after = 0.0;
    for (const auto& br : successors(d, b, a))
        after += br.probability() * std::log2(static_cast<double>(br.count));
    return std::log2(static_cast<double>(b.size())) - after;
}

namespace detail {

inline constexpr double kGainMargin = 1e-12;

/// Action with the largest positive gain (ties: lower expected cost, then
/// lower index), or nothing when every gain is zero.
inline std::optional<std::size_t> most_informative(const Domain& d, const BeliefState& b) {
    std::optional<std::size_t> best;
    double best_gain = kGainMargin;
    double best_cost = 0.0;
    for (std::size_t i = 0; i < d.actions.size(); ++i) {
        const double gain = info_gain(d, b, d.actions[i]);
        if (gain < kGainMargin) continue;
        const double cost = expected_cost(d, b, d.actions[i]);
        if (!best || gain > best_gain + kGainMargin ||
            (gain > best_gain - kGainMargin && cost < best_cost - kGainMargin)) {
            best = i;
            best_gain = gain;
            best_cost = cost;
        }
    }
    return best;
}

/// First action of a cheapest non-splitting path to a robot cell from which
/// some action is informative.
inline std::optional<std::size_t> approach_action(const Domain& d, const BeliefState& b) {
    using Entry = std::tuple<long, Cell, std::size_t>;  // cost, cell, first action
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::set<Cell> settled;
    queue.emplace(0, b.robot(), d.actions.size());
    while (!queue.empty()) {
        auto [cost, cell, first] = queue.top();
        queue.pop();
        if (!settled.insert(cell).second) continue;
        const BeliefState here(cell, b.hypotheses());
        if (first != d.actions.size() && most_informative(d, here)) return first;
        for (std::size_t i = 0; i < d.actions.size(); ++i) {
            const auto branches = successors(d, here, d.actions[i]);
            if (branches.size() != 1) continue;
            const Cell next = branches.front().next.robot();
            if (settled.count(next)) continue;
            queue.emplace(cost + branches.front().cost, next, first == d.actions.size() ? i : first);
        }
    }
    return std::nullopt;
}

inline std::optional<std::size_t> tbl_choice(const Domain& d, const BeliefState& b) {
    if (auto i = most_informative(d, b)) return i;
    return approach_action(d, b);
}

}  // namespace detail

/// Runs TBL against `groundtruth`. The trace is not localized when the step
/// cap is hit or no informative action is reachable.
inline ExecutionTrace run_tbl(const Domain& d, const BeliefState& start,
                              const Hypothesis& groundtruth, const TblParams& params = {}) {
    if (!start.contains(groundtruth))
        throw UnrealizableTask("groundtruth is not in the initial hypothesis set");
    if (d.actions.empty()) throw std::invalid_argument("empty action set");
    ExecutionTrace trace{{}, 0, start, false};
    BeliefState b = start;
    while (!is_goal(b) && trace.steps.size() < params.step_cap) {
        const auto choice = detail::tbl_choice(d, b);
        if (!choice) break;
        const Action& a = d.actions[*choice];
        const Outcome o = simulate_action(d, groundtruth, b.robot(), a);
        BeliefState next = belief_update(d, b, a, {o.next, o.contact});
        trace.steps.push_back({b, a, o});
        trace.total_cost += o.cost;
        b = std::move(next);
    }
    trace.localized = is_goal(b);
    trace.final_belief = std::move(b);
    return trace;
}

struct TblEvaluation {
    double expected_cost = 0.0;
    bool success = true;
    std::vector<long> costs;
};

/// Mean TBL cost with each start hypothesis taken as groundtruth.
inline TblEvaluation evaluate_tbl(const Domain& d, const BeliefState& start,
                                  const TblParams& params = {}) {
    TblEvaluation ev;
    long total = 0;
    for (const auto& h : start.hypotheses()) {
        const auto trace = run_tbl(d, start, h, params);
        ev.costs.push_back(trace.total_cost);
        total += trace.total_cost;
        ev.success = ev.success && trace.localized;
    }
    ev.expected_cost = static_cast<double>(total) / static_cast<double>(start.size());
    return ev;
}

}  // namespace contactloc

#endif  // CONTACTLOC_TBL_HPP
