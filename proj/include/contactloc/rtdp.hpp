#ifndef CONTACTLOC_RTDP_HPP
#define CONTACTLOC_RTDP_HPP

// RTDP-Bel over the belief MDP with a pluggable heuristic.
//
// A solve repeats greedy rollouts from the start belief. Each rollout samples
// a groundtruth hypothesis uniformly, backs up the current belief, takes the
// greedy action and follows the observation branch consistent with the
// sampled hypothesis until a goal is reached. Convergence is declared once
// `consecutive_converged_rollouts` rollouts in a row have had every residual
// within tolerance and a sweep over the whole greedy policy graph confirms it.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "contactloc/belief.hpp"
#include "contactloc/errors.hpp"
#include "contactloc/policy.hpp"
#include "contactloc/world.hpp"

namespace contactloc {

using Heuristic = std::function<double(const BeliefState&)>;

/// One localization problem: a domain plus a start belief.
struct Problem {
    std::string id;
    Domain domain;
    BeliefState start;
};

inline Heuristic make_base_heuristic(const Domain& d) {
    return [model = d.object](const BeliefState& b) { return base_heuristic(model, b); };
}

/// b -> eps * h(b). Rejects eps < 1.
inline Heuristic inflate(Heuristic h, double epsilon) {
    if (!(epsilon >= 1.0)) throw std::invalid_argument("epsilon must be >= 1");
    if (epsilon == 1.0) return h;
    return [h = std::move(h), epsilon](const BeliefState& b) { return epsilon * h(b); };
}

struct SolverParams {
    double epsilon = 1.0;
    double residual_tol = 1e-9;
    std::size_t consecutive_converged_rollouts = 10;
    std::size_t backup_budget = 10'000'000;
    std::size_t max_rollout_depth = 10'000;
    std::uint64_t rng_seed = 0;
    /// Re-back-up each unconverged rollout's trajectory from its end.
    bool reverse_backups = true;
};

struct SolveStats {
    std::size_t backups = 0;
    std::size_t rollouts = 0;
    double wall_time = 0.0;
    bool converged = false;
    double v_start = 0.0;
};

/// Cost-to-go estimates keyed by belief. Unseen beliefs read the heuristic;
/// goal beliefs are always 0.
class ValueTable {
public:
    explicit ValueTable(Heuristic heuristic) : heuristic_(std::move(heuristic)) {}

    /// Reads V(b), storing the heuristic value on first touch.
    double value(const BeliefState& b) {
        if (is_goal(b)) return 0.0;
        auto it = values_.find(b);
        if (it != values_.end()) return it->second;
        const double h = heuristic_(b);
        values_.emplace(b, h);
        return h;
    }

    /// Reads V(b) without touching the table.
    double peek(const BeliefState& b) const {
        if (is_goal(b)) return 0.0;
        auto it = values_.find(b);
        return it != values_.end() ? it->second : heuristic_(b);
    }

    void set(const BeliefState& b, double v) { values_[b] = v; }
    bool contains(const BeliefState& b) const { return values_.count(b) != 0; }
    std::size_t size() const noexcept { return values_.size(); }
    const Heuristic& heuristic() const noexcept { return heuristic_; }

private:
    Heuristic heuristic_;
    std::unordered_map<BeliefState, double, BeliefHash> values_;
};

struct BackupResult {
    std::size_t action;  // index into Domain::actions
    double q;
    double residual;
};

namespace detail {

// Ties within this margin go to the lower action index.
inline constexpr double kTieMargin = 1e-12;

template <class ValueFn>
std::pair<std::size_t, double> greedy(const Domain& d, const BeliefState& b, ValueFn&& value) {
    std::size_t best = 0;
    double best_q = kInfinity;
    for (std::size_t i = 0; i < d.actions.size(); ++i) {
        double q = 0.0;
        long weighted = 0;
        for (const auto& br : successors(d, b, d.actions[i])) {
            weighted += static_cast<long>(br.count) * br.cost;
            q += br.probability() * value(br.next);
        }
        q += static_cast<double>(weighted) / static_cast<double>(b.size());
        if (q < best_q - kTieMargin) {
            best_q = q;
            best = i;
        }
    }
    return {best, best_q};
}

}  // namespace detail

/// Q(b,a) = C(b,a) + sum_z P(z|b,a) V(b_a^z) for every action; stores the
/// minimum in the table. Precondition: `b` is not a goal.
inline BackupResult bellman_backup(const Domain& d, const BeliefState& b, ValueTable& table) {
    if (d.actions.empty()) throw std::invalid_argument("empty action set");
    const double old = table.value(b);
    const auto [best, q] =
        detail::greedy(d, b, [&table](const BeliefState& s) { return table.value(s); });
    table.set(b, q);
    return {best, q, std::abs(q - old)};
}

/// Greedy action under the current table, same tie-break as the backup.
inline std::size_t greedy_action(const Domain& d, const BeliefState& b, const ValueTable& table) {
    return detail::greedy(d, b, [&table](const BeliefState& s) { return table.peek(s); }).first;
}

/// Throws IndistinguishableHypotheses when two start hypotheses can never be
/// told apart.
inline void require_distinguishable(const Domain& d, const BeliefState& start) {
    if (auto pair = find_indistinguishable(d.object, start.hypotheses())) {
        const auto& [a, b] = *pair;
        throw IndistinguishableHypotheses(
            "hypotheses (" + std::to_string(a.x) + "," + std::to_string(a.y) + "," +
            std::to_string(degrees(a.rot)) + ") and (" + std::to_string(b.x) + "," +
            std::to_string(b.y) + "," + std::to_string(degrees(b.rot)) +
            ") occupy identical cells");
    }
}

struct SolveResult {
    ValueTable values;
    SolveStats stats;
};

/// Observer invoked after every backup with (belief, old value, new value).
using BackupObserver = std::function<void(const BeliefState&, double, double)>;

inline SolveResult solve(const Problem& problem, Heuristic heuristic, const SolverParams& params,
                         const BackupObserver& observer = {}) {
    if (!(params.epsilon >= 1.0)) throw std::invalid_argument("epsilon must be >= 1");
    if (params.consecutive_converged_rollouts == 0 || params.backup_budget == 0 ||
        params.max_rollout_depth == 0)
        throw std::invalid_argument("solver bounds must be positive");
    require_distinguishable(problem.domain, problem.start);

    const auto t0 = std::chrono::steady_clock::now();
    const Domain& d = problem.domain;
    SolveResult result{ValueTable(std::move(heuristic)), {}};
    ValueTable& table = result.values;
    SolveStats& stats = result.stats;

    auto backup = [&](const BeliefState& b) {
        const double old = observer ? table.value(b) : 0.0;
        const auto r = bellman_backup(d, b, table);
        ++stats.backups;
        if (observer) observer(b, old, r.q);
        return r;
    };

    // Backs up every non-goal belief reachable under the greedy policy and
    // reports the largest residual.
    auto sweep_greedy_graph = [&]() {
        double worst = 0.0;
        std::unordered_set<BeliefState, BeliefHash> seen{problem.start};
        std::deque<BeliefState> frontier{problem.start};
        while (!frontier.empty() && stats.backups < params.backup_budget) {
            BeliefState b = std::move(frontier.front());
            frontier.pop_front();
            const auto r = backup(b);
            worst = std::max(worst, r.residual);
            for (auto& br : successors(d, b, d.actions[r.action]))
                if (!is_goal(br.next) && seen.insert(br.next).second)
                    frontier.push_back(std::move(br.next));
        }
        if (!frontier.empty()) worst = kInfinity;
        return worst;
    };

    std::mt19937_64 rng(params.rng_seed);
    const auto& hs = problem.start.hypotheses();
    std::uniform_int_distribution<std::size_t> pick(0, hs.size() - 1);

    std::size_t quiet = 0;
    if (is_goal(problem.start)) {
        stats.converged = true;
    } else {
        while (stats.backups < params.backup_budget) {
            const Hypothesis truth = hs[pick(rng)];
            BeliefState b = problem.start;
            double worst = 0.0;
            std::vector<BeliefState> trail;
            while (!is_goal(b) && trail.size() < params.max_rollout_depth &&
                   stats.backups < params.backup_budget) {
                const auto r = backup(b);
                worst = std::max(worst, r.residual);
                const Action& a = d.actions[r.action];
                const Outcome o = simulate_action(d, truth, b.robot(), a);
                trail.push_back(b);
                b = belief_update(d, b, a, {o.next, o.contact});
            }
            if (params.reverse_backups && worst > params.residual_tol)
                for (auto it = trail.rbegin(); it != trail.rend() &&
                                               stats.backups < params.backup_budget; ++it)
                    backup(*it);
            ++stats.rollouts;
            if (!is_goal(b)) worst = kInfinity;
            quiet = worst <= params.residual_tol ? quiet + 1 : 0;
            if (quiet >= params.consecutive_converged_rollouts) {
                if (sweep_greedy_graph() <= params.residual_tol) {
                    stats.converged = true;
                    break;
                }
                quiet = 0;
            }
        }
    }
    stats.v_start = table.peek(problem.start);
    stats.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

inline SolveResult solve(const Problem& problem, const SolverParams& params) {
    return solve(problem, inflate(make_base_heuristic(problem.domain), params.epsilon), params);
}

/// Breadth-first walk of the greedy belief tree from the start, recording
/// history -> action at every non-goal node.
inline HistoryPolicy extract_history_policy(const Problem& problem, const ValueTable& table,
                                            std::size_t depth_cap = kDefaultDepthCap) {
    const Domain& d = problem.domain;
    HistoryPolicy policy(problem.start);
    struct Node {
        BeliefState belief;
        std::string history;
        std::vector<BeliefState> path;
    };
    std::deque<Node> frontier;
    if (!is_goal(problem.start)) frontier.push_back({problem.start, "", {}});
    while (!frontier.empty()) {
        Node n = std::move(frontier.front());
        frontier.pop_front();
        if (n.path.size() >= depth_cap ||
            std::find(n.path.begin(), n.path.end(), n.belief) != n.path.end())
            throw GreedyCycle("greedy policy revisits " + encode(n.belief));
        const std::size_t ai = greedy_action(d, n.belief, table);
        const Action& a = d.actions[ai];
        policy.insert(n.history, a);
        for (auto& br : successors(d, n.belief, a)) {
            if (is_goal(br.next)) continue;
            auto path = n.path;
            path.push_back(n.belief);
            frontier.push_back({std::move(br.next),
                                extend_history(n.history, {a, br.observation}),
                                std::move(path)});
        }
    }
    return policy;
}

}  // namespace contactloc

#endif  // CONTACTLOC_RTDP_HPP
