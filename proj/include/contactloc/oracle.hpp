#ifndef CONTACTLOC_ORACLE_HPP
#define CONTACTLOC_ORACLE_HPP

// Exact optimal values for small localization problems.
//
// Both oracles work with W(b) = |H(b)| * V(b), which is an integer: under a
// uniform belief, W(b) = min_a sum_g (|g| * cost_g + W(b_g)) where g ranges
// over the observation groups of (b, a). Values are reported as exact
// rationals W / |H|.

#include <compare>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contactloc/belief.hpp"
#include "contactloc/rtdp.hpp"
#include "contactloc/world.hpp"

namespace contactloc {

class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw std::invalid_argument("zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const auto g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }
    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 4;

namespace detail {

/// Reachable belief graph with integer-weighted transitions.
struct BeliefGraph {
    struct Branch {
        std::size_t target;  // index into beliefs; goals are included
        std::int64_t weight;  // |g| * cost_g
    };
    std::vector<BeliefState> beliefs;
    std::unordered_map<BeliefState, std::size_t, BeliefHash> index;
    // transitions[b][a] = branches of (b, a); empty for goal beliefs
    std::vector<std::vector<std::vector<Branch>>> transitions;
};

inline BeliefGraph enumerate_reachable(const Domain& d, const BeliefState& start,
                                       std::size_t max_beliefs) {
    BeliefGraph g;
    auto intern = [&g](const BeliefState& b) {
        auto [it, inserted] = g.index.emplace(b, g.beliefs.size());
        if (inserted) {
            g.beliefs.push_back(b);
            g.transitions.emplace_back();
        }
        return it->second;
    };
    intern(start);
    for (std::size_t i = 0; i < g.beliefs.size(); ++i) {
        if (g.beliefs.size() > max_beliefs)
            throw std::length_error("reachable belief space exceeds " +
                                    std::to_string(max_beliefs) + " beliefs");
        if (is_goal(g.beliefs[i])) continue;
        std::vector<std::vector<BeliefGraph::Branch>> per_action;
        for (const auto& a : d.actions) {
            std::vector<BeliefGraph::Branch> branches;
            const BeliefState b = g.beliefs[i];
            for (const auto& br : successors(d, b, a))
                branches.push_back({intern(br.next), static_cast<std::int64_t>(br.count) * br.cost});
            per_action.push_back(std::move(branches));
        }
        g.transitions[i] = std::move(per_action);
    }
    return g;
}

}  // namespace detail

struct OracleResult {
    Rational optimal;
    std::unordered_map<BeliefState, Rational, BeliefHash> values;
    std::size_t reachable_beliefs = 0;

    Rational value(const BeliefState& b) const { return values.at(b); }
};

inline constexpr std::size_t kOracleBeliefLimit = 2'000'000;

/// Exact optimum by hypothesis-set layers. Sets are processed by increasing
/// size; inside one set, moves that do not split it are a deterministic
/// shortest-path problem whose terminal costs are the splitting actions'
/// values, solved by multi-source Dijkstra over reversed edges.
inline OracleResult oracle_optimal(const Domain& d, const BeliefState& start,
                                   std::size_t max_beliefs = kOracleBeliefLimit) {
    require_distinguishable(d, start);
    const auto g = detail::enumerate_reachable(d, start, max_beliefs);
    const std::size_t n = g.beliefs.size();

    // Group beliefs sharing a hypothesis set.
    std::unordered_map<std::string, std::vector<std::size_t>> layers;
    std::vector<std::string> layer_keys;
    for (std::size_t i = 0; i < n; ++i) {
        auto key = encode_hypotheses(g.beliefs[i].hypotheses());
        auto [it, inserted] = layers.try_emplace(key);
        if (inserted) layer_keys.push_back(key);
        it->second.push_back(i);
    }
    std::stable_sort(layer_keys.begin(), layer_keys.end(),
                     [&](const std::string& a, const std::string& b) {
                         return g.beliefs[layers[a].front()].size() <
                                g.beliefs[layers[b].front()].size();
                     });

    std::vector<std::int64_t> w(n, kUnreachable);
    for (const auto& key : layer_keys) {
        const auto& members = layers[key];
        if (is_goal(g.beliefs[members.front()])) {
            for (auto i : members) w[i] = 0;
            continue;
        }
        // reverse[j] = (i, weight) for each non-splitting move i -> j
        std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, std::int64_t>>> reverse;
        using Entry = std::pair<std::int64_t, std::size_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
        for (auto i : members) {
            std::int64_t terminal = kUnreachable;
            for (const auto& branches : g.transitions[i]) {
                if (branches.size() == 1) {
                    const auto& br = branches.front();
                    if (br.target != i) reverse[br.target].emplace_back(i, br.weight);
                    continue;
                }
                std::int64_t q = 0;
                for (const auto& br : branches) q += br.weight + w[br.target];
                terminal = std::min(terminal, q);
            }
            w[i] = terminal;
            if (terminal < kUnreachable) queue.emplace(terminal, i);
        }
        while (!queue.empty()) {
            auto [dist, j] = queue.top();
            queue.pop();
            if (dist > w[j]) continue;
            auto it = reverse.find(j);
            if (it == reverse.end()) continue;
            for (const auto& [i, weight] : it->second)
                if (dist + weight < w[i]) {
                    w[i] = dist + weight;
                    queue.emplace(w[i], i);
                }
        }
    }

    OracleResult out;
    out.reachable_beliefs = n;
    for (std::size_t i = 0; i < n; ++i)
        if (w[i] < kUnreachable)
            out.values.emplace(g.beliefs[i],
                               Rational(w[i], static_cast<std::int64_t>(g.beliefs[i].size())));
    if (w[0] >= kUnreachable)
        throw IndistinguishableHypotheses("goal set unreachable from " + encode(start));
    out.optimal = Rational(w[0], static_cast<std::int64_t>(start.size()));
    return out;
}

/// Plain Gauss-Seidel value iteration from zero over the whole reachable
/// belief space, run to an exact integer fixpoint. Independent check on
/// `oracle_optimal`.
inline OracleResult value_iteration_oracle(const Domain& d, const BeliefState& start,
                                           std::size_t max_beliefs = kOracleBeliefLimit) {
    require_distinguishable(d, start);
    const auto g = detail::enumerate_reachable(d, start, max_beliefs);
    const std::size_t n = g.beliefs.size();
    std::vector<std::int64_t> w(n, 0);
    bool changed = true;
    std::size_t sweeps = 0;
    while (changed) {
        changed = false;
        if (++sweeps > 100 * n + 1000)
            throw IndistinguishableHypotheses("value iteration did not reach a fixpoint");
        for (std::size_t i = 0; i < n; ++i) {
            if (is_goal(g.beliefs[i])) continue;
            std::int64_t best = kUnreachable;
            for (const auto& branches : g.transitions[i]) {
                std::int64_t q = 0;
                for (const auto& br : branches) q += br.weight + w[br.target];
                best = std::min(best, q);
            }
            if (best != w[i]) {
                w[i] = best;
                changed = true;
            }
        }
    }
    OracleResult out;
    out.reachable_beliefs = n;
    for (std::size_t i = 0; i < n; ++i)
        out.values.emplace(g.beliefs[i],
                           Rational(w[i], static_cast<std::int64_t>(g.beliefs[i].size())));
    out.optimal = out.values.at(start);
    return out;
}

}  // namespace contactloc

#endif  // CONTACTLOC_ORACLE_HPP
