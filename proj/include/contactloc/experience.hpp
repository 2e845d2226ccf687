#ifndef CONTACTLOC_EXPERIENCE_HPP
#define CONTACTLOC_EXPERIENCE_HPP

// Experience MDPs harvested from earlier history policies and the experience
// heuristic computed over them.
//
// The experience value of a belief is the cheapest mix of two kinds of moves:
// real transitions along harvested (belief, action) edges at their true
// expected cost, and instantaneous jumps between beliefs charged
// eps * pair_heuristic. A jump straight to the goal set is charged
// eps * base_heuristic. Node values are precomputed by asynchronous sweeps;
// any other belief is then answered by one pass over the nodes.
//
// Query cost is O(|nodes|) per belief. Nodes are scanned in ascending value
// order so the scan stops once no remaining node can improve the answer.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "contactloc/belief.hpp"
#include "contactloc/policy.hpp"
#include "contactloc/rtdp.hpp"
#include "contactloc/world.hpp"

namespace contactloc {

struct ExperienceBranch {
    std::size_t count;
    int cost;
    std::optional<std::size_t> target;  // node index; empty for goal successors
};

struct ExperienceEdge {
    std::size_t source;
    Action action;
    std::size_t total;
    std::vector<ExperienceBranch> branches;

    double expected_cost() const noexcept {
        long w = 0;
        for (const auto& br : branches) w += static_cast<long>(br.count) * br.cost;
        return static_cast<double>(w) / static_cast<double>(total);
    }
};

class ExperienceMDP {
public:
    explicit ExperienceMDP(Domain domain) : domain_(std::move(domain)) {}

    const Domain& domain() const noexcept { return domain_; }
    const std::vector<BeliefState>& nodes() const noexcept { return nodes_; }
    const std::vector<ExperienceEdge>& edges() const noexcept { return edges_; }
    const std::vector<double>& values() const noexcept { return values_; }
    bool has_values() const noexcept { return !values_.empty() || nodes_.empty(); }
    double epsilon() const noexcept { return epsilon_; }

    std::optional<std::size_t> find(const BeliefState& b) const {
        auto it = index_.find(b);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Adds a non-goal belief; returns its index.
    std::size_t add_node(const BeliefState& b) {
        if (is_goal(b)) throw std::invalid_argument("goal beliefs are not experience nodes");
        if (auto i = find(b)) return *i;
        nodes_.push_back(b);
        index_.emplace(b, nodes_.size() - 1);
        values_.clear();
        return nodes_.size() - 1;
    }

    /// Adds the edge (source, a) with all of its branches, creating successor
    /// nodes as needed. Returns false when the edge already exists.
    bool add_edge(std::size_t source, const Action& a) {
        for (const auto& e : edges_)
            if (e.source == source && e.action == a) return false;
        ExperienceEdge edge{source, a, nodes_[source].size(), {}};
        for (const auto& br : successors(domain_, nodes_[source], a)) {
            std::optional<std::size_t> target;
            if (!is_goal(br.next)) target = add_node(br.next);
            edge.branches.push_back({br.count, br.cost, target});
        }
        edges_.push_back(std::move(edge));
        values_.clear();
        return true;
    }

    /// Initializes every node to eps * base heuristic, then sweeps asynchronous
    /// updates until no value moves by more than `tol`.
    void precompute(double epsilon, double tol = 1e-12);

    /// Experience heuristic for an arbitrary belief.
    double query(const BeliefState& b) const;

private:
    void build_index();

    Domain domain_;
    std::vector<BeliefState> nodes_;
    std::unordered_map<BeliefState, std::size_t, BeliefHash> index_;
    std::vector<ExperienceEdge> edges_;
    std::vector<double> values_;
    std::vector<double> base_;
    double epsilon_ = 1.0;

    // Query acceleration: hypotheses seen in any node, each node's set as a
    // bitmask over that universe, and node indices by ascending value.
    std::vector<Hypothesis> universe_;
    std::vector<std::vector<std::uint64_t>> masks_;
    std::vector<std::size_t> by_value_;
};

inline void ExperienceMDP::precompute(double epsilon, double tol) {
    if (!(epsilon >= 1.0)) throw std::invalid_argument("epsilon must be >= 1");
    epsilon_ = epsilon;
    const std::size_t n = nodes_.size();
    base_.assign(n, 0.0);
    values_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        base_[i] = base_heuristic(domain_.object, nodes_[i]);
        values_[i] = epsilon * base_[i];
    }

    // Finite jumps only: target hypothesis set contained in the source's.
    std::vector<std::vector<std::pair<std::size_t, double>>> jumps(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) {
                const double h = pair_heuristic(nodes_[i], nodes_[j]);
                if (h < kInfinity) jumps[i].emplace_back(j, epsilon * h);
            }
    std::vector<std::vector<std::size_t>> out_edges(n);
    for (std::size_t e = 0; e < edges_.size(); ++e) out_edges[edges_[e].source].push_back(e);

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double v = epsilon * base_[i];
            for (const auto& [j, cost] : jumps[i]) v = std::min(v, cost + values_[j]);
            for (std::size_t e : out_edges[i]) {
                const auto& edge = edges_[e];
                double q = edge.expected_cost();
                for (const auto& br : edge.branches)
                    if (br.target)
                        q += static_cast<double>(br.count) / static_cast<double>(edge.total) *
                             values_[*br.target];
                v = std::min(v, q);
            }
            if (std::abs(v - values_[i]) > tol) changed = true;
            values_[i] = v;
        }
    }
    build_index();
}

inline void ExperienceMDP::build_index() {
    universe_.clear();
    for (const auto& b : nodes_)
        universe_.insert(universe_.end(), b.hypotheses().begin(), b.hypotheses().end());
    std::sort(universe_.begin(), universe_.end());
    universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
    const std::size_t words = (universe_.size() + 63) / 64;
    masks_.assign(nodes_.size(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        for (const auto& h : nodes_[i].hypotheses()) {
            const auto k = static_cast<std::size_t>(
                std::lower_bound(universe_.begin(), universe_.end(), h) - universe_.begin());
            masks_[i][k / 64] |= std::uint64_t{1} << (k % 64);
        }
    by_value_.resize(nodes_.size());
    std::iota(by_value_.begin(), by_value_.end(), std::size_t{0});
    std::stable_sort(by_value_.begin(), by_value_.end(),
                     [this](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
}

inline double ExperienceMDP::query(const BeliefState& b) const {
    if (is_goal(b)) return 0.0;
    if (!has_values()) throw std::logic_error("experience values not precomputed");
    double best = epsilon_ * base_heuristic(domain_.object, b);
    if (nodes_.empty()) return best;

    const std::size_t words = (universe_.size() + 63) / 64;
    std::vector<std::uint64_t> mask(words, 0);
    for (const auto& h : b.hypotheses()) {
        auto it = std::lower_bound(universe_.begin(), universe_.end(), h);
        if (it != universe_.end() && *it == h) {
            const auto k = static_cast<std::size_t>(it - universe_.begin());
            mask[k / 64] |= std::uint64_t{1} << (k % 64);
        }
    }
    for (std::size_t i : by_value_) {
        if (values_[i] >= best) break;
        if (nodes_[i].size() > b.size()) continue;
        bool subset = true;
        for (std::size_t w = 0; w < words && subset; ++w)
            subset = (masks_[i][w] & ~mask[w]) == 0;
        if (!subset) continue;
        best = std::min(best,
                        epsilon_ * manhattan(b.robot(), nodes_[i].robot()) + values_[i]);
    }
    return best;
}

/// Rolls `policy` out from `start`, following its history keys. Histories the
/// policy has no entry for become leaves.
inline ExperienceMDP rollout_experience(const Domain& d, const HistoryPolicy& policy,
                                        const BeliefState& start) {
    ExperienceMDP exp(d);
    if (is_goal(start)) return exp;
    struct Item {
        std::size_t node;
        std::string history;
    };
    std::deque<Item> frontier{{exp.add_node(start), ""}};
    while (!frontier.empty()) {
        Item it = std::move(frontier.front());
        frontier.pop_front();
        const auto a = policy.lookup(it.history);
        if (!a) continue;
        const BeliefState source = exp.nodes()[it.node];
        exp.add_edge(it.node, *a);
        for (const auto& br : successors(d, source, *a)) {
            if (is_goal(br.next)) continue;
            frontier.push_back(
                {*exp.find(br.next), extend_history(it.history, {*a, br.observation})});
        }
    }
    return exp;
}

/// The policy's own belief tree, rolled out from its original start.
inline ExperienceMDP naive_experience(const Domain& d, const HistoryPolicy& policy) {
    return rollout_experience(d, policy, policy.start());
}

inline ExperienceMDP precompute_values(ExperienceMDP exp, double epsilon) {
    exp.precompute(epsilon);
    return exp;
}

inline double query(const ExperienceMDP& exp, const BeliefState& b) { return exp.query(b); }

inline Heuristic make_experience_heuristic(std::shared_ptr<const ExperienceMDP> exp) {
    return [exp = std::move(exp)](const BeliefState& b) { return exp->query(b); };
}

}  // namespace contactloc

#endif  // CONTACTLOC_EXPERIENCE_HPP
