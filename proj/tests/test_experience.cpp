#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"

using namespace contactloc;
using fx::hyp;

namespace {

ExperienceMDP h2_rolled_from_h3() {
    return rollout_experience(fx::w1_domain(), fx::w1_policy(fx::H2()), fx::w1_belief(0, fx::H3()));
}

}  // namespace

TEST(Experience, RolloutAcrossStarts) {
    const auto e = h2_rolled_from_h3();
    std::set<BeliefState> nodes(e.nodes().begin(), e.nodes().end());
    std::set<BeliefState> expect;
    for (int x = 0; x <= 4; ++x) expect.insert(fx::w1_belief(x, fx::H3()));
    expect.insert(BeliefState({5, 0}, {hyp(6), hyp(7)}));
    EXPECT_EQ(nodes, expect);
    ASSERT_EQ(e.edges().size(), 5u);
    for (const auto& edge : e.edges()) {
        EXPECT_EQ(edge.action, Action::move(Direction::PosX));
        EXPECT_EQ(e.nodes()[edge.source].hypotheses(), fx::H3());
    }
    // The leaf has no outgoing edge: the H2 policy never saw that history.
    const auto leaf = *e.find(BeliefState({5, 0}, {hyp(6), hyp(7)}));
    for (const auto& edge : e.edges()) EXPECT_NE(edge.source, leaf);
}

TEST(Experience, IdentityRolloutReproducesPolicyTree) {
    const auto d = fx::w1_domain();
    const auto pol = fx::w1_policy(fx::H3());
    const auto e = rollout_experience(d, pol, pol.start());
    EXPECT_EQ(e.edges().size(), pol.size());
    // Walk the policy tree independently and compare node sets.
    std::set<BeliefState> tree;
    std::vector<std::pair<BeliefState, std::string>> stack{{pol.start(), ""}};
    while (!stack.empty()) {
        auto [b, key] = stack.back();
        stack.pop_back();
        tree.insert(b);
        const auto a = pol.lookup(key);
        ASSERT_TRUE(a);
        for (const auto& br : successors(d, b, *a))
            if (!is_goal(br.next)) stack.push_back({br.next, extend_history(key, {*a, br.observation})});
    }
    EXPECT_EQ(std::set<BeliefState>(e.nodes().begin(), e.nodes().end()), tree);
    const auto n = naive_experience(d, pol);
    EXPECT_EQ(n.nodes(), e.nodes());
    EXPECT_EQ(n.edges().size(), e.edges().size());
}

TEST(Experience, EmptyPolicyGivesSingleNode) {
    const auto d = fx::w1_domain();
    const HistoryPolicy empty(fx::w1_belief(0, fx::H2()));
    const auto e = rollout_experience(d, empty, fx::w1_belief(0, fx::H3()));
    EXPECT_EQ(e.nodes().size(), 1u);
    EXPECT_TRUE(e.edges().empty());
    const auto n = naive_experience(d, empty);
    EXPECT_EQ(n.nodes(), std::vector<BeliefState>{fx::w1_belief(0, fx::H2())});
    EXPECT_TRUE(n.edges().empty());
}

TEST(Experience, NaiveStaysOnPriorSets) {
    const auto n = naive_experience(fx::w1_domain(), fx::w1_policy(fx::H2()));
    for (const auto& b : n.nodes()) EXPECT_EQ(b.hypotheses(), fx::H2());
    EXPECT_EQ(n.nodes().size(), 5u);
}

TEST(Experience, PrecomputedStartValue) {
    auto e = h2_rolled_from_h3();
    e.precompute(2.0);
    const auto start = *e.find(fx::w1_belief(0, fx::H3()));
    EXPECT_LE(e.values()[start], 10.0);
    // The probe node's edge costs 1 + 2/3 * 2, above its cap 2 * base = 2, so
    // the chain reads four moves plus the capped probe node.
    const auto probe = *e.find(fx::w1_belief(4, fx::H3()));
    EXPECT_DOUBLE_EQ(e.values()[probe], 2.0);
    EXPECT_DOUBLE_EQ(e.values()[start], 6.0);
    const auto leaf = *e.find(BeliefState({5, 0}, {hyp(6), hyp(7)}));
    EXPECT_DOUBLE_EQ(e.values()[leaf], 2.0);
}

TEST(Experience, SingleGoalAdjacentNode) {
    const auto d = fx::w1_domain();
    for (double eps : {1.0, 3.0}) {
        ExperienceMDP e(d);
        const auto i = e.add_node(fx::w1_belief(4, fx::H2()));
        e.add_edge(i, Action::move(Direction::PosX));
        e.precompute(eps);
        EXPECT_DOUBLE_EQ(e.values()[i], std::min(1.0, eps * 1.0));
    }
    // Edge worse than the inflated heuristic: heuristic wins.
    ExperienceMDP e(d);
    const auto i = e.add_node(fx::w1_belief(3, fx::H2()));
    e.add_edge(i, Action::move(Direction::NegX));
    e.precompute(1.0);
    EXPECT_DOUBLE_EQ(e.values()[i], 2.0);
}

TEST(Experience, QueryOnNodesReturnsNodeValues) {
    auto e = h2_rolled_from_h3();
    e.precompute(2.0);
    for (std::size_t i = 0; i < e.nodes().size(); ++i)
        EXPECT_DOUBLE_EQ(e.query(e.nodes()[i]), e.values()[i]);
}

TEST(Experience, QueryWithNoSubsetNodeFallsBack) {
    auto e = h2_rolled_from_h3();
    e.precompute(2.0);
    const BeliefState far({1, 0}, {hyp(8), hyp(9)});
    EXPECT_DOUBLE_EQ(e.query(far), 2.0 * base_heuristic(fx::w1_domain(), far));
}

TEST(Experience, QueryMatchesBruteForce) {
    auto e = h2_rolled_from_h3();
    e.precompute(2.0);
    const auto d = fx::w1_domain();
    for (int x = 0; x <= 4; ++x)
        for (const auto& hs : {fx::H3(), fx::H2(), std::vector<Hypothesis>{hyp(6), hyp(7)},
                               std::vector<Hypothesis>{hyp(4), hyp(5), hyp(6), hyp(7)}}) {
            const BeliefState b({x, 0}, hs);
            double best = 2.0 * base_heuristic(d, b);
            for (std::size_t i = 0; i < e.nodes().size(); ++i)
                best = std::min(best, 2.0 * pair_heuristic(b, e.nodes()[i]) + e.values()[i]);
            EXPECT_DOUBLE_EQ(e.query(b), best) << encode(b);
        }
    // ((2,0),H3) is itself a node: two real moves to the (4,0) node beat 2 * 3.
    const BeliefState b({2, 0}, fx::H3());
    const auto n4 = *e.find(fx::w1_belief(4, fx::H3()));
    EXPECT_DOUBLE_EQ(e.query(b), std::min(6.0, 2.0 + e.values()[n4]));
}

TEST(Experience, GoalQueryIsZeroAndUnprecomputedThrows) {
    auto e = h2_rolled_from_h3();
    EXPECT_THROW(e.query(fx::w1_belief(0, fx::H3())), std::logic_error);
    e.precompute(2.0);
    EXPECT_EQ(e.query(BeliefState({0, 0}, {hyp(5)})), 0.0);
    EXPECT_THROW(e.precompute(0.9), std::invalid_argument);
}
