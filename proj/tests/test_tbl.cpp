#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace contactloc;
using fx::hyp;

TEST(Tbl, InfoGain) {
    const auto d = fx::w1_domain();
    const auto px = Action::move(Direction::PosX);
    EXPECT_DOUBLE_EQ(info_gain(d, fx::w1_belief(4, fx::H2()), px), 1.0);
    EXPECT_DOUBLE_EQ(info_gain(d, fx::w1_belief(0, fx::H2()), px), 0.0);
    EXPECT_NEAR(info_gain(d, fx::w1_belief(4, fx::H3()), px), std::log2(3.0) - 2.0 / 3.0, 1e-12);
}

TEST(Tbl, W1FallbackThenProbe) {
    const auto ev = evaluate_tbl(fx::w1_domain(), fx::w1_belief(0, fx::H2()));
    EXPECT_TRUE(ev.success);
    EXPECT_DOUBLE_EQ(ev.expected_cost, 5.0);
}

TEST(Tbl, GoalStart) {
    const auto ev = evaluate_tbl(fx::w1_domain(), BeliefState({0, 0}, {hyp(5)}));
    EXPECT_TRUE(ev.success);
    EXPECT_EQ(ev.expected_cost, 0.0);
}

TEST(Tbl, UnrealizableGroundtruth) {
    EXPECT_THROW(run_tbl(fx::w1_domain(), fx::w1_belief(0, fx::H2()), hyp(3)), UnrealizableTask);
}

TEST(Tbl, MyopiaFixtureCostsMoreThanOptimal) {
    const auto d = fx::myopia_domain();
    const auto b = fx::myopia_start();
    const auto ev = evaluate_tbl(d, b);
    const auto opt = oracle_optimal(d, b).optimal.to_double();
    EXPECT_TRUE(ev.success);
    EXPECT_GE(ev.expected_cost / opt, 1.2);
}

TEST(Tbl, StepCap) {
    TblParams p;
    p.step_cap = 2;
    const auto tr = run_tbl(fx::w1_domain(), fx::w1_belief(0, fx::H2()), hyp(5), p);
    EXPECT_FALSE(tr.localized);
    EXPECT_EQ(tr.steps.size(), 2u);
}

TEST(Tbl, NeverBeatsOracle) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto s = fx::random_instance(seed, seed % 2 == 1).scenario;
        for (std::size_t i = 0; i < s.uncertainty_sets.size(); ++i) {
            const auto b = s.start_belief(i);
            const auto ev = evaluate_tbl(s.domain, b);
            if (!ev.success) continue;
            EXPECT_GE(ev.expected_cost + 1e-9, oracle_optimal(s.domain, b).optimal.to_double());
        }
    }
}
