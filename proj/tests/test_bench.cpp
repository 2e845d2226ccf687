#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace contactloc;
using fx::hyp;

TEST(Oracle, W1Values) {
    const auto d = fx::w1_domain();
    EXPECT_EQ(oracle_optimal(d, fx::w1_belief(0, fx::H2())).optimal, Rational(5, 1));
    EXPECT_EQ(oracle_optimal(d, fx::w1_belief(0, fx::H3())).optimal, Rational(17, 3));
    EXPECT_EQ(oracle_optimal(d, BeliefState({0, 0}, {hyp(5)})).optimal, Rational(0, 1));
}

TEST(Oracle, RejectsIndistinguishable) {
    EXPECT_THROW(oracle_optimal(fx::w1_domain(),
                                BeliefState({0, 0}, {hyp(5, 0, Rotation::R0),
                                                     hyp(5, 0, Rotation::R90)})),
                 IndistinguishableHypotheses);
}

TEST(Oracle, AgreesWithValueIteration) {
    std::size_t compared = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto s = fx::random_instance(seed, seed % 2 == 0).scenario;
        for (std::size_t i = 0; i < s.uncertainty_sets.size(); ++i) {
            const auto b = s.start_belief(i);
            const auto layered = oracle_optimal(s.domain, b);
            if (layered.reachable_beliefs > 200) continue;
            const auto vi = value_iteration_oracle(s.domain, b);
            EXPECT_EQ(layered.optimal, vi.optimal);
            for (const auto& [belief, v] : layered.values) EXPECT_EQ(vi.value(belief), v);
            ++compared;
        }
    }
    EXPECT_GE(compared, 20u);
}

TEST(Oracle, Rational) {
    EXPECT_EQ(Rational(4, -6), Rational(-2, 3));
    EXPECT_EQ(Rational(17, 3).str(), "17/3");
    EXPECT_LT(Rational(1, 3), Rational(1, 2));
    EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(Bench, ParseMethod) {
    EXPECT_EQ(parse_method("rtdp:1"), (MethodSpec{MethodSpec::Kind::Rtdp, 1.0}));
    EXPECT_EQ(parse_method("e-rtdp:2").kind, MethodSpec::Kind::ERtdp);
    EXPECT_EQ(parse_method("tbl").kind, MethodSpec::Kind::Tbl);
    EXPECT_THROW(parse_method("astar:2"), std::invalid_argument);
    EXPECT_THROW(parse_method("rtdp:0.5"), std::invalid_argument);
    EXPECT_THROW(parse_method("rtdp:x"), std::invalid_argument);
}

TEST(Bench, W1SpeedupOnLargerProblem) {
    const auto rep = run_benchmark(fx::w1_family(), {parse_method("rtdp:1"), parse_method("e-rtdp:2")},
                                   BenchOptions{});
    bool seen = false;
    for (const auto& r : rep.rows) {
        EXPECT_TRUE(r.success);
        ASSERT_TRUE(r.oracle_cost);
        if (r.method == "e-rtdp" && r.scenario_id == "set001") {
            ASSERT_TRUE(r.relative_speedup);
            EXPECT_GT(*r.relative_speedup, 1.0);
            seen = true;
        }
    }
    EXPECT_TRUE(seen);
}

TEST(Bench, SingleMethodIsSelfRelative) {
    for (const char* m : {"rtdp:1", "e-rtdp:2"}) {
        const auto rep = run_benchmark(fx::w1_family(), {parse_method(m)}, BenchOptions{});
        for (const auto& r : rep.rows) {
            ASSERT_TRUE(r.relative_speedup);
            ASSERT_TRUE(r.relative_cost);
            EXPECT_DOUBLE_EQ(*r.relative_speedup, 1.0);
            EXPECT_DOUBLE_EQ(*r.relative_cost, 1.0);
        }
    }
}

TEST(Bench, RowsSortedAndCsvDeterministic) {
    const auto f = ProblemFamily::from(fx::random_instance(11, true).scenario);
    const std::vector<MethodSpec> ms{parse_method("tbl"), parse_method("random:2"),
                                     parse_method("rtdp:1"), parse_method("naive:3")};
    BenchOptions o;
    o.seed = 9;
    const auto a = run_benchmark(f, ms, o);
    const auto b = run_benchmark(f, ms, o);
    EXPECT_EQ(to_csv(a), to_csv(b));
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    for (std::size_t i = 1; i < a.rows.size(); ++i)
        EXPECT_LE(std::tie(a.rows[i - 1].scenario_id, a.rows[i - 1].method, a.rows[i - 1].epsilon),
                  std::tie(a.rows[i].scenario_id, a.rows[i].method, a.rows[i].epsilon));
    const auto csv = to_csv(a);
    EXPECT_EQ(csv.substr(0, csv.find("\r\n")),
              "scenario_id,|H|,method,epsilon,success,backups,wall_time_s,expected_cost,"
              "oracle_cost,relative_speedup,relative_cost");
}
