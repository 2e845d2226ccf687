#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace contactloc;
using fx::hyp;

namespace {

std::vector<Hypothesis> row(std::initializer_list<int> xs) {
    std::vector<Hypothesis> out;
    for (int x : xs) out.push_back(hyp(x));
    return out;
}

DatabaseEntry entry(std::string id, std::vector<Hypothesis> hs) {
    BuildRecord rec;
    rec.scenario_id = id;
    rec.success = true;
    return {id, HistoryPolicy(BeliefState({0, 0}, std::move(hs))), rec};
}

}  // namespace

TEST(Preprocess, OrderBySize) {
    ProblemFamily f{fx::w1_domain(), {0, 0}, {"a", "b", "c"}, {}};
    std::vector<Hypothesis> big;
    for (int x = 1; x < 10; ++x)
        for (int r : {0, 90, 180}) big.push_back(hyp(x, 0, *rotation_from_degrees(r)));
    f.sets = {big, row({5, 7}), row({1, 2, 3, 4, 5, 6, 7, 8})};
    ASSERT_EQ(big.size(), 27u);
    EXPECT_EQ(order_problems(f), (std::vector<std::size_t>{1, 2, 0}));
}

TEST(Preprocess, EqualSizesOrderByEncoding) {
    ProblemFamily f{fx::w1_domain(), {0, 0}, {"a", "b"}, {row({6, 7, 8}), row({5, 6, 7})}};
    ASSERT_LT(encode_hypotheses(f.sets[1]), encode_hypotheses(f.sets[0]));
    EXPECT_EQ(order_problems(f), (std::vector<std::size_t>{1, 0}));
    ProblemFamily empty{fx::w1_domain(), {0, 0}, {}, {}};
    EXPECT_THROW(order_problems(empty), std::invalid_argument);
}

TEST(Preprocess, SelectExperienceByJaccard) {
    PolicyDatabase db;
    EXPECT_EQ(select_experience(db, fx::H3()), nullptr);
    db.add(entry("h2", fx::H2()));
    const auto* e = select_experience(db, fx::H3());
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(e->scenario_id, "h2");
    EXPECT_DOUBLE_EQ(jaccard(fx::H2(), fx::H3()), 2.0 / 3.0);
}

TEST(Preprocess, SelectExperienceTieGoesToLargerSet) {
    // Against {1..4}: {1,2} gives 2/4, {1..8} gives 4/8.
    PolicyDatabase db;
    db.add(entry("small", row({1, 2})));
    db.add(entry("large", row({1, 2, 3, 4, 5, 6, 7, 8})));
    const auto cur = row({1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(jaccard(row({1, 2}), cur), jaccard(row({1, 2, 3, 4, 5, 6, 7, 8}), cur));
    EXPECT_EQ(select_experience(db, cur)->scenario_id, "large");
}

TEST(Preprocess, FailedEntriesAreNotReused) {
    PolicyDatabase db;
    auto bad = entry("bad", fx::H2());
    bad.record.success = false;
    db.add(bad);
    EXPECT_EQ(select_experience(db, fx::H3()), nullptr);
}

TEST(Preprocess, ExperienceBeatsNoExperienceOnW1) {
    BuildOptions o;
    o.epsilon = 2.0;
    const auto exp = build_database(fx::w1_family(), o);
    o.mode = BuildMode::NoExperience;
    const auto none = build_database(fx::w1_family(), o);
    EXPECT_EQ(exp.database.size(), 2u);
    EXPECT_EQ(exp.record("set001")->experience_from, "set000");
    EXPECT_LT(exp.record("set001")->backups, none.record("set001")->backups);
    EXPECT_DOUBLE_EQ(exp.success_rate(), 1.0);
    EXPECT_DOUBLE_EQ(none.success_rate(), 1.0);
}

TEST(Preprocess, SingleProblemFamilyMatchesPlainSolve) {
    ProblemFamily f{fx::w1_domain(), {0, 0}, {"only"}, {fx::H3()}};
    BuildOptions o;
    o.epsilon = 2.0;
    const auto built = build_database(f, o);
    SolverParams sp;
    sp.epsilon = 2.0;
    const auto plain = solve(f.problem(0), sp);
    EXPECT_EQ(built.records[0].backups, plain.stats.backups);
    EXPECT_EQ(built.database.entries()[0].policy.table(),
              extract_history_policy(f.problem(0), plain.values).table());
}

TEST(Preprocess, StoredPoliciesSucceedWithinBound) {
    const auto s = fx::random_instance(7, true).scenario;
    for (auto mode : {BuildMode::Experience, BuildMode::Naive, BuildMode::RandomOrder,
                      BuildMode::NoExperience}) {
        BuildOptions o;
        o.epsilon = 3.0;
        o.mode = mode;
        o.compute_oracle = true;
        const auto r = build_database(ProblemFamily::from(s), o);
        EXPECT_DOUBLE_EQ(r.success_rate(), 1.0) << to_string(mode);
        for (const auto& e : r.database.entries()) {
            const auto ev = evaluate_exact(s.domain, e.policy);
            EXPECT_TRUE(ev.success);
            ASSERT_TRUE(e.record.oracle_cost);
            EXPECT_LE(ev.expected_cost, 3.0 * e.record.oracle_cost->to_double() + 1e-9);
        }
    }
}

TEST(Preprocess, IndistinguishableProblemIsRecordedNotFatal) {
    ProblemFamily f{fx::w1_domain(), {0, 0}, {"ok", "dup"},
                    {fx::H2(), {hyp(5, 0, Rotation::R0), hyp(5, 0, Rotation::R90)}}};
    const auto r = build_database(f, BuildOptions{});
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_TRUE(r.record("ok")->success);
    EXPECT_FALSE(r.record("dup")->success);
    EXPECT_FALSE(r.record("dup")->diagnostic.empty());
}

TEST(Preprocess, BudgetExhaustionIsRecordedAsFailure) {
    BuildOptions o;
    o.solver.backup_budget = 2;
    const auto r = build_database(fx::w1_family(), o);
    EXPECT_EQ(r.records.size(), 2u);
    EXPECT_LT(r.success_rate(), 1.0);
}

TEST(Preprocess, DatabaseRoundTripAndDeterminism) {
    BuildOptions o;
    o.epsilon = 2.0;
    o.mode = BuildMode::RandomOrder;
    o.seed = 5;
    const auto s = fx::random_instance(3, false).scenario;
    const auto a = build_database(ProblemFamily::from(s), o);
    const auto b = build_database(ProblemFamily::from(s), o);
    const auto text = serialize(a.database);
    EXPECT_EQ(text, serialize(b.database));
    EXPECT_EQ(stats_csv(a.records), stats_csv(b.records));
    const auto back = parse_database(text);
    EXPECT_EQ(serialize(back), text);
    EXPECT_THROW(parse_database(text.substr(0, 20)), FormatError);
}

TEST(Preprocess, StatsCsvHeader) {
    const auto r = build_database(fx::w1_family(), BuildOptions{});
    const auto csv = stats_csv(r.records);
    EXPECT_EQ(csv.substr(0, csv.find("\r\n")),
              "scenario_id,|H|,mode,epsilon,backups,wall_time_s,expected_cost,oracle_cost,success");
}
