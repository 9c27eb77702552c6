#include <cmath>
#include <optional>
#include <vector>

#include <gtest/gtest.h>

#include "glp/errors.hpp"
#include "glp/hitting.hpp"
#include "glp/run.hpp"

namespace glp {
namespace {

TEST(Tracker, FirstVertexHitsAtZero)
{
    const std::vector<BlockSpec> blocks{{1, 1, {2}}};
    const auto rec = track_blocks(0.5, 1, 100, blocks);
    ASSERT_EQ(rec.size(), 1u);
    ASSERT_TRUE(rec[0].hit_times[0].has_value());
    EXPECT_EQ(*rec[0].hit_times[0], 0u);
}

TEST(Tracker, NoVertexStepsIsDeterministic)
{
    // With p = 0 vertex 1 has degree 2(t + 1), so threshold 2n + 2 is hit at n.
    const std::vector<BlockSpec> blocks{{1, 1, {4, 10, 202}}};
    const auto rec = track_blocks(0.0, 9, 1000, blocks).front();
    EXPECT_EQ(rec.hit_times[0], std::optional<Time>(1));
    EXPECT_EQ(rec.hit_times[1], std::optional<Time>(4));
    EXPECT_EQ(rec.hit_times[2], std::optional<Time>(100));
}

TEST(Tracker, MatchesBruteForceReplay)
{
    const std::vector<BlockSpec> blocks{{2, 3, {3, 5, 20, 60}}, {1, 5, {10, 40, 100000}}, {7, 2, {2, 8}}};
    constexpr Time kSteps = 3000;
    const auto rec = track_blocks(0.4, 17, kSteps, blocks);

    GlpGraph g(0.4, 17);
    Rng rng(17);
    std::vector<std::vector<std::optional<Time>>> expected;
    for (const auto& b : blocks) {
        expected.emplace_back(b.thresholds.size());
    }
    auto scan = [&] {
        const auto deg = g.degrees();
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            Degree sum = 0;
            for (VertexId v = blocks[bi].first(); v <= blocks[bi].last() && v <= deg.size(); ++v) {
                sum += deg[v - 1];
            }
            for (std::size_t k = 0; k < blocks[bi].thresholds.size(); ++k) {
                if (!expected[bi][k] && sum >= blocks[bi].thresholds[k]) {
                    expected[bi][k] = g.t();
                }
            }
        }
    };
    scan();
    while (g.t() < kSteps) {
        step(g, rng);
        scan();
    }
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        EXPECT_EQ(rec[bi].hit_times, expected[bi]) << "block " << bi;
        EXPECT_EQ(rec[bi].run_end, kSteps);
    }
    EXPECT_FALSE(rec[1].hit_times[2].has_value());
}

TEST(Tracker, DuplicateBlocksRejected)
{
    EXPECT_THROW(BlockTracker({{2, 3, {4}}, {2, 3, {5}}}), ConfigError);
}

TEST(Tracker, BlockDegreeOfUnbornBlockIsZero)
{
    const GlpGraph g(0.5);
    EXPECT_EQ(block_degree(g, {5, 2, {}}), 0u);
    EXPECT_EQ(block_degree(g, {1, 3, {}}), 2u);
}

TEST(Arrival, MomentsMatchNegativeBinomial)
{
    const std::uint32_t j = 5;
    const std::uint32_t m = 3;
    const double p = 0.4;
    Rng rng(8);
    constexpr int kDraws = 100000;
    double s1 = 0;
    double s2 = 0;
    for (int i = 0; i < kDraws; ++i) {
        const auto x = static_cast<double>(sample_arrival(j, m, p, rng));
        s1 += x;
        s2 += x * x;
    }
    const double n = j * m - 1.0;
    const double mean = 1.0 + n / p;
    const double var = n * (1.0 - p) / (p * p);
    EXPECT_DOUBLE_EQ(arrival_mean(j, m, p), mean);
    EXPECT_DOUBLE_EQ(arrival_second_moment(j, m, p), var + mean * mean);
    EXPECT_NEAR(s1 / kDraws, mean, 4 * std::sqrt(var / kDraws));
    EXPECT_NEAR(s2 / kDraws / (var + mean * mean), 1.0, 0.01);

    EXPECT_EQ(sample_arrival(1, 1, p, rng), 1u);
    EXPECT_EQ(sample_arrival(4, 2, 1.0, rng), 8u);
    EXPECT_THROW(sample_arrival(2, 2, 0.0, rng), ParameterError);
}

TEST(Dominating, ReducesToArrivalWhenKEqualsM)
{
    DominatingLawParams law{0.5, 4, 300, 4, 0.3};
    Rng a(21);
    Rng b(21);
    for (int i = 0; i < 100; ++i) {
        EXPECT_DOUBLE_EQ(sample_dominating(law, a), static_cast<double>(sample_arrival(300, 4, 0.5, b)));
    }
}

TEST(Dominating, LogFactorMean)
{
    // p = 1: arrival is deterministic (jm), so log(X / jm) is the eta sum.
    DominatingLawParams law{1.0, 2, 5, 6, 0.5};
    double expected = 0;
    for (Degree i = 2; i < 6; ++i) {
        const double delta = 0.0;
        expected += 1.0 / (0.5 * (1.0 - delta) * static_cast<double>(i));
    }
    Rng rng(5);
    constexpr int kDraws = 200000;
    double sum = 0;
    for (int i = 0; i < kDraws; ++i) {
        sum += std::log(sample_dominating(law, rng) / 10.0);
    }
    EXPECT_NEAR(sum / kDraws, expected, 0.01);
}

TEST(Dominating, RateAndGammaRange)
{
    DominatingLawParams law{0.5, 4, 300, 16, 0.2};
    EXPECT_NEAR(law.delta(4), 0.5 / (2 * 1.5 * std::pow(4.0, 0.2)), 1e-15);
    EXPECT_NEAR(law.rate(4), 0.75 * (1 - law.delta(4)) * 4, 1e-12);
    EXPECT_GT(DominatingLawParams::default_gamma(0.5), 0.0);
    EXPECT_LT(DominatingLawParams::default_gamma(0.5), 1.0 / 0.75 - 1.0);
    law.gamma = 0.4;  // upper limit is 1/3
    EXPECT_THROW(law.validate(), ParameterError);
    law.gamma = 0.2;
    law.k = 3;
    EXPECT_THROW(law.validate(), ParameterError);
}

TEST(Domination, PreconditionEnforced)
{
    // m = 4, p = 0.5: j must be >= 4^4 + 1 = 257.
    EXPECT_DOUBLE_EQ(min_block_index(4, 0.5), 257.0);
    EXPECT_THROW(check_domination_hypothesis({0.5, 4, 256, 16, 0.3}), PreconditionError);
    EXPECT_NO_THROW(check_domination_hypothesis({0.5, 4, 257, 16, 0.3}));
    const std::vector<std::optional<Time>> emp{Time{1}};
    const std::vector<double> dom{1.0};
    const std::vector<Time> grid{1};
    EXPECT_THROW(domination_test({0.5, 4, 10, 16, 0.3}, emp, dom, grid), PreconditionError);
}

TEST(Domination, VacuousWhenNothingSurvives)
{
    const std::vector<std::optional<Time>> emp(50, Time{5});
    const std::vector<double> dom(50, 2.0);
    const std::vector<Time> grid{10, 20};
    const auto rep = domination_test({0.5, 4, 300, 16, 0.3}, emp, dom, grid);
    EXPECT_TRUE(rep.holds);
    for (const auto& pt : rep.points) {
        EXPECT_EQ(pt.empirical, 0.0);
    }
}

TEST(Domination, DetectsViolation)
{
    const std::vector<std::optional<Time>> emp(1000, std::nullopt);
    const std::vector<double> dom(1000, 1.0);
    const std::vector<Time> grid{10};
    EXPECT_FALSE(domination_test({0.5, 4, 300, 16, 0.3}, emp, dom, grid).holds);
}

TEST(Survival, CensoredCountsAsAbove)
{
    const std::vector<std::optional<Time>> s{Time{1}, Time{5}, std::nullopt, Time{10}};
    const std::vector<Time> grid{0, 4, 9, 10};
    const auto c = survival_curve(s, grid);
    EXPECT_DOUBLE_EQ(c[0].survival, 1.0);
    EXPECT_DOUBLE_EQ(c[1].survival, 0.75);
    EXPECT_DOUBLE_EQ(c[2].survival, 0.5);
    EXPECT_DOUBLE_EQ(c[3].survival, 0.25);
    EXPECT_NEAR(c[1].std_error, std::sqrt(0.75 * 0.25 / 4), 1e-15);
}

TEST(HittingTimes, MonotoneInThreshold)
{
    const std::vector<BlockSpec> blocks{{3, 2, {4, 6, 8, 12, 16, 24}}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto rec = track_blocks(0.5, seed, 20000, blocks).front();
        for (std::size_t i = 1; i < rec.hit_times.size(); ++i) {
            if (rec.hit_times[i]) {
                ASSERT_TRUE(rec.hit_times[i - 1].has_value());
                EXPECT_LE(*rec.hit_times[i - 1], *rec.hit_times[i]);
            }
        }
    }
}

TEST(LowerTail, DecreasesOverTime)
{
    const std::vector<Time> times{1000, 10000, 100000};
    const auto curve = lower_tail_curve(0.5, 4, 2, 0.55, times, 60, 3);
    ASSERT_EQ(curve.size(), 3u);
    EXPECT_EQ(curve[0].threshold, static_cast<Degree>(std::ceil(std::pow(1000.0, 0.55))));
    for (std::size_t i = 1; i < curve.size(); ++i) {
        EXPECT_LE(curve[i].probability, curve[i - 1].probability + 3 * curve[i - 1].std_error + 1e-12);
    }
}

}  // namespace
}  // namespace glp
