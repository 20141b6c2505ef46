#include <gtest/gtest.h>

#include <cmath>

#include "jurylab/experiment.hpp"

using namespace jurylab;

namespace {

ExperimentConfig unit_config(MeasureSpec m, std::vector<std::size_t> grid, std::size_t profiles, std::uint64_t seed = 0) {
    ExperimentConfig c;
    c.measure = std::move(m);
    c.n_grid = std::move(grid);
    c.profiles_per_n = profiles;
    c.seed = seed;
    return c;
}

MeasureSpec falling() { return linear_density(2.0, -2.0, "2(1-x)"); }

}  // namespace

TEST(Experiment, CenteredMeasureIsNullLike) {
    const auto r = run(unit_config(lebesgue(), {101, 1001, 10001}, 200));
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_LE(r.rows.back().high_fraction, 0.02);
    EXPECT_GE(r.rows.back().median_win, 0.40);
    EXPECT_LE(r.rows.back().median_win, 0.60);
    EXPECT_EQ(classify_trend(r), Trend::null_like);
    EXPECT_EQ(r.label, "desk-scale evidence");
}

TEST(Experiment, PositiveBiasIsCjpLike) {
    const auto r = run(unit_config(affine_measure(1.0), {101, 1001, 10001}, 100));
    EXPECT_GE(r.rows.back().high_fraction, 0.99);
    EXPECT_EQ(classify_trend(r), Trend::cjp_like);
}

TEST(Experiment, NegativeBiasIsAntiCjpLike) {
    const auto r = run(unit_config(affine_measure(-1.0), {101, 1001, 10001}, 100));
    EXPECT_GE(r.rows.back().low_fraction, 0.99);
    EXPECT_EQ(classify_trend(r), Trend::anti_cjp_like);
}

TEST(Experiment, RowsAlignWithGridAndFractionsAreProbabilities) {
    const auto r = run(unit_config(affine_measure(0.4), {11, 51, 201, 401}, 30, 5));
    ASSERT_EQ(r.rows.size(), 4u);
    ASSERT_EQ(r.win_probabilities.size(), 4u);
    const std::vector<std::size_t> grid{11, 51, 201, 401};
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        EXPECT_EQ(row.n, grid[i]);
        EXPECT_EQ(r.win_probabilities[i].size(), 30u);
        EXPECT_GE(row.high_fraction, 0.0);
        EXPECT_LE(row.high_fraction + row.low_fraction, 1.0);
        EXPECT_EQ(row.method, TallyMethod::exact_dp);
    }
}

TEST(Experiment, ReflectionSwapsHighAndLow) {
    const std::vector<std::size_t> grid{101, 301, 1001};
    const auto a = run(unit_config(affine_measure(0.6), grid, 100, 11));
    const auto b = run(unit_config(reflect(affine_measure(0.6)), grid, 100, 12));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(a.rows[i].high_fraction, b.rows[i].low_fraction, 0.15) << grid[i];
        EXPECT_NEAR(a.rows[i].low_fraction, b.rows[i].high_fraction, 0.15) << grid[i];
        EXPECT_NEAR(a.rows[i].median_win, 1.0 - b.rows[i].median_win, 0.15) << grid[i];
    }
}

TEST(Experiment, BitIdenticalAcrossWorkerCounts) {
    auto c = unit_config(falling(), {11, 21, 41}, 12, 99);
    c.scheme = scheme::Stochastic{20.0, 2, 19.0 / 50.0};
    c.tally_mode = TallyMode::mc;
    c.replicas = 500;
    c.threads = 1;
    const auto one = run(c);
    c.threads = 4;
    const auto four = run(c);
    EXPECT_EQ(one.win_probabilities, four.win_probabilities);
    EXPECT_EQ(report_csv(one), report_csv(four));
    EXPECT_EQ(one.config_hash, four.config_hash);
}

TEST(Experiment, BruteRequestAboveLimitIsRerouted) {
    auto c = unit_config(lebesgue(), {11, 31}, 10);
    c.scheme = scheme::BoundedPoly{5.0, 1};
    c.tally_mode = TallyMode::brute;
    c.replicas = 200;
    const auto r = run(c);
    EXPECT_EQ(r.rows[0].method, TallyMethod::brute_force);
    EXPECT_EQ(r.rows[1].method, TallyMethod::monte_carlo);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_NE(r.warnings[0].find("monte carlo"), std::string::npos);
}

TEST(Experiment, StochasticDriftEstimateMatchesClosedForm) {
    const scheme::Stochastic s{100.0, 2, 99.0 / 50.0};
    auto c = unit_config(falling(), {10001}, 20, 3);
    c.scheme = s;
    c.tally_mode = TallyMode::mc;
    c.replicas = 100;
    const double closed = drift(falling(), s);
    const double estimate = run(c).rows[0].drift_estimate;
    EXPECT_NEAR(estimate, closed, 0.05 * closed);
}

TEST(Experiment, UnitDriftIsMeanBias) {
    const auto r = run(unit_config(affine_measure(1.0), {20001}, 10, 4));
    // 2 m_1 - 1 = b0 / 6 for the affine family
    EXPECT_NEAR(r.rows[0].drift_estimate, 1.0 / 6.0, 0.01);
    ASSERT_TRUE(r.rows[0].mean_q.has_value());
}

TEST(ExperimentConfig, JsonRoundTripPreservesHash) {
    auto c = unit_config(falling(), {11, 101}, 25, 17);
    c.scheme = scheme::Stochastic{50.0, 2, 1.0, NoiseBounds::proportional};
    c.tally_mode = TallyMode::mc;
    c.replicas = 777;
    c.high = 0.95;
    const auto back = experiment_from_json(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
    EXPECT_EQ(config_hash(back), config_hash(c));
    auto other = c;
    other.seed = 18;
    EXPECT_NE(config_hash(other), config_hash(c));
    other = c;
    other.threads = 8;
    EXPECT_EQ(config_hash(other), config_hash(c));
}

TEST(ExperimentConfig, Validation) {
    EXPECT_THROW(validate(unit_config(lebesgue(), {10, 11}, 10)), ValidationError);
    EXPECT_THROW(validate(unit_config(lebesgue(), {101, 11}, 10)), ValidationError);
    EXPECT_THROW(validate(unit_config(lebesgue(), {11}, 9)), ValidationError);
    EXPECT_THROW(validate(unit_config(lebesgue(), {}, 10)), ValidationError);
    auto c = unit_config(lebesgue(), {11}, 10);
    c.low = 0.995;
    EXPECT_THROW(validate(c), ValidationError);
    auto doc = to_json(unit_config(lebesgue(), {11}, 10));
    doc["bogus"] = 1;
    EXPECT_THROW(experiment_from_json(doc), ValidationError);
}

TEST(ExperimentReport, CsvAndJsonCarryProvenance) {
    const auto r = run(unit_config(lebesgue(), {11, 21, 31}, 10, 8));
    const auto csv = report_csv(r);
    EXPECT_EQ(csv.rfind("# seed=8 config_hash=", 0), 0u);
    EXPECT_NE(csv.find("\nn,high_fraction,low_fraction,median_win,mean_q,drift_estimate,method,max_half_width\n"),
              std::string::npos);
    const auto doc = report_json(r);
    EXPECT_EQ(doc["rows"].size(), 3u);
    EXPECT_EQ(doc["seed"], 8);
    EXPECT_EQ(doc["label"], "desk-scale evidence");
    EXPECT_NE(report_svg(r, "demo").find("<polyline"), std::string::npos);
}

TEST(ClassifyTrend, NeedsThreeRows) {
    const auto r = run(unit_config(lebesgue(), {11, 21}, 10));
    EXPECT_THROW(classify_trend(r), ValidationError);
}
