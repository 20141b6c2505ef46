#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "jurylab/measure.hpp"
#include "random_measures.hpp"

using namespace jurylab;

namespace {

MeasureSpec coin() { return atomic({{0.0, 0.5}, {1.0, 0.5}}, "coin"); }

}  // namespace

TEST(Moment, LebesgueFirstMomentIsHalf) { EXPECT_NEAR(moment(lebesgue(), 1), 0.5, 1e-15); }

TEST(Moment, LebesgueMomentsAreReciprocals) {
    for (int i = 1; i <= 12; ++i) EXPECT_NEAR(moment(lebesgue(), i), 1.0 / (i + 1), 1e-15) << "i=" << i;
}

TEST(Moment, AffineB0TwoHasBiasOneSixth) {
    const auto m = affine_measure(2.0);
    EXPECT_NEAR(moment(m, 1), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(bias(m), 2.0 / 12.0, 1e-15);
}

TEST(Moment, AffineBiasIsB0OverTwelve) {
    for (double b0 : {-2.0, -1.0, -0.3, 0.0, 0.7, 1.0, 2.0}) EXPECT_NEAR(bias(affine_measure(b0)), b0 / 12.0, 1e-15);
}

TEST(Moment, CoinMomentsAllHalf) {
    for (int i = 1; i <= 8; ++i) EXPECT_DOUBLE_EQ(moment(coin(), i), 0.5);
}

TEST(Moment, RejectsOrderZero) { EXPECT_THROW(moment(lebesgue(), 0), ValidationError); }

TEST(IntervalMass, LebesgueTopDecile) { EXPECT_NEAR(interval_mass(lebesgue(), 0.9, 1.0), 0.1, 1e-15); }

TEST(IntervalMass, AtomReadout) {
    EXPECT_DOUBLE_EQ(interval_mass(coin(), 1.0, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(atom_mass(coin(), 1.0), 0.5);
    EXPECT_DOUBLE_EQ(atom_mass(lebesgue(), 1.0), 0.0);
}

TEST(IntervalMass, AffineUpperHalf) { EXPECT_NEAR(interval_mass(affine_measure(2.0), 0.5, 1.0), 0.75, 1e-15); }

TEST(IntervalMass, RejectsReversedInterval) { EXPECT_THROW(interval_mass(lebesgue(), 0.6, 0.4), ValidationError); }

TEST(Sample, DiracAlwaysReturnsLocation) {
    auto rng = substream(7, 0);
    const auto d = dirac(0.5);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(sample(d, rng), 0.5);
}

TEST(Sample, LebesgueMean) {
    auto rng = substream(11, 0);
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += sample(lebesgue(), rng);
    EXPECT_NEAR(s / n, 0.5, 0.01);
}

TEST(Sample, AffineMean) {
    auto rng = substream(12, 0);
    const auto m = affine_measure(2.0);
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += sample(m, rng);
    EXPECT_NEAR(s / n, 2.0 / 3.0, 0.01);
}

TEST(Sample, DeterministicGivenSeed) {
    auto a = substream(99, 3), b = substream(99, 3);
    const auto m = affine_measure(-1.3);
    for (int i = 0; i < 100; ++i) ASSERT_EQ(sample(m, a), sample(m, b));
}

TEST(Sample, KolmogorovSmirnovAgainstAnalyticCdf) {
    auto spec_rng = substream(5, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = test_support::random_measure(spec_rng, false);
        auto rng = substream(77, trial);
        std::vector<double> xs(100000);
        for (auto& x : xs) x = sample(m, rng);
        std::sort(xs.begin(), xs.end());
        double ks = 0.0;
        const double n = double(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double f = cdf(m, xs[i]);
            ks = std::max({ks, std::abs(f - double(i) / n), std::abs(f - double(i + 1) / n)});
        }
        EXPECT_LT(ks, 0.01) << "trial " << trial;
    }
}

TEST(Sample, AtomFrequencies) {
    const MeasureSpec m({{0.0, 1.0, 0.5, 0.0}}, {{1.0, 0.5}}, "half-atom");
    auto rng = substream(3, 3);
    int ones = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ones += sample(m, rng) == 1.0 ? 1 : 0;
    EXPECT_NEAR(ones / double(n), 0.5, 0.01);
}

TEST(MomentProperty, NonIncreasingInOrder) {
    auto rng = substream(21, 0);
    for (int t = 0; t < 200; ++t) {
        const auto m = test_support::random_measure(rng);
        for (int i = 1; i < 15; ++i) ASSERT_LE(moment(m, i + 1), moment(m, i) + 1e-15);
    }
}

TEST(MomentProperty, HolderChain) {
    auto rng = substream(22, 0);
    for (int t = 0; t < 200; ++t) {
        const auto m = test_support::random_measure(rng);
        for (int k = 1; k <= 10; ++k)
            ASSERT_GE(std::pow(moment(m, k + 1), 1.0 / (k + 1)), std::pow(moment(m, k), 1.0 / k) - 1e-12)
                << "k=" << k;
    }
}

TEST(Construction, RejectsBadMass) {
    EXPECT_THROW(MeasureSpec({{0.0, 1.0, 1.1, 0.0}}, {}), ValidationError);
    EXPECT_THROW(MeasureSpec({}, {{0.5, 0.9}}), ValidationError);
}

TEST(Construction, RejectsNegativeDensity) {
    EXPECT_THROW(MeasureSpec({{0.0, 1.0, 1.0 + 1.5, -3.0}}, {}), ValidationError);
}

TEST(Construction, RejectsOverlapsAndDuplicates) {
    EXPECT_THROW(MeasureSpec({{0.0, 0.6, 1.0, 0.0}, {0.5, 0.9, 1.0, 0.0}}, {}), ValidationError);
    EXPECT_THROW(MeasureSpec({}, {{0.5, 0.5}, {0.5, 0.5}}), ValidationError);
    EXPECT_THROW(MeasureSpec({}, {{1.5, 1.0}}), ValidationError);
}

TEST(Construction, AffineRangeEnforced) {
    EXPECT_THROW(affine_measure(2.5), ValidationError);
    EXPECT_NO_THROW(affine_measure(-2.0));
}

TEST(Reflect, SwapsMomentAround) {
    const auto m = affine_measure(1.4);
    const auto r = reflect(m);
    EXPECT_NEAR(moment(r, 1), 1.0 - moment(m, 1), 1e-15);
    EXPECT_NEAR(interval_mass(r, 0.0, 0.3), interval_mass(m, 0.7, 1.0), 1e-15);
}

TEST(Serialization, RoundTripsBitExact) {
    const std::string doc = R"({"label":"d","pieces":[[0.0,0.5,1.2,0.0]],"atoms":[[0.75,0.123456789012],[1.0,0.276543210988]]})";
    const auto a = measure_from_string(doc);
    const auto b = measure_from_json(to_json(a));
    EXPECT_TRUE(a == b);
    EXPECT_EQ(b.atoms()[0].mass, 0.123456789012);
}

TEST(Serialization, RejectsUnknownKeysAndGarbage) {
    EXPECT_THROW(measure_from_string(R"({"pieces":[[0,1,1,0]],"atoms":[],"colour":"red"})"), ValidationError);
    EXPECT_THROW(measure_from_string("not json"), ValidationError);
}

TEST(NamedMeasure, Shorthands) {
    EXPECT_TRUE(named_measure("lebesgue").has_value());
    EXPECT_NEAR(moment(*named_measure("affine:2"), 1), 2.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(moment(*named_measure("coin"), 3), 0.5);
    EXPECT_FALSE(named_measure("nonsense").has_value());
    EXPECT_THROW(named_measure("affine:x"), ValidationError);
}
