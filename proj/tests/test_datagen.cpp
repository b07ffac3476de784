#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kcca/datagen.hpp"

using namespace kcca;

TEST(Sim1Curve, ThetaZero) {
    const auto [x, y] = sim1_curve(0.0);
    EXPECT_EQ(x(0), 0.0);
    EXPECT_EQ(x(1), 0.0);
    EXPECT_EQ(y(0), 1.0);
    EXPECT_EQ(y(1), 0.0);
}

TEST(Sim1Curve, ThetaHalfPi) {
    const auto [x, y] = sim1_curve(std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(x(0), std::numbers::pi / 2);
    EXPECT_NEAR(x(1), -1.0, 1e-15);
    EXPECT_DOUBLE_EQ(y(0), -std::exp(std::numbers::pi / 8));
    EXPECT_NEAR(y(0), -1.4809727, 1e-7);
    EXPECT_NEAR(y(1), 0.0, 1e-15);
}

TEST(GenSim1, DefaultRowCounts) {
    const Sim1Data d = gen_sim1(SimSpec::sim1_default(7));
    EXPECT_EQ(d.train.size(), 40);
    EXPECT_EQ(d.test.size(), 100);
    EXPECT_EQ(d.train.x.cols(), 2);
    EXPECT_EQ(d.train.y.cols(), 2);
    EXPECT_EQ(d.train_theta.size(), 40);
    EXPECT_EQ(d.test_theta.size(), 100);
}

TEST(GenSim1, NoiseFreeSamplesLieOnCurve) {
    SimSpec s = SimSpec::sim1_default(3);
    s.noise_std = 0.0;
    const Sim1Data d = gen_sim1(s);
    for (Eigen::Index i = 0; i < d.train.size(); ++i) {
        const double t = d.train_theta(i);
        EXPECT_GE(t, -std::numbers::pi);
        EXPECT_LE(t, std::numbers::pi);
        const auto [x, y] = sim1_curve(t);
        EXPECT_EQ(d.train.x.row(i).transpose(), x);
        EXPECT_EQ(d.train.y.row(i).transpose(), y);
    }
}

TEST(GenSim1, DeterministicGivenSeed) {
    const Sim1Data a = gen_sim1(SimSpec::sim1_default(42));
    const Sim1Data b = gen_sim1(SimSpec::sim1_default(42));
    EXPECT_EQ(a.train.x, b.train.x);
    EXPECT_EQ(a.train.y, b.train.y);
    EXPECT_EQ(a.test.x, b.test.x);
    EXPECT_EQ(a.test.y, b.test.y);
    const Sim1Data c = gen_sim1(SimSpec::sim1_default(43));
    EXPECT_NE(a.train.x, c.train.x);
}

TEST(GenSim1, TestSizeDoesNotChangeTrainDraw) {
    SimSpec s = SimSpec::sim1_default(9);
    const Sim1Data a = gen_sim1(s);
    s.n_test = 7;
    const Sim1Data b = gen_sim1(s);
    EXPECT_EQ(a.train.x, b.train.x);
    EXPECT_EQ(a.train.y, b.train.y);
    EXPECT_EQ(a.test.x.topRows(7), b.test.x);
}

TEST(GenSim1, StatisticalSanity) {
    // A single seed's theta mean has standard error pi/sqrt(3000) ~ 0.057, so
    // the +-0.1 bound applies to the mean over the ten seeds.
    double theta_mean = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SimSpec s = SimSpec::sim1_default(seed);
        s.n_train = 1000;
        const Sim1Data d = gen_sim1(s);
        theta_mean += d.train_theta.mean() / 10.0;
        EXPECT_GE(d.train.x.col(0).minCoeff(), -std::numbers::pi - 0.3);
        EXPECT_LE(d.train.x.col(0).maxCoeff(), std::numbers::pi + 0.3);
        // Residuals off the curve carry the noise; their spread should be near 0.05.
        double ss = 0.0;
        for (Eigen::Index i = 0; i < d.train.size(); ++i)
            ss += (d.train.x.row(i).transpose() - sim1_curve(d.train_theta(i)).first).squaredNorm();
        EXPECT_NEAR(std::sqrt(ss / (2.0 * 1000)), 0.05, 0.005);
    }
    EXPECT_NEAR(theta_mean, 0.0, 0.1);
}

TEST(GenSim1, RejectsWrongScenarioAndCounts) {
    EXPECT_THROW(gen_sim1(SimSpec::sim2_default(1)), InputError);
    SimSpec s = SimSpec::sim1_default(1);
    s.n_train = 0;
    EXPECT_THROW(gen_sim1(s), InputError);
    s = SimSpec::sim1_default(1);
    s.noise_std = -0.1;
    EXPECT_THROW(gen_sim1(s), InputError);
}

TEST(GenSim2, DefaultShapeAndSupport) {
    const Sim2Data d = gen_sim2(SimSpec::sim2_default(5));
    EXPECT_EQ(d.train.size(), 10);
    EXPECT_EQ(d.test.size(), 100);
    EXPECT_GE(d.train.x.minCoeff(), 0.0);
    EXPECT_LE(d.train.x.maxCoeff(), 1.0);
    EXPECT_GE(d.train.y.minCoeff(), 0.0);
    EXPECT_LE(d.train.y.maxCoeff(), 1.0);
    ASSERT_TRUE(d.test.labels.has_value());
    for (int lab : *d.test.labels) {
        EXPECT_GE(lab, 0);
        EXPECT_LT(lab, 10);
    }
}

TEST(GenSim2, NoiseFreeTestRowsEqualCenters) {
    SimSpec s = SimSpec::sim2_default(11);
    s.noise_std = 0.0;
    const Sim2Data d = gen_sim2(s);
    for (Eigen::Index i = 0; i < d.test.size(); ++i) {
        const auto c = static_cast<Eigen::Index>((*d.test.labels)[static_cast<std::size_t>(i)]);
        EXPECT_EQ(d.test.x.row(i), d.train.x.row(c));
        EXPECT_EQ(d.test.y.row(i), d.train.y.row(c));
    }
}

TEST(GenSim2, DeterministicAndSplitIndependent) {
    SimSpec s = SimSpec::sim2_default(8);
    const Sim2Data a = gen_sim2(s);
    const Sim2Data b = gen_sim2(s);
    EXPECT_EQ(a.test.x, b.test.x);
    EXPECT_EQ(*a.test.labels, *b.test.labels);
    s.n_test = 3;
    const Sim2Data c = gen_sim2(s);
    EXPECT_EQ(a.train.x, c.train.x);
    EXPECT_EQ(a.train.y, c.train.y);
}

TEST(RngTest, UniformIndexCoversRange) {
    Rng r(1, 1);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 7000; ++i) ++counts[r.uniform_index(7)];
    for (int c : counts) EXPECT_NEAR(c, 1000, 150);
    EXPECT_THROW(r.uniform_index(0), InputError);
}

TEST(RngTest, NormalMoments) {
    Rng r(2, 1);
    double s = 0.0, ss = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        ss += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(ss / n, 1.0, 0.02);
}

TEST(RngTest, StreamsDiffer) {
    Rng a(5, 1), b(5, 2);
    EXPECT_NE(a.uniform01(), b.uniform01());
}

TEST(IncreasingRank, OneBased) {
    Vector v(4);
    v << 0.3, -1.0, 2.0, 0.0;
    const std::vector<int> r = increasing_rank(v);
    EXPECT_EQ(r, (std::vector<int>{3, 1, 4, 2}));
}
