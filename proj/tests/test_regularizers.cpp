#include "aquasi/error.hpp"
#include "aquasi/regularizers.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace aquasi;

namespace {

constexpr double kH = 1e-6;
constexpr double kEps = 1e-4;

// Relative error between the analytic directional derivative and a central difference.
double directional_error(const std::function<double(const Image&)>& energy, const Image& grad, const Image& f,
                         const Image& d) {
    Image fp = f;
    Image fm = f;
    axpy(kH, d, fp);
    axpy(-kH, d, fm);
    const double numeric = (energy(fp) - energy(fm)) / (2.0 * kH);
    const double analytic = dot(grad, d);
    return std::abs(numeric - analytic) / std::max(std::abs(analytic), 1e-12);
}

SelectionOperator median_selection(const Image& f) {
    QuantileConfig cfg;
    cfg.guidance = GuidanceMode::Uniform;
    cfg.radius = 1;
    return build_selection(f, cfg);
}

}  // namespace

TEST(SmoothedSign, Values) {
    EXPECT_EQ(smoothed_sign(0.0, 1e-4), 0.0);
    EXPECT_DOUBLE_EQ(smoothed_sign(1.0, 1e-6), 1.0 / std::sqrt(1.0 + 1e-6));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 100; ++k) {
        const double x = u(rng);
        EXPECT_EQ(smoothed_sign(-x, 1e-3), -smoothed_sign(x, 1e-3));
        EXPECT_LT(std::abs(smoothed_sign(x, 1e-3)), 1.0);
    }
    // slope at the origin is 1/sqrt(eps)
    EXPECT_NEAR(smoothed_sign(1e-9, 1e-4) / 1e-9, 100.0, 1e-6);
}

TEST(Shrink, SoftThreshold) {
    EXPECT_EQ(shrink(0.1, 0.2), 0.0);
    EXPECT_EQ(shrink(-0.2, 0.2), 0.0);
    EXPECT_NEAR(shrink(0.7, 0.2), 0.5, 1e-15);
    EXPECT_NEAR(shrink(-0.7, 0.2), -0.5, 1e-15);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const double a = u(rng);
        const double b = u(rng);
        EXPECT_EQ(shrink(-a, 0.3), -shrink(a, 0.3));
        EXPECT_LE(std::abs(shrink(a, 0.3) - shrink(b, 0.3)), std::abs(a - b) + 1e-15);
    }
}

TEST(Shrink, ImageVersionIsElementwise) {
    const Image u = support::random_image(4, 3, 3, -1, 1);
    const Image s = shrink(u, 0.25);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(s[i], shrink(u[i], 0.25));
}

TEST(AquasiValue, ZeroCases) {
    const Image c(6, 6, 0.4);
    EXPECT_EQ(aquasi_value(c, median_selection(c)), 0.0);
    const Image f = support::random_image(6, 6, 4);
    EXPECT_EQ(aquasi_value(f, SelectionOperator::identity(6, 6)), 0.0);
    EXPECT_EQ(norm_inf(aquasi_gradient(f, SelectionOperator::identity(6, 6), kEps)), 0.0);
    EXPECT_EQ(norm_inf(aquasi_gradient(c, median_selection(c), kEps)), 0.0);
}

TEST(AquasiValue, SumOfDistancesToWindowMedian) {
    const Image f = support::random_image(6, 6, 5);
    const Image med = support::quantile_filter_reference(f, 1, 0.5);
    double expected = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) expected += std::abs(f[i] - med[i]);
    EXPECT_NEAR(aquasi_value(f, median_selection(f)), expected, 1e-12);
}

TEST(AquasiValue, NonNegativeAndZeroOnlyAtFixedPoints) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Image f = support::random_image(5, 5, 10 + seed);
        const SelectionOperator q = support::random_selection(5, 5, 1, seed);
        const double v = aquasi_value(f, q);
        EXPECT_GE(v, 0.0);
        EXPECT_EQ(v == 0.0, apply_selection(q, f) == f);
    }
}

TEST(SmoothedL1, BracketsTheL1Norm) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Image f = support::random_image(6, 6, 30 + seed);
        const SelectionOperator q = support::random_selection(6, 6, 1, 60 + seed);
        const double l1 = aquasi_value(f, q);
        const double smooth_shifted = aquasi_smoothed_value(f, q, kEps);  // sum sqrt(r^2+eps) - N sqrt(eps)
        const double smooth = smooth_shifted + static_cast<double>(f.size()) * std::sqrt(kEps);
        EXPECT_LE(smooth_shifted, l1 + 1e-12);
        EXPECT_LE(l1, smooth + 1e-12);
    }
}

TEST(AquasiGradient, FiniteDifferences) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const Image f = support::random_image(8, 8, 100 + trial);
        const SelectionOperator q = median_selection(f);
        const Image grad = aquasi_gradient(f, q, kEps);
        const Image d = support::random_image(8, 8, 200 + trial, -1, 1);
        const auto energy = [&](const Image& x) { return aquasi_smoothed_value(x, q, kEps); };
        EXPECT_LT(directional_error(energy, grad, f, d), 1e-4);
    }
}

TEST(TotalVariation, ValueExamples) {
    EXPECT_EQ(tv_value(Image(7, 5, 0.3)), 0.0);
    Image step(8, 5, 0.0);
    for (std::size_t y = 0; y < 5; ++y) {
        for (std::size_t x = 4; x < 8; ++x) step.at(x, y) = 1.0;
    }
    EXPECT_EQ(tv_value(step), 5.0);
}

TEST(TotalVariation, DifferenceAdjoints) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Image x = support::random_image(9, 7, 300 + seed, -1, 1);
        const Image y = support::random_image(9, 7, 400 + seed, -1, 1);
        EXPECT_NEAR(dot(diff_x(x), y), dot(x, diff_x_transpose(y)), 1e-12);
        EXPECT_NEAR(dot(diff_y(x), y), dot(x, diff_y_transpose(y)), 1e-12);
    }
}

TEST(TotalVariation, FiniteDifferences) {
    for (int trial = 0; trial < 20; ++trial) {
        const Image f = support::random_image(8, 8, 500 + trial);
        const Image grad = tv_gradient(f, kEps);
        const Image d = support::random_image(8, 8, 600 + trial, -1, 1);
        const auto energy = [&](const Image& x) { return tv_smoothed_value(x, kEps); };
        EXPECT_LT(directional_error(energy, grad, f, d), 1e-4);
    }
}

TEST(Red, ZeroCases) {
    const Image c(5, 5, 0.8);
    EXPECT_NEAR(red_value(c, support::random_selection(5, 5, 1, 1)), 0.0, 1e-15);
    const Image f = support::random_image(5, 5, 7);
    EXPECT_EQ(red_value(f, SelectionOperator::identity(5, 5)), 0.0);
    EXPECT_EQ(norm_inf(red_gradient(f, SelectionOperator::identity(5, 5))), 0.0);
}

TEST(Red, ValueMatchesDirectSum) {
    const Image f = support::random_image(7, 6, 8);
    const SelectionOperator q = support::random_selection(7, 6, 2, 9);
    double expected = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) expected += f[i] * (f[i] - f[q.source(i)]);
    EXPECT_NEAR(red_value(f, q), expected, 1e-12);
}

TEST(Red, FiniteDifferences) {
    for (int trial = 0; trial < 20; ++trial) {
        const Image f = support::random_image(8, 8, 700 + trial);
        const SelectionOperator q = median_selection(f);
        const Image grad = red_gradient(f, q);
        const Image d = support::random_image(8, 8, 800 + trial, -1, 1);
        const auto energy = [&](const Image& x) { return red_value(x, q); };
        EXPECT_LT(directional_error(energy, grad, f, d), 1e-4);
    }
}

TEST(RegWeights, Validation) {
    RegWeights w;
    EXPECT_NO_THROW(w.validate());
    w.lambda = -1.0;
    EXPECT_THROW(w.validate(), Error);
    w = {};
    w.epsilon = 0.0;
    EXPECT_THROW(w.validate(), Error);
    w = {};
    w.mu = std::nan("");
    EXPECT_THROW(w.validate(), Error);
}
