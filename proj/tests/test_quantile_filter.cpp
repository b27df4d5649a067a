#include "aquasi/error.hpp"
#include "aquasi/quantile_filter.hpp"
#include "aquasi/synthetic.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace aquasi;

TEST(GuidanceWeight, KernelValues) {
    EXPECT_EQ(guidance_weight(0.5, 0.5, 0.01), 1.0);
    EXPECT_EQ(guidance_weight(0.5, 0.5, 7.0), 1.0);
    // 0.1 squared is not exact in binary, so allow a few parts in 1e13
    EXPECT_NEAR(guidance_weight(0.0, 1.0, 0.1), std::exp(-50.0), 1e-12 * std::exp(-50.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double a = u(rng);
        const double b = u(rng);
        EXPECT_EQ(guidance_weight(a, b, 0.2), guidance_weight(b, a, 0.2));
        EXPECT_GT(guidance_weight(a, b, 0.2), 0.0);
        EXPECT_LE(guidance_weight(a, b, 0.2), 1.0);
    }
}

TEST(WeightedQuantile, ClassicMedian) {
    const std::vector<double> v{3, 1, 2};
    const std::vector<double> w{1, 1, 1};
    const auto q = weighted_quantile(v, w, 0.5);
    EXPECT_EQ(q.value, 2.0);
    EXPECT_EQ(q.index, 2u);
}

TEST(WeightedQuantile, CumulativeWeightPicksMiddle) {
    const std::vector<double> v{5, 1, 3};
    const std::vector<double> w{0.3, 0.2, 0.5};
    const auto q = weighted_quantile(v, w, 0.5);
    EXPECT_EQ(q.value, 3.0);
    EXPECT_EQ(q.index, 2u);
}

TEST(WeightedQuantile, EndpointsSelectExtremes) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(7), w(7);
        for (auto& x : v) x = u(rng);
        for (auto& x : w) x = u(rng);
        EXPECT_EQ(weighted_quantile(v, w, 0.0).value, *std::min_element(v.begin(), v.end()));
        EXPECT_EQ(weighted_quantile(v, w, 1.0).value, *std::max_element(v.begin(), v.end()));
    }
}

TEST(WeightedQuantile, TiesResolveToEarliestPosition) {
    const std::vector<double> v{0.4, 0.4, 0.4};
    const std::vector<double> w{1, 1, 1};
    EXPECT_EQ(weighted_quantile(v, w, 0.0).index, 0u);
    EXPECT_EQ(weighted_quantile(v, w, 0.5).index, 1u);
    EXPECT_EQ(weighted_quantile(v, w, 1.0).index, 2u);
}

TEST(WeightedQuantile, MatchesRunningSumReference) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> len(1, 49);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> wt(1e-3, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = len(rng);
        std::vector<double> v(n), w(n);
        for (auto& x : v) x = std::round(u(rng) * 20.0) / 20.0;  // plenty of ties
        for (auto& x : w) x = wt(rng);
        for (double p : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
            const auto q = weighted_quantile(v, w, p);
            const std::size_t k = support::quantile_position(v, w, p);
            ASSERT_EQ(q.index, k) << "trial " << trial << " p " << p;
            ASSERT_EQ(q.value, v[k]);
        }
    }
}

TEST(WeightedQuantile, RejectsBadInput) {
    const std::vector<double> empty;
    EXPECT_THROW((void)weighted_quantile(empty, empty, 0.5), Error);
    const std::vector<double> v{1, 2};
    EXPECT_THROW((void)weighted_quantile(v, std::vector<double>{1, 0}, 0.5), Error);
    EXPECT_THROW((void)weighted_quantile(v, std::vector<double>{1, -1}, 0.5), Error);
    EXPECT_THROW((void)weighted_quantile(v, std::vector<double>{1}, 0.5), Error);
    EXPECT_THROW((void)weighted_quantile(v, std::vector<double>{1, 1}, 1.5), Error);
}

TEST(QuantileConfig, Validation) {
    QuantileConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.p = -0.1;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.radius = 0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.sigma_w = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.guidance = GuidanceMode::Static;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(ApplyFilter, ConstantImageIsFixed) {
    const Image c(9, 7, 0.37);
    for (auto mode : {GuidanceMode::Uniform, GuidanceMode::DynamicIterate}) {
        QuantileConfig cfg;
        cfg.guidance = mode;
        cfg.p = 0.3;
        EXPECT_EQ(apply_filter(c, cfg), c);
    }
}

TEST(ApplyFilter, SingleImpulseIsRemoved) {
    Image img(5, 5, 0.0);
    img.at(2, 2) = 1.0;
    QuantileConfig cfg;
    cfg.guidance = GuidanceMode::Uniform;
    cfg.radius = 1;
    EXPECT_EQ(apply_filter(img, cfg), Image(5, 5, 0.0));
}

TEST(ApplyFilter, UniformWeightsMatchSortedWindowReference) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Image img = support::random_image(8, 8, 100 + seed);
        for (int r : {1, 2, 3}) {
            for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                QuantileConfig cfg;
                cfg.guidance = GuidanceMode::Uniform;
                cfg.radius = r;
                cfg.p = p;
                EXPECT_EQ(apply_filter(img, cfg), support::quantile_filter_reference(img, r, p));
            }
        }
    }
}

TEST(ApplyFilter, HugeBandwidthReducesToUniform) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Image img = support::random_image(12, 12, 200 + seed);
        QuantileConfig uni;
        uni.guidance = GuidanceMode::Uniform;
        QuantileConfig wide;
        wide.guidance = GuidanceMode::DynamicIterate;
        wide.sigma_w = 1e6;
        EXPECT_EQ(apply_filter(img, wide), apply_filter(img, uni));
    }
}

TEST(ApplyFilter, StaticGuidanceKeepsEdges) {
    // A noisy two-level image filtered with the clean edge as guidance stays on its side.
    Image clean(10, 6, 0.2);
    for (std::size_t y = 0; y < 6; ++y) {
        for (std::size_t x = 5; x < 10; ++x) clean.at(x, y) = 0.8;
    }
    QuantileConfig cfg;
    cfg.guidance = GuidanceMode::Static;
    cfg.static_guidance = clean;
    cfg.radius = 2;
    cfg.sigma_w = 0.05;
    Image shifted = clean;
    shifted.at(4, 3) = 0.25;
    const Image out = apply_filter(shifted, cfg);
    EXPECT_EQ(out.at(4, 3), 0.2);
    EXPECT_EQ(out.at(5, 3), 0.8);
}

TEST(ApplyFilter, GuidanceShapeMismatchThrows) {
    QuantileConfig cfg;
    cfg.guidance = GuidanceMode::DynamicInput;
    EXPECT_THROW((void)apply_filter(Image(4, 4), cfg, Image(5, 4)), Error);
    cfg.guidance = GuidanceMode::Uniform;
    EXPECT_NO_THROW((void)apply_filter(Image(4, 4), cfg, Image(5, 4)));
}

TEST(BuildSelection, ReproducesFilterExactly) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Image img = support::random_image(8, 8, 300 + seed);
        const Image z = support::random_image(8, 8, 400 + seed);
        for (auto mode : {GuidanceMode::Uniform, GuidanceMode::Static, GuidanceMode::DynamicInput,
                          GuidanceMode::DynamicIterate}) {
            QuantileConfig cfg;
            cfg.guidance = mode;
            cfg.p = 0.2 + 0.1 * static_cast<double>(seed);
            if (mode == GuidanceMode::Static) cfg.static_guidance = z;
            const Image& g = mode == GuidanceMode::DynamicIterate ? img : z;
            const SelectionOperator q = build_selection(img, cfg, g);
            EXPECT_EQ(apply_selection(q, img), apply_filter(img, cfg, g));
        }
    }
}

TEST(BuildSelection, SourcesStayInsideWindows) {
    const Image img = support::random_image(11, 9, 500);
    QuantileConfig cfg;
    cfg.radius = 2;
    const SelectionOperator q = build_selection(img, cfg);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const long dx = static_cast<long>(q.source(i) % 11) - static_cast<long>(i % 11);
        const long dy = static_cast<long>(q.source(i) / 11) - static_cast<long>(i / 11);
        EXPECT_LE(std::abs(dx), 2);
        EXPECT_LE(std::abs(dy), 2);
    }
}

TEST(BuildSelection, RowMajorRampSelectsItself) {
    Image ramp(6, 6);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    QuantileConfig cfg;
    cfg.guidance = GuidanceMode::Uniform;
    cfg.radius = 1;
    const SelectionOperator q = build_selection(ramp, cfg);
    for (std::size_t y = 1; y + 1 < 6; ++y) {
        for (std::size_t x = 1; x + 1 < 6; ++x) {
            const std::size_t i = y * 6 + x;
            // the 3x3 window holds i-7..i-5, i-1..i+1, i+5..i+7: median is i
            EXPECT_EQ(q.source(i), i);
        }
    }
}

TEST(BuildSelection, StableUnderSmallPerturbation) {
    // values on a 1/64 grid; perturbations below half the smallest gap keep the ordering
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> level(0, 63);
    Image img(10, 10);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = level(rng) / 64.0 + 1e-9 * static_cast<double>(i);
    QuantileConfig cfg;
    cfg.guidance = GuidanceMode::Uniform;
    const SelectionOperator q = build_selection(img, cfg);
    const Image delta = support::random_image(10, 10, 78, -1e-10, 1e-10);
    EXPECT_EQ(build_selection(img + delta, cfg), q);
}

TEST(BuildSelection, ConstantImageSelectionReproducesIt) {
    const Image c(5, 5, 0.6);
    const SelectionOperator q = build_selection(c, QuantileConfig{});
    EXPECT_EQ(apply_selection(q, c), c);
}

TEST(Selection, IdentityActsAsIdentity) {
    const SelectionOperator id = SelectionOperator::identity(5, 4);
    const Image x = support::random_image(5, 4, 600);
    EXPECT_EQ(apply_selection(id, x), x);
    EXPECT_EQ(apply_selection_transpose(id, x), x);
    EXPECT_EQ(norm_inf(apply_residual(id, x)), 0.0);
}

TEST(Selection, AdjointIdentity) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SelectionOperator q = support::random_selection(16, 16, 2, seed);
        const Image x = support::random_image(16, 16, 700 + seed, -1, 1);
        const Image y = support::random_image(16, 16, 800 + seed, -1, 1);
        EXPECT_NEAR(dot(apply_selection(q, x), y), dot(x, apply_selection_transpose(q, y)), 1e-10);
        EXPECT_NEAR(dot(apply_residual(q, x), y), dot(x, apply_residual_transpose(q, y)), 1e-10);
    }
}

TEST(Selection, TransposeOfOnesCountsMultiplicity) {
    const SelectionOperator q = support::random_selection(9, 7, 1, 42);
    const Image counts = apply_selection_transpose(q, Image(9, 7, 1.0));
    std::vector<double> hist(q.size(), 0.0);
    for (std::size_t s : q.sources()) hist[s] += 1.0;
    for (std::size_t j = 0; j < q.size(); ++j) EXPECT_EQ(counts[j], hist[j]);
}

TEST(Selection, RejectsOutOfRangeSourcesAndShapeMismatch) {
    EXPECT_THROW(SelectionOperator(2, 2, {0, 1, 2, 4}), Error);
    EXPECT_THROW(SelectionOperator(2, 2, {0, 1, 2}), Error);
    const SelectionOperator q = SelectionOperator::identity(3, 3);
    EXPECT_THROW((void)apply_selection(q, Image(3, 4)), Error);
    EXPECT_THROW((void)apply_selection_transpose(q, Image(4, 3)), Error);
}

TEST(Selection, DebugDumpRoundTrip) {
    const SelectionOperator q = support::random_selection(7, 5, 2, 3);
    std::stringstream ss;
    write_selection(ss, q);
    EXPECT_EQ(ss.str().substr(0, 9), "QSEL 7 5\n");
    EXPECT_EQ(ss.str().size(), 9 + 8 * q.size());
    EXPECT_EQ(read_selection(ss), q);
}

TEST(Residual, CleanPiecewiseConstantVersusNoisy) {
    const Image clean = synthetic::piecewise_constant(64, 64);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 0.1);
    Image noisy = clean;
    for (double& v : noisy.pixels()) v += n(rng);
    QuantileConfig cfg;
    cfg.guidance = GuidanceMode::Uniform;
    const auto mean_abs_residual = [&](const Image& f) {
        const Image r = f - apply_filter(f, cfg);
        double s = 0.0;
        for (double v : r.pixels()) s += std::abs(v);
        return s / static_cast<double>(r.size());
    };
    const double clean_r = mean_abs_residual(clean);
    const double noisy_r = mean_abs_residual(noisy);
    EXPECT_LT(clean_r, 0.01);
    EXPECT_GE(noisy_r, 5.0 * clean_r);
}
