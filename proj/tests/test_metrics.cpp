#include "aquasi/degradation.hpp"
#include "aquasi/error.hpp"
#include "aquasi/metrics.hpp"
#include "aquasi/synthetic.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace aquasi;

TEST(Psnr, IdenticalImagesGiveInfinity) {
    const Image a = support::random_image(5, 5, 1);
    EXPECT_TRUE(std::isinf(psnr(a, a)));
    EXPECT_EQ(rmse(a, a), 0.0);
}

TEST(Psnr, ConstantOffset) {
    const Image a(8, 8, 0.3);
    const Image b(8, 8, 0.4);
    EXPECT_NEAR(rmse(a, b), 0.1, 1e-12);
    EXPECT_NEAR(psnr(a, b), 20.0, 1e-9);
}

TEST(Psnr, SymmetricAndMatchesDefinition) {
    const Image a = support::random_image(6, 7, 2);
    const Image b = support::random_image(6, 7, 3);
    EXPECT_EQ(rmse(a, b), rmse(b, a));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    const double mse = s / static_cast<double>(a.size());
    EXPECT_NEAR(psnr(a, b), 10.0 * std::log10(1.0 / mse), 1e-10);
    EXPECT_THROW((void)rmse(a, Image(7, 6)), Error);
}

TEST(Bme, CountsStrictlyAboveThreshold) {
    const Image ref(4, 1, 0.0);
    const Image f(4, 1, std::vector<double>{0.0, 0.5, 0.02, -0.25});
    EXPECT_DOUBLE_EQ(bme(f, ref, 0.01), 0.75);
    EXPECT_DOUBLE_EQ(bme(f, ref, 0.25), 0.25);
    EXPECT_DOUBLE_EQ(bme(f, ref, 0.5), 0.0);
    EXPECT_THROW((void)bme(f, ref, -1.0), Error);
}

TEST(Bme, NonIncreasingInThreshold) {
    const Image a = support::random_image(16, 16, 4);
    const Image b = support::random_image(16, 16, 5);
    double prev = 1.0;
    for (double d = 0.0; d <= 1.0; d += 0.05) {
        const double v = bme(a, b, d);
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_EQ(bme(a, b, 1.0), 0.0);
}

TEST(Histogram, CountsAndEdges) {
    const Image r = support::random_image(20, 20, 6, -1.5, 1.5);
    const Histogram h = make_histogram(r, 17);
    EXPECT_EQ(h.bins(), 17u);
    ASSERT_EQ(h.edges.size(), 18u);
    EXPECT_DOUBLE_EQ(h.edges.front(), -1.0);
    EXPECT_DOUBLE_EQ(h.edges.back(), 1.0);
    EXPECT_EQ(h.total(), r.size());
    EXPECT_THROW((void)make_histogram(r, 1), Error);
}

TEST(Histogram, ZeroImageFallsInCentreBin) {
    const Histogram h = make_histogram(Image(9, 9, 0.0), 255);
    EXPECT_EQ(h.counts[127], 81u);
    EXPECT_NEAR(h.mean(), 0.0, 1e-15);
    EXPECT_NEAR(h.stddev(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(h.mass_within(1.0 / 255.0), 1.0);
}

TEST(Histogram, MomentsFromBinCentres) {
    const Image r(2, 1, std::vector<double>{-0.9, 0.9});
    const Histogram h = make_histogram(r, 4);
    // centres of bins 0 and 3 are -0.75 and 0.75
    EXPECT_NEAR(h.mean(), 0.0, 1e-15);
    EXPECT_NEAR(h.stddev(), 0.75, 1e-15);
}

TEST(ResidualHistogram, CleanIsConcentratedNoisyIsBroad) {
    const Image clean = synthetic::piecewise_constant(64, 64);
    const Image noisy = add_noise(clean, NoiseSpec::gaussian(0.1, 7));
    QuantileConfig cfg;
    cfg.guidance = GuidanceMode::Uniform;
    const Histogram hc = residual_histogram(clean, cfg, 255);
    const Histogram hn = residual_histogram(noisy, cfg, 255);
    EXPECT_GT(hc.mass_within(1.0 / 255.0), 0.95);
    EXPECT_LE(5.0 * hc.stddev(), hn.stddev());
}

TEST(Histogram, CsvLayout) {
    std::stringstream ss;
    write_histogram_csv(ss, make_histogram(Image(2, 2, 0.0), 2));
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "bin_lo,bin_hi,count");
    std::size_t rows = 0;
    while (std::getline(ss, line)) ++rows;
    EXPECT_EQ(rows, 2u);
}
