#include "aquasi/data_term.hpp"
#include "aquasi/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace aquasi;

TEST(DataTerm, IdentityValueAndGradient) {
    const Image g = support::random_image(5, 4, 1);
    const Image f = support::random_image(5, 4, 2);
    const DataTerm d = DataTerm::identity(MultiChannelImage(g));
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - g[i]) * (f[i] - g[i]);
    EXPECT_NEAR(d.value(f, 0), s, 1e-12);
    const Image grad = d.gradient(f, 0);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(grad[i], 2.0 * (f[i] - g[i]), 1e-14);
    EXPECT_EQ(d.value(g, 0), 0.0);
}

TEST(DataTerm, MaskedIgnoresZeroConfidence) {
    const Image g = support::random_image(4, 4, 3);
    Image c(4, 4, 0.0);
    c[5] = 1.0;
    const DataTerm d = DataTerm::masked(MultiChannelImage(g), c);
    Image f(4, 4, 0.7);
    f[5] = g[5];
    EXPECT_NEAR(d.value(f, 0), 0.0, 1e-15);
    EXPECT_EQ(norm_inf(d.gradient(f, 0)), 0.0);
    Image bad_c = c;
    bad_c[0] = 1.5;
    EXPECT_THROW((void)DataTerm::masked(MultiChannelImage(g), bad_c), Error);
    EXPECT_THROW((void)DataTerm::masked(MultiChannelImage(g), Image(3, 4, 1.0)), Error);
}

TEST(DataTerm, LinearOpNormalOperatorIsSymmetric) {
    const ConvOperator w = gaussian_kernel(1.0);
    const DataTerm d = DataTerm::linear(MultiChannelImage(support::random_image(10, 10, 4)), w);
    const Image x = support::random_image(10, 10, 5, -1, 1);
    const Image y = support::random_image(10, 10, 6, -1, 1);
    EXPECT_NEAR(dot(d.apply_normal_operator(x), y), dot(x, d.apply_normal_operator(y)), 1e-10);
    // gradient = 2 (A^T A f - A^T y)
    const Image grad = d.gradient(x, 0);
    Image expect = d.apply_normal_operator(x);
    axpy(-1.0, d.adjoint_observation(0), expect);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(grad[i], 2.0 * expect[i], 1e-12);
}
