#pragma once

#include "aquasi/image.hpp"
#include "aquasi/quantile_filter.hpp"

namespace aquasi {

struct RegWeights {
    double lambda = 13.0;   ///< AQuaSI weight
    double mu = 0.05;       ///< anisotropic TV weight
    double epsilon = 1e-4;  ///< sign smoothing

    void validate() const;
};

/// u / sqrt(u^2 + eps)
double smoothed_sign(double u, double epsilon) noexcept;

/// Soft thresholding sign(u) * max(|u| - gamma, 0), the proximal map of gamma*|.|.
double shrink(double u, double gamma) noexcept;
Image shrink(Image u, double gamma);

// AQuaSI: || f - Q f ||_1 with Q held fixed.
double aquasi_value(const Image& f, const SelectionOperator& q);
/// sum_i sqrt(r_i^2 + eps) - sqrt(eps), r = (I - Q) f. The functional whose exact
/// gradient aquasi_gradient() returns.
double aquasi_smoothed_value(const Image& f, const SelectionOperator& q, double epsilon);
/// (I - Q)^T s with s_i = smoothed_sign(r_i).
Image aquasi_gradient(const Image& f, const SelectionOperator& q, double epsilon);

// Forward differences; the last column (x) and last row (y) have zero difference.
Image diff_x(const Image& f);
Image diff_y(const Image& f);
Image diff_x_transpose(const Image& d);
Image diff_y_transpose(const Image& d);

/// ||D_x f||_1 + ||D_y f||_1
double tv_value(const Image& f);
double tv_smoothed_value(const Image& f, double epsilon);
/// D_x^T s_x + D_y^T s_y with smoothed signs of the differences.
Image tv_gradient(const Image& f, double epsilon);

/// <f, f - Q f>
double red_value(const Image& f, const SelectionOperator& q);
/// (2I - Q - Q^T) f, treating Q as constant.
Image red_gradient(const Image& f, const SelectionOperator& q);

}  // namespace aquasi
