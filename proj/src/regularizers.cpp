#include "aquasi/regularizers.hpp"

#include "aquasi/error.hpp"

#include <cmath>

namespace aquasi {

void RegWeights::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda) || !(mu >= 0.0) || !std::isfinite(mu)) {
        throw Error(ErrorKind::InvalidArgument, "regularization weights must be finite and >= 0");
    }
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be > 0");
}

double smoothed_sign(double u, double epsilon) noexcept { return u / std::sqrt(u * u + epsilon); }

double shrink(double u, double gamma) noexcept {
    const double mag = std::abs(u) - gamma;
    if (mag <= 0.0) return 0.0;
    return u < 0.0 ? -mag : mag;
}

Image shrink(Image u, double gamma) {
    for (double& v : u.pixels()) v = shrink(v, gamma);
    return u;
}

double aquasi_value(const Image& f, const SelectionOperator& q) {
    const Image r = apply_residual(q, f);
    double s = 0.0;
    for (double v : r.pixels()) s += std::abs(v);
    return s;
}

double aquasi_smoothed_value(const Image& f, const SelectionOperator& q, double epsilon) {
    const Image r = apply_residual(q, f);
    const double floor = std::sqrt(epsilon);
    double s = 0.0;
    for (double v : r.pixels()) s += std::sqrt(v * v + epsilon) - floor;
    return s;
}

Image aquasi_gradient(const Image& f, const SelectionOperator& q, double epsilon) {
    Image s = apply_residual(q, f);
    for (double& v : s.pixels()) v = smoothed_sign(v, epsilon);
    return apply_residual_transpose(q, s);
}

Image diff_x(const Image& f) {
    const std::size_t w = f.width();
    Image d(w, f.height(), 0.0);
    for (std::size_t y = 0; y < f.height(); ++y) {
        for (std::size_t x = 0; x + 1 < w; ++x) d.at(x, y) = f.at(x + 1, y) - f.at(x, y);
    }
    return d;
}

Image diff_y(const Image& f) {
    const std::size_t w = f.width();
    Image d(w, f.height(), 0.0);
    for (std::size_t y = 0; y + 1 < f.height(); ++y) {
        for (std::size_t x = 0; x < w; ++x) d.at(x, y) = f.at(x, y + 1) - f.at(x, y);
    }
    return d;
}

Image diff_x_transpose(const Image& d) {
    const std::size_t w = d.width();
    Image out(w, d.height(), 0.0);
    for (std::size_t y = 0; y < d.height(); ++y) {
        for (std::size_t x = 0; x + 1 < w; ++x) {
            out.at(x + 1, y) += d.at(x, y);
            out.at(x, y) -= d.at(x, y);
        }
    }
    return out;
}

Image diff_y_transpose(const Image& d) {
    const std::size_t w = d.width();
    Image out(w, d.height(), 0.0);
    for (std::size_t y = 0; y + 1 < d.height(); ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            out.at(x, y + 1) += d.at(x, y);
            out.at(x, y) -= d.at(x, y);
        }
    }
    return out;
}

double tv_value(const Image& f) {
    const Image gx = diff_x(f);
    const Image gy = diff_y(f);
    double s = 0.0;
    for (double v : gx.pixels()) s += std::abs(v);
    for (double v : gy.pixels()) s += std::abs(v);
    return s;
}

double tv_smoothed_value(const Image& f, double epsilon) {
    const double floor = std::sqrt(epsilon);
    const Image gx = diff_x(f);
    const Image gy = diff_y(f);
    double s = 0.0;
    for (double v : gx.pixels()) s += std::sqrt(v * v + epsilon) - floor;
    for (double v : gy.pixels()) s += std::sqrt(v * v + epsilon) - floor;
    return s;
}

Image tv_gradient(const Image& f, double epsilon) {
    Image sx = diff_x(f);
    Image sy = diff_y(f);
    for (double& v : sx.pixels()) v = smoothed_sign(v, epsilon);
    for (double& v : sy.pixels()) v = smoothed_sign(v, epsilon);
    return diff_x_transpose(sx) + diff_y_transpose(sy);
}

double red_value(const Image& f, const SelectionOperator& q) { return dot(f, apply_residual(q, f)); }

Image red_gradient(const Image& f, const SelectionOperator& q) {
    // (2I - Q - Q^T) f = (I - Q) f + (I - Q)^T f
    return apply_residual(q, f) + apply_residual_transpose(q, f);
}

}  // namespace aquasi
