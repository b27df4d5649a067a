#pragma once

#include "aquasi/image.hpp"

#include <functional>

namespace aquasi {

using LinearMap = std::function<Image(const Image&)>;

struct CgResult {
    Image x;
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Conjugate gradients for a symmetric positive (semi)definite map, warm-started at x0.
/// Stops when ||b - A x|| / ||b|| < tol (absolute when b == 0) or after max_iters.
/// Throws NumericalBreakdown if the residual stops being finite.
CgResult cg_solve(const LinearMap& apply_a, const Image& b, const Image& x0, int max_iters, double tol);

}  // namespace aquasi
