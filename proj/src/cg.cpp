#include "aquasi/cg.hpp"

#include "aquasi/error.hpp"

#include <cmath>

namespace aquasi {

CgResult cg_solve(const LinearMap& apply_a, const Image& b, const Image& x0, int max_iters, double tol) {
    if (!b.same_shape(x0)) throw Error(ErrorKind::DimensionMismatch, "cg_solve: b and x0 differ in size");
    CgResult res{x0, 0, 0.0};
    Image r = b - apply_a(res.x);
    const double b_norm = norm2(b);
    const double scale = b_norm > 0.0 ? b_norm : 1.0;
    double rr = dot(r, r);
    res.relative_residual = std::sqrt(rr) / scale;
    if (!std::isfinite(rr)) throw Error(ErrorKind::NumericalBreakdown, "cg_solve: non-finite initial residual");

    Image p = r;
    while (res.iterations < max_iters && res.relative_residual >= tol) {
        const Image ap = apply_a(p);
        const double pap = dot(p, ap);
        if (!std::isfinite(pap)) throw Error(ErrorKind::NumericalBreakdown, "cg_solve: non-finite curvature");
        if (pap <= 0.0) break;  // p in the null space of a semidefinite map
        const double step = rr / pap;
        axpy(step, p, res.x);
        axpy(-step, ap, r);
        const double rr_next = dot(r, r);
        ++res.iterations;
        if (!std::isfinite(rr_next)) throw Error(ErrorKind::NumericalBreakdown, "cg_solve: non-finite residual");
        res.relative_residual = std::sqrt(rr_next) / scale;
        p *= rr_next / rr;
        p += r;
        rr = rr_next;
    }
    return res;
}

}  // namespace aquasi
