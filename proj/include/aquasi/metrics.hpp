#pragma once

#include "aquasi/image.hpp"
#include "aquasi/quantile_filter.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace aquasi {

double rmse(const Image& f, const Image& ref);
/// Peak 1.0. Identical images give +infinity.
double psnr(const Image& f, const Image& ref);
/// Fraction of pixels with |f - ref| > delta.
double bme(const Image& f, const Image& ref, double delta);

/// Uniform bins over [-1, 1]; values outside are counted in the end bins.
struct Histogram {
    std::vector<double> edges;  ///< bins + 1 strictly increasing edges
    std::vector<std::size_t> counts;

    [[nodiscard]] std::size_t bins() const noexcept { return counts.size(); }
    [[nodiscard]] std::size_t total() const noexcept;
    [[nodiscard]] double bin_center(std::size_t b) const noexcept { return 0.5 * (edges[b] + edges[b + 1]); }
    /// Mean and standard deviation of the binned distribution (bin centres).
    [[nodiscard]] double mean() const noexcept;
    [[nodiscard]] double stddev() const noexcept;
    /// Fraction of the mass in bins that lie entirely within [-tol, tol].
    [[nodiscard]] double mass_within(double tol) const noexcept;
};

Histogram make_histogram(const Image& values, std::size_t bins);

/// Histogram of r = f - Q_{p,w}(f) using apply_filter with the given config.
Histogram residual_histogram(const Image& img, const QuantileConfig& cfg, std::size_t bins);

/// "bin_lo,bin_hi,count" CSV.
void write_histogram_csv(std::ostream& out, const Histogram& h);

}  // namespace aquasi
