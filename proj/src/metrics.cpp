#include "aquasi/metrics.hpp"

#include "aquasi/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace aquasi {

namespace {

void require_same(const Image& f, const Image& ref, const char* what) {
    if (!f.same_shape(ref)) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": images differ in size");
    }
    if (f.empty()) throw Error(ErrorKind::InvalidArgument, std::string(what) + ": empty image");
}

}  // namespace

double rmse(const Image& f, const Image& ref) {
    require_same(f, ref, "rmse");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f[i] - ref[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(f.size()));
}

double psnr(const Image& f, const Image& ref) {
    const double e = rmse(f, ref);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(1.0 / e);
}

double bme(const Image& f, const Image& ref, double delta) {
    require_same(f, ref, "bme");
    if (!(delta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "bme threshold must be >= 0");
    std::size_t bad = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(f[i] - ref[i]) > delta) ++bad;
    }
    return static_cast<double>(bad) / static_cast<double>(f.size());
}

std::size_t Histogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

double Histogram::mean() const noexcept {
    const auto n = static_cast<double>(total());
    if (n == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t b = 0; b < bins(); ++b) s += static_cast<double>(counts[b]) * bin_center(b);
    return s / n;
}

double Histogram::stddev() const noexcept {
    const auto n = static_cast<double>(total());
    if (n == 0.0) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (std::size_t b = 0; b < bins(); ++b) {
        const double d = bin_center(b) - m;
        s += static_cast<double>(counts[b]) * d * d;
    }
    return std::sqrt(s / n);
}

double Histogram::mass_within(double tol) const noexcept {
    const auto n = static_cast<double>(total());
    if (n == 0.0) return 0.0;
    // Edges are computed in floating point; allow a hair of slack on the bounds.
    const double slack = 1e-12;
    std::size_t inside = 0;
    for (std::size_t b = 0; b < bins(); ++b) {
        if (edges[b] >= -tol - slack && edges[b + 1] <= tol + slack) inside += counts[b];
    }
    return static_cast<double>(inside) / n;
}

Histogram make_histogram(const Image& values, std::size_t bins) {
    if (bins < 2) throw Error(ErrorKind::InvalidArgument, "histogram needs at least 2 bins");
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges[b] = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
    }
    h.counts.assign(bins, 0);
    for (double v : values.pixels()) {
        const double t = (v + 1.0) * 0.5 * static_cast<double>(bins);
        const auto b = static_cast<long long>(std::floor(t));
        h.counts[static_cast<std::size_t>(std::clamp<long long>(b, 0, static_cast<long long>(bins) - 1))] += 1;
    }
    return h;
}

Histogram residual_histogram(const Image& img, const QuantileConfig& cfg, std::size_t bins) {
    return make_histogram(img - apply_filter(img, cfg), bins);
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
    out << "bin_lo,bin_hi,count\n";
    out.precision(17);
    for (std::size_t b = 0; b < h.bins(); ++b) {
        out << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.counts[b] << '\n';
    }
}

}  // namespace aquasi
