#pragma once

#include "aquasi/image.hpp"
#include "aquasi/quantile_filter.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace aquasi::support {

inline Image random_image(std::size_t w, std::size_t h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Image img(w, h);
    for (double& v : img.pixels()) v = u(rng);
    return img;
}

/// Order-statistic reference: sort (value, position) pairs and walk the running
/// weight until it reaches p of the total.
inline std::size_t quantile_position(const std::vector<double>& values, const std::vector<double>& weights, double p) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(values[a], a) < std::pair(values[b], b);
    });
    double total = 0.0;
    for (std::size_t k : order) total += weights[k];
    double run = 0.0;
    for (std::size_t k : order) {
        run += weights[k];
        if (run >= p * total) return k;
    }
    return order.back();
}

/// Uniform-weight quantile filter computed the slow way, one window at a time.
inline Image quantile_filter_reference(const Image& img, int radius, double p) {
    Image out(img.width(), img.height());
    const auto w = static_cast<long>(img.width());
    const auto h = static_cast<long>(img.height());
    for (long y = 0; y < h; ++y) {
        for (long x = 0; x < w; ++x) {
            std::vector<double> vals;
            for (long dy = -radius; dy <= radius; ++dy) {
                for (long dx = -radius; dx <= radius; ++dx) {
                    const long xx = x + dx;
                    const long yy = y + dy;
                    if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
                    vals.push_back(img.at(static_cast<std::size_t>(xx), static_cast<std::size_t>(yy)));
                }
            }
            std::sort(vals.begin(), vals.end());
            // smallest k (1-based) with k >= p * n
            const double n = static_cast<double>(vals.size());
            std::size_t k = 1;
            while (static_cast<double>(k) < p * n) ++k;
            out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = vals[k - 1];
        }
    }
    return out;
}

/// Selection whose every row picks a uniformly random member of its radius-r window.
inline SelectionOperator random_selection(std::size_t w, std::size_t h, int radius, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> src(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto b = window_bounds(w, h, x, y, radius);
            std::uniform_int_distribution<std::size_t> px(b.x0, b.x1);
            std::uniform_int_distribution<std::size_t> py(b.y0, b.y1);
            src[y * w + x] = py(rng) * w + px(rng);
        }
    }
    return SelectionOperator(w, h, std::move(src));
}

}  // namespace aquasi::support
