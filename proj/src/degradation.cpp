#include "aquasi/degradation.hpp"

#include "aquasi/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

namespace aquasi {

void NoiseSpec::validate() const {
    if (!std::isfinite(amount)) throw Error(ErrorKind::InvalidArgument, "noise amount must be finite");
    switch (kind) {
        case NoiseKind::Gaussian:
        case NoiseKind::Speckle:
            if (amount < 0.0) throw Error(ErrorKind::InvalidArgument, "noise sigma must be >= 0");
            break;
        case NoiseKind::SaltPepper:
            if (amount < 0.0 || amount > 1.0) {
                throw Error(ErrorKind::InvalidArgument, "salt & pepper density must lie in [0,1]");
            }
            break;
        case NoiseKind::Poisson:
            if (!(amount > 0.0)) throw Error(ErrorKind::InvalidArgument, "Poisson peak must be > 0");
            break;
    }
}

Image add_noise(const Image& img, const NoiseSpec& spec) {
    spec.validate();
    Image out = img;
    std::mt19937_64 rng(spec.seed);
    switch (spec.kind) {
        case NoiseKind::Gaussian: {
            if (spec.amount == 0.0) return img;
            std::normal_distribution<double> n(0.0, spec.amount);
            for (double& v : out.pixels()) v += n(rng);
            break;
        }
        case NoiseKind::Speckle: {
            if (spec.amount == 0.0) return img;
            std::normal_distribution<double> n(0.0, spec.amount);
            for (double& v : out.pixels()) v *= 1.0 + n(rng);
            break;
        }
        case NoiseKind::SaltPepper: {
            const auto count = static_cast<std::size_t>(std::llround(spec.amount * static_cast<double>(img.size())));
            std::vector<std::size_t> order(img.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            // Partial Fisher-Yates: the first `count` entries are a uniform random subset.
            for (std::size_t k = 0; k < count; ++k) {
                std::uniform_int_distribution<std::size_t> pick(k, order.size() - 1);
                std::swap(order[k], order[pick(rng)]);
                out[order[k]] = (rng() & 1u) ? 1.0 : 0.0;
            }
            break;
        }
        case NoiseKind::Poisson: {
            for (double& v : out.pixels()) {
                const double mean = spec.amount * std::max(v, 0.0);
                if (mean <= 0.0) {
                    v = 0.0;
                    continue;
                }
                std::poisson_distribution<long long> pois(mean);
                v = static_cast<double>(pois(rng)) / spec.amount;
            }
            break;
        }
    }
    return clamp01(std::move(out));
}

Image add_mixed_noise(const Image& img, std::uint64_t seed) {
    // splitmix-style decorrelation of the second stream
    const std::uint64_t second = seed ^ 0x9E3779B97F4A7C15ull;
    return add_noise(add_noise(img, NoiseSpec::gaussian(0.05, seed)), NoiseSpec::salt_pepper(0.05, second));
}

ConvOperator::ConvOperator(std::size_t rows, std::size_t cols, std::vector<double> kernel)
    : rows_(rows), cols_(cols), kernel_(std::move(kernel)) {
    if (rows_ % 2 == 0 || cols_ % 2 == 0) {
        throw Error(ErrorKind::InvalidArgument, "kernel dimensions must be odd, got " +
                                                    std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (kernel_.size() != rows_ * cols_) {
        throw Error(ErrorKind::DimensionMismatch, "kernel entry count does not match its dimensions");
    }
    for (double k : kernel_) {
        if (!std::isfinite(k)) throw Error(ErrorKind::InvalidArgument, "kernel entries must be finite");
    }
}

namespace {

std::size_t clamp_index(long long v, std::size_t n) {
    if (v < 0) return 0;
    if (static_cast<std::size_t>(v) >= n) return n - 1;
    return static_cast<std::size_t>(v);
}

}  // namespace

Image ConvOperator::apply(const Image& img) const {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const auto ry = static_cast<long long>(rows_ / 2);
    const auto rx = static_cast<long long>(cols_ / 2);
    Image out(w, h, 0.0);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double s = 0.0;
            for (long long dy = -ry; dy <= ry; ++dy) {
                const std::size_t sy = clamp_index(static_cast<long long>(y) + dy, h);
                for (long long dx = -rx; dx <= rx; ++dx) {
                    const std::size_t sx = clamp_index(static_cast<long long>(x) + dx, w);
                    s += tap(static_cast<std::size_t>(dy + ry), static_cast<std::size_t>(dx + rx)) *
                         img.at(sx, sy);
                }
            }
            out.at(x, y) = s;
        }
    }
    return out;
}

Image ConvOperator::apply_transpose(const Image& img) const {
    const std::size_t w = img.width();
    const std::size_t h = img.height();
    const auto ry = static_cast<long long>(rows_ / 2);
    const auto rx = static_cast<long long>(cols_ / 2);
    Image out(w, h, 0.0);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double v = img.at(x, y);
            for (long long dy = -ry; dy <= ry; ++dy) {
                const std::size_t sy = clamp_index(static_cast<long long>(y) + dy, h);
                for (long long dx = -rx; dx <= rx; ++dx) {
                    const std::size_t sx = clamp_index(static_cast<long long>(x) + dx, w);
                    out.at(sx, sy) +=
                        tap(static_cast<std::size_t>(dy + ry), static_cast<std::size_t>(dx + rx)) * v;
                }
            }
        }
    }
    return out;
}

Image ConvOperator::apply_normal(const Image& img) const { return apply_transpose(apply(img)); }

ConvOperator gaussian_kernel(double sigma, int radius) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorKind::InvalidArgument, "Gaussian kernel sigma must be > 0");
    }
    if (radius < 0) radius = static_cast<int>(std::ceil(3.0 * sigma));
    const auto side = static_cast<std::size_t>(2 * radius + 1);
    std::vector<double> k(side * side);
    double total = 0.0;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const double v = std::exp(-static_cast<double>(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            k[static_cast<std::size_t>(dy + radius) * side + static_cast<std::size_t>(dx + radius)] = v;
            total += v;
        }
    }
    for (double& v : k) v /= total;
    return ConvOperator(side, side, std::move(k));
}

ConvOperator read_kernel(std::istream& in) {
    std::string magic;
    long long rows = -1, cols = -1;
    in >> magic;
    if (magic != "K") throw Error(ErrorKind::UnsupportedFormat, "kernel file must start with 'K'");
    in >> rows >> cols;
    if (in.fail() || rows <= 0 || cols <= 0 || rows > 4097 || cols > 4097) {
        throw Error(ErrorKind::MalformedHeader, "bad kernel header");
    }
    std::vector<double> k(static_cast<std::size_t>(rows * cols));
    for (double& v : k) {
        if (!(in >> v)) throw Error(ErrorKind::TruncatedPayload, "kernel file has too few entries");
    }
    return ConvOperator(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(k));
}

ConvOperator read_kernel(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open kernel file '" + path.string() + "'");
    return read_kernel(in);
}

void write_kernel(std::ostream& out, const ConvOperator& op) {
    out << "K " << op.rows() << ' ' << op.cols() << '\n';
    out.precision(17);
    for (std::size_t r = 0; r < op.rows(); ++r) {
        for (std::size_t c = 0; c < op.cols(); ++c) out << (c ? " " : "") << op.tap(r, c);
        out << '\n';
    }
}

void DecimationSpec::validate() const {
    if (factor < 2) throw Error(ErrorKind::InvalidArgument, "decimation factor must be >= 2");
    if (!(blur_sigma >= 0.0) || !std::isfinite(blur_sigma)) {
        throw Error(ErrorKind::InvalidArgument, "blur sigma must be >= 0");
    }
}

Image decimate_nearest(const Image& img, int factor) {
    if (factor < 1) throw Error(ErrorKind::InvalidArgument, "decimation factor must be >= 1");
    const auto f = static_cast<std::size_t>(factor);
    const std::size_t lw = (img.width() + f - 1) / f;
    const std::size_t lh = (img.height() + f - 1) / f;
    Image low(lw, lh);
    for (std::size_t y = 0; y < lh; ++y) {
        for (std::size_t x = 0; x < lw; ++x) low.at(x, y) = img.at(x * f, y * f);
    }
    return low;
}

Image upsample_nearest(const Image& low, int factor, std::size_t width, std::size_t height) {
    if (factor < 1) throw Error(ErrorKind::InvalidArgument, "upsampling factor must be >= 1");
    const auto f = static_cast<std::size_t>(factor);
    if ((width + f - 1) / f != low.width() || (height + f - 1) / f != low.height()) {
        throw Error(ErrorKind::DimensionMismatch, "low-resolution grid does not match the target size");
    }
    Image up(width, height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) up.at(x, y) = low.at(x / f, y / f);
    }
    return up;
}

DepthDegradation degrade_depth(const Image& img, const DecimationSpec& spec, const NoiseSpec& noise) {
    spec.validate();
    const auto f = static_cast<std::size_t>(spec.factor);
    if (img.width() < f || img.height() < f) {
        throw Error(ErrorKind::InvalidArgument, "image is smaller than the decimation factor");
    }
    const Image blurred = spec.blur_sigma > 0.0 ? gaussian_kernel(spec.blur_sigma).apply(img) : img;
    DepthDegradation out;
    out.low_res = add_noise(decimate_nearest(blurred, spec.factor), noise);
    out.upsampled = upsample_nearest(out.low_res, spec.factor, img.width(), img.height());
    return out;
}

}  // namespace aquasi
