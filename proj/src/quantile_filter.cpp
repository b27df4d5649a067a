#include "aquasi/quantile_filter.hpp"

#include "aquasi/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace aquasi {

void QuantileConfig::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "quantile p must lie in [0,1]");
    if (radius < 1) throw Error(ErrorKind::InvalidArgument, "quantile radius must be >= 1");
    if (!(sigma_w > 0.0) || !std::isfinite(sigma_w)) {
        throw Error(ErrorKind::InvalidArgument, "sigma_w must be finite and > 0");
    }
    if (guidance == GuidanceMode::Static && !static_guidance) {
        throw Error(ErrorKind::InvalidArgument, "static guidance mode needs a guidance image");
    }
}

double guidance_weight(double zi, double zj, double sigma_w) noexcept {
    const double d = zi - zj;
    return std::exp(-(d * d) / (2.0 * sigma_w * sigma_w));
}

namespace {

struct Candidate {
    double value;
    double weight;
    std::size_t local;
};

// Core of the weighted quantile on a scratch buffer; returns the local index of k*.
std::size_t select_quantile(std::vector<Candidate>& cands, double p) {
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.value < b.value || (a.value == b.value && a.local < b.local);
    });
    double total = 0.0;
    for (const Candidate& c : cands) total += c.weight;
    const double threshold = p * total - kQuantileTieTolerance * total;
    double cumulative = 0.0;
    for (const Candidate& c : cands) {
        cumulative += c.weight;
        if (cumulative >= threshold) return c.local;
    }
    return cands.back().local;
}

void require_shape(const Image& a, const Image& b, const char* what) {
    if (!a.same_shape(b)) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
    }
}

void require_shape(const SelectionOperator& q, const Image& img, const char* what) {
    if (q.width() != img.width() || q.height() != img.height()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": selection is " + std::to_string(q.width()) + "x" +
                        std::to_string(q.height()) + ", image is " + std::to_string(img.width()) +
                        "x" + std::to_string(img.height()));
    }
}

// Global index selected for every pixel of img.
std::vector<std::size_t> select_all(const Image& img, const QuantileConfig& cfg, const Image& guidance) {
    cfg.validate();
    const bool uniform = cfg.guidance == GuidanceMode::Uniform;
    if (!uniform) require_shape(img, guidance, "quantile filter guidance");

    const std::size_t w = img.width();
    const std::size_t h = img.height();
    std::vector<std::size_t> source(img.size());
    std::vector<Candidate> cands;
    std::vector<std::size_t> globals;
    const auto side = static_cast<std::size_t>(2 * cfg.radius + 1);
    cands.reserve(side * side);
    globals.reserve(side * side);

    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::size_t i = y * w + x;
            const auto b = window_bounds(w, h, x, y, cfg.radius);
            cands.clear();
            globals.clear();
            const double zi = uniform ? 0.0 : guidance[i];
            for (std::size_t yy = b.y0; yy <= b.y1; ++yy) {
                for (std::size_t xx = b.x0; xx <= b.x1; ++xx) {
                    const std::size_t j = yy * w + xx;
                    const double wt =
                        uniform ? 1.0 : std::max(guidance_weight(zi, guidance[j], cfg.sigma_w), kMinWeight);
                    cands.push_back({img[j], wt, globals.size()});
                    globals.push_back(j);
                }
            }
            source[i] = globals[select_quantile(cands, cfg.p)];
        }
    }
    return source;
}

const Image& resolve_guidance(const Image& img, const QuantileConfig& cfg) {
    if (cfg.guidance == GuidanceMode::Static) {
        if (!cfg.static_guidance) {
            throw Error(ErrorKind::InvalidArgument, "static guidance mode needs a guidance image");
        }
        return *cfg.static_guidance;
    }
    return img;
}

}  // namespace

QuantileSelection weighted_quantile(std::span<const double> values, std::span<const double> weights,
                                    double p) {
    if (values.empty()) throw Error(ErrorKind::InvalidArgument, "weighted quantile of an empty set");
    if (values.size() != weights.size()) {
        throw Error(ErrorKind::DimensionMismatch, "weighted quantile: values and weights differ in length");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "quantile p must lie in [0,1]");
    std::vector<Candidate> cands;
    cands.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
            throw Error(ErrorKind::InvalidArgument, "weighted quantile needs finite positive weights");
        }
        cands.push_back({values[k], weights[k], k});
    }
    const std::size_t k = select_quantile(cands, p);
    return {values[k], k};
}

SelectionOperator::SelectionOperator(std::size_t width, std::size_t height, std::vector<std::size_t> source)
    : width_(width), height_(height), source_(std::move(source)) {
    if (source_.size() != width_ * height_) {
        throw Error(ErrorKind::DimensionMismatch, "selection length does not match its dimensions");
    }
    for (std::size_t s : source_) {
        if (s >= source_.size()) throw Error(ErrorKind::OutOfRange, "selection index out of range");
    }
}

SelectionOperator SelectionOperator::identity(std::size_t width, std::size_t height) {
    std::vector<std::size_t> src(width * height);
    std::iota(src.begin(), src.end(), std::size_t{0});
    return SelectionOperator(width, height, std::move(src));
}

Image apply_selection(const SelectionOperator& q, const Image& img) {
    require_shape(q, img, "apply_selection");
    Image out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[q.source(i)];
    return out;
}

Image apply_selection_transpose(const SelectionOperator& q, const Image& img) {
    require_shape(q, img, "apply_selection_transpose");
    Image out(img.width(), img.height(), 0.0);
    for (std::size_t i = 0; i < img.size(); ++i) out[q.source(i)] += img[i];
    return out;
}

Image apply_residual(const SelectionOperator& q, const Image& img) {
    require_shape(q, img, "apply_residual");
    Image out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i] - img[q.source(i)];
    return out;
}

Image apply_residual_transpose(const SelectionOperator& q, const Image& img) {
    require_shape(q, img, "apply_residual_transpose");
    Image out = img;
    for (std::size_t i = 0; i < img.size(); ++i) out[q.source(i)] -= img[i];
    return out;
}

Image apply_filter(const Image& img, const QuantileConfig& cfg, const Image& guidance) {
    const auto source = select_all(img, cfg, guidance);
    Image out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[source[i]];
    return out;
}

Image apply_filter(const Image& img, const QuantileConfig& cfg) {
    return apply_filter(img, cfg, resolve_guidance(img, cfg));
}

SelectionOperator build_selection(const Image& img, const QuantileConfig& cfg, const Image& guidance) {
    return SelectionOperator(img.width(), img.height(), select_all(img, cfg, guidance));
}

SelectionOperator build_selection(const Image& img, const QuantileConfig& cfg) {
    return build_selection(img, cfg, resolve_guidance(img, cfg));
}

void write_selection(std::ostream& out, const SelectionOperator& q) {
    out << "QSEL " << q.width() << ' ' << q.height() << '\n';
    for (std::size_t s : q.sources()) {
        auto v = static_cast<std::uint64_t>(s);
        unsigned char bytes[8];
        for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>((v >> (8 * b)) & 0xFF);
        out.write(reinterpret_cast<const char*>(bytes), 8);
    }
    if (!out) throw Error(ErrorKind::Io, "failed writing selection");
}

SelectionOperator read_selection(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::MalformedHeader, "empty selection stream");
    std::istringstream hs(line);
    std::string magic;
    long long w = -1, h = -1;
    hs >> magic >> w >> h;
    if (magic != "QSEL") throw Error(ErrorKind::UnsupportedFormat, "not a QSEL stream");
    if (hs.fail() || w <= 0 || h <= 0) throw Error(ErrorKind::MalformedHeader, "bad QSEL header");
    const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    std::vector<std::size_t> src(n);
    for (std::size_t i = 0; i < n; ++i) {
        unsigned char bytes[8];
        in.read(reinterpret_cast<char*>(bytes), 8);
        if (in.gcount() != 8) throw Error(ErrorKind::TruncatedPayload, "QSEL payload truncated");
        std::uint64_t v = 0;
        for (int b = 7; b >= 0; --b) v = (v << 8) | bytes[b];
        src[i] = static_cast<std::size_t>(v);
    }
    return SelectionOperator(static_cast<std::size_t>(w), static_cast<std::size_t>(h), std::move(src));
}

}  // namespace aquasi
