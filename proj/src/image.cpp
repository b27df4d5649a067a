#include "aquasi/image.hpp"

#include "aquasi/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aquasi {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::OutOfRange: return "out-of-range";
        case ErrorKind::MalformedHeader: return "malformed-header";
        case ErrorKind::TruncatedPayload: return "truncated-payload";
        case ErrorKind::UnsupportedFormat: return "unsupported-format";
        case ErrorKind::Io: return "io";
        case ErrorKind::Config: return "config";
        case ErrorKind::Divergence: return "divergence";
        case ErrorKind::NumericalBreakdown: return "numerical-breakdown";
    }
    return "unknown";
}

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

Image::Image(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
        throw Error(ErrorKind::DimensionMismatch,
                    "image data length " + std::to_string(data_.size()) + " != " +
                        std::to_string(width_) + "x" + std::to_string(height_));
    }
}

bool Image::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

void require_same_shape(const Image& a, const Image& b, const char* what) {
    if (!a.same_shape(b)) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
    }
}

}  // namespace

Image& Image::operator+=(const Image& rhs) {
    require_same_shape(*this, rhs, "image add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Image& Image::operator-=(const Image& rhs) {
    require_same_shape(*this, rhs, "image subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Image& Image::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

Image operator+(Image lhs, const Image& rhs) { return lhs += rhs; }
Image operator-(Image lhs, const Image& rhs) { return lhs -= rhs; }
Image operator*(double s, Image img) { return img *= s; }

double dot(const Image& a, const Image& b) {
    require_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Image& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Image& a) {
    double m = 0.0;
    for (double v : a.pixels()) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double a, const Image& x, Image& y) {
    require_same_shape(x, y, "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Image clamp01(Image img) {
    for (double& v : img.pixels()) v = std::clamp(v, 0.0, 1.0);
    return img;
}

MultiChannelImage::MultiChannelImage(std::vector<Image> channels) : channels_(std::move(channels)) {
    if (channels_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "multi-channel image needs at least one channel");
    }
    for (const Image& ch : channels_) require_same_shape(channels_.front(), ch, "channel stack");
}

MultiChannelImage::MultiChannelImage(Image single) { channels_.push_back(std::move(single)); }

std::size_t MultiChannelImage::width() const noexcept {
    return channels_.empty() ? 0 : channels_.front().width();
}

std::size_t MultiChannelImage::height() const noexcept {
    return channels_.empty() ? 0 : channels_.front().height();
}

WindowBounds window_bounds(std::size_t width, std::size_t height, std::size_t x, std::size_t y,
                           int radius) noexcept {
    const auto r = static_cast<std::size_t>(radius);
    return WindowBounds{
        x >= r ? x - r : 0,
        std::min(width - 1, x + r),
        y >= r ? y - r : 0,
        std::min(height - 1, y + r),
    };
}

Window window(const Image& img, std::size_t center, int radius) {
    if (center >= img.size()) {
        throw Error(ErrorKind::OutOfRange, "window centre " + std::to_string(center) +
                                               " outside image of " + std::to_string(img.size()) +
                                               " pixels");
    }
    if (radius < 1) throw Error(ErrorKind::InvalidArgument, "window radius must be >= 1");

    const std::size_t w = img.width();
    const auto b = window_bounds(w, img.height(), center % w, center / w, radius);
    Window win;
    win.center = center;
    win.members.reserve((b.x1 - b.x0 + 1) * (b.y1 - b.y0 + 1));
    for (std::size_t y = b.y0; y <= b.y1; ++y) {
        for (std::size_t x = b.x0; x <= b.x1; ++x) {
            const std::size_t j = y * w + x;
            win.members.push_back({j, img[j]});
        }
    }
    return win;
}

ChannelWeights::ChannelWeights(std::vector<double> m) : m_(std::move(m)) {
    if (m_.empty()) throw Error(ErrorKind::InvalidArgument, "channel weights are empty");
    bool any_positive = false;
    for (double v : m_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(ErrorKind::InvalidArgument, "channel weights must be finite and >= 0");
        }
        any_positive = any_positive || v > 0.0;
    }
    if (!any_positive) throw Error(ErrorKind::InvalidArgument, "all channel weights are zero");
}

ChannelWeights ChannelWeights::rgb_luma() { return ChannelWeights({0.299, 0.587, 0.114}); }

ChannelWeights ChannelWeights::uniform(std::size_t channels) {
    return ChannelWeights(std::vector<double>(channels, 1.0 / static_cast<double>(channels)));
}

Image channel_average(const MultiChannelImage& mc, const ChannelWeights& m) {
    if (mc.channels() != m.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "channel_average: " + std::to_string(m.size()) + " weights for " +
                        std::to_string(mc.channels()) + " channels");
    }
    Image out(mc.width(), mc.height(), 0.0);
    for (std::size_t c = 0; c < mc.channels(); ++c) axpy(m[c], mc[c], out);
    return out;
}

}  // namespace aquasi
