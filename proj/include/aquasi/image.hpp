#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aquasi {

/// Single-channel 2-D intensity field stored row-major in double precision.
/// Nominal range is [0,1]; iterates inside solvers may leave that range.
class Image {
public:
    Image() = default;
    Image(std::size_t width, std::size_t height, double fill = 0.0);
    Image(std::size_t width, std::size_t height, std::vector<double> data);

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] double& operator[](std::size_t i) noexcept { return data_[i]; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return data_[i]; }
    [[nodiscard]] double& at(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }
    [[nodiscard]] double at(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }

    [[nodiscard]] std::span<double> pixels() noexcept { return data_; }
    [[nodiscard]] std::span<const double> pixels() const noexcept { return data_; }

    [[nodiscard]] bool same_shape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    /// True when every sample is finite.
    [[nodiscard]] bool all_finite() const noexcept;

    Image& operator+=(const Image& rhs);
    Image& operator-=(const Image& rhs);
    Image& operator*=(double s) noexcept;

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

Image operator+(Image lhs, const Image& rhs);
Image operator-(Image lhs, const Image& rhs);
Image operator*(double s, Image img);

double dot(const Image& a, const Image& b);
double norm2(const Image& a);
double norm_inf(const Image& a);
/// y += a * x
void axpy(double a, const Image& x, Image& y);
Image clamp01(Image img);

/// Ordered stack of equally-sized channels.
class MultiChannelImage {
public:
    MultiChannelImage() = default;
    explicit MultiChannelImage(std::vector<Image> channels);
    explicit MultiChannelImage(Image single);

    [[nodiscard]] std::size_t channels() const noexcept { return channels_.size(); }
    [[nodiscard]] std::size_t width() const noexcept;
    [[nodiscard]] std::size_t height() const noexcept;

    [[nodiscard]] Image& operator[](std::size_t c) noexcept { return channels_[c]; }
    [[nodiscard]] const Image& operator[](std::size_t c) const noexcept { return channels_[c]; }

    [[nodiscard]] auto begin() noexcept { return channels_.begin(); }
    [[nodiscard]] auto end() noexcept { return channels_.end(); }
    [[nodiscard]] auto begin() const noexcept { return channels_.begin(); }
    [[nodiscard]] auto end() const noexcept { return channels_.end(); }

    friend bool operator==(const MultiChannelImage&, const MultiChannelImage&) = default;

private:
    std::vector<Image> channels_;
};

struct WindowMember {
    std::size_t index;
    double value;
};

/// Square neighbourhood around a centre pixel, clipped at the image border.
struct Window {
    std::size_t center = 0;
    std::vector<WindowMember> members;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
};

/// Members are listed in row-major scan order. Throws OutOfRange for a bad centre.
Window window(const Image& img, std::size_t center, int radius);

/// Inclusive pixel bounds of the clipped window around (x, y).
struct WindowBounds {
    std::size_t x0, x1, y0, y1;
};
WindowBounds window_bounds(std::size_t width, std::size_t height, std::size_t x, std::size_t y,
                           int radius) noexcept;

/// Nonnegative per-channel mixing weights, at least one strictly positive.
class ChannelWeights {
public:
    explicit ChannelWeights(std::vector<double> m);

    /// (0.299, 0.587, 0.114), the usual luma conversion.
    static ChannelWeights rgb_luma();
    /// 1/C for every channel.
    static ChannelWeights uniform(std::size_t channels);

    [[nodiscard]] std::size_t size() const noexcept { return m_.size(); }
    [[nodiscard]] double operator[](std::size_t c) const noexcept { return m_[c]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return m_; }

private:
    std::vector<double> m_;
};

/// Pixelwise sum_c m_c * channel_c.
Image channel_average(const MultiChannelImage& mc, const ChannelWeights& m);

}  // namespace aquasi
