#pragma once

#include "aquasi/image.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace aquasi {

/// Where the per-pixel similarity weights come from.
///  - Uniform: every window member weighs 1 (classic quantile filter).
///  - Static: a fixed external guidance image.
///  - DynamicInput: the observation g, fixed for the whole solve.
///  - DynamicIterate: the current iterate f, refreshed with every rebuild of Q.
enum class GuidanceMode { Uniform, Static, DynamicInput, DynamicIterate };

struct QuantileConfig {
    double p = 0.5;
    int radius = 2;
    double sigma_w = 0.1;
    GuidanceMode guidance = GuidanceMode::DynamicIterate;
    /// Required when guidance == Static.
    std::optional<Image> static_guidance;

    /// Throws InvalidArgument on p outside [0,1], radius < 1, sigma_w <= 0 or a
    /// Static mode without a guidance image.
    void validate() const;
};

/// Gaussian similarity exp(-(zi - zj)^2 / (2 sigma^2)).
double guidance_weight(double zi, double zj, double sigma_w) noexcept;

/// Floor applied to computed weights so the cumulative weight is strictly increasing.
inline constexpr double kMinWeight = 1e-300;

/// Relative slack on the cumulative-weight threshold. Weight sets that agree to within
/// this tolerance select the same order statistic.
inline constexpr double kQuantileTieTolerance = 1e-11;

struct QuantileSelection {
    double value;
    std::size_t index;  ///< position in the input list
};

/// Weighted p-quantile: sorts (value, original position) ascending and returns the first
/// sorted element whose cumulative weight reaches p times the total weight.
QuantileSelection weighted_quantile(std::span<const double> values, std::span<const double> weights,
                                    double p);

/// One-hot pseudo-linear form of the quantile filter: row i selects pixel source(i).
class SelectionOperator {
public:
    SelectionOperator() = default;
    SelectionOperator(std::size_t width, std::size_t height, std::vector<std::size_t> source);

    static SelectionOperator identity(std::size_t width, std::size_t height);

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t size() const noexcept { return source_.size(); }
    [[nodiscard]] std::size_t source(std::size_t i) const noexcept { return source_[i]; }
    [[nodiscard]] std::span<const std::size_t> sources() const noexcept { return source_; }

    friend bool operator==(const SelectionOperator&, const SelectionOperator&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::size_t> source_;
};

/// out[i] = img[source(i)]
Image apply_selection(const SelectionOperator& q, const Image& img);
/// out[j] = sum over i with source(i) == j of img[i]
Image apply_selection_transpose(const SelectionOperator& q, const Image& img);
/// (I - Q) img
Image apply_residual(const SelectionOperator& q, const Image& img);
/// (I - Q)^T img
Image apply_residual_transpose(const SelectionOperator& q, const Image& img);

/// Weighted quantile filter. `guidance` supplies z for every non-uniform mode and must
/// match `img` in shape; it is ignored in Uniform mode.
Image apply_filter(const Image& img, const QuantileConfig& cfg, const Image& guidance);
/// Resolves the guidance from the config: the static image, or `img` itself for both
/// dynamic modes.
Image apply_filter(const Image& img, const QuantileConfig& cfg);

SelectionOperator build_selection(const Image& img, const QuantileConfig& cfg, const Image& guidance);
SelectionOperator build_selection(const Image& img, const QuantileConfig& cfg);

// Debug dump: "QSEL <w> <h>\n" followed by little-endian uint64 source indices.
void write_selection(std::ostream& out, const SelectionOperator& q);
SelectionOperator read_selection(std::istream& in);

}  // namespace aquasi
