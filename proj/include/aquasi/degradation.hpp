#pragma once

#include "aquasi/image.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace aquasi {

enum class NoiseKind { Gaussian, SaltPepper, Poisson, Speckle };

/// One synthetic noise model. `amount` is the Gaussian / speckle standard deviation,
/// the salt & pepper density, or the Poisson peak scale, depending on `kind`.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::Gaussian;
    double amount = 0.0;
    std::uint64_t seed = 0;

    static NoiseSpec gaussian(double sigma, std::uint64_t seed) { return {NoiseKind::Gaussian, sigma, seed}; }
    static NoiseSpec salt_pepper(double density, std::uint64_t seed) {
        return {NoiseKind::SaltPepper, density, seed};
    }
    static NoiseSpec poisson(double peak, std::uint64_t seed) { return {NoiseKind::Poisson, peak, seed}; }
    static NoiseSpec speckle(double sigma, std::uint64_t seed) { return {NoiseKind::Speckle, sigma, seed}; }

    void validate() const;
};

inline constexpr double kDefaultPoissonPeak = 255.0;

/// Applies the noise model and clamps to [0,1]. Deterministic for a fixed seed.
/// A Gaussian or speckle sigma of exactly 0 returns the input unchanged.
Image add_noise(const Image& img, const NoiseSpec& spec);

/// Gaussian sigma 0.05 followed by salt & pepper density 0.05 (independent seeds derived
/// from `seed`).
Image add_mixed_noise(const Image& img, std::uint64_t seed);

/// Correlation with an odd-sized stencil under replicate boundary handling.
class ConvOperator {
public:
    /// Row-major kernel of rows x cols entries; both dimensions must be odd.
    ConvOperator(std::size_t rows, std::size_t cols, std::vector<double> kernel);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] double tap(std::size_t r, std::size_t c) const noexcept { return kernel_[r * cols_ + c]; }
    [[nodiscard]] const std::vector<double>& kernel() const noexcept { return kernel_; }

    [[nodiscard]] Image apply(const Image& img) const;
    [[nodiscard]] Image apply_transpose(const Image& img) const;
    /// W^T W img
    [[nodiscard]] Image apply_normal(const Image& img) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> kernel_;
};

inline Image convolve(const ConvOperator& op, const Image& img) { return op.apply(img); }
inline Image convolve_transpose(const ConvOperator& op, const Image& img) { return op.apply_transpose(img); }

/// Normalised truncated Gaussian on a (2r+1)^2 stencil; radius < 0 selects ceil(3 sigma).
ConvOperator gaussian_kernel(double sigma, int radius = -1);

// Kernel text file: "K <rows> <cols>" followed by row-major entries.
ConvOperator read_kernel(std::istream& in);
ConvOperator read_kernel(const std::filesystem::path& path);
void write_kernel(std::ostream& out, const ConvOperator& op);

struct DecimationSpec {
    int factor = 8;
    double blur_sigma = 4.0;

    void validate() const;
};

/// Keeps the top-left sample of every factor x factor block; output is ceil(in / factor).
Image decimate_nearest(const Image& img, int factor);
/// Replicates each sample into a factor x factor block, cropped to width x height.
Image upsample_nearest(const Image& low, int factor, std::size_t width, std::size_t height);

struct DepthDegradation {
    Image low_res;
    Image upsampled;  ///< nearest-neighbour upsampling of low_res to the input grid
};

/// blur -> nearest decimation -> noise -> nearest upsampling. A blur_sigma of 0 skips the
/// blur; a Gaussian noise sigma of 0 skips the noise.
DepthDegradation degrade_depth(const Image& img, const DecimationSpec& spec, const NoiseSpec& noise);

}  // namespace aquasi
