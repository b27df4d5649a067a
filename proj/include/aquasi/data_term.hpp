#pragma once

#include "aquasi/degradation.hpp"
#include "aquasi/image.hpp"

#include <optional>

namespace aquasi {

enum class DataKind { Identity, Masked, LinearOp };

/// Quadratic fidelity ||A f_c - y_c||^2 summed over channels, with A = I (Identity),
/// diag(c) and y = c * g (Masked), or a convolution W (LinearOp).
class DataTerm {
public:
    static DataTerm identity(MultiChannelImage g);
    /// Confidence values must lie in [0,1] and match g in size.
    static DataTerm masked(MultiChannelImage g, Image confidence);
    static DataTerm linear(MultiChannelImage g, ConvOperator w);

    [[nodiscard]] DataKind kind() const noexcept { return kind_; }
    [[nodiscard]] const MultiChannelImage& observation() const noexcept { return g_; }
    [[nodiscard]] std::size_t channels() const noexcept { return g_.channels(); }

    /// ||A f - y_c||^2
    [[nodiscard]] double value(const Image& f, std::size_t c) const;
    /// 2 A^T (A f - y_c)
    [[nodiscard]] Image gradient(const Image& f, std::size_t c) const;
    /// A^T A f
    [[nodiscard]] Image apply_normal_operator(const Image& f) const;
    /// A^T y_c
    [[nodiscard]] Image adjoint_observation(std::size_t c) const;

private:
    DataTerm(DataKind kind, MultiChannelImage g) : kind_(kind), g_(std::move(g)) {}

    DataKind kind_;
    MultiChannelImage g_;
    std::optional<Image> confidence_;
    std::optional<ConvOperator> w_;
};

}  // namespace aquasi
