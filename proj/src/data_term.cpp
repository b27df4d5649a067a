#include "aquasi/data_term.hpp"

#include "aquasi/error.hpp"

namespace aquasi {

DataTerm DataTerm::identity(MultiChannelImage g) { return DataTerm(DataKind::Identity, std::move(g)); }

DataTerm DataTerm::masked(MultiChannelImage g, Image confidence) {
    if (confidence.width() != g.width() || confidence.height() != g.height()) {
        throw Error(ErrorKind::DimensionMismatch, "confidence map does not match the observation");
    }
    for (double v : confidence.pixels()) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidArgument, "confidence values must lie in [0,1]");
    }
    DataTerm t(DataKind::Masked, std::move(g));
    t.confidence_ = std::move(confidence);
    return t;
}

DataTerm DataTerm::linear(MultiChannelImage g, ConvOperator w) {
    DataTerm t(DataKind::LinearOp, std::move(g));
    t.w_ = std::move(w);
    return t;
}

namespace {

Image hadamard(const Image& a, const Image& b) {
    Image out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return out;
}

}  // namespace

double DataTerm::value(const Image& f, std::size_t c) const {
    Image r = f - g_[c];
    switch (kind_) {
        case DataKind::Identity: break;
        case DataKind::Masked: r = hadamard(r, *confidence_); break;
        case DataKind::LinearOp: r = w_->apply(f) - g_[c]; break;
    }
    return dot(r, r);
}

Image DataTerm::gradient(const Image& f, std::size_t c) const {
    Image grad = apply_normal_operator(f) - adjoint_observation(c);
    grad *= 2.0;
    return grad;
}

Image DataTerm::apply_normal_operator(const Image& f) const {
    switch (kind_) {
        case DataKind::Identity: return f;
        case DataKind::Masked: return hadamard(hadamard(f, *confidence_), *confidence_);
        case DataKind::LinearOp: return w_->apply_normal(f);
    }
    return f;
}

Image DataTerm::adjoint_observation(std::size_t c) const {
    switch (kind_) {
        case DataKind::Identity: return g_[c];
        case DataKind::Masked: return hadamard(hadamard(g_[c], *confidence_), *confidence_);
        case DataKind::LinearOp: return w_->apply_transpose(g_[c]);
    }
    return g_[c];
}

}  // namespace aquasi
