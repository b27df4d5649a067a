#include "aquasi/solvers.hpp"

#include "aquasi/cg.hpp"
#include "aquasi/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>

namespace aquasi {

void SolverConfig::validate() const {
    weights.validate();
    quantile.validate();
    if (!(alpha > 0.0) || !(beta > 0.0) || !(step_size > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "alpha, beta and step_size must be > 0");
    }
    if (max_iters < 0) throw Error(ErrorKind::InvalidArgument, "max_iters must be >= 0");
    if (q_refresh_period < 1 || cg_iters < 1 || stall_window < 1) {
        throw Error(ErrorKind::InvalidArgument, "q_refresh_period, cg_iters and stall_window must be >= 1");
    }
    if (!(cg_tol > 0.0) || !(rel_energy_tol >= 0.0) || !(divergence_factor > 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "bad solver tolerances");
    }
    if (penalty.enabled && (!(penalty.tau > 1.0) || !(penalty.ratio > 1.0) || !(penalty.max_factor >= 1.0))) {
        throw Error(ErrorKind::InvalidArgument, "penalty tau and ratio must be > 1, max_factor >= 1");
    }
}

void write_trace_csv(std::ostream& out, const EnergyTrace& trace) {
    out << "iter,time_s,data,aquasi,tv,total\n";
    out.precision(17);
    for (const EnergyRecord& r : trace.records) {
        out << r.iter << ',' << r.time_s << ',' << r.data << ',' << r.aquasi << ',' << r.tv << ','
            << r.total << '\n';
    }
}

namespace {

using Clock = std::chrono::steady_clock;

// Builds the selection operators for all channels. In shared mode a single operator is
// built from the weighted channel average and serves every channel.
class Linearizer {
public:
    Linearizer(const DataTerm& data, const QuantileConfig& qcfg, std::optional<ChannelWeights> shared)
        : data_(data), qcfg_(qcfg), shared_(std::move(shared)) {
        if (qcfg_.guidance == GuidanceMode::Static) {
            const Image& z = *qcfg_.static_guidance;
            if (z.width() != data.observation().width() || z.height() != data.observation().height()) {
                throw Error(ErrorKind::DimensionMismatch, "static guidance does not match the observation");
            }
        }
        if (shared_ && shared_->size() != data.channels()) {
            throw Error(ErrorKind::DimensionMismatch, "channel weights do not match the channel count");
        }
        if (shared_ && qcfg_.guidance == GuidanceMode::DynamicInput) {
            input_average_ = channel_average(data.observation(), *shared_);
        }
    }

    [[nodiscard]] bool shared() const noexcept { return shared_.has_value(); }

    [[nodiscard]] double channel_weight(std::size_t c) const noexcept { return shared_ ? (*shared_)[c] : 1.0; }

    [[nodiscard]] std::vector<SelectionOperator> build(const MultiChannelImage& f) const {
        std::vector<SelectionOperator> qs;
        if (shared_) {
            const Image avg = channel_average(f, *shared_);
            qs.push_back(build_selection(avg, qcfg_, guidance(avg, input_average_ ? *input_average_ : avg)));
        } else {
            qs.reserve(f.channels());
            for (std::size_t c = 0; c < f.channels(); ++c) {
                qs.push_back(build_selection(f[c], qcfg_, guidance(f[c], data_.observation()[c])));
            }
        }
        return qs;
    }

    [[nodiscard]] static const SelectionOperator& pick(const std::vector<SelectionOperator>& qs, std::size_t c) {
        return qs.size() == 1 ? qs.front() : qs[c];
    }

private:
    const Image& guidance(const Image& current, const Image& input) const {
        switch (qcfg_.guidance) {
            case GuidanceMode::Static: return *qcfg_.static_guidance;
            case GuidanceMode::DynamicInput: return input;
            case GuidanceMode::Uniform:
            case GuidanceMode::DynamicIterate: break;
        }
        return current;
    }

    const DataTerm& data_;
    const QuantileConfig& qcfg_;
    std::optional<ChannelWeights> shared_;
    std::optional<Image> input_average_;
};

// Energy of the actual (non-linearized) objective at f.
class EnergyMeter {
public:
    EnergyMeter(const DataTerm& data, const SolverConfig& cfg, const Linearizer& lin, Prior prior)
        : data_(data), cfg_(cfg), lin_(lin), prior_(prior), start_(Clock::now()) {}

    EnergyRecord measure(int iter, const MultiChannelImage& f) const {
        EnergyRecord rec{iter, 0.0, 0.0, 0.0, 0.0, 0.0};
        for (std::size_t c = 0; c < f.channels(); ++c) rec.data += data_.value(f[c], c);
        const double lambda = cfg_.weights.lambda;
        if (lambda > 0.0) {
            const auto qs = lin_.build(f);
            for (std::size_t c = 0; c < f.channels(); ++c) {
                const SelectionOperator& q = Linearizer::pick(qs, c);
                rec.aquasi += prior_ == Prior::RED ? lambda * red_value(f[c], q)
                                                   : lambda * lin_.channel_weight(c) * aquasi_value(f[c], q);
            }
        }
        if (cfg_.weights.mu > 0.0) {
            for (const Image& ch : f) rec.tv += cfg_.weights.mu * tv_value(ch);
        }
        rec.total = rec.data + rec.aquasi + rec.tv;
        rec.time_s = std::chrono::duration<double>(Clock::now() - start_).count();
        return rec;
    }

private:
    const DataTerm& data_;
    const SolverConfig& cfg_;
    const Linearizer& lin_;
    Prior prior_;
    Clock::time_point start_;
};

void guard_divergence(const EnergyTrace& trace, const SolverConfig& cfg) {
    const EnergyRecord& last = trace.final();
    const double limit = cfg.divergence_factor * std::max(std::abs(trace.initial().total), 1.0);
    if (!std::isfinite(last.total) || last.total > limit) {
        throw Error(ErrorKind::Divergence, "energy " + std::to_string(last.total) + " at iteration " +
                                               std::to_string(last.iter) + " exceeds " +
                                               std::to_string(limit) + "; reduce the step size or penalties");
    }
}

bool stalled(const EnergyTrace& trace, const SolverConfig& cfg) {
    const auto n = trace.records.size();
    const auto window = static_cast<std::size_t>(cfg.stall_window);
    if (n <= window) return false;
    const double now = trace.records[n - 1].total;
    const double before = trace.records[n - 1 - window].total;
    return std::abs(before - now) <= cfg.rel_energy_tol * std::max(std::abs(before), 1e-300);
}

bool refresh_due(int iter, int period) { return iter > 1 && (iter - 1) % period == 0; }

SolveResult run_admm(const DataTerm& data, const SolverConfig& cfg, std::optional<ChannelWeights> shared) {
    cfg.validate();
    const Linearizer lin(data, cfg.quantile, std::move(shared));
    const EnergyMeter meter(data, cfg, lin, Prior::AQuaSI);
    const std::size_t channels = data.channels();
    const double lambda = cfg.weights.lambda;
    const double mu = cfg.weights.mu;
    const bool use_aquasi = lambda > 0.0;
    const bool use_tv = mu > 0.0;

    SolveResult res;
    res.f = data.observation();
    MultiChannelImage& f = res.f;
    res.trace.records.push_back(meter.measure(0, f));

    if (!use_aquasi && !use_tv) {
        // Pure least squares: one normal-equation solve.
        for (std::size_t c = 0; c < channels; ++c) {
            f[c] = cg_solve([&](const Image& x) { return data.apply_normal_operator(x); },
                            data.adjoint_observation(c), f[c], cfg.cg_iters, cfg.cg_tol)
                       .x;
        }
        res.stats.iterations = 1;
        res.stats.converged = true;
        res.stats.final_alpha = cfg.alpha;
        res.trace.records.push_back(meter.measure(1, f));
        return res;
    }

    double alpha = cfg.alpha;
    const double alpha_max = cfg.alpha * cfg.penalty.max_factor;
    const double alpha_min = cfg.alpha / cfg.penalty.max_factor;
    const double beta = cfg.beta;
    std::vector<SelectionOperator> qs;
    std::vector<Image> u(channels), bu(channels), dx(channels), dy(channels), bx(channels), by(channels);
    if (use_aquasi) {
        qs = lin.build(f);
        res.stats.linearizations += static_cast<int>(qs.size());
    }
    for (std::size_t c = 0; c < channels; ++c) {
        const Image zero(f.width(), f.height(), 0.0);
        if (use_aquasi) {
            u[c] = apply_residual(Linearizer::pick(qs, c), f[c]);
            bu[c] = zero;
        }
        if (use_tv) {
            dx[c] = diff_x(f[c]);
            dy[c] = diff_y(f[c]);
            bx[c] = zero;
            by[c] = zero;
        }
    }

    const int max_iters = cfg.max_iters > 0 ? cfg.max_iters : kAdmmDefaultIters;
    for (int it = 1; it <= max_iters; ++it) {
        if (use_aquasi && refresh_due(it, cfg.q_refresh_period)) {
            qs = lin.build(f);
            res.stats.linearizations += static_cast<int>(qs.size());
        }

        // f-step: [2 A^T A + alpha (I-Q)^T (I-Q) + beta D^T D] f = rhs
        for (std::size_t c = 0; c < channels; ++c) {
            const SelectionOperator* q = use_aquasi ? &Linearizer::pick(qs, c) : nullptr;
            const auto normal = [&](const Image& x) {
                Image y = data.apply_normal_operator(x);
                y *= 2.0;
                if (q) axpy(alpha, apply_residual_transpose(*q, apply_residual(*q, x)), y);
                if (use_tv) {
                    axpy(beta, diff_x_transpose(diff_x(x)), y);
                    axpy(beta, diff_y_transpose(diff_y(x)), y);
                }
                return y;
            };
            Image rhs = data.adjoint_observation(c);
            rhs *= 2.0;
            if (q) axpy(alpha, apply_residual_transpose(*q, u[c] - bu[c]), rhs);
            if (use_tv) {
                axpy(beta, diff_x_transpose(dx[c] - bx[c]), rhs);
                axpy(beta, diff_y_transpose(dy[c] - by[c]), rhs);
            }
            f[c] = cg_solve(normal, rhs, f[c], cfg.cg_iters, cfg.cg_tol).x;
        }

        // u-step, Bregman update and residual balancing for the quantile split.
        if (use_aquasi) {
            double primal_sq = 0.0;
            double dual_sq = 0.0;
            for (std::size_t c = 0; c < channels; ++c) {
                const SelectionOperator& q = Linearizer::pick(qs, c);
                const Image r = apply_residual(q, f[c]);
                const Image u_prev = u[c];
                u[c] = shrink(r + bu[c], lambda * lin.channel_weight(c) / alpha);
                const Image gap = r - u[c];
                bu[c] += gap;
                primal_sq += dot(gap, gap);
                const Image du = apply_residual_transpose(q, u[c] - u_prev);
                dual_sq += dot(du, du);
            }
            const double primal = std::sqrt(primal_sq);
            const double dual = alpha * std::sqrt(dual_sq);
            res.stats.primal_residual = primal;
            if (cfg.penalty.enabled) {
                if (primal > cfg.penalty.ratio * dual && alpha * cfg.penalty.tau <= alpha_max) {
                    alpha *= cfg.penalty.tau;
                    for (Image& b : bu) b *= 1.0 / cfg.penalty.tau;
                } else if (dual > cfg.penalty.ratio * primal && alpha / cfg.penalty.tau >= alpha_min) {
                    alpha /= cfg.penalty.tau;
                    for (Image& b : bu) b *= cfg.penalty.tau;
                }
            }
        }

        if (use_tv) {
            const double gamma = mu / beta;
            for (std::size_t c = 0; c < channels; ++c) {
                const Image gx = diff_x(f[c]);
                const Image gy = diff_y(f[c]);
                dx[c] = shrink(gx + bx[c], gamma);
                dy[c] = shrink(gy + by[c], gamma);
                bx[c] += gx - dx[c];
                by[c] += gy - dy[c];
            }
        }

        res.stats.iterations = it;
        res.trace.records.push_back(meter.measure(it, f));
        guard_divergence(res.trace, cfg);
        if (stalled(res.trace, cfg)) {
            res.stats.converged = true;
            break;
        }
    }
    res.stats.final_alpha = alpha;
    return res;
}

}  // namespace

SolveResult solve_gd(const DataTerm& data, const SolverConfig& cfg) {
    cfg.validate();
    const Linearizer lin(data, cfg.quantile, std::nullopt);
    const EnergyMeter meter(data, cfg, lin, cfg.prior);
    const double lambda = cfg.weights.lambda;
    const double mu = cfg.weights.mu;
    const double eps = cfg.weights.epsilon;

    SolveResult res;
    res.f = data.observation();
    MultiChannelImage& f = res.f;
    res.trace.records.push_back(meter.measure(0, f));

    std::vector<SelectionOperator> qs;
    if (lambda > 0.0) {
        qs = lin.build(f);
        res.stats.linearizations += static_cast<int>(qs.size());
    }

    const int max_iters = cfg.max_iters > 0 ? cfg.max_iters : kGdDefaultIters;
    for (int it = 1; it <= max_iters; ++it) {
        if (lambda > 0.0 && refresh_due(it, cfg.q_refresh_period)) {
            qs = lin.build(f);
            res.stats.linearizations += static_cast<int>(qs.size());
        }
        for (std::size_t c = 0; c < f.channels(); ++c) {
            Image grad = data.gradient(f[c], c);
            if (lambda > 0.0) {
                const SelectionOperator& q = Linearizer::pick(qs, c);
                axpy(lambda, cfg.prior == Prior::RED ? red_gradient(f[c], q) : aquasi_gradient(f[c], q, eps),
                     grad);
            }
            if (mu > 0.0) axpy(mu, tv_gradient(f[c], eps), grad);
            axpy(-cfg.step_size, grad, f[c]);
        }
        res.stats.iterations = it;
        res.trace.records.push_back(meter.measure(it, f));
        guard_divergence(res.trace, cfg);
        if (stalled(res.trace, cfg)) {
            res.stats.converged = true;
            break;
        }
    }
    res.stats.final_alpha = cfg.alpha;
    return res;
}

SolveResult solve_admm(const DataTerm& data, const SolverConfig& cfg) { return run_admm(data, cfg, std::nullopt); }

SolveResult solve_multichannel(const DataTerm& data, const SolverConfig& cfg, const ChannelWeights& m) {
    if (data.channels() < 2) {
        throw Error(ErrorKind::InvalidArgument, "multi-channel solve needs at least two channels");
    }
    return run_admm(data, cfg, m);
}

}  // namespace aquasi
