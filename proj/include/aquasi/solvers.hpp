#pragma once

#include "aquasi/data_term.hpp"
#include "aquasi/image.hpp"
#include "aquasi/quantile_filter.hpp"
#include "aquasi/regularizers.hpp"

#include <iosfwd>
#include <vector>

namespace aquasi {

/// Residual-balancing rule for the ADMM penalty alpha: grow by tau when the primal
/// residual exceeds ratio times the dual residual, shrink by tau in the opposite case.
/// alpha stays within [alpha0 / max_factor, alpha0 * max_factor].
struct PenaltySchedule {
    bool enabled = true;
    double tau = 2.0;
    double ratio = 10.0;
    double max_factor = 1e4;
};

inline constexpr int kAdmmDefaultIters = 100;
inline constexpr int kGdDefaultIters = 500;

/// Which prior the gradient-descent solver pairs with the data term.
enum class Prior { AQuaSI, RED };

struct SolverConfig {
    RegWeights weights;          ///< lambda, mu (TV), epsilon
    double alpha = 1100.0;       ///< AQuaSI splitting penalty
    double beta = 7.0;           ///< TV splitting penalty
    double step_size = 0.005;    ///< gradient-descent step
    int max_iters = 0;           ///< 0 picks the solver default below
    int q_refresh_period = 1;
    int cg_iters = 20;
    double cg_tol = 1e-6;
    PenaltySchedule penalty;
    QuantileConfig quantile;
    Prior prior = Prior::AQuaSI;  ///< gradient descent only
    double rel_energy_tol = 1e-6; ///< stop when the energy moved less than this over `stall_window` iterations
    int stall_window = 5;
    double divergence_factor = 1e6;

    void validate() const;
};

struct EnergyRecord {
    int iter;
    double time_s;
    double data;
    double aquasi;  ///< lambda-weighted prior term (the RED energy for Prior::RED)
    double tv;      ///< mu-weighted TV term
    double total;
};

struct EnergyTrace {
    std::vector<EnergyRecord> records;

    [[nodiscard]] bool empty() const noexcept { return records.empty(); }
    [[nodiscard]] const EnergyRecord& initial() const { return records.front(); }
    [[nodiscard]] const EnergyRecord& final() const { return records.back(); }
};

/// "iter,time_s,data,aquasi,tv,total"; iteration 0 is the initial estimate.
void write_trace_csv(std::ostream& out, const EnergyTrace& trace);

struct SolverStats {
    int iterations = 0;
    /// Number of selection operators built for the linearization (energy evaluation excluded).
    int linearizations = 0;
    bool converged = false;
    double final_alpha = 0.0;
    /// ||(I - Q) f - u||_2 over all channels at exit (ADMM only).
    double primal_residual = 0.0;
};

struct SolveResult {
    MultiChannelImage f;
    EnergyTrace trace;
    SolverStats stats;
};

/// Steepest descent with a fixed step on data + lambda * prior + mu * TV, each channel with
/// its own linearization. Q is rebuilt every q_refresh_period iterations.
SolveResult solve_gd(const DataTerm& data, const SolverConfig& cfg);

/// ADMM with the quantile residual split (and a TV split when mu > 0); every channel is
/// linearized separately.
SolveResult solve_admm(const DataTerm& data, const SolverConfig& cfg);

/// ADMM on all channels with a single linearization built from the weighted channel
/// average. The prior is lambda * sum_c m_c ||f_c - Q f_c||_1.
SolveResult solve_multichannel(const DataTerm& data, const SolverConfig& cfg, const ChannelWeights& m);

}  // namespace aquasi
