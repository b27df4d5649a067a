#pragma once

#include "aquasi/degradation.hpp"
#include "aquasi/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace aquasi::cli {

enum class Task { Denoise, Deblur, Upsample, Degrade, ResidualHist, Compare };

std::string_view to_string(Task task) noexcept;
Task parse_task(std::string_view name);

/// Which synthetic degradation `degrade` applies.
enum class Pipeline { Noise, Depth };

/// Every knob of a run. Settable from a flat "key = value" file or from
/// command-line flags; `keys()` lists the recognised names.
struct RunConfig {
    Task task = Task::Denoise;

    std::string input;
    std::string guidance;
    std::string output;
    std::string trace;
    std::string kernel;
    std::string reference;
    std::string low_res_output;

    SolverConfig solver;
    bool multichannel = false;
    std::string channel_weights = "uniform";  ///< uniform | luma

    std::string noise = "gaussian";  ///< gaussian | salt-pepper | poisson | speckle | mixed
    double noise_amount = 0.1;
    std::uint64_t seed = 0;
    Pipeline pipeline = Pipeline::Noise;
    DecimationSpec decimation;

    std::size_t bins = 255;
    double bme_delta = 0.01;
    double red_lambda = 0.05;
    int pnm_maxval = 255;

    /// Defaults for a task: the published solver values, plus the per-task
    /// adjustments (upsampling prior, uniform weights for the residual study).
    static RunConfig defaults(Task task);

    static const std::vector<std::string>& keys();

    /// Throws Error(Config) for an unknown key or an unparsable value.
    void set(std::string_view key, std::string_view value);
    [[nodiscard]] std::string get(std::string_view key) const;

    /// Reads "key = value" lines; '#' starts a comment, blank lines are skipped.
    void load(std::istream& in, std::string_view origin = "<stream>");
    void load(const std::filesystem::path& path);

    void print(std::ostream& out) const;

    [[nodiscard]] NoiseSpec noise_spec() const;
    [[nodiscard]] ChannelWeights weights_for(std::size_t channels) const;
    void validate() const;
};

}  // namespace aquasi::cli
