#include "aquasi/cli/commands.hpp"

#include "aquasi/degradation.hpp"
#include "aquasi/error.hpp"
#include "aquasi/image_io.hpp"
#include "aquasi/metrics.hpp"
#include "aquasi/solvers.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

namespace aquasi::cli {

namespace fs = std::filesystem;

namespace {

const std::string& require(const std::string& value, std::string_view key) {
    if (value.empty()) throw Error(ErrorKind::Config, "missing required '" + std::string(key) + "'");
    return value;
}

MultiChannelImage read_input(const RunConfig& cfg) { return io::read_image(require(cfg.input, "input")); }

void write_output(const RunConfig& cfg, const fs::path& path, MultiChannelImage img) {
    for (Image& ch : img) ch = clamp01(ch);
    io::write_image(path, img, io::Format::Auto, cfg.pnm_maxval);
}

std::ofstream open_text(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    return out;
}

void write_trace(const fs::path& path, const EnergyTrace& trace) {
    std::ofstream out = open_text(path);
    write_trace_csv(out, trace);
}

// Gray guidance for the quantile weights: colour images are averaged with the
// configured channel weights.
Image load_guidance(const RunConfig& cfg) {
    const MultiChannelImage z = io::read_image(cfg.guidance);
    return z.channels() == 1 ? z[0] : channel_average(z, cfg.weights_for(z.channels()));
}

SolverConfig solver_with_guidance(const RunConfig& cfg) {
    SolverConfig s = cfg.solver;
    if (!cfg.guidance.empty()) {
        s.quantile.guidance = GuidanceMode::Static;
        s.quantile.static_guidance = load_guidance(cfg);
    }
    return s;
}

void log_result(std::ostream& log, std::string_view what, const SolveResult& r) {
    log << what << ": " << r.stats.iterations << " iterations, " << r.stats.linearizations
        << " linearizations, energy " << r.trace.initial().total << " -> " << r.trace.final().total << '\n';
}

void finish_restoration(const RunConfig& cfg, const SolveResult& r, std::ostream& log, std::string_view what) {
    write_output(cfg, require(cfg.output, "output"), r.f);
    if (!cfg.trace.empty()) write_trace(cfg.trace, r.trace);
    log_result(log, what, r);
}

SolveResult solve(const DataTerm& data, const SolverConfig& s, const RunConfig& cfg) {
    if (cfg.multichannel) return solve_multichannel(data, s, cfg.weights_for(data.channels()));
    return solve_admm(data, s);
}

// Metrics over all channels at once.
Image flatten(const MultiChannelImage& img) {
    std::vector<double> all;
    all.reserve(img.width() * img.height() * img.channels());
    for (const Image& ch : img) all.insert(all.end(), ch.pixels().begin(), ch.pixels().end());
    return Image(img.width(), img.height() * img.channels(), std::move(all));
}

}  // namespace

void cmd_denoise(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const MultiChannelImage g = read_input(cfg);
    const SolverConfig s = solver_with_guidance(cfg);
    finish_restoration(cfg, solve(DataTerm::identity(g), s, cfg), log, "denoise");
}

void cmd_deblur(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const MultiChannelImage g = read_input(cfg);
    ConvOperator w = read_kernel(fs::path(require(cfg.kernel, "kernel")));
    const SolverConfig s = solver_with_guidance(cfg);
    finish_restoration(cfg, solve(DataTerm::linear(g, std::move(w)), s, cfg), log, "deblur");
}

void cmd_upsample(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    require(cfg.guidance, "guidance");
    const MultiChannelImage depth = read_input(cfg);
    if (depth.channels() != 1) throw Error(ErrorKind::InvalidArgument, "upsample expects a single-channel depth map");
    SolverConfig s = cfg.solver;
    const Image z = load_guidance(cfg);
    if (s.quantile.guidance == GuidanceMode::Static) s.quantile.static_guidance = z;

    Image g = depth[0];
    if (g.width() != z.width() || g.height() != z.height()) {
        const auto f = static_cast<std::size_t>(cfg.decimation.factor);
        if (g.width() != (z.width() + f - 1) / f || g.height() != (z.height() + f - 1) / f) {
            throw Error(ErrorKind::DimensionMismatch,
                        "depth map is neither guidance-sized nor the guidance size divided by factor " +
                            std::to_string(f));
        }
        g = upsample_nearest(g, cfg.decimation.factor, z.width(), z.height());
    }
    const Image confidence(g.width(), g.height(), 1.0);
    const SolveResult r = solve_admm(DataTerm::masked(MultiChannelImage(std::move(g)), confidence), s);
    finish_restoration(cfg, r, log, "upsample");
}

void cmd_degrade(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const MultiChannelImage img = read_input(cfg);
    const bool mixed = cfg.noise == "mixed";
    std::vector<Image> out;
    std::vector<Image> low;
    for (std::size_t c = 0; c < img.channels(); ++c) {
        const std::uint64_t seed = cfg.seed + c;
        if (cfg.pipeline == Pipeline::Depth) {
            if (mixed) throw Error(ErrorKind::Config, "the depth pipeline takes a single noise model");
            NoiseSpec spec = cfg.noise_spec();
            spec.seed = seed;
            DepthDegradation d = degrade_depth(img[c], cfg.decimation, spec);
            out.push_back(std::move(d.upsampled));
            low.push_back(std::move(d.low_res));
        } else if (mixed) {
            out.push_back(add_mixed_noise(img[c], seed));
        } else {
            NoiseSpec spec = cfg.noise_spec();
            spec.seed = seed;
            out.push_back(add_noise(img[c], spec));
        }
    }
    write_output(cfg, require(cfg.output, "output"), MultiChannelImage(std::move(out)));
    if (!low.empty() && !cfg.low_res_output.empty()) {
        write_output(cfg, cfg.low_res_output, MultiChannelImage(std::move(low)));
    }
    log << "degrade: " << cfg.noise << " " << cfg.noise_amount << " seed " << cfg.seed << '\n';
}

void cmd_residual_hist(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const MultiChannelImage img = read_input(cfg);
    const Image f = img.channels() == 1 ? img[0] : channel_average(img, cfg.weights_for(img.channels()));
    QuantileConfig q = cfg.solver.quantile;
    if (q.guidance == GuidanceMode::Static) q.static_guidance = load_guidance(cfg);
    const Histogram h = residual_histogram(f, q, cfg.bins);
    std::ofstream out = open_text(require(cfg.output, "output"));
    write_histogram_csv(out, h);
    log << "residual-hist: mean " << h.mean() << " std " << h.stddev() << '\n';
}

void cmd_compare(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const MultiChannelImage g = read_input(cfg);
    const MultiChannelImage ref = io::read_image(require(cfg.reference, "reference"));
    if (ref.channels() != g.channels() || ref.width() != g.width() || ref.height() != g.height()) {
        throw Error(ErrorKind::DimensionMismatch, "reference does not match the input");
    }
    const fs::path dir = require(cfg.output, "output");
    fs::create_directories(dir);
    const DataTerm data = DataTerm::identity(g);
    const SolverConfig base = solver_with_guidance(cfg);

    SolverConfig tv = base;
    tv.weights.lambda = 0.0;
    SolverConfig red = base;
    red.prior = Prior::RED;
    red.weights.lambda = cfg.red_lambda;
    red.weights.mu = 0.0;

    struct Run {
        std::string name;
        SolveResult result;
    };
    std::vector<Run> runs;
    runs.push_back({"aquasi", solve(data, base, cfg)});
    runs.push_back({"tv", solve_admm(data, tv)});
    runs.push_back({"red", solve_gd(data, red)});

    std::ofstream csv = open_text(dir / "metrics.csv");
    csv << "method,psnr,rmse,bme\n";
    csv.precision(10);
    const Image flat_ref = flatten(ref);
    for (const Run& run : runs) {
        MultiChannelImage clamped = run.result.f;
        for (Image& ch : clamped) ch = clamp01(ch);
        const Image flat = flatten(clamped);
        csv << run.name << ',' << psnr(flat, flat_ref) << ',' << rmse(flat, flat_ref) << ','
            << bme(flat, flat_ref, cfg.bme_delta) << '\n';
        write_output(cfg, dir / (run.name + ".f32"), run.result.f);
        if (!cfg.trace.empty()) write_trace(cfg.trace + "." + run.name + ".csv", run.result.trace);
        log_result(log, run.name, run.result);
    }
}

void run_task(const RunConfig& cfg, std::ostream& log) {
    switch (cfg.task) {
        case Task::Denoise: return cmd_denoise(cfg, log);
        case Task::Deblur: return cmd_deblur(cfg, log);
        case Task::Upsample: return cmd_upsample(cfg, log);
        case Task::Degrade: return cmd_degrade(cfg, log);
        case Task::ResidualHist: return cmd_residual_hist(cfg, log);
        case Task::Compare: return cmd_compare(cfg, log);
    }
}

namespace {

struct Flags {
    std::optional<std::string> input, guidance, output, config, trace, kernel, reference, low_res_output;
    std::optional<std::uint64_t> seed;
    bool multichannel = false;
    bool print_config = false;
    std::vector<std::string> sets;
};

void add_common(CLI::App& sub, Flags& f) {
    sub.add_option("--input,-i", f.input, "input image (F32 or PNM)");
    sub.add_option("--guidance,-g", f.guidance, "guidance image; enables static guidance");
    sub.add_option("--output,-o", f.output, "output image, CSV or directory");
    sub.add_option("--config,-c", f.config, "flat 'key = value' configuration file");
    sub.add_option("--seed", f.seed, "random seed");
    sub.add_option("--trace", f.trace, "energy trace CSV path");
    sub.add_flag("--multichannel", f.multichannel, "share one linearization across channels");
    sub.add_flag("--print-config", f.print_config, "print the effective configuration and exit");
    sub.add_option("--set,-s", f.sets, "override any configuration key: key=value")->take_all();
}

RunConfig assemble(Task task, const Flags& f) {
    RunConfig cfg = RunConfig::defaults(task);
    if (f.config) cfg.load(fs::path(*f.config));
    cfg.task = task;
    for (const std::string& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Config, "--set expects key=value, got '" + kv + "'");
        cfg.set(std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
    }
    if (f.input) cfg.input = *f.input;
    if (f.guidance) cfg.guidance = *f.guidance;
    if (f.output) cfg.output = *f.output;
    if (f.trace) cfg.trace = *f.trace;
    if (f.kernel) cfg.kernel = *f.kernel;
    if (f.reference) cfg.reference = *f.reference;
    if (f.low_res_output) cfg.low_res_output = *f.low_res_output;
    if (f.seed) cfg.seed = *f.seed;
    if (f.multichannel) cfg.multichannel = true;
    return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app("Quantile sparse image prior: restoration, degradation and evaluation", "aquasi");
    app.require_subcommand(1);
    Flags flags;
    struct Sub {
        Task task;
        CLI::App* app;
    };
    std::vector<Sub> subs;
    const auto add = [&](Task task, const std::string& help) {
        CLI::App* sub = app.add_subcommand(std::string(to_string(task)), help);
        add_common(*sub, flags);
        subs.push_back({task, sub});
        return sub;
    };
    add(Task::Denoise, "TV + AQuaSI denoising (ADMM)");
    add(Task::Deblur, "non-blind deblurring with a kernel file")
        ->add_option("--kernel,-k", flags.kernel, "kernel file ('K rows cols' + entries)");
    add(Task::Upsample, "depth upsampling guided by a colour image");
    add(Task::Degrade, "synthesize noisy or decimated inputs")
        ->add_option("--low-res-output", flags.low_res_output, "also write the decimated map (depth pipeline)");
    add(Task::ResidualHist, "histogram of the quantile residual");
    add(Task::Compare, "AQuaSI vs TV vs RED on one input")
        ->add_option("--reference,-r", flags.reference, "clean reference image");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << to_string(ErrorKind::InvalidArgument) << ": " << e.what() << '\n';
        return 2;
    }

    try {
        for (const Sub& s : subs) {
            if (!s.app->parsed()) continue;
            const RunConfig cfg = assemble(s.task, flags);
            if (flags.print_config) {
                cfg.print(out);
                return 0;
            }
            run_task(cfg, out);
        }
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << to_string(ErrorKind::Io) << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace aquasi::cli
