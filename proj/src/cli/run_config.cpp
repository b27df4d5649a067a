#include "aquasi/cli/run_config.hpp"

#include "aquasi/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

namespace aquasi::cli {

namespace {

constexpr std::array<std::pair<Task, std::string_view>, 6> kTaskNames{{
    {Task::Denoise, "denoise"},
    {Task::Deblur, "deblur"},
    {Task::Upsample, "upsample"},
    {Task::Degrade, "degrade"},
    {Task::ResidualHist, "residual-hist"},
    {Task::Compare, "compare"},
}};

constexpr std::array<std::pair<GuidanceMode, std::string_view>, 4> kGuidanceNames{{
    {GuidanceMode::Uniform, "uniform"},
    {GuidanceMode::Static, "static"},
    {GuidanceMode::DynamicInput, "dynamic-input"},
    {GuidanceMode::DynamicIterate, "dynamic-iterate"},
}};

constexpr std::array<std::pair<Pipeline, std::string_view>, 2> kPipelineNames{{
    {Pipeline::Noise, "noise"},
    {Pipeline::Depth, "depth"},
}};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw Error(ErrorKind::Config,
                "key '" + std::string(key) + "': cannot parse '" + std::string(value) + "' as " + std::string(expected));
}

template <typename E, std::size_t N>
E parse_enum(const std::array<std::pair<E, std::string_view>, N>& names, std::string_view key, std::string_view value) {
    for (const auto& [e, name] : names) {
        if (name == value) return e;
    }
    std::string expected = "one of";
    for (const auto& [e, name] : names) expected += " " + std::string(name);
    bad_value(key, value, expected);
}

template <typename E, std::size_t N>
std::string_view enum_name(const std::array<std::pair<E, std::string_view>, N>& names, E e) {
    for (const auto& [v, name] : names) {
        if (v == e) return name;
    }
    return "?";
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value, "a number");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    bad_value(key, value, "a boolean");
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc() ? std::string(buf.data(), ptr) : std::string("nan");
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string key;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <typename Access>
Entry real(std::string key, Access access) {
    return {key,
            [key, access](RunConfig& c, std::string_view v) { access(c) = parse_number<double>(key, v); },
            [access](const RunConfig& c) { return format_double(access(c)); }};
}

template <typename Int, typename Access>
Entry integer(std::string key, Access access) {
    return {key,
            [key, access](RunConfig& c, std::string_view v) { access(c) = parse_number<Int>(key, v); },
            [access](const RunConfig& c) { return std::to_string(access(c)); }};
}

template <typename Access>
Entry boolean(std::string key, Access access) {
    return {key,
            [key, access](RunConfig& c, std::string_view v) { access(c) = parse_bool(key, v); },
            [access](const RunConfig& c) { return std::string(access(c) ? "true" : "false"); }};
}

template <typename Access>
Entry text(std::string key, Access access) {
    return {key,
            [access](RunConfig& c, std::string_view v) { access(c) = std::string(v); },
            [access](const RunConfig& c) { return access(c); }};
}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = [] {
        std::vector<Entry> t;
        t.push_back({"task", [](RunConfig& c, std::string_view v) { c.task = parse_task(v); },
                     [](const RunConfig& c) { return std::string(to_string(c.task)); }});
        t.push_back(text("input", [](auto& c) -> auto& { return c.input; }));
        t.push_back(text("guidance", [](auto& c) -> auto& { return c.guidance; }));
        t.push_back(text("output", [](auto& c) -> auto& { return c.output; }));
        t.push_back(text("trace", [](auto& c) -> auto& { return c.trace; }));
        t.push_back(text("kernel", [](auto& c) -> auto& { return c.kernel; }));
        t.push_back(text("reference", [](auto& c) -> auto& { return c.reference; }));
        t.push_back(text("low_res_output", [](auto& c) -> auto& { return c.low_res_output; }));

        t.push_back(real("lambda", [](auto& c) -> auto& { return c.solver.weights.lambda; }));
        t.push_back(real("mu", [](auto& c) -> auto& { return c.solver.weights.mu; }));
        t.push_back(real("epsilon", [](auto& c) -> auto& { return c.solver.weights.epsilon; }));
        t.push_back(real("alpha", [](auto& c) -> auto& { return c.solver.alpha; }));
        t.push_back(real("beta", [](auto& c) -> auto& { return c.solver.beta; }));
        t.push_back(real("step_size", [](auto& c) -> auto& { return c.solver.step_size; }));
        t.push_back(integer<int>("max_iters", [](auto& c) -> auto& { return c.solver.max_iters; }));
        t.push_back(integer<int>("q_refresh_period", [](auto& c) -> auto& { return c.solver.q_refresh_period; }));
        t.push_back(integer<int>("cg_iters", [](auto& c) -> auto& { return c.solver.cg_iters; }));
        t.push_back(real("cg_tol", [](auto& c) -> auto& { return c.solver.cg_tol; }));
        t.push_back(boolean("varying_penalty", [](auto& c) -> auto& { return c.solver.penalty.enabled; }));
        t.push_back(real("penalty_tau", [](auto& c) -> auto& { return c.solver.penalty.tau; }));
        t.push_back(real("penalty_ratio", [](auto& c) -> auto& { return c.solver.penalty.ratio; }));
        t.push_back(real("penalty_max_factor", [](auto& c) -> auto& { return c.solver.penalty.max_factor; }));
        t.push_back(real("rel_energy_tol", [](auto& c) -> auto& { return c.solver.rel_energy_tol; }));
        t.push_back(integer<int>("stall_window", [](auto& c) -> auto& { return c.solver.stall_window; }));
        t.push_back(real("divergence_factor", [](auto& c) -> auto& { return c.solver.divergence_factor; }));

        t.push_back(real("p", [](auto& c) -> auto& { return c.solver.quantile.p; }));
        t.push_back(integer<int>("radius", [](auto& c) -> auto& { return c.solver.quantile.radius; }));
        t.push_back(real("sigma_w", [](auto& c) -> auto& { return c.solver.quantile.sigma_w; }));
        t.push_back({"guidance_mode",
                     [](RunConfig& c, std::string_view v) {
                         c.solver.quantile.guidance = parse_enum(kGuidanceNames, "guidance_mode", v);
                     },
                     [](const RunConfig& c) { return std::string(enum_name(kGuidanceNames, c.solver.quantile.guidance)); }});

        t.push_back(boolean("multichannel", [](auto& c) -> auto& { return c.multichannel; }));
        t.push_back(text("channel_weights", [](auto& c) -> auto& { return c.channel_weights; }));

        t.push_back(text("noise", [](auto& c) -> auto& { return c.noise; }));
        t.push_back(real("noise_amount", [](auto& c) -> auto& { return c.noise_amount; }));
        t.push_back(integer<std::uint64_t>("seed", [](auto& c) -> auto& { return c.seed; }));
        t.push_back({"pipeline",
                     [](RunConfig& c, std::string_view v) { c.pipeline = parse_enum(kPipelineNames, "pipeline", v); },
                     [](const RunConfig& c) { return std::string(enum_name(kPipelineNames, c.pipeline)); }});
        t.push_back(integer<int>("factor", [](auto& c) -> auto& { return c.decimation.factor; }));
        t.push_back(real("blur_sigma", [](auto& c) -> auto& { return c.decimation.blur_sigma; }));

        t.push_back(integer<std::size_t>("bins", [](auto& c) -> auto& { return c.bins; }));
        t.push_back(real("bme_delta", [](auto& c) -> auto& { return c.bme_delta; }));
        t.push_back(real("red_lambda", [](auto& c) -> auto& { return c.red_lambda; }));
        t.push_back(integer<int>("pnm_maxval", [](auto& c) -> auto& { return c.pnm_maxval; }));
        return t;
    }();
    return table;
}

const Entry& find_entry(std::string_view key) {
    const auto& table = entries();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Entry& e) { return e.key == key; });
    if (it == table.end()) throw Error(ErrorKind::Config, "unknown key '" + std::string(key) + "'");
    return *it;
}

}  // namespace

std::string_view to_string(Task task) noexcept { return enum_name(kTaskNames, task); }

Task parse_task(std::string_view name) { return parse_enum(kTaskNames, "task", name); }

RunConfig RunConfig::defaults(Task task) {
    RunConfig c;
    c.task = task;
    switch (task) {
        case Task::Upsample:
            // Data term plus AQuaSI only, 9x9 windows, guided by the colour image.
            c.solver.weights.lambda = 0.1;
            c.solver.weights.mu = 0.0;
            c.solver.quantile.radius = 4;
            c.solver.quantile.sigma_w = 0.1;
            c.solver.quantile.guidance = GuidanceMode::Static;
            break;
        case Task::ResidualHist:
            c.solver.quantile.guidance = GuidanceMode::Uniform;
            break;
        case Task::Degrade:
        case Task::Denoise:
        case Task::Deblur:
        case Task::Compare:
            break;
    }
    return c;
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const Entry& e : entries()) out.push_back(e.key);
        return out;
    }();
    return names;
}

void RunConfig::set(std::string_view key, std::string_view value) { find_entry(key).set(*this, trim(value)); }

std::string RunConfig::get(std::string_view key) const { return find_entry(key).get(*this); }

void RunConfig::load(std::istream& in, std::string_view origin) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Config,
                        std::string(origin) + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string_view key = trim(s.substr(0, eq));
        try {
            set(key, s.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorKind::Config, std::string(origin) + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config file " + path.string());
    load(in, path.string());
}

void RunConfig::print(std::ostream& out) const {
    for (const Entry& e : entries()) out << e.key << " = " << e.get(*this) << '\n';
}

NoiseSpec RunConfig::noise_spec() const {
    if (noise == "gaussian") return NoiseSpec::gaussian(noise_amount, seed);
    if (noise == "salt-pepper") return NoiseSpec::salt_pepper(noise_amount, seed);
    if (noise == "poisson") return NoiseSpec::poisson(noise_amount, seed);
    if (noise == "speckle") return NoiseSpec::speckle(noise_amount, seed);
    throw Error(ErrorKind::Config, "noise '" + noise + "' has no single-model spec");
}

ChannelWeights RunConfig::weights_for(std::size_t channels) const {
    if (channel_weights == "uniform") return ChannelWeights::uniform(channels);
    if (channel_weights == "luma") {
        if (channels != 3) throw Error(ErrorKind::Config, "luma channel weights need 3 channels");
        return ChannelWeights::rgb_luma();
    }
    throw Error(ErrorKind::Config, "channel_weights must be uniform or luma, got '" + channel_weights + "'");
}

void RunConfig::validate() const {
    SolverConfig check = solver;
    if (check.quantile.guidance == GuidanceMode::Static) {
        if (guidance.empty()) throw Error(ErrorKind::Config, "guidance_mode static needs a guidance image");
        check.quantile.guidance = GuidanceMode::Uniform;
    }
    try {
        check.validate();
        decimation.validate();
        if (noise != "mixed") noise_spec().validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, e.what());
    }
    if (bins < 2) throw Error(ErrorKind::Config, "bins must be >= 2");
    if (!(bme_delta >= 0.0)) throw Error(ErrorKind::Config, "bme_delta must be >= 0");
    if (!(red_lambda >= 0.0)) throw Error(ErrorKind::Config, "red_lambda must be >= 0");
    if (pnm_maxval < 1 || pnm_maxval > 65535) throw Error(ErrorKind::Config, "pnm_maxval must lie in [1, 65535]");
    if (channel_weights != "uniform" && channel_weights != "luma") {
        throw Error(ErrorKind::Config, "channel_weights must be uniform or luma");
    }
}

}  // namespace aquasi::cli
