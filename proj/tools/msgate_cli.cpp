// Copyright 2026 The msgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// msgate command-line front end. Every stage reads the config, loads or
// (with --with-prereqs) recomputes its inputs, and writes its outputs plus a
// manifest into the output directory.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "msgate/msgate.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMissingInput = 3;
constexpr double kTwoPi = 6.283185307179586;

struct CliError {
    int exit_code;
    std::string message;
};

void check(msgate_status s, int exit_code = kExitComputation) {
    if (s != MSGATE_OK) {
        throw CliError{exit_code, std::string(msgate_status_string(s)) + ": " + msgate_last_error()};
    }
}

template <typename T, void (*Free)(T *)>
struct Deleter {
    void operator()(T *p) const { Free(p); }
};
using Config = std::unique_ptr<msgate_config, Deleter<msgate_config, msgate_config_free>>;
using Crystal = std::unique_ptr<msgate_crystal, Deleter<msgate_crystal, msgate_crystal_free>>;
using Modes = std::unique_ptr<msgate_modes, Deleter<msgate_modes, msgate_modes_free>>;
using Schedule = std::unique_ptr<msgate_schedule, Deleter<msgate_schedule, msgate_schedule_free>>;
using Optimization = std::unique_ptr<msgate_optimization, Deleter<msgate_optimization, msgate_optimization_free>>;
using Report = std::unique_ptr<msgate_report, Deleter<msgate_report, msgate_report_free>>;
using Sweep = std::unique_ptr<msgate_sweep, Deleter<msgate_sweep, msgate_sweep_free>>;
using PowerMap = std::unique_ptr<msgate_powermap, Deleter<msgate_powermap, msgate_powermap_free>>;

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::uint64_t fnv1a(const std::string &bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_bytes(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const fs::path &p, const std::string &text) {
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw CliError{kExitComputation, "cannot write " + tmp.string()};
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) throw CliError{kExitComputation, "cannot move output into " + p.string()};
}

std::string config_value(const msgate_config *cfg, const char *key) {
    size_t need = 0;
    check(msgate_config_get(cfg, key, nullptr, 0, &need));
    std::string s(need, '\0');
    check(msgate_config_get(cfg, key, s.data(), s.size(), nullptr));
    s.resize(need - 1);
    return s;
}

struct Options {
    std::string config_path;
    std::string output_dir;
    int threads = -1;
    long long seed = -1;
    std::vector<std::string> overrides;
    bool with_prereqs = false;
    std::string pairs;
    bool quiet = false;
};

class Session {
public:
    explicit Session(const Options &opt) : opt_(opt) {
        msgate_config *raw = nullptr;
        if (opt.config_path.empty()) {
            check(msgate_config_create(&raw), kExitUsage);
        } else {
            const msgate_status s = msgate_config_load(opt.config_path.c_str(), &raw);
            if (s != MSGATE_OK) throw CliError{kExitUsage, std::string("invalid config: ") + msgate_last_error()};
        }
        cfg_.reset(raw);
        for (const std::string &kv : opt.overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw CliError{kExitUsage, "--set expects key=value, got '" + kv + "'"};
            set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (opt.threads >= 0) set("output.threads", std::to_string(opt.threads));
        if (opt.seed >= 0) set("optimize.seed", std::to_string(opt.seed));
        if (!opt.pairs.empty()) set("analysis.map_pairs", opt.pairs);
        if (const char *env = std::getenv("MSGATE_OUTPUT_DIR"); env && *env) set("output.dir", env);
        if (!opt.output_dir.empty()) set("output.dir", opt.output_dir);
        if (msgate_config_validate(cfg_.get()) != MSGATE_OK) {
            throw CliError{kExitUsage, std::string("invalid config: ") + msgate_last_error()};
        }
        out_ = config_value(cfg_.get(), "output.dir");
        prepare_output_dir();
        std::uint64_t h = 0;
        check(msgate_config_hash(cfg_.get(), &h));
        hash_ = hex64(h);
    }

    const msgate_config *cfg() const { return cfg_.get(); }
    std::string value(const char *key) const { return config_value(cfg_.get(), key); }
    fs::path path(const char *name) const { return out_ / name; }
    bool with_prereqs() const { return opt_.with_prereqs; }

    void say(const std::string &line) const {
        if (!opt_.quiet) std::printf("%s\n", line.c_str());
    }

    void require_input(const char *name, const char *producer) const {
        if (!fs::exists(path(name))) {
            throw CliError{kExitMissingInput, "missing " + path(name).string() + "; run `msgate " + producer +
                                                  "` first or pass --with-prereqs"};
        }
    }

    void manifest(const std::string &command, const std::vector<const char *> &inputs,
                  const std::vector<const char *> &outputs, const json &results, double seconds) const {
        json m;
        m["command"] = command;
        m["version"] = msgate_version();
        m["config_hash"] = hash_;
        json in = json::object();
        for (const char *name : inputs) in[name] = hex64(fnv1a(read_bytes(path(name))));
        m["inputs"] = std::move(in);
        json out = json::object();
        for (const char *name : outputs) out[name] = hex64(fnv1a(read_bytes(path(name))));
        m["outputs"] = std::move(out);
        m["results"] = results;
        m["timings_s"] = {{"total", seconds}};
        size_t need = 0;
        check(msgate_config_to_ini(cfg_.get(), nullptr, 0, &need));
        std::string ini(need, '\0');
        check(msgate_config_to_ini(cfg_.get(), ini.data(), ini.size(), nullptr));
        ini.resize(need - 1);
        m["config"] = ini;
        write_atomic(path(("manifest_" + command + ".json").c_str()), m.dump(2) + "\n");
    }

private:
    void set(const std::string &key, const std::string &value) {
        if (msgate_config_set(cfg_.get(), key.c_str(), value.c_str()) != MSGATE_OK) {
            throw CliError{kExitUsage, std::string("invalid setting: ") + msgate_last_error()};
        }
    }

    // Fails before any computation if the directory cannot take files.
    void prepare_output_dir() const {
        std::error_code ec;
        fs::create_directories(out_, ec);
        if (ec || !fs::is_directory(out_)) {
            throw CliError{kExitUsage, "output directory " + out_.string() + " cannot be created"};
        }
        const fs::path probe = out_ / ".msgate-write-probe";
        {
            std::ofstream f(probe);
            if (!f) throw CliError{kExitUsage, "output directory " + out_.string() + " is not writable"};
        }
        fs::remove(probe, ec);
    }

    Options opt_;
    Config cfg_;
    fs::path out_;
    std::string hash_;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *format, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

// ---- stages. Each run_* computes and writes; each load_* reads the file or
// recomputes it when --with-prereqs is set.

Crystal run_crystal(const Session &s) {
    const auto t0 = Clock::now();
    msgate_crystal *raw = nullptr;
    check(msgate_crystal_solve(s.cfg(), &raw));
    Crystal c(raw);
    check(msgate_crystal_save(c.get(), s.cfg(), s.path("crystal.csv").c_str(), s.path("crystal.json").c_str()));
    msgate_crystal_summary sum{};
    check(msgate_crystal_summary_get(c.get(), &sum));
    s.say("ions: " + std::to_string(sum.n_ions) + ", iterations: " + std::to_string(sum.iterations));
    s.say(fmt("mean spacing: %.4f um", sum.mean_spacing_m * 1e6));
    s.say(fmt("spacing variation: %.3f %%", sum.spacing_variation * 100.0));
    s.manifest("crystal", {}, {"crystal.csv", "crystal.json"},
               {{"mean_spacing_m", sum.mean_spacing_m},
                {"spacing_variation", sum.spacing_variation},
                {"iterations", sum.iterations}},
               since(t0));
    return c;
}

Crystal load_crystal(const Session &s) {
    if (s.with_prereqs()) return run_crystal(s);
    s.require_input("crystal.csv", "crystal");
    msgate_crystal *raw = nullptr;
    check(msgate_crystal_load(s.path("crystal.csv").c_str(), &raw), kExitMissingInput);
    return Crystal(raw);
}

Modes run_modes(const Session &s, const msgate_crystal *crystal) {
    const auto t0 = Clock::now();
    msgate_modes *raw = nullptr;
    check(msgate_modes_solve(s.cfg(), crystal, &raw));
    Modes m(raw);
    check(msgate_modes_save(m.get(), s.path("modes.json").c_str(), s.path("spectrum.csv").c_str()));
    size_t n = 0;
    check(msgate_modes_count(m.get(), &n));
    std::vector<double> f(n);
    check(msgate_modes_frequencies(m.get(), f.data(), n));
    s.say(fmt("lowest mode: %.6f MHz", f.front() / kTwoPi / 1e6));
    s.say(fmt("highest mode: %.6f MHz", f.back() / kTwoPi / 1e6));
    s.manifest("modes", {"crystal.csv"}, {"modes.json", "spectrum.csv"},
               {{"lowest_hz", f.front() / kTwoPi}, {"highest_hz", f.back() / kTwoPi}}, since(t0));
    return m;
}

Modes load_modes(const Session &s) {
    if (s.with_prereqs()) {
        Crystal c = run_crystal(s);
        return run_modes(s, c.get());
    }
    s.require_input("modes.json", "modes");
    msgate_modes *raw = nullptr;
    check(msgate_modes_load(s.path("modes.json").c_str(), &raw), kExitMissingInput);
    return Modes(raw);
}

std::pair<size_t, size_t> config_pair(const Session &s) {
    return {std::stoul(s.value("optimize.ion_i")) - 1, std::stoul(s.value("optimize.ion_j")) - 1};
}

Schedule run_optimize(const Session &s, const msgate_modes *modes) {
    const auto t0 = Clock::now();
    const auto [i, j] = config_pair(s);

    // Flat-frequency baseline at its own calibrated power.
    msgate_schedule *raw = nullptr;
    check(msgate_schedule_default(s.cfg(), modes, &raw));
    Schedule flat(raw);
    double flat_omega = 0.0;
    check(msgate_schedule_calibrate(flat.get(), s.cfg(), modes, i, j, &flat_omega));
    msgate_report *rep_raw = nullptr;
    check(msgate_report_run(s.cfg(), modes, flat.get(), i, j, &rep_raw));
    Report flat_report(rep_raw);
    msgate_report_values flat_values{};
    check(msgate_report_values_get(flat_report.get(), &flat_values));

    msgate_optimization *opt_raw = nullptr;
    check(msgate_optimize(s.cfg(), modes, &opt_raw));
    Optimization opt(opt_raw);
    msgate_optimization_result res{};
    check(msgate_optimization_result_get(opt.get(), &res));
    check(msgate_optimization_schedule(opt.get(), &raw));
    Schedule sched(raw);
    double omega = 0.0;
    check(msgate_schedule_calibrate(sched.get(), s.cfg(), modes, i, j, &omega));
    check(msgate_report_run(s.cfg(), modes, sched.get(), i, j, &rep_raw));
    Report report(rep_raw);
    msgate_report_values values{};
    check(msgate_report_values_get(report.get(), &values));

    check(msgate_schedule_save(sched.get(), s.path("schedule.json").c_str(), s.path("waveform.csv").c_str()));
    check(msgate_optimization_save_trace(opt.get(), s.path("trace.csv").c_str()));

    std::vector<double> fm(8);
    msgate_schedule_info info{};
    check(msgate_schedule_info_get(sched.get(), &info));
    fm.resize(info.n_fm_points);
    check(msgate_schedule_fm_points(sched.get(), fm.data(), fm.size()));
    double lo = fm.front(), hi = fm.front();
    for (double v : fm) lo = std::min(lo, v), hi = std::max(hi, v);

    s.say("evaluations: " + std::to_string(res.evaluations));
    s.say(fmt("cost: %.4e", res.initial_cost) + fmt(" -> %.4e", res.final_cost));
    s.say(fmt("flat-frequency error: %.4e", flat_values.motional_error));
    s.say(fmt("optimized error: %.4e", values.motional_error));
    s.say(fmt("omega_max: 2pi x %.2f kHz", omega / kTwoPi / 1e3));
    s.manifest("optimize", {"modes.json"}, {"schedule.json", "waveform.csv", "trace.csv"},
               {{"ion_i", i + 1},
                {"ion_j", j + 1},
                {"evaluations", res.evaluations},
                {"initial_cost", res.initial_cost},
                {"final_cost", res.final_cost},
                {"baseline_motional_error", flat_values.motional_error},
                {"baseline_omega_max_hz", flat_omega / kTwoPi},
                {"motional_error", values.motional_error},
                {"beta_rad", values.beta},
                {"omega_max_hz", omega / kTwoPi},
                {"fm_oscillation_amplitude_hz", 0.5 * (hi - lo) / kTwoPi}},
               since(t0));
    return sched;
}

Schedule load_schedule(const Session &s, const msgate_modes *modes) {
    if (s.with_prereqs()) return run_optimize(s, modes);
    s.require_input("schedule.json", "optimize");
    msgate_schedule *raw = nullptr;
    check(msgate_schedule_load(s.path("schedule.json").c_str(), &raw), kExitMissingInput);
    return Schedule(raw);
}

void cmd_crystal(const Session &s) { run_crystal(s); }

void cmd_modes(const Session &s) {
    Crystal c = load_crystal(s);
    run_modes(s, c.get());
}

void cmd_optimize(const Session &s) {
    Modes m = load_modes(s);
    run_optimize(s, m.get());
}

void cmd_report(const Session &s) {
    Modes m = load_modes(s);
    Schedule sched = load_schedule(s, m.get());
    const auto t0 = Clock::now();
    const auto [i, j] = config_pair(s);
    msgate_schedule_info info{};
    check(msgate_schedule_info_get(sched.get(), &info));
    if (!(info.omega_max > 0.0)) check(msgate_schedule_calibrate(sched.get(), s.cfg(), m.get(), i, j, nullptr));
    msgate_report *raw = nullptr;
    check(msgate_report_run(s.cfg(), m.get(), sched.get(), i, j, &raw));
    Report r(raw);
    check(msgate_report_save(r.get(), s.cfg(), m.get(), s.path("report.json").c_str(),
                             s.path("trajectories.csv").c_str(), 20));
    msgate_report_values v{};
    check(msgate_report_values_get(r.get(), &v));
    s.say(fmt("beta: %.6f rad", v.beta));
    s.say(fmt("motional error: %.4e", v.motional_error));
    s.manifest("report", {"modes.json", "schedule.json"}, {"report.json", "trajectories.csv"},
               {{"ion_i", i + 1}, {"ion_j", j + 1}, {"beta_rad", v.beta}, {"motional_error", v.motional_error},
                {"omega_max_hz", v.omega_max / kTwoPi}},
               since(t0));
}

void cmd_sweep(const Session &s) {
    Modes m = load_modes(s);
    Schedule sched = load_schedule(s, m.get());
    const auto t0 = Clock::now();
    msgate_sweep *raw = nullptr;
    check(msgate_sweep_run(s.cfg(), m.get(), sched.get(), &raw));
    Sweep sw(raw);
    check(msgate_sweep_save(sw.get(), s.path("sweep.csv").c_str(), s.path("sweep.json").c_str()));
    msgate_sweep_summary sum{};
    check(msgate_sweep_summary_get(sw.get(), &sum));
    s.say(fmt("baseline error: %.4e", sum.baseline_error));
    if (std::isfinite(sum.fitted_slope)) {
        s.say(fmt("fitted slope: %.3f", sum.fitted_slope) + fmt(" +- %.3f", sum.slope_stderr) + " (" +
              std::to_string(sum.fit_points) + " points)");
    } else {
        s.say("fitted slope: unavailable (" + std::to_string(sum.fit_points) + " points in the fit window)");
    }
    s.manifest("sweep", {"modes.json", "schedule.json"}, {"sweep.csv", "sweep.json"},
               {{"baseline_error", sum.baseline_error},
                {"fitted_slope", std::isfinite(sum.fitted_slope) ? json(sum.fitted_slope) : json(nullptr)},
                {"slope_stderr", std::isfinite(sum.slope_stderr) ? json(sum.slope_stderr) : json(nullptr)},
                {"fit_points", sum.fit_points}},
               since(t0));
}

void cmd_powermap(const Session &s) {
    Crystal c = load_crystal(s);
    Modes m = s.with_prereqs() ? run_modes(s, c.get()) : load_modes(s);
    Schedule sched = load_schedule(s, m.get());
    const auto t0 = Clock::now();
    size_t n = 0;
    check(msgate_modes_count(m.get(), &n));
    std::vector<size_t> pairs;
    const bool subset = s.value("analysis.map_pairs") == "subset";
    if (subset) {
        const size_t count = std::stoul(s.value("analysis.subset_pairs"));
        pairs.resize(2 * count);
        check(msgate_sample_pairs(n, count, std::stoull(s.value("optimize.seed")), pairs.data()));
    }
    msgate_powermap *raw = nullptr;
    check(msgate_powermap_run(s.cfg(), m.get(), sched.get(), subset ? pairs.data() : nullptr, pairs.size() / 2, &raw));
    PowerMap pm(raw);
    check(msgate_powermap_save(pm.get(), c.get(), s.path("powermap.csv").c_str(), s.path("powermap.json").c_str()));
    msgate_powermap_stats st{};
    check(msgate_powermap_stats_get(pm.get(), c.get(), &st));
    s.say("pairs: " + std::to_string(st.finite_pairs) + " finite, " + std::to_string(st.degenerate_pairs) +
          " degenerate");
    s.say(fmt("omega_max range: 2pi x [%.1f", st.min / kTwoPi / 1e3) + fmt(", %.1f] kHz", st.max / kTwoPi / 1e3));
    s.say(fmt("correlation with distance: %.3f", st.distance_correlation));
    s.manifest("powermap", {"crystal.csv", "modes.json", "schedule.json"}, {"powermap.csv", "powermap.json"},
               {{"pairs", subset ? "subset" : "all"},
                {"finite_pairs", st.finite_pairs},
                {"degenerate_pairs", st.degenerate_pairs},
                {"min_hz", st.min / kTwoPi},
                {"max_hz", st.max / kTwoPi},
                {"distance_correlation", st.distance_correlation}},
               since(t0));
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Pulse design for Molmer-Sorensen gates in long ion chains", "msgate"};
    app.set_version_flag("--version", std::string(msgate_version()));
    app.require_subcommand(1);
    Options opt;
    app.add_option("-c,--config", opt.config_path, "INI config file (defaults apply to missing keys)");
    app.add_option("-o,--output-dir", opt.output_dir, "Output directory (overrides MSGATE_OUTPUT_DIR and output.dir)");
    app.add_option("-j,--threads", opt.threads, "Worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", opt.seed, "Optimizer seed")->check(CLI::NonNegativeNumber);
    app.add_option("--set", opt.overrides, "Override a config key: section.key=value")->take_all();
    app.add_flag("--with-prereqs", opt.with_prereqs, "Recompute upstream stages instead of loading their files");
    app.add_flag("-q,--quiet", opt.quiet, "Print nothing on success");

    struct Command {
        const char *name;
        const char *help;
        void (*fn)(const Session &);
    };
    const Command commands[] = {
        {"crystal", "Equilibrium positions", cmd_crystal},
        {"modes", "Transverse mode spectrum and Lamb-Dicke parameters", cmd_modes},
        {"optimize", "Optimize the FM pattern and calibrate power", cmd_optimize},
        {"report", "Gate report and phase-space trajectories", cmd_report},
        {"sweep", "Robustness against a static frequency offset", cmd_sweep},
        {"powermap", "Rabi frequency needed for every ion pair", cmd_powermap},
    };
    std::vector<CLI::App *> subs;
    for (const auto &c : commands) {
        CLI::App *sub = app.add_subcommand(c.name, c.help);
        sub->fallthrough();
        if (std::string(c.name) == "powermap") {
            sub->add_option("--pairs", opt.pairs, "all or subset (analysis.subset_pairs random pairs)")
                ->check(CLI::IsMember({"all", "subset"}));
        }
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        for (std::size_t k = 0; k < subs.size(); ++k) {
            if (subs[k]->parsed()) {
                Session session(opt);
                commands[k].fn(session);
            }
        }
    } catch (const CliError &e) {
        std::fprintf(stderr, "msgate: %s\n", e.message.c_str());
        return e.exit_code;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "msgate: %s\n", e.what());
        return kExitComputation;
    }
    return 0;
}
