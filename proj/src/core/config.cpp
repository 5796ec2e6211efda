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

#include "core/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "core/error.hpp"

namespace msgate {

namespace {

[[noreturn]] void bad_value(const std::string &key, const std::string &value, const char *what) {
    fail(ErrorCode::Parse, "config key '" + key + "': cannot parse '" + value + "' as " + what);
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string &key, const std::string &text) {
    const std::string s = trim(text);
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        bad_value(key, text, std::is_floating_point_v<T> ? "a number" : "an integer");
    }
    return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

// "20-29", "20,22,25" or a mix; empty or "auto" for the default set.
std::vector<int> parse_index_list(const std::string &key, const std::string &text) {
    const std::string s = trim(text);
    std::vector<int> out;
    if (s.empty() || s == "auto") return out;
    for (const std::string &part : split(s, ',')) {
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            out.push_back(parse_number<int>(key, part));
            continue;
        }
        const int a = parse_number<int>(key, part.substr(0, dash));
        const int b = parse_number<int>(key, part.substr(dash + 1));
        if (b < a) bad_value(key, text, "an ascending range");
        for (int k = a; k <= b; ++k) out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string format_index_list(const std::vector<int> &v) {
    if (v.empty()) return "auto";
    bool contiguous = v.size() > 1;
    for (std::size_t i = 1; i < v.size(); ++i) contiguous = contiguous && v[i] == v[i - 1] + 1;
    if (contiguous) return std::to_string(v.front()) + "-" + std::to_string(v.back());
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

struct Key {
    std::string name;
    std::function<std::string(const RunConfig &)> get;
    std::function<void(RunConfig &, const std::string &, const std::string &)> set;
};

template <typename T>
Key number_key(std::string name, T RunConfig::*field) {
    return {std::move(name),
            [field](const RunConfig &c) {
                if constexpr (std::is_floating_point_v<T>) return format_double(c.*field);
                else return std::to_string(c.*field);
            },
            [field](RunConfig &c, const std::string &k, const std::string &v) { c.*field = parse_number<T>(k, v); }};
}

Key text_key(std::string name, std::string RunConfig::*field, std::vector<std::string> allowed) {
    return {std::move(name), [field](const RunConfig &c) { return c.*field; },
            [field, allowed](RunConfig &c, const std::string &k, const std::string &v) {
                const std::string s = trim(v);
                if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
                    std::string opts;
                    for (const auto &a : allowed) opts += (opts.empty() ? "" : "|") + a;
                    bad_value(k, v, opts.c_str());
                }
                c.*field = s;
            }};
}

const std::vector<Key> &key_table() {
    static const std::vector<Key> keys = [] {
        std::vector<Key> k;
        k.push_back(number_key("trap.n_ions", &RunConfig::n_ions));
        k.push_back(number_key("trap.delta_z_um", &RunConfig::delta_z_um));
        k.push_back(number_key("trap.scale_r", &RunConfig::scale_r));
        k.push_back(number_key("trap.cutoff_s", &RunConfig::cutoff_s));
        k.push_back(number_key("trap.omega_x_hz", &RunConfig::omega_x_hz));
        k.push_back(number_key("trap.ion_mass_kg", &RunConfig::ion_mass_kg));
        k.push_back(number_key("trap.raman_wavelength_nm", &RunConfig::raman_wavelength_nm));
        k.push_back(number_key("trap.raman_crossing_deg", &RunConfig::raman_crossing_deg));
        k.push_back(text_key("trap.axial_potential", &RunConfig::axial_potential, {"uniform", "harmonic"}));
        k.push_back(number_key("trap.axial_frequency_hz", &RunConfig::axial_frequency_hz));
        k.push_back(number_key("crystal.init_spacing_um", &RunConfig::init_spacing_um));
        k.push_back(number_key("crystal.force_tolerance_n", &RunConfig::force_tolerance_n));
        k.push_back(number_key("crystal.max_iterations", &RunConfig::max_iterations));
        k.push_back(text_key("pulse.shape", &RunConfig::shape, {"A", "B"}));
        k.push_back(number_key("pulse.gate_time_us", &RunConfig::gate_time_us));
        k.push_back(number_key("pulse.n_oscillations", &RunConfig::n_oscillations));
        k.push_back({"pulse.reference_mode",
                     [](const RunConfig &c) { return c.reference_mode == 0 ? std::string("auto") : std::to_string(c.reference_mode); },
                     [](RunConfig &c, const std::string &key, const std::string &v) {
                         c.reference_mode = trim(v) == "auto" ? 0 : parse_number<int>(key, v);
                     }});
        k.push_back(number_key("pulse.reference_offset_hz", &RunConfig::reference_offset_hz));
        k.push_back({"pulse.step_levels",
                     [](const RunConfig &c) {
                         std::string out;
                         for (std::size_t i = 0; i < c.step_levels.size(); ++i) out += (i ? "," : "") + format_double(c.step_levels[i]);
                         return out;
                     },
                     [](RunConfig &c, const std::string &key, const std::string &v) {
                         std::vector<double> levels;
                         for (const auto &p : split(v, ',')) levels.push_back(parse_number<double>(key, p));
                         if (levels.size() != 3) bad_value(key, v, "three comma-separated levels");
                         c.step_levels = levels;
                     }});
        k.push_back(number_key("pulse.ramp_fraction", &RunConfig::ramp_fraction));
        k.push_back(number_key("pulse.grid_intervals", &RunConfig::grid_intervals));
        k.push_back(number_key("optimize.ion_i", &RunConfig::ion_i));
        k.push_back(number_key("optimize.ion_j", &RunConfig::ion_j));
        k.push_back({"optimize.target_modes", [](const RunConfig &c) { return format_index_list(c.target_modes); },
                     [](RunConfig &c, const std::string &key, const std::string &v) {
                         c.target_modes = parse_index_list(key, v);
                     }});
        k.push_back(number_key("optimize.max_evals", &RunConfig::max_evals));
        k.push_back(number_key("optimize.seed", &RunConfig::seed));
        k.push_back(number_key("optimize.starts", &RunConfig::starts));
        k.push_back(number_key("optimize.reference_rabi_hz", &RunConfig::reference_rabi_hz));
        k.push_back(number_key("optimize.initial_step_hz", &RunConfig::initial_step_hz));
        k.push_back(number_key("optimize.min_step_hz", &RunConfig::min_step_hz));
        k.push_back(number_key("optimize.relative_tolerance", &RunConfig::relative_tolerance));
        k.push_back(number_key("analysis.sweep_min_hz", &RunConfig::sweep_min_hz));
        k.push_back(number_key("analysis.sweep_max_hz", &RunConfig::sweep_max_hz));
        k.push_back(number_key("analysis.sweep_points", &RunConfig::sweep_points));
        k.push_back(text_key("analysis.error_convention", &RunConfig::error_convention, {"both", "single"}));
        k.push_back(text_key("analysis.map_pairs", &RunConfig::map_pairs, {"all", "subset"}));
        k.push_back(number_key("analysis.subset_pairs", &RunConfig::subset_pairs));
        k.push_back(text_key("output.dir", &RunConfig::output_dir, {}));
        k.push_back(number_key("output.threads", &RunConfig::threads));
        return k;
    }();
    return keys;
}

const Key &find_key(const std::string &name) {
    for (const Key &k : key_table()) {
        if (k.name == name) return k;
    }
    fail(ErrorCode::Parse, "unknown config key '" + name + "'");
}

void check(bool ok, const char *key, const char *what) {
    if (!ok) fail(ErrorCode::InvalidArgument, std::string("config key '") + key + "': " + what);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::uint64_t fnv1a(const std::string &bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const Key &k : key_table()) out.push_back(k.name);
    return out;
}

void set_config_value(RunConfig &cfg, const std::string &key, const std::string &value) {
    find_key(key).set(cfg, key, value);
}

std::string get_config_value(const RunConfig &cfg, const std::string &key) {
    return find_key(key).get(cfg);
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot read config file '" + path + "'");
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
        fail(ErrorCode::Parse, "config file '" + path + "': " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    RunConfig cfg;
    for (const auto &[section, body] : tree) {
        if (body.empty()) fail(ErrorCode::Parse, "config file '" + path + "': key '" + section + "' outside a section");
        for (const auto &[key, value] : body) set_config_value(cfg, section + "." + key, value.data());
    }
    return cfg;
}

std::string to_ini(const RunConfig &cfg) {
    std::string out, section;
    for (const Key &k : key_table()) {
        const auto dot = k.name.find('.');
        const std::string s = k.name.substr(0, dot);
        if (s != section) {
            out += (section.empty() ? "[" : "\n[") + s + "]\n";
            section = s;
        }
        out += k.name.substr(dot + 1) + " = " + k.get(cfg) + "\n";
    }
    return out;
}

void RunConfig::validate() const {
    check(n_ions >= 2, "trap.n_ions", "need at least two ions");
    check(delta_z_um > 0.0, "trap.delta_z_um", "must be positive");
    check(scale_r >= 0.5 && scale_r <= 1.5, "trap.scale_r", "must lie in [0.5, 1.5]");
    check(cutoff_s > 0.0 && cutoff_s < 1.0, "trap.cutoff_s", "must lie in (0, 1)");
    check(omega_x_hz > 0.0, "trap.omega_x_hz", "must be positive");
    check(ion_mass_kg > 0.0, "trap.ion_mass_kg", "must be positive");
    check(raman_wavelength_nm > 0.0, "trap.raman_wavelength_nm", "must be positive");
    check(raman_crossing_deg > 0.0 && raman_crossing_deg <= 180.0, "trap.raman_crossing_deg", "must lie in (0, 180]");
    check(axial_potential != "harmonic" || axial_frequency_hz > 0.0, "trap.axial_frequency_hz",
          "must be positive for a harmonic trap");
    check(init_spacing_um >= 0.0, "crystal.init_spacing_um", "must be non-negative");
    check(force_tolerance_n > 0.0, "crystal.force_tolerance_n", "must be positive");
    check(max_iterations > 0, "crystal.max_iterations", "must be positive");
    check(gate_time_us > 0.0, "pulse.gate_time_us", "must be positive");
    check(n_oscillations >= 1, "pulse.n_oscillations", "must be >= 1");
    check(reference_mode >= 0 && reference_mode <= n_ions, "pulse.reference_mode", "must lie in [1, n_ions]");
    check(std::abs(reference_offset_hz) < 1e6, "pulse.reference_offset_hz", "must be below 1 MHz in magnitude");
    check(ramp_fraction > 0.0 && ramp_fraction < 0.25, "pulse.ramp_fraction", "must lie in (0, 0.25)");
    for (double l : step_levels) check(l >= 0.0, "pulse.step_levels", "levels must be non-negative");
    check(grid_intervals >= 100, "pulse.grid_intervals", "must be >= 100");
    check(ion_i >= 1 && ion_i <= n_ions, "optimize.ion_i", "must lie in [1, n_ions]");
    check(ion_j >= 1 && ion_j <= n_ions, "optimize.ion_j", "must lie in [1, n_ions]");
    check(ion_i != ion_j, "optimize.ion_j", "must differ from ion_i");
    for (int k : target_modes) check(k >= 1 && k <= n_ions, "optimize.target_modes", "modes must lie in [1, n_ions]");
    check(max_evals > 0, "optimize.max_evals", "must be positive");
    check(starts >= 1, "optimize.starts", "must be >= 1");
    check(reference_rabi_hz > 0.0, "optimize.reference_rabi_hz", "must be positive");
    check(initial_step_hz > 0.0, "optimize.initial_step_hz", "must be positive");
    check(min_step_hz > 0.0 && min_step_hz <= initial_step_hz, "optimize.min_step_hz", "must lie in (0, initial_step_hz]");
    check(relative_tolerance >= 0.0, "optimize.relative_tolerance", "must be non-negative");
    check(sweep_min_hz > 0.0 && sweep_max_hz > sweep_min_hz, "analysis.sweep_max_hz", "need 0 < sweep_min_hz < sweep_max_hz");
    check(sweep_points >= 2, "analysis.sweep_points", "must be >= 2");
    check(subset_pairs >= 1 && subset_pairs <= n_ions * (n_ions - 1) / 2, "analysis.subset_pairs",
          "must lie in [1, N(N-1)/2]");
    check(!output_dir.empty(), "output.dir", "must not be empty");
}

TrapConfig RunConfig::trap() const {
    TrapParameters p;
    p.n_ions = n_ions;
    p.delta_z = delta_z_um * 1e-6;
    p.scale_r = scale_r;
    p.cutoff_s = cutoff_s;
    p.omega_x = hz_to_angular(omega_x_hz);
    p.ion_mass = ion_mass_kg;
    p.raman_wavevector = raman_wavevector(raman_wavelength_nm * 1e-9, raman_crossing_deg * kPi / 180.0);
    return TrapConfig(p);
}

AxialPotential RunConfig::axial(const TrapConfig &trap) const {
    if (axial_potential == "harmonic") {
        return harmonic_potential(trap.ion_mass(), hz_to_angular(axial_frequency_hz), trap.charge());
    }
    return uniform_density_potential(trap);
}

DescentOptions RunConfig::descent() const {
    DescentOptions d;
    d.init_spacing = (init_spacing_um > 0.0 ? init_spacing_um : 0.95 * delta_z_um) * 1e-6;
    d.force_tolerance = force_tolerance_n;
    d.max_iterations = max_iterations;
    return d;
}

int RunConfig::reference_index(int n_modes) const {
    if (reference_mode == 0) return default_reference_mode(n_modes);
    if (reference_mode < 1 || reference_mode > n_modes) fail(ErrorCode::OutOfRange, "pulse.reference_mode outside the spectrum");
    return reference_mode - 1;
}

std::vector<int> RunConfig::target_indices(int n_modes) const {
    if (target_modes.empty()) {
        const int ref = reference_index(n_modes);
        std::vector<int> out;
        for (int k = ref - 5; k <= ref + 4; ++k) {
            if (k >= 0 && k < n_modes) out.push_back(k);
        }
        return out;
    }
    std::vector<int> out;
    for (int k : target_modes) {
        if (k < 1 || k > n_modes) fail(ErrorCode::OutOfRange, "optimize.target_modes outside the spectrum");
        out.push_back(k - 1);
    }
    return out;
}

ErrorConvention RunConfig::convention() const {
    return error_convention == "single" ? ErrorConvention::SingleIon : ErrorConvention::BothIons;
}

PulseSchedule RunConfig::base_schedule(const ModeData &modes) const {
    PulseSchedule s;
    s.gate_time = gate_time_us * 1e-6;
    if (shape == "B") {
        StepShape b;
        std::copy(step_levels.begin(), step_levels.end(), b.levels.begin());
        b.ramp_fraction = ramp_fraction;
        s.shape = b;
    } else {
        s.shape = SineShape{};
    }
    s.n_oscillations = n_oscillations;
    s.fm_points.assign(static_cast<std::size_t>(n_oscillations), 0.0);
    s.mu_ref = modes.frequencies(reference_index(modes.size())) + hz_to_angular(reference_offset_hz);
    s.amp_scale = 0.0;
    return s;
}

OptimizationProblem RunConfig::problem(const ModeData &modes) const {
    OptimizationProblem p;
    p.base_schedule = base_schedule(modes);
    p.target_modes = target_indices(modes.size());
    p.ion_pair = pair();
    p.max_evals = max_evals;
    p.seed = seed;
    p.starts = starts;
    p.reference_amplitude = hz_to_angular(reference_rabi_hz);
    p.initial_step = hz_to_angular(initial_step_hz);
    p.min_step = hz_to_angular(min_step_hz);
    p.relative_tolerance = relative_tolerance;
    p.intervals = grid_intervals;
    return p;
}

std::vector<double> RunConfig::sweep_offsets() const {
    return log_spaced(hz_to_angular(sweep_min_hz), hz_to_angular(sweep_max_hz), sweep_points);
}

}  // namespace msgate
