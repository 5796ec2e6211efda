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

#include "core/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "core/config.hpp"
#include "core/error.hpp"

namespace msgate {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    return format_double(v);
}

// JSON has no NaN; store null and map it back.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double from_jnum(const json &j) { return j.is_null() ? kNaN : j.get<double>(); }

json parse_json(const std::string &text, const char *what) {
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        fail(ErrorCode::Parse, std::string("malformed ") + what + " JSON: " + e.what());
    }
}

template <typename Fn>
auto guarded(const char *what, Fn &&fn) {
    try {
        return fn();
    } catch (const json::exception &e) {
        fail(ErrorCode::Parse, std::string("invalid ") + what + " JSON: " + e.what());
    }
}

void expect_header(const CsvTable &t, const std::vector<std::string> &header, const char *what) {
    if (t.header != header) fail(ErrorCode::Parse, std::string("unexpected ") + what + " CSV header");
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

}  // namespace

void write_file_atomic(const std::string &path, const std::string &contents) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            fail(ErrorCode::Io, "write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::Io, "cannot move output into '" + path + "'");
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable parse_csv(const std::string &text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    auto cells = [](const std::string &l) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(l);
        while (std::getline(ls, cell, ',')) out.push_back(cell);
        if (!l.empty() && l.back() == ',') out.emplace_back();
        return out;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (t.header.empty()) {
            t.header = cells(line);
            continue;
        }
        auto row = cells(line);
        if (row.size() != t.header.size()) fail(ErrorCode::Parse, "CSV row has " + std::to_string(row.size()) +
                                                                      " cells, header has " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) fail(ErrorCode::Parse, "empty CSV document");
    return t;
}

double csv_number(const std::string &cell) {
    if (cell == "nan") return kNaN;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        fail(ErrorCode::Parse, "CSV cell '" + cell + "' is not a number");
    }
    return v;
}

std::string crystal_csv(const IonCrystal &crystal) {
    std::string out = "ion,z_m\n";
    for (std::size_t i = 0; i < crystal.positions.size(); ++i) {
        out += std::to_string(i + 1) + "," + num(crystal.positions[i]) + "\n";
    }
    return out;
}

IonCrystal crystal_from_csv(const std::string &text) {
    const CsvTable t = parse_csv(text);
    expect_header(t, {"ion", "z_m"}, "crystal");
    IonCrystal c;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (csv_number(t.rows[r][0]) != static_cast<double>(r + 1)) fail(ErrorCode::Parse, "crystal CSV ions out of order");
        c.positions.push_back(csv_number(t.rows[r][1]));
    }
    if (c.positions.size() < 2) fail(ErrorCode::Parse, "crystal CSV needs at least two ions");
    return c;
}

std::string crystal_json(const IonCrystal &crystal, const std::string &config_hash) {
    json j;
    j["n_ions"] = crystal.size();
    j["mean_spacing_m"] = crystal.mean_spacing();
    j["spacing_variation"] = crystal.spacing_variation();
    j["residual_force_n"] = crystal.residual_force;
    j["iterations"] = crystal.iterations;
    j["energy_j"] = crystal.energy;
    j["config_hash"] = config_hash;
    return dump(j);
}

std::string modes_json(const ModeData &modes) {
    json j;
    const int n = modes.size();
    j["n_modes"] = n;
    j["order"] = "ascending";
    j["raman_wavevector_per_m"] = modes.raman_wavevector;
    j["ion_mass_kg"] = modes.ion_mass;
    json freq_rad = json::array(), freq_hz = json::array(), vecs = json::array(), eta = json::array();
    for (int k = 0; k < n; ++k) {
        freq_rad.push_back(modes.frequencies(k));
        freq_hz.push_back(angular_to_hz(modes.frequencies(k)));
        json row = json::array();
        for (int i = 0; i < n; ++i) row.push_back(modes.vectors(k, i));
        vecs.push_back(std::move(row));
    }
    for (int i = 0; i < n; ++i) {
        json row = json::array();
        for (int k = 0; k < n; ++k) row.push_back(modes.eta(i, k));
        eta.push_back(std::move(row));
    }
    j["frequencies_hz"] = std::move(freq_hz);
    j["frequencies_rad_s"] = std::move(freq_rad);
    j["vectors"] = std::move(vecs);
    j["eta"] = std::move(eta);
    return dump(j);
}

ModeData modes_from_json(const std::string &text) {
    const json j = parse_json(text, "modes");
    return guarded("modes", [&] {
        ModeData m;
        const int n = j.at("n_modes").get<int>();
        if (n < 1) fail(ErrorCode::Parse, "modes JSON has no modes");
        m.raman_wavevector = j.at("raman_wavevector_per_m").get<double>();
        m.ion_mass = j.at("ion_mass_kg").get<double>();
        const auto &f = j.at("frequencies_rad_s");
        const auto &v = j.at("vectors");
        const auto &e = j.at("eta");
        if (static_cast<int>(f.size()) != n || static_cast<int>(v.size()) != n || static_cast<int>(e.size()) != n) {
            fail(ErrorCode::Parse, "modes JSON arrays do not match n_modes");
        }
        m.frequencies.resize(n);
        m.vectors.resize(n, n);
        m.eta.resize(n, n);
        for (int k = 0; k < n; ++k) {
            m.frequencies(k) = f[k].get<double>();
            if (static_cast<int>(v[k].size()) != n || static_cast<int>(e[k].size()) != n) {
                fail(ErrorCode::Parse, "modes JSON rows do not match n_modes");
            }
            for (int i = 0; i < n; ++i) {
                m.vectors(k, i) = v[k][i].get<double>();
                m.eta(k, i) = e[k][i].get<double>();
            }
        }
        return m;
    });
}

std::string spectrum_csv(const ModeData &modes) {
    std::string out = "mode,frequency_hz\n";
    for (int k = 0; k < modes.size(); ++k) out += std::to_string(k + 1) + "," + num(angular_to_hz(modes.frequencies(k))) + "\n";
    return out;
}

std::string schedule_json(const PulseSchedule &sched) {
    json j;
    if (const auto *b = std::get_if<StepShape>(&sched.shape)) {
        j["shape"] = "B";
        j["step_levels"] = {b->levels[0], b->levels[1], b->levels[2]};
        j["ramp_fraction"] = b->ramp_fraction;
    } else {
        j["shape"] = "A";
        j["sine_exponent"] = SineShape::kExponent;
    }
    j["gate_time_s"] = sched.gate_time;
    j["n_oscillations"] = sched.n_oscillations;
    j["mu_ref_hz"] = angular_to_hz(sched.mu_ref);
    j["mu_ref_rad_s"] = sched.mu_ref;
    j["omega_max_hz"] = angular_to_hz(sched.amp_scale);
    j["omega_max_rad_s"] = sched.amp_scale;
    json hz = json::array(), rad = json::array(), all = json::array();
    for (double p : sched.fm_points) {
        hz.push_back(angular_to_hz(p));
        rad.push_back(p);
    }
    for (double p : sched.turning_points()) all.push_back(angular_to_hz(p));
    j["fm_points_hz"] = std::move(hz);
    j["fm_points_rad_s"] = std::move(rad);
    j["turning_points_hz"] = std::move(all);
    return dump(j);
}

PulseSchedule schedule_from_json(const std::string &text) {
    const json j = parse_json(text, "schedule");
    PulseSchedule s = guarded("schedule", [&] {
        PulseSchedule s;
        const std::string shape = j.at("shape").get<std::string>();
        if (shape == "B") {
            StepShape b;
            const auto &l = j.at("step_levels");
            if (l.size() != 3) fail(ErrorCode::Parse, "schedule JSON needs three step levels");
            for (int i = 0; i < 3; ++i) b.levels[i] = l[i].get<double>();
            b.ramp_fraction = j.at("ramp_fraction").get<double>();
            s.shape = b;
        } else if (shape == "A") {
            s.shape = SineShape{};
        } else {
            fail(ErrorCode::Parse, "schedule JSON has unknown shape '" + shape + "'");
        }
        s.gate_time = j.at("gate_time_s").get<double>();
        s.n_oscillations = j.at("n_oscillations").get<int>();
        s.mu_ref = j.at("mu_ref_rad_s").get<double>();
        s.amp_scale = j.at("omega_max_rad_s").get<double>();
        s.fm_points = j.at("fm_points_rad_s").get<std::vector<double>>();
        return s;
    });
    try {
        s.validate();
    } catch (const Error &e) {
        fail(ErrorCode::Parse, std::string("schedule JSON is not a valid schedule: ") + e.what());
    }
    return s;
}

std::string waveform_csv(const PulseSchedule &sched, int samples) {
    require(samples >= 1, "waveform needs at least one interval");
    std::string out = "t_s,rabi_hz,detuning_offset_hz\n";
    for (int i = 0; i <= samples; ++i) {
        const double u = static_cast<double>(i) / samples;
        const double t = u * sched.gate_time;
        out += num(t) + "," + num(angular_to_hz(sched.amp_scale * envelope(u, sched.shape))) + "," +
               num(angular_to_hz(fm_offset_at(u, sched))) + "\n";
    }
    return out;
}

std::string trace_csv(const std::vector<TracePoint> &trace) {
    std::string out = "eval,cost\n";
    for (const auto &p : trace) out += std::to_string(p.evaluation) + "," + num(p.cost) + "\n";
    return out;
}

std::vector<TracePoint> trace_from_csv(const std::string &text) {
    const CsvTable t = parse_csv(text);
    expect_header(t, {"eval", "cost"}, "trace");
    std::vector<TracePoint> out;
    for (const auto &r : t.rows) out.push_back({static_cast<long>(csv_number(r[0])), csv_number(r[1])});
    return out;
}

std::string report_json(const GateReport &report, const ModeData &modes) {
    json j;
    j["ion_i"] = report.pair.first + 1;
    j["ion_j"] = report.pair.second + 1;
    j["beta_rad"] = report.beta;
    j["motional_error"] = report.motional_error;
    j["omega_max_hz"] = angular_to_hz(report.omega_max);
    j["omega_max_rad_s"] = report.omega_max;
    j["error_convention"] = report.convention == ErrorConvention::SingleIon ? "single" : "both";
    json per_mode = json::array();
    for (const auto &tr : report.trajectories) {
        json m;
        m["mode"] = tr.mode + 1;
        m["frequency_hz"] = angular_to_hz(modes.frequencies(tr.mode));
        m["alpha_end_re"] = tr.endpoint.real();
        m["alpha_end_im"] = tr.endpoint.imag();
        m["alpha_end_abs"] = std::abs(tr.endpoint);
        per_mode.push_back(std::move(m));
    }
    j["modes"] = std::move(per_mode);
    return dump(j);
}

GateReport report_from_json(const std::string &text) {
    const json j = parse_json(text, "report");
    return guarded("report", [&] {
        GateReport r;
        r.pair = {j.at("ion_i").get<int>() - 1, j.at("ion_j").get<int>() - 1};
        r.beta = j.at("beta_rad").get<double>();
        r.motional_error = j.at("motional_error").get<double>();
        r.omega_max = j.at("omega_max_rad_s").get<double>();
        r.convention = j.at("error_convention").get<std::string>() == "single" ? ErrorConvention::SingleIon
                                                                              : ErrorConvention::BothIons;
        for (const auto &m : j.at("modes")) {
            Trajectory t;
            t.mode = m.at("mode").get<int>() - 1;
            t.endpoint = {m.at("alpha_end_re").get<double>(), m.at("alpha_end_im").get<double>()};
            r.trajectories.push_back(std::move(t));
        }
        return r;
    });
}

std::string trajectories_csv(const GateReport &report, const std::vector<int> &modes, int stride) {
    require(stride >= 1, "stride must be >= 1");
    std::string out = "mode,t_s,re_alpha,im_alpha\n";
    for (int k : modes) {
        if (k < 0 || k >= static_cast<int>(report.trajectories.size())) fail(ErrorCode::OutOfRange, "trajectory mode out of range");
        const auto &samples = report.trajectories[k].samples;
        for (std::size_t i = 0; i < samples.size(); i += static_cast<std::size_t>(stride)) {
            const auto &s = samples[i];
            out += std::to_string(k + 1) + "," + num(s.t) + "," + num(s.alpha.real()) + "," + num(s.alpha.imag()) + "\n";
        }
    }
    return out;
}

std::string sweep_csv(const RobustnessSweep &sweep) {
    std::string out = "offset_hz,error,excess_error,in_fit\n";
    for (std::size_t i = 0; i < sweep.offsets.size(); ++i) {
        const bool fit = i < sweep.in_fit.size() && sweep.in_fit[i];
        out += num(angular_to_hz(sweep.offsets[i])) + "," + num(sweep.errors[i]) + "," + num(sweep.excess(i)) + "," +
               (fit ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_json(const RobustnessSweep &sweep) {
    json j;
    j["baseline_error"] = sweep.baseline;
    j["fitted_slope"] = jnum(sweep.fitted_slope);
    j["slope_stderr"] = jnum(sweep.slope_stderr);
    j["fit_points"] = sweep.fit_points;
    j["offsets_rad_s"] = sweep.offsets;
    j["errors"] = sweep.errors;
    std::vector<int> mask;
    for (bool b : sweep.in_fit) mask.push_back(b ? 1 : 0);
    j["in_fit"] = mask;
    return dump(j);
}

RobustnessSweep sweep_from_json(const std::string &text) {
    const json j = parse_json(text, "sweep");
    return guarded("sweep", [&] {
        RobustnessSweep s;
        s.baseline = j.at("baseline_error").get<double>();
        s.fitted_slope = from_jnum(j.at("fitted_slope"));
        s.slope_stderr = from_jnum(j.at("slope_stderr"));
        s.fit_points = j.at("fit_points").get<int>();
        s.offsets = j.at("offsets_rad_s").get<std::vector<double>>();
        s.errors = j.at("errors").get<std::vector<double>>();
        for (int b : j.at("in_fit").get<std::vector<int>>()) s.in_fit.push_back(b != 0);
        if (s.offsets.size() != s.errors.size() || s.in_fit.size() != s.errors.size()) {
            fail(ErrorCode::Parse, "sweep JSON arrays differ in length");
        }
        return s;
    });
}

std::string powermap_csv(const PowerMap &map) {
    std::string out = "i,j,omega_max_hz\n";
    for (int i = 0; i < map.n; ++i) {
        for (int j = i + 1; j < map.n; ++j) {
            out += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + num(angular_to_hz(map.at(i, j))) + "\n";
        }
    }
    return out;
}

std::string powermap_json(const PowerMap &map, const PowerMapStats &stats) {
    json j;
    j["n_ions"] = map.n;
    json st;
    st["finite_pairs"] = stats.finite_pairs;
    st["degenerate_pairs"] = stats.degenerate_pairs;
    st["min_hz"] = jnum(angular_to_hz(stats.min));
    st["max_hz"] = jnum(angular_to_hz(stats.max));
    st["mean_hz"] = jnum(angular_to_hz(stats.mean));
    st["distance_correlation"] = jnum(stats.distance_correlation);
    st["edge_mean_hz"] = jnum(angular_to_hz(stats.edge_mean));
    st["central_mean_hz"] = jnum(angular_to_hz(stats.central_mean));
    st["long_distance_mean_hz"] = jnum(angular_to_hz(stats.long_distance_mean));
    j["stats"] = std::move(st);
    json rows = json::array(), flags = json::array();
    for (int i = 0; i < map.n; ++i) {
        json row = json::array();
        for (int k = 0; k < map.n; ++k) row.push_back(jnum(map.at(i, k)));
        rows.push_back(std::move(row));
        for (int k = i + 1; k < map.n; ++k) {
            if (map.is_degenerate(i, k)) flags.push_back({i + 1, k + 1});
        }
    }
    j["omega_max_rad_s"] = std::move(rows);
    j["degenerate_pairs"] = std::move(flags);
    return dump(j);
}

PowerMap powermap_from_json(const std::string &text) {
    const json j = parse_json(text, "power map");
    return guarded("power map", [&] {
        PowerMap m;
        m.n = j.at("n_ions").get<int>();
        const auto &rows = j.at("omega_max_rad_s");
        if (static_cast<int>(rows.size()) != m.n) fail(ErrorCode::Parse, "power map JSON has wrong row count");
        const std::size_t cells = static_cast<std::size_t>(m.n) * m.n;
        m.omega_max.assign(cells, kNaN);
        m.degenerate.assign(cells, false);
        for (int i = 0; i < m.n; ++i) {
            if (static_cast<int>(rows[i].size()) != m.n) fail(ErrorCode::Parse, "power map JSON has a short row");
            for (int k = 0; k < m.n; ++k) m.omega_max[static_cast<std::size_t>(i) * m.n + k] = from_jnum(rows[i][k]);
        }
        for (const auto &p : j.at("degenerate_pairs")) {
            const int a = p.at(0).get<int>() - 1, b = p.at(1).get<int>() - 1;
            if (a < 0 || b < 0 || a >= m.n || b >= m.n) fail(ErrorCode::Parse, "power map JSON flags a pair out of range");
            m.degenerate[static_cast<std::size_t>(a) * m.n + b] = true;
            m.degenerate[static_cast<std::size_t>(b) * m.n + a] = true;
        }
        return m;
    });
}

}  // namespace msgate
