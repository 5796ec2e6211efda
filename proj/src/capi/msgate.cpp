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

#include "msgate/msgate.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "core/analysis.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/serialize.hpp"

using namespace msgate;

struct msgate_config { RunConfig value; };
struct msgate_crystal { IonCrystal value; };
struct msgate_modes { ModeData value; };
struct msgate_schedule { PulseSchedule value; };
struct msgate_optimization { OptimizationResult value; };
struct msgate_report { GateReport value; };
struct msgate_sweep { RobustnessSweep value; };
struct msgate_powermap { PowerMap value; };

namespace {

thread_local std::string last_error;

template <typename Fn>
msgate_status guard(Fn &&fn) {
    last_error.clear();
    try {
        fn();
        return MSGATE_OK;
    } catch (const Error &e) {
        last_error = e.what();
        return static_cast<msgate_status>(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return MSGATE_ERR_INTERNAL;
    } catch (const std::exception &e) {
        last_error = e.what();
        return MSGATE_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return MSGATE_ERR_INTERNAL;
    }
}

template <typename T>
const T &deref(const T *p, const char *what) {
    if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " handle is NULL");
    return *p;
}

template <typename T>
T &deref(T *p, const char *what) {
    if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " handle is NULL");
    return *p;
}

template <typename T>
void check_out(T *out) {
    if (!out) fail(ErrorCode::InvalidArgument, "output pointer is NULL");
}

const char *check_str(const char *s, const char *what) {
    if (!s) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
    return s;
}

void check_capacity(size_t have, size_t need) {
    if (have < need) {
        fail(ErrorCode::InvalidArgument,
             "buffer holds " + std::to_string(have) + " values, " + std::to_string(need) + " needed");
    }
}

void copy_string(const std::string &s, char *buf, size_t capacity, size_t *needed) {
    if (needed) *needed = s.size() + 1;
    if (!buf) {
        if (!needed) fail(ErrorCode::InvalidArgument, "buffer and size pointer are both NULL");
        return;
    }
    check_capacity(capacity, s.size() + 1);
    std::memcpy(buf, s.c_str(), s.size() + 1);
}

int index_of(size_t i, int n, const char *what) {
    if (i >= static_cast<size_t>(n)) {
        fail(ErrorCode::OutOfRange, std::string(what) + " index " + std::to_string(i) + " outside [0, " +
                                        std::to_string(n) + ")");
    }
    return static_cast<int>(i);
}

unsigned threads_of(const RunConfig &cfg) { return cfg.threads; }

// Output location and thread count do not change any result, so they are
// left out of the hash.
std::uint64_t config_hash(const RunConfig &cfg) {
    RunConfig c = cfg;
    c.output_dir = RunConfig{}.output_dir;
    c.threads = RunConfig{}.threads;
    return fnv1a(to_ini(c));
}

std::string hash_hex(const RunConfig &cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

}  // namespace

extern "C" {

const char *msgate_version(void) { return MSGATE_VERSION_STRING; }

const char *msgate_status_string(msgate_status status) {
    switch (status) {
        case MSGATE_OK: return "ok";
        case MSGATE_ERR_INTERNAL: return "Internal";
        default:
            if (status >= MSGATE_ERR_INVALID_ARGUMENT && status <= MSGATE_ERR_PARSE) {
                return error_code_name(static_cast<ErrorCode>(status));
            }
            return "Unknown";
    }
}

const char *msgate_last_error(void) { return last_error.c_str(); }

// ---- configuration

msgate_status msgate_config_create(msgate_config **out) {
    return guard([&] {
        check_out(out);
        *out = new msgate_config{};
    });
}

msgate_status msgate_config_load(const char *path, msgate_config **out) {
    return guard([&] {
        check_out(out);
        *out = new msgate_config{load_config(check_str(path, "path"))};
    });
}

msgate_status msgate_config_set(msgate_config *cfg, const char *key, const char *value) {
    return guard([&] {
        set_config_value(deref(cfg, "config").value, check_str(key, "key"), check_str(value, "value"));
    });
}

msgate_status msgate_config_get(const msgate_config *cfg, const char *key, char *buf, size_t capacity,
                                size_t *needed) {
    return guard([&] {
        copy_string(get_config_value(deref(cfg, "config").value, check_str(key, "key")), buf, capacity, needed);
    });
}

msgate_status msgate_config_validate(const msgate_config *cfg) {
    return guard([&] { deref(cfg, "config").value.validate(); });
}

msgate_status msgate_config_to_ini(const msgate_config *cfg, char *buf, size_t capacity, size_t *needed) {
    return guard([&] { copy_string(to_ini(deref(cfg, "config").value), buf, capacity, needed); });
}

msgate_status msgate_config_hash(const msgate_config *cfg, uint64_t *out) {
    return guard([&] {
        check_out(out);
        *out = config_hash(deref(cfg, "config").value);
    });
}

void msgate_config_free(msgate_config *cfg) { delete cfg; }

// ---- crystal

msgate_status msgate_crystal_solve(const msgate_config *cfg, msgate_crystal **out) {
    return guard([&] {
        check_out(out);
        const RunConfig &c = deref(cfg, "config").value;
        c.validate();
        const TrapConfig trap = c.trap();
        const ChainPhysics phys{trap.charge(), trap.coulomb_k()};
        *out = new msgate_crystal{solve_equilibrium(trap.n_ions(), c.axial(trap), phys, c.descent())};
    });
}

msgate_status msgate_crystal_from_positions(const double *z_m, size_t n, msgate_crystal **out) {
    return guard([&] {
        check_out(out);
        if (!z_m || n < 2) fail(ErrorCode::InvalidArgument, "need at least two positions");
        IonCrystal c;
        c.positions.assign(z_m, z_m + n);
        for (size_t i = 1; i < n; ++i) {
            require(c.positions[i] > c.positions[i - 1], "positions must be strictly increasing");
        }
        *out = new msgate_crystal{std::move(c)};
    });
}

msgate_status msgate_crystal_load(const char *csv_path, msgate_crystal **out) {
    return guard([&] {
        check_out(out);
        *out = new msgate_crystal{crystal_from_csv(read_file(check_str(csv_path, "path")))};
    });
}

msgate_status msgate_crystal_save(const msgate_crystal *crystal, const msgate_config *cfg, const char *csv_path,
                                  const char *json_path) {
    return guard([&] {
        const IonCrystal &c = deref(crystal, "crystal").value;
        write_file_atomic(check_str(csv_path, "path"), crystal_csv(c));
        if (json_path) write_file_atomic(json_path, crystal_json(c, cfg ? hash_hex(cfg->value) : std::string()));
    });
}

msgate_status msgate_crystal_summary_get(const msgate_crystal *crystal, msgate_crystal_summary *out) {
    return guard([&] {
        check_out(out);
        const IonCrystal &c = deref(crystal, "crystal").value;
        *out = {c.positions.size(), c.mean_spacing(), c.spacing_variation(), c.residual_force, c.iterations, c.energy};
    });
}

msgate_status msgate_crystal_positions(const msgate_crystal *crystal, double *z_m, size_t capacity) {
    return guard([&] {
        check_out(z_m);
        const auto &p = deref(crystal, "crystal").value.positions;
        check_capacity(capacity, p.size());
        std::copy(p.begin(), p.end(), z_m);
    });
}

void msgate_crystal_free(msgate_crystal *crystal) { delete crystal; }

// ---- modes

msgate_status msgate_modes_solve(const msgate_config *cfg, const msgate_crystal *crystal, msgate_modes **out) {
    return guard([&] {
        check_out(out);
        const RunConfig &c = deref(cfg, "config").value;
        const IonCrystal &x = deref(crystal, "crystal").value;
        c.validate();
        const TrapConfig trap = c.trap();
        if (x.size() != trap.n_ions()) {
            fail(ErrorCode::InvalidArgument, "crystal has " + std::to_string(x.size()) + " ions, config expects " +
                                                 std::to_string(trap.n_ions()));
        }
        *out = new msgate_modes{solve_modes(build_transverse_matrix(x, trap), trap)};
    });
}

msgate_status msgate_modes_load(const char *json_path, msgate_modes **out) {
    return guard([&] {
        check_out(out);
        *out = new msgate_modes{modes_from_json(read_file(check_str(json_path, "path")))};
    });
}

msgate_status msgate_modes_save(const msgate_modes *modes, const char *json_path, const char *spectrum_csv_path) {
    return guard([&] {
        const ModeData &m = deref(modes, "modes").value;
        write_file_atomic(check_str(json_path, "path"), modes_json(m));
        if (spectrum_csv_path) write_file_atomic(spectrum_csv_path, spectrum_csv(m));
    });
}

msgate_status msgate_modes_count(const msgate_modes *modes, size_t *out) {
    return guard([&] {
        check_out(out);
        *out = static_cast<size_t>(deref(modes, "modes").value.size());
    });
}

msgate_status msgate_modes_frequencies(const msgate_modes *modes, double *out, size_t capacity) {
    return guard([&] {
        check_out(out);
        const ModeData &m = deref(modes, "modes").value;
        check_capacity(capacity, static_cast<size_t>(m.size()));
        for (int k = 0; k < m.size(); ++k) out[k] = m.frequencies(k);
    });
}

msgate_status msgate_modes_vector(const msgate_modes *modes, size_t mode, double *out, size_t capacity) {
    return guard([&] {
        check_out(out);
        const ModeData &m = deref(modes, "modes").value;
        const int k = index_of(mode, m.size(), "mode");
        check_capacity(capacity, static_cast<size_t>(m.size()));
        for (int i = 0; i < m.size(); ++i) out[i] = m.vectors(k, i);
    });
}

msgate_status msgate_modes_lamb_dicke(const msgate_modes *modes, size_t ion, size_t mode, double *out) {
    return guard([&] {
        check_out(out);
        const ModeData &m = deref(modes, "modes").value;
        *out = lamb_dicke(m, index_of(ion, m.size(), "ion"), index_of(mode, m.size(), "mode"));
    });
}

void msgate_modes_free(msgate_modes *modes) { delete modes; }

// ---- schedules

msgate_status msgate_schedule_default(const msgate_config *cfg, const msgate_modes *modes, msgate_schedule **out) {
    return guard([&] {
        check_out(out);
        const RunConfig &c = deref(cfg, "config").value;
        c.validate();
        *out = new msgate_schedule{c.base_schedule(deref(modes, "modes").value)};
    });
}

msgate_status msgate_schedule_load(const char *json_path, msgate_schedule **out) {
    return guard([&] {
        check_out(out);
        *out = new msgate_schedule{schedule_from_json(read_file(check_str(json_path, "path")))};
    });
}

msgate_status msgate_schedule_save(const msgate_schedule *sched, const char *json_path, const char *waveform_csv_path) {
    return guard([&] {
        const PulseSchedule &s = deref(sched, "schedule").value;
        write_file_atomic(check_str(json_path, "path"), schedule_json(s));
        if (waveform_csv_path) write_file_atomic(waveform_csv_path, waveform_csv(s));
    });
}

msgate_status msgate_schedule_info_get(const msgate_schedule *sched, msgate_schedule_info *out) {
    return guard([&] {
        check_out(out);
        const PulseSchedule &s = deref(sched, "schedule").value;
        out->shape = std::holds_alternative<StepShape>(s.shape) ? 'B' : 'A';
        out->gate_time_s = s.gate_time;
        out->mu_ref = s.mu_ref;
        out->omega_max = s.amp_scale;
        out->n_fm_points = s.fm_points.size();
    });
}

msgate_status msgate_schedule_fm_points(const msgate_schedule *sched, double *out, size_t capacity) {
    return guard([&] {
        check_out(out);
        const auto &p = deref(sched, "schedule").value.fm_points;
        check_capacity(capacity, p.size());
        std::copy(p.begin(), p.end(), out);
    });
}

msgate_status msgate_schedule_set_fm_points(msgate_schedule *sched, const double *points, size_t n) {
    return guard([&] {
        PulseSchedule &s = deref(sched, "schedule").value;
        if (!points) fail(ErrorCode::InvalidArgument, "points is NULL");
        if (n != s.fm_points.size()) {
            fail(ErrorCode::InvalidArgument, "schedule has " + std::to_string(s.fm_points.size()) + " free points");
        }
        PulseSchedule next = s;
        next.fm_points.assign(points, points + n);
        next.validate();
        s = std::move(next);
    });
}

msgate_status msgate_schedule_set_omega_max(msgate_schedule *sched, double omega_max) {
    return guard([&] {
        PulseSchedule &s = deref(sched, "schedule").value;
        require(std::isfinite(omega_max) && omega_max >= 0.0, "omega_max must be finite and non-negative");
        s.amp_scale = omega_max;
    });
}

msgate_status msgate_schedule_calibrate(msgate_schedule *sched, const msgate_config *cfg, const msgate_modes *modes,
                                       size_t ion_i, size_t ion_j, double *omega_max) {
    return guard([&] {
        PulseSchedule &s = deref(sched, "schedule").value;
        const RunConfig &c = deref(cfg, "config").value;
        const ModeData &m = deref(modes, "modes").value;
        const int i = index_of(ion_i, m.size(), "ion"), j = index_of(ion_j, m.size(), "ion");
        PulseSchedule ref = s;
        if (!(ref.amp_scale > 0.0)) ref.amp_scale = hz_to_angular(c.reference_rabi_hz);
        const double om = calibrate_power(ref, m, i, j, c.grid_intervals, threads_of(c));
        s.amp_scale = om;
        if (omega_max) *omega_max = om;
    });
}

void msgate_schedule_free(msgate_schedule *sched) { delete sched; }

// ---- optimization

msgate_status msgate_optimize(const msgate_config *cfg, const msgate_modes *modes, msgate_optimization **out) {
    return guard([&] {
        check_out(out);
        const RunConfig &c = deref(cfg, "config").value;
        c.validate();
        const ModeData &m = deref(modes, "modes").value;
        *out = new msgate_optimization{optimize(c.problem(m), m)};
    });
}

msgate_status msgate_optimization_result_get(const msgate_optimization *opt, msgate_optimization_result *out) {
    return guard([&] {
        check_out(out);
        const OptimizationResult &r = deref(opt, "optimization").value;
        *out = {r.initial_cost, r.final_cost, r.evaluations, r.best_start};
    });
}

msgate_status msgate_optimization_schedule(const msgate_optimization *opt, msgate_schedule **out) {
    return guard([&] {
        check_out(out);
        *out = new msgate_schedule{deref(opt, "optimization").value.schedule};
    });
}

msgate_status msgate_optimization_save_trace(const msgate_optimization *opt, const char *csv_path) {
    return guard([&] {
        write_file_atomic(check_str(csv_path, "path"), trace_csv(deref(opt, "optimization").value.trace));
    });
}

void msgate_optimization_free(msgate_optimization *opt) { delete opt; }

// ---- report

msgate_status msgate_report_run(const msgate_config *cfg, const msgate_modes *modes, const msgate_schedule *sched,
                                size_t ion_i, size_t ion_j, msgate_report **out) {
    return guard([&] {
        check_out(out);
        const RunConfig &c = deref(cfg, "config").value;
        const ModeData &m = deref(modes, "modes").value;
        const PulseSchedule &s = deref(sched, "schedule").value;
        const int i = index_of(ion_i, m.size(), "ion"), j = index_of(ion_j, m.size(), "ion");
        require(s.amp_scale > 0.0, "schedule has no amplitude; calibrate it first");
        GateReportOptions opts;
        opts.intervals = c.grid_intervals;
        opts.convention = c.convention();
        opts.threads = threads_of(c);
        *out = new msgate_report{gate_report(s, m, i, j, s.amp_scale, opts)};
    });
}

msgate_status msgate_report_values_get(const msgate_report *report, msgate_report_values *out) {
    return guard([&] {
        check_out(out);
        const GateReport &r = deref(report, "report").value;
        *out = {static_cast<size_t>(r.pair.first), static_cast<size_t>(r.pair.second), r.beta, r.motional_error,
                r.omega_max};
    });
}

msgate_status msgate_report_mode_endpoint(const msgate_report *report, size_t mode, double *re, double *im) {
    return guard([&] {
        check_out(re);
        check_out(im);
        const GateReport &r = deref(report, "report").value;
        const int k = index_of(mode, static_cast<int>(r.trajectories.size()), "mode");
        *re = r.trajectories[k].endpoint.real();
        *im = r.trajectories[k].endpoint.imag();
    });
}

msgate_status msgate_report_save(const msgate_report *report, const msgate_config *cfg, const msgate_modes *modes,
                                 const char *json_path, const char *trajectories_csv_path, size_t stride) {
    return guard([&] {
        const GateReport &r = deref(report, "report").value;
        const ModeData &m = deref(modes, "modes").value;
        write_file_atomic(check_str(json_path, "path"), report_json(r, m));
        if (trajectories_csv_path) {
            const RunConfig &c = deref(cfg, "config").value;
            require(stride >= 1, "stride must be >= 1");
            write_file_atomic(trajectories_csv_path,
                              trajectories_csv(r, c.target_indices(m.size()), static_cast<int>(stride)));
        }
    });
}

void msgate_report_free(msgate_report *report) { delete report; }

// ---- sweep

msgate_status msgate_sweep_run(const msgate_config *cfg, const msgate_modes *modes, const msgate_schedule *sched,
                               msgate_sweep **out) {
    return guard([&] {
        check_out(out);
        const RunConfig &c = deref(cfg, "config").value;
        c.validate();
        const ModeData &m = deref(modes, "modes").value;
        const PulseSchedule &s = deref(sched, "schedule").value;
        require(s.amp_scale > 0.0, "schedule has no amplitude; calibrate it first");
        const auto [i, j] = c.pair();
        index_of(static_cast<size_t>(i), m.size(), "ion");
        index_of(static_cast<size_t>(j), m.size(), "ion");
        SweepOptions opts;
        opts.intervals = c.grid_intervals;
        opts.convention = c.convention();
        opts.threads = threads_of(c);
        *out = new msgate_sweep{offset_sweep(s, m, {i, j}, c.sweep_offsets(), opts)};
    });
}

msgate_status msgate_sweep_load(const char *json_path, msgate_sweep **out) {
    return guard([&] {
        check_out(out);
        *out = new msgate_sweep{sweep_from_json(read_file(check_str(json_path, "path")))};
    });
}

msgate_status msgate_sweep_save(const msgate_sweep *sweep, const char *csv_path, const char *json_path) {
    return guard([&] {
        const RobustnessSweep &s = deref(sweep, "sweep").value;
        if (csv_path) write_file_atomic(csv_path, sweep_csv(s));
        if (json_path) write_file_atomic(json_path, sweep_json(s));
    });
}

msgate_status msgate_sweep_summary_get(const msgate_sweep *sweep, msgate_sweep_summary *out) {
    return guard([&] {
        check_out(out);
        const RobustnessSweep &s = deref(sweep, "sweep").value;
        *out = {s.offsets.size(), s.baseline, s.fitted_slope, s.slope_stderr, s.fit_points};
    });
}

msgate_status msgate_sweep_points(const msgate_sweep *sweep, double *offsets, double *errors, size_t capacity) {
    return guard([&] {
        const RobustnessSweep &s = deref(sweep, "sweep").value;
        check_capacity(capacity, s.offsets.size());
        if (offsets) std::copy(s.offsets.begin(), s.offsets.end(), offsets);
        if (errors) std::copy(s.errors.begin(), s.errors.end(), errors);
    });
}

msgate_status msgate_sweep_fit(msgate_sweep *sweep, double *slope, double *stderr_out) {
    return guard([&] {
        const SlopeFit fit = fit_slope(deref(sweep, "sweep").value);
        if (slope) *slope = fit.slope;
        if (stderr_out) *stderr_out = fit.standard_error;
    });
}

void msgate_sweep_free(msgate_sweep *sweep) { delete sweep; }

// ---- power map

msgate_status msgate_powermap_run(const msgate_config *cfg, const msgate_modes *modes, const msgate_schedule *sched,
                                  const size_t *pairs, size_t n_pairs, msgate_powermap **out) {
    return guard([&] {
        check_out(out);
        const RunConfig &c = deref(cfg, "config").value;
        const ModeData &m = deref(modes, "modes").value;
        const PulseSchedule &s = deref(sched, "schedule").value;
        std::optional<std::vector<std::pair<int, int>>> subset;
        if (pairs) {
            subset.emplace();
            for (size_t p = 0; p < n_pairs; ++p) {
                subset->emplace_back(index_of(pairs[2 * p], m.size(), "ion"), index_of(pairs[2 * p + 1], m.size(), "ion"));
            }
        }
        *out = new msgate_powermap{power_map(s, m, subset, c.grid_intervals, threads_of(c))};
    });
}

msgate_status msgate_sample_pairs(size_t n_ions, size_t count, uint64_t seed, size_t *pairs) {
    return guard([&] {
        check_out(pairs);
        if (n_ions > 100000 || count > n_ions * n_ions) fail(ErrorCode::InvalidArgument, "pair count out of range");
        const auto sample = sample_pairs(static_cast<int>(n_ions), static_cast<int>(count), seed);
        for (size_t p = 0; p < sample.size(); ++p) {
            pairs[2 * p] = static_cast<size_t>(sample[p].first);
            pairs[2 * p + 1] = static_cast<size_t>(sample[p].second);
        }
    });
}

msgate_status msgate_powermap_load(const char *json_path, msgate_powermap **out) {
    return guard([&] {
        check_out(out);
        *out = new msgate_powermap{powermap_from_json(read_file(check_str(json_path, "path")))};
    });
}

msgate_status msgate_powermap_save(const msgate_powermap *map, const msgate_crystal *crystal, const char *csv_path,
                                   const char *json_path) {
    return guard([&] {
        const PowerMap &pm = deref(map, "power map").value;
        if (csv_path) write_file_atomic(csv_path, powermap_csv(pm));
        if (json_path) {
            const auto stats = power_map_stats(pm, deref(crystal, "crystal").value.positions);
            write_file_atomic(json_path, powermap_json(pm, stats));
        }
    });
}

msgate_status msgate_powermap_entry(const msgate_powermap *map, size_t i, size_t j, double *out) {
    return guard([&] {
        check_out(out);
        const PowerMap &pm = deref(map, "power map").value;
        const int a = index_of(i, pm.n, "ion"), b = index_of(j, pm.n, "ion");
        if (a == b) fail(ErrorCode::OutOfRange, "the power map has no diagonal entries");
        if (pm.is_degenerate(a, b)) {
            *out = std::numeric_limits<double>::quiet_NaN();
            fail(ErrorCode::DegeneratePair, "pair (" + std::to_string(a) + ", " + std::to_string(b) + ") is uncoupled");
        }
        *out = pm.at(a, b);
    });
}

msgate_status msgate_powermap_stats_get(const msgate_powermap *map, const msgate_crystal *crystal,
                                        msgate_powermap_stats *out) {
    return guard([&] {
        check_out(out);
        const auto st = power_map_stats(deref(map, "power map").value, deref(crystal, "crystal").value.positions);
        *out = {st.finite_pairs, st.degenerate_pairs, st.min, st.max, st.mean, st.distance_correlation,
                st.edge_mean, st.central_mean, st.long_distance_mean};
    });
}

void msgate_powermap_free(msgate_powermap *map) { delete map; }

}  // extern "C"
