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

#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "core/modes.hpp"
#include "core/pulse.hpp"

namespace msgate {

using Complex = std::complex<double>;

inline constexpr int kDefaultIntervals = 20000;

/// Drive sampled on a uniform grid t_i = i tau / G. `phase` holds
/// Phi(t_i) = int_0^{t_i} (mu - mu_ref) dt, so the phase of mode k is
/// theta_k(t_i) = Phi(t_i) + (mu_ref - w_k) t_i.
struct SampledDrive {
    double gate_time = 0.0;
    double mu_ref = 0.0;
    double step = 0.0;
    std::vector<double> amplitude;   // Omega(t_i), rad/s
    std::vector<double> phase;       // Phi(t_i), rad

    int intervals() const { return static_cast<int>(amplitude.size()) - 1; }
    double time(int i) const { return step * i; }
};

/// Samples a schedule. `frequency_offset` is a static shift added to mu(t)
/// (a trap-frequency drift seen from the drive). Phi is integrated in closed
/// form segment by segment. Samples i and G - i are evaluated at the same
/// folded time, so the grid is exactly symmetric.
SampledDrive sample_drive(const PulseSchedule &sched, int intervals = kDefaultIntervals,
                          double frequency_offset = 0.0);

/// Phi(t_i) alone, as stored in SampledDrive::phase.
std::vector<double> sample_fm_phase(const PulseSchedule &sched, int intervals = kDefaultIntervals,
                                    double frequency_offset = 0.0);

/// Samples arbitrary Omega(t) and mu(t) - mu_ref; used for closed-form checks.
SampledDrive sample_drive(double gate_time, double mu_ref, int intervals,
                          const std::function<double(double)> &amplitude,
                          const std::function<double(double)> &fm_offset);

/// theta_k(t) = int_0^t (mu(t') - w_k) dt' by composite Simpson. Panels
/// (about `intervals` per gate) are laid out per frequency segment so no
/// panel straddles a turning point.
double accumulate_phase(const PulseSchedule &sched, double omega_k, double t,
                        int intervals = kDefaultIntervals);

struct TrajectorySample {
    double t;
    Complex alpha;
    double phase;
};

struct Trajectory {
    int mode = 0;
    double step = 0.0;
    std::vector<TrajectorySample> samples;
    Complex endpoint;
};

/// alpha_k(t) = eta int_0^t Omega e^{i theta_k} dt' on the drive grid.
Trajectory integrate_alpha(const SampledDrive &drive, double eta, double omega_k, int mode = 0);
Trajectory integrate_alpha(const PulseSchedule &sched, double eta, double omega_k,
                           int intervals = kDefaultIntervals);

/// (1/tau) int_0^tau alpha(t) dt by Simpson over the stored samples.
Complex time_averaged_displacement(const Trajectory &traj);

/// Pair-independent quantities of one mode under a drive (eta = 1):
/// endpoint = int Omega e^{i theta}, mean = time average of the running
/// integral, area = int dt2 int^{t2} dt1 Omega Omega sin(theta2 - theta1).
struct ModeResponse {
    Complex endpoint;
    Complex mean;
    double area = 0.0;
};

ModeResponse mode_response(const SampledDrive &drive, double omega_k);

/// Responses of all modes, evaluated on up to `threads` workers.
std::vector<ModeResponse> mode_responses(const SampledDrive &drive, const ModeData &modes,
                                         unsigned threads = 1);

/// Which addressed ions contribute to the motional error.
enum class ErrorConvention {
    BothIons,    // sum over i and j, each with its own eta
    SingleIon,   // ion i only
};

/// beta_ij = 2 sum_k eta_ik eta_jk area_k.
double entangling_angle(const std::vector<ModeResponse> &responses, const ModeData &modes,
                        int ion_i, int ion_j);
double entangling_angle(const SampledDrive &drive, const ModeData &modes, int ion_i, int ion_j,
                        unsigned threads = 1);

/// E = sum_k (eta_ik^2 + eta_jk^2) |endpoint_k|^2 (or ion i only).
double motional_error(const std::vector<ModeResponse> &responses, const ModeData &modes,
                      int ion_i, int ion_j, ErrorConvention convention = ErrorConvention::BothIons);
double motional_error(const SampledDrive &drive, const ModeData &modes, int ion_i, int ion_j,
                      ErrorConvention convention = ErrorConvention::BothIons, unsigned threads = 1);

struct GateReport {
    std::pair<int, int> pair;
    double beta = 0.0;                 // rad, at omega_max
    double motional_error = 0.0;
    double omega_max = 0.0;            // rad/s
    ErrorConvention convention = ErrorConvention::BothIons;
    /// alpha_k^{(i)}(t) for every mode k at omega_max. The j-ion path is
    /// the same curve scaled by eta_jk / eta_ik.
    std::vector<Trajectory> trajectories;
};

struct GateReportOptions {
    int intervals = kDefaultIntervals;
    ErrorConvention convention = ErrorConvention::BothIons;
    unsigned threads = 1;
    bool keep_trajectories = true;
};

/// Evaluates the schedule with amp_scale = omega_max (normally the value
/// from calibrate_power, which makes beta = pi/4).
GateReport gate_report(const PulseSchedule &sched, const ModeData &modes, int ion_i, int ion_j,
                       double omega_max, const GateReportOptions &opts = {});

}  // namespace msgate
