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

#include "core/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/quadrature.hpp"

namespace msgate {

namespace {

int even_intervals(int intervals) {
    require(intervals >= 2, "at least two grid intervals are required");
    return intervals % 2 ? intervals + 1 : intervals;
}

// int_0^{v tau} f dt for v in [0, 1/2], summing whole raised-cosine segments
// and the partial one in closed form.
double half_pattern_integral(double v, const PulseSchedule &sched) {
    const std::size_t n = sched.fm_points.size();
    const double tau = sched.gate_time;
    if (n == 1) return sched.fm_points[0] * v * tau;
    const double seg_len = tau / static_cast<double>(2 * n - 2);
    const double x = v * static_cast<double>(2 * n - 2);
    const std::size_t full = std::min(static_cast<std::size_t>(x), n - 2);
    double total = 0.0;
    for (std::size_t s = 0; s < full; ++s) {
        total += 0.5 * (sched.fm_points[s] + sched.fm_points[s + 1]) * seg_len;
    }
    const double frac = x - static_cast<double>(full);
    const double a = sched.fm_points[full];
    const double b = sched.fm_points[full + 1];
    total += seg_len * (a * frac + 0.5 * (b - a) * (frac - std::sin(kPi * frac) / kPi));
    return total;
}

void check_ion(const ModeData &modes, int ion) {
    if (ion < 0 || ion >= modes.size()) {
        std::ostringstream msg;
        msg << "ion index " << ion << " outside [0, " << modes.size() << ")";
        fail(ErrorCode::OutOfRange, msg.str());
    }
}

}  // namespace

std::vector<double> sample_fm_phase(const PulseSchedule &sched, int intervals, double frequency_offset) {
    const int g = even_intervals(intervals);
    const double h = sched.gate_time / g;
    std::vector<double> phase(static_cast<std::size_t>(g) + 1);
    const int half = g / 2;
    for (int i = 0; i <= half; ++i) phase[i] = half_pattern_integral(static_cast<double>(i) / g, sched);
    const double phi_half = phase[half];
    for (int i = half + 1; i <= g; ++i) phase[i] = 2.0 * phi_half - phase[g - i];
    if (frequency_offset != 0.0) {
        for (int i = 0; i <= g; ++i) phase[i] += frequency_offset * (h * i);
    }
    return phase;
}

SampledDrive sample_drive(const PulseSchedule &sched, int intervals, double frequency_offset) {
    sched.validate();
    const int g = even_intervals(intervals);
    SampledDrive d;
    d.gate_time = sched.gate_time;
    d.mu_ref = sched.mu_ref;
    d.step = sched.gate_time / g;
    d.amplitude.resize(static_cast<std::size_t>(g) + 1);
    for (int i = 0; i <= g / 2; ++i) d.amplitude[i] = sched.amp_scale * envelope(static_cast<double>(i) / g, sched.shape);
    for (int i = g / 2 + 1; i <= g; ++i) d.amplitude[i] = d.amplitude[g - i];
    d.phase = sample_fm_phase(sched, g, frequency_offset);
    return d;
}

SampledDrive sample_drive(double gate_time, double mu_ref, int intervals,
                          const std::function<double(double)> &amplitude,
                          const std::function<double(double)> &fm_offset) {
    require(gate_time > 0.0, "gate_time must be positive");
    const int g = even_intervals(intervals);
    SampledDrive d;
    d.gate_time = gate_time;
    d.mu_ref = mu_ref;
    d.step = gate_time / g;
    d.amplitude.resize(static_cast<std::size_t>(g) + 1);
    std::vector<double> f(static_cast<std::size_t>(g) + 1);
    for (int i = 0; i <= g; ++i) {
        d.amplitude[i] = amplitude(d.time(i));
        f[i] = fm_offset(d.time(i));
    }
    d.phase = quad::cumulative_simpson(f, d.step);
    return d;
}

double accumulate_phase(const PulseSchedule &sched, double omega_k, double t, int intervals) {
    sched.validate();
    const double tau = sched.gate_time;
    if (!(t >= 0.0 && t <= tau * (1.0 + 1e-12))) {
        fail(ErrorCode::OutOfRange, "accumulate_phase: t outside [0, tau]");
    }
    t = std::min(t, tau);
    const std::size_t segments = std::max<std::size_t>(1, 2 * sched.fm_points.size() - 2);
    const double seg_len = tau / static_cast<double>(segments);
    const std::size_t per_segment = static_cast<std::size_t>(
        std::max(2, even_intervals(std::max(2, intervals / static_cast<int>(segments)))));
    auto detuning = [&](double s) { return drive_frequency(s, sched) - omega_k; };

    double theta = 0.0;
    double a = 0.0;
    for (std::size_t s = 0; s < segments && a < t; ++s) {
        const double b = std::min(t, seg_len * static_cast<double>(s + 1));
        const double share = (b - a) / seg_len;
        const auto panels = static_cast<std::size_t>(std::ceil(share * static_cast<double>(per_segment)));
        theta += quad::simpson_fn(detuning, a, b, std::max<std::size_t>(2, panels));
        a = b;
    }
    return theta;
}

Trajectory integrate_alpha(const SampledDrive &drive, double eta, double omega_k, int mode) {
    const int g = drive.intervals();
    const double detune = drive.mu_ref - omega_k;
    std::vector<Complex> f(static_cast<std::size_t>(g) + 1);
    std::vector<double> theta(f.size());
    for (int i = 0; i <= g; ++i) {
        theta[i] = drive.phase[i] + detune * drive.time(i);
        f[i] = drive.amplitude[i] * std::polar(1.0, theta[i]);
    }
    const auto running = quad::cumulative_simpson(f, drive.step);
    Trajectory out;
    out.mode = mode;
    out.step = drive.step;
    out.samples.reserve(f.size());
    for (int i = 0; i <= g; ++i) out.samples.push_back({drive.time(i), eta * running[i], theta[i]});
    out.samples.front().alpha = Complex{};
    out.endpoint = out.samples.back().alpha;
    return out;
}

Trajectory integrate_alpha(const PulseSchedule &sched, double eta, double omega_k, int intervals) {
    return integrate_alpha(sample_drive(sched, intervals), eta, omega_k);
}

Complex time_averaged_displacement(const Trajectory &traj) {
    require(traj.samples.size() >= 3, "trajectory has too few samples");
    std::vector<Complex> a(traj.samples.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = traj.samples[i].alpha;
    const double tau = traj.samples.back().t - traj.samples.front().t;
    return quad::simpson(a, traj.step) / tau;
}

ModeResponse mode_response(const SampledDrive &drive, double omega_k) {
    const int g = drive.intervals();
    const double detune = drive.mu_ref - omega_k;
    std::vector<Complex> rot(static_cast<std::size_t>(g) + 1);
    std::vector<Complex> f(rot.size());
    for (int i = 0; i <= g; ++i) {
        rot[i] = std::polar(1.0, drive.phase[i] + detune * drive.time(i));
        f[i] = drive.amplitude[i] * rot[i];
    }
    const auto running = quad::cumulative_simpson(f, drive.step);
    // sin(theta2 - theta1) = Im(e^{i theta2} e^{-i theta1}), and the inner
    // integral of Omega e^{-i theta1} up to t2 is conj(running(t2)).
    std::vector<double> inner(rot.size());
    for (int i = 0; i <= g; ++i) inner[i] = drive.amplitude[i] * std::imag(rot[i] * std::conj(running[i]));

    ModeResponse r;
    r.endpoint = running.back();
    r.mean = quad::simpson(running, drive.step) / drive.gate_time;
    r.area = quad::simpson(inner, drive.step);
    return r;
}

std::vector<ModeResponse> mode_responses(const SampledDrive &drive, const ModeData &modes,
                                         unsigned threads) {
    std::vector<ModeResponse> out(static_cast<std::size_t>(modes.size()));
    parallel_for(out.size(), threads,
                 [&](std::size_t k) { out[k] = mode_response(drive, modes.frequencies(static_cast<Eigen::Index>(k))); });
    return out;
}

double entangling_angle(const std::vector<ModeResponse> &responses, const ModeData &modes,
                        int ion_i, int ion_j) {
    check_ion(modes, ion_i);
    check_ion(modes, ion_j);
    require(ion_i != ion_j, "entangling angle needs two distinct ions");
    require(responses.size() == static_cast<std::size_t>(modes.size()), "one response per mode required");
    double beta = 0.0;
    for (int k = 0; k < modes.size(); ++k) beta += modes.eta(ion_i, k) * modes.eta(ion_j, k) * responses[k].area;
    return 2.0 * beta;
}

double entangling_angle(const SampledDrive &drive, const ModeData &modes, int ion_i, int ion_j,
                        unsigned threads) {
    return entangling_angle(mode_responses(drive, modes, threads), modes, ion_i, ion_j);
}

double motional_error(const std::vector<ModeResponse> &responses, const ModeData &modes,
                      int ion_i, int ion_j, ErrorConvention convention) {
    check_ion(modes, ion_i);
    check_ion(modes, ion_j);
    require(responses.size() == static_cast<std::size_t>(modes.size()), "one response per mode required");
    double err = 0.0;
    for (int k = 0; k < modes.size(); ++k) {
        double weight = modes.eta(ion_i, k) * modes.eta(ion_i, k);
        if (convention == ErrorConvention::BothIons) weight += modes.eta(ion_j, k) * modes.eta(ion_j, k);
        err += weight * std::norm(responses[k].endpoint);
    }
    return err;
}

double motional_error(const SampledDrive &drive, const ModeData &modes, int ion_i, int ion_j,
                      ErrorConvention convention, unsigned threads) {
    return motional_error(mode_responses(drive, modes, threads), modes, ion_i, ion_j, convention);
}

GateReport gate_report(const PulseSchedule &sched, const ModeData &modes, int ion_i, int ion_j,
                       double omega_max, const GateReportOptions &opts) {
    require(omega_max >= 0.0, "omega_max must be non-negative");
    PulseSchedule scaled = sched;
    scaled.amp_scale = omega_max;
    const SampledDrive drive = sample_drive(scaled, opts.intervals);
    const auto responses = mode_responses(drive, modes, opts.threads);

    GateReport rep;
    rep.pair = {ion_i, ion_j};
    rep.omega_max = omega_max;
    rep.convention = opts.convention;
    rep.beta = entangling_angle(responses, modes, ion_i, ion_j);
    rep.motional_error = motional_error(responses, modes, ion_i, ion_j, opts.convention);
    if (opts.keep_trajectories) {
        rep.trajectories.resize(static_cast<std::size_t>(modes.size()));
        parallel_for(rep.trajectories.size(), opts.threads, [&](std::size_t k) {
            const int mode = static_cast<int>(k);
            rep.trajectories[k] = integrate_alpha(drive, modes.eta(ion_i, mode), modes.frequencies(mode), mode);
        });
    }
    return rep;
}

}  // namespace msgate
