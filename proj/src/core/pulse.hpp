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

#include <array>
#include <complex>
#include <variant>
#include <vector>

#include "core/constants.hpp"

namespace msgate {

/// Shape A: sin(pi t / tau)^1.5.
struct SineShape {
    static constexpr double kExponent = 1.5;
};

/// Shape B: three plateaus joined by raised-cosine ramps of width
/// ramp_fraction * tau, starting and ending at zero. The four ramps take
/// 4 * ramp_fraction of the gate; the plateaus share the rest equally.
struct StepShape {
    std::array<double, 3> levels{0.55, 1.0, 0.55};
    double ramp_fraction = 0.08;
};

using AmplitudeShape = std::variant<SineShape, StepShape>;

inline constexpr double kMaxFmOffset = kTwoPi * 10e3;   // rad/s

/// Amplitude- and frequency-modulated drive over one gate. The frequency
/// pattern has 2 n_oscillations - 1 turning points equally spaced over
/// [0, tau]; point m mirrors point 2 n_oscillations - 2 - m, so only the
/// first n_oscillations values (fm_points, the last being the center) are
/// free.
struct PulseSchedule {
    double gate_time = 500e-6;          // s
    AmplitudeShape shape = SineShape{};
    double amp_scale = 0.0;             // rad/s, peak carrier Rabi frequency
    double mu_ref = 0.0;                // rad/s
    std::vector<double> fm_points = std::vector<double>(8, 0.0);   // rad/s
    int n_oscillations = 8;

    /// Throws InvalidArgument on a malformed schedule.
    void validate() const;
    std::vector<double> turning_points() const;
};

/// Normalized envelope (peak-scaled) at fraction u of the gate, folded
/// about u = 1/2 so the shape is exactly time-symmetric.
double envelope(double u, const AmplitudeShape &shape);
double envelope_slope(double u, const AmplitudeShape &shape);   // d/du

/// Omega(t) [rad/s]. Throws OutOfRange outside [0, tau].
double amplitude(double t, const PulseSchedule &sched);
/// dOmega/dt [rad/s^2].
double amplitude_rate(double t, const PulseSchedule &sched);

/// f(u) = mu(t) - mu_ref at fraction u of the gate, piecewise raised cosine
/// between turning points (zero slope at every knot).
double fm_offset_at(double u, const PulseSchedule &sched);

/// mu(t) [rad/s]. Throws OutOfRange outside [0, tau].
double drive_frequency(double t, const PulseSchedule &sched);

/// Largest |dOmega/dt| on a uniform grid of `samples` intervals.
double max_amplitude_rate(const PulseSchedule &sched, int samples = 20000);

/// Peak-to-peak / 2 of the turning points.
double fm_oscillation_amplitude(const PulseSchedule &sched);

/// mu(t) = mean + sum_n a_n cos(w_n t), w_n = 2 pi n / tau.
struct FourierDecomposition {
    double mean = 0.0;                   // rad/s
    std::vector<double> coefficients;    // a_n, rad/s
    std::vector<double> harmonics;       // w_n, rad/s
    double gate_time = 0.0;

    double evaluate(double t) const;
};

FourierDecomposition fourier_decompose(const PulseSchedule &sched, int n_max = 32,
                                       int intervals = 20000);

struct FourierApprox {
    std::complex<double> endpoint;
    double max_a_tau = 0.0;    // max_n |a_n| tau
    bool breakdown = false;    // max_a_tau > 0.3: the expansion is outside its regime
};

/// First-order sideband expansion of alpha_k(tau): the drive at the mean
/// detuning plus tones at +-w_n weighted by a_n / (2 w_n).
FourierApprox alpha_fourier_approx(const PulseSchedule &sched, double eta, double omega_k,
                                   int n_max = 32, int intervals = 20000);

}  // namespace msgate
