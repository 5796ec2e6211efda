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

#include "core/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/quadrature.hpp"

namespace msgate {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double raised_cosine(double x) { return 0.5 * (1.0 - std::cos(kPi * x)); }

double fold(double u) { return u > 0.5 ? 1.0 - u : u; }

// Step shape on the first half of the gate: ramp up to levels[0], plateau,
// ramp to levels[1], half of the central plateau.
struct StepLayout {
    double ramp;
    double plateau;
};

StepLayout layout(const StepShape &s) {
    return {s.ramp_fraction, (1.0 - 4.0 * s.ramp_fraction) / 3.0};
}

double step_value(double u, const StepShape &s) {
    const auto [w, p] = layout(s);
    if (u < w) return s.levels[0] * raised_cosine(u / w);
    if (u < w + p) return s.levels[0];
    if (u < 2.0 * w + p) return s.levels[0] + (s.levels[1] - s.levels[0]) * raised_cosine((u - w - p) / w);
    return s.levels[1];
}

double step_slope(double u, const StepShape &s) {
    const auto [w, p] = layout(s);
    if (u < w) return s.levels[0] * 0.5 * kPi / w * std::sin(kPi * u / w);
    if (u < w + p) return 0.0;
    if (u < 2.0 * w + p) return (s.levels[1] - s.levels[0]) * 0.5 * kPi / w * std::sin(kPi * (u - w - p) / w);
    return 0.0;
}

void check_time(double t, const PulseSchedule &sched) {
    const double slack = 1e-12 * sched.gate_time;
    if (!(t >= -slack && t <= sched.gate_time + slack)) {
        std::ostringstream msg;
        msg << "time " << t << " s outside the gate [0, " << sched.gate_time << "] s";
        fail(ErrorCode::OutOfRange, msg.str());
    }
}

double clamp_fraction(double t, const PulseSchedule &sched) {
    return std::clamp(t / sched.gate_time, 0.0, 1.0);
}

}  // namespace

void PulseSchedule::validate() const {
    require(gate_time > 0.0, "gate_time must be positive");
    require(amp_scale >= 0.0, "amp_scale must be non-negative");
    require(n_oscillations >= 1, "n_oscillations must be >= 1");
    require(fm_points.size() == static_cast<std::size_t>(n_oscillations),
            "fm_points must hold n_oscillations free turning points");
    for (double p : fm_points) {
        require(std::isfinite(p) && std::abs(p) <= kMaxFmOffset,
                "fm turning point exceeds the 10 kHz bound");
    }
    if (const auto *s = std::get_if<StepShape>(&shape)) {
        require(s->ramp_fraction > 0.0 && 4.0 * s->ramp_fraction < 1.0,
                "ramp_fraction must lie in (0, 0.25)");
        for (double l : s->levels) require(l >= 0.0, "step levels must be non-negative");
    }
}

std::vector<double> PulseSchedule::turning_points() const {
    const std::size_t n = fm_points.size();
    std::vector<double> all(fm_points);
    for (std::size_t m = n; m-- > 1;) all.push_back(fm_points[m - 1]);
    return all;
}

double envelope(double u, const AmplitudeShape &shape) {
    const double v = fold(std::clamp(u, 0.0, 1.0));
    return std::visit(overloaded{
                          [v](const SineShape &) { return std::pow(std::sin(kPi * v), SineShape::kExponent); },
                          [v](const StepShape &s) { return step_value(v, s); },
                      },
                      shape);
}

double envelope_slope(double u, const AmplitudeShape &shape) {
    u = std::clamp(u, 0.0, 1.0);
    const double v = fold(u);
    const double mirror = u > 0.5 ? -1.0 : 1.0;
    const double d = std::visit(
        overloaded{
            [v](const SineShape &) {
                const double s = std::sin(kPi * v);
                return SineShape::kExponent * std::pow(s, SineShape::kExponent - 1.0) * std::cos(kPi * v) * kPi;
            },
            [v](const StepShape &s) { return step_slope(v, s); },
        },
        shape);
    return mirror * d;
}

double amplitude(double t, const PulseSchedule &sched) {
    check_time(t, sched);
    return sched.amp_scale * envelope(clamp_fraction(t, sched), sched.shape);
}

double amplitude_rate(double t, const PulseSchedule &sched) {
    check_time(t, sched);
    return sched.amp_scale * envelope_slope(clamp_fraction(t, sched), sched.shape) / sched.gate_time;
}

double fm_offset_at(double u, const PulseSchedule &sched) {
    const std::size_t n = sched.fm_points.size();
    if (n == 1) return sched.fm_points[0];
    const double v = fold(std::clamp(u, 0.0, 1.0));
    // Knots sit at v = m / (2n - 2); the center knot m = n - 1 is at v = 1/2.
    const double x = v * static_cast<double>(2 * n - 2);
    const std::size_t seg = std::min(static_cast<std::size_t>(x), n - 2);
    const double frac = x - static_cast<double>(seg);
    const double a = sched.fm_points[seg];
    const double b = sched.fm_points[seg + 1];
    return a + (b - a) * raised_cosine(frac);
}

double drive_frequency(double t, const PulseSchedule &sched) {
    check_time(t, sched);
    return sched.mu_ref + fm_offset_at(clamp_fraction(t, sched), sched);
}

double max_amplitude_rate(const PulseSchedule &sched, int samples) {
    double best = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double u = static_cast<double>(i) / samples;
        best = std::max(best, std::abs(envelope_slope(u, sched.shape)));
    }
    return sched.amp_scale * best / sched.gate_time;
}

double fm_oscillation_amplitude(const PulseSchedule &sched) {
    const auto [lo, hi] = std::minmax_element(sched.fm_points.begin(), sched.fm_points.end());
    return 0.5 * (*hi - *lo);
}

double FourierDecomposition::evaluate(double t) const {
    double v = mean;
    for (std::size_t n = 0; n < coefficients.size(); ++n) v += coefficients[n] * std::cos(harmonics[n] * t);
    return v;
}

FourierDecomposition fourier_decompose(const PulseSchedule &sched, int n_max, int intervals) {
    sched.validate();
    require(n_max >= 1, "n_max must be >= 1");
    const double tau = sched.gate_time;
    FourierDecomposition out;
    out.gate_time = tau;
    // The pattern is smooth inside each segment only, so integrate per
    // segment to keep Simpson at full order.
    const std::size_t segments = 2 * sched.fm_points.size() - 2;
    const std::size_t per_segment = std::max<std::size_t>(2, static_cast<std::size_t>(intervals) /
                                                                  std::max<std::size_t>(segments, 1));
    auto integrate = [&](auto &&fn) {
        if (segments == 0) return quad::simpson_fn(fn, 0.0, tau, static_cast<std::size_t>(intervals));
        double total = 0.0;
        for (std::size_t s = 0; s < segments; ++s) {
            const double a = tau * static_cast<double>(s) / static_cast<double>(segments);
            const double b = tau * static_cast<double>(s + 1) / static_cast<double>(segments);
            total += quad::simpson_fn(fn, a, b, per_segment);
        }
        return total;
    };
    auto offset = [&](double t) { return fm_offset_at(t / tau, sched); };

    const double mean_offset = integrate(offset) / tau;
    out.mean = sched.mu_ref + mean_offset;
    for (int n = 1; n <= n_max; ++n) {
        const double w = kTwoPi * n / tau;
        const double a = (2.0 / tau) * integrate([&](double t) { return (offset(t) - mean_offset) * std::cos(w * t); });
        out.harmonics.push_back(w);
        out.coefficients.push_back(a);
    }
    return out;
}

FourierApprox alpha_fourier_approx(const PulseSchedule &sched, double eta, double omega_k,
                                   int n_max, int intervals) {
    const FourierDecomposition fd = fourier_decompose(sched, n_max, intervals);
    const double tau = sched.gate_time;
    const double delta0 = fd.mean - omega_k;

    if (intervals % 2) ++intervals;
    const double h = tau / intervals;
    std::vector<double> omega(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) {
        omega[i] = sched.amp_scale * envelope(static_cast<double>(std::min(i, intervals - i)) / intervals, sched.shape);
    }
    auto tone = [&](double nu) {
        std::vector<std::complex<double>> f(omega.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = omega[i] * std::polar(1.0, nu * h * static_cast<double>(i));
        return quad::simpson(f, h);
    };

    FourierApprox out;
    std::complex<double> sum = tone(delta0);
    for (std::size_t n = 0; n < fd.coefficients.size(); ++n) {
        const double a = fd.coefficients[n];
        const double w = fd.harmonics[n];
        out.max_a_tau = std::max(out.max_a_tau, std::abs(a) * tau);
        if (a == 0.0) continue;
        sum += a / (2.0 * w) * (tone(delta0 + w) - tone(delta0 - w));
    }
    out.endpoint = eta * sum;
    out.breakdown = out.max_a_tau > 0.3;
    return out;
}

}  // namespace msgate
