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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/pulse.hpp"
#include "core/trajectory.hpp"

namespace msgate {
namespace {

PulseSchedule random_schedule(std::uint64_t seed, double scale_hz = 2e3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PulseSchedule s;
    s.amp_scale = kTwoPi * 100e3;
    s.mu_ref = kTwoPi * 2.8e6;
    for (double &p : s.fm_points) p = kTwoPi * scale_hz * u(rng);
    return s;
}

ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode{};
}

TEST(Amplitude, SineShapeEndpointsAndPeak) {
    PulseSchedule s;
    s.amp_scale = 3.0;
    EXPECT_EQ(amplitude(s.gate_time / 2.0, s), 3.0);
    EXPECT_EQ(amplitude(0.0, s), 0.0);
    EXPECT_NEAR(amplitude(s.gate_time, s), 0.0, 1e-15);
    const double t = 0.3 * s.gate_time;
    EXPECT_NEAR(amplitude(t, s), 3.0 * std::pow(std::sin(kPi * 0.3), 1.5), 1e-14);
}

TEST(Amplitude, StepShapePlateausAndEnds) {
    PulseSchedule s;
    s.shape = StepShape{};
    s.amp_scale = 1.0;
    const double tau = s.gate_time;
    EXPECT_EQ(amplitude(0.0, s), 0.0);
    EXPECT_NEAR(amplitude(tau, s), 0.0, 1e-15);
    // Ramps take 4 x 0.08 of the gate and the plateaus 0.68 / 3 each.
    const double plateau = 0.68 / 3.0;
    EXPECT_DOUBLE_EQ(amplitude(tau * (0.08 + plateau / 2.0), s), 0.55);
    EXPECT_DOUBLE_EQ(amplitude(tau * 0.5, s), 1.0);
    EXPECT_DOUBLE_EQ(amplitude(tau * (1.0 - 0.08 - plateau / 2.0), s), 0.55);
}

TEST(Amplitude, ExactTimeSymmetry) {
    for (int shape = 0; shape < 2; ++shape) {
        PulseSchedule s = random_schedule(7);
        if (shape) s.shape = StepShape{};
        const int g = 20000;
        for (int i = 0; i <= g; ++i) {
            const double u = static_cast<double>(i) / g;
            EXPECT_NEAR(envelope(u, s.shape), envelope(1.0 - u, s.shape), 1e-12) << shape << " " << i;
            EXPECT_NEAR(fm_offset_at(u, s), fm_offset_at(1.0 - u, s), 1e-12 * kTwoPi * 2e3) << shape << " " << i;
        }
        // On the sampling grid the amplitude mirror is bit-exact.
        const SampledDrive d = sample_drive(s, g);
        const double mid = d.phase[g / 2];
        for (int i = 0; i <= g; ++i) {
            EXPECT_EQ(d.amplitude[i], d.amplitude[g - i]) << shape << " " << i;
            EXPECT_NEAR(d.phase[i] - mid, mid - d.phase[g - i], 1e-12) << shape << " " << i;
        }
    }
}

TEST(Amplitude, OutsideGateIsOutOfRange) {
    PulseSchedule s;
    EXPECT_EQ(code_of([&] { amplitude(-1e-6, s); }), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of([&] { amplitude(1.01 * s.gate_time, s); }), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of([&] { drive_frequency(2.0 * s.gate_time, s); }), ErrorCode::OutOfRange);
}

TEST(Amplitude, SineShapeIsSmootherThanSteps) {
    PulseSchedule a;
    a.amp_scale = 1.0;
    PulseSchedule b = a;
    b.shape = StepShape{};
    EXPECT_LT(max_amplitude_rate(a), max_amplitude_rate(b));
}

TEST(Amplitude, RateMatchesFiniteDifference) {
    for (int shape = 0; shape < 2; ++shape) {
        PulseSchedule s;
        s.amp_scale = kTwoPi * 100e3;
        if (shape) s.shape = StepShape{};
        const double h = 1e-10;
        for (double f : {0.03, 0.21, 0.37, 0.62, 0.88}) {
            const double t = f * s.gate_time;
            const double fd = (amplitude(t + h, s) - amplitude(t - h, s)) / (2.0 * h);
            EXPECT_NEAR(amplitude_rate(t, s), fd, 1e-5 * max_amplitude_rate(s)) << shape << " " << f;
        }
    }
}

TEST(Schedule, TurningPointsMirror) {
    PulseSchedule s = random_schedule(3);
    const auto tp = s.turning_points();
    ASSERT_EQ(tp.size(), 15u);
    for (std::size_t m = 0; m < tp.size(); ++m) EXPECT_EQ(tp[m], tp[14 - m]);
    for (std::size_t m = 0; m < 8; ++m) EXPECT_EQ(tp[m], s.fm_points[m]);
}

TEST(Schedule, ValidationRejectsBadInput) {
    PulseSchedule s;
    s.fm_points[2] = kTwoPi * 10.5e3;
    EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::InvalidArgument);
    s = {};
    s.fm_points.resize(7);
    EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::InvalidArgument);
    s = {};
    s.gate_time = 0.0;
    EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::InvalidArgument);
    s = {};
    s.amp_scale = -1.0;
    EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::InvalidArgument);
    s = {};
    s.shape = StepShape{{0.5, 1.0, 0.5}, 0.3};
    EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::InvalidArgument);
}

TEST(DriveFrequency, FlatPatternIsConstant) {
    PulseSchedule s;
    s.mu_ref = 12345.0;
    for (int i = 0; i <= 100; ++i) EXPECT_EQ(drive_frequency(s.gate_time * i / 100.0, s), 12345.0);
}

TEST(DriveFrequency, HitsTurningPointsExactly) {
    PulseSchedule s = random_schedule(11);
    s.mu_ref = 0.0;
    const auto tp = s.turning_points();
    for (std::size_t m = 0; m < tp.size(); ++m) {
        const double u = static_cast<double>(m) / 14.0;
        EXPECT_NEAR(fm_offset_at(u, s), tp[m], 1e-12 * kTwoPi * 2e3) << m;
    }
}

TEST(DriveFrequency, ContinuouslyDifferentiable) {
    PulseSchedule s = random_schedule(5);
    s.mu_ref = 0.0;
    const double tau = s.gate_time;
    const double h = 1e-6 * tau / 14.0;
    for (int m = 1; m < 14; ++m) {
        const double t = tau * m / 14.0;
        const double left = (drive_frequency(t, s) - drive_frequency(t - h, s)) / h;
        const double right = (drive_frequency(t + h, s) - drive_frequency(t, s)) / h;
        const double scale = kTwoPi * 2e3 / (tau / 14.0);
        EXPECT_LT(std::abs(left), 1e-4 * scale) << m;
        EXPECT_LT(std::abs(right), 1e-4 * scale) << m;
    }
}

TEST(Fourier, ConstantPatternHasNoHarmonics) {
    PulseSchedule s;
    s.mu_ref = kTwoPi * 1e6;
    std::fill(s.fm_points.begin(), s.fm_points.end(), kTwoPi * 1e3);
    const FourierDecomposition fd = fourier_decompose(s);
    EXPECT_NEAR(fd.mean, kTwoPi * 1.001e6, 1e-9 * fd.mean);
    for (double a : fd.coefficients) EXPECT_LT(std::abs(a), 1e-9);
}

TEST(Fourier, SingleCosinePattern) {
    // Turning points A, -A, A joined by raised cosines trace A cos(2 pi t / tau).
    const double amp = kTwoPi * 1.5e3;
    PulseSchedule s;
    s.n_oscillations = 2;
    s.fm_points = {amp, -amp};
    const FourierDecomposition fd = fourier_decompose(s, 8);
    EXPECT_NEAR(fd.coefficients[0], amp, 1e-8 * amp);
    for (std::size_t n = 1; n < fd.coefficients.size(); ++n) EXPECT_LT(std::abs(fd.coefficients[n]), 1e-8 * amp) << n;
    for (std::size_t n = 0; n < fd.harmonics.size(); ++n) EXPECT_DOUBLE_EQ(fd.harmonics[n], kTwoPi * (n + 1) / s.gate_time);
}

TEST(Fourier, TruncatedSeriesReconstructsPattern) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const PulseSchedule s = random_schedule(seed, 9e3);
        const FourierDecomposition fd = fourier_decompose(s, 32);
        const int g = 4000;
        double err2 = 0.0, peak = 0.0;
        for (int i = 0; i <= g; ++i) {
            const double t = s.gate_time * i / g;
            const double mu = drive_frequency(t, s);
            err2 += std::pow(fd.evaluate(t) - mu, 2);
            peak = std::max(peak, std::abs(mu - s.mu_ref));
        }
        EXPECT_LT(std::sqrt(err2 / (g + 1)), 0.01 * peak) << seed;
    }
}

// Direct quadrature of the running integral at the endpoint.
std::complex<double> exact_endpoint(const PulseSchedule &s, double eta, double omega_k) {
    return integrate_alpha(s, eta, omega_k).endpoint;
}

TEST(FourierApprox, FlatPatternEqualsDirectIntegral) {
    PulseSchedule s;
    s.amp_scale = kTwoPi * 100e3;
    s.mu_ref = kTwoPi * 2.5e6;
    const double wk = kTwoPi * 2.49e6;
    const FourierApprox fa = alpha_fourier_approx(s, 0.05, wk);
    const auto exact = exact_endpoint(s, 0.05, wk);
    EXPECT_NEAR(std::abs(fa.endpoint - exact), 0.0, 1e-9 * std::abs(exact));
    EXPECT_FALSE(fa.breakdown);
}

TEST(FourierApprox, ErrorIsSecondOrderInModulation) {
    PulseSchedule s = random_schedule(21, 300.0);
    s.mu_ref = kTwoPi * 2.5e6;
    const double wk = kTwoPi * (2.5e6 + 3.7e3);
    const auto err = [&](const PulseSchedule &x) {
        return std::abs(alpha_fourier_approx(x, 0.05, wk).endpoint - exact_endpoint(x, 0.05, wk));
    };
    PulseSchedule half = s;
    for (double &p : half.fm_points) p *= 0.5;
    const double ratio = err(s) / err(half);
    EXPECT_GT(ratio, 3.0);
    EXPECT_LT(ratio, 5.0);
}

TEST(FourierApprox, FlagsLargeModulation) {
    PulseSchedule s = random_schedule(2, 9e3);
    const FourierApprox fa = alpha_fourier_approx(s, 0.05, s.mu_ref);
    EXPECT_TRUE(fa.breakdown);
    EXPECT_GT(fa.max_a_tau, 0.3);
}

TEST(FourierApprox, FarDetunedModesDecouple) {
    PulseSchedule s;
    s.amp_scale = kTwoPi * 100e3;
    s.mu_ref = kTwoPi * 2.5e6;
    // Envelope of |alpha(tau)| over detuning bands of growing offset.
    auto band_peak = [&](double lo_hz) {
        double peak = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double d = kTwoPi * lo_hz * (1.0 + i / 40.0);
            peak = std::max(peak, std::abs(exact_endpoint(s, 0.05, s.mu_ref - d)));
        }
        return peak;
    };
    const double near = band_peak(5e3), mid = band_peak(20e3), far = band_peak(100e3);
    EXPECT_GT(near, mid);
    EXPECT_GT(mid, far);
    EXPECT_LT(far, 0.01 * near);
}

}  // namespace
}  // namespace msgate
