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

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "core/trajectory.hpp"

namespace msgate {

/// Points with E - E0 at or below this are treated as quadrature noise.
inline constexpr double kErrorFloor = 1e-12;
/// Above this the small-displacement error formula stops being meaningful.
inline constexpr double kErrorCeiling = 1e-2;

struct SweepOptions {
    int intervals = kDefaultIntervals;
    ErrorConvention convention = ErrorConvention::BothIons;
    unsigned threads = 1;
};

/// Motional error versus a static offset delta_1 added to mu(t). The drive
/// amplitude is the schedule's amp_scale, held fixed across the sweep.
struct RobustnessSweep {
    std::vector<double> offsets;    // rad/s, positive ascending
    std::vector<double> errors;     // E(delta_1)
    double baseline = 0.0;          // E0 at delta_1 = 0
    std::vector<bool> in_fit;       // points used by the slope fit
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
    int fit_points = 0;

    double excess(std::size_t i) const { return errors[i] - baseline; }
};

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int n);

/// Default offsets: log-spaced over 2 pi x [10 Hz, 2 kHz].
std::vector<double> default_sweep_offsets(int points = 40);

/// Evaluates E at every offset and fits the slope when at least five points
/// fall in the window E - E0 > max(1e-12, 10 E0), E <= 1e-2. With fewer
/// points the slope is left at NaN; call fit_slope to get the error.
RobustnessSweep offset_sweep(const PulseSchedule &sched, const ModeData &modes,
                             std::pair<int, int> pair, const std::vector<double> &offsets,
                             const SweepOptions &opts = {});

struct SlopeFit {
    double slope = 0.0;
    double standard_error = 0.0;
    double intercept = 0.0;
    int points = 0;
};

/// Least squares on (log x, log y). Throws InsufficientPoints below five
/// points and InvalidArgument for non-positive data.
SlopeFit fit_slope(const std::vector<double> &xs, const std::vector<double> &ys);

/// Fits the sweep's window and stores slope, stderr and mask in it.
SlopeFit fit_slope(RobustnessSweep &sweep);

/// Which points of a sweep belong to the fit window.
std::vector<bool> fit_window(const RobustnessSweep &sweep);

/// Rabi frequency that gives beta = pi/4 for every unordered pair.
struct PowerMap {
    int n = 0;
    std::vector<double> omega_max;    // row-major n x n, rad/s; NaN on the diagonal
    std::vector<bool> degenerate;     // entries flagged DegeneratePair

    double at(int i, int j) const { return omega_max[static_cast<std::size_t>(i) * n + j]; }
    bool is_degenerate(int i, int j) const { return degenerate[static_cast<std::size_t>(i) * n + j]; }
};

/// The drive is sampled once at the schedule's amp_scale (2 pi x 100 kHz
/// when zero); each pair then only combines per-mode areas. A pair whose
/// beta vanishes is flagged and left NaN. `pairs` restricts the map to the
/// listed pairs; other entries stay NaN.
PowerMap power_map(const PulseSchedule &sched, const ModeData &modes,
                   const std::optional<std::vector<std::pair<int, int>>> &pairs = std::nullopt,
                   int intervals = kDefaultIntervals, unsigned threads = 1);

/// Deterministic sample of `count` distinct pairs (i < j) drawn with `seed`.
std::vector<std::pair<int, int>> sample_pairs(int n, int count, std::uint64_t seed);

struct PowerMapStats {
    int finite_pairs = 0;
    int degenerate_pairs = 0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double distance_correlation = 0.0;   // Pearson, Omega_max vs |z_i - z_j|
    double edge_mean = 0.0;              // i or j among the outer `edge_ions` at either end
    double central_mean = 0.0;           // all remaining pairs
    double long_distance_mean = 0.0;     // |i - j| >= n / 2
};

PowerMapStats power_map_stats(const PowerMap &map, const std::vector<double> &positions,
                              int edge_ions = 5);

}  // namespace msgate
