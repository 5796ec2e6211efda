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
#include <utility>
#include <vector>

#include "core/trajectory.hpp"

namespace msgate {

inline constexpr double kDefaultReferenceRabi = kTwoPi * 100e3;   // rad/s
inline constexpr double kDefaultReferenceOffset = -kTwoPi * 3.7e3;  // rad/s

/// Default drive reference: the mode with 25 sign changes (a standing wave
/// of four ion spacings, the 26th mode counted from COM) for a 50-ion
/// chain, generalized to index N/2 - 1 in ascending order.
int default_reference_mode(int n_modes);

/// The ten modes nearest the reference, reference - 5 .. reference + 4,
/// clipped to the spectrum.
std::vector<int> default_target_modes(int n_modes);

struct OptimizationProblem {
    PulseSchedule base_schedule;
    std::vector<int> target_modes;        // 0-based
    std::pair<int, int> ion_pair{9, 39};  // 0-based
    long max_evals = 100000;
    std::uint64_t seed = 0;
    int starts = 1;                       // >1 adds jittered restarts
    double reference_amplitude = kDefaultReferenceRabi;
    double initial_step = kTwoPi * 500.0;
    double min_step = kTwoPi * 0.01;
    double relative_tolerance = 1e-10;
    int intervals = kDefaultIntervals;

    void validate(const ModeData &modes) const;
};

/// sum over target modes and both addressed ions of |time-averaged alpha|^2
/// at the reference amplitude. Turning points outside the 10 kHz bound
/// cost +infinity.
double cost(const OptimizationProblem &problem, const ModeData &modes,
            const std::vector<double> &fm_points);

struct TracePoint {
    long evaluation;
    double cost;
};

struct OptimizationResult {
    PulseSchedule schedule;     // amp_scale = reference amplitude
    double initial_cost = 0.0;
    double final_cost = 0.0;
    long evaluations = 0;
    int best_start = 0;
    std::vector<TracePoint> trace;
};

/// Hooke-Jeeves pattern search over the free turning points: coordinate
/// polls at +-step, pattern moves along successful directions, step halved
/// after a failed poll. Stops when the step drops below min_step or a
/// successful cycle improves the cost by less than relative_tolerance.
/// Throws BudgetExhausted when max_evals is reached first.
OptimizationResult optimize(const OptimizationProblem &problem, const ModeData &modes);

/// Omega_max = Omega_ref sqrt((pi/4) / |beta_ref|), using beta ~ Omega^2.
/// The reference is the schedule's amp_scale (or 2 pi x 100 kHz if zero).
/// Throws DegeneratePair when |beta_ref| < 1e-12 rad.
double calibrate_power(const PulseSchedule &sched, const ModeData &modes, int ion_i, int ion_j,
                       int intervals = kDefaultIntervals, unsigned threads = 1);

/// Same, from precomputed responses taken at amplitude `reference`.
double calibrate_power(const std::vector<ModeResponse> &responses, double reference,
                       const ModeData &modes, int ion_i, int ion_j);

}  // namespace msgate
