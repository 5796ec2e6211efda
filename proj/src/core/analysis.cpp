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

#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/optimizer.hpp"
#include "core/parallel.hpp"

namespace msgate {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pearson(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double mean_of(const std::vector<double> &v) {
    if (v.empty()) return kNaN;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> log_spaced(double lo, double hi, int n) {
    require(lo > 0.0 && hi > lo, "log_spaced needs 0 < lo < hi");
    require(n >= 2, "log_spaced needs at least two points");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> default_sweep_offsets(int points) {
    return log_spaced(kTwoPi * 10.0, kTwoPi * 2000.0, points);
}

std::vector<bool> fit_window(const RobustnessSweep &sweep) {
    const double floor = std::max(kErrorFloor, 10.0 * sweep.baseline);
    std::vector<bool> mask(sweep.errors.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = sweep.excess(i) > floor && sweep.errors[i] <= kErrorCeiling;
    }
    return mask;
}

SlopeFit fit_slope(const std::vector<double> &xs, const std::vector<double> &ys) {
    require(xs.size() == ys.size(), "fit_slope: x and y differ in length");
    if (xs.size() < 5) {
        std::ostringstream msg;
        msg << "slope fit needs at least 5 points inside the fit window, got " << xs.size();
        fail(ErrorCode::InsufficientPoints, msg.str());
    }
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(xs[i] > 0.0 && ys[i] > 0.0, "fit_slope needs positive data");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    require(sxx > 0.0, "fit_slope needs at least two distinct x values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.standard_error = std::sqrt(rss / (n - 2.0) / sxx);
    fit.points = static_cast<int>(lx.size());
    return fit;
}

SlopeFit fit_slope(RobustnessSweep &sweep) {
    sweep.in_fit = fit_window(sweep);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < sweep.in_fit.size(); ++i) {
        if (!sweep.in_fit[i]) continue;
        xs.push_back(sweep.offsets[i]);
        ys.push_back(sweep.excess(i));
    }
    sweep.fit_points = static_cast<int>(xs.size());
    const SlopeFit fit = fit_slope(xs, ys);
    sweep.fitted_slope = fit.slope;
    sweep.slope_stderr = fit.standard_error;
    return fit;
}

RobustnessSweep offset_sweep(const PulseSchedule &sched, const ModeData &modes,
                             std::pair<int, int> pair, const std::vector<double> &offsets,
                             const SweepOptions &opts) {
    sched.validate();
    require(!offsets.empty(), "offset sweep needs at least one offset");
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        require(offsets[i] > 0.0, "sweep offsets must be positive");
        require(i == 0 || offsets[i] > offsets[i - 1], "sweep offsets must be ascending");
    }
    const auto [ion_i, ion_j] = pair;
    RobustnessSweep sweep;
    sweep.offsets = offsets;
    sweep.errors.assign(offsets.size(), 0.0);

    // Slot 0 is the baseline; the parallel workers below then write only
    // their own slots.
    std::vector<double> results(offsets.size() + 1);
    parallel_for(results.size(), opts.threads, [&](std::size_t s) {
        const double delta = s == 0 ? 0.0 : offsets[s - 1];
        const SampledDrive drive = sample_drive(sched, opts.intervals, delta);
        std::vector<ModeResponse> responses(static_cast<std::size_t>(modes.size()));
        for (int k = 0; k < modes.size(); ++k) responses[k] = mode_response(drive, modes.frequencies(k));
        results[s] = motional_error(responses, modes, ion_i, ion_j, opts.convention);
    });
    sweep.baseline = results[0];
    std::copy(results.begin() + 1, results.end(), sweep.errors.begin());

    sweep.in_fit = fit_window(sweep);
    sweep.fit_points = static_cast<int>(std::count(sweep.in_fit.begin(), sweep.in_fit.end(), true));
    sweep.fitted_slope = kNaN;
    sweep.slope_stderr = kNaN;
    if (sweep.fit_points >= 5) fit_slope(sweep);
    return sweep;
}

PowerMap power_map(const PulseSchedule &sched, const ModeData &modes,
                   const std::optional<std::vector<std::pair<int, int>>> &pairs, int intervals,
                   unsigned threads) {
    sched.validate();
    const int n = modes.size();
    PulseSchedule ref = sched;
    if (!(ref.amp_scale > 0.0)) ref.amp_scale = kDefaultReferenceRabi;
    const auto responses = mode_responses(sample_drive(ref, intervals), modes, threads);

    std::vector<std::pair<int, int>> todo;
    if (pairs) {
        for (auto [i, j] : *pairs) {
            if (i < 0 || j < 0 || i >= n || j >= n) fail(ErrorCode::OutOfRange, "power map pair out of range");
            require(i != j, "power map pair must name two distinct ions");
            todo.emplace_back(std::min(i, j), std::max(i, j));
        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) todo.emplace_back(i, j);
    }

    PowerMap map;
    map.n = n;
    map.omega_max.assign(static_cast<std::size_t>(n) * n, kNaN);
    map.degenerate.assign(map.omega_max.size(), false);
    std::vector<double> value(todo.size(), kNaN);
    std::vector<char> flagged(todo.size(), 0);
    parallel_for(todo.size(), threads, [&](std::size_t p) {
        try {
            value[p] = calibrate_power(responses, ref.amp_scale, modes, todo[p].first, todo[p].second);
        } catch (const Error &e) {
            if (e.code() != ErrorCode::DegeneratePair) throw;
            flagged[p] = 1;
        }
    });
    for (std::size_t p = 0; p < todo.size(); ++p) {
        const auto [i, j] = todo[p];
        const std::size_t a = static_cast<std::size_t>(i) * n + j, b = static_cast<std::size_t>(j) * n + i;
        map.omega_max[a] = map.omega_max[b] = value[p];
        map.degenerate[a] = map.degenerate[b] = flagged[p] != 0;
    }
    return map;
}

std::vector<std::pair<int, int>> sample_pairs(int n, int count, std::uint64_t seed) {
    require(n >= 2, "need at least two ions");
    const long total = static_cast<long>(n) * (n - 1) / 2;
    require(count >= 1 && count <= total, "pair count out of range");
    std::mt19937_64 rng(seed);
    std::set<std::pair<int, int>> chosen;
    while (static_cast<int>(chosen.size()) < count) {
        const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        if (i != j) chosen.emplace(std::min(i, j), std::max(i, j));
    }
    return {chosen.begin(), chosen.end()};
}

PowerMapStats power_map_stats(const PowerMap &map, const std::vector<double> &positions, int edge_ions) {
    require(static_cast<int>(positions.size()) == map.n, "positions do not match the map size");
    PowerMapStats st;
    std::vector<double> values, distances, edge, central, far;
    auto is_edge = [&](int i) { return i < edge_ions || i >= map.n - edge_ions; };
    for (int i = 0; i < map.n; ++i) {
        for (int j = i + 1; j < map.n; ++j) {
            if (map.is_degenerate(i, j)) ++st.degenerate_pairs;
            const double v = map.at(i, j);
            if (!std::isfinite(v)) continue;
            values.push_back(v);
            distances.push_back(std::abs(positions[j] - positions[i]));
            (is_edge(i) || is_edge(j) ? edge : central).push_back(v);
            if (j - i >= map.n / 2) far.push_back(v);
        }
    }
    st.finite_pairs = static_cast<int>(values.size());
    if (values.empty()) {
        st.min = st.max = st.mean = st.distance_correlation = kNaN;
        st.edge_mean = st.central_mean = st.long_distance_mean = kNaN;
        return st;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    st.min = *lo;
    st.max = *hi;
    st.mean = mean_of(values);
    st.distance_correlation = values.size() >= 2 ? pearson(values, distances) : kNaN;
    st.edge_mean = mean_of(edge);
    st.central_mean = mean_of(central);
    st.long_distance_mean = mean_of(far);
    return st;
}

}  // namespace msgate
