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

// Composite Simpson rules on uniform grids. All routines take samples
// f_0..f_G at spacing h with G even.

#include <cstddef>
#include <span>
#include <vector>

#include "core/error.hpp"

namespace msgate::quad {

inline void check_grid(std::size_t samples) {
    require(samples >= 3 && samples % 2 == 1,
            "Simpson quadrature needs an odd number of samples (even interval count)");
}

template <typename T>
T simpson(std::span<const T> f, double h) {
    check_grid(f.size());
    const std::size_t g = f.size() - 1;
    T odd{}, even{};
    for (std::size_t i = 1; i < g; i += 2) odd += f[i];
    for (std::size_t i = 2; i < g; i += 2) even += f[i];
    return (h / 3.0) * (f[0] + f[g] + 4.0 * odd + 2.0 * even);
}

template <typename T>
T simpson(const std::vector<T> &f, double h) {
    return simpson(std::span<const T>(f), h);
}

/// Running integral F_i = int_0^{t_i} f. Even nodes use the composite rule;
/// odd nodes add the quadratic-interpolant integral over the first half of
/// the next panel, h/12 (5 f_a + 8 f_b - f_c), so every node is O(h^4)-local.
template <typename T>
std::vector<T> cumulative_simpson(std::span<const T> f, double h) {
    check_grid(f.size());
    const std::size_t g = f.size() - 1;
    std::vector<T> out(f.size());
    out[0] = T{};
    for (std::size_t i = 0; i + 2 <= g; i += 2) {
        const T a = f[i], b = f[i + 1], c = f[i + 2];
        out[i + 1] = out[i] + (h / 12.0) * (5.0 * a + 8.0 * b - c);
        out[i + 2] = out[i] + (h / 3.0) * (a + 4.0 * b + c);
    }
    return out;
}

template <typename T>
std::vector<T> cumulative_simpson(const std::vector<T> &f, double h) {
    return cumulative_simpson(std::span<const T>(f), h);
}

/// Composite Simpson of a callable over [a, b] with `intervals` (rounded up
/// to even) panels.
template <typename Fn>
auto simpson_fn(Fn &&fn, double a, double b, std::size_t intervals) {
    if (intervals < 2) intervals = 2;
    if (intervals % 2) ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    using T = decltype(fn(a));
    T odd{}, even{};
    for (std::size_t i = 1; i < intervals; i += 2) odd += fn(a + h * static_cast<double>(i));
    for (std::size_t i = 2; i < intervals; i += 2) even += fn(a + h * static_cast<double>(i));
    return (h / 3.0) * (fn(a) + fn(b) + 4.0 * odd + 2.0 * even);
}

}  // namespace msgate::quad
