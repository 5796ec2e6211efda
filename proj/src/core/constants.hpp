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

#include <cmath>
#include <numbers>

namespace msgate {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// CODATA 2018 (exact where the SI fixes them).
inline constexpr double kCoulombConstant = 8.9875517923e9;      // N m^2 / C^2
inline constexpr double kElementaryCharge = 1.602176634e-19;    // C
inline constexpr double kHbar = 1.054571817e-34;                // J s
inline constexpr double kYb171Mass = 2.838e-25;                 // kg
inline constexpr double kRamanWavelength = 355e-9;              // m

/// Effective wavevector of a Raman pair of wavelength `wavelength` whose
/// beams cross at `crossing_angle` (radians). pi gives the counter-propagating
/// value 4 pi / lambda; pi/2 gives sqrt(2) * 2 pi / lambda.
inline double raman_wavevector(double wavelength, double crossing_angle) {
    return 2.0 * (kTwoPi / wavelength) * std::sin(0.5 * crossing_angle);
}

inline constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
inline constexpr double angular_to_hz(double w) { return w / kTwoPi; }

}  // namespace msgate
