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

#include <functional>
#include <limits>
#include <vector>

#include "core/constants.hpp"

namespace msgate {

/// User-facing trap inputs. Defaults describe a 50-ion 171Yb+ chain with a
/// 2.9 um target spacing, r = 0.95, cutoff s = 0.98 and a 3.07 MHz radial
/// trap, driven by 355 nm Raman beams crossing at 90 degrees.
struct TrapParameters {
    int n_ions = 50;
    double delta_z = 2.9e-6;                    // m
    double scale_r = 0.95;
    double cutoff_s = 0.98;
    double omega_x = kTwoPi * 3.07e6;           // rad/s
    double ion_mass = kYb171Mass;               // kg
    double charge = kElementaryCharge;          // C
    double coulomb_k = kCoulombConstant;        // N m^2 / C^2
    double raman_wavevector = msgate::raman_wavevector(kRamanWavelength, 0.5 * kPi);  // 1/m
};

/// Validated trap description. The half length L = N dz / 2 is derived here
/// and cannot be set independently.
class TrapConfig {
public:
    explicit TrapConfig(const TrapParameters &params = {});

    const TrapParameters &parameters() const { return params_; }
    int n_ions() const { return params_.n_ions; }
    double delta_z() const { return params_.delta_z; }
    double half_length() const { return half_length_; }
    double scale_r() const { return params_.scale_r; }
    double cutoff_s() const { return params_.cutoff_s; }
    double omega_x() const { return params_.omega_x; }
    double ion_mass() const { return params_.ion_mass; }
    double charge() const { return params_.charge; }
    double coulomb_k() const { return params_.coulomb_k; }
    double raman_wavevector() const { return params_.raman_wavevector; }

    /// rho_0 = q / dz.
    double charge_density() const { return params_.charge / params_.delta_z; }
    /// Position of the field cutoff, s L.
    double cutoff_position() const { return params_.cutoff_s * half_length_; }

private:
    TrapParameters params_;
    double half_length_;
};

/// Axial potential of the uniform-density trap [V]. Inside |z| < sL it is
/// r k rho0 ln(L^2 / (L^2 - z^2)); outside it continues linearly with the
/// slope at the cutoff.
double trap_potential(double z, const TrapConfig &cfg);

/// Axial field -dV/dz [V/m], clamped to its cutoff value beyond |z| = sL.
double trap_field(double z, const TrapConfig &cfg);

struct EdgeField {
    double finite_sum;   // sum_{n=1}^{N} k q / (n dz)^2
    double asymptote;    // pi^2 / 6 * k q / dz^2
};
EdgeField edge_field(const TrapConfig &cfg);

/// Barrier q [V(sL) - V(0)] in electron-volts: the smallest well depth that
/// keeps the outermost ion below the cutoff.
double trap_depth_ev(const TrapConfig &cfg);

/// Axial confinement seen by each ion. `escape_limit` bounds |z|; an ion
/// crossing it during descent raises IonEscape.
struct AxialPotential {
    std::function<double(double)> potential;   // V
    std::function<double(double)> field;       // V/m
    double escape_limit = std::numeric_limits<double>::infinity();
};

AxialPotential uniform_density_potential(const TrapConfig &cfg);

/// 1/2 m w_z^2 z^2 expressed as an electric potential for charge q.
AxialPotential harmonic_potential(double mass, double omega_z, double charge);

struct DescentOptions {
    double init_spacing = 0.0;          // m; 0 selects 0.95 * delta_z
    double force_tolerance = 1e-20;     // N, on max |F_i|
    long max_iterations = 1'000'000;
    double initial_step = 1e-9;         // m per unit normalized force
    /// Called after each accepted step with (iteration, total energy [J]).
    std::function<void(long, double)> on_accept;
};

struct IonCrystal {
    std::vector<double> positions;      // m, strictly increasing
    double residual_force = 0.0;        // N
    long iterations = 0;
    double energy = 0.0;                // J

    int size() const { return static_cast<int>(positions.size()); }
    std::vector<double> spacings() const;
    double mean_spacing() const;
    /// (max - min) / mean neighbor spacing.
    double spacing_variation() const;
};

struct ChainPhysics {
    double charge;
    double coulomb_k;
};

/// Total energy [J]: sum_i q V(z_i) + sum_{i<j} k q^2 / |z_i - z_j|.
double chain_energy(const std::vector<double> &z, const AxialPotential &pot,
                    const ChainPhysics &phys);

/// Net axial force on every ion [N].
std::vector<double> chain_forces(const std::vector<double> &z, const AxialPotential &pot,
                                 const ChainPhysics &phys);

/// Gradient descent on the total energy from an evenly spaced, centered
/// lattice. The step adapts: x1.1 after an accepted move, /2 after a rejected
/// one (energy increase).
IonCrystal solve_equilibrium(int n_ions, const AxialPotential &pot, const ChainPhysics &phys,
                             const DescentOptions &opts);

IonCrystal solve_equilibrium(const TrapConfig &cfg, const DescentOptions &opts = {});

}  // namespace msgate
