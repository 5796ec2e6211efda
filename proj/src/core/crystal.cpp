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

#include "core/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "core/error.hpp"

namespace msgate {

TrapConfig::TrapConfig(const TrapParameters &params) : params_(params) {
    require(params.n_ions >= 1, "n_ions must be >= 1");
    require(params.delta_z > 0.0, "delta_z must be positive");
    require(params.cutoff_s > 0.0 && params.cutoff_s < 1.0, "cutoff_s must lie in (0, 1)");
    require(params.scale_r >= 0.5 && params.scale_r <= 1.5, "scale_r must lie in [0.5, 1.5]");
    require(params.omega_x > 0.0, "omega_x must be positive");
    require(params.ion_mass > 0.0, "ion_mass must be positive");
    require(params.charge > 0.0, "charge must be positive");
    require(params.coulomb_k > 0.0, "coulomb_k must be positive");
    require(params.raman_wavevector > 0.0, "raman_wavevector must be positive");
    half_length_ = params.n_ions * params.delta_z / 2.0;
}

namespace {

double inner_potential(double z, const TrapConfig &cfg) {
    const double l2 = cfg.half_length() * cfg.half_length();
    return cfg.scale_r() * cfg.coulomb_k() * cfg.charge_density() * std::log(l2 / (l2 - z * z));
}

double inner_field(double z, const TrapConfig &cfg) {
    const double l = cfg.half_length();
    return -cfg.scale_r() * cfg.coulomb_k() * cfg.charge_density() *
           (1.0 / (l - z) - 1.0 / (l + z));
}

}  // namespace

double trap_potential(double z, const TrapConfig &cfg) {
    const double zc = cfg.cutoff_position();
    const double a = std::abs(z);
    if (a < zc) return inner_potential(z, cfg);
    // Linear continuation; -field(zc) is the slope at the wall.
    return inner_potential(zc, cfg) - inner_field(zc, cfg) * (a - zc);
}

double trap_field(double z, const TrapConfig &cfg) {
    const double zc = cfg.cutoff_position();
    return inner_field(std::clamp(z, -zc, zc), cfg);
}

EdgeField edge_field(const TrapConfig &cfg) {
    const double unit = cfg.coulomb_k() * cfg.charge() / (cfg.delta_z() * cfg.delta_z());
    double sum = 0.0;
    // Summed smallest-first for accuracy.
    for (int n = cfg.n_ions(); n >= 1; --n) sum += 1.0 / (static_cast<double>(n) * n);
    return {unit * sum, unit * kPi * kPi / 6.0};
}

double trap_depth_ev(const TrapConfig &cfg) {
    // q [V] / e is the energy in eV.
    const double volts = trap_potential(cfg.cutoff_position(), cfg) - trap_potential(0.0, cfg);
    return volts * cfg.charge() / kElementaryCharge;
}

AxialPotential uniform_density_potential(const TrapConfig &cfg) {
    return {
        [cfg](double z) { return trap_potential(z, cfg); },
        [cfg](double z) { return trap_field(z, cfg); },
        cfg.cutoff_position(),
    };
}

AxialPotential harmonic_potential(double mass, double omega_z, double charge) {
    require(mass > 0.0 && omega_z > 0.0 && charge > 0.0, "harmonic potential parameters must be positive");
    const double curvature = mass * omega_z * omega_z / charge;  // V/m^2
    return {
        [curvature](double z) { return 0.5 * curvature * z * z; },
        [curvature](double z) { return -curvature * z; },
        std::numeric_limits<double>::infinity(),
    };
}

std::vector<double> IonCrystal::spacings() const {
    std::vector<double> d;
    for (std::size_t i = 1; i < positions.size(); ++i) d.push_back(positions[i] - positions[i - 1]);
    return d;
}

double IonCrystal::mean_spacing() const {
    if (positions.size() < 2) return 0.0;
    return (positions.back() - positions.front()) / static_cast<double>(positions.size() - 1);
}

double IonCrystal::spacing_variation() const {
    const auto d = spacings();
    if (d.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    return (*hi - *lo) / mean_spacing();
}

double chain_energy(const std::vector<double> &z, const AxialPotential &pot,
                    const ChainPhysics &phys) {
    const double kq2 = phys.coulomb_k * phys.charge * phys.charge;
    double trap = 0.0, coulomb = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        trap += pot.potential(z[i]);
        for (std::size_t j = i + 1; j < z.size(); ++j) coulomb += 1.0 / std::abs(z[i] - z[j]);
    }
    return phys.charge * trap + kq2 * coulomb;
}

std::vector<double> chain_forces(const std::vector<double> &z, const AxialPotential &pot,
                                 const ChainPhysics &phys) {
    const double kq2 = phys.coulomb_k * phys.charge * phys.charge;
    std::vector<double> f(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) f[i] = phys.charge * pot.field(z[i]);
    for (std::size_t i = 0; i < z.size(); ++i) {
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            const double d = z[i] - z[j];
            const double fij = kq2 * std::copysign(1.0 / (d * d), d);
            f[i] += fij;
            f[j] -= fij;
        }
    }
    return f;
}

namespace {

double max_abs(const std::vector<double> &v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

IonCrystal solve_equilibrium(int n_ions, const AxialPotential &pot, const ChainPhysics &phys,
                             const DescentOptions &opts) {
    require(n_ions >= 1, "n_ions must be >= 1");
    require(opts.init_spacing > 0.0, "init_spacing must be positive");
    require(opts.force_tolerance > 0.0, "force_tolerance must be positive");
    require(opts.initial_step > 0.0, "initial_step must be positive");

    std::vector<double> z(static_cast<std::size_t>(n_ions));
    for (int i = 0; i < n_ions; ++i) z[i] = (i - 0.5 * (n_ions - 1)) * opts.init_spacing;

    double energy = chain_energy(z, pot, phys);
    std::vector<double> force = chain_forces(z, pot, phys);
    double fmax = max_abs(force);
    double step = opts.initial_step;
    long iter = 0;
    std::vector<double> trial(z.size());

    while (fmax >= opts.force_tolerance) {
        if (iter >= opts.max_iterations) {
            std::ostringstream msg;
            msg << "equilibrium descent did not converge in " << opts.max_iterations
                << " iterations (max |F| = " << fmax << " N)";
            fail(ErrorCode::NonConvergence, msg.str());
        }
        ++iter;
        for (std::size_t i = 0; i < z.size(); ++i) trial[i] = z[i] + step * force[i] / fmax;
        const double e_trial = chain_energy(trial, pot, phys);
        if (e_trial <= energy) {
            z.swap(trial);
            energy = e_trial;
            if (max_abs(z) >= pot.escape_limit) {
                std::ostringstream msg;
                msg << "ion crossed the field cutoff at |z| = " << pot.escape_limit << " m";
                fail(ErrorCode::IonEscape, msg.str());
            }
            force = chain_forces(z, pot, phys);
            fmax = max_abs(force);
            step *= 1.1;
            if (opts.on_accept) opts.on_accept(iter, energy);
        } else {
            step *= 0.5;
            if (step < 1e-30) {
                std::ostringstream msg;
                msg << "descent step underflow with max |F| = " << fmax << " N";
                fail(ErrorCode::NonConvergence, msg.str());
            }
        }
    }

    std::sort(z.begin(), z.end());
    IonCrystal out;
    out.positions = std::move(z);
    out.residual_force = fmax;
    out.iterations = iter;
    out.energy = energy;
    return out;
}

IonCrystal solve_equilibrium(const TrapConfig &cfg, const DescentOptions &opts) {
    DescentOptions o = opts;
    if (o.init_spacing == 0.0) o.init_spacing = 0.95 * cfg.delta_z();
    return solve_equilibrium(cfg.n_ions(), uniform_density_potential(cfg),
                             {cfg.charge(), cfg.coulomb_k()}, o);
}

}  // namespace msgate
