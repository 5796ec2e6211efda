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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/crystal.hpp"
#include "core/error.hpp"
#include "test_support.hpp"

namespace msgate {
namespace {

using testing::default_chain;

// Independent closed form of the confining potential inside the cutoff.
double log_potential(double z, const TrapConfig &cfg) {
    const double l = cfg.half_length();
    return cfg.scale_r() * cfg.coulomb_k() * cfg.charge_density() * std::log(l * l / (l * l - z * z));
}

ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode{};
}

TEST(TrapConfig, HalfLengthFollowsChainSize) {
    TrapConfig cfg;
    EXPECT_DOUBLE_EQ(cfg.half_length(), 50 * 2.9e-6 / 2.0);
    EXPECT_DOUBLE_EQ(cfg.cutoff_position(), 0.98 * cfg.half_length());
}

TEST(TrapConfig, RejectsNonsense) {
    TrapParameters p;
    p.n_ions = 0;
    EXPECT_EQ(code_of([&] { TrapConfig{p}; }), ErrorCode::InvalidArgument);
    p = {};
    p.cutoff_s = 1.0;
    EXPECT_EQ(code_of([&] { TrapConfig{p}; }), ErrorCode::InvalidArgument);
    p = {};
    p.delta_z = -1.0;
    EXPECT_EQ(code_of([&] { TrapConfig{p}; }), ErrorCode::InvalidArgument);
}

TEST(TrapPotential, ZeroAndEvenAtCenter) {
    TrapConfig cfg;
    EXPECT_EQ(trap_potential(0.0, cfg), 0.0);
    EXPECT_EQ(trap_field(0.0, cfg), 0.0);
    for (double z : {1e-7, 3.3e-6, 2e-5, 7.0e-5, 7.2e-5, 9e-5}) {
        EXPECT_EQ(trap_potential(z, cfg), trap_potential(-z, cfg)) << z;
        EXPECT_EQ(trap_field(z, cfg), -trap_field(-z, cfg)) << z;
    }
}

TEST(TrapPotential, MatchesLogFormInsideCutoff) {
    TrapConfig cfg;
    for (double frac : {0.1, 0.5, 0.9, 0.97}) {
        const double z = frac * cfg.half_length();
        EXPECT_NEAR(trap_potential(z, cfg), log_potential(z, cfg), 1e-12 * log_potential(z, cfg));
        const double l = cfg.half_length();
        const double field = -cfg.scale_r() * cfg.coulomb_k() * cfg.charge_density() * (1.0 / (l - z) - 1.0 / (l + z));
        EXPECT_NEAR(trap_field(z, cfg), field, 1e-12 * std::abs(field));
    }
}

TEST(TrapPotential, CentralDifferenceAtHalfLength) {
    TrapConfig cfg;
    const double z = 0.5 * cfg.half_length();
    const double h = 1e-9;
    const double fd = (trap_potential(z + h, cfg) - trap_potential(z - h, cfg)) / (2.0 * h);
    EXPECT_NEAR(fd, -trap_field(z, cfg), 1e-6 * std::abs(fd));
}

TEST(TrapPotential, GradientConsistentAcrossInterior) {
    TrapConfig cfg;
    const double edge = 0.9 * cfg.cutoff_position();
    const double h = 1e-9;
    for (int i = -40; i <= 40; ++i) {
        const double z = edge * i / 40.0;
        if (i == 0) continue;
        const double fd = (trap_potential(z + h, cfg) - trap_potential(z - h, cfg)) / (2.0 * h);
        EXPECT_NEAR(fd, -trap_field(z, cfg), 1e-6 * std::abs(fd)) << z;
    }
}

TEST(TrapPotential, LinearContinuationBeyondCutoff) {
    TrapConfig cfg;
    const double sl = cfg.cutoff_position();
    const double e_edge = trap_field(sl * (1.0 - 1e-12), cfg);
    EXPECT_NEAR(trap_field(sl, cfg), e_edge, 1e-9 * std::abs(e_edge));
    EXPECT_EQ(trap_field(2.0 * sl, cfg), trap_field(sl, cfg));
    EXPECT_NEAR(trap_potential(sl, cfg), log_potential(sl, cfg), 1e-12 * log_potential(sl, cfg));
    const double dz = 1e-6;
    EXPECT_NEAR(trap_potential(sl + dz, cfg), log_potential(sl, cfg) - e_edge * dz, 1e-9 * log_potential(sl, cfg));
}

TEST(EdgeField, SingleIonIsOneTerm) {
    TrapParameters p;
    p.n_ions = 1;
    TrapConfig cfg(p);
    const double expect = p.coulomb_k * p.charge / (p.delta_z * p.delta_z);
    EXPECT_DOUBLE_EQ(edge_field(cfg).finite_sum, expect);
}

TEST(EdgeField, PartialSumsStayBelowAsymptote) {
    for (int n : {1, 2, 5, 50, 500}) {
        TrapParameters p;
        p.n_ions = n;
        const EdgeField e = edge_field(TrapConfig(p));
        EXPECT_LE(e.finite_sum, e.asymptote);
        const double zeta2 = kPi * kPi / 6.0;
        EXPECT_NEAR(e.asymptote, zeta2 * p.coulomb_k * p.charge / (p.delta_z * p.delta_z), 1e-12 * e.asymptote);
    }
}

TEST(EdgeField, ThreeMicronAsymptoteNear260) {
    TrapParameters p;
    p.delta_z = 3e-6;
    const EdgeField e = edge_field(TrapConfig(p));
    EXPECT_NEAR(e.asymptote, 260.0, 0.05 * 260.0);
}

TEST(TrapDepth, OutermostBarrierNearPublishedValue) {
    TrapConfig cfg;
    const double oracle_ev = log_potential(cfg.cutoff_position(), cfg);
    EXPECT_NEAR(trap_depth_ev(cfg), oracle_ev, 1e-12 * oracle_ev);
    EXPECT_NEAR(trap_depth_ev(cfg) * 1e3, 1.52, 0.152);
}

TEST(Equilibrium, TwoIonsInHarmonicWell) {
    const double m = kYb171Mass, q = kElementaryCharge, k = kCoulombConstant;
    const double wz = kTwoPi * 1e6;
    DescentOptions opts;
    opts.init_spacing = 4e-6;
    opts.force_tolerance = 1e-26;
    const IonCrystal c = solve_equilibrium(2, harmonic_potential(m, wz, q), {q, k}, opts);
    const double d = c.positions[1] - c.positions[0];
    const double oracle = std::cbrt(2.0 * k * q * q / (m * wz * wz));
    EXPECT_NEAR(d, oracle, 1e-9 * oracle);
    EXPECT_NEAR(c.positions[0] + c.positions[1], 0.0, 1e-12 * oracle);
}

TEST(Equilibrium, DefaultChainSpacing) {
    const auto &c = default_chain().crystal;
    ASSERT_EQ(c.size(), 50);
    EXPECT_NEAR(c.mean_spacing(), 2.9e-6, 0.05 * 2.9e-6);
    EXPECT_LT(c.spacing_variation(), 0.05);
    EXPECT_LT(c.residual_force, 1e-20);
}

TEST(Equilibrium, DefaultChainIsMirrorSymmetricAndSorted) {
    const auto &chain = default_chain();
    const auto &z = chain.crystal.positions;
    const double sum = std::accumulate(z.begin(), z.end(), 0.0);
    EXPECT_LT(std::abs(sum), 1e-3 * chain.trap.delta_z());
    for (std::size_t i = 0; i < z.size(); ++i) {
        EXPECT_LT(std::abs(z[i] + z[z.size() - 1 - i]), 1e-3 * chain.trap.delta_z()) << i;
        EXPECT_LT(std::abs(z[i]), chain.trap.cutoff_position());
        if (i) {
            EXPECT_GT(z[i], z[i - 1]);
        }
    }
}

TEST(Equilibrium, ResidualForcesBelowTolerance) {
    const auto &chain = default_chain();
    const auto f = chain_forces(chain.crystal.positions, uniform_density_potential(chain.trap),
                                {chain.trap.charge(), chain.trap.coulomb_k()});
    for (double fi : f) EXPECT_LT(std::abs(fi), 1e-20);
}

TEST(Equilibrium, EnergyNeverIncreases) {
    TrapParameters p;
    p.n_ions = 20;
    TrapConfig cfg(p);
    DescentOptions opts;
    opts.init_spacing = 0.95 * cfg.delta_z();
    std::vector<double> energies;
    opts.on_accept = [&](long, double e) { energies.push_back(e); };
    const IonCrystal c = solve_equilibrium(cfg, opts);
    ASSERT_GT(energies.size(), 10u);
    for (std::size_t i = 1; i < energies.size(); ++i) EXPECT_LE(energies[i], energies[i - 1]) << i;
    EXPECT_DOUBLE_EQ(c.energy, energies.back());
}

TEST(Equilibrium, SmallChainsStayCentered) {
    for (int n : {3, 7, 12}) {
        TrapParameters p;
        p.n_ions = n;
        const IonCrystal c = solve_equilibrium(TrapConfig(p));
        const double sum = std::accumulate(c.positions.begin(), c.positions.end(), 0.0);
        EXPECT_LT(std::abs(sum), 1e-3 * p.delta_z) << n;
    }
}

TEST(Equilibrium, IterationCapRaisesNonConvergence) {
    DescentOptions opts;
    opts.max_iterations = 5;
    EXPECT_EQ(code_of([&] { solve_equilibrium(TrapConfig{}, opts); }), ErrorCode::NonConvergence);
}

TEST(Equilibrium, WeakWellRaisesIonEscape) {
    AxialPotential pot = harmonic_potential(kYb171Mass, kTwoPi * 10e3, kElementaryCharge);
    pot.escape_limit = 3e-6;
    DescentOptions opts;
    opts.init_spacing = 2e-6;
    EXPECT_EQ(code_of([&] { solve_equilibrium(3, pot, {kElementaryCharge, kCoulombConstant}, opts); }),
              ErrorCode::IonEscape);
}

TEST(Equilibrium, RejectsBadOptions) {
    DescentOptions opts;
    opts.init_spacing = -1.0;
    EXPECT_EQ(code_of([&] { solve_equilibrium(TrapConfig{}, opts); }), ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace msgate
