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
#include <vector>

#include "core/error.hpp"
#include "core/modes.hpp"
#include "test_support.hpp"

namespace msgate {
namespace {

using testing::default_chain;

double coupling(const TrapConfig &t) { return t.coulomb_k() * t.charge() * t.charge() / t.ion_mass(); }

ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode{};
}

TEST(TransverseMatrix, SingleIon) {
    const std::vector<double> z{0.0};
    const Matrix a = build_transverse_matrix(z, 2.0, 1.0, 1e-7);
    ASSERT_EQ(a.rows(), 1);
    EXPECT_EQ(a(0, 0), 4.0);
}

TEST(TransverseMatrix, RowsSumToTrapCurvature) {
    const auto &chain = default_chain();
    const Matrix a = build_transverse_matrix(chain.crystal, chain.trap);
    const double wx2 = chain.trap.omega_x() * chain.trap.omega_x();
    EXPECT_TRUE(a.isApprox(a.transpose(), 0.0));
    for (int i = 0; i < a.rows(); ++i) EXPECT_NEAR(a.row(i).sum(), wx2, 1e-12 * wx2) << i;
}

TEST(TransverseMatrix, EntriesFollowCoulombCoupling) {
    const auto &chain = default_chain();
    const Matrix a = build_transverse_matrix(chain.crystal, chain.trap);
    const auto &z = chain.crystal.positions;
    const double c = coupling(chain.trap);
    const double d = std::abs(z[3] - z[17]);
    EXPECT_NEAR(a(3, 17), c / (d * d * d), 1e-12 * a(3, 17));
}

TEST(TransverseMatrix, CloseIonsAreDegenerate) {
    TrapConfig cfg;
    IonCrystal bad;
    bad.positions = {0.0, 0.05 * cfg.delta_z(), 3e-6};
    EXPECT_EQ(code_of([&] { build_transverse_matrix(bad, cfg); }), ErrorCode::DegenerateSpacing);
}

TEST(SolveModes, TwoIonClosedForm) {
    const double wx = kTwoPi * 3e6, c = 8.1e-4, d = 4e-6;
    const std::vector<double> z{-d / 2, d / 2};
    const ModeData m = solve_modes(build_transverse_matrix(z, wx, c, 1e-7), 1e7, kYb171Mass);
    ASSERT_EQ(m.size(), 2);
    EXPECT_NEAR(m.frequencies(1), wx, 1e-12 * wx);
    const double rocking = std::sqrt(wx * wx - 2.0 * c / (d * d * d));
    EXPECT_NEAR(m.frequencies(0), rocking, 1e-12 * wx);
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(m.vectors(1, 0), h, 1e-12);
    EXPECT_NEAR(m.vectors(1, 1), h, 1e-12);
    EXPECT_NEAR(m.vectors(0, 0), h, 1e-12);
    EXPECT_NEAR(m.vectors(0, 1), -h, 1e-12);
}

TEST(SolveModes, ZigzagRegimeIsImaginary) {
    const std::vector<double> z{-1e-6, 0.0, 1e-6};
    const Matrix a = build_transverse_matrix(z, kTwoPi * 0.2e6, coupling(TrapConfig{}), 1e-8);
    EXPECT_EQ(code_of([&] { solve_modes(a, 1e7, kYb171Mass); }), ErrorCode::ImaginaryMode);
}

TEST(SolveModes, DefaultSpectrumRange) {
    const auto &m = default_chain().modes;
    const double wx = default_chain().trap.omega_x();
    ASSERT_EQ(m.size(), 50);
    EXPECT_NEAR(m.frequencies(0) / kTwoPi, 2.45e6, 0.02 * 2.45e6);
    EXPECT_NEAR(m.frequencies(49), wx, 1e-9 * wx);
    EXPECT_GT(m.frequencies(0), 0.0);
    for (int k = 1; k < m.size(); ++k) EXPECT_GT(m.frequencies(k), m.frequencies(k - 1)) << k;
}

TEST(SolveModes, Orthonormal) {
    const auto &m = default_chain().modes;
    const Matrix gram = m.vectors * m.vectors.transpose();
    EXPECT_LT((gram - Matrix::Identity(50, 50)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SolveModes, EigenResidual) {
    const auto &chain = default_chain();
    const Matrix a = build_transverse_matrix(chain.crystal, chain.trap);
    const double wx2 = chain.trap.omega_x() * chain.trap.omega_x();
    for (int k = 0; k < chain.modes.size(); ++k) {
        const Vector u = chain.modes.vectors.row(k).transpose();
        const double w2 = chain.modes.frequencies(k) * chain.modes.frequencies(k);
        EXPECT_LT((a * u - w2 * u).norm(), 1e-8 * wx2) << k;
    }
}

TEST(SolveModes, SignConventionNonNegativeSum) {
    const auto &m = default_chain().modes;
    for (int k = 0; k < m.size(); ++k) {
        const double s = m.vectors.row(k).sum();
        if (std::abs(s) < 1e-9) {
            int first = 0;
            while (std::abs(m.vectors(k, first)) < 1e-9) ++first;
            EXPECT_GT(m.vectors(k, first), 0.0) << k;
        } else {
            EXPECT_GT(s, 0.0) << k;
        }
    }
}

TEST(SolveModes, StandingWaveSignChanges) {
    const auto &m = default_chain().modes;
    const int n = m.size();
    for (int k = 0; k < n; ++k) EXPECT_EQ(sign_changes(m, k), n - 1 - k) << k;
}

TEST(SolveModes, SidebandSplittingNearReference) {
    const auto &m = default_chain().modes;
    const int ref = com_label_to_index(26, 50);
    EXPECT_EQ(ref, 24);
    const double split = (m.frequencies(ref + 1) - m.frequencies(ref - 1)) / 2.0 / kTwoPi;
    EXPECT_NEAR(split, 18e3, 0.2 * 18e3);
}

TEST(SolveModes, ReferenceModeExcitesAllIons) {
    // Measured 0.81 for the default chain; other modes near the middle of the
    // spectrum fall well below.
    const auto &m = default_chain().modes;
    EXPECT_GT(participation_uniformity(m, com_label_to_index(26, 50)), 0.75);
}

TEST(ModeLabels, RoundTrip) {
    for (int label = 1; label <= 50; ++label) EXPECT_EQ(index_to_com_label(com_label_to_index(label, 50), 50), label);
    EXPECT_EQ(com_label_to_index(1, 50), 49);
}

TEST(LambDicke, SingleIonOracle) {
    const double wx = kTwoPi * 3.07e6;
    const double dk = 4.0 * kPi / 355e-9;
    const std::vector<double> z{0.0};
    const ModeData m = solve_modes(build_transverse_matrix(z, wx, 1.0, 1e-9), dk, kYb171Mass);
    const double oracle = dk * std::sqrt(1.054571817e-34 / (2.0 * 2.838e-25 * wx));
    EXPECT_NEAR(lamb_dicke(m, 0, 0), oracle, 1e-12 * oracle);
    EXPECT_NEAR(oracle, 0.1099, 5e-4);
}

TEST(LambDicke, MatchesFormulaAndSign) {
    const auto &m = default_chain().modes;
    for (int i : {0, 9, 24, 39, 49}) {
        for (int k = 0; k < m.size(); ++k) {
            const double oracle = m.vectors(k, i) * m.raman_wavevector *
                                  std::sqrt(kHbar / (2.0 * m.ion_mass * m.frequencies(k)));
            EXPECT_NEAR(lamb_dicke(m, i, k), oracle, 1e-12 * std::abs(oracle) + 1e-300);
            EXPECT_EQ(m.eta(i, k), lamb_dicke(m, i, k));
            if (std::abs(m.vectors(k, i)) > 1e-12) {
                EXPECT_EQ(std::signbit(m.eta(i, k)), std::signbit(m.vectors(k, i)));
            }
        }
    }
}

TEST(LambDicke, SumBoundedByLowestMode) {
    const auto &m = default_chain().modes;
    const double bound = m.raman_wavevector * m.raman_wavevector * kHbar / (2.0 * m.ion_mass * m.frequencies(0));
    for (int i = 0; i < m.size(); ++i) EXPECT_LE(m.eta.row(i).squaredNorm(), bound * (1.0 + 1e-12)) << i;
}

TEST(LambDicke, RejectsBadIndex) {
    const auto &m = default_chain().modes;
    EXPECT_EQ(code_of([&] { lamb_dicke(m, 50, 0); }), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of([&] { lamb_dicke(m, 0, -1); }), ErrorCode::OutOfRange);
}

}  // namespace
}  // namespace msgate
