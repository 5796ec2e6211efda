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

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "core/crystal.hpp"

namespace msgate {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Transverse normal modes of the chain. Mode indices are 0-based and
/// ascending in frequency: mode 0 is the zigzag mode, mode N-1 the common
/// (COM) mode at omega_x.
struct ModeData {
    Vector frequencies;   // rad/s, ascending
    Matrix vectors;       // row k = mode vector u_k, entry (k, i) = u_ki
    Matrix eta;           // (ion i, mode k)
    double raman_wavevector = 0.0;
    double ion_mass = 0.0;

    int size() const { return static_cast<int>(frequencies.size()); }
};

/// A_ii = w_x^2 - sum_{j!=i} c/|z_i-z_j|^3, A_ij = c/|z_i-z_j|^3 with
/// c = k q^2 / m. Throws DegenerateSpacing if two ions sit closer than
/// `min_separation`.
Matrix build_transverse_matrix(std::span<const double> positions, double omega_x,
                               double coupling, double min_separation);

/// Uses the trap's constants and min_separation = 0.1 dz.
Matrix build_transverse_matrix(const IonCrystal &crystal, const TrapConfig &cfg);

/// Diagonalizes the symmetric coupling matrix. Mode vectors are sign-fixed
/// so that sum_i u_ki >= 0, ties (|sum| < 1e-9) broken by making the first
/// non-negligible entry positive. Throws ImaginaryMode for a non-positive
/// eigenvalue (zigzag instability).
ModeData solve_modes(const Matrix &matrix, double raman_wavevector, double ion_mass);
ModeData solve_modes(const Matrix &matrix, const TrapConfig &cfg);

/// eta_ik = u_ki dk sqrt(hbar / (2 m w_k)).
double lamb_dicke(const ModeData &modes, int ion, int mode);

/// Number of sign changes along the chain in mode `mode`, ignoring entries
/// below `floor` * max |u|.
int sign_changes(const ModeData &modes, int mode, double floor = 1e-6);

/// min_i |u_ki| / max_i |u_ki|; 1 means every ion participates equally.
double participation_uniformity(const ModeData &modes, int mode);

/// Mode labels counted from the COM mode (label 1 = highest frequency), the
/// convention used in the literature for this chain. Converts to and from
/// the 0-based ascending index used by ModeData.
int com_label_to_index(int label, int n_modes);
int index_to_com_label(int index, int n_modes);

}  // namespace msgate
