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

#include "core/modes.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace msgate {

Matrix build_transverse_matrix(std::span<const double> positions, double omega_x,
                               double coupling, double min_separation) {
    const auto n = static_cast<Eigen::Index>(positions.size());
    require(n >= 1, "crystal has no ions");
    Matrix a = Matrix::Zero(n, n);
    const double wx2 = omega_x * omega_x;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = std::abs(positions[i] - positions[j]);
            if (d < min_separation) {
                std::ostringstream msg;
                msg << "ions " << i + 1 << " and " << j + 1 << " are " << d
                    << " m apart (minimum " << min_separation << " m)";
                fail(ErrorCode::DegenerateSpacing, msg.str());
            }
            const double c = coupling / (d * d * d);
            a(i, j) = c;
            a(j, i) = c;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) off += a(i, j);
        }
        a(i, i) = wx2 - off;
    }
    return a;
}

Matrix build_transverse_matrix(const IonCrystal &crystal, const TrapConfig &cfg) {
    const double coupling = cfg.coulomb_k() * cfg.charge() * cfg.charge() / cfg.ion_mass();
    return build_transverse_matrix(crystal.positions, cfg.omega_x(), coupling, 0.1 * cfg.delta_z());
}

ModeData solve_modes(const Matrix &matrix, double raman_wavevector, double ion_mass) {
    require(matrix.rows() == matrix.cols() && matrix.rows() >= 1, "mode matrix must be square");
    require(matrix.isApprox(matrix.transpose(), 1e-12), "mode matrix must be symmetric");
    require(raman_wavevector > 0.0 && ion_mass > 0.0, "wavevector and mass must be positive");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix);
    if (solver.info() != Eigen::Success) {
        fail(ErrorCode::ImaginaryMode, "eigendecomposition of the mode matrix failed");
    }
    const Vector &evals = solver.eigenvalues();
    const auto n = evals.size();
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!(evals(k) > 0.0)) {
            std::ostringstream msg;
            msg << "transverse mode " << k + 1 << " has eigenvalue " << evals(k)
                << " rad^2/s^2; the chain is unstable (zigzag regime)";
            fail(ErrorCode::ImaginaryMode, msg.str());
        }
    }

    ModeData out;
    out.raman_wavevector = raman_wavevector;
    out.ion_mass = ion_mass;
    out.frequencies = evals.array().sqrt();
    out.vectors = solver.eigenvectors().transpose();

    for (Eigen::Index k = 0; k < n; ++k) {
        auto row = out.vectors.row(k);
        const double sum = row.sum();
        double sign = 1.0;
        if (std::abs(sum) >= 1e-9) {
            sign = sum < 0.0 ? -1.0 : 1.0;
        } else {
            const double scale = row.cwiseAbs().maxCoeff();
            for (Eigen::Index i = 0; i < n; ++i) {
                if (std::abs(row(i)) > 1e-9 * scale) {
                    sign = row(i) < 0.0 ? -1.0 : 1.0;
                    break;
                }
            }
        }
        row *= sign;
    }

    out.eta.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double scale = raman_wavevector * std::sqrt(kHbar / (2.0 * ion_mass * out.frequencies(k)));
        for (Eigen::Index i = 0; i < n; ++i) out.eta(i, k) = out.vectors(k, i) * scale;
    }
    return out;
}

ModeData solve_modes(const Matrix &matrix, const TrapConfig &cfg) {
    return solve_modes(matrix, cfg.raman_wavevector(), cfg.ion_mass());
}

namespace {

void check_mode(const ModeData &modes, int mode) {
    if (mode < 0 || mode >= modes.size()) {
        std::ostringstream msg;
        msg << "mode index " << mode << " outside [0, " << modes.size() << ")";
        fail(ErrorCode::OutOfRange, msg.str());
    }
}

}  // namespace

double lamb_dicke(const ModeData &modes, int ion, int mode) {
    check_mode(modes, mode);
    if (ion < 0 || ion >= modes.size()) {
        std::ostringstream msg;
        msg << "ion index " << ion << " outside [0, " << modes.size() << ")";
        fail(ErrorCode::OutOfRange, msg.str());
    }
    return modes.eta(ion, mode);
}

int sign_changes(const ModeData &modes, int mode, double floor) {
    check_mode(modes, mode);
    const auto row = modes.vectors.row(mode);
    const double cut = floor * row.cwiseAbs().maxCoeff();
    int changes = 0;
    double last = 0.0;
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        if (std::abs(row(i)) <= cut) continue;
        if (last != 0.0 && (row(i) > 0.0) != (last > 0.0)) ++changes;
        last = row(i);
    }
    return changes;
}

double participation_uniformity(const ModeData &modes, int mode) {
    check_mode(modes, mode);
    const auto a = modes.vectors.row(mode).cwiseAbs();
    return a.minCoeff() / a.maxCoeff();
}

int com_label_to_index(int label, int n_modes) {
    if (label < 1 || label > n_modes) {
        fail(ErrorCode::OutOfRange, "COM-counted mode label outside [1, N]");
    }
    return n_modes - label;
}

int index_to_com_label(int index, int n_modes) {
    if (index < 0 || index >= n_modes) fail(ErrorCode::OutOfRange, "mode index outside [0, N)");
    return n_modes - index;
}

}  // namespace msgate
