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
#include <string>
#include <utility>
#include <vector>

#include "core/analysis.hpp"
#include "core/crystal.hpp"
#include "core/optimizer.hpp"

namespace msgate {

/// Everything a pipeline run needs, in interface units (Hz, um, 1-based
/// ion and mode numbers). Converted to SI and 0-based indices by the
/// accessors below.
struct RunConfig {
    // [trap]
    int n_ions = 50;
    double delta_z_um = 2.9;
    double scale_r = 0.95;
    double cutoff_s = 0.98;
    double omega_x_hz = 3.07e6;
    double ion_mass_kg = kYb171Mass;
    double raman_wavelength_nm = 355.0;
    double raman_crossing_deg = 90.0;
    std::string axial_potential = "uniform";   // uniform | harmonic
    double axial_frequency_hz = 0.0;            // harmonic only

    // [crystal]
    double init_spacing_um = 0.0;               // 0: 0.95 delta_z
    double force_tolerance_n = 1e-20;
    long max_iterations = 1'000'000;

    // [pulse]
    std::string shape = "A";                    // A: sin^1.5, B: three plateaus
    double gate_time_us = 500.0;
    int n_oscillations = 8;
    int reference_mode = 0;                     // 1-based ascending; 0: N/2
    double reference_offset_hz = -3.7e3;
    std::vector<double> step_levels{0.55, 1.0, 0.55};
    double ramp_fraction = 0.08;
    int grid_intervals = kDefaultIntervals;

    // [optimize]
    int ion_i = 10;
    int ion_j = 40;
    std::vector<int> target_modes;              // 1-based ascending; empty: 10 nearest the reference
    long max_evals = 100000;
    std::uint64_t seed = 0;
    int starts = 1;
    double reference_rabi_hz = 100e3;
    double initial_step_hz = 500.0;
    double min_step_hz = 0.01;
    double relative_tolerance = 1e-10;

    // [analysis]
    double sweep_min_hz = 10.0;
    double sweep_max_hz = 2000.0;
    int sweep_points = 40;
    std::string error_convention = "both";      // both | single
    std::string map_pairs = "all";              // all | subset
    int subset_pairs = 50;

    // [output]
    std::string output_dir = "msgate-out";
    unsigned threads = 0;                       // 0: all cores

    /// Throws InvalidArgument naming the offending key.
    void validate() const;

    TrapConfig trap() const;
    AxialPotential axial(const TrapConfig &trap) const;
    DescentOptions descent() const;
    /// 0-based reference mode for a spectrum of n modes.
    int reference_index(int n_modes) const;
    std::vector<int> target_indices(int n_modes) const;
    std::pair<int, int> pair() const { return {ion_i - 1, ion_j - 1}; }
    ErrorConvention convention() const;
    /// Schedule with flat mu at omega_ref + offset and zero amplitude.
    PulseSchedule base_schedule(const ModeData &modes) const;
    OptimizationProblem problem(const ModeData &modes) const;
    std::vector<double> sweep_offsets() const;   // rad/s
};

/// Known keys as "section.key", in file order.
std::vector<std::string> config_keys();

/// Sets one key from its text form. Throws Parse for an unknown key or a
/// malformed value.
void set_config_value(RunConfig &cfg, const std::string &key, const std::string &value);
std::string get_config_value(const RunConfig &cfg, const std::string &key);

/// Reads an INI file over the defaults. Throws Io when unreadable and Parse
/// on syntax errors or unknown keys.
RunConfig load_config(const std::string &path);

/// Canonical INI text with every key. Loading it yields the same config.
std::string to_ini(const RunConfig &cfg);

/// FNV-1a 64 of the bytes.
std::uint64_t fnv1a(const std::string &bytes);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace msgate
