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

#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/crystal.hpp"
#include "core/optimizer.hpp"

// Text formats for every artifact. Writers return the file contents and
// loaders parse them back; file I/O goes through write_file_atomic. CSV uses
// '.' decimals, ',' separators and one header row. Ion and mode numbers in
// files are 1-based.

namespace msgate {

/// Writes to a temporary sibling and renames it into place, so readers never
/// see a partial file. Throws Io on failure.
void write_file_atomic(const std::string &path, const std::string &contents);
std::string read_file(const std::string &path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
/// Throws Parse on ragged rows or an empty document.
CsvTable parse_csv(const std::string &text);
double csv_number(const std::string &cell);

// ion,z_m
std::string crystal_csv(const IonCrystal &crystal);
IonCrystal crystal_from_csv(const std::string &text);
/// Mean spacing, variation, residual force, iterations and energy.
std::string crystal_json(const IonCrystal &crystal, const std::string &config_hash);

std::string modes_json(const ModeData &modes);
ModeData modes_from_json(const std::string &text);
// mode,frequency_hz
std::string spectrum_csv(const ModeData &modes);

/// Frequencies are written both in Hz and as exact rad/s values; the loader
/// reads the rad/s fields.
std::string schedule_json(const PulseSchedule &sched);
PulseSchedule schedule_from_json(const std::string &text);
// t_s,rabi_hz,detuning_offset_hz on `samples` + 1 points
std::string waveform_csv(const PulseSchedule &sched, int samples = 1000);

// eval,cost
std::string trace_csv(const std::vector<TracePoint> &trace);
std::vector<TracePoint> trace_from_csv(const std::string &text);

/// Gate summary plus per-mode endpoints for ion i.
std::string report_json(const GateReport &report, const ModeData &modes);
GateReport report_from_json(const std::string &text);
// mode,t_s,re_alpha,im_alpha for the listed modes, every `stride`-th sample
std::string trajectories_csv(const GateReport &report, const std::vector<int> &modes, int stride);

// offset_hz,error,excess_error,in_fit
std::string sweep_csv(const RobustnessSweep &sweep);
std::string sweep_json(const RobustnessSweep &sweep);
RobustnessSweep sweep_from_json(const std::string &text);

// i,j,omega_max_hz for i < j; "nan" where no value exists
std::string powermap_csv(const PowerMap &map);
std::string powermap_json(const PowerMap &map, const PowerMapStats &stats);
PowerMap powermap_from_json(const std::string &text);

}  // namespace msgate
