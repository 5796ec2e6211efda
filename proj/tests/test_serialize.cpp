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
#include <filesystem>

#include <json.hpp>

#include "core/config.hpp"
#include "core/error.hpp"
#include "core/serialize.hpp"
#include "test_support.hpp"

namespace msgate {
namespace {

using testing::default_chain;
namespace fs = std::filesystem;

ErrorCode code_of(const std::function<void()> &fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode{};
}

PulseSchedule sample_schedule(bool step) {
    PulseSchedule s;
    if (step) s.shape = StepShape{{0.4, 1.0, 0.45}, 0.07};
    s.mu_ref = default_chain().modes.frequencies(24) + kTwoPi * -3.7e3;
    s.amp_scale = kTwoPi * 123456.789;
    s.fm_points = {0.1, -2.2e4, 3.3e4, kTwoPi * 1e4, -kTwoPi * 1e4, 1.0 / 3.0, 0.0, 5e3};
    return s;
}

TEST(AtomicWrite, ReplacesWithoutLeftovers) {
    const auto dir = testing::scratch_dir("atomic");
    const auto path = (dir / "f.txt").string();
    write_file_atomic(path, "one");
    write_file_atomic(path, "two");
    EXPECT_EQ(read_file(path), "two");
    EXPECT_FALSE(fs::exists(path + ".tmp"));
    EXPECT_EQ(code_of([&] { write_file_atomic((dir / "missing" / "f.txt").string(), "x"); }), ErrorCode::Io);
    EXPECT_EQ(code_of([&] { read_file((dir / "nothing").string()); }), ErrorCode::Io);
}

TEST(Csv, ParsesAndRejects) {
    const CsvTable t = parse_csv("a,b\r\n1,2\n\n3,\n");
    EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[1][1], "");
    EXPECT_EQ(code_of([] { parse_csv("a,b\n1\n"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { parse_csv(""); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { csv_number("1.5x"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { csv_number(""); }), ErrorCode::Parse);
    EXPECT_TRUE(std::isnan(csv_number("nan")));
    EXPECT_EQ(csv_number("-2.5e-7"), -2.5e-7);
}

TEST(CrystalFiles, RoundTripIsExact) {
    const auto &c = default_chain().crystal;
    const std::string text = crystal_csv(c);
    EXPECT_EQ(text.substr(0, 8), "ion,z_m\n");
    const IonCrystal back = crystal_from_csv(text);
    EXPECT_EQ(back.positions, c.positions);
    EXPECT_EQ(crystal_csv(back), text);
    EXPECT_EQ(code_of([] { crystal_from_csv("ion,z\n1,0\n2,1\n"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { crystal_from_csv("ion,z_m\n2,0\n1,1\n"); }), ErrorCode::Parse);

    const auto j = nlohmann::json::parse(crystal_json(c, "abc"));
    EXPECT_EQ(j.at("n_ions").get<int>(), 50);
    EXPECT_EQ(j.at("config_hash").get<std::string>(), "abc");
    EXPECT_DOUBLE_EQ(j.at("mean_spacing_m").get<double>(), c.mean_spacing());
}

TEST(ModeFiles, RoundTripIsExact) {
    const auto &m = default_chain().modes;
    const std::string text = modes_json(m);
    const ModeData back = modes_from_json(text);
    EXPECT_EQ(back.frequencies, m.frequencies);
    EXPECT_EQ(back.vectors, m.vectors);
    EXPECT_EQ(back.eta, m.eta);
    EXPECT_EQ(back.raman_wavevector, m.raman_wavevector);
    EXPECT_EQ(back.ion_mass, m.ion_mass);
    EXPECT_EQ(modes_json(back), text);
    EXPECT_EQ(code_of([] { modes_from_json("{"); }), ErrorCode::Parse);
    EXPECT_EQ(code_of([] { modes_from_json("{\"n_modes\": 2}"); }), ErrorCode::Parse);

    const CsvTable spectrum = parse_csv(spectrum_csv(m));
    EXPECT_EQ(spectrum.header, (std::vector<std::string>{"mode", "frequency_hz"}));
    ASSERT_EQ(spectrum.rows.size(), 50u);
    EXPECT_EQ(spectrum.rows[0][0], "1");
    EXPECT_EQ(csv_number(spectrum.rows[49][1]), m.frequencies(49) / kTwoPi);
}

TEST(ScheduleFiles, RoundTripIsExact) {
    for (bool step : {false, true}) {
        const PulseSchedule s = sample_schedule(step);
        const std::string text = schedule_json(s);
        const PulseSchedule back = schedule_from_json(text);
        EXPECT_EQ(back.fm_points, s.fm_points);
        EXPECT_EQ(back.mu_ref, s.mu_ref);
        EXPECT_EQ(back.amp_scale, s.amp_scale);
        EXPECT_EQ(back.gate_time, s.gate_time);
        EXPECT_EQ(back.n_oscillations, s.n_oscillations);
        EXPECT_EQ(back.shape.index(), s.shape.index());
        if (step) {
            EXPECT_EQ(std::get<StepShape>(back.shape).levels, std::get<StepShape>(s.shape).levels);
            EXPECT_EQ(std::get<StepShape>(back.shape).ramp_fraction, 0.07);
        }
        EXPECT_EQ(schedule_json(back), text);
        const auto j = nlohmann::json::parse(text);
        EXPECT_EQ(j.at("turning_points_hz").size(), 15u);
        EXPECT_EQ(j.at("shape").get<std::string>(), step ? "B" : "A");
    }
}

TEST(ScheduleFiles, RejectsInvalid) {
    auto j = nlohmann::json::parse(schedule_json(sample_schedule(false)));
    j["fm_points_rad_s"][0] = kTwoPi * 2e4;
    EXPECT_EQ(code_of([&] { schedule_from_json(j.dump()); }), ErrorCode::Parse);
    j = nlohmann::json::parse(schedule_json(sample_schedule(false)));
    j["shape"] = "Z";
    EXPECT_EQ(code_of([&] { schedule_from_json(j.dump()); }), ErrorCode::Parse);
    j.erase("shape");
    EXPECT_EQ(code_of([&] { schedule_from_json(j.dump()); }), ErrorCode::Parse);
}

TEST(ScheduleFiles, WaveformSamples) {
    const PulseSchedule s = sample_schedule(false);
    const CsvTable t = parse_csv(waveform_csv(s, 100));
    EXPECT_EQ(t.header, (std::vector<std::string>{"t_s", "rabi_hz", "detuning_offset_hz"}));
    ASSERT_EQ(t.rows.size(), 101u);
    EXPECT_EQ(csv_number(t.rows[0][0]), 0.0);
    EXPECT_NEAR(csv_number(t.rows[50][1]), s.amp_scale / kTwoPi, 1e-6);
    EXPECT_NEAR(csv_number(t.rows[0][2]), s.fm_points[0] / kTwoPi, 1e-9);
}

TEST(TraceFiles, RoundTrip) {
    const std::vector<TracePoint> tr{{1, 0.5}, {2, 1.0 / 3.0}, {3, 1e-300}};
    const auto back = trace_from_csv(trace_csv(tr));
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(back[i].evaluation, tr[i].evaluation);
        EXPECT_EQ(back[i].cost, tr[i].cost);
    }
}

TEST(ReportFiles, RoundTripAndTrajectories) {
    const auto &m = default_chain().modes;
    GateReportOptions o;
    o.intervals = 2000;
    o.convention = ErrorConvention::SingleIon;
    const GateReport rep = gate_report(sample_schedule(false), m, 9, 39, kTwoPi * 150e3, o);
    const GateReport back = report_from_json(report_json(rep, m));
    EXPECT_EQ(back.pair, rep.pair);
    EXPECT_EQ(back.beta, rep.beta);
    EXPECT_EQ(back.motional_error, rep.motional_error);
    EXPECT_EQ(back.omega_max, rep.omega_max);
    EXPECT_EQ(back.convention, ErrorConvention::SingleIon);
    ASSERT_EQ(back.trajectories.size(), 50u);
    for (int k = 0; k < 50; ++k) EXPECT_EQ(back.trajectories[k].endpoint, rep.trajectories[k].endpoint);

    const CsvTable t = parse_csv(trajectories_csv(rep, {24, 25}, 20));
    EXPECT_EQ(t.header, (std::vector<std::string>{"mode", "t_s", "re_alpha", "im_alpha"}));
    ASSERT_EQ(t.rows.size(), 2u * 101u);
    EXPECT_EQ(t.rows[0][0], "25");
    EXPECT_EQ(csv_number(t.rows[100][2]), rep.trajectories[24].endpoint.real());
    EXPECT_EQ(code_of([&] { trajectories_csv(rep, {50}, 1); }), ErrorCode::OutOfRange);
}

TEST(SweepFiles, RoundTripKeepsNan) {
    RobustnessSweep sw;
    sw.offsets = {1.0, 2.0, 3.0};
    sw.errors = {1e-7, 2e-6, 3e-5};
    sw.baseline = 5e-8;
    sw.in_fit = {false, true, true};
    sw.fitted_slope = std::nan("");
    sw.slope_stderr = std::nan("");
    sw.fit_points = 2;
    const RobustnessSweep back = sweep_from_json(sweep_json(sw));
    EXPECT_EQ(back.offsets, sw.offsets);
    EXPECT_EQ(back.errors, sw.errors);
    EXPECT_EQ(back.baseline, sw.baseline);
    EXPECT_EQ(back.in_fit, sw.in_fit);
    EXPECT_TRUE(std::isnan(back.fitted_slope));
    EXPECT_EQ(back.fit_points, 2);
    const CsvTable t = parse_csv(sweep_csv(sw));
    EXPECT_EQ(t.header, (std::vector<std::string>{"offset_hz", "error", "excess_error", "in_fit"}));
    EXPECT_EQ(t.rows[1][3], "1");
    EXPECT_EQ(csv_number(t.rows[2][2]), 3e-5 - 5e-8);
}

TEST(PowerMapFiles, RoundTrip) {
    PowerMap map;
    map.n = 3;
    const double nan = std::nan("");
    map.omega_max = {nan, 1.5e6, nan, 1.5e6, nan, 2.5e6, nan, 2.5e6, nan};
    map.degenerate = {false, false, true, false, false, false, true, false, false};
    const PowerMapStats st = power_map_stats(map, {-1.0, 0.0, 1.0}, 1);
    const PowerMap back = powermap_from_json(powermap_json(map, st));
    EXPECT_EQ(back.n, 3);
    EXPECT_EQ(back.degenerate, map.degenerate);
    for (std::size_t i = 0; i < 9; ++i) {
        if (std::isnan(map.omega_max[i])) EXPECT_TRUE(std::isnan(back.omega_max[i]));
        else EXPECT_EQ(back.omega_max[i], map.omega_max[i]);
    }
    const CsvTable t = parse_csv(powermap_csv(map));
    EXPECT_EQ(t.header, (std::vector<std::string>{"i", "j", "omega_max_hz"}));
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[1][2], "nan");
    EXPECT_EQ(csv_number(t.rows[0][2]), 1.5e6 / kTwoPi);
}

}  // namespace
}  // namespace msgate
