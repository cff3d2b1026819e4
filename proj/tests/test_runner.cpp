// Copyright 2026 The qahsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qahsim/error.hpp"
#include "qahsim/liouville.hpp"
#include "qahsim/runner.hpp"

namespace qahsim {
namespace {

namespace fs = std::filesystem;

std::string preset(const std::string& name) { return std::string(QAHSIM_SOURCE_DIR) + "/configs/" + name; }

void expect_config_error(const std::string& json, const std::string& field) {
  try {
    runner::config_from_json(json);
    FAIL() << json;
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigInvalid);
    EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
  }
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(Config, PresetsLoad) {
  for (const char* name : {"fig3.json", "fig4c.json", "fig4d.json", "fig7.json", "convergence.json"}) {
    EXPECT_NO_THROW(runner::load_config(preset(name))) << name;
  }
  const RunConfig t = runner::load_config(preset("transitions.json"));
  ASSERT_EQ(t.transitions.size(), 3u);
  EXPECT_EQ(t.transitions[2].model.xi_so, 2.0);
}

TEST(Config, FieldLevelErrors) {
  expect_config_error(R"({"noise": {"wx": 0.1, "wq": 2}})", "noise.wq");
  expect_config_error(R"({"grid": {"kx": {"min": -1, "max": 1, "n": 1}}})", "grid.kx.n");
  expect_config_error(R"({"mode": "sse", "n_configs": 0})", "n_configs");
  expect_config_error(R"({"noise": {"wx": -0.1}})", "noise.wx");
  expect_config_error(R"({"schedule": {"n_steps": 300, "sample_stride": 7}})", "schedule.sample_stride");
  expect_config_error(R"({"seed": "abc"})", "seed");
  expect_config_error(R"({"mode": "fast"})", "mode");
  expect_config_error(R"({"schema_version": 2})", "schema_version");
  expect_config_error("{not json", "");
}

TEST(Config, RoundTrip) {
  RunConfig c = runner::load_config(preset("convergence.json"));
  c.seed = 0xFFFFFFFFFFFFFFF1ULL;
  c.noise.wx = 0.1 + 0.2;  // not exactly representable as a short decimal
  const std::string a = runner::config_to_json(c);
  const RunConfig back = runner::config_from_json(a);
  EXPECT_EQ(runner::config_to_json(back), a);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_TRUE(same_bits(back.noise.wx, c.noise.wx));
}

TEST(Texture, Fig3OracleStable) {
  const RunSummary s = runner::run_texture(runner::load_config(preset("fig3.json")));
  EXPECT_EQ(s.evidence.phase, Phase::stable);
  EXPECT_EQ(s.evidence.dbis_status, "closed");
  ASSERT_TRUE(s.evidence.w.has_value());
  EXPECT_EQ(std::abs(s.evidence.w->value), 1);
  EXPECT_EQ(s.n_failed, 0);
  EXPECT_EQ(s.cells.size(), 225u);
}

TEST(Texture, TrivialQuench) {
  RunConfig c = runner::load_config(preset("fig3.json"));
  c.model.mz = 5.0;
  const RunSummary s = runner::run_texture(c);
  EXPECT_EQ(s.evidence.phase, Phase::trivial);
  EXPECT_EQ(s.evidence.dbis_status, "none");
}

TEST(Summary, LosslessRoundTrip) {
  RunConfig c = runner::load_config(preset("fig4c.json"));
  c.kx.n = c.ky.n = 17;
  const RunSummary s = runner::run_texture(c);
  const std::string a = runner::summary_to_json(s);
  const RunSummary back = runner::summary_from_json(a);
  EXPECT_EQ(runner::summary_to_json(back), a);
  ASSERT_EQ(back.cells.size(), s.cells.size());
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    for (int k = 0; k < 3; ++k) EXPECT_TRUE(same_bits(back.cells[i].s_bar(k), s.cells[i].s_bar(k)));
    EXPECT_TRUE(same_bits(back.cells[i].omega, s.cells[i].omega));
  }
  EXPECT_EQ(runner::config_to_json(back.config), runner::config_to_json(c));
  EXPECT_EQ(back.evidence.phase, s.evidence.phase);
  EXPECT_EQ(back.evidence.exceptional_points.size(), s.evidence.exceptional_points.size());
}

TEST(Texture, CsvAndArtifacts) {
  RunConfig c = runner::load_config(preset("fig3.json"));
  const fs::path dir = fs::temp_directory_path() / "qahsim_test_artifacts";
  fs::remove_all(dir);
  c.outputs = (dir / "nested").string();
  const RunSummary s = runner::run_texture(c);
  for (const char* f : {"texture.csv", "dbis.json", "summary.json", "timing.json"}) {
    EXPECT_TRUE(fs::exists(dir / "nested" / f)) << f;
  }
  std::istringstream csv(runner::texture_csv(s));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "kx,ky,sbar_x,sbar_y,sbar_z,omega,defined");
  std::string row;
  std::getline(csv, row);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 6);
  EXPECT_EQ(runner::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(runner::format_double(1.0 / 3.0)), 1.0 / 3.0);
  fs::remove_all(dir);
}

TEST(Texture, ByteIdenticalAcrossWorkers) {
  RunConfig c = runner::load_config(preset("fig3.json"));
  c.mode = RunMode::sse;
  c.kx.n = c.ky.n = 8;
  c.n_configs = 300;
  std::string csv, json;
  for (int workers : {1, 3, 4, 1}) {
    c.workers = workers;
    const RunSummary s = runner::run_texture(c);
    RunSummary echo = s;
    echo.config.workers = 1;  // the echo records the flag itself
    if (csv.empty()) {
      csv = runner::texture_csv(s);
      json = runner::summary_to_json(echo);
    } else {
      EXPECT_EQ(runner::texture_csv(s), csv) << workers;
      EXPECT_EQ(runner::summary_to_json(echo), json) << workers;
    }
  }
}

TEST(Texture, PartialFailuresAreMaskedNotFatal) {
  RunConfig c = runner::load_config(preset("fig4d.json"));
  c.mode = RunMode::sse;
  c.kx.n = c.ky.n = 8;
  c.n_configs = 1;  // single noisy trajectories do not fit the averaged model
  const RunSummary s = runner::run_texture(c);
  EXPECT_EQ(s.cells.size(), 64u);
  EXPECT_GT(s.n_failed, 0);
  for (const auto& cell : s.cells) {
    if (cell.fit_failed) EXPECT_FALSE(cell.defined);
  }
}

TEST(Texture, BothModeAgreesWithinStatisticalFloor) {
  RunConfig c = runner::load_config(preset("fig3.json"));
  c.mode = RunMode::both;
  c.kx.n = c.ky.n = 8;
  c.n_configs = 2000;
  const RunSummary s = runner::run_texture(c);
  ASSERT_TRUE(s.cross_mode_rms.has_value());
  EXPECT_LT(*s.cross_mode_rms, 3.0 / std::sqrt(2000.0));
}

TEST(Transitions, EmptyList) { EXPECT_TRUE(runner::run_transition_suite({}).empty()); }

TEST(Transitions, CanonicalVerdicts) {
  const RunConfig suite = runner::load_config(preset("transitions.json"));
  const auto runs = runner::run_transition_suite(suite.transitions);
  ASSERT_EQ(runs.size(), 3u);
  EXPECT_EQ(runs[0].evidence.phase, Phase::stable);
  EXPECT_TRUE(runs[0].evidence.ne.empty());
  EXPECT_EQ(runs[1].evidence.phase, Phase::type_I);
  ASSERT_FALSE(runs[1].evidence.ne.empty());
  for (const auto& l : runs[1].evidence.ne) EXPECT_EQ(l.winding.value, 0);
  EXPECT_EQ(runs[2].evidence.phase, Phase::type_II);
  bool one = false;
  for (const auto& l : runs[2].evidence.ne) one |= std::abs(l.winding.value) == 1;
  EXPECT_TRUE(one);
  EXPECT_NE(runner::transitions_to_json(runs).find("type_II"), std::string::npos);
}

// Deterministic limit: one configuration without noise deviates from the
// oracle by the Trotter error alone, recomputed here from closed-form SU(2)
// factors.
TEST(Convergence, DeterministicLimit) {
  RunConfig c = runner::load_config(preset("convergence.json"));
  c.noise = {};
  c.convergence.rms_noise = NoiseStrengths{};
  c.convergence.config_counts = {1};
  c.convergence.replicas = 1;
  c.convergence.m_list = {100, 300};
  c.convergence.sweep_configs = 1;
  const ConvergenceReport r = runner::run_convergence(c);
  ASSERT_EQ(r.rms.size(), 1u);

  const Momentum k = c.convergence.rms_momentum;
  const BlochVector h = model::bloch_vector(k, c.model);
  const double tau = c.schedule.tau();
  const auto u = testing::su2({h.x(), 0, 0}, tau) * testing::su2({0, h.y(), 0}, tau) *
                 testing::su2({0, 0, h.z()}, tau);
  Eigen::Vector2cd psi(0, 1);
  const auto t = c.schedule.sample_times();
  const SpinTrajectory exact = liouville::exact_evolution(k, c.model, {}, {0, 0, -1}, t);
  double mse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0) {
      for (int s = 0; s < c.schedule.sample_stride; ++s) psi = u * psi;
    }
    mse += (testing::bloch(psi) - exact.polarization[i]).squaredNorm();
  }
  const double expected = std::sqrt(mse / (3.0 * t.size()));
  EXPECT_NEAR(r.rms[0].rms, expected, 1e-10);
  EXPECT_LT(r.rms[0].rms, 0.05);
  EXPECT_LT(r.sweep[1].rss, r.sweep[0].rss);
}

TEST(SweetSpot, PresetAllStable) {
  const SweetSpotReport r = runner::run_sweetspot(runner::load_config(preset("fig7.json")));
  EXPECT_TRUE(r.literal);
  ASSERT_EQ(r.scan.size(), 3u);
  for (const auto& p : r.scan) EXPECT_TRUE(p.dbis_stable) << p.magnitude;
  EXPECT_NE(runner::sweetspot_to_json(r).find("magnitude"), std::string::npos);
}

}  // namespace
}  // namespace qahsim
