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
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qahsim/liouville.hpp"
#include "qahsim/mode_fitting.hpp"
#include "qahsim/model.hpp"
#include "qahsim/sse_engine.hpp"
#include "qahsim/topology.hpp"

namespace qahsim {

enum class RunMode { sse, oracle, both };
const char* to_string(RunMode mode);

struct ConvergenceSettings {
  Momentum sweep_momentum{1.2857, -1.8};
  std::vector<int> m_list{10, 30, 100, 300};
  int sweep_configs = 5000;
  Momentum rms_momentum{-1.286, -0.257};
  std::optional<NoiseStrengths> rms_noise;  // defaults to the run noise
  std::vector<int> config_counts{50, 200, 1000, 5000};
  int replicas = 4;
};

struct SweepSettings {
  NoiseStrengths direction{1.0, 1.0, 1.0};
  std::vector<double> magnitudes{0.5, 5.0, 10.0};
};

struct RunConfig {
  int schema_version = 1;
  std::string name = "run";
  QahParams model;  // model.mz is the post-quench field
  NoiseStrengths noise;
  GridAxis kx;
  GridAxis ky;
  EvolutionSchedule schedule;
  int n_configs = 5000;
  std::uint64_t seed = 20260101;
  RunMode mode = RunMode::oracle;
  std::string outputs;
  int workers = 1;
  double dbis_threshold = 0.05;
  int ep_grid_n = 161;
  TimeAverage average = TimeAverage::samples;
  ConvergenceSettings convergence;
  SweepSettings sweep;
  /// Member runs of a transition suite.
  std::vector<RunConfig> transitions;

  /// Throws Error(ConfigInvalid) naming the offending field.
  void validate() const;
};

struct CellResult {
  Momentum k;
  Eigen::Vector3d s_bar = Eigen::Vector3d::Zero();
  double omega = 0.0;
  bool defined = false;
  bool fit_failed = false;
  std::string status = "ok";
  double residual_rms = 0.0;
  ModeDecomposition decomposition;
};

struct RunSummary {
  std::string software_version;
  RunConfig config;
  std::vector<CellResult> cells;  // node (ix, iy) at iy * nx + ix
  TransitionEvidence evidence;
  topology::OmegaOnDbis omega_on_dbis;
  int n_failed = 0;
  int n_masked = 0;
  std::optional<double> cross_mode_rms;  // both mode: sse vs oracle texture
  double elapsed_seconds = 0.0;          // not part of the serialised summary

  TextureGrid texture() const;
};

struct ConvergenceRow {
  int n_configs = 0;
  double rms = 0.0;
  std::vector<double> replica_rms;
};

struct ConvergenceReport {
  std::vector<SweepPoint> sweep;
  std::vector<ConvergenceRow> rms;
  double slope = 0.0;
};

struct SweetSpotReport {
  bool literal = false;
  std::vector<SweetSpotPoint> scan;
};

namespace runner {

RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& cfg);

std::string summary_to_json(const RunSummary& s);
RunSummary summary_from_json(const std::string& text);

/// Per-momentum pipeline (simulate or oracle, fit, rescale, time-average),
/// then dBIS, windings, exceptional points and classification. Cells whose
/// fit fails are masked and counted rather than aborting the grid.
RunSummary run_texture(const RunConfig& cfg);

std::vector<RunSummary> run_transition_suite(const std::vector<RunConfig>& cfgs);

ConvergenceReport run_convergence(const RunConfig& cfg);

SweetSpotReport run_sweetspot(const RunConfig& cfg);

/// texture.csv, dbis.json, summary.json and timing.json under dir.
void write_texture_outputs(const RunSummary& s, const std::string& dir);
std::string texture_csv(const RunSummary& s);

std::string convergence_to_json(const ConvergenceReport& r);
std::string transitions_to_json(const std::vector<RunSummary>& runs);
std::string sweetspot_to_json(const SweetSpotReport& r);

/// 17 significant digits ("%.17g"), enough for a lossless round trip.
std::string format_double(double v);

const char* version();

}  // namespace runner
}  // namespace qahsim
