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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qahsim/liouville.hpp"
#include "qahsim/sse_engine.hpp"

namespace qahsim {

/// How the rescaled polarisation is averaged over time: the arithmetic mean
/// over the Trotter grid, or the infinite-window mean of the closed form.
enum class TimeAverage { samples, analytic };

struct FitConfig {
  double residual_threshold = 0.05;  // rms, polarisation units
  double noise_floor = 1e-9;         // below this the trajectory carries no signal
  double tolerance = 1e-15;          // LM ftol / xtol
  int max_evaluations = 4000;
};

struct FitResult {
  ModeDecomposition decomposition;
  double residual_rms = 0.0;
  bool converged = false;
  int n_iterations = 0;
  /// Data showed less than half an oscillation; the model was reduced to
  /// real exponentials with omega = 0.
  bool overdamped = false;
};

struct RescaledTrajectory {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> s_tilde;
};

namespace fitting {

/// Least-squares fit of s0 e^{-l0 t} + 2 e^{-l1 t} (a cos wt + b sin wt)
/// (twelve real parameters, s_plus = a + i b). Without an initial guess the
/// start point comes from a frequency/decay scan with the amplitudes solved
/// linearly. Fits with omega * span < pi are redone with omega = 0.
/// Throws Error(DegenerateData) for a trajectory below the noise floor and
/// Error(FitDiverged) when the residual stays above the threshold.
FitResult fit_modes(const SpinTrajectory& traj,
                    const std::optional<ModeDecomposition>& init_guess = std::nullopt,
                    const FitConfig& cfg = {});

/// Evaluates the fitted modes with the decay rates removed.
RescaledTrajectory rescale(const FitResult& fit, const std::vector<double>& times);

Eigen::Vector3d time_average(const RescaledTrajectory& rt);

/// time_average(rescale(...)) evaluated directly from a decomposition.
Eigen::Vector3d rescaled_time_average(const ModeDecomposition& md,
                                      const std::vector<double>& times);

/// Infinite-window mean of the rescaled closed form: s0 for oscillating
/// decompositions, the constant s0 + s_plus + s_minus otherwise.
Eigen::Vector3d analytic_time_average(const ModeDecomposition& md);

}  // namespace fitting
}  // namespace qahsim
