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
#include <vector>

#include <Eigen/Dense>

#include "qahsim/model.hpp"
#include "qahsim/rng.hpp"

namespace qahsim {

/// Pure qubit state in the (|up>, |down>) basis.
using SpinState = Eigen::Vector2cd;

struct EvolutionSchedule {
  double t_total = 30.0;  // ms
  int n_steps = 300;
  int sample_stride = 20;

  /// Throws Error(InvalidTau) for a non-positive step and
  /// Error(InvalidArgument) for a stride that does not divide n_steps.
  void validate() const;
  double tau() const { return t_total / n_steps; }
  /// Recorded times, 0 and t_total included.
  std::vector<double> sample_times() const;
  /// Trotter grid t_n = n tau for n = 0 .. n_steps - 1.
  std::vector<double> step_times() const;
};

struct SpinTrajectory {
  Momentum momentum;
  std::vector<double> times;
  std::vector<Eigen::Vector3d> polarization;
};

struct EnsembleResult {
  SpinTrajectory mean;
  std::vector<Eigen::Vector3d> std_error;  // per sample and component
  int n_configs = 0;
};

struct SweepPoint {
  int n_steps = 0;
  double rss = 0.0;
  double fidelity = 0.0;
};

namespace sse {

SpinState spin_down();
Eigen::Vector3d polarization(const SpinState& psi);

/// One Trotter step exp(-i eta_x sx tau) exp(-i eta_y sy tau) exp(-i eta_z sz tau)
/// with eta_i = h_i + sqrt(w_i) N_i / sqrt(tau), followed by renormalisation.
SpinState step(const SpinState& psi, const BlochVector& h, const NoiseStrengths& w,
               const NoiseDraw& draw, double tau);

/// One noise configuration starting from |down>. The stream tag separates
/// independent experiments that share a seed (e.g. grid cells).
SpinTrajectory simulate_trajectory(const Momentum& k, const QahParams& p,
                                   const NoiseStrengths& w, const EvolutionSchedule& sched,
                                   std::uint64_t seed, std::uint64_t config_index,
                                   std::uint64_t stream = 0);

/// Mean over configurations 0 .. n_configs-1. Configurations are summed in
/// fixed blocks and the blocks are combined in index order, so the result is
/// bitwise independent of the worker count.
SpinTrajectory ensemble_average(const Momentum& k, const QahParams& p, const NoiseStrengths& w,
                                const EvolutionSchedule& sched, std::uint64_t seed,
                                int n_configs, int workers = 1, std::uint64_t stream = 0);

EnsembleResult ensemble_statistics(const Momentum& k, const QahParams& p,
                                   const NoiseStrengths& w, const EvolutionSchedule& sched,
                                   std::uint64_t seed, int n_configs, int workers = 1,
                                   std::uint64_t stream = 0);

/// RSS and mean Uhlmann fidelity of the ensemble average against the exact
/// Liouvillian evolution for each step count. All step counts are sampled on
/// a common time grid whose interval count is the gcd of m_list.
std::vector<SweepPoint> discretization_sweep(const Momentum& k, const QahParams& p,
                                             const NoiseStrengths& w,
                                             const EvolutionSchedule& sched_base,
                                             const std::vector<int>& m_list, std::uint64_t seed,
                                             int n_configs, int workers = 1);

/// Fidelity of the qubit states with Bloch vectors a and b.
double uhlmann_fidelity(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

}  // namespace sse
}  // namespace qahsim
