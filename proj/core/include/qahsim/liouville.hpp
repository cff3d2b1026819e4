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

#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qahsim/model.hpp"
#include "qahsim/sse_engine.hpp"

namespace qahsim {

/// Real 3x3 generator of the noise-averaged Bloch dynamics, ds/dt = L s.
struct Liouvillian {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();

  /// Recovers h from the antisymmetric part of the matrix.
  BlochVector field() const;
};

/// Spectrum of L ordered as (lambda0 slot, plus, minus). Eigenvalues of L are
/// -lambda0 and -(lambda1 +/- i omega); the "plus" slot holds
/// -(lambda1 + i omega). Left eigenvectors are the rows of the inverse of the
/// right-eigenvector matrix, so left.row(a) * right.col(b) = delta_ab under
/// the bilinear product.
struct EigenSystem {
  Eigen::Vector3cd eigenvalues = Eigen::Vector3cd::Zero();
  Eigen::Matrix3cd right = Eigen::Matrix3cd::Identity();
  Eigen::Matrix3cd left = Eigen::Matrix3cd::Identity();
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;  // equals lambda1 unless overdamped
  double omega = 0.0;
  bool overdamped = false;        // three real eigenvalues
  double condition_number = 1.0;  // of the column-normalised right matrix
  double coalescence_angle = 0.0; // radians between the two non-lambda0 modes

  double biorthonormality_residual() const;
};

/// s(t) = s0 e^{-lambda0 t} + s_plus e^{-(lambda1 + i omega) t} + s_minus e^{-(lambda1 - i omega) t}.
/// In the overdamped case omega = 0 and s_plus, s_minus hold the two real
/// modes with rates lambda1 and lambda2.
struct ModeDecomposition {
  Eigen::Vector3d s0 = Eigen::Vector3d::Zero();
  Eigen::Vector3cd s_plus = Eigen::Vector3cd::Zero();
  Eigen::Vector3cd s_minus = Eigen::Vector3cd::Zero();
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double omega = 0.0;
  bool overdamped = false;

  Eigen::Vector3d evaluate(double t) const;
  /// Same modes with all decay rates set to zero.
  Eigen::Vector3d evaluate_rescaled(double t) const;
};

struct ExceptionalPoint {
  Momentum centroid;
  std::vector<Momentum> members;
  double min_omega = 0.0;
  double max_angle = 0.0;
};

struct EpSearchOptions {
  int grid_n = 64;
  double kmin = -std::numbers::pi;
  double kmax = std::numbers::pi;
  double omega_tol = -1.0;  // negative: 1e-3 xi0
  double angle_tol = 1e-2;  // radians
};

namespace liouville {

Liouvillian build_liouvillian(const BlochVector& h, const NoiseStrengths& w);
Liouvillian build_liouvillian(const Momentum& k, const QahParams& p, const NoiseStrengths& w);

/// Throws Error(Defective) when the eigenvector matrix is nearly singular and
/// omega < tol (an exceptional point).
EigenSystem eigensystem(const Liouvillian& L, double tol = 1e-3);
/// Same decomposition without the exceptional-point check.
EigenSystem eigensystem_unchecked(const Liouvillian& L);

ModeDecomposition mode_decomposition(const Liouvillian& L, const Eigen::Vector3d& s_init,
                                     double tol = 1e-3);

SpinTrajectory exact_evolution(const Liouvillian& L, const Eigen::Vector3d& s_init,
                               const std::vector<double>& times);
SpinTrajectory exact_evolution(const Momentum& k, const QahParams& p, const NoiseStrengths& w,
                               const Eigen::Vector3d& s_init, const std::vector<double>& times);

/// |Im lambda_plus|, zero for a purely real spectrum.
double oscillation_frequency(const Momentum& k, const QahParams& p, const NoiseStrengths& w);

/// Discriminant of the characteristic polynomial: > 0 for three distinct
/// real eigenvalues, < 0 for a real eigenvalue plus a complex pair.
double discriminant(const Liouvillian& L);

/// Exceptional points on a square momentum window: sign changes of the
/// discriminant located by bisection, plus isolated points found by
/// minimising omega from its local minima. Accepted points satisfy
/// omega < omega_tol and coalescence angle < angle_tol; they are clustered by
/// proximity.
std::vector<ExceptionalPoint> find_exceptional_points(const QahParams& p, const NoiseStrengths& w,
                                                      const EpSearchOptions& opts = {});

}  // namespace liouville
}  // namespace qahsim
