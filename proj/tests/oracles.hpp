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
// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical kernels.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace qahsim::testing {

using C = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline Mat2 pauli(int a) {
  Mat2 s;
  switch (a) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, C(0, -1), C(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

/// exp(-i theta n.sigma) for a unit vector n, closed form.
inline Mat2 su2(const Eigen::Vector3d& v, double t) {
  const double len = v.norm();
  if (len == 0.0) return Mat2::Identity();
  const Eigen::Vector3d n = v / len;
  const Mat2 ns = n.x() * pauli(0) + n.y() * pauli(1) + n.z() * pauli(2);
  return std::cos(len * t) * Mat2::Identity() - C(0, 1) * std::sin(len * t) * ns;
}

/// SO(3) image of a 2x2 unitary: R_ij = tr(sigma_i U sigma_j U^dagger) / 2.
inline Eigen::Matrix3d bloch_rotation(const Mat2& u) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = 0.5 * (pauli(i) * u * pauli(j) * u.adjoint()).trace().real();
    }
  }
  return r;
}

inline Eigen::Vector3d bloch(const Eigen::Vector2cd& psi) {
  const C a = psi(0), b = psi(1);
  return {2.0 * (std::conj(a) * b).real(), 2.0 * (std::conj(a) * b).imag(),
          std::norm(a) - std::norm(b)};
}

/// Gauss-Hermite rule for the standard normal weight, Golub-Welsch.
struct Quadrature {
  std::vector<double> x;
  std::vector<double> w;
};

inline Quadrature gauss_hermite_normal(int n) {
  // Probabilists' Hermite recurrence: off-diagonal sqrt(k).
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Quadrature q;
  for (int k = 0; k < n; ++k) {
    q.x.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    q.w.push_back(v * v);
  }
  return q;
}

/// Degree of the map k -> h/|h| from the torus to the sphere, by midpoint
/// quadrature of n.(d_x n x d_y n) / 4 pi with central differences.
template <typename Field>
double skyrmion_number(Field&& h, int n) {
  const double d = 2.0 * std::numbers::pi / n;
  auto unit = [&](double x, double y) {
    const Eigen::Vector3d v = h(x, y);
    return Eigen::Vector3d(v / v.norm());
  };
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = -std::numbers::pi + (i + 0.5) * d;
      const double y = -std::numbers::pi + (j + 0.5) * d;
      const Eigen::Vector3d nx = (unit(x + 0.5 * d, y) - unit(x - 0.5 * d, y)) / d;
      const Eigen::Vector3d ny = (unit(x, y + 0.5 * d) - unit(x, y - 0.5 * d)) / d;
      sum += unit(x, y).dot(nx.cross(ny)) * d * d;
    }
  }
  return sum / (4.0 * std::numbers::pi);
}

}  // namespace qahsim::testing
