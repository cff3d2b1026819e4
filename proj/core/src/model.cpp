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
#include "qahsim/model.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "qahsim/error.hpp"

namespace qahsim {

void QahParams::validate() const {
  if (!std::isfinite(xi0) || !std::isfinite(xi_so) || !std::isfinite(mz)) {
    throw Error(ErrorKind::InvalidArgument, "model parameters must be finite");
  }
  if (xi0 <= 0.0) throw Error(ErrorKind::InvalidArgument, "xi0 must be positive");
}

void NoiseStrengths::validate() const {
  for (double w : {wx, wy, wz}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "noise strengths must be finite and >= 0");
    }
  }
}

namespace model {

BlochVector bloch_vector(const Momentum& k, const QahParams& p) {
  return {p.xi_so * std::sin(k.kx), p.xi_so * std::sin(k.ky),
          p.mz - p.xi0 * std::cos(k.kx) - p.xi0 * std::cos(k.ky)};
}

namespace {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector2cd;

// Lower-band eigenvector of h.sigma in whichever of the two gauges is regular.
Spinor lower_band(const BlochVector& h) {
  const double n = h.norm();
  Spinor a(cplx(h.x(), -h.y()), cplx(-(h.z() + n), 0.0));
  Spinor b(cplx(n - h.z(), 0.0), cplx(-h.x(), -h.y()));
  Spinor& u = (a.squaredNorm() >= b.squaredNorm()) ? a : b;
  return u / u.norm();
}

cplx link(const Spinor& a, const Spinor& b) {
  const cplx z = a.dot(b);
  return z / std::abs(z);
}

}  // namespace

int chern_number(const QahParams& p, int grid_n) {
  p.validate();
  if (grid_n < 16) throw Error(ErrorKind::InvalidArgument, "grid_n must be >= 16");
  const double scale = std::max({p.xi0, std::abs(p.xi_so), std::abs(p.mz)});
  const double gap_tol = 1e-9 * scale;
  constexpr double pi = std::numbers::pi;
  // hx = hy = 0 at the four high-symmetry momenta; the gap closes there
  // whenever hz also vanishes, however coarse the lattice.
  for (double kx : {0.0, pi}) {
    for (double ky : {0.0, pi}) {
      if (bloch_vector({kx, ky}, p).norm() < gap_tol) {
        throw Error(ErrorKind::GapClosed, "band touching at a high-symmetry momentum");
      }
    }
  }
  const auto n = static_cast<std::size_t>(grid_n);
  const double dk = 2.0 * pi / grid_n;
  std::vector<Spinor> u(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const BlochVector h = bloch_vector({-pi + dk * i, -pi + dk * j}, p);
      if (h.norm() < gap_tol) throw Error(ErrorKind::GapClosed, "band touching on the lattice");
      u[j * n + i] = lower_band(h);
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t j1 = (j + 1) % n;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t i1 = (i + 1) % n;
      const cplx loop = link(u[j * n + i], u[j * n + i1]) * link(u[j * n + i1], u[j1 * n + i1]) *
                        std::conj(link(u[j1 * n + i], u[j1 * n + i1])) *
                        std::conj(link(u[j * n + i], u[j1 * n + i]));
      total += std::arg(loop);
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * pi)));
}

std::vector<Polyline> ideal_bis(const QahParams& p, int grid_n) {
  p.validate();
  if (grid_n < 4) throw Error(ErrorKind::InvalidArgument, "grid_n must be >= 4");
  constexpr double pi = std::numbers::pi;
  const double centre = p.mz >= 0.0 ? 0.0 : pi;
  if (std::abs(std::abs(p.mz) - 2.0 * p.xi0) <= 1e-12 * p.xi0) {
    Polyline point;
    point.points.push_back({centre, centre});
    point.closed = true;
    return {point};
  }
  ScalarGrid g;
  const auto n = static_cast<std::size_t>(grid_n);
  g.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.x[i] = centre - pi + 2.0 * pi * i / (grid_n - 1);
  g.y = g.x;
  g.values.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      g.values[j * n + i] = bloch_vector({g.x[i], g.y[j]}, p).z();
    }
  }
  auto lines = zero_contours(g);
  if (lines.empty()) throw Error(ErrorKind::EmptyBis, "hz does not change sign");
  return lines;
}

}  // namespace model
}  // namespace qahsim
