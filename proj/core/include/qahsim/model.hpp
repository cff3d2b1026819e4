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

#include <vector>

#include <Eigen/Dense>

#include "qahsim/contour.hpp"

namespace qahsim {

/// Crystal momentum (dimensionless).
struct Momentum {
  double kx = 0.0;
  double ky = 0.0;
};

/// Static couplings of the two-band QAH model, energies in kHz.
struct QahParams {
  double xi0 = 1.0;
  double xi_so = 0.2;
  double mz = 1.2;

  /// Throws Error(InvalidArgument) when xi0 <= 0 or a field is not finite.
  void validate() const;
};

/// Per-axis white-noise variance rates in kHz.
struct NoiseStrengths {
  double wx = 0.0;
  double wy = 0.0;
  double wz = 0.0;

  void validate() const;
  bool is_zero() const { return wx == 0.0 && wy == 0.0 && wz == 0.0; }
  double sum() const { return wx + wy + wz; }
};

using BlochVector = Eigen::Vector3d;

namespace model {

BlochVector bloch_vector(const Momentum& k, const QahParams& p);

/// Lattice Chern number of the lower band of h(k).sigma.
/// Throws Error(GapClosed) if the gap closes anywhere on the lattice or at a
/// high-symmetry momentum.
int chern_number(const QahParams& p, int grid_n = 200);

/// Zero-level contours of hz. The sampling window is centred on the momentum
/// the band inversion surrounds: (0,0) for mz > 0 and (pi,pi) for mz < 0.
/// At |mz| = 2 xi0 the surface collapses to a single point, returned as a
/// one-point polyline. Throws Error(EmptyBis) when hz never changes sign.
std::vector<Polyline> ideal_bis(const QahParams& p, int grid_n = 200);

}  // namespace model
}  // namespace qahsim
