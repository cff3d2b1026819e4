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
#include <cmath>
#include <numbers>

#include "qahsim/error.hpp"
#include "qahsim/mode_fitting.hpp"
#include "qahsim/topology.hpp"

namespace qahsim {

std::vector<double> GridAxis::values() const {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "grid axis needs n >= 1");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = n == 1 ? min : min + (max - min) * i / (n - 1);
  }
  return v;
}

std::size_t TextureGrid::n_defined() const {
  std::size_t c = 0;
  for (auto d : defined) c += d ? 1 : 0;
  return c;
}

namespace topology {

std::vector<Eigen::Vector3d> field_axes(const QahParams& p, const std::vector<double>& kx,
                                        const std::vector<double>& ky) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(kx.size() * ky.size());
  for (double y : ky) {
    for (double x : kx) {
      const BlochVector h = model::bloch_vector({x, y}, p);
      const double n = h.norm();
      out.push_back(n > 0.0 ? Eigen::Vector3d(h / n) : Eigen::Vector3d::UnitZ());
    }
  }
  return out;
}

TextureGrid oracle_texture(const QahParams& p, const NoiseStrengths& w,
                           const std::vector<double>& kx, const std::vector<double>& ky,
                           const EvolutionSchedule& sched, TimeAverage average) {
  p.validate();
  w.validate();
  sched.validate();
  TextureGrid g;
  g.kx = kx;
  g.ky = ky;
  const std::size_t n = kx.size() * ky.size();
  g.s_bar.assign(n, Eigen::Vector3d::Zero());
  g.defined.assign(n, 0);
  g.omega.assign(n, 0.0);
  g.axis = field_axes(p, kx, ky);
  const std::vector<double> times = sched.step_times();
  const double ep_tol = 1e-3 * p.xi0;
  for (std::size_t iy = 0; iy < ky.size(); ++iy) {
    for (std::size_t ix = 0; ix < kx.size(); ++ix) {
      const std::size_t c = g.index(ix, iy);
      const Liouvillian L = liouville::build_liouvillian({kx[ix], ky[iy]}, p, w);
      try {
        const ModeDecomposition md = liouville::mode_decomposition(L, {0.0, 0.0, -1.0}, ep_tol);
        g.omega[c] = md.omega;
        g.s_bar[c] = average == TimeAverage::analytic ? fitting::analytic_time_average(md)
                                                      : fitting::rescaled_time_average(md, times);
        g.defined[c] = (!md.overdamped && md.omega * sched.t_total >= std::numbers::pi) ? 1 : 0;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Defective) throw;
      }
    }
  }
  return g;
}

}  // namespace topology
}  // namespace qahsim
