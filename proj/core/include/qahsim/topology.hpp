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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qahsim/contour.hpp"
#include "qahsim/liouville.hpp"
#include "qahsim/mode_fitting.hpp"
#include "qahsim/model.hpp"
#include "qahsim/sse_engine.hpp"

namespace qahsim {

struct GridAxis {
  double min = -1.8;
  double max = 1.8;
  int n = 15;

  std::vector<double> values() const;
};

/// Time-averaged rescaled polarisation on a momentum grid, node (ix, iy)
/// stored at iy * nx + ix.
struct TextureGrid {
  std::vector<double> kx;
  std::vector<double> ky;
  std::vector<Eigen::Vector3d> s_bar;
  std::vector<unsigned char> defined;
  /// Unit post-quench field direction per node; optional. When present the
  /// dBIS is located from s_bar . axis instead of s_bar_z.
  std::vector<Eigen::Vector3d> axis;
  /// Oscillation frequency per node; optional.
  std::vector<double> omega;

  std::size_t nx() const { return kx.size(); }
  std::size_t ny() const { return ky.size(); }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * kx.size() + ix; }
  std::size_t n_defined() const;
};

struct DbisCurve {
  std::vector<Eigen::Vector2d> points;   // closed curves repeat the first point
  std::vector<Eigen::Vector2d> normals;  // unit, outward for closed curves
  bool closed = false;
  bool interrupted = false;    // ends on a masked cell
  bool hits_boundary = false;  // ends on the grid edge
  double max_residual = 0.0;   // largest |component| of s_bar along the curve
};

struct DynamicalField {
  std::vector<Eigen::Vector2d> g;
  std::vector<unsigned char> defined;
  bool closed = false;

  std::size_t n_masked() const;
};

struct WindingResult {
  int value = 0;
  double raw = 0.0;
  double residual = 0.0;
  bool precision_warning = false;
};

struct LoopS {
  Momentum center;
  double r = 0.3;
  int n_samples = 128;
};

struct LPolarization {
  double lx = 0.0;
  double ly = 0.0;
  double lz = 0.0;
  double imag_residual = 0.0;
};

enum class Phase { stable, type_I, type_II, trivial };
const char* to_string(Phase phase);

struct LoopWinding {
  Momentum center;
  double radius = 0.0;
  WindingResult winding;
  std::string around;  // "charge" or "exceptional"
};

struct TransitionEvidence {
  Phase phase = Phase::stable;
  std::vector<ExceptionalPoint> exceptional_points;
  std::vector<DbisCurve> dbis;
  std::string dbis_status;  // "closed", "interrupted", "open", "none"
  bool ep_on_dbis = false;
  bool ep_at_charge = false;
  std::vector<LoopWinding> ne;
  std::optional<WindingResult> w;
  std::string w_status;
};

struct SweetSpotPoint {
  double magnitude = 0.0;
  bool dbis_stable = false;
  bool ep_on_dbis = false;
  Phase phase = Phase::stable;
};

struct ClassifyOptions {
  double kmin = -2.0;
  double kmax = 2.0;
  int grid_n = 33;
  int ep_grid_n = 161;
  double dbis_threshold = 0.05;
  EvolutionSchedule schedule;
  TimeAverage average = TimeAverage::samples;
};

namespace topology {

/// Texture straight from the Liouvillian modes: s_bar is the mean of the
/// rescaled polarisation over the Trotter grid of the schedule. Nodes with a
/// real spectrum, an exceptional point, or less than half an oscillation in
/// the window are left undefined.
TextureGrid oracle_texture(const QahParams& p, const NoiseStrengths& w,
                           const std::vector<double>& kx, const std::vector<double>& ky,
                           const EvolutionSchedule& sched = {},
                           TimeAverage average = TimeAverage::samples);

/// Unit field direction h / |h| per node, z for h = 0.
std::vector<Eigen::Vector3d> field_axes(const QahParams& p, const std::vector<double>& kx,
                                        const std::vector<double>& ky);

/// Throws Error(NoDbis) without a zero crossing and Error(OpenContour) when
/// a contour reaches the grid edge and allow_open is false.
std::vector<DbisCurve> extract_dbis(const TextureGrid& grid, double threshold = 0.05,
                                    bool allow_open = false);

/// Normalised normal derivative of (s_bar_x, s_bar_y), one-cell central
/// stencil with bilinear interpolation. Throws Error(DegenerateField) when
/// more than 20% of the points are masked.
DynamicalField dynamical_field(const TextureGrid& grid, const DbisCurve& curve);

/// Throws Error(Masked) if any point is undefined and Error(OpenContour) for
/// an open curve.
WindingResult winding_W(const DynamicalField& field);

struct OmegaOnDbis {
  double lattice_min = 0.0;  // over nodes of cells the dBIS crosses
  Momentum lattice_at;
  double curve_min = 0.0;    // over the interpolated contour points
  Momentum curve_at;
  bool found = false;
};

/// Minimum oscillation frequency along the dBIS, resolved on the texture
/// lattice and along the contour itself.
OmegaOnDbis omega_min_on_dbis(const QahParams& p, const NoiseStrengths& w, const TextureGrid& grid,
                              const std::vector<DbisCurve>& curves);

/// Throws Error(ZeroVector) for a vanishing input.
LPolarization liouvillian_polarization(const Eigen::Vector3cd& s_plus);

/// Winding of (<Lx>, <Ly>) around the loop. Throws Error(SingularOnLoop)
/// when the field vanishes or the spectrum is real on the loop; Defective
/// propagates.
WindingResult winding_NE(const QahParams& p, const NoiseStrengths& w, const LoopS& loop);

/// Classification from a texture that is already available.
TransitionEvidence classify_texture(const QahParams& p, const NoiseStrengths& w,
                                    const TextureGrid& grid, const ClassifyOptions& opts = {});

TransitionEvidence classify_transition(const QahParams& p, const NoiseStrengths& w,
                                       const ClassifyOptions& opts = {});

/// Sweet-spot inequality with the max/min taken over the single expression.
bool sweet_spot_literal(const QahParams& p, const NoiseStrengths& w);

std::vector<SweetSpotPoint> sweet_spot_scan(const QahParams& p, const NoiseStrengths& direction,
                                            const std::vector<double>& magnitudes,
                                            const ClassifyOptions& opts = {});

}  // namespace topology
}  // namespace qahsim
