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
#include "qahsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qahsim/error.hpp"

namespace qahsim {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::stable: return "stable";
    case Phase::type_I: return "type_I";
    case Phase::type_II: return "type_II";
    case Phase::trivial: return "trivial";
  }
  return "unknown";
}

std::size_t DynamicalField::n_masked() const {
  std::size_t c = 0;
  for (auto d : defined) c += d ? 0 : 1;
  return c;
}

namespace topology {
namespace {

using Eigen::Vector2d;
using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

ScalarGrid component_grid(const TextureGrid& g, int component) {
  ScalarGrid s;
  s.x = g.kx;
  s.y = g.ky;
  s.defined = g.defined;
  s.values.resize(g.s_bar.size());
  for (std::size_t i = 0; i < g.s_bar.size(); ++i) s.values[i] = g.s_bar[i](component);
  return s;
}

double cell_size(const TextureGrid& g) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < g.kx.size(); ++i) h = std::min(h, g.kx[i] - g.kx[i - 1]);
  for (std::size_t i = 1; i < g.ky.size(); ++i) h = std::min(h, g.ky[i] - g.ky[i - 1]);
  return h;
}

double signed_area(const std::vector<Vector2d>& pts) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    a += pts[i].x() * pts[i + 1].y() - pts[i + 1].x() * pts[i].y();
  }
  return 0.5 * a;
}

double wrap_angle(double d) {
  while (d > std::numbers::pi) d -= kTwoPi;
  while (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

WindingResult finish_winding(double total_angle) {
  WindingResult r;
  r.raw = total_angle / kTwoPi;
  r.value = static_cast<int>(std::lround(r.raw));
  r.residual = std::abs(r.raw - r.value);
  r.precision_warning = r.residual >= 0.05;
  return r;
}

}  // namespace

std::vector<DbisCurve> extract_dbis(const TextureGrid& grid, double threshold, bool allow_open) {
  if (grid.nx() < 8 || grid.ny() < 8) {
    throw Error(ErrorKind::InvalidArgument, "dBIS extraction needs at least an 8x8 grid");
  }
  ScalarGrid phi;
  phi.x = grid.kx;
  phi.y = grid.ky;
  phi.defined = grid.defined;
  phi.values.resize(grid.s_bar.size());
  const bool projected = grid.axis.size() == grid.s_bar.size();
  for (std::size_t i = 0; i < grid.s_bar.size(); ++i) {
    phi.values[i] = projected ? grid.s_bar[i].dot(grid.axis[i]) : grid.s_bar[i].z();
  }
  const std::vector<Polyline> lines = zero_contours(phi);
  if (lines.empty()) throw Error(ErrorKind::NoDbis, "texture has no zero crossing");

  const ScalarGrid comp[3] = {component_grid(grid, 0), component_grid(grid, 1),
                              component_grid(grid, 2)};
  std::vector<DbisCurve> out;
  for (const Polyline& line : lines) {
    if (line.hits_boundary && !allow_open) {
      throw Error(ErrorKind::OpenContour, "dBIS contour reaches the grid boundary");
    }
    DbisCurve c;
    c.closed = line.closed;
    c.interrupted = line.interrupted;
    c.hits_boundary = line.hits_boundary;
    for (const Vector2d& p : line.points) {
      if (c.points.empty() || (p - c.points.back()).norm() > 1e-12) c.points.push_back(p);
    }
    if (c.closed && c.points.size() > 1 && (c.points.front() - c.points.back()).norm() > 1e-12) {
      c.points.push_back(c.points.front());
    }
    if (c.closed && signed_area(c.points) < 0.0) std::reverse(c.points.begin(), c.points.end());

    const std::size_t n = c.points.size();
    const std::size_t unique = c.closed ? n - 1 : n;
    c.normals.assign(n, Vector2d::Zero());
    for (std::size_t i = 0; i < unique && unique > 1; ++i) {
      Vector2d prev, next;
      if (c.closed) {
        prev = c.points[(i + unique - 1) % unique];
        next = c.points[(i + 1) % unique];
      } else {
        prev = c.points[i == 0 ? 0 : i - 1];
        next = c.points[i + 1 < unique ? i + 1 : unique - 1];
      }
      const Vector2d t = next - prev;
      const double tn = t.norm();
      if (tn > 0.0) c.normals[i] = Vector2d(t.y(), -t.x()) / tn;
    }
    if (c.closed && n > 1) c.normals[n - 1] = c.normals[0];

    for (const Vector2d& p : c.points) {
      for (const auto& g : comp) {
        double v = 0.0;
        if (bilinear(g, p.x(), p.y(), v)) c.max_residual = std::max(c.max_residual, std::abs(v));
      }
    }
    (void)threshold;
    out.push_back(std::move(c));
  }
  return out;
}

DynamicalField dynamical_field(const TextureGrid& grid, const DbisCurve& curve) {
  const ScalarGrid sx = component_grid(grid, 0);
  const ScalarGrid sy = component_grid(grid, 1);
  const double delta = cell_size(grid);
  DynamicalField f;
  f.closed = curve.closed;
  const std::size_t n = curve.closed ? curve.points.size() - 1 : curve.points.size();
  f.g.assign(n, Vector2d::Zero());
  f.defined.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector2d& p = curve.points[i];
    const Vector2d& nrm = curve.normals[i];
    if (nrm.norm() == 0.0) continue;
    const Vector2d a = p + delta * nrm, b = p - delta * nrm;
    double xa, xb, ya, yb;
    if (!bilinear(sx, a.x(), a.y(), xa) || !bilinear(sx, b.x(), b.y(), xb) ||
        !bilinear(sy, a.x(), a.y(), ya) || !bilinear(sy, b.x(), b.y(), yb)) {
      continue;
    }
    const Vector2d raw((xa - xb) / (2.0 * delta), (ya - yb) / (2.0 * delta));
    if (raw.norm() < 1e-12) continue;
    f.g[i] = raw.normalized();
    f.defined[i] = 1;
  }
  if (n == 0 || static_cast<double>(f.n_masked()) > 0.2 * static_cast<double>(n)) {
    throw Error(ErrorKind::DegenerateField,
                std::to_string(f.n_masked()) + " of " + std::to_string(n) + " points masked");
  }
  return f;
}

WindingResult winding_W(const DynamicalField& field) {
  if (!field.closed) throw Error(ErrorKind::OpenContour, "winding needs a closed curve");
  if (field.n_masked() > 0) throw Error(ErrorKind::Masked, "field undefined on the curve");
  const std::size_t n = field.g.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector2d& a = field.g[i];
    const Vector2d& b = field.g[(i + 1) % n];
    total += wrap_angle(std::atan2(b.y(), b.x()) - std::atan2(a.y(), a.x()));
  }
  return finish_winding(total);
}

OmegaOnDbis omega_min_on_dbis(const QahParams& p, const NoiseStrengths& w, const TextureGrid& grid,
                              const std::vector<DbisCurve>& curves) {
  OmegaOnDbis out;
  out.lattice_min = std::numeric_limits<double>::infinity();
  out.curve_min = std::numeric_limits<double>::infinity();
  const bool projected = grid.axis.size() == grid.s_bar.size();
  auto phi = [&](std::size_t c) {
    return projected ? grid.s_bar[c].dot(grid.axis[c]) : grid.s_bar[c].z();
  };
  for (std::size_t iy = 0; iy + 1 < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix + 1 < grid.nx(); ++ix) {
      const std::size_t corners[4] = {grid.index(ix, iy), grid.index(ix + 1, iy),
                                      grid.index(ix, iy + 1), grid.index(ix + 1, iy + 1)};
      bool all_defined = true, pos = false, neg = false;
      for (std::size_t c : corners) {
        all_defined = all_defined && grid.defined[c];
        (phi(c) >= 0.0 ? pos : neg) = true;
      }
      if (!all_defined || !(pos && neg)) continue;
      for (std::size_t c : corners) {
        const Momentum k{grid.kx[c % grid.nx()], grid.ky[c / grid.nx()]};
        const double om = grid.omega.size() == grid.s_bar.size()
                              ? grid.omega[c]
                              : liouville::oscillation_frequency(k, p, w);
        if (om < out.lattice_min) {
          out.lattice_min = om;
          out.lattice_at = k;
          out.found = true;
        }
      }
    }
  }
  for (const auto& curve : curves) {
    for (const auto& pt : curve.points) {
      const Momentum k{pt.x(), pt.y()};
      const double om = liouville::oscillation_frequency(k, p, w);
      if (om < out.curve_min) {
        out.curve_min = om;
        out.curve_at = k;
      }
    }
  }
  if (!out.found) out.lattice_min = 0.0;
  if (!std::isfinite(out.curve_min)) out.curve_min = 0.0;
  return out;
}

LPolarization liouvillian_polarization(const Eigen::Vector3cd& s_plus) {
  const double norm = s_plus.norm();
  if (!(norm > 1e-12)) throw Error(ErrorKind::ZeroVector, "s_plus vanishes");
  const Eigen::Vector3cd s = s_plus / norm;
  const cplx I(0.0, 1.0);
  Eigen::Matrix3cd lx = Eigen::Matrix3cd::Zero(), ly = Eigen::Matrix3cd::Zero();
  lx(1, 2) = -I;
  lx(2, 1) = I;
  ly(0, 2) = I;
  ly(2, 0) = -I;
  const Eigen::Matrix3cd lz = I * (ly * lx - lx * ly);
  const cplx ex = s.dot(lx * s), ey = s.dot(ly * s), ez = s.dot(lz * s);
  LPolarization out;
  out.lx = ex.real();
  out.ly = ey.real();
  out.lz = ez.real();
  out.imag_residual = std::max({std::abs(ex.imag()), std::abs(ey.imag()), std::abs(ez.imag())});
  return out;
}

WindingResult winding_NE(const QahParams& p, const NoiseStrengths& w, const LoopS& loop) {
  if (!(loop.r > 0.0) || loop.n_samples < 16) {
    throw Error(ErrorKind::InvalidArgument, "loop needs r > 0 and at least 16 samples");
  }
  const double tol = 1e-3 * p.xi0;
  auto at = [&](double th) {
    return Momentum{loop.center.kx + loop.r * std::cos(th), loop.center.ky + loop.r * std::sin(th)};
  };
  const int n = loop.n_samples;
  double first = 0.0, prev = 0.0, total = 0.0;
  std::vector<double> omega(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double th = kTwoPi * j / n;
    const ModeDecomposition md =
        liouville::mode_decomposition(liouville::build_liouvillian(at(th), p, w), {0.0, 0.0, -1.0}, tol);
    if (md.overdamped) throw Error(ErrorKind::SingularOnLoop, "real spectrum on the loop");
    omega[static_cast<std::size_t>(j)] = md.omega;
    LPolarization lp;
    try {
      lp = liouvillian_polarization(md.s_plus);
    } catch (const Error&) {
      throw Error(ErrorKind::SingularOnLoop, "mode amplitude vanishes on the loop");
    }
    if (std::hypot(lp.lx, lp.ly) < 1e-9) {
      throw Error(ErrorKind::SingularOnLoop, "(<Lx>, <Ly>) vanishes on the loop");
    }
    const double a = std::atan2(lp.ly, lp.lx);
    if (j == 0) {
      first = a;
    } else {
      total += wrap_angle(a - prev);
    }
    prev = a;
  }
  total += wrap_angle(first - prev);

  // Real-spectrum regions can be far thinner than the sample spacing.
  // Refine every local minimum of omega between its neighbours.
  auto om = [&](double th) { return liouville::oscillation_frequency(at(th), p, w); };
  for (int j = 0; j < n; ++j) {
    const double here = omega[static_cast<std::size_t>(j)];
    const double left = omega[static_cast<std::size_t>((j + n - 1) % n)];
    const double right = omega[static_cast<std::size_t>((j + 1) % n)];
    if (here > left || here > right) continue;
    double a = kTwoPi * (j - 1) / n, b = kTwoPi * (j + 1) / n;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = om(c), fd = om(d);
    for (int it = 0; it < 60 && std::min(fc, fd) >= tol; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = om(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = om(d);
      }
    }
    if (std::min(fc, fd) < tol) {
      throw Error(ErrorKind::SingularOnLoop, "loop crosses an exceptional region");
    }
  }
  return finish_winding(total);
}

namespace {

double distance(const Momentum& a, const Momentum& b) { return std::hypot(a.kx - b.kx, a.ky - b.ky); }

double distance_to_curves(const Momentum& k, const std::vector<DbisCurve>& curves) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
      const Vector2d a = c.points[i], b = c.points[i + 1], q(k.kx, k.ky);
      const Vector2d ab = b - a;
      const double len2 = ab.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((q - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
      d = std::min(d, (a + t * ab - q).norm());
    }
    if (c.points.size() == 1) d = std::min(d, (c.points[0] - Vector2d(k.kx, k.ky)).norm());
  }
  return d;
}

std::vector<Momentum> charges_in_window(double kmin, double kmax) {
  std::vector<Momentum> out;
  const double cands[] = {-std::numbers::pi, 0.0, std::numbers::pi};
  for (double y : cands) {
    for (double x : cands) {
      if (x >= kmin && x <= kmax && y >= kmin && y <= kmax) out.push_back({x, y});
    }
  }
  return out;
}

// Grows the loop from r0 until it neither encloses a charge nor passes
// within `margin` of an exceptional-point sample and N_E is computable.
std::optional<LoopWinding> adaptive_ne(const QahParams& p, const NoiseStrengths& w,
                                       const Momentum& center, double r0,
                                       const std::vector<Momentum>& charges,
                                       const std::vector<ExceptionalPoint>& eps, double margin,
                                       const char* label) {
  for (int step = 0; step < 16; ++step) {
    const double r = r0 + 0.05 * step;
    bool encloses = false;
    for (const auto& q : charges) encloses = encloses || distance(q, center) < r + margin;
    if (encloses) break;
    bool crosses = false;
    for (const auto& ep : eps) {
      for (const auto& m : ep.members) crosses = crosses || std::abs(distance(m, center) - r) < margin;
    }
    if (crosses) continue;
    try {
      LoopWinding lw;
      lw.center = center;
      lw.radius = r;
      lw.winding = winding_NE(p, w, {center, r, 128});
      lw.around = label;
      return lw;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularOnLoop && e.kind() != ErrorKind::Defective) throw;
    }
  }
  return std::nullopt;
}

}  // namespace

TransitionEvidence classify_texture(const QahParams& p, const NoiseStrengths& w,
                                    const TextureGrid& grid, const ClassifyOptions& opts) {
  TransitionEvidence ev;
  try {
    ev.dbis = extract_dbis(grid, opts.dbis_threshold, true);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoDbis) throw;
    ev.phase = Phase::trivial;
    ev.dbis_status = "none";
    ev.w_status = "no dBIS";
    return ev;
  }
  bool any_interrupted = false, any_open = false;
  for (const auto& c : ev.dbis) {
    any_interrupted = any_interrupted || c.interrupted;
    any_open = any_open || c.hits_boundary;
  }
  ev.dbis_status = any_interrupted ? "interrupted" : (any_open ? "open" : "closed");

  const double kmin = std::min(grid.kx.front(), grid.ky.front());
  const double kmax = std::max(grid.kx.back(), grid.ky.back());
  EpSearchOptions eo;
  eo.grid_n = std::max(32, opts.ep_grid_n);
  eo.kmin = kmin;
  eo.kmax = kmax;
  ev.exceptional_points = liouville::find_exceptional_points(p, w, eo);

  double cell = 0.0;
  for (std::size_t i = 1; i < grid.kx.size(); ++i) cell = std::max(cell, grid.kx[i] - grid.kx[i - 1]);
  for (std::size_t i = 1; i < grid.ky.size(); ++i) cell = std::max(cell, grid.ky[i] - grid.ky[i - 1]);
  const double touch = 1.5 * cell;
  const double margin = 2.0 * (eo.kmax - eo.kmin) / (eo.grid_n - 1);

  std::vector<const ExceptionalPoint*> touching;
  for (const auto& ep : ev.exceptional_points) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& m : ep.members) d = std::min(d, distance_to_curves(m, ev.dbis));
    if (d <= touch) touching.push_back(&ep);
  }
  ev.ep_on_dbis = !touching.empty() || any_interrupted;

  // Exceptional points sitting on a topological charge that the dBIS reaches.
  const std::vector<Momentum> charges = charges_in_window(kmin, kmax);
  bool type_two = false;
  for (const auto& q : charges) {
    bool ep_here = false;
    for (const auto& ep : ev.exceptional_points) {
      for (const auto& m : ep.members) ep_here = ep_here || distance(m, q) <= touch;
    }
    if (!ep_here) continue;
    ev.ep_at_charge = true;
    if (distance_to_curves(q, ev.dbis) > touch) continue;
    std::vector<Momentum> others;
    for (const auto& o : charges) {
      if (distance(o, q) > 1e-9) others.push_back(o);
    }
    if (auto lw = adaptive_ne(p, w, q, 0.3, others, ev.exceptional_points, margin, "charge")) {
      ev.ne.push_back(*lw);
      if (lw->winding.value != 0) type_two = true;
    }
  }

  if (type_two) {
    ev.phase = Phase::type_II;
  } else if (ev.ep_on_dbis) {
    ev.phase = Phase::type_I;
    for (const ExceptionalPoint* ep : touching) {
      bool at_charge = false;
      for (const auto& q : charges) at_charge = at_charge || distance(ep->centroid, q) <= touch;
      if (at_charge) continue;
      double extent = 0.0;
      for (const auto& m : ep->members) extent = std::max(extent, distance(m, ep->centroid));
      if (auto lw = adaptive_ne(p, w, ep->centroid, std::max(0.3, 1.2 * extent), charges,
                                ev.exceptional_points, margin, "exceptional")) {
        ev.ne.push_back(*lw);
      }
    }
  } else {
    ev.phase = Phase::stable;
  }

  // Dynamical winding on the first closed, uninterrupted curve.
  ev.w_status = "no closed dBIS";
  for (const auto& c : ev.dbis) {
    if (!c.closed) continue;
    try {
      ev.w = winding_W(dynamical_field(grid, c));
      ev.w_status = "ok";
    } catch (const Error& e) {
      ev.w_status = e.what();
      continue;
    }
    break;
  }
  return ev;
}

TransitionEvidence classify_transition(const QahParams& p, const NoiseStrengths& w,
                                       const ClassifyOptions& opts) {
  GridAxis axis{opts.kmin, opts.kmax, opts.grid_n};
  const std::vector<double> ks = axis.values();
  const TextureGrid grid = oracle_texture(p, w, ks, ks, opts.schedule, opts.average);
  return classify_texture(p, w, grid, opts);
}

bool sweet_spot_literal(const QahParams& p, const NoiseStrengths& w) {
  if (p.xi_so == 0.0) throw Error(ErrorKind::InvalidArgument, "xi_so must be nonzero");
  const double centre = (w.wy - w.wx) * p.xi0 * p.xi0 / (p.xi_so * p.xi_so);
  const double lower = centre - 2.0 * std::abs(p.xi_so);
  const double upper = centre + 2.0 * std::abs(p.xi_so);
  const double d = w.wz - w.wx;
  return lower < d && d < upper;
}

std::vector<SweetSpotPoint> sweet_spot_scan(const QahParams& p, const NoiseStrengths& direction,
                                            const std::vector<double>& magnitudes,
                                            const ClassifyOptions& opts) {
  std::vector<SweetSpotPoint> out;
  double last = 0.0;
  for (double m : magnitudes) {
    if (!(m > 0.0) || m < last) {
      throw Error(ErrorKind::InvalidArgument, "magnitudes must be positive and sorted");
    }
    last = m;
    const NoiseStrengths w{m * direction.wx, m * direction.wy, m * direction.wz};
    const TransitionEvidence ev = classify_transition(p, w, opts);
    SweetSpotPoint pt;
    pt.magnitude = m;
    pt.phase = ev.phase;
    pt.ep_on_dbis = ev.ep_on_dbis;
    pt.dbis_stable = ev.dbis_status == "closed" && !ev.ep_on_dbis;
    out.push_back(pt);
  }
  return out;
}

}  // namespace topology
}  // namespace qahsim
