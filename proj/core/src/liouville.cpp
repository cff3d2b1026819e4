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
#include "qahsim/liouville.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "qahsim/error.hpp"

namespace qahsim {

using cplx = std::complex<double>;

BlochVector Liouvillian::field() const {
  const auto& m = matrix;
  return {(m(2, 1) - m(1, 2)) / 4.0, (m(0, 2) - m(2, 0)) / 4.0, (m(1, 0) - m(0, 1)) / 4.0};
}

double EigenSystem::biorthonormality_residual() const {
  return (left * right - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff();
}

Eigen::Vector3d ModeDecomposition::evaluate(double t) const {
  if (overdamped) {
    return s0 * std::exp(-lambda0 * t) + s_plus.real() * std::exp(-lambda1 * t) +
           s_minus.real() * std::exp(-lambda2 * t);
  }
  const cplx phase = std::exp(cplx(-lambda1 * t, -omega * t));
  return s0 * std::exp(-lambda0 * t) + 2.0 * (s_plus * phase).real();
}

Eigen::Vector3d ModeDecomposition::evaluate_rescaled(double t) const {
  if (overdamped) return s0 + s_plus.real() + s_minus.real();
  const cplx phase = std::exp(cplx(0.0, -omega * t));
  return s0 + 2.0 * (s_plus * phase).real();
}

namespace liouville {

Liouvillian build_liouvillian(const BlochVector& h, const NoiseStrengths& w) {
  Liouvillian L;
  L.matrix << -w.wy - w.wz, -h.z(), h.y(),
              h.z(), -w.wx - w.wz, -h.x(),
              -h.y(), h.x(), -w.wx - w.wy;
  L.matrix *= 2.0;
  return L;
}

Liouvillian build_liouvillian(const Momentum& k, const QahParams& p, const NoiseStrengths& w) {
  return build_liouvillian(model::bloch_vector(k, p), w);
}

namespace {

double column_condition(const Eigen::Matrix3cd& r) {
  Eigen::Matrix3cd n = r;
  for (int c = 0; c < 3; ++c) n.col(c) /= n.col(c).norm();
  Eigen::JacobiSVD<Eigen::Matrix3cd> svd(n);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(2);
}

}  // namespace

EigenSystem eigensystem_unchecked(const Liouvillian& L) {
  Eigen::EigenSolver<Eigen::Matrix3d> solver(L.matrix, true);
  const Eigen::Vector3cd mu = solver.eigenvalues();
  const Eigen::Matrix3cd vec = solver.eigenvectors();

  EigenSystem es;
  std::array<int, 3> order{0, 1, 2};
  int n_complex = 0;
  for (int i = 0; i < 3; ++i) n_complex += (mu(i).imag() != 0.0) ? 1 : 0;

  if (n_complex == 2) {
    int i0 = 0;
    for (int i = 0; i < 3; ++i) {
      if (mu(i).imag() == 0.0) i0 = i;
    }
    int ip = -1;
    for (int i = 0; i < 3; ++i) {
      if (i != i0 && mu(i).imag() < 0.0) ip = i;
    }
    const int im = 3 - i0 - ip;
    order = {i0, ip, im};
    es.overdamped = false;
  } else {
    // Three real modes: lambda0 is the mode most aligned with h, ties broken
    // by the slower decay.
    const BlochVector h = L.field();
    const double hn = h.norm();
    int i0 = 0;
    double best = -1.0;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector3d v = vec.col(i).real().normalized();
      const double overlap = hn > 0.0 ? std::abs(v.dot(h)) / hn : 0.0;
      const bool better = overlap > best + 1e-12 ||
                          (std::abs(overlap - best) <= 1e-12 && mu(i).real() > mu(i0).real());
      if (better) {
        best = overlap;
        i0 = i;
      }
    }
    std::array<int, 2> rest{};
    int r = 0;
    for (int i = 0; i < 3; ++i) {
      if (i != i0) rest[static_cast<std::size_t>(r++)] = i;
    }
    if (mu(rest[0]).real() < mu(rest[1]).real()) std::swap(rest[0], rest[1]);
    order = {i0, rest[0], rest[1]};
    es.overdamped = true;
  }

  for (int a = 0; a < 3; ++a) {
    es.eigenvalues(a) = mu(order[static_cast<std::size_t>(a)]);
    es.right.col(a) = vec.col(order[static_cast<std::size_t>(a)]);
  }
  if (es.overdamped) {
    for (int a = 0; a < 3; ++a) {
      es.eigenvalues(a) = cplx(es.eigenvalues(a).real(), 0.0);
      es.right.col(a) = es.right.col(a).real().normalized().cast<cplx>();
    }
  } else {
    es.right.col(0) = es.right.col(0).real().normalized().cast<cplx>();
    es.right.col(1) /= es.right.col(1).norm();
    es.right.col(2) = es.right.col(1).conjugate();
    es.eigenvalues(2) = std::conj(es.eigenvalues(1));
  }
  es.left = es.right.inverse();
  es.lambda0 = -es.eigenvalues(0).real();
  es.lambda1 = -es.eigenvalues(1).real();
  es.lambda2 = -es.eigenvalues(2).real();
  es.omega = es.overdamped ? 0.0 : std::abs(es.eigenvalues(1).imag());
  es.condition_number = column_condition(es.right);
  if (es.overdamped) {
    const double c = std::abs(es.right.col(1).real().dot(es.right.col(2).real()));
    es.coalescence_angle = std::acos(std::min(1.0, c));
  } else {
    const Eigen::Vector3cd u = es.right.col(1);
    const double c = std::abs((u.transpose() * u)(0));
    es.coalescence_angle = std::acos(std::min(1.0, c));
  }
  return es;
}

EigenSystem eigensystem(const Liouvillian& L, double tol) {
  EigenSystem es = eigensystem_unchecked(L);
  const bool near_singular = !std::isfinite(es.condition_number) || es.condition_number > 1e7;
  if (near_singular && es.omega < tol) {
    throw Error(ErrorKind::Defective, "eigenvectors coalesce (exceptional point)");
  }
  return es;
}

ModeDecomposition mode_decomposition(const Liouvillian& L, const Eigen::Vector3d& s_init,
                                     double tol) {
  const EigenSystem es = eigensystem(L, tol);
  const Eigen::Vector3cd c = es.left * s_init.cast<cplx>();
  ModeDecomposition md;
  md.s0 = (c(0) * es.right.col(0)).real();
  md.s_plus = c(1) * es.right.col(1);
  md.lambda0 = es.lambda0;
  md.lambda1 = es.lambda1;
  md.lambda2 = es.lambda2;
  md.omega = es.omega;
  md.overdamped = es.overdamped;
  if (es.overdamped) {
    md.s_plus = md.s_plus.real().cast<cplx>();
    md.s_minus = (c(2) * es.right.col(2)).real().cast<cplx>();
  } else {
    md.s_minus = md.s_plus.conjugate();
  }
  return md;
}

SpinTrajectory exact_evolution(const Liouvillian& L, const Eigen::Vector3d& s_init,
                               const std::vector<double>& times) {
  SpinTrajectory out;
  out.times = times;
  out.polarization.reserve(times.size());
  for (double t : times) {
    if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "evolution times must be >= 0");
    if (t == 0.0) {
      out.polarization.push_back(s_init);
      continue;
    }
    const Eigen::Matrix3d prop = (L.matrix * t).exp();
    out.polarization.push_back(prop * s_init);
  }
  return out;
}

SpinTrajectory exact_evolution(const Momentum& k, const QahParams& p, const NoiseStrengths& w,
                               const Eigen::Vector3d& s_init, const std::vector<double>& times) {
  SpinTrajectory out = exact_evolution(build_liouvillian(k, p, w), s_init, times);
  out.momentum = k;
  return out;
}

double oscillation_frequency(const Momentum& k, const QahParams& p, const NoiseStrengths& w) {
  return eigensystem_unchecked(build_liouvillian(k, p, w)).omega;
}

double discriminant(const Liouvillian& L) {
  const Eigen::Matrix3d& m = L.matrix;
  const double b = -m.trace();
  const double c = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                   m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const double d = -m.determinant();
  return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c -
         27.0 * d * d;
}

namespace {

struct Candidate {
  Momentum k;
  double omega;
  double angle;
};

// Downhill simplex on omega(k) in two dimensions.
Momentum minimise_omega(const QahParams& p, const NoiseStrengths& w, Momentum start,
                        double step) {
  auto f = [&](const Eigen::Vector2d& x) {
    return oscillation_frequency({x(0), x(1)}, p, w);
  };
  std::array<Eigen::Vector2d, 3> s{Eigen::Vector2d(start.kx, start.ky),
                                   Eigen::Vector2d(start.kx + step, start.ky),
                                   Eigen::Vector2d(start.kx, start.ky + step)};
  std::array<double, 3> fs{f(s[0]), f(s[1]), f(s[2])};
  for (int it = 0; it < 400; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];
    if ((s[worst] - s[best]).norm() < 1e-13) break;
    const Eigen::Vector2d centroid = 0.5 * (s[best] + s[mid]);
    const Eigen::Vector2d xr = centroid + (centroid - s[worst]);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Eigen::Vector2d xe = centroid + 2.0 * (centroid - s[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        s[worst] = xe;
        fs[worst] = fe;
      } else {
        s[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[mid]) {
      s[worst] = xr;
      fs[worst] = fr;
    } else {
      const Eigen::Vector2d xc = centroid + 0.5 * (s[worst] - centroid);
      const double fc = f(xc);
      if (fc < fs[worst]) {
        s[worst] = xc;
        fs[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          s[i] = s[best] + 0.5 * (s[i] - s[best]);
          fs[i] = f(s[i]);
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  return {s[best](0), s[best](1)};
}

}  // namespace

std::vector<ExceptionalPoint> find_exceptional_points(const QahParams& p, const NoiseStrengths& w,
                                                      const EpSearchOptions& opts) {
  p.validate();
  w.validate();
  if (opts.grid_n < 32) throw Error(ErrorKind::InvalidArgument, "grid_n must be >= 32");
  const double omega_tol = opts.omega_tol > 0.0 ? opts.omega_tol : 1e-3 * p.xi0;
  const auto n = static_cast<std::size_t>(opts.grid_n);
  const double h = (opts.kmax - opts.kmin) / (opts.grid_n - 1);
  auto coord = [&](std::size_t i) { return opts.kmin + h * static_cast<double>(i); };

  std::vector<double> disc(n * n), omega(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Liouvillian L = build_liouvillian({coord(i), coord(j)}, p, w);
      disc[j * n + i] = discriminant(L);
      omega[j * n + i] = eigensystem_unchecked(L).omega;
    }
  }

  std::vector<Candidate> accepted;
  auto consider = [&](Momentum k) {
    const EigenSystem es = eigensystem_unchecked(build_liouvillian(k, p, w));
    if (es.omega < omega_tol && es.coalescence_angle < opts.angle_tol) {
      accepted.push_back({k, es.omega, es.coalescence_angle});
    }
  };

  // Boundaries between oscillating and overdamped regions.
  auto bisect = [&](Momentum a, Momentum b) {
    auto d = [&](const Momentum& k) { return discriminant(build_liouvillian(k, p, w)); };
    bool a_real = d(a) > 0.0;
    for (int it = 0; it < 80; ++it) {
      const Momentum m{0.5 * (a.kx + b.kx), 0.5 * (a.ky + b.ky)};
      if ((d(m) > 0.0) == a_real) {
        a = m;
      } else {
        b = m;
      }
    }
    consider(a_real ? b : a);
  };
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool here = disc[j * n + i] > 0.0;
      if (i + 1 < n && (disc[j * n + i + 1] > 0.0) != here) {
        bisect({coord(i), coord(j)}, {coord(i + 1), coord(j)});
      }
      if (j + 1 < n && (disc[(j + 1) * n + i] > 0.0) != here) {
        bisect({coord(i), coord(j)}, {coord(i), coord(j + 1)});
      }
    }
  }

  // Isolated exceptional points inside oscillating regions.
  std::vector<std::pair<double, std::size_t>> seeds;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = j * n + i;
      if (disc[c] > 0.0) continue;
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<long>(n) || jj >= static_cast<long>(n)) continue;
          if (omega[static_cast<std::size_t>(jj) * n + static_cast<std::size_t>(ii)] < omega[c]) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) seeds.push_back({omega[c], c});
    }
  }
  std::sort(seeds.begin(), seeds.end());
  if (seeds.size() > 256) seeds.resize(256);
  for (const auto& [om, c] : seeds) {
    const Momentum start{coord(c % n), coord(c / n)};
    Momentum k = minimise_omega(p, w, start, 0.5 * h);
    if (k.kx < opts.kmin - h || k.kx > opts.kmax + h || k.ky < opts.kmin - h ||
        k.ky > opts.kmax + h) {
      continue;
    }
    consider(k);
  }

  // Single-linkage clustering.
  std::vector<std::size_t> parent(accepted.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const double link = 3.0 * h;
  for (std::size_t a = 0; a < accepted.size(); ++a) {
    for (std::size_t b = a + 1; b < accepted.size(); ++b) {
      if (std::hypot(accepted[a].k.kx - accepted[b].k.kx, accepted[a].k.ky - accepted[b].k.ky) <=
          link) {
        parent[find(a)] = find(b);
      }
    }
  }
  std::vector<ExceptionalPoint> out;
  std::vector<long> slot(accepted.size(), -1);
  for (std::size_t a = 0; a < accepted.size(); ++a) {
    const std::size_t r = find(a);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(out.size());
      ExceptionalPoint ep;
      ep.min_omega = accepted[a].omega;
      out.push_back(ep);
    }
    ExceptionalPoint& ep = out[static_cast<std::size_t>(slot[r])];
    ep.members.push_back(accepted[a].k);
    ep.min_omega = std::min(ep.min_omega, accepted[a].omega);
    ep.max_angle = std::max(ep.max_angle, accepted[a].angle);
  }
  for (auto& ep : out) {
    double sx = 0.0, sy = 0.0;
    for (const auto& m : ep.members) {
      sx += m.kx;
      sy += m.ky;
    }
    ep.centroid = {sx / ep.members.size(), sy / ep.members.size()};
  }
  return out;
}

}  // namespace liouville
}  // namespace qahsim
