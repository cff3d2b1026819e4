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
#include "qahsim/mode_fitting.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/NonLinearOptimization>

#include "qahsim/error.hpp"

namespace qahsim {
namespace fitting {
namespace {

using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;
using cplx = std::complex<double>;

enum class Model { Oscillating, RealExponentials };

// Parameter layout, both models: [s0(3), a(3), b(3), l0, l1, x].
// Oscillating:       s0 e^{-l0 t} + 2 e^{-l1 t} (a cos x t + b sin x t)
// RealExponentials:  s0 e^{-l0 t} + a e^{-l1 t} + b e^{-x t}
struct ModeFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = VectorXd;
  using ValueType = VectorXd;
  using JacobianType = MatrixXd;

  const SpinTrajectory& data;
  Model model;

  int inputs() const { return 12; }
  int values() const { return static_cast<int>(3 * data.times.size()); }

  int operator()(const VectorXd& x, VectorXd& f) const {
    for (std::size_t n = 0; n < data.times.size(); ++n) {
      const Vector3d y = evaluate(x, data.times[n]);
      for (int c = 0; c < 3; ++c) {
        f(static_cast<Eigen::Index>(3 * n) + c) = y(c) - data.polarization[n](c);
      }
    }
    return 0;
  }

  int df(const VectorXd& x, MatrixXd& J) const {
    J.setZero();
    const double l0 = x(9), l1 = x(10), w = x(11);
    for (std::size_t n = 0; n < data.times.size(); ++n) {
      const double t = data.times[n];
      const double e0 = std::exp(-l0 * t), e1 = std::exp(-l1 * t);
      for (int c = 0; c < 3; ++c) {
        const auto r = static_cast<Eigen::Index>(3 * n) + c;
        const double s0 = x(c), a = x(3 + c), b = x(6 + c);
        J(r, c) = e0;
        J(r, 9) = -t * s0 * e0;
        if (model == Model::Oscillating) {
          const double cw = std::cos(w * t), sw = std::sin(w * t);
          J(r, 3 + c) = 2.0 * e1 * cw;
          J(r, 6 + c) = 2.0 * e1 * sw;
          J(r, 10) = -t * 2.0 * e1 * (a * cw + b * sw);
          J(r, 11) = 2.0 * e1 * t * (-a * sw + b * cw);
        } else {
          const double e2 = std::exp(-w * t);
          J(r, 3 + c) = e1;
          J(r, 6 + c) = e2;
          J(r, 10) = -t * a * e1;
          J(r, 11) = -t * b * e2;
        }
      }
    }
    return 0;
  }

  Vector3d evaluate(const VectorXd& x, double t) const {
    const Vector3d s0 = x.segment<3>(0), a = x.segment<3>(3), b = x.segment<3>(6);
    const double e0 = std::exp(-x(9) * t), e1 = std::exp(-x(10) * t);
    if (model == Model::Oscillating) {
      return s0 * e0 + 2.0 * e1 * (a * std::cos(x(11) * t) + b * std::sin(x(11) * t));
    }
    return s0 * e0 + a * e1 + b * std::exp(-x(11) * t);
  }
};

VectorXd pack(const ModeDecomposition& md, Model model) {
  VectorXd x(12);
  x.segment<3>(0) = md.s0;
  if (model == Model::Oscillating) {
    x.segment<3>(3) = md.s_plus.real();
    x.segment<3>(6) = md.s_plus.imag();
    x(9) = md.lambda0;
    x(10) = md.lambda1;
    x(11) = md.omega;
  } else if (md.overdamped) {
    x.segment<3>(3) = md.s_plus.real();
    x.segment<3>(6) = md.s_minus.real();
    x(9) = md.lambda0;
    x(10) = md.lambda1;
    x(11) = md.lambda2;
  } else {
    // Start the real-exponential fit from the non-oscillating limit of an
    // oscillating decomposition.
    x.segment<3>(3) = 2.0 * md.s_plus.real();
    x.segment<3>(6).setZero();
    x(9) = md.lambda0;
    x(10) = md.lambda1;
    x(11) = md.lambda1 + 0.1 * std::max(std::abs(md.lambda1), 0.01);
  }
  return x;
}

ModeDecomposition unpack(const VectorXd& x, Model model) {
  ModeDecomposition md;
  md.s0 = x.segment<3>(0);
  md.lambda0 = x(9);
  md.lambda1 = x(10);
  if (model == Model::Oscillating) {
    Eigen::Vector3cd sp;
    for (int c = 0; c < 3; ++c) sp(c) = cplx(x(3 + c), x(6 + c));
    // omega >= 0 by convention; a negative fitted frequency is the same
    // curve with s_plus conjugated.
    if (x(11) < 0.0) sp = sp.conjugate();
    md.s_plus = sp;
    md.s_minus = sp.conjugate();
    md.omega = std::abs(x(11));
    md.lambda2 = md.lambda1;
  } else {
    md.s_plus = x.segment<3>(3).cast<cplx>();
    md.s_minus = x.segment<3>(6).cast<cplx>();
    md.lambda2 = x(11);
    md.omega = 0.0;
    md.overdamped = true;
  }
  return md;
}

struct LmOutcome {
  VectorXd x;
  double rms = 0.0;
  int iterations = 0;
  bool ok = false;
};

LmOutcome run_lm(const SpinTrajectory& data, Model model, VectorXd x, const FitConfig& cfg) {
  ModeFunctor f{data, model};
  Eigen::LevenbergMarquardt<ModeFunctor> lm(f);
  lm.parameters.ftol = cfg.tolerance;
  lm.parameters.xtol = cfg.tolerance;
  lm.parameters.maxfev = cfg.max_evaluations;
  const auto status = lm.minimize(x);
  LmOutcome out;
  out.x = x;
  VectorXd r(f.values());
  f(x, r);
  out.rms = std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
  out.iterations = static_cast<int>(lm.iter);
  using S = Eigen::LevenbergMarquardtSpace::Status;
  out.ok = x.allFinite() && std::isfinite(out.rms) &&
           (status == S::RelativeReductionTooSmall || status == S::RelativeErrorTooSmall ||
            status == S::RelativeErrorAndReductionTooSmall || status == S::CosinusTooSmall ||
            status == S::FtolTooSmall || status == S::XtolTooSmall || status == S::GtolTooSmall);
  return out;
}

// Frequency and decay scan with the amplitudes solved by linear least squares.
ModeDecomposition scan_initial_guess(const SpinTrajectory& data) {
  const auto& t = data.times;
  const std::size_t n = t.size();
  const double span = t.back() - t.front();
  double dt_min = span;
  for (std::size_t i = 1; i < n; ++i) dt_min = std::min(dt_min, t[i] - t[i - 1]);
  const double w_max = std::numbers::pi / dt_min;
  const double w_min = 0.25 * std::numbers::pi / span;
  constexpr int n_omega = 240;
  const double rates[] = {0.0, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0};

  MatrixXd rhs(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) rhs.row(static_cast<Eigen::Index>(i)) = data.polarization[i];

  double best = std::numeric_limits<double>::infinity();
  ModeDecomposition guess;
  MatrixXd basis(static_cast<Eigen::Index>(n), 3);
  for (int iw = 0; iw < n_omega; ++iw) {
    const double w = w_min + (w_max - w_min) * iw / (n_omega - 1);
    for (double l0 : rates) {
      for (double l1 : rates) {
        for (std::size_t i = 0; i < n; ++i) {
          const double e1 = 2.0 * std::exp(-l1 * t[i]);
          basis(static_cast<Eigen::Index>(i), 0) = std::exp(-l0 * t[i]);
          basis(static_cast<Eigen::Index>(i), 1) = e1 * std::cos(w * t[i]);
          basis(static_cast<Eigen::Index>(i), 2) = e1 * std::sin(w * t[i]);
        }
        const Eigen::ColPivHouseholderQR<MatrixXd> qr(basis);
        const MatrixXd coef = qr.solve(rhs);
        const double res = (basis * coef - rhs).squaredNorm();
        if (res < best) {
          best = res;
          guess.s0 = coef.row(0).transpose();
          for (int c = 0; c < 3; ++c) guess.s_plus(c) = cplx(coef(1, c), coef(2, c));
          guess.s_minus = guess.s_plus.conjugate();
          guess.lambda0 = l0;
          guess.lambda1 = l1;
          guess.lambda2 = l1;
          guess.omega = w;
        }
      }
    }
  }
  return guess;
}

}  // namespace

FitResult fit_modes(const SpinTrajectory& traj, const std::optional<ModeDecomposition>& init_guess,
                    const FitConfig& cfg) {
  const std::size_t n = traj.times.size();
  if (n < 12 || traj.polarization.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "fit needs at least 12 samples");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(traj.times[i] > traj.times[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "sample times must be strictly increasing");
    }
  }
  double peak = 0.0;
  Vector3d mean = Vector3d::Zero();
  for (const auto& s : traj.polarization) {
    peak = std::max(peak, s.norm());
    mean += s;
  }
  mean /= static_cast<double>(n);
  if (peak < cfg.noise_floor) {
    throw Error(ErrorKind::DegenerateData, "trajectory is below the noise floor");
  }
  double spread = 0.0;
  for (const auto& s : traj.polarization) spread = std::max(spread, (s - mean).norm());
  if (spread <= 1e-12 * std::max(1.0, peak)) {
    // Static fixed point.
    FitResult r;
    r.decomposition.s0 = mean;
    r.converged = true;
    return r;
  }

  const double span = traj.times.back() - traj.times.front();
  const ModeDecomposition start = init_guess ? *init_guess : scan_initial_guess(traj);

  LmOutcome osc;
  if (!start.overdamped) osc = run_lm(traj, Model::Oscillating, pack(start, Model::Oscillating), cfg);
  const bool non_oscillating =
      start.overdamped || (osc.x.size() == 12 && std::abs(osc.x(11)) * span < std::numbers::pi);

  FitResult r;
  if (non_oscillating) {
    const ModeDecomposition seed = start.overdamped ? start : unpack(osc.x, Model::Oscillating);
    const LmOutcome real = run_lm(traj, Model::RealExponentials, pack(seed, Model::RealExponentials), cfg);
    const bool use_real = real.rms < cfg.residual_threshold || start.overdamped ||
                          !(osc.rms < cfg.residual_threshold);
    const LmOutcome& chosen = (use_real || osc.x.size() != 12) ? real : osc;
    const Model model = (&chosen == &real) ? Model::RealExponentials : Model::Oscillating;
    r.decomposition = unpack(chosen.x, model);
    r.residual_rms = chosen.rms;
    r.n_iterations = osc.iterations + real.iterations;
    r.converged = chosen.ok && chosen.rms < cfg.residual_threshold;
    r.overdamped = true;
  } else {
    r.decomposition = unpack(osc.x, Model::Oscillating);
    r.residual_rms = osc.rms;
    r.n_iterations = osc.iterations;
    r.converged = osc.ok && osc.rms < cfg.residual_threshold;
  }
  if (!(r.residual_rms < cfg.residual_threshold)) {
    throw Error(ErrorKind::FitDiverged, "residual rms " + std::to_string(r.residual_rms) +
                                            " above threshold");
  }
  return r;
}

RescaledTrajectory rescale(const FitResult& fit, const std::vector<double>& times) {
  if (!fit.converged) throw Error(ErrorKind::InvalidArgument, "rescale requires a converged fit");
  RescaledTrajectory rt;
  rt.times = times;
  rt.s_tilde.reserve(times.size());
  for (double t : times) rt.s_tilde.push_back(fit.decomposition.evaluate_rescaled(t));
  return rt;
}

Eigen::Vector3d time_average(const RescaledTrajectory& rt) {
  if (rt.s_tilde.empty()) throw Error(ErrorKind::InvalidArgument, "empty trajectory");
  Vector3d sum = Vector3d::Zero();
  for (const auto& s : rt.s_tilde) sum += s;
  return sum / static_cast<double>(rt.s_tilde.size());
}

Eigen::Vector3d rescaled_time_average(const ModeDecomposition& md,
                                      const std::vector<double>& times) {
  if (times.empty()) throw Error(ErrorKind::InvalidArgument, "empty time grid");
  Vector3d sum = Vector3d::Zero();
  for (double t : times) sum += md.evaluate_rescaled(t);
  return sum / static_cast<double>(times.size());
}

Eigen::Vector3d analytic_time_average(const ModeDecomposition& md) {
  if (md.overdamped) return md.s0 + md.s_plus.real() + md.s_minus.real();
  return md.s0;
}

}  // namespace fitting
}  // namespace qahsim
