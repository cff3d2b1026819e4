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
#include "qahsim/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/SVD>

#include "qahsim/error.hpp"

namespace qahsim {

void RunConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(ErrorKind::ConfigInvalid, field + ": " + why);
  };
  if (!(model.xi0 > 0.0) || !std::isfinite(model.xi0)) fail("model.xi0", "must be > 0");
  if (!std::isfinite(model.xi_so)) fail("model.xi_so", "must be finite");
  if (!std::isfinite(model.mz)) fail("quench_mz", "must be finite");
  for (auto [name, v] : {std::pair{"noise.wx", noise.wx}, {"noise.wy", noise.wy}, {"noise.wz", noise.wz}}) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(name, "must be finite and >= 0");
  }
  for (auto [name, a] : {std::pair{"grid.kx", kx}, {"grid.ky", ky}}) {
    if (a.n < 2) fail(std::string(name) + ".n", "must be >= 2");
    if (!(a.max > a.min)) fail(name, "max must exceed min");
  }
  if (!(schedule.t_total > 0.0)) fail("schedule.t_total", "must be > 0");
  if (schedule.n_steps < 1) fail("schedule.n_steps", "must be >= 1");
  if (schedule.sample_stride < 1 || schedule.n_steps % schedule.sample_stride != 0) {
    fail("schedule.sample_stride", "must divide n_steps");
  }
  if (mode != RunMode::oracle && n_configs < 1) fail("n_configs", "must be >= 1 in sse mode");
  if (workers < 1) fail("workers", "must be >= 1");
  if (!(dbis_threshold > 0.0)) fail("dbis_threshold", "must be > 0");
  if (ep_grid_n < 32) fail("ep_grid_n", "must be >= 32");
  for (int m : convergence.m_list) {
    if (m < 10) fail("convergence.m_list", "entries must be >= 10");
  }
  for (int n : convergence.config_counts) {
    if (n < 1) fail("convergence.config_counts", "entries must be >= 1");
  }
  if (convergence.replicas < 1) fail("convergence.replicas", "must be >= 1");
  double last = 0.0;
  for (double m : sweep.magnitudes) {
    if (!(m > 0.0) || m < last) fail("sweep.magnitudes", "must be positive and sorted");
    last = m;
  }
}

TextureGrid RunSummary::texture() const {
  TextureGrid g;
  g.kx = config.kx.values();
  g.ky = config.ky.values();
  for (const auto& c : cells) {
    g.s_bar.push_back(c.s_bar);
    g.defined.push_back(c.defined ? 1 : 0);
    g.omega.push_back(c.omega);
  }
  g.axis = topology::field_axes(config.model, g.kx, g.ky);
  return g;
}

namespace runner {
namespace {

constexpr double kAliasThreshold = 0.3;

template <typename F>
void parallel_for(std::size_t n, int workers, F&& body) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
  };
  const auto nw = static_cast<std::size_t>(std::max(1, workers));
  if (nw == 1 || n <= 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < std::min(nw, n); ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
}

// Smallest relative singular value of the mode design matrix on the sample
// grid. Near a multiple of the Nyquist frequency the
// sine column vanishes and the oscillation amplitude is not identifiable.
double design_conditioning(const ModeDecomposition& md, const std::vector<double>& t) {
  Eigen::MatrixXd d(static_cast<Eigen::Index>(t.size()), 3);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double e1 = std::exp(-md.lambda1 * t[i]);
    d(r, 0) = std::exp(-md.lambda0 * t[i]);
    d(r, 1) = e1 * std::cos(md.omega * t[i]);
    d(r, 2) = e1 * std::sin(md.omega * t[i]);
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(d).singularValues();
  return sv(0) > 0.0 ? sv(2) / sv(0) : 0.0;
}

CellResult oracle_cell(const Momentum& k, const RunConfig& cfg, const std::vector<double>& times) {
  CellResult r;
  r.k = k;
  const Liouvillian L = liouville::build_liouvillian(k, cfg.model, cfg.noise);
  try {
    r.decomposition = liouville::mode_decomposition(L, {0.0, 0.0, -1.0}, 1e-3 * cfg.model.xi0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Defective) throw;
    r.status = "exceptional";
    return r;
  }
  const ModeDecomposition& md = r.decomposition;
  r.omega = md.omega;
  r.s_bar = cfg.average == TimeAverage::analytic ? fitting::analytic_time_average(md)
                                                 : fitting::rescaled_time_average(md, times);
  if (md.overdamped) {
    r.status = "overdamped";
  } else if (md.omega * cfg.schedule.t_total < std::numbers::pi) {
    r.status = "non-oscillating";
  } else {
    r.defined = true;
  }
  return r;
}

CellResult sse_cell(const Momentum& k, std::size_t index, const RunConfig& cfg,
                    const std::vector<double>& times) {
  CellResult r;
  r.k = k;
  const SpinTrajectory avg = sse::ensemble_average(k, cfg.model, cfg.noise, cfg.schedule, cfg.seed,
                                                   cfg.n_configs, 1, index);
  std::optional<ModeDecomposition> init;
  try {
    init = liouville::mode_decomposition(liouville::build_liouvillian(k, cfg.model, cfg.noise),
                                         {0.0, 0.0, -1.0}, 1e-3 * cfg.model.xi0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Defective) throw;
  }
  try {
    const FitResult fit = fitting::fit_modes(avg, init);
    r.decomposition = fit.decomposition;
    r.residual_rms = fit.residual_rms;
    r.omega = fit.decomposition.omega;
    r.s_bar = cfg.average == TimeAverage::analytic
                  ? fitting::analytic_time_average(fit.decomposition)
                  : fitting::rescaled_time_average(fit.decomposition, times);
    if (fit.overdamped) {
      r.status = "non-oscillating";
    } else if (design_conditioning(fit.decomposition, avg.times) < kAliasThreshold) {
      r.status = "aliased";
    } else if (!fit.converged) {
      r.status = "not converged";
      r.fit_failed = true;
    } else {
      r.defined = true;
    }
  } catch (const Error& e) {
    r.fit_failed = true;
    r.status = e.what();
  }
  return r;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

RunSummary run_texture(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunSummary s;
  s.software_version = version();
  s.config = cfg;
  const std::vector<double> kx = cfg.kx.values(), ky = cfg.ky.values();
  const std::size_t n = kx.size() * ky.size();
  const std::vector<double> times = cfg.schedule.step_times();
  auto momentum = [&](std::size_t i) { return Momentum{kx[i % kx.size()], ky[i / kx.size()]}; };

  std::vector<CellResult> oracle(n), stochastic;
  if (cfg.mode != RunMode::sse) {
    for (std::size_t i = 0; i < n; ++i) oracle[i] = oracle_cell(momentum(i), cfg, times);
  }
  if (cfg.mode != RunMode::oracle) {
    stochastic.resize(n);
    parallel_for(n, cfg.workers,
                 [&](std::size_t i) { stochastic[i] = sse_cell(momentum(i), i, cfg, times); });
  }
  s.cells = cfg.mode == RunMode::oracle ? oracle : stochastic;
  if (cfg.mode == RunMode::both) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!oracle[i].defined || !stochastic[i].defined) continue;
      sum += (oracle[i].s_bar - stochastic[i].s_bar).squaredNorm();
      count += 3;
    }
    s.cross_mode_rms = count ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
  }
  for (const auto& c : s.cells) {
    s.n_failed += c.fit_failed ? 1 : 0;
    s.n_masked += c.defined ? 0 : 1;
  }

  const TextureGrid grid = s.texture();
  ClassifyOptions opts;
  opts.ep_grid_n = cfg.ep_grid_n;
  opts.dbis_threshold = cfg.dbis_threshold;
  opts.schedule = cfg.schedule;
  opts.average = cfg.average;
  s.evidence = topology::classify_texture(cfg.model, cfg.noise, grid, opts);
  s.omega_on_dbis = topology::omega_min_on_dbis(cfg.model, cfg.noise, grid, s.evidence.dbis);
  s.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!cfg.outputs.empty()) write_texture_outputs(s, cfg.outputs);
  return s;
}

std::vector<RunSummary> run_transition_suite(const std::vector<RunConfig>& cfgs) {
  std::vector<RunSummary> out;
  out.reserve(cfgs.size());
  for (const auto& c : cfgs) out.push_back(run_texture(c));
  return out;
}

ConvergenceReport run_convergence(const RunConfig& cfg) {
  cfg.validate();
  const auto& cv = cfg.convergence;
  ConvergenceReport rep;
  rep.sweep = sse::discretization_sweep(cv.sweep_momentum, cfg.model, cfg.noise, cfg.schedule,
                                        cv.m_list, cfg.seed, cv.sweep_configs, cfg.workers);
  const NoiseStrengths w = cv.rms_noise.value_or(cfg.noise);
  const std::vector<double> t = cfg.schedule.sample_times();
  const SpinTrajectory ref =
      liouville::exact_evolution(cv.rms_momentum, cfg.model, w, {0.0, 0.0, -1.0}, t);
  std::vector<double> lx, ly;
  for (int count : cv.config_counts) {
    ConvergenceRow row;
    row.n_configs = count;
    double mse_sum = 0.0;
    for (int r = 0; r < cv.replicas; ++r) {
      // Disjoint streams per (count, replica) keep every table entry independent.
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(r + 1) << 32) | static_cast<std::uint64_t>(count);
      const SpinTrajectory avg = sse::ensemble_average(cv.rms_momentum, cfg.model, w, cfg.schedule,
                                                       cfg.seed, count, cfg.workers, stream);
      double mse = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        mse += (avg.polarization[i] - ref.polarization[i]).squaredNorm();
      }
      mse /= 3.0 * static_cast<double>(t.size());
      row.replica_rms.push_back(std::sqrt(mse));
      mse_sum += mse;
    }
    row.rms = std::sqrt(mse_sum / cv.replicas);
    lx.push_back(std::log(static_cast<double>(count)));
    ly.push_back(std::log(row.rms));
    rep.rms.push_back(row);
  }
  rep.slope = ols_slope(lx, ly);
  return rep;
}

SweetSpotReport run_sweetspot(const RunConfig& cfg) {
  cfg.validate();
  SweetSpotReport rep;
  rep.literal = topology::sweet_spot_literal(cfg.model, cfg.noise);
  ClassifyOptions opts;
  opts.kmin = cfg.kx.min;
  opts.kmax = cfg.kx.max;
  opts.grid_n = cfg.kx.n;
  opts.ep_grid_n = cfg.ep_grid_n;
  opts.dbis_threshold = cfg.dbis_threshold;
  opts.schedule = cfg.schedule;
  opts.average = cfg.average;
  rep.scan = topology::sweet_spot_scan(cfg.model, cfg.sweep.direction, cfg.sweep.magnitudes, opts);
  return rep;
}

}  // namespace runner
}  // namespace qahsim
