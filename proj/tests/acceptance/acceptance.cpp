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
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "qahsim/error.hpp"
#include "qahsim/liouville.hpp"
#include "qahsim/mode_fitting.hpp"
#include "qahsim/runner.hpp"

namespace qahsim {
namespace {

// Tolerances.
constexpr double kFidelityMin = 0.99;
constexpr double kOmegaRef = 0.4063;  // kHz
constexpr double kOmegaOracleTol = 0.02;
constexpr double kOmegaSseTol = 0.05;
constexpr double kSlopeRef = -0.5;
constexpr double kSlopeTol = 0.1;
constexpr double kNormTol = 1e-12;
constexpr double kMonotoneTol = 1e-12;
constexpr double kReconstructionTol = 1e-9;
constexpr double kRoundTripTol = 1e-6;
constexpr double kWindingResidualTol = 0.05;
constexpr double kInvarianceTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RunConfig preset(const std::string& name) {
  return runner::load_config(std::string(QAHSIM_SOURCE_DIR) + "/configs/" + name);
}

Outcome discretization() {
  const RunConfig c = preset("fig3.json");
  const auto sweep = sse::discretization_sweep({1.2857, -1.8}, c.model, c.noise, c.schedule,
                                               {30, 100, 300}, c.seed, 5000, c.workers);
  bool pass = sweep[1].rss < sweep[0].rss && sweep[2].rss < sweep[1].rss;
  std::string d;
  for (const auto& p : sweep) {
    if (p.n_steps >= 100) pass = pass && p.fidelity >= kFidelityMin;
    d += fmt("M=%d fid=%.5f rss=%.4g  ", p.n_steps, p.fidelity, p.rss);
  }
  return {pass, d};
}

Outcome omega_min() {
  const RunConfig c = preset("fig3.json");
  const RunSummary s = runner::run_texture(c);
  const auto& o = s.omega_on_dbis;
  if (!o.found) return {false, "no dBIS"};
  const double rel = std::abs(o.lattice_min - kOmegaRef) / kOmegaRef;

  const SpinTrajectory avg = sse::ensemble_average(o.lattice_at, c.model, c.noise, c.schedule,
                                                   c.seed, 5000, c.workers);
  const ModeDecomposition md = liouville::mode_decomposition(
      liouville::build_liouvillian(o.lattice_at, c.model, c.noise), {0, 0, -1});
  const FitResult fit = fitting::fit_modes(avg, md);
  const double rel_sse = std::abs(fit.decomposition.omega - kOmegaRef) / kOmegaRef;
  return {rel <= kOmegaOracleTol && rel_sse <= kOmegaSseTol,
          fmt("oracle %.5f at (%.3f, %.3f) dev %.2f%%, contour %.5f; sse fit %.5f dev %.2f%%",
              o.lattice_min, o.lattice_at.kx, o.lattice_at.ky, 100 * rel, o.curve_min,
              fit.decomposition.omega, 100 * rel_sse)};
}

Outcome winding() {
  RunConfig c = preset("fig3.json");
  const RunSummary s = runner::run_texture(c);
  const int chern = model::chern_number(c.model);
  const double skyrmion = testing::skyrmion_number(
      [&](double x, double y) { return model::bloch_vector({x, y}, c.model); }, 400);
  const bool defined = s.evidence.w.has_value();
  const int w = defined ? s.evidence.w->value : 0;
  c.model.mz = 5.0;
  const RunSummary trivial = runner::run_texture(c);
  const bool pass = s.evidence.dbis_status == "closed" && defined && std::abs(w) == 1 &&
                    std::abs(chern) == 1 && std::lround(std::abs(skyrmion)) == 1 &&
                    trivial.evidence.dbis_status == "none";
  return {pass, fmt("dbis %s, W=%d (%s), C=%d, skyrmion %.4f; mz=5 dbis %s",
                    s.evidence.dbis_status.c_str(), w, s.evidence.w_status.c_str(), chern,
                    skyrmion, trivial.evidence.dbis_status.c_str())};
}

Outcome type_one() {
  const RunConfig c = preset("fig4c.json");
  const RunSummary s = runner::run_texture(c);
  const Momentum k{-1.286, -0.257};
  const double omega = liouville::oscillation_frequency(k, c.model, c.noise);
  const bool non_osc = omega * c.schedule.t_total < std::numbers::pi;
  const SpinTrajectory avg =
      sse::ensemble_average(k, c.model, c.noise, c.schedule, c.seed, 5000, c.workers);
  const FitResult fit = fitting::fit_modes(avg);
  bool all_zero = !s.evidence.ne.empty();
  for (const auto& l : s.evidence.ne) all_zero = all_zero && l.winding.value == 0;
  const bool pass = s.evidence.phase == Phase::type_I && s.evidence.ep_on_dbis && non_osc &&
                    fit.overdamped && all_zero;
  return {pass, fmt("phase %s, ep_on_dbis %d, omega*T=%.3f, sse fit overdamped %d, %zu N_E loops %s",
                    to_string(s.evidence.phase), s.evidence.ep_on_dbis ? 1 : 0,
                    omega * c.schedule.t_total, fit.overdamped ? 1 : 0, s.evidence.ne.size(),
                    all_zero ? "all 0" : "not all 0")};
}

Outcome type_two() {
  const RunConfig c = preset("fig4d.json");
  const RunSummary s = runner::run_texture(c);
  bool ep_origin = false;
  for (const auto& e : s.evidence.exceptional_points) {
    ep_origin |= std::hypot(e.centroid.kx, e.centroid.ky) < 0.05;
  }
  int ne = 0;
  bool have = false;
  for (const auto& l : s.evidence.ne) {
    if (std::hypot(l.center.kx, l.center.ky) < 0.05) {
      ne = l.winding.value;
      have = true;
    }
  }
  const bool pass = s.evidence.phase == Phase::type_II && ep_origin && s.evidence.ep_at_charge &&
                    s.evidence.ep_on_dbis && have && std::abs(ne) == 1;
  return {pass, fmt("phase %s, EP at origin %d, dBIS reaches EP %d, N_E(0,0)=%d",
                    to_string(s.evidence.phase), ep_origin ? 1 : 0,
                    s.evidence.ep_on_dbis ? 1 : 0, ne)};
}

Outcome sweet_spot() {
  const SweetSpotReport r = runner::run_sweetspot(preset("fig7.json"));
  bool pass = r.scan.size() == 3;
  std::string d;
  for (const auto& p : r.scan) {
    pass = pass && p.dbis_stable && !p.ep_on_dbis;
    d += fmt("%.1f:%s ", p.magnitude, p.dbis_stable ? "stable" : "unstable");
  }
  return {pass, d + fmt("literal inequality %d", r.literal ? 1 : 0)};
}

Outcome convergence() {
  const ConvergenceReport r = runner::run_convergence(preset("convergence.json"));
  std::string d = fmt("slope %.3f; ", r.slope);
  for (const auto& row : r.rms) d += fmt("N=%d rms=%.4g ", row.n_configs, row.rms);
  return {std::abs(r.slope - kSlopeRef) <= kSlopeTol, d};
}

Outcome properties() {
  const RunConfig weak = preset("fig3.json");
  const RunConfig t1 = preset("fig4c.json");
  const RunConfig t2 = preset("fig4d.json");
  std::vector<std::string> failed;
  auto check = [&](const char* name, bool ok) {
    if (!ok) failed.emplace_back(name);
  };

  // Norm preservation along noisy trajectories.
  double norm_dev = 0.0;
  for (std::uint64_t cfg = 0; cfg < 8; ++cfg) {
    const BlochVector h = model::bloch_vector({0.7, -1.1}, t1.model);
    SpinState psi = sse::spin_down();
    for (int n = 0; n < 3000; ++n) {
      psi = sse::step(psi, h, t1.noise, noise_draw(7, 0, cfg, n), 0.01);
      norm_dev = std::max(norm_dev, std::abs(psi.norm() - 1.0));
    }
  }
  check("norm", norm_dev < kNormTol);

  // Oracle |s(t)| monotone, reconstruction, fit round trip.
  std::vector<double> fine;
  for (int i = 0; i <= 600; ++i) fine.push_back(0.05 * i);
  const auto samples = weak.schedule.sample_times();
  double worst_rise = 0.0, worst_rec = 0.0, worst_fit = 0.0;
  for (const RunConfig* c : {&weak, &t1, &t2}) {
    for (int i = 0; i < 6; ++i) {
      const Momentum k{-1.7 + 0.61 * i, 1.5 - 0.53 * i};
      const Liouvillian L = liouville::build_liouvillian(k, c->model, c->noise);
      const SpinTrajectory ex = liouville::exact_evolution(L, {0, 0, -1}, fine);
      for (std::size_t j = 1; j < fine.size(); ++j) {
        worst_rise = std::max(worst_rise, ex.polarization[j].norm() - ex.polarization[j - 1].norm());
      }
      ModeDecomposition md;
      try {
        md = liouville::mode_decomposition(L, {0, 0, -1});
      } catch (const Error&) {
        continue;
      }
      for (std::size_t j = 0; j < fine.size(); ++j) {
        worst_rec = std::max(worst_rec, (md.evaluate(fine[j]) - ex.polarization[j]).norm());
      }
      if (c == &weak) {
        const FitResult fit =
            fitting::fit_modes(liouville::exact_evolution(L, {0, 0, -1}, samples), md);
        const auto& f = fit.decomposition;
        const double scale = md.s0.norm() + md.s_plus.norm();
        double e = ((f.s0 - md.s0).norm() + (f.s_plus - md.s_plus).norm()) / scale;
        e = std::max(e, std::abs(f.omega - md.omega) / md.omega);
        e = std::max(e, std::abs(f.lambda1 - md.lambda1) / md.lambda1);
        worst_fit = std::max(worst_fit, e);
      }
    }
  }
  check("monotone", worst_rise <= kMonotoneTol);
  check("reconstruction", worst_rec < kReconstructionTol);
  check("fit round trip", worst_fit < kRoundTripTol);

  // Winding integrality on the weak-noise pipeline.
  const RunSummary s = runner::run_texture(weak);
  const double w_res = s.evidence.w ? s.evidence.w->residual : 1.0;
  check("winding residual", w_res < kWindingResidualTol);

  // N_E independent of the loop radius around the type-II charge.
  bool radius_ok = true;
  for (double r : {0.2, 0.35, 0.5}) {
    const WindingResult ne = topology::winding_NE(t2.model, t2.noise, {{0.0, 0.0}, r, 256});
    radius_ok = radius_ok && std::abs(ne.value) == 1;
  }
  check("N_E radius invariance", radius_ok);

  // Liouvillian polarisation under s_plus -> c s_plus.
  const ModeDecomposition md = liouville::mode_decomposition(
      liouville::build_liouvillian({0.4, 0.9}, weak.model, weak.noise), {0, 0, -1});
  const LPolarization a = topology::liouvillian_polarization(md.s_plus);
  const LPolarization b =
      topology::liouvillian_polarization(std::polar(2.7, 1.3) * md.s_plus);
  const double inv = std::max({std::abs(a.lx - b.lx), std::abs(a.ly - b.ly), std::abs(a.lz - b.lz)});
  check("polarisation invariance", inv < kInvarianceTol);

  // Byte-identical reruns across worker counts.
  RunConfig small = weak;
  small.mode = RunMode::sse;
  small.kx.n = small.ky.n = 8;
  small.n_configs = 200;
  std::string ref;
  bool identical = true;
  for (int workers : {1, 2, 5}) {
    small.workers = workers;
    const std::string csv = runner::texture_csv(runner::run_texture(small));
    if (ref.empty()) ref = csv;
    identical = identical && csv == ref;
  }
  check("byte-identical reruns", identical);

  std::string d = fmt("norm %.1e, rise %.1e, rec %.1e, fit %.1e, W residual %.1e, inv %.1e",
                      norm_dev, worst_rise, worst_rec, worst_fit, w_res, inv);
  for (const auto& f : failed) d += "; failed: " + f;
  return {failed.empty(), d};
}

}  // namespace
}  // namespace qahsim

int main() {
  using namespace qahsim;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"discretization fidelity", discretization},
      {"minimum oscillation frequency", omega_min},
      {"dynamical winding", winding},
      {"type-I transition", type_one},
      {"type-II transition", type_two},
      {"sweet spot", sweet_spot},
      {"ensemble convergence", convergence},
      {"property suite", properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
