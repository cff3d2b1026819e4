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
#include "qahsim/sse_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numeric>
#include <thread>

#include "qahsim/error.hpp"
#include "qahsim/liouville.hpp"

namespace qahsim {

using cplx = std::complex<double>;

void EvolutionSchedule::validate() const {
  if (!(t_total > 0.0) || n_steps < 1 || !std::isfinite(t_total)) {
    throw Error(ErrorKind::InvalidTau, "schedule must have t_total > 0 and n_steps >= 1");
  }
  if (sample_stride < 1 || n_steps % sample_stride != 0) {
    throw Error(ErrorKind::InvalidArgument, "sample_stride must divide n_steps");
  }
}

std::vector<double> EvolutionSchedule::sample_times() const {
  std::vector<double> t;
  for (int n = 0; n <= n_steps; n += sample_stride) t.push_back(n * tau());
  return t;
}

std::vector<double> EvolutionSchedule::step_times() const {
  std::vector<double> t(static_cast<std::size_t>(n_steps));
  for (int n = 0; n < n_steps; ++n) t[static_cast<std::size_t>(n)] = n * tau();
  return t;
}

namespace sse {

SpinState spin_down() { return SpinState(cplx(0.0), cplx(1.0)); }

Eigen::Vector3d polarization(const SpinState& psi) {
  const cplx off = std::conj(psi(0)) * psi(1);
  return {2.0 * off.real(), 2.0 * off.imag(), std::norm(psi(0)) - std::norm(psi(1))};
}

SpinState step(const SpinState& psi, const BlochVector& h, const NoiseStrengths& w,
               const NoiseDraw& draw, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidTau, "tau must be positive");
  const double rt = std::sqrt(tau);
  const double ex = (h.x() + std::sqrt(w.wx) * draw.nx / rt) * tau;
  const double ey = (h.y() + std::sqrt(w.wy) * draw.ny / rt) * tau;
  const double ez = (h.z() + std::sqrt(w.wz) * draw.nz / rt) * tau;
  cplx a = psi(0), b = psi(1);
  // exp(-i e s) = cos e - i sin e s, applied right to left.
  {
    const cplx ph(std::cos(ez), -std::sin(ez));
    a *= ph;
    b *= std::conj(ph);
  }
  {
    const double c = std::cos(ey), s = std::sin(ey);
    const cplx na = c * a - s * b;
    b = c * b + s * a;
    a = na;
  }
  {
    const double c = std::cos(ex), s = std::sin(ex);
    const cplx mis(0.0, -s);
    const cplx na = c * a + mis * b;
    b = c * b + mis * a;
    a = na;
  }
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return SpinState(a / n, b / n);
}

SpinTrajectory simulate_trajectory(const Momentum& k, const QahParams& p,
                                   const NoiseStrengths& w, const EvolutionSchedule& sched,
                                   std::uint64_t seed, std::uint64_t config_index,
                                   std::uint64_t stream) {
  sched.validate();
  const BlochVector h = model::bloch_vector(k, p);
  const double tau = sched.tau();
  SpinTrajectory out;
  out.momentum = k;
  out.times = sched.sample_times();
  out.polarization.reserve(out.times.size());
  SpinState psi = spin_down();
  out.polarization.push_back(polarization(psi));
  const bool noisy = !w.is_zero();
  for (int n = 0; n < sched.n_steps; ++n) {
    const NoiseDraw draw = noisy ? noise_draw(seed, stream, config_index,
                                              static_cast<std::uint64_t>(n))
                                 : NoiseDraw{};
    psi = step(psi, h, w, draw, tau);
    if ((n + 1) % sched.sample_stride == 0) out.polarization.push_back(polarization(psi));
  }
  return out;
}

namespace {

constexpr int kBlock = 64;

struct BlockSum {
  std::vector<Eigen::Vector3d> sum;
  std::vector<Eigen::Vector3d> sum_sq;
};

}  // namespace

EnsembleResult ensemble_statistics(const Momentum& k, const QahParams& p,
                                   const NoiseStrengths& w, const EvolutionSchedule& sched,
                                   std::uint64_t seed, int n_configs, int workers,
                                   std::uint64_t stream) {
  if (n_configs < 1) throw Error(ErrorKind::InvalidArgument, "n_configs must be >= 1");
  sched.validate();
  EnsembleResult res;
  res.n_configs = n_configs;
  if (w.is_zero()) {
    res.mean = simulate_trajectory(k, p, w, sched, seed, 0, stream);
    res.std_error.assign(res.mean.times.size(), Eigen::Vector3d::Zero());
    return res;
  }
  const std::size_t n_samples = sched.sample_times().size();
  const int n_blocks = (n_configs + kBlock - 1) / kBlock;
  std::vector<BlockSum> blocks(static_cast<std::size_t>(n_blocks));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
      BlockSum& bs = blocks[static_cast<std::size_t>(b)];
      bs.sum.assign(n_samples, Eigen::Vector3d::Zero());
      bs.sum_sq.assign(n_samples, Eigen::Vector3d::Zero());
      const int end = std::min(n_configs, (b + 1) * kBlock);
      for (int c = b * kBlock; c < end; ++c) {
        const SpinTrajectory t =
            simulate_trajectory(k, p, w, sched, seed, static_cast<std::uint64_t>(c), stream);
        for (std::size_t i = 0; i < n_samples; ++i) {
          bs.sum[i] += t.polarization[i];
          bs.sum_sq[i] += t.polarization[i].cwiseAbs2();
        }
      }
    }
  };
  const int nw = std::clamp(workers, 1, n_blocks);
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<Eigen::Vector3d> sum(n_samples, Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> sum_sq(n_samples, Eigen::Vector3d::Zero());
  for (const auto& bs : blocks) {
    for (std::size_t i = 0; i < n_samples; ++i) {
      sum[i] += bs.sum[i];
      sum_sq[i] += bs.sum_sq[i];
    }
  }
  const double n = n_configs;
  res.mean.momentum = k;
  res.mean.times = sched.sample_times();
  res.mean.polarization.resize(n_samples);
  res.std_error.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    res.mean.polarization[i] = sum[i] / n;
    const Eigen::Vector3d var =
        (sum_sq[i] / n - res.mean.polarization[i].cwiseAbs2()).cwiseMax(0.0) *
        (n > 1 ? n / (n - 1) : 0.0);
    res.std_error[i] = (var / n).cwiseSqrt();
  }
  return res;
}

SpinTrajectory ensemble_average(const Momentum& k, const QahParams& p, const NoiseStrengths& w,
                                const EvolutionSchedule& sched, std::uint64_t seed,
                                int n_configs, int workers, std::uint64_t stream) {
  return ensemble_statistics(k, p, w, sched, seed, n_configs, workers, stream).mean;
}

double uhlmann_fidelity(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double ra = std::max(0.0, 1.0 - a.squaredNorm());
  const double rb = std::max(0.0, 1.0 - b.squaredNorm());
  return 0.5 * (1.0 + a.dot(b) + std::sqrt(ra * rb));
}

std::vector<SweepPoint> discretization_sweep(const Momentum& k, const QahParams& p,
                                             const NoiseStrengths& w,
                                             const EvolutionSchedule& sched_base,
                                             const std::vector<int>& m_list, std::uint64_t seed,
                                             int n_configs, int workers) {
  if (m_list.empty()) return {};
  int g = 0;
  for (int m : m_list) {
    if (m < 10) throw Error(ErrorKind::InvalidArgument, "step counts must be >= 10");
    g = std::gcd(g, m);
  }
  std::vector<SweepPoint> out;
  const Liouvillian L = liouville::build_liouvillian(k, p, w);
  for (int m : m_list) {
    EvolutionSchedule s = sched_base;
    s.n_steps = m;
    s.sample_stride = m / g;
    const SpinTrajectory avg = ensemble_average(k, p, w, s, seed, n_configs, workers);
    const SpinTrajectory ref = liouville::exact_evolution(L, {0.0, 0.0, -1.0}, avg.times);
    SweepPoint pt;
    pt.n_steps = m;
    for (std::size_t i = 0; i < avg.times.size(); ++i) {
      pt.rss += (avg.polarization[i] - ref.polarization[i]).squaredNorm();
      pt.fidelity += uhlmann_fidelity(avg.polarization[i], ref.polarization[i]);
    }
    pt.fidelity /= static_cast<double>(avg.times.size());
    out.push_back(pt);
  }
  return out;
}

}  // namespace sse
}  // namespace qahsim
