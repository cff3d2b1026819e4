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
#include "qahsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace qahsim {
namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

__extension__ typedef unsigned __int128 u128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const u128 p = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

PhiloxCounter philox4x64(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

NoiseDraw noise_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t config,
                     std::uint64_t step) {
  const PhiloxCounter r = philox4x64({step, config, 0, 0}, {seed, stream});
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double r0 = std::sqrt(-2.0 * std::log(to_unit_open(r[0])));
  const double a0 = two_pi * to_unit_open(r[1]);
  const double r1 = std::sqrt(-2.0 * std::log(to_unit_open(r[2])));
  const double a1 = two_pi * to_unit_open(r[3]);
  return {r0 * std::cos(a0), r0 * std::sin(a0), r1 * std::cos(a1)};
}

}  // namespace qahsim
