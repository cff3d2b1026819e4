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

#include <array>
#include <cstdint>

namespace qahsim {

using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

/// Philox4x64-10 block function (Salmon et al., SC11).
PhiloxCounter philox4x64(PhiloxCounter ctr, PhiloxKey key);

/// Standard-normal deviates for one Trotter step of one noise configuration.
struct NoiseDraw {
  double nx = 0.0;
  double ny = 0.0;
  double nz = 0.0;
};

/// Counter-based draw: key = (seed, stream), counter = (step, config, 0, 0).
/// Identical arguments always give identical deviates, independent of the
/// order in which configurations are evaluated.
NoiseDraw noise_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t config,
                     std::uint64_t step);

/// Maps 64 random bits onto (0, 1].
inline double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace qahsim
