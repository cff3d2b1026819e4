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

#include <gtest/gtest.h>

#include "qahsim/runner.hpp"

namespace qahsim {
namespace {

// Full weak-noise grid in both modes: the fitted SSE texture agrees with the
// oracle texture within the statistical floor of the ensemble.
TEST(CrossMode, WeakNoiseGrid) {
  RunConfig c = runner::load_config(std::string(QAHSIM_SOURCE_DIR) + "/configs/fig3.json");
  c.mode = RunMode::both;
  c.workers = 4;
  const RunSummary s = runner::run_texture(c);
  ASSERT_TRUE(s.cross_mode_rms.has_value());
  EXPECT_LT(*s.cross_mode_rms, 3.0 / std::sqrt(static_cast<double>(c.n_configs)));
  EXPECT_EQ(s.n_failed, 0);
  EXPECT_LE(s.n_masked, 8);
  EXPECT_EQ(s.evidence.phase, Phase::stable);
}

}  // namespace
}  // namespace qahsim
