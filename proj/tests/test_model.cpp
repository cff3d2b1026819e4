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
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qahsim/error.hpp"
#include "qahsim/model.hpp"

namespace qahsim {
namespace {

constexpr double kPi = std::numbers::pi;

QahParams params(double mz) { return {1.0, 0.2, mz}; }

void expect_vec(const BlochVector& h, double x, double y, double z) {
  EXPECT_NEAR(h.x(), x, 1e-15);
  EXPECT_NEAR(h.y(), y, 1e-15);
  EXPECT_NEAR(h.z(), z, 1e-15);
}

TEST(BlochVector, HighSymmetryPoints) {
  expect_vec(model::bloch_vector({0, 0}, params(1.2)), 0, 0, -0.8);
  expect_vec(model::bloch_vector({kPi / 2, kPi / 2}, params(1.2)), 0.2, 0.2, 1.2);
  expect_vec(model::bloch_vector({kPi, 0}, params(1.2)), 0, 0, 1.2);
}

TEST(BlochVector, PeriodicAndParity) {
  const QahParams p = params(1.2);
  for (double kx : {-2.9, -0.4, 0.7, 2.2}) {
    for (double ky : {-1.3, 0.0, 1.9}) {
      const BlochVector h = model::bloch_vector({kx, ky}, p);
      EXPECT_LT((h - model::bloch_vector({kx + 2 * kPi, ky}, p)).norm(), 1e-14);
      EXPECT_LT((h - model::bloch_vector({kx, ky + 2 * kPi}, p)).norm(), 1e-14);
      const BlochVector m = model::bloch_vector({-kx, ky}, p);
      EXPECT_DOUBLE_EQ(m.x(), -h.x());
      EXPECT_DOUBLE_EQ(m.y(), h.y());
      EXPECT_DOUBLE_EQ(m.z(), h.z());
    }
  }
}

TEST(BlochVector, RejectsBadParams) {
  EXPECT_NO_THROW(params(1.2).validate());
  EXPECT_THROW((QahParams{0.0, 0.2, 1.2}.validate()), Error);
  EXPECT_THROW((QahParams{1.0, 0.2, std::nan("")}.validate()), Error);
  EXPECT_THROW((NoiseStrengths{-0.1, 0.0, 0.0}.validate()), Error);
}

TEST(Chern, KnownValues) {
  EXPECT_EQ(std::abs(model::chern_number(params(1.2))), 1);
  EXPECT_EQ(model::chern_number(params(5.0)), 0);
  EXPECT_EQ(model::chern_number(params(-1.2)), -model::chern_number(params(1.2)));
}

TEST(Chern, GapClosingThrows) {
  for (double mz : {0.0, 2.0, -2.0}) {
    try {
      model::chern_number(params(mz));
      FAIL() << "mz = " << mz;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::GapClosed);
    }
  }
}

TEST(Chern, RefinementInvariant) {
  for (double mz : {0.2, 0.6, 1.0, 1.4, 1.8, -0.5, -1.5}) {
    EXPECT_EQ(model::chern_number(params(mz), 64), model::chern_number(params(mz), 128)) << mz;
  }
}

// Independent oracle: degree of the unit Bloch map, continuum integral.
TEST(Chern, MatchesSkyrmionIntegral) {
  int orientation = 0;
  for (double mz : {-1.8, -1.2, -0.5, 0.5, 1.2, 1.8, 2.5, -3.0}) {
    const QahParams p = params(mz);
    const double s = testing::skyrmion_number(
        [&](double x, double y) { return model::bloch_vector({x, y}, p); }, 400);
    const long deg = std::lround(s);
    EXPECT_NEAR(s, static_cast<double>(deg), 1e-2) << mz;
    const int c = model::chern_number(p);
    EXPECT_EQ(std::abs(c), std::abs(deg)) << mz;
    if (c != 0) {
      const int rel = c * static_cast<int>(deg);
      if (orientation == 0) orientation = rel;
      EXPECT_EQ(rel, orientation) << "sign convention must not depend on mz";
    }
  }
}

TEST(IdealBis, DiagonalPoint) {
  const auto curves = model::ideal_bis(params(1.2));
  ASSERT_EQ(curves.size(), 1u);
  EXPECT_TRUE(curves[0].closed);
  const double k = std::acos(0.6);
  double best = 1e9;
  for (const auto& q : curves[0].points) {
    if (std::abs(q.x() - q.y()) < 0.02 && q.x() > 0) best = std::min(best, std::abs(q.x() - k));
  }
  EXPECT_LT(best, 5e-3);
}

TEST(IdealBis, PointsLieOnHzZero) {
  for (double mz : {0.5, 1.2, 1.8, -1.2}) {
    const QahParams p = params(mz);
    const auto curves = model::ideal_bis(p);
    ASSERT_FALSE(curves.empty());
    for (const auto& c : curves) {
      for (const auto& q : c.points) {
        EXPECT_LT(std::abs(model::bloch_vector({q.x(), q.y()}, p).z()), 2e-3) << mz;
      }
    }
  }
}

TEST(IdealBis, DegeneratePoint) {
  const auto curves = model::ideal_bis(params(2.0));
  ASSERT_EQ(curves.size(), 1u);
  ASSERT_EQ(curves[0].points.size(), 1u);
  EXPECT_LT(curves[0].points[0].norm(), 1e-12);
}

TEST(IdealBis, EmptyForTrivialQuench) {
  try {
    model::ideal_bis(params(5.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyBis);
  }
}

}  // namespace
}  // namespace qahsim
