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

#include <vector>

#include <Eigen/Dense>

namespace qahsim {

struct Polyline {
  std::vector<Eigen::Vector2d> points;
  bool closed = false;         // first point repeated at the end
  bool hits_boundary = false;  // an end lies on the outer edge of the grid
  bool interrupted = false;    // an end lies next to a masked cell
};

/// Node-sampled scalar field on a rectilinear grid. Values are stored
/// row-major with y as the slow index: value(ix, iy) = values[iy * nx + ix].
struct ScalarGrid {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> values;
  std::vector<unsigned char> defined;  // empty means all nodes defined

  std::size_t nx() const { return x.size(); }
  std::size_t ny() const { return y.size(); }
  double at(std::size_t ix, std::size_t iy) const { return values[iy * x.size() + ix]; }
  bool is_defined(std::size_t ix, std::size_t iy) const {
    return defined.empty() || defined[iy * x.size() + ix] != 0;
  }
};

/// Marching-squares zero contours with linear edge interpolation. Cells with
/// an undefined corner are skipped; contours ending at such cells are flagged
/// as interrupted. Saddle cells are resolved with the cell-centre average.
std::vector<Polyline> zero_contours(const ScalarGrid& grid);

/// Bilinear interpolation; returns false outside the grid or when a
/// surrounding node is undefined.
bool bilinear(const ScalarGrid& grid, double x, double y, double& out);

}  // namespace qahsim
