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
#include "qahsim/contour.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>

namespace qahsim {
namespace {

struct Segment {
  std::int64_t e0;
  std::int64_t e1;
  bool used = false;
};

class EdgeIndex {
 public:
  EdgeIndex(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {}

  std::int64_t horizontal(std::size_t ix, std::size_t iy) const {
    return static_cast<std::int64_t>(iy * (nx_ - 1) + ix);
  }
  std::int64_t vertical(std::size_t ix, std::size_t iy) const {
    return static_cast<std::int64_t>(ny_ * (nx_ - 1) + iy * nx_ + ix);
  }
  bool is_horizontal(std::int64_t e) const {
    return e < static_cast<std::int64_t>(ny_ * (nx_ - 1));
  }
  // Node endpoints of an edge.
  void nodes(std::int64_t e, std::size_t& ix0, std::size_t& iy0, std::size_t& ix1,
             std::size_t& iy1) const {
    if (is_horizontal(e)) {
      ix0 = static_cast<std::size_t>(e) % (nx_ - 1);
      iy0 = static_cast<std::size_t>(e) / (nx_ - 1);
      ix1 = ix0 + 1;
      iy1 = iy0;
    } else {
      const auto r = static_cast<std::size_t>(e) - ny_ * (nx_ - 1);
      ix0 = r % nx_;
      iy0 = r / nx_;
      ix1 = ix0;
      iy1 = iy0 + 1;
    }
  }
  bool on_boundary(std::int64_t e) const {
    std::size_t ix0, iy0, ix1, iy1;
    nodes(e, ix0, iy0, ix1, iy1);
    if (is_horizontal(e)) return iy0 == 0 || iy0 == ny_ - 1;
    return ix0 == 0 || ix0 == nx_ - 1;
  }

 private:
  std::size_t nx_;
  std::size_t ny_;
};

Eigen::Vector2d edge_point(const ScalarGrid& g, const EdgeIndex& idx, std::int64_t e) {
  std::size_t ix0, iy0, ix1, iy1;
  idx.nodes(e, ix0, iy0, ix1, iy1);
  const double v0 = g.at(ix0, iy0);
  const double v1 = g.at(ix1, iy1);
  const double t = (v0 == v1) ? 0.5 : v0 / (v0 - v1);
  return {g.x[ix0] + t * (g.x[ix1] - g.x[ix0]), g.y[iy0] + t * (g.y[iy1] - g.y[iy0])};
}

}  // namespace

std::vector<Polyline> zero_contours(const ScalarGrid& g) {
  std::vector<Polyline> out;
  const std::size_t nx = g.nx();
  const std::size_t ny = g.ny();
  if (nx < 2 || ny < 2) return out;
  EdgeIndex idx(nx, ny);

  std::vector<Segment> segs;
  std::unordered_map<std::int64_t, std::array<int, 2>> by_edge;
  auto attach = [&](std::int64_t e, int s) {
    auto it = by_edge.find(e);
    if (it == by_edge.end()) {
      by_edge.emplace(e, std::array<int, 2>{s, -1});
    } else {
      it->second[1] = s;
    }
  };
  auto add = [&](std::int64_t a, std::int64_t b) {
    const int s = static_cast<int>(segs.size());
    segs.push_back({a, b});
    attach(a, s);
    attach(b, s);
  };

  for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
    for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
      if (!g.is_defined(ix, iy) || !g.is_defined(ix + 1, iy) || !g.is_defined(ix + 1, iy + 1) ||
          !g.is_defined(ix, iy + 1)) {
        continue;
      }
      const double va = g.at(ix, iy);
      const double vb = g.at(ix + 1, iy);
      const double vc = g.at(ix + 1, iy + 1);
      const double vd = g.at(ix, iy + 1);
      const bool a = va >= 0.0, b = vb >= 0.0, c = vc >= 0.0, d = vd >= 0.0;
      const std::int64_t bottom = idx.horizontal(ix, iy);
      const std::int64_t right = idx.vertical(ix + 1, iy);
      const std::int64_t top = idx.horizontal(ix, iy + 1);
      const std::int64_t left = idx.vertical(ix, iy);
      std::vector<std::int64_t> crossed;
      if (a != b) crossed.push_back(bottom);
      if (b != c) crossed.push_back(right);
      if (c != d) crossed.push_back(top);
      if (d != a) crossed.push_back(left);
      if (crossed.size() == 2) {
        add(crossed[0], crossed[1]);
      } else if (crossed.size() == 4) {
        const bool centre = 0.25 * (va + vb + vc + vd) >= 0.0;
        if (centre == a) {
          add(bottom, right);
          add(top, left);
        } else {
          add(left, bottom);
          add(right, top);
        }
      }
    }
  }

  auto other_segment = [&](std::int64_t e, int s) {
    const auto& pair = by_edge.at(e);
    return pair[0] == s ? pair[1] : pair[0];
  };
  auto is_end = [&](std::int64_t e) { return by_edge.at(e)[1] < 0; };

  auto trace = [&](int start, std::int64_t entry) {
    Polyline line;
    line.points.push_back(edge_point(g, idx, entry));
    std::int64_t edge = entry;
    int s = start;
    while (s >= 0 && !segs[static_cast<std::size_t>(s)].used) {
      auto& seg = segs[static_cast<std::size_t>(s)];
      seg.used = true;
      edge = (seg.e0 == edge) ? seg.e1 : seg.e0;
      line.points.push_back(edge_point(g, idx, edge));
      if (edge == entry) {
        line.closed = true;
        break;
      }
      s = other_segment(edge, s);
    }
    if (!line.closed) {
      for (std::int64_t e : {entry, edge}) {
        if (!is_end(e)) continue;
        if (idx.on_boundary(e)) {
          line.hits_boundary = true;
        } else {
          line.interrupted = true;
        }
      }
    }
    return line;
  };

  // Open chains first, so every chain is traced from one of its ends.
  std::vector<std::int64_t> ends;
  for (const auto& [e, pair] : by_edge) {
    if (pair[1] < 0) ends.push_back(e);
  }
  std::sort(ends.begin(), ends.end());
  for (std::int64_t e : ends) {
    const int s = by_edge.at(e)[0];
    if (segs[static_cast<std::size_t>(s)].used) continue;
    out.push_back(trace(s, e));
  }
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (segs[s].used) continue;
    out.push_back(trace(static_cast<int>(s), segs[s].e0));
  }
  return out;
}

bool bilinear(const ScalarGrid& g, double x, double y, double& out) {
  const std::size_t nx = g.nx(), ny = g.ny();
  if (nx < 2 || ny < 2) return false;
  if (x < g.x.front() || x > g.x.back() || y < g.y.front() || y > g.y.back()) return false;
  auto locate = [](const std::vector<double>& axis, double v) {
    auto it = std::upper_bound(axis.begin(), axis.end(), v);
    std::size_t i = static_cast<std::size_t>(it - axis.begin());
    if (i == 0) i = 1;
    if (i >= axis.size()) i = axis.size() - 1;
    return i - 1;
  };
  const std::size_t ix = locate(g.x, x);
  const std::size_t iy = locate(g.y, y);
  if (!g.is_defined(ix, iy) || !g.is_defined(ix + 1, iy) || !g.is_defined(ix, iy + 1) ||
      !g.is_defined(ix + 1, iy + 1)) {
    return false;
  }
  const double tx = (x - g.x[ix]) / (g.x[ix + 1] - g.x[ix]);
  const double ty = (y - g.y[iy]) / (g.y[iy + 1] - g.y[iy]);
  out = (1 - tx) * (1 - ty) * g.at(ix, iy) + tx * (1 - ty) * g.at(ix + 1, iy) +
        (1 - tx) * ty * g.at(ix, iy + 1) + tx * ty * g.at(ix + 1, iy + 1);
  return true;
}

}  // namespace qahsim
