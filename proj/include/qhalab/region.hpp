#pragma once

// Phase-space regions as explicit boolean masks with exact measure
// bookkeeping. Geometric specs are rasterized by center-of-cell membership
// in the wrap-aware centered coordinates.

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "qhalab/grid.hpp"

namespace qhalab {

struct Region {
  GridModel grid;
  std::vector<std::uint8_t> mask;  // row-major by (m,k): index m*n + k
  double measure = 0.0;            // (#true points) * phase_weight
  long count = 0;

  Region() = default;
  Region(const GridModel& g, std::vector<std::uint8_t> mk)
      : grid(g), mask(std::move(mk)) {
    if (static_cast<long>(mask.size()) != long(g.n) * g.n)
      throw std::invalid_argument("Region: mask size != n*n");
    for (auto b : mask) count += (b != 0);
    measure = count * grid.phase_weight();
    if (count == 0) throw std::invalid_argument("degenerate region");
  }

  bool contains(int m, int k) const {
    return mask[static_cast<size_t>(grid.wrap(m)) * grid.n + grid.wrap(k)] != 0;
  }

  std::vector<PhasePoint> points() const {
    std::vector<PhasePoint> pts;
    pts.reserve(count);
    for (int m = 0; m < grid.n; ++m)
      for (int k = 0; k < grid.n; ++k)
        if (mask[static_cast<size_t>(m) * grid.n + k]) pts.push_back({m, k});
    return pts;
  }

  // centroid in continuum coordinates (wrap-aware representative points)
  void centroid(double& cx, double& cxi) const {
    double sx = 0, sxi = 0;
    for (int m = 0; m < grid.n; ++m)
      for (int k = 0; k < grid.n; ++k)
        if (mask[static_cast<size_t>(m) * grid.n + k]) {
          sx += phase_x(grid, m);
          sxi += phase_xi(grid, k);
        }
    cx = sx / count;
    cxi = sxi / count;
  }

  // diameter of the bounding box around the centroid (continuum units)
  double diameter() const {
    double cx, cxi;
    centroid(cx, cxi);
    double r2max = 0;
    for (int m = 0; m < grid.n; ++m)
      for (int k = 0; k < grid.n; ++k)
        if (mask[static_cast<size_t>(m) * grid.n + k]) {
          double dx = phase_x(grid, m) - cx, dxi = phase_xi(grid, k) - cxi;
          r2max = std::max(r2max, dx * dx + dxi * dxi);
        }
    return 2.0 * std::sqrt(r2max);
  }
};

struct RegionSpec {
  enum class Kind { Ball, Rectangle, ExplicitMask, Union, ComplementWithinBox };
  Kind kind = Kind::Ball;
  // ball
  double cx = 0.0, cxi = 0.0, radius = 1.0;
  // rectangle [x0,x1] x [xi0,xi1] in continuum coordinates
  double x0 = 0, x1 = 0, xi0 = 0, xi1 = 0;
  // explicit mask
  std::vector<std::uint8_t> mask;
  // union / complement operands
  std::vector<RegionSpec> parts;

  static RegionSpec ball(double cx, double cxi, double r) {
    RegionSpec s;
    s.kind = Kind::Ball;
    s.cx = cx;
    s.cxi = cxi;
    s.radius = r;
    return s;
  }
  static RegionSpec rectangle(double x0, double x1, double xi0, double xi1) {
    RegionSpec s;
    s.kind = Kind::Rectangle;
    s.x0 = x0;
    s.x1 = x1;
    s.xi0 = xi0;
    s.xi1 = xi1;
    return s;
  }
};

namespace detail {
inline void rasterize(const GridModel& g, const RegionSpec& spec,
                      std::vector<std::uint8_t>& out) {
  const int n = g.n;
  switch (spec.kind) {
    case RegionSpec::Kind::Ball: {
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          double dx = phase_x(g, m) - spec.cx;
          double dxi = phase_xi(g, k) - spec.cxi;
          if (dx * dx + dxi * dxi <= spec.radius * spec.radius)
            out[static_cast<size_t>(m) * n + k] = 1;
        }
      break;
    }
    case RegionSpec::Kind::Rectangle: {
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) {
          double x = phase_x(g, m), xi = phase_xi(g, k);
          if (x >= spec.x0 && x <= spec.x1 && xi >= spec.xi0 && xi <= spec.xi1)
            out[static_cast<size_t>(m) * n + k] = 1;
        }
      break;
    }
    case RegionSpec::Kind::ExplicitMask: {
      if (static_cast<long>(spec.mask.size()) != long(n) * n)
        throw std::invalid_argument("explicit mask size != n*n");
      for (size_t i = 0; i < spec.mask.size(); ++i)
        if (spec.mask[i]) out[i] = 1;
      break;
    }
    case RegionSpec::Kind::Union: {
      for (const auto& part : spec.parts) rasterize(g, part, out);
      break;
    }
    case RegionSpec::Kind::ComplementWithinBox: {
      if (spec.parts.size() != 2)
        throw std::invalid_argument(
            "complement-within-box needs [box, removed] parts");
      std::vector<std::uint8_t> box(static_cast<size_t>(n) * n, 0),
          rem(static_cast<size_t>(n) * n, 0);
      rasterize(g, spec.parts[0], box);
      rasterize(g, spec.parts[1], rem);
      for (size_t i = 0; i < box.size(); ++i)
        if (box[i] && !rem[i]) out[i] = 1;
      break;
    }
  }
}
}  // namespace detail

inline Region make_region(const GridModel& g, const RegionSpec& spec) {
  std::vector<std::uint8_t> mask(static_cast<size_t>(g.n) * g.n, 0);
  detail::rasterize(g, spec, mask);
  return Region(g, std::move(mask));  // throws "degenerate region" if empty
}

inline Region full_grid_region(const GridModel& g) {
  return Region(g, std::vector<std::uint8_t>(static_cast<size_t>(g.n) * g.n, 1));
}

}  // namespace qhalab
