#pragma once

// Finite phase-space model. Signals live on Z_n; phase space is Z_n x Z_n.
//
// Two modes share one bookkeeping convention:
//   exact-cyclic:        sample spacing 1,        frequency spacing 1/n
//   continuum-emulation: sample spacing 1/sqrt(n) both in time and frequency
// Either way one phase-space cell has measure 1/n, and sums over the grid
// weighted by 1/n stand in for the phase-space integral.

#include <stdexcept>

namespace qhalab {

enum class GridMode { ExactCyclic, ContinuumEmulation };

struct GridModel {
  int n = 0;
  GridMode mode = GridMode::ExactCyclic;

  GridModel() = default;
  GridModel(int n_, GridMode mode_) : n(n_), mode(mode_) {
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument("GridModel: n must be even and >= 4");
  }

  // sample spacing of the signal axis
  double delta() const {
    return mode == GridMode::ExactCyclic ? 1.0 : 1.0 / std::sqrt(double(n));
  }
  // spacing of the frequency axis; delta_x * delta_xi = 1/n in both modes
  double delta_xi() const { return 1.0 / (n * delta()); }
  double phase_weight() const { return 1.0 / double(n); }

  bool operator==(const GridModel& o) const {
    return n == o.n && mode == o.mode;
  }
  bool operator!=(const GridModel& o) const { return !(*this == o); }

  // index folded into the signed window [-n/2, n/2)
  int signed_index(int j) const {
    int r = j % n;
    if (r < 0) r += n;
    return r >= n / 2 ? r - n : r;
  }
  int wrap(int j) const {
    int r = j % n;
    return r < 0 ? r + n : r;
  }

  // centered position of signal sample j (stored index 0..n-1)
  double sample_coord(int j) const { return (j - n / 2) * delta(); }
};

inline void require_same_grid(const GridModel& a, const GridModel& b,
                              const char* what) {
  if (a != b) throw std::invalid_argument(std::string("grid mismatch in ") + what);
}

struct PhasePoint {
  int m = 0;  // position index
  int k = 0;  // frequency index

  PhasePoint() = default;
  PhasePoint(int m_, int k_) : m(m_), k(k_) {}

  PhasePoint wrapped(const GridModel& g) const {
    return {g.wrap(m), g.wrap(k)};
  }
  PhasePoint operator+(const PhasePoint& o) const { return {m + o.m, k + o.k}; }
  PhasePoint operator-() const { return {-m, -k}; }
  bool operator==(const PhasePoint& o) const { return m == o.m && k == o.k; }
};

// Continuum coordinates of a phase point, wrap-aware (centered window).
inline double phase_x(const GridModel& g, int m) {
  return g.signed_index(m) * g.delta();
}
inline double phase_xi(const GridModel& g, int k) {
  return g.signed_index(k) * g.delta_xi();
}
// x.xi product used by the half-phase; equals m~ k~ / n in both modes.
inline double phase_xxi(const GridModel& g, const PhasePoint& z) {
  return double(g.signed_index(z.m)) * double(g.signed_index(z.k)) / double(g.n);
}
inline double phase_abs2(const GridModel& g, const PhasePoint& z) {
  double x = phase_x(g, z.m), xi = phase_xi(g, z.k);
  return x * x + xi * xi;
}

}  // namespace qhalab
