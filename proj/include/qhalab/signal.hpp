#pragma once

// Signals on the grid, time-frequency shifts, parity, and the special
// signal catalog (Gaussians, dilated Gaussians, Hermite functions).

#include <cmath>
#include <stdexcept>
#include <string>

#include "qhalab/fft.hpp"
#include "qhalab/grid.hpp"
#include "qhalab/numerics.hpp"

namespace qhalab {

struct Signal {
  GridModel grid;
  VectorXcd data;

  Signal() = default;
  Signal(const GridModel& g, VectorXcd d) : grid(g), data(std::move(d)) {
    if (data.size() != grid.n)
      throw std::invalid_argument("Signal: data length != n");
  }

  static Signal zero(const GridModel& g) {
    return Signal(g, VectorXcd::Zero(g.n));
  }
};

// <f,g> = sum_j f_j conj(g_j) * delta
inline cplx inner(const Signal& f, const Signal& g) {
  require_same_grid(f.grid, g.grid, "inner");
  return f.grid.delta() * g.data.dot(f.data);  // Eigen: a.dot(b) = a^H b
}

inline double norm(const Signal& f) {
  return std::sqrt(f.grid.delta()) * f.data.norm();
}

inline Signal normalized(const Signal& f) {
  double nrm = norm(f);
  if (nrm == 0.0) throw std::invalid_argument("normalized: zero signal");
  return Signal(f.grid, f.data / nrm);
}

// pi(m,k) f [j] = e^{2 pi i k j / n} f[(j - m) mod n]
inline Signal tf_shift(const Signal& f, const PhasePoint& z) {
  const GridModel& g = f.grid;
  const int n = g.n;
  const int m = g.wrap(z.m), k = g.wrap(z.k);
  VectorXcd out(n);
  for (int j = 0; j < n; ++j) {
    int q = int((1LL * k * j) % n);  // exact phase index
    double ph = kTwoPi * double(q) / double(n);
    out[j] = cplx(std::cos(ph), std::sin(ph)) * f.data[g.wrap(j - m)];
  }
  return Signal(g, std::move(out));
}

// P f [j] = f[(-j) mod n]
inline Signal parity(const Signal& f) {
  const int n = f.grid.n;
  VectorXcd out(n);
  for (int j = 0; j < n; ++j) out[j] = f.data[f.grid.wrap(-j)];
  return Signal(f.grid, std::move(out));
}

// --- special signal catalog -------------------------------------------------

namespace detail {
inline void require_continuum(const GridModel& g, const char* what) {
  if (g.mode != GridMode::ContinuumEmulation)
    throw std::invalid_argument(std::string(what) +
                                ": continuum emulation required");
}
}  // namespace detail

// Dilated Gaussian f_lambda(y) = (sqrt(2)/lambda)^{1/2} e^{-pi (y-c)^2/lambda^2},
// sampled on the centered grid and renormalized.
inline Signal gaussian_signal(const GridModel& g, double lambda,
                              double center = 0.0) {
  detail::require_continuum(g, "gaussian_signal");
  if (lambda <= 0.0) throw std::invalid_argument("gaussian: lambda > 0");
  VectorXcd v(g.n);
  double amp = std::sqrt(std::sqrt(2.0) / lambda);
  for (int j = 0; j < g.n; ++j) {
    double y = g.sample_coord(j) - center;
    v[j] = amp * std::exp(-kPi * y * y / (lambda * lambda));
  }
  return normalized(Signal(g, std::move(v)));
}

// Norm of the raw sampled standard Gaussian before renormalization;
// converges to 1 as the grid refines.
inline double gaussian_raw_norm(const GridModel& g, double lambda = 1.0) {
  detail::require_continuum(g, "gaussian_raw_norm");
  KahanSum s;
  double amp2 = std::sqrt(2.0) / lambda;
  for (int j = 0; j < g.n; ++j) {
    double y = g.sample_coord(j);
    s.add(amp2 * std::exp(-2.0 * kPi * y * y / (lambda * lambda)));
  }
  return std::sqrt(s.value() * g.delta());
}

// Hermite function phi_j, orthonormal for the e^{-pi t^2} normalization:
// phi_0(t) = 2^{1/4} e^{-pi t^2}, recurrence in x = sqrt(2 pi) t.
inline Signal hermite_signal(const GridModel& g, int j) {
  detail::require_continuum(g, "hermite_signal");
  if (j < 0) throw std::invalid_argument("hermite: index >= 0");
  if (j >= g.n / 4) throw std::invalid_argument("insufficient resolution");
  const int n = g.n;
  VectorXd prev = VectorXd::Zero(n), cur(n);
  for (int i = 0; i < n; ++i) {
    double t = g.sample_coord(i);
    cur[i] = std::pow(2.0, 0.25) * std::exp(-kPi * t * t);
  }
  for (int q = 0; q < j; ++q) {
    VectorXd next(n);
    for (int i = 0; i < n; ++i) {
      double x = std::sqrt(kTwoPi) * g.sample_coord(i);
      next[i] = x * std::sqrt(2.0 / (q + 1.0)) * cur[i] -
                std::sqrt(double(q) / (q + 1.0)) * prev[i];
    }
    prev.swap(cur);
    cur.swap(next);
  }
  return normalized(Signal(g, cur.cast<cplx>()));
}

inline Signal random_signal(const GridModel& g, std::uint64_t seed) {
  Rng rng(seed);
  VectorXcd v(g.n);
  for (int j = 0; j < g.n; ++j) v[j] = rng.normal_cplx();
  return normalized(Signal(g, std::move(v)));
}

struct SignalSpec {
  enum class Kind { Gaussian, Hermite, Random, Delta } kind = Kind::Gaussian;
  double lambda = 1.0;
  double center = 0.0;
  int index = 0;
  std::uint64_t seed = 1;
};

inline Signal special_signal(const GridModel& g, const SignalSpec& spec) {
  switch (spec.kind) {
    case SignalSpec::Kind::Gaussian:
      return gaussian_signal(g, spec.lambda, spec.center);
    case SignalSpec::Kind::Hermite:
      return hermite_signal(g, spec.index);
    case SignalSpec::Kind::Random:
      return random_signal(g, spec.seed);
    case SignalSpec::Kind::Delta: {
      Signal s = Signal::zero(g);
      s.data[g.wrap(spec.index)] = 1.0;
      return normalized(s);
    }
  }
  throw std::logic_error("special_signal: bad kind");
}

}  // namespace qhalab
