#pragma once

// Closed-form gap machinery for the parity (Wigner-type) window on balls:
// the cosine moment constant C_p, the incomplete-gamma profiles A_d / F_d,
// the crossing constant m_d, ball verdicts and the dimension threshold p_d.
//
// All quantities here are scalar and dimension-parametric; they certify a
// strict gap between the optimal and the essential concentration levels
// without touching the grid.

#include <string>
#include <vector>

#include "qhalab/numerics.hpp"

namespace qhalab {

// C_p = ((1/2pi) int_0^{2pi} |cos t|^p dt)^{1/p}, computed by quadrature.
inline double cosine_moment_cp_pow_p(double p) {
  if (p < 1.0) throw std::invalid_argument("cosine_moment: p >= 1 required");
  // |cos|^p has period pi and is symmetric about pi/2
  double integral =
      adaptive_simpson([p](double t) { return std::pow(std::abs(std::cos(t)), p); },
                       0.0, kPi / 2.0, 1e-15);
  return integral * 4.0 / kTwoPi;
}

inline double cosine_moment_cp(double p) {
  return std::pow(cosine_moment_cp_pow_p(p), 1.0 / p);
}

// Gamma-ratio closed form for C_p^p.
inline double cosine_moment_cp_pow_p_closed(double p) {
  return std::exp(std::lgamma((p + 1.0) / 2.0) - std::lgamma((p + 2.0) / 2.0)) /
         std::sqrt(kPi);
}

struct GapConstants {
  double p = 2.0;
  int d = 1;
  double c_p = 0.0;
  double c_p_pow_p = 0.0;
  double m_d = 0.0;
  double l_pd = 0.0;  // 2^d (2p)^{-d/p}, the Gaussian L^p level
};

// A_d(x) = d gamma(d,x) / x^d (limit 1 at 0), F_d(x) = gamma(d,x)/Gamma(d).
inline double profile_A(int d, double x) {
  if (x <= 0.0) return 1.0;
  return d * lower_incomplete_gamma(d, x) / std::pow(x, d);
}
inline double profile_F(int d, double x) {
  if (x <= 0.0) return 0.0;
  return lower_incomplete_gamma(d, x) / std::tgamma(double(d));
}

struct GapProfiles {
  double gamma_lower = 0.0;
  double A_d = 1.0;
  double F_d = 0.0;
  double m_d = 0.0;
};

// m_d = inf_x max{A_d, F_d}; the infimum sits at the crossing x = (d!)^{1/d},
// and a golden-section minimization must confirm the closed form.
inline double crossing_m_d(int d) {
  double xstar = std::pow(std::tgamma(double(d) + 1.0), 1.0 / d);
  return profile_F(d, xstar);
}

inline double minimized_m_d(int d) {
  auto fmax = [d](double x) { return std::max(profile_A(d, x), profile_F(d, x)); };
  double a = 1e-8, b = 4.0 * d + 16.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = fmax(x1), f2 = fmax(x2);
  for (int it = 0; it < 300 && (b - a) > 1e-12; ++it) {
    if (f1 > f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = fmax(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = fmax(x1);
    }
  }
  return fmax(0.5 * (a + b));
}

inline GapProfiles gap_constants(int d, double x) {
  if (d < 1) throw std::invalid_argument("gap_constants: d >= 1");
  if (x < 0.0) throw std::invalid_argument("gap_constants: x >= 0");
  GapProfiles g;
  g.gamma_lower = x > 0.0 ? lower_incomplete_gamma(d, x) : 0.0;
  g.A_d = profile_A(d, x);
  g.F_d = profile_F(d, x);
  g.m_d = crossing_m_d(d);
  return g;
}

inline GapConstants make_gap_constants(int d, double p) {
  GapConstants c;
  c.p = p;
  c.d = d;
  c.c_p_pow_p = cosine_moment_cp_pow_p(p);
  c.c_p = std::pow(c.c_p_pow_p, 1.0 / p);
  c.m_d = crossing_m_d(d);
  c.l_pd = std::pow(2.0, d) * std::pow(2.0 * p, -double(d) / p);
  return c;
}

// --- ball verdicts -------------------------------------------------------------

struct BallVerdict {
  int d = 1;
  double p = 2.0;
  double R = 1.0;
  double x = 0.0;  // 2 pi p R^2
  double A_d = 0.0;
  double F_d = 0.0;
  double c_p_pow_p = 0.0;
  double m_d = 0.0;
  double gauss_floor = 0.0;  // e^{-2 pi R^2}, the small-set level
  bool certified = false;
  std::string criterion;  // "cpmd-global" | "gaussian-mass" | "small-set" | "uncertified"
};

// Criteria tried in order: the global C_p^p < m_d test, the captured
// Gaussian mass test max{A_d, F_d} > C_p^p, and the small-set test
// e^{-2 pi R^2} > C_p.
inline BallVerdict wigner_ball_verdict(int d, double p, double R) {
  if (d < 1 || p < 2.0 || R <= 0.0)
    throw std::invalid_argument("wigner_ball_verdict: need d>=1, p>=2, R>0");
  BallVerdict v;
  v.d = d;
  v.p = p;
  v.R = R;
  v.x = kTwoPi * p * R * R;
  v.A_d = profile_A(d, v.x);
  v.F_d = profile_F(d, v.x);
  v.c_p_pow_p = cosine_moment_cp_pow_p(p);
  v.m_d = crossing_m_d(d);
  v.gauss_floor = std::exp(-kTwoPi * R * R);
  if (v.c_p_pow_p < v.m_d) {
    v.certified = true;
    v.criterion = "cpmd-global";
  } else if (std::max(v.A_d, v.F_d) > v.c_p_pow_p) {
    v.certified = true;
    v.criterion = "gaussian-mass";
  } else if (v.gauss_floor > std::pow(v.c_p_pow_p, 1.0 / p)) {
    v.certified = true;
    v.criterion = "small-set";
  } else {
    v.criterion = "uncertified";
  }
  return v;
}

// Smallest p >= 2 with C_p^p < m_d (bisection; C_p^p decreases in p).
inline double p_threshold(int d) {
  if (d < 1) throw std::invalid_argument("p_threshold: d >= 1");
  double md = crossing_m_d(d);
  if (cosine_moment_cp_pow_p(2.0) < md) return 2.0;
  double lo = 2.0, hi = 4.0;
  while (cosine_moment_cp_pow_p(hi) >= md) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("p_threshold: no finite threshold");
  }
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    if (cosine_moment_cp_pow_p(mid) < md)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qhalab
