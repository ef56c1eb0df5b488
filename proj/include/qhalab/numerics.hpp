#pragma once

// Scalar numerics shared across the library: a deterministic RNG (stable
// bit-stream across platforms, unlike std::normal_distribution), compensated
// summation, adaptive quadrature and the lower incomplete gamma function.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhalab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// splitmix64; passes through every 64-bit state exactly once.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Box-Muller, one value per call (the sine partner is cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  cplx normal_cplx() { return {normal(), normal()}; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Neumaier compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Adaptive Simpson on [a,b].
namespace detail {
template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm,
                    double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}
template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa,
                            double fm, double fb, double whole, double eps,
                            int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson_step(f, a, m, fa, flm, fm);
  double right = simpson_step(f, m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps,
                              depth - 1);
}
}  // namespace detail

template <class F>
double adaptive_simpson(const F& f, double a, double b, double eps = 1e-13,
                        int max_depth = 40) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = detail::simpson_step(f, a, b, fa, fm, fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps,
                                      max_depth);
}

// 32-node Gauss-Legendre on [a,b], composite over nseg segments.
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int nseg = 1);

namespace detail {
// Nodes/weights for 16-point Gauss-Legendre on [-1,1] (symmetric half).
inline const double kGL16x[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
inline const double kGL16w[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};
}  // namespace detail

inline double gauss_legendre16(const std::function<double(double)>& f,
                               double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  KahanSum s;
  for (int i = 0; i < 8; ++i) {
    s.add(detail::kGL16w[i] * f(c + h * detail::kGL16x[i]));
    s.add(detail::kGL16w[i] * f(c - h * detail::kGL16x[i]));
  }
  return h * s.value();
}

inline double gauss_legendre(const std::function<double(double)>& f, double a,
                             double b, int nseg) {
  KahanSum s;
  double h = (b - a) / nseg;
  for (int k = 0; k < nseg; ++k)
    s.add(gauss_legendre16(f, a + k * h, a + (k + 1) * h));
  return s.value();
}

// Lower incomplete gamma gamma(s,x) = int_0^x t^{s-1} e^{-t} dt.
// Series for x < s+1, Lentz continued fraction otherwise.
inline double lower_incomplete_gamma(double s, double x) {
  if (x < 0.0 || s <= 0.0) throw std::domain_error("lower_incomplete_gamma");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(s);
  if (x < s + 1.0) {
    double term = 1.0 / s, sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= x / (s + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + s * std::log(x));
  }
  // Q(s,x) via continued fraction, then gamma = Gamma(s)(1-Q).
  const double tiny = 1e-300;
  double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-17) break;
  }
  double q = std::exp(-x + s * std::log(x) - lg) * h;
  return std::exp(lg) * (1.0 - q);
}

// Laguerre polynomial L_j (L_j(0) = 1), three-term recurrence.
inline double laguerre(int j, double x) {
  if (j == 0) return 1.0;
  double lm1 = 1.0, l = 1.0 - x;
  for (int k = 1; k < j; ++k) {
    double lp1 = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

// All floating output goes through this: 12 significant digits, trailing
// zeros kept.
inline std::string format12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.12g", x);
  return buf;
}

}  // namespace qhalab
