#pragma once

// Phase-space fields and the matrix-level transform engine.
//
// Conventions, fixed once and used everywhere:
//   integral over phase space  = (1/n) * sum over the n x n grid
//   F_W(S)(z)   = e^{-i pi x.xi} tr(pi(-z) S),  x.xi = m~ k~ / n (centered)
//   F_sigma F(z)= (1/n) sum_u F(u) e^{-2 pi i [u,z]/n},  [u,z] = m_u k_z - k_u m_z
//   a_S         = F_sigma(F_W(S)),  quantization is the exact inverse chain.
// With these constants F_W is a Hilbert-Schmidt isometry onto L^2(dz),
// F_sigma is unitary and involutive, and F_sigma(T*S) = F_W(T) F_W(S) holds
// to rounding error. The half-phase uses the centered index representatives;
// only its square enters the decoupling identity, so the representative
// choice is immaterial there.

#include <vector>

#include "qhalab/fft.hpp"
#include "qhalab/grid.hpp"
#include "qhalab/numerics.hpp"
#include "qhalab/parallel.hpp"
#include "qhalab/region.hpp"
#include "qhalab/signal.hpp"

namespace qhalab {

using Eigen::MatrixXcd;

struct PhaseFunction {
  GridModel grid;
  MatrixXcd values;  // values(m, k)

  PhaseFunction() = default;
  PhaseFunction(const GridModel& g, MatrixXcd v) : grid(g), values(std::move(v)) {
    if (values.rows() != grid.n || values.cols() != grid.n)
      throw std::invalid_argument("PhaseFunction: field must be n x n");
  }
  static PhaseFunction zero(const GridModel& g) {
    return PhaseFunction(g, MatrixXcd::Zero(g.n, g.n));
  }
  cplx at(const PhasePoint& z) const {
    return values(grid.wrap(z.m), grid.wrap(z.k));
  }
};

// L^p norm with the phase-space measure; p = infinity as max modulus.
inline double lp_norm(const PhaseFunction& F, double p) {
  if (std::isinf(p)) return F.values.cwiseAbs().maxCoeff();
  KahanSum s;
  for (int m = 0; m < F.grid.n; ++m)
    for (int k = 0; k < F.grid.n; ++k)
      s.add(std::pow(std::abs(F.values(m, k)), p));
  return std::pow(s.value() * F.grid.phase_weight(), 1.0 / p);
}

inline double lp_norm_on(const PhaseFunction& F, const Region& omega, double p) {
  require_same_grid(F.grid, omega.grid, "lp_norm_on");
  if (std::isinf(p)) {
    double mx = 0;
    for (int m = 0; m < F.grid.n; ++m)
      for (int k = 0; k < F.grid.n; ++k)
        if (omega.contains(m, k)) mx = std::max(mx, std::abs(F.values(m, k)));
    return mx;
  }
  KahanSum s;
  for (int m = 0; m < F.grid.n; ++m)
    for (int k = 0; k < F.grid.n; ++k)
      if (omega.contains(m, k)) s.add(std::pow(std::abs(F.values(m, k)), p));
  return std::pow(s.value() * F.grid.phase_weight(), 1.0 / p);
}

inline double l2_inner_weighted(const PhaseFunction& A, const PhaseFunction& B,
                                double weight) {
  return ((A.values.array() * B.values.array().conjugate()).sum() * weight)
      .real();
}

// --- elementary matrices -----------------------------------------------------

inline MatrixXcd tf_shift_matrix(const GridModel& g, const PhasePoint& z) {
  const int n = g.n, m = g.wrap(z.m), k = g.wrap(z.k);
  MatrixXcd M = MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double ph = kTwoPi * double(k) * double(j) / double(n);
    M(j, g.wrap(j - m)) = cplx(std::cos(ph), std::sin(ph));
  }
  return M;
}

inline MatrixXcd parity_matrix(const GridModel& g) {
  MatrixXcd M = MatrixXcd::Zero(g.n, g.n);
  for (int j = 0; j < g.n; ++j) M(j, g.wrap(-j)) = 1.0;
  return M;
}

// alpha_z(S) = pi(z) S pi(z)^*;  entries e^{2 pi i k(j-l)/n} S(j-m, l-m).
inline MatrixXcd alpha_shift(const GridModel& g, const MatrixXcd& S,
                             const PhasePoint& z) {
  const int n = g.n, m = g.wrap(z.m), k = g.wrap(z.k);
  MatrixXcd out(n, n);
  std::vector<cplx> ph(n);
  for (int j = 0; j < n; ++j) {
    double a = kTwoPi * double(k) * double(j) / double(n);
    ph[j] = cplx(std::cos(a), std::sin(a));
  }
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      out(j, l) = ph[j] * std::conj(ph[l]) * S(g.wrap(j - m), g.wrap(l - m));
  return out;
}

// operator reflection: (P S P)(j,l) = S(-j, -l)
inline MatrixXcd reflect_matrix(const GridModel& g, const MatrixXcd& S) {
  const int n = g.n;
  MatrixXcd out(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) out(j, l) = S(g.wrap(-j), g.wrap(-l));
  return out;
}

// half-phase e^{-i pi m~ k~ / n} with centered representatives
inline cplx half_phase(const GridModel& g, int m, int k) {
  double a = -kPi * phase_xxi(g, {m, k});
  return cplx(std::cos(a), std::sin(a));
}

// --- STFT / ambiguity --------------------------------------------------------

// V_g f(m,k) = <f, pi(m,k) g> ; row m is a DFT over j of f_j conj(g_{j-m}).
inline PhaseFunction stft(const Signal& f, const Signal& g) {
  require_same_grid(f.grid, g.grid, "stft");
  const GridModel& gr = f.grid;
  const int n = gr.n;
  MatrixXcd out(n, n);
  parallel_for(0, n, [&](long m) {
    VectorXcd h(n);
    for (int j = 0; j < n; ++j)
      h[j] = f.data[j] * std::conj(g.data[gr.wrap(j - int(m))]);
    out.row(m) = (gr.delta() * dft(h)).transpose();
  });
  return PhaseFunction(gr, std::move(out));
}

// Af(z) = <f, pi(z) f>
inline PhaseFunction ambiguity(const Signal& f) { return stft(f, f); }

// sum_z F(z) pi(z) u   (no measure weight; callers supply their own)
inline Signal gabor_synthesis(const PhaseFunction& F, const Signal& u) {
  require_same_grid(F.grid, u.grid, "gabor_synthesis");
  const GridModel& g = F.grid;
  const int n = g.n;
  VectorXcd acc = VectorXcd::Zero(n);
  for (int m = 0; m < n; ++m) {
    VectorXcd row = F.values.row(m).transpose();
    VectorXcd s = double(n) * idft(row);  // s[j] = sum_k F(m,k) e^{2pi i kj/n}
    for (int j = 0; j < n; ++j) acc[j] += s[j] * u.data[g.wrap(j - m)];
  }
  return Signal(g, std::move(acc));
}

// --- trace fields ------------------------------------------------------------

// field(z) = tr(T alpha_z(W)) for all z, via per-diagonal FFT correlations.
inline PhaseFunction trace_field(const GridModel& g, const MatrixXcd& T,
                                 const MatrixXcd& W) {
  const int n = g.n;
  // C(a, m) = sum_j T(j, j+a) W(j-m+a, j-m)
  MatrixXcd C(n, n);
  parallel_for(0, n, [&](long a) {
    VectorXcd dT(n), dWrev(n);
    for (int j = 0; j < n; ++j) dT[j] = T(j, g.wrap(j + int(a)));
    // dW_a[u] = W(u+a, u); need y'[i] = dW_a[-i] for the convolution form
    for (int i = 0; i < n; ++i) {
      int u = g.wrap(-i);
      dWrev[i] = W(g.wrap(u + int(a)), u);
    }
    C.row(a) = cyclic_convolution(dT, dWrev).transpose();
  });
  MatrixXcd out(n, n);
  parallel_for(0, n, [&](long m) {
    VectorXcd col = C.col(m);
    out.row(m) = (double(n) * idft(col)).transpose();
  });
  return PhaseFunction(g, std::move(out));
}

// Pointwise trace field with long-double accumulation (deep-tail accuracy).
inline cplx trace_field_at(const GridModel& g, const MatrixXcd& T,
                           const MatrixXcd& W, const PhasePoint& z) {
  const int n = g.n, m = g.wrap(z.m), k = g.wrap(z.k);
  long double re = 0.0L, im = 0.0L;
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      long long q = 1LL * k * (l - j);  // reduced mod n before the trig call
      double a = kTwoPi * double(((q % n) + n) % n) / double(n);
      cplx ph(std::cos(a), std::sin(a));
      cplx v = T(j, l) * ph * W(g.wrap(l - m), g.wrap(j - m));
      re += v.real();
      im += v.imag();
    }
  }
  return {double(re), double(im)};
}

// --- operator Fourier transforms ----------------------------------------------

// F_W(S)(m,k) = half_phase * sum_j S(j+m, j) e^{-2 pi i k j / n}
inline PhaseFunction fourier_wigner(const GridModel& g, const MatrixXcd& S) {
  const int n = g.n;
  MatrixXcd out(n, n);
  parallel_for(0, n, [&](long m) {
    VectorXcd diag(n);
    for (int j = 0; j < n; ++j) diag[j] = S(g.wrap(j + int(m)), j);
    VectorXcd row = dft(diag);
    for (int k = 0; k < n; ++k) out(m, k) = half_phase(g, int(m), k) * row[k];
  });
  return PhaseFunction(g, std::move(out));
}

inline MatrixXcd inverse_fourier_wigner(const GridModel& g,
                                        const PhaseFunction& G) {
  require_same_grid(g, G.grid, "inverse_fourier_wigner");
  const int n = g.n;
  MatrixXcd S = MatrixXcd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    VectorXcd c(n);
    for (int k = 0; k < n; ++k) c[k] = G.values(m, k) * half_phase(g, m, k);
    VectorXcd inner = idft(c);  // (1/n) sum_k c_k e^{2 pi i k j/n}
    for (int j = 0; j < n; ++j) S(j, g.wrap(j - m)) += inner[j];
  }
  return S;
}

// F_sigma F(z) = (1/n) sum_u F(u) e^{-2 pi i (m_u k_z - k_u m_z)/n}; involutive.
inline PhaseFunction symplectic_fourier(const PhaseFunction& F) {
  const GridModel& g = F.grid;
  const int n = g.n;
  MatrixXcd A(n, n);  // A(k_z, k_u) = sum_{m_u} F(m_u, k_u) e^{-2pi i m_u k_z/n}
  for (int ku = 0; ku < n; ++ku) {
    VectorXcd col = F.values.col(ku);
    A.col(ku) = dft(col);
  }
  MatrixXcd out(n, n);
  for (int kz = 0; kz < n; ++kz) {
    VectorXcd row = A.row(kz).transpose();
    out.col(kz) = idft(row);  // out(m_z, k_z)
  }
  return PhaseFunction(g, std::move(out));
}

inline PhaseFunction weyl_symbol_of(const GridModel& g, const MatrixXcd& S) {
  return symplectic_fourier(fourier_wigner(g, S));
}

inline MatrixXcd weyl_quantize_matrix(const GridModel& g,
                                      const PhaseFunction& a) {
  return inverse_fourier_wigner(g, symplectic_fourier(a));
}

// F * S = sum_z phase_weight F(z) alpha_z(S); assembled per diagonal by FFT.
inline MatrixXcd fn_op_convolution_matrix(const PhaseFunction& F,
                                          const MatrixXcd& S) {
  const GridModel& g = F.grid;
  const int n = g.n;
  const double w = g.phase_weight();
  // P(m, a) = w * sum_k F(m,k) e^{2 pi i k a / n} = w * n * idft_k(F(m,.))(a)
  MatrixXcd P(n, n);
  for (int m = 0; m < n; ++m) {
    VectorXcd row = F.values.row(m).transpose();
    P.row(m) = (w * double(n) * idft(row)).transpose();
  }
  MatrixXcd H = MatrixXcd::Zero(n, n);
  MatrixXcd bands(n, n);  // bands(a, l) = H(l+a, l)
  parallel_for(0, n, [&](long a) {
    VectorXcd fa = P.col(a);
    VectorXcd dS(n);
    for (int u = 0; u < n; ++u) dS[u] = S(g.wrap(u + int(a)), u);
    bands.row(a) = cyclic_convolution(fa, dS).transpose();
  });
  for (int a = 0; a < n; ++a)
    for (int l = 0; l < n; ++l) H(g.wrap(l + a), l) = bands(a, l);
  return H;
}

// --- misc matrix helpers ------------------------------------------------------

inline double frobenius(const MatrixXcd& M) { return M.norm(); }

// operator norm by power iteration on S^H S
inline double operator_norm_estimate(const MatrixXcd& S, int iters = 80,
                                     std::uint64_t seed = 12345) {
  Rng rng(seed);
  VectorXcd v(S.cols());
  for (int i = 0; i < v.size(); ++i) v[i] = rng.normal_cplx();
  v.normalize();
  double sigma = 0;
  for (int it = 0; it < iters; ++it) {
    VectorXcd u = S * v;
    v = S.adjoint() * u;
    double nv = v.norm();
    if (nv == 0) return 0;
    v /= nv;
    sigma = std::sqrt(nv);
  }
  return sigma;
}

}  // namespace qhalab
