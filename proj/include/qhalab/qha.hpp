#pragma once

// Named quantum-harmonic-analysis operations on windows and signals:
// Cohen transform, ambiguity, operator convolutions, Fourier-Wigner /
// symplectic Fourier transforms and Weyl symbols.

#include "qhalab/phase_function.hpp"
#include "qhalab/window.hpp"

namespace qhalab {

// --- Cohen transform Q_S(f,g)(z) = <alpha_z(S) f, g> --------------------------

namespace detail {

inline PhaseFunction cohen_factored(const OperatorWindow& S, const Signal& f,
                                    const Signal& g) {
  PhaseFunction out = PhaseFunction::zero(S.grid);
  if (S.id_coeff != cplx(0.0, 0.0))
    out.values.array() += S.id_coeff * inner(f, g);
  for (const auto& t : S.terms) {
    Signal l(S.grid, t.left), r(S.grid, t.right);
    PhaseFunction vf = stft(f, r);   // V_r f
    PhaseFunction vg = stft(g, l);   // V_l g
    out.values.array() +=
        t.weight * vf.values.array() * vg.values.array().conjugate();
  }
  return out;
}

inline PhaseFunction cohen_shift_window(const OperatorWindow& S,
                                        const Signal& f, const Signal& g) {
  // Q_{pi(z0)}(f,g)(z) = e^{2 pi i [z0,z]/n} <pi(z0) f, g>
  const GridModel& gr = S.grid;
  cplx base = inner(tf_shift(f, S.shift_point), g);
  PhaseFunction out = PhaseFunction::zero(gr);
  const int m0 = S.shift_point.m, k0 = S.shift_point.k;
  for (int m = 0; m < gr.n; ++m)
    for (int k = 0; k < gr.n; ++k) {
      double a = kTwoPi *
                 (double(m0) * double(k) - double(k0) * double(m)) /
                 double(gr.n);
      out.values(m, k) = base * cplx(std::cos(a), std::sin(a));
    }
  return out;
}

}  // namespace detail

inline PhaseFunction cohen_transform(const OperatorWindow& S, const Signal& f,
                                     const Signal& g) {
  require_same_grid(S.grid, f.grid, "cohen_transform");
  require_same_grid(S.grid, g.grid, "cohen_transform");
  if (S.structure == WindowStructure::Shift)
    return detail::cohen_shift_window(S, f, g);
  if (S.factored) return detail::cohen_factored(S, f, g);
  return trace_field(S.grid, rank_one_matrix(S.grid, f.data, g.data), S.matrix);
}

inline PhaseFunction cohen_transform(const OperatorWindow& S, const Signal& f) {
  return cohen_transform(S, f, f);
}

// Pointwise Cohen transform with long-double accumulation. Used where deep
// Gaussian tails are compared in relative error; dispatches on structure.
inline cplx cohen_at(const OperatorWindow& S, const Signal& f, const Signal& g,
                     const PhasePoint& z) {
  const GridModel& gr = S.grid;
  const int n = gr.n, m = gr.wrap(z.m), k = gr.wrap(z.k);
  // phases are reduced mod n in exact integer arithmetic before the trig
  // call; unreduced arguments cost ~eps per radian, which matters in the
  // deep Gaussian tails this path exists for
  auto unit = [&](long long q) {
    double a = kTwoPi * double(((q % n) + n) % n) / double(n);
    return cplx(std::cos(a), std::sin(a));
  };
  if (S.structure == WindowStructure::ParityMultiple) {
    // coeff * delta * sum_j f[m-j] conj(g[m+j]) e^{2 pi i (2kj)/n}
    cplx coeff = S.matrix(0, 0);
    long double re = 0.0L, im = 0.0L;
    for (int j = 0; j < n; ++j) {
      cplx t = f.data[gr.wrap(m - j)] * std::conj(g.data[gr.wrap(m + j)]) *
               unit(2LL * k * j);
      re += t.real();
      im += t.imag();
    }
    return coeff * cplx(double(re), double(im)) * gr.delta();
  }
  if (S.factored) {
    long double re = 0.0L, im = 0.0L;
    if (S.id_coeff != cplx(0.0, 0.0)) {
      cplx t = S.id_coeff * inner(f, g);
      re += t.real();
      im += t.imag();
    }
    for (const auto& term : S.terms) {
      // <f, pi(z) r> and conj(<g, pi(z) l>), accumulated in long double
      long double ar = 0.0L, ai = 0.0L, br = 0.0L, bi = 0.0L;
      for (int j = 0; j < n; ++j) {
        cplx e = unit(-1LL * k * j);
        cplx x = f.data[j] * e * std::conj(term.right[gr.wrap(j - m)]);
        cplx y = g.data[j] * e * std::conj(term.left[gr.wrap(j - m)]);
        ar += x.real();
        ai += x.imag();
        br += y.real();
        bi += y.imag();
      }
      cplx vf{double(ar), double(ai)}, vg{double(br), double(bi)};
      cplx t = term.weight * vf * std::conj(vg) * gr.delta() * gr.delta();
      re += t.real();
      im += t.imag();
    }
    return {double(re), double(im)};
  }
  return trace_field_at(gr, rank_one_matrix(gr, f.data, g.data), S.matrix, z);
}

// Cohen transform restricted to a region; returned in region point order.
inline VectorXcd cohen_on_region(const OperatorWindow& S, const Signal& f,
                                 const Signal& g, const Region& omega) {
  require_same_grid(S.grid, omega.grid, "cohen_on_region");
  const GridModel& gr = S.grid;
  auto pts = omega.points();
  VectorXcd out(pts.size());
  if (S.structure == WindowStructure::Shift) {
    cplx base = inner(tf_shift(f, S.shift_point), g);
    const int m0 = S.shift_point.m, k0 = S.shift_point.k;
    for (size_t i = 0; i < pts.size(); ++i) {
      double a = kTwoPi *
                 (double(m0) * pts[i].k - double(k0) * pts[i].m) /
                 double(gr.n);
      out[i] = base * cplx(std::cos(a), std::sin(a));
    }
    return out;
  }
  if (!S.factored && gr.n <= 256) {
    PhaseFunction full = cohen_transform(S, f, g);
    for (size_t i = 0; i < pts.size(); ++i) out[i] = full.at(pts[i]);
    return out;
  }
  if (S.factored) {
    // per-row STFT evaluation on the rows the region actually touches
    std::vector<char> row_used(gr.n, 0);
    for (const auto& z : pts) row_used[z.m] = 1;
    MatrixXcd field = MatrixXcd::Zero(gr.n, gr.n);
    cplx base = S.id_coeff * inner(f, g);
    std::vector<int> rows;
    for (int m = 0; m < gr.n; ++m)
      if (row_used[m]) rows.push_back(m);
    parallel_for(0, long(rows.size()), [&](long ri) {
      int m = rows[ri];
      VectorXcd acc = VectorXcd::Constant(gr.n, base);
      for (const auto& t : S.terms) {
        VectorXcd hf(gr.n), hg(gr.n);
        for (int j = 0; j < gr.n; ++j) {
          hf[j] = f.data[j] * std::conj(t.right[gr.wrap(j - m)]);
          hg[j] = g.data[j] * std::conj(t.left[gr.wrap(j - m)]);
        }
        VectorXcd vf = gr.delta() * dft(hf), vg = gr.delta() * dft(hg);
        acc.array() += t.weight * vf.array() * vg.array().conjugate();
      }
      field.row(m) = acc.transpose();
    });
    for (size_t i = 0; i < pts.size(); ++i)
      out[i] = field(pts[i].m, pts[i].k);
    return out;
  }
  PhaseFunction full = cohen_transform(S, f, g);
  for (size_t i = 0; i < pts.size(); ++i) out[i] = full.at(pts[i]);
  return out;
}

// --- operator convolutions -----------------------------------------------------

// T * S (z) = tr(T alpha_z(S-check)), commutative, positivity-preserving.
inline PhaseFunction op_convolution(const OperatorWindow& T,
                                    const OperatorWindow& S) {
  require_same_grid(T.grid, S.grid, "op_convolution");
  return trace_field(T.grid, T.matrix, reflect_matrix(T.grid, S.matrix));
}

// F * S = integral of F(z) alpha_z(S) dz, returned with verified flags.
inline OperatorWindow fn_op_convolution(const PhaseFunction& F,
                                        const OperatorWindow& S) {
  require_same_grid(F.grid, S.grid, "fn_op_convolution");
  OperatorWindow out(S.grid, fn_op_convolution_matrix(F, S.matrix),
                     WindowStructure::Generic);
  detail::verify_flags(out);
  return out;
}

// --- transforms on windows ------------------------------------------------------

inline PhaseFunction fourier_wigner(const OperatorWindow& S) {
  return fourier_wigner(S.grid, S.matrix);
}

inline OperatorWindow inverse_fourier_wigner_window(const GridModel& g,
                                                    const PhaseFunction& G) {
  OperatorWindow w(g, inverse_fourier_wigner(g, G),
                   WindowStructure::WeylQuantized);
  detail::verify_flags(w);
  return w;
}

inline PhaseFunction weyl_symbol(const OperatorWindow& S) {
  return weyl_symbol_of(S.grid, S.matrix);
}

inline OperatorWindow weyl_quantize(const GridModel& g, const PhaseFunction& a) {
  OperatorWindow w(g, weyl_quantize_matrix(g, a), WindowStructure::WeylQuantized);
  detail::verify_flags(w);
  return w;
}

// discrete convolution of two phase functions with the phase-space measure:
// (A * B)(z) = (1/n) sum_u A(u) B(z - u); matches op_convolution of the
// corresponding Weyl quantizations.
inline PhaseFunction field_convolution(const PhaseFunction& A,
                                       const PhaseFunction& B) {
  require_same_grid(A.grid, B.grid, "field_convolution");
  const int n = A.grid.n;
  // 2-D cyclic convolution via row/column FFTs
  MatrixXcd fa(n, n), fb(n, n);
  for (int m = 0; m < n; ++m) {
    fa.row(m) = dft(VectorXcd(A.values.row(m).transpose())).transpose();
    fb.row(m) = dft(VectorXcd(B.values.row(m).transpose())).transpose();
  }
  for (int k = 0; k < n; ++k) {
    fa.col(k) = dft(VectorXcd(fa.col(k)));
    fb.col(k) = dft(VectorXcd(fb.col(k)));
  }
  fa.array() *= fb.array();
  for (int m = 0; m < n; ++m)
    fa.row(m) = idft(VectorXcd(fa.row(m).transpose())).transpose();
  for (int k = 0; k < n; ++k) fa.col(k) = idft(VectorXcd(fa.col(k)));
  fa *= A.grid.phase_weight();
  return PhaseFunction(A.grid, std::move(fa));
}

}  // namespace qhalab
