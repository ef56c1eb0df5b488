#pragma once

// The exact-identity suite: every algebraic identity the transform layer
// promises, evaluated on random inputs at a given exact-cyclic size. Each
// entry reports a residual that should sit at rounding level.

#include <string>
#include <vector>

#include "qhalab/operator_rep.hpp"
#include "qhalab/qha.hpp"

namespace qhalab {

struct IdentityResidual {
  std::string name;
  double residual;
};

inline OperatorWindow reflect_window(const OperatorWindow& S) {
  OperatorWindow out(S.grid, reflect_matrix(S.grid, S.matrix), S.structure);
  if (S.factored) {
    out.factored = true;
    out.id_coeff = S.id_coeff;
    for (const auto& t : S.terms) {
      Signal l(S.grid, t.left), r(S.grid, t.right);
      out.terms.push_back({t.weight, parity(l).data, parity(r).data});
    }
  }
  detail::verify_flags(out);
  return out;
}

inline OperatorWindow random_window(const GridModel& g, std::uint64_t seed,
                                    bool hermitian = false) {
  Rng rng(seed);
  MatrixXcd M(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) M(i, j) = rng.normal_cplx();
  if (hermitian) M = MatrixXcd(0.5 * (M + M.adjoint().eval()));
  OperatorWindow w(g, std::move(M), WindowStructure::Generic);
  detail::verify_flags(w);
  return w;
}

inline std::vector<IdentityResidual> run_identity_suite(int n,
                                                        std::uint64_t seed = 1) {
  GridModel g(n, GridMode::ExactCyclic);
  std::vector<IdentityResidual> out;
  Signal f = random_signal(g, seed), h = random_signal(g, seed + 1);
  OperatorWindow T = random_window(g, seed + 2);
  OperatorWindow S = random_window(g, seed + 3);

  {  // Moyal resolution at the spectrogram level
    PhaseFunction V = stft(f, h);
    KahanSum s;
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) s.add(std::norm(V.values(m, k)));
    double lhs = s.value() * g.phase_weight();
    double rhs = norm(f) * norm(f) * norm(h) * norm(h);
    out.push_back({"moyal-spectrogram-resolution", std::abs(lhs - rhs)});
  }
  {  // Fourier-Wigner Parseval
    PhaseFunction G = fourier_wigner(S);
    double lhs = std::sqrt(G.values.squaredNorm() * g.phase_weight());
    out.push_back({"fourier-wigner-parseval",
                   std::abs(lhs - schatten_norm(S.matrix, 2.0))});
  }
  {  // Weyl round trip
    OperatorWindow back = weyl_quantize(g, weyl_symbol(S));
    out.push_back({"weyl-round-trip", (back.matrix - S.matrix).cwiseAbs().maxCoeff()});
  }
  {  // convolution decoupling under the symplectic Fourier transform
    PhaseFunction lhs = symplectic_fourier(op_convolution(T, S));
    PhaseFunction a = fourier_wigner(T), b = fourier_wigner(S);
    MatrixXcd rhs = a.values.array() * b.values.array();
    out.push_back({"symplectic-decoupling",
                   (lhs.values - rhs).cwiseAbs().maxCoeff()});
  }
  {  // rank-one convolution against the Cohen transform
    OperatorWindow fxf(g, rank_one_matrix(g, f.data, f.data),
                       WindowStructure::RankOne);
    PhaseFunction lhs = op_convolution(fxf, reflect_window(S));
    PhaseFunction rhs = cohen_transform(S, f);
    out.push_back({"rank-one-convolution-cohen",
                   (lhs.values - rhs.values).cwiseAbs().maxCoeff()});
  }
  {  // operator convolution equals Weyl-symbol convolution
    PhaseFunction lhs = op_convolution(T, S);
    PhaseFunction rhs = field_convolution(weyl_symbol(T), weyl_symbol(S));
    out.push_back({"weyl-symbol-convolution",
                   (lhs.values - rhs.values).cwiseAbs().maxCoeff()});
  }
  {  // polarized transform: isometry, orthogonality, reconstruction
    OperatorWindow Sn = S, Wn = random_window(g, seed + 4);
    Sn.matrix /= Sn.matrix.norm();
    Wn.matrix /= Wn.matrix.norm();
    OperatorWindow V = random_window(g, seed + 5);
    DoublePhaseFunction qs = polarized_cohen(T, Sn);
    out.push_back({"polarized-isometry",
                   std::abs(qs.l2_norm() - T.matrix.norm())});
    DoublePhaseFunction qw = polarized_cohen(V, Wn);
    const double w2 = g.phase_weight() * g.phase_weight();
    cplx pair = (qs.values.array() * qw.values.array().conjugate()).sum() * w2;
    cplx tv = (T.matrix.array() * V.matrix.array().conjugate()).sum();
    cplx sw = (Sn.matrix.array() * Wn.matrix.array().conjugate()).sum();
    out.push_back({"polarized-orthogonality", std::abs(pair - tv * std::conj(sw))});
    MatrixXcd rec = polarized_adjoint(g, Sn, qs);
    out.push_back({"polarized-reconstruction",
                   (rec - T.matrix).cwiseAbs().maxCoeff()});
  }
  return out;
}

}  // namespace qhalab
