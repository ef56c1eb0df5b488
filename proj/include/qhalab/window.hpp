#pragma once

// Operator windows: the catalog of Cohen-class window operators, Schatten
// norms, and the numerical radius.
//
// A window stores a dense n x n matrix plus structural metadata. Structured
// kinds additionally carry a factored description (identity coefficient and
// a list of rank-one terms) used by the fast transform paths. Flags are
// verified numerically at construction, never declared.

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qhalab/phase_function.hpp"

namespace qhalab {

enum class WindowStructure {
  RankOne,
  ParityMultiple,
  WeylQuantized,
  DiagonalSeries,
  Shift,
  IdentityPlusCompact,
  Generic,
};

inline const char* to_string(WindowStructure s) {
  switch (s) {
    case WindowStructure::RankOne: return "rank-one";
    case WindowStructure::ParityMultiple: return "parity-multiple";
    case WindowStructure::WeylQuantized: return "weyl-quantized";
    case WindowStructure::DiagonalSeries: return "diagonal-series";
    case WindowStructure::Shift: return "shift";
    case WindowStructure::IdentityPlusCompact: return "identity-plus-compact";
    case WindowStructure::Generic: return "generic";
  }
  return "generic";
}

// weight * (left (x) right): operator h -> weight <h, right> left
struct RankTerm {
  cplx weight;
  VectorXcd left, right;
};

struct OperatorWindow {
  GridModel grid;
  MatrixXcd matrix;
  struct {
    bool hermitian = false;
    bool positive = false;
  } flags;
  WindowStructure structure = WindowStructure::Generic;

  // factored form (valid when `factored`): matrix = id_coeff*Id + sum of terms
  bool factored = false;
  cplx id_coeff{0.0, 0.0};
  std::vector<RankTerm> terms;
  PhasePoint shift_point{0, 0};  // meaningful for structure == Shift

  OperatorWindow() = default;
  OperatorWindow(const GridModel& g, MatrixXcd M,
                 WindowStructure s = WindowStructure::Generic)
      : grid(g), matrix(std::move(M)), structure(s) {
    if (matrix.rows() != grid.n || matrix.cols() != grid.n)
      throw std::invalid_argument("OperatorWindow: matrix must be n x n");
  }
};

// rank-one operator matrix: delta * f g^H  (the inner-product weight is part
// of the operator so that matrix algebra and signal pairings agree)
inline MatrixXcd rank_one_matrix(const GridModel& g, const VectorXcd& f,
                                 const VectorXcd& h) {
  return g.delta() * f * h.adjoint();
}

inline MatrixXcd identity_matrix(const GridModel& g) {
  return MatrixXcd::Identity(g.n, g.n);
}

// --- spectra -----------------------------------------------------------------

inline Eigen::VectorXd hermitian_eigenvalues(const MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(M,
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline Eigen::VectorXd singular_values(const MatrixXcd& M) {
  // Hermitian inputs get the cheaper symmetric path.
  if ((M - M.adjoint()).norm() <= 1e-12 * std::max(1.0, M.norm()))
    return hermitian_eigenvalues(M).cwiseAbs();
  Eigen::BDCSVD<MatrixXcd> svd(M);
  return svd.singularValues();
}

// Schatten q-norm: l^q norm of singular values; q = infinity -> operator norm.
inline double schatten_norm(const MatrixXcd& M, double q) {
  if (q < 1.0) throw std::invalid_argument("schatten_norm: q >= 1 required");
  if (q == 2.0) return M.norm();  // Frobenius
  Eigen::VectorXd sv = singular_values(M);
  if (std::isinf(q)) return sv.size() ? sv.maxCoeff() : 0.0;
  KahanSum s;
  for (int i = 0; i < sv.size(); ++i) s.add(std::pow(sv[i], q));
  return std::pow(s.value(), 1.0 / q);
}

inline double schatten_norm(const OperatorWindow& S, double q) {
  return schatten_norm(S.matrix, q);
}

inline double operator_norm(const MatrixXcd& M) {
  if (M.rows() <= 512) return schatten_norm(M, INFINITY);
  return operator_norm_estimate(M);
}

namespace detail {
inline void verify_flags(OperatorWindow& w) {
  const double scale = std::max(1e-300, w.matrix.norm());
  w.flags.hermitian = (w.matrix - w.matrix.adjoint()).norm() <= 1e-10 * scale;
  w.flags.positive = false;
  if (w.flags.hermitian) {
    double min_eig;
    if (w.grid.n <= 512) {
      min_eig = hermitian_eigenvalues(w.matrix).minCoeff();
    } else {
      // smallest eigenvalue by power iteration on c*Id - M
      double c = operator_norm_estimate(w.matrix) * 1.01 + 1e-12;
      MatrixXcd shifted = c * identity_matrix(w.grid) - w.matrix;
      min_eig = c - operator_norm_estimate(shifted);
    }
    w.flags.positive = min_eig >= -1e-10 * scale;
  }
}
}  // namespace detail

// --- window construction -------------------------------------------------------

struct WindowSpec {
  enum class Kind {
    RankOne,
    Wigner,
    TauWigner,
    BornJordan,
    Shift,
    IdentityPlus,
    DiagonalSeries,
    Multiplication,
    Custom,
  };
  enum class BjMethod { SincSymbol, TauAverage };

  Kind kind = Kind::Wigner;
  SignalSpec g, h;           // rank-one factors
  double tau = 0.5;          // tau-Wigner
  BjMethod bj_method = BjMethod::SincSymbol;
  int bj_quad_points = 201;  // midpoint rule size for the tau average
  PhasePoint z0{0, 0};       // shift
  cplx c{1.0, 0.0};          // identity_plus coefficient
  double sub_coeff = 1.0;    // scalar applied to the compact part
  std::shared_ptr<const WindowSpec> sub;  // compact part of identity_plus
  std::vector<int> indices;       // diagonal series (Hermite indices)
  std::vector<double> weights;    // diagonal series weights
  VectorXd mult_values;           // multiplication operator samples
  MatrixXcd custom_matrix;

  static WindowSpec rank_one(const SignalSpec& g, const SignalSpec& h) {
    WindowSpec s;
    s.kind = Kind::RankOne;
    s.g = g;
    s.h = h;
    return s;
  }
  static WindowSpec wigner() {
    WindowSpec s;
    s.kind = Kind::Wigner;
    return s;
  }
  static WindowSpec tau_wigner(double tau) {
    WindowSpec s;
    s.kind = Kind::TauWigner;
    s.tau = tau;
    return s;
  }
  static WindowSpec born_jordan(BjMethod m, int quad_points = 201) {
    WindowSpec s;
    s.kind = Kind::BornJordan;
    s.bj_method = m;
    s.bj_quad_points = quad_points;
    return s;
  }
  static WindowSpec shift(PhasePoint z0) {
    WindowSpec s;
    s.kind = Kind::Shift;
    s.z0 = z0;
    return s;
  }
  static WindowSpec identity_plus(cplx c, WindowSpec compact,
                                  double coeff = 1.0) {
    WindowSpec s;
    s.kind = Kind::IdentityPlus;
    s.c = c;
    s.sub_coeff = coeff;
    s.sub = std::make_shared<WindowSpec>(std::move(compact));
    return s;
  }
  static WindowSpec diagonal_series(std::vector<int> idx,
                                    std::vector<double> w) {
    WindowSpec s;
    s.kind = Kind::DiagonalSeries;
    s.indices = std::move(idx);
    s.weights = std::move(w);
    return s;
  }
  static WindowSpec multiplication(VectorXd values) {
    WindowSpec s;
    s.kind = Kind::Multiplication;
    s.mult_values = std::move(values);
    return s;
  }
  static WindowSpec custom(MatrixXcd M) {
    WindowSpec s;
    s.kind = Kind::Custom;
    s.custom_matrix = std::move(M);
    return s;
  }
};

namespace detail {

// Periodic band-limited interpolation kernel for even n (Nyquist bin split
// symmetrically): K(u) = sin(pi u) / (n tan(pi u / n)), period n, K(0)=1.
inline double periodic_sinc(double u, int n) {
  double t = std::sin(kPi * u / n);
  if (std::abs(t) < 1e-13) return 1.0;
  return std::sin(kPi * u) / (double(n) * std::tan(kPi * u / n));
}

// tau-Wigner by band-limited dilation: S_tau f(y) = (1-tau)^{-1} f(lam y),
// lam = tau/(tau-1); exact at tau = 1/2 where it reduces to 2P.
inline MatrixXcd tau_wigner_matrix(const GridModel& g, double tau) {
  const int n = g.n;
  const double lam = tau / (tau - 1.0);
  const double amp = 1.0 / (1.0 - tau);
  MatrixXcd M(n, n);
  for (int j = 0; j < n; ++j) {
    double t = lam * (j - n / 2) + n / 2;  // sample-unit position
    for (int l = 0; l < n; ++l) M(j, l) = amp * periodic_sinc(t - l, n);
  }
  return M;
}

// chirp e^{2 pi i (tau - 1/2) x.xi} sampled on the grid; its Fourier-Wigner
// preimage is the symbol-route tau window, and the Born-Jordan tau average
// integrates the chirps to a midpoint-rule sinc.
inline PhaseFunction tau_chirp(const GridModel& g, double tau) {
  MatrixXcd v(g.n, g.n);
  for (int m = 0; m < g.n; ++m)
    for (int k = 0; k < g.n; ++k) {
      double a = kTwoPi * (tau - 0.5) * phase_xxi(g, {m, k});
      v(m, k) = cplx(std::cos(a), std::sin(a));
    }
  return PhaseFunction(g, std::move(v));
}

inline double sinc_pi(double u) {
  if (std::abs(u) < 1e-8) {
    double x = kPi * u;
    return 1.0 - x * x / 6.0;
  }
  return std::sin(kPi * u) / (kPi * u);
}

}  // namespace detail

// Symbol-route tau window F_W^{-1}(chirp); kept alongside the dilation route
// so the two discretizations can be compared experimentally.
inline OperatorWindow tau_wigner_symbol_window(const GridModel& g, double tau) {
  if (g.mode != GridMode::ContinuumEmulation)
    throw std::invalid_argument("continuum emulation required");
  OperatorWindow w(g, inverse_fourier_wigner(g, detail::tau_chirp(g, tau)),
                   WindowStructure::WeylQuantized);
  detail::verify_flags(w);
  return w;
}

inline OperatorWindow build_window(const GridModel& g, const WindowSpec& spec) {
  using Kind = WindowSpec::Kind;
  OperatorWindow w;
  switch (spec.kind) {
    case Kind::RankOne: {
      Signal gs = special_signal(g, spec.g), hs = special_signal(g, spec.h);
      w = OperatorWindow(g, rank_one_matrix(g, gs.data, hs.data),
                         WindowStructure::RankOne);
      w.factored = true;
      w.terms.push_back({cplx(1.0, 0.0), gs.data, hs.data});
      break;
    }
    case Kind::Wigner: {
      w = OperatorWindow(g, 2.0 * parity_matrix(g),
                         WindowStructure::ParityMultiple);
      break;
    }
    case Kind::TauWigner: {
      if (g.mode != GridMode::ContinuumEmulation)
        throw std::invalid_argument("continuum emulation required");
      if (!(spec.tau > 0.0 && spec.tau < 1.0))
        throw std::invalid_argument("tau outside (0,1)");
      w = OperatorWindow(g, detail::tau_wigner_matrix(g, spec.tau),
                         WindowStructure::WeylQuantized);
      break;
    }
    case Kind::BornJordan: {
      if (g.mode != GridMode::ContinuumEmulation)
        throw std::invalid_argument("continuum emulation required");
      MatrixXcd M_bj;
      if (spec.bj_method == WindowSpec::BjMethod::SincSymbol) {
        MatrixXcd sym(g.n, g.n);
        for (int m = 0; m < g.n; ++m)
          for (int k = 0; k < g.n; ++k)
            sym(m, k) = detail::sinc_pi(phase_xxi(g, {m, k}));
        M_bj = inverse_fourier_wigner(g, PhaseFunction(g, std::move(sym)));
      } else {
        // midpoint tau average of the chirp family, integrated in the
        // Fourier-Wigner domain before inversion
        const int M = spec.bj_quad_points;
        MatrixXcd acc = MatrixXcd::Zero(g.n, g.n);
        for (int q = 0; q < M; ++q) {
          double tau = (q + 0.5) / M;
          acc += detail::tau_chirp(g, tau).values;
        }
        acc /= double(M);
        M_bj = inverse_fourier_wigner(g, PhaseFunction(g, std::move(acc)));
      }
      // the limit operator is self-adjoint (the tau family is symmetric
      // about 1/2); project out the Nyquist-row asymmetry of the inversion
      M_bj = MatrixXcd(0.5 * (M_bj + M_bj.adjoint().eval()));
      w = OperatorWindow(g, std::move(M_bj), WindowStructure::WeylQuantized);
      break;
    }
    case Kind::Shift: {
      w = OperatorWindow(g, tf_shift_matrix(g, spec.z0), WindowStructure::Shift);
      w.shift_point = spec.z0.wrapped(g);
      break;
    }
    case Kind::IdentityPlus: {
      if (!spec.sub) throw std::invalid_argument("identity_plus: missing part");
      OperatorWindow K = build_window(g, *spec.sub);
      MatrixXcd M = spec.c * identity_matrix(g) + spec.sub_coeff * K.matrix;
      w = OperatorWindow(g, std::move(M), WindowStructure::IdentityPlusCompact);
      if (K.factored) {
        w.factored = true;
        w.id_coeff = spec.c;
        for (auto t : K.terms) {
          t.weight *= spec.sub_coeff;
          w.terms.push_back(std::move(t));
        }
        w.id_coeff += K.id_coeff * spec.sub_coeff;
      }
      break;
    }
    case Kind::DiagonalSeries: {
      if (spec.indices.size() != spec.weights.size())
        throw std::invalid_argument("diagonal_series: index/weight mismatch");
      MatrixXcd M = MatrixXcd::Zero(g.n, g.n);
      std::vector<RankTerm> terms;
      for (size_t i = 0; i < spec.indices.size(); ++i) {
        Signal phi = hermite_signal(g, spec.indices[i]);
        M += spec.weights[i] * rank_one_matrix(g, phi.data, phi.data);
        terms.push_back({cplx(spec.weights[i], 0.0), phi.data, phi.data});
      }
      w = OperatorWindow(g, std::move(M), WindowStructure::DiagonalSeries);
      w.factored = true;
      w.terms = std::move(terms);
      break;
    }
    case Kind::Multiplication: {
      if (spec.mult_values.size() != g.n)
        throw std::invalid_argument("multiplication: values length != n");
      MatrixXcd M = MatrixXcd::Zero(g.n, g.n);
      for (int j = 0; j < g.n; ++j) M(j, j) = spec.mult_values[j];
      w = OperatorWindow(g, std::move(M), WindowStructure::Generic);
      break;
    }
    case Kind::Custom: {
      w = OperatorWindow(g, spec.custom_matrix, WindowStructure::Generic);
      break;
    }
  }
  detail::verify_flags(w);
  return w;
}

// --- numerical radius ----------------------------------------------------------

// w(S) = sup_{theta} lambda_max( (e^{i theta} S + e^{-i theta} S^*)/2 ).
// Exact spectral radius for verified Hermitian inputs; otherwise a coarse
// sweep refined by golden-section until the estimate moves by < 1e-10.
inline double numerical_radius(const OperatorWindow& S) {
  if (S.flags.hermitian) {
    Eigen::VectorXd ev = hermitian_eigenvalues(S.matrix);
    return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  }
  auto top = [&](double theta) {
    cplx ph(std::cos(theta), std::sin(theta));
    MatrixXcd H = 0.5 * (ph * S.matrix + std::conj(ph) * S.matrix.adjoint());
    return hermitian_eigenvalues(H).maxCoeff();
  };
  const int coarse = 64;
  std::vector<double> vals(coarse);
  parallel_for(0, coarse, [&](long i) {
    vals[i] = top(kTwoPi * double(i) / coarse);
  });
  double coarse_best = *std::max_element(vals.begin(), vals.end());
  double best = -1e300;
  for (int i = 0; i < coarse; ++i) {
    if (vals[i] < coarse_best - 1e-6 * std::max(1.0, std::abs(coarse_best)))
      continue;
    // golden-section refine around every near-best coarse node; shrink the
    // bracket until the estimate cannot move by more than 1e-10 (quadratic
    // maxima: the residual is curvature * width^2)
    double a = kTwoPi * (i - 1.0) / coarse, b = kTwoPi * (i + 1.0) / coarse;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = top(x1), f2 = top(x2);
    while (b - a > 1e-7) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = top(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = top(x1);
      }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

// unit vector attaining (numerically) the numerical radius
inline VectorXcd numerical_radius_vector(const OperatorWindow& S) {
  if (S.flags.hermitian) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(S.matrix);
    int lo = 0, hi = S.grid.n - 1;
    if (std::abs(es.eigenvalues()[lo]) > std::abs(es.eigenvalues()[hi]))
      return es.eigenvectors().col(lo);
    return es.eigenvectors().col(hi);
  }
  double best = -1e300;
  VectorXcd vec;
  for (int i = 0; i < 256; ++i) {
    double theta = kTwoPi * i / 256.0;
    cplx ph(std::cos(theta), std::sin(theta));
    MatrixXcd H = 0.5 * (ph * S.matrix + std::conj(ph) * S.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
    double v = es.eigenvalues().maxCoeff();
    if (v > best) {
      best = v;
      vec = es.eigenvectors().col(S.grid.n - 1);
    }
  }
  return vec;
}

}  // namespace qhalab
