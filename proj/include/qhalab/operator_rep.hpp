#pragma once

// Phase-space representations of operators: generalized Husimi transforms
// (T * S-check), the total correlation T * T-check, concentration
// optimization over Hilbert-Schmidt and density operators, and the polarized
// transform on double phase space.

#include <optional>
#include <string>
#include <vector>

#include "qhalab/concentration.hpp"

namespace qhalab {

struct DensityOperator {
  OperatorWindow base;

  explicit DensityOperator(OperatorWindow w) : base(std::move(w)) {
    double tr = base.matrix.trace().real();
    if (std::abs(base.matrix.trace().imag()) > 1e-10 ||
        std::abs(tr - 1.0) > 1e-12)
      throw std::invalid_argument("DensityOperator: trace must be 1");
    if (!base.flags.positive)
      throw std::invalid_argument("DensityOperator: window must be positive");
  }

  static DensityOperator from_matrix(const GridModel& g, MatrixXcd M) {
    cplx tr = M.trace();
    if (std::abs(tr) < 1e-300)
      throw std::invalid_argument("DensityOperator: zero trace");
    OperatorWindow w(g, M / tr, WindowStructure::Generic);
    detail::verify_flags(w);
    return DensityOperator(std::move(w));
  }
};

// Generalized Husimi transform: field tr(T alpha_z(S)) = (T * S-check)(z).
// The classical Husimi function is the default S = phi_0 (x) phi_0.
inline PhaseFunction husimi_transform(const OperatorWindow& T,
                                      const OperatorWindow& S) {
  require_same_grid(T.grid, S.grid, "husimi_transform");
  return trace_field(T.grid, T.matrix, S.matrix);
}

inline PhaseFunction husimi_transform(const OperatorWindow& T) {
  Signal phi0 = gaussian_signal(T.grid, 1.0);
  OperatorWindow S(T.grid, rank_one_matrix(T.grid, phi0.data, phi0.data),
                   WindowStructure::RankOne);
  return husimi_transform(T, S);
}

struct TotalCorrelation {
  PhaseFunction field;
  double hs_norm_sq = 0.0;
  bool peak_attained = false;  // |field(0)| = ||T||_{S^2}^2, i.e. T^* = cT
};

// T-tilde(z) = tr(T alpha_z(T)); |T-tilde| <= ||T||_{S^2}^2 with equality at 0
// exactly for windows with T^* = cT, |c| = 1.
inline TotalCorrelation total_correlation(const OperatorWindow& T) {
  TotalCorrelation tc{trace_field(T.grid, T.matrix, T.matrix),
                      T.matrix.squaredNorm(), false};
  tc.peak_attained =
      std::abs(std::abs(tc.field.values(0, 0)) - tc.hs_norm_sq) <=
      1e-10 * std::max(1.0, tc.hs_norm_sq);
  return tc;
}

// --- operator-level concentration ------------------------------------------------

enum class OperatorClass { HilbertSchmidt, TotalCorrelation, Density };

struct OperatorConcentrationResult {
  double value = 0.0;
  MatrixXcd optimizer;
  std::vector<double> family_values;  // escape trace (total-correlation class)
  bool unattained_flag = false;
  double signal_route_value = 0.0;    // density class cross-reference
  double second_singular = 0.0;       // rank-one proxy for the density class
  std::vector<TraceEntry> trace;
};

namespace detail {

// 2-D field correlation (1/n) sum_z d(z) conj(c(z-u)) via FFTs.
inline MatrixXcd field_correlation(const GridModel& g, const MatrixXcd& d,
                                   const MatrixXcd& c) {
  const int n = g.n;
  MatrixXcd fd(n, n), fc(n, n);
  for (int m = 0; m < n; ++m) {
    fd.row(m) = dft(VectorXcd(d.row(m).transpose())).transpose();
    fc.row(m) = dft(VectorXcd(c.row(m).transpose())).transpose();
  }
  for (int k = 0; k < n; ++k) {
    fd.col(k) = dft(VectorXcd(fd.col(k)));
    fc.col(k) = dft(VectorXcd(fc.col(k)));
  }
  fd.array() *= fc.array().conjugate();
  for (int m = 0; m < n; ++m)
    fd.row(m) = idft(VectorXcd(fd.row(m).transpose())).transpose();
  for (int k = 0; k < n; ++k) fd.col(k) = idft(VectorXcd(fd.col(k)));
  return fd * g.phase_weight();
}

inline double masked_phi(const PhaseFunction& F, const Region& omega, double p,
                         double w) {
  KahanSum s;
  for (int m = 0; m < F.grid.n; ++m)
    for (int k = 0; k < F.grid.n; ++k)
      if (omega.contains(m, k)) s.add(std::pow(std::abs(F.values(m, k)), p));
  return s.value() * w;  // J^p
}

}  // namespace detail

// Hilbert-Schmidt class: sup over T in S^2 of ||T * S-check||_{L^p(Omega)} /
// ||T||_{S^2}; projected ascent on the Hilbert-Schmidt sphere.
inline OperatorConcentrationResult optimize_hs_concentration(
    const OperatorWindow& S, const Region& omega, double p,
    const OptimizerConfig& cfg = {}) {
  const GridModel& g = S.grid;
  const double w = g.phase_weight();
  OperatorConcentrationResult res;

  double cx, cxi;
  omega.centroid(cx, cxi);
  PhasePoint zc{int(std::lround(cx / g.delta())),
                int(std::lround(cxi / g.delta_xi()))};

  if (std::isinf(p)) {
    // value ||S||_{S^2}, attained by alpha_w(S^*) at a region point
    res.value = S.matrix.norm();
    res.optimizer = alpha_shift(g, MatrixXcd(S.matrix.adjoint()), zc);
    res.optimizer /= res.optimizer.norm();
    return res;
  }

  auto objective = [&](const MatrixXcd& T) {
    PhaseFunction f = trace_field(g, T, S.matrix);
    return detail::masked_phi(f, omega, p, w);
  };

  std::vector<MatrixXcd> starts;
  {
    MatrixXcd T0 = alpha_shift(g, MatrixXcd(S.matrix.adjoint()), zc);
    starts.push_back(T0 / T0.norm());
    Rng rng(cfg.seed + 17);
    for (int r = 0; r < std::max(1, cfg.restarts - 1); ++r) {
      MatrixXcd T(g.n, g.n);
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) T(i, j) = rng.normal_cplx();
      starts.push_back(T / T.norm());
    }
  }

  double best = -1.0;
  MatrixXcd best_T;
  std::vector<TraceEntry> best_trace;
  for (const auto& start : starts) {
    MatrixXcd T = start;
    double phi = objective(T);
    double step = 1.0;
    std::vector<TraceEntry> trace{{0, std::pow(phi, 1.0 / p), 0.0}};
    for (int it = 1; it <= cfg.max_iter; ++it) {
      PhaseFunction field = trace_field(g, T, S.matrix);
      MatrixXcd coeff = MatrixXcd::Zero(g.n, g.n);
      for (int m = 0; m < g.n; ++m)
        for (int k = 0; k < g.n; ++k)
          if (omega.contains(m, k)) {
            cplx G = field.values(m, k);
            double a = std::abs(G);
            if (p < 2.0 && a < 1e-12) continue;
            coeff(m, k) = 0.5 * p * std::pow(a, p - 2.0) * G;
          }
      MatrixXcd grad = fn_op_convolution_matrix(
          PhaseFunction(g, coeff), MatrixXcd(S.matrix.adjoint()));
      // tangent projection on the S^2 sphere
      cplx ov = (T.array().conjugate() * grad.array()).sum();
      MatrixXcd dir = grad - ov * T;
      double dn = dir.norm();
      if (dn < 1e-15) break;
      dir /= dn;
      bool improved = false;
      double eta = step;
      for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
        MatrixXcd cand = T + eta * dir;
        cand /= cand.norm();
        double pc = objective(cand);
        if (pc > phi * (1.0 + 1e-15)) {
          T = cand;
          double gain = pc - phi;
          phi = pc;
          improved = true;
          step = std::min(2.0 * eta, 16.0);
          trace.push_back({it, std::pow(phi, 1.0 / p), eta});
          if (gain < cfg.tol * std::max(1.0, phi)) it = cfg.max_iter;
          break;
        }
        eta *= 0.5;
      }
      if (!improved) break;
    }
    if (phi > best) {
      best = phi;
      best_T = T;
      best_trace = trace;
    }
  }
  res.value = std::pow(best, 1.0 / p);
  res.optimizer = best_T;
  res.trace = best_trace;
  return res;
}

// Symbol-route cross-check for the Hilbert-Schmidt class: ascent over the
// Weyl symbol b with objective ||b * (reflected a_S)||_{L^p(Omega)} / ||b||_2.
inline double optimize_hs_symbol_route(const OperatorWindow& S,
                                       const Region& omega, double p,
                                       const OptimizerConfig& cfg = {}) {
  const GridModel& g = S.grid;
  const double w = g.phase_weight();
  PhaseFunction a_ref = weyl_symbol_of(g, reflect_matrix(g, S.matrix));
  auto conv_val = [&](const PhaseFunction& b) {
    return field_convolution(b, a_ref);
  };
  auto l2 = [&](const MatrixXcd& v) { return std::sqrt(w) * v.norm(); };

  Rng rng(cfg.seed + 71);
  double best = -1.0;
  for (int r = 0; r < std::max(2, cfg.restarts); ++r) {
    MatrixXcd b(g.n, g.n);
    if (r == 0) {
      // symbol of the adjoint window recentered on the region
      double cx, cxi;
      omega.centroid(cx, cxi);
      PhasePoint zc{int(std::lround(cx / g.delta())),
                    int(std::lround(cxi / g.delta_xi()))};
      b = weyl_symbol_of(
              g, alpha_shift(g, MatrixXcd(S.matrix.adjoint()), zc))
              .values;
    } else {
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) b(i, j) = rng.normal_cplx();
    }
    b /= l2(b);
    PhaseFunction bf(g, b);
    double phi = detail::masked_phi(conv_val(bf), omega, p, w);
    double step = 1.0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
      PhaseFunction val = conv_val(bf);
      MatrixXcd d = MatrixXcd::Zero(g.n, g.n);
      for (int m = 0; m < g.n; ++m)
        for (int k = 0; k < g.n; ++k)
          if (omega.contains(m, k)) {
            cplx G = val.values(m, k);
            double a = std::abs(G);
            if (p < 2.0 && a < 1e-12) continue;
            d(m, k) = w * 0.5 * p * std::pow(a, p - 2.0) * G;
          }
      MatrixXcd grad = detail::field_correlation(g, d, a_ref.values);
      cplx ov = w * (bf.values.array().conjugate() * grad.array()).sum();
      MatrixXcd dir = grad - ov * bf.values;
      double dn = l2(dir);
      if (dn < 1e-15) break;
      dir /= dn;
      bool improved = false;
      double eta = step;
      for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
        MatrixXcd cand = bf.values + eta * dir;
        cand /= l2(cand);
        double pc =
            detail::masked_phi(conv_val(PhaseFunction(g, cand)), omega, p, w);
        if (pc > phi * (1.0 + 1e-15)) {
          bf.values = cand;
          double gain = pc - phi;
          phi = pc;
          improved = true;
          step = std::min(2.0 * eta, 16.0);
          if (gain < cfg.tol * std::max(1.0, phi)) it = cfg.max_iter;
          break;
        }
        eta *= 0.5;
      }
      if (!improved) break;
    }
    best = std::max(best, phi);
  }
  return std::pow(best, 1.0 / p);
}

// Total-correlation class: the value approaches |Omega|^{1/p} along operators
// with ever broader symbols but the supremum is not attained; we report the
// escape trace and flag it.
inline OperatorConcentrationResult optimize_tc_concentration(
    const Region& omega, double p, int steps = 6) {
  const GridModel& g = omega.grid;
  if (g.mode != GridMode::ContinuumEmulation)
    throw std::invalid_argument("continuum emulation required");
  OperatorConcentrationResult res;
  double extent = 0.5 * g.n * g.delta();
  double lam_max = extent / 2.5;
  const double w = g.phase_weight();
  for (int i = 0; i < steps; ++i) {
    double lam = 1.0 * std::pow(lam_max, double(i) / (steps - 1));
    MatrixXcd b(g.n, g.n);
    for (int m = 0; m < g.n; ++m)
      for (int k = 0; k < g.n; ++k) {
        double x = phase_x(g, m), xi = phase_xi(g, k);
        b(m, k) = std::exp(-kPi * (x * x + xi * xi) / (lam * lam));
      }
    MatrixXcd T = weyl_quantize_matrix(g, PhaseFunction(g, b));
    PhaseFunction tt = trace_field(g, T, T);
    double val = std::pow(detail::masked_phi(tt, omega, p, w), 1.0 / p) /
                 T.squaredNorm();
    res.family_values.push_back(val);
    if (val > res.value) {
      res.value = val;
      res.optimizer = T / T.norm();
    }
  }
  res.unattained_flag = true;  // peak value requires T^* = cT at z = 0 only
  return res;
}

// Density class: T = A A^* / tr(A A^*), projected ascent over the factor A.
inline OperatorConcentrationResult optimize_density_concentration(
    const OperatorWindow& S, const Region& omega, double p,
    const OptimizerConfig& cfg = {}) {
  const GridModel& g = S.grid;
  const double w = g.phase_weight();
  OperatorConcentrationResult res;

  auto density_of = [&](const MatrixXcd& A) {
    MatrixXcd T = A * A.adjoint();
    T /= T.trace().real();
    return T;
  };
  auto objective = [&](const MatrixXcd& A) {
    PhaseFunction f = trace_field(g, density_of(A), S.matrix);
    return detail::masked_phi(f, omega, p, w);
  };

  std::vector<MatrixXcd> starts;
  {
    // rank-one start from the localization operator's leading eigenvector
    LocalizationResult loc = localization_operator(omega, S);
    MatrixXcd H = loc.op.matrix;
    if (!loc.op.flags.hermitian) H = MatrixXcd(0.5 * (H + H.adjoint().eval()));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
    MatrixXcd A0 = MatrixXcd::Zero(g.n, g.n);
    A0.col(0) = es.eigenvectors().col(g.n - 1);
    starts.push_back(A0);
    Rng rng(cfg.seed + 29);
    for (int r = 0; r < std::max(1, cfg.restarts - 1); ++r) {
      MatrixXcd A(g.n, g.n);
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) A(i, j) = rng.normal_cplx();
      starts.push_back(A / A.norm());
    }
  }

  double best = -1.0;
  MatrixXcd best_A;
  for (const auto& start : starts) {
    MatrixXcd A = start;
    A /= A.norm();
    double phi = objective(A);
    double step = 1.0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
      MatrixXcd T = density_of(A);
      double N = (A * A.adjoint()).trace().real();
      PhaseFunction field = trace_field(g, T, S.matrix);
      MatrixXcd coeff = MatrixXcd::Zero(g.n, g.n);
      double phi_now = 0.0;
      for (int m = 0; m < g.n; ++m)
        for (int k = 0; k < g.n; ++k)
          if (omega.contains(m, k)) {
            cplx G = field.values(m, k);
            double a = std::abs(G);
            phi_now += w * std::pow(a, p);
            if (p < 2.0 && a < 1e-12) continue;
            coeff(m, k) = 0.5 * p * std::pow(a, p - 2.0) * std::conj(G);
          }
      MatrixXcd M1 = fn_op_convolution_matrix(PhaseFunction(g, coeff), S.matrix);
      MatrixXcd grad =
          ((M1 + M1.adjoint()) * A - (p * phi_now) * A) / N;
      double dn = grad.norm();
      if (dn < 1e-15) break;
      grad /= dn;
      bool improved = false;
      double eta = step;
      for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
        MatrixXcd cand = A + eta * grad;
        cand /= cand.norm();
        double pc = objective(cand);
        if (pc > phi * (1.0 + 1e-15)) {
          A = cand;
          double gain = pc - phi;
          phi = pc;
          improved = true;
          step = std::min(2.0 * eta, 16.0);
          if (gain < cfg.tol * std::max(1.0, phi)) it = cfg.max_iter;
          break;
        }
        eta *= 0.5;
      }
      if (!improved) break;
    }
    if (phi > best) {
      best = phi;
      best_A = A;
    }
  }
  // rank-one refinement: the optimum is attained at a pure state, so run the
  // factor ascent over rank-one densities from the standard start set plus
  // the leading factor of the best mixed iterate, and keep the winner
  {
    ConcentrationProblem sig_prob(S, omega, p);
    std::vector<Signal> rank_one_starts = qhalab::detail::ascent_starts(sig_prob, cfg);
    Eigen::JacobiSVD<MatrixXcd> svd(density_of(best_A), Eigen::ComputeThinU);
    rank_one_starts.push_back(normalized(Signal(g, svd.matrixU().col(0))));
    for (const Signal& f0 : rank_one_starts) {
      qhalab::detail::AscentOutcome run = qhalab::detail::ascend(sig_prob, f0, cfg);
      double phi_run = std::pow(run.value, p);
      if (phi_run > best) {
        best = phi_run;
        MatrixXcd A = MatrixXcd::Zero(g.n, g.n);
        A.col(0) = run.f.data * std::sqrt(g.delta());
        best_A = A;
      }
    }
  }
  res.value = std::pow(best, 1.0 / p);
  res.optimizer = density_of(best_A);
  Eigen::VectorXd sv = singular_values(res.optimizer);
  res.second_singular = sv.size() > 1 ? sv[1] : 0.0;
  return res;
}

inline OperatorConcentrationResult optimize_operator_concentration(
    const std::optional<OperatorWindow>& S, const Region& omega, double p,
    OperatorClass cls, const OptimizerConfig& cfg = {}) {
  switch (cls) {
    case OperatorClass::HilbertSchmidt:
      if (!S) throw std::invalid_argument("hilbert-schmidt class: S required");
      return optimize_hs_concentration(*S, omega, p, cfg);
    case OperatorClass::TotalCorrelation:
      return optimize_tc_concentration(omega, p);
    case OperatorClass::Density: {
      if (!S) throw std::invalid_argument("density class: S required");
      OperatorConcentrationResult res =
          optimize_density_concentration(*S, omega, p, cfg);
      ConcentrationProblem prob(*S, omega, p);
      res.signal_route_value = optimize_concentration(prob, cfg).value;
      // polish the signal route with the density optimizer's leading factor,
      // so route disagreement isolates a genuinely better mixed state rather
      // than multistart luck
      Eigen::JacobiSVD<MatrixXcd> svd(res.optimizer, Eigen::ComputeThinU);
      Signal f0 = normalized(Signal(S->grid, svd.matrixU().col(0)));
      detail::AscentOutcome polish = detail::ascend(prob, f0, cfg);
      res.signal_route_value = std::max(res.signal_route_value, polish.value);
      return res;
    }
  }
  throw std::logic_error("optimize_operator_concentration: bad class");
}

// --- polarized transform on double phase space -------------------------------------

// Coordinate change aligning the polarized transform with a double-phase
// short-time Fourier transform of the Weyl symbols (one-dimensional case).
// Recorded for reference; it is not applied on the discrete grid.
inline const double kPolarizedCoordinateChange[4][4] = {
    {0.0, -1.0, 0.0, 1.0},
    {1.0, 0.0, -1.0, 0.0},
    {0.5, 0.0, 0.5, 0.0},
    {0.0, 0.5, 0.0, 0.5},
};

struct DoublePhaseFunction {
  GridModel grid;
  MatrixXcd values;  // (w-index, z-index), each index = m*n + k

  double l2_norm() const {
    double w2 = grid.phase_weight() * grid.phase_weight();
    return std::sqrt(values.squaredNorm() * w2);
  }
};

// Q_S T(w,z) = <T, pi(z) S pi(w)^*>_{S^2}
inline DoublePhaseFunction polarized_cohen(const OperatorWindow& T,
                                           const OperatorWindow& S,
                                           bool allow_large = false) {
  require_same_grid(T.grid, S.grid, "polarized_cohen");
  const GridModel& g = T.grid;
  const int n = g.n;
  if (n > 16 && !allow_large)
    throw std::invalid_argument(
        "polarized_cohen: n > 16 requires explicit override (n^4 storage)");
  const long nn = long(n) * n;
  DoublePhaseFunction out{g, MatrixXcd(nn, nn)};
  // Q(w,z) = tr(pi(z)^* T pi(w) S^H)
  std::vector<MatrixXcd> left(nn), right(nn);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      MatrixXcd pz = tf_shift_matrix(g, {m, k});
      left[long(m) * n + k] = pz.adjoint() * T.matrix;
      right[long(m) * n + k] = pz * S.matrix.adjoint();
    }
  parallel_for(0, nn, [&](long zi) {
    for (long wi = 0; wi < nn; ++wi)  // tr(AB) without forming the product
      out.values(wi, zi) =
          (left[zi].array() * right[wi].transpose().array()).sum();
  });
  return out;
}

// adjoint: Q_S^*(F) = sum_{w,z} phase_weight^2 F(w,z) pi(z) S pi(w)^*,
// grouped as sum_z (pi(z) S) (sum_w F(w,z) pi(w)^*)
inline MatrixXcd polarized_adjoint(const GridModel& g, const OperatorWindow& S,
                                   const DoublePhaseFunction& F) {
  const int n = g.n;
  const long nn = long(n) * n;
  const double w2 = g.phase_weight() * g.phase_weight();
  std::vector<MatrixXcd> piw(nn);
  for (long wi = 0; wi < nn; ++wi)
    piw[wi] = tf_shift_matrix(g, {int(wi / n), int(wi % n)});
  MatrixXcd acc = MatrixXcd::Zero(n, n);
  for (long zi = 0; zi < nn; ++zi) {
    MatrixXcd inner = MatrixXcd::Zero(n, n);
    for (long wi = 0; wi < nn; ++wi)
      inner += F.values(wi, zi) * piw[wi].adjoint();
    acc += w2 * (piw[zi] * S.matrix) * inner;
  }
  return acc;
}

}  // namespace qhalab
