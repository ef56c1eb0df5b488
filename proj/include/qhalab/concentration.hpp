#pragma once

// Concentration engine: the functional J_S, the optimized value over unit
// signals, mixed-state localization operators, escape-family estimation of
// the essential level, and the strict-gap diagnostic.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "qhalab/gap_criteria.hpp"
#include "qhalab/qha.hpp"

namespace qhalab {

struct ConcentrationProblem {
  OperatorWindow window;
  Region region;
  double p = 2.0;  // may be INFINITY

  ConcentrationProblem(OperatorWindow w, Region r, double p_)
      : window(std::move(w)), region(std::move(r)), p(p_) {
    require_same_grid(window.grid, region.grid, "ConcentrationProblem");
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  }
};

struct OptimizerConfig {
  int max_iter = 250;
  int restarts = 6;
  double tol = 1e-11;
  std::uint64_t seed = 1;
  double step0 = 1.0;
  int max_backtracks = 45;
  bool covariant_starts_only = false;  // drop random starts (covariance tests)
};

struct TraceEntry {
  int iter;
  double value;
  double step;
};

struct UpperBounds {
  double universal = 0.0;
  std::optional<double> jensen;
  std::optional<double> wigner_escape;
};

struct ConcentrationResult {
  double value = 0.0;
  Signal optimizer;
  double ess_lower = 0.0;
  UpperBounds upper_bounds;
  std::string verdict;  // set by strict_gap_check
  std::vector<TraceEntry> trace;
  bool converged = true;
  int iterations = 0;
  std::optional<double> ess_certified_upper;
  std::string ess_certificate_basis;
};

// --- the functional ------------------------------------------------------------

inline double masked_lp(const VectorXcd& q, double weight, double p) {
  if (std::isinf(p)) {
    double mx = 0;
    for (int i = 0; i < q.size(); ++i) mx = std::max(mx, std::abs(q[i]));
    return mx;
  }
  KahanSum s;
  for (int i = 0; i < q.size(); ++i) s.add(std::pow(std::abs(q[i]), p));
  return std::pow(s.value() * weight, 1.0 / p);
}

inline double concentration_functional(const ConcentrationProblem& prob,
                                       const Signal& f) {
  if (norm(f) == 0.0)
    throw std::invalid_argument("concentration_functional: zero signal");
  VectorXcd q = cohen_on_region(prob.window, f, f, prob.region);
  return masked_lp(q, prob.region.grid.phase_weight(), prob.p);
}

// --- localization operator -------------------------------------------------------

inline PhaseFunction indicator_field(const Region& omega) {
  MatrixXcd v = MatrixXcd::Zero(omega.grid.n, omega.grid.n);
  for (int m = 0; m < omega.grid.n; ++m)
    for (int k = 0; k < omega.grid.n; ++k)
      if (omega.contains(m, k)) v(m, k) = 1.0;
  return PhaseFunction(omega.grid, std::move(v));
}

struct LocalizationResult {
  OperatorWindow op;
  std::vector<double> spectrum;  // descending; filled for Hermitian windows
};

inline LocalizationResult localization_operator(const Region& omega,
                                                const OperatorWindow& S) {
  require_same_grid(omega.grid, S.grid, "localization_operator");
  LocalizationResult res{fn_op_convolution(indicator_field(omega), S), {}};
  if (S.flags.hermitian) {
    Eigen::VectorXd ev = hermitian_eigenvalues(res.op.matrix);
    res.spectrum.assign(ev.data(), ev.data() + ev.size());
    std::sort(res.spectrum.begin(), res.spectrum.end(), std::greater<>());
  }
  return res;
}

// --- escape families ----------------------------------------------------------

struct EscapeFamily {
  enum class Kind { Shifted, Dilated, Hermite } kind = Kind::Shifted;
  // shifted
  Signal base;
  double dir_x = 1.0, dir_xi = 0.0;
  std::vector<double> magnitudes;  // strictly increasing continuum distances
  // dilated
  std::vector<double> lambdas;
  // hermite
  std::vector<int> indices;

  static EscapeFamily shifted(Signal base, double dx, double dxi,
                              std::vector<double> mags) {
    EscapeFamily f;
    f.kind = Kind::Shifted;
    f.base = std::move(base);
    double nr = std::hypot(dx, dxi);
    f.dir_x = dx / nr;
    f.dir_xi = dxi / nr;
    f.magnitudes = std::move(mags);
    for (size_t i = 1; i < f.magnitudes.size(); ++i)
      if (!(f.magnitudes[i] > f.magnitudes[i - 1]))
        throw std::invalid_argument("shift magnitudes must increase strictly");
    return f;
  }
  static EscapeFamily dilated(std::vector<double> lambdas) {
    EscapeFamily f;
    f.kind = Kind::Dilated;
    f.lambdas = std::move(lambdas);
    return f;
  }
  static EscapeFamily hermite(std::vector<int> indices) {
    EscapeFamily f;
    f.kind = Kind::Hermite;
    f.indices = std::move(indices);
    return f;
  }

  std::vector<Signal> members(const GridModel& g) const {
    std::vector<Signal> out;
    switch (kind) {
      case Kind::Shifted: {
        for (double mag : magnitudes) {
          int dm = int(std::lround(mag * dir_x / g.delta()));
          int dk = int(std::lround(mag * dir_xi / g.delta_xi()));
          out.push_back(normalized(tf_shift(base, {dm, dk})));
        }
        break;
      }
      case Kind::Dilated:
        for (double lam : lambdas) out.push_back(gaussian_signal(g, lam));
        break;
      case Kind::Hermite:
        for (int j : indices) out.push_back(hermite_signal(g, j));
        break;
    }
    return out;
  }
};

// Default families sized to the grid: a shifted copy of a window-adapted
// base escaping along the diagonal, plus a Hermite ladder in continuum mode.
// Dilation families are available explicitly; a dilation schedule cannot
// leave a finite grid, so its tail is a meaningful escape emulation only for
// functionals that respond to spreading as such (the shift windows).
inline std::vector<EscapeFamily> default_escape_families(
    const ConcentrationProblem& prob, std::uint64_t seed = 7) {
  const GridModel& g = prob.region.grid;
  std::vector<EscapeFamily> fams;
  double extent = 0.5 * g.n * g.delta();  // half-width of the centered window
  double diam = prob.region.diameter();
  // diagonal shifts reach 0.95 * extent per axis before wrapping back
  double far = 0.95 * extent * std::sqrt(2.0);
  if (far - 0.5 * diam >= 5.0 * diam) {
    Signal base = (g.mode == GridMode::ContinuumEmulation)
                      ? gaussian_signal(g, 1.0)
                      : random_signal(g, seed);
    std::vector<double> mags;
    for (int i = 1; i <= 8; ++i) mags.push_back(far * i / 8.0);
    fams.push_back(EscapeFamily::shifted(base, 1.0, 1.0, mags));
  }
  if (g.mode == GridMode::ContinuumEmulation) {
    std::vector<int> idx;
    for (int j = 2; j < g.n / 4; j *= 2) idx.push_back(j);
    if (!idx.empty()) fams.push_back(EscapeFamily::hermite(idx));
  }
  if (fams.empty()) throw std::invalid_argument("grid too small to emulate escape");
  return fams;
}

struct EssentialEstimate {
  double tail = 0.0;       // max over families of the last-3 average
  double best_member = 0;  // best single member (a valid lower bound for the value)
  Signal best_signal;
};

inline EssentialEstimate essential_value_estimate_full(
    const ConcentrationProblem& prob, const std::vector<EscapeFamily>& families) {
  if (families.empty())
    throw std::invalid_argument("essential_value_estimate: families empty");
  const GridModel& g = prob.region.grid;
  double cx, cxi;
  prob.region.centroid(cx, cxi);
  double diam = prob.region.diameter();
  EssentialEstimate out;
  for (const auto& fam : families) {
    if (fam.kind == EscapeFamily::Kind::Shifted) {
      // the last shift must put the mass at least 5 region diameters away
      // from the region itself (wrap-aware distances on the torus)
      double mag = fam.magnitudes.back();
      double zx = mag * fam.dir_x, zxi = mag * fam.dir_xi;
      double half_x = 0.5 * g.n * g.delta(), half_xi = 0.5 * g.n * g.delta_xi();
      double dx = std::remainder(zx - cx, 2.0 * half_x);
      double dxi = std::remainder(zxi - cxi, 2.0 * half_xi);
      double dist = std::hypot(dx, dxi) - 0.5 * diam;
      if (dist < 5.0 * std::max(diam, 1e-12))
        throw std::invalid_argument("grid too small to emulate escape");
    }
    auto members = fam.members(g);
    std::vector<double> vals(members.size());
    parallel_for(0, long(members.size()), [&](long i) {
      vals[i] = concentration_functional(prob, members[i]);
    });
    for (size_t i = 0; i < members.size(); ++i) {
      if (vals[i] > out.best_member) {
        out.best_member = vals[i];
        out.best_signal = members[i];
      }
    }
    int tail_n = std::min<size_t>(3, vals.size());
    double t = 0;
    for (int i = 0; i < tail_n; ++i) t += vals[vals.size() - 1 - i];
    out.tail = std::max(out.tail, t / tail_n);
  }
  return out;
}

// Documented as a lower estimate of the essential level only.
inline double essential_value_estimate(const ConcentrationProblem& prob,
                                       const std::vector<EscapeFamily>& fams) {
  return essential_value_estimate_full(prob, fams).tail;
}

// --- projected gradient ascent ---------------------------------------------------

namespace detail {

// G f with G = sum_{z in Omega} w c_z alpha_z(S); c is given on region points.
inline VectorXcd apply_field_operator(const ConcentrationProblem& prob,
                                      const std::vector<PhasePoint>& pts,
                                      const VectorXcd& coeff, const Signal& f) {
  const GridModel& g = prob.region.grid;
  const OperatorWindow& S = prob.window;
  const double w = g.phase_weight();
  if (S.structure == WindowStructure::Shift) {
    // alpha_z(pi(z0)) = e^{2 pi i [z0,z]/n} pi(z0): the field operator is a
    // scalar multiple of the shift itself
    const int m0 = S.shift_point.m, k0 = S.shift_point.k;
    cplx scal = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
      double a = kTwoPi *
                 (double(m0) * pts[i].k - double(k0) * pts[i].m) /
                 double(g.n);
      scal += w * coeff[i] * cplx(std::cos(a), std::sin(a));
    }
    return scal * tf_shift(f, S.shift_point).data;
  }
  if (S.factored) {
    cplx csum = 0.0;
    for (int i = 0; i < coeff.size(); ++i) csum += coeff[i];
    VectorXcd acc = S.id_coeff * csum * w * f.data;
    for (const auto& t : S.terms) {
      // field H(z) = w c_z V_{r}f(z) on Omega, then synthesis onto pi(z) l
      PhaseFunction field = PhaseFunction::zero(g);
      // compute V_r f on the rows the region touches
      std::vector<char> row_used(g.n, 0);
      for (const auto& z : pts) row_used[z.m] = 1;
      MatrixXcd vf = MatrixXcd::Zero(g.n, g.n);
      for (int m = 0; m < g.n; ++m) {
        if (!row_used[m]) continue;
        VectorXcd h(g.n);
        for (int j = 0; j < g.n; ++j)
          h[j] = f.data[j] * std::conj(t.right[g.wrap(j - m)]);
        vf.row(m) = (g.delta() * dft(h)).transpose();
      }
      for (size_t i = 0; i < pts.size(); ++i)
        field.values(pts[i].m, pts[i].k) = w * coeff[i] * vf(pts[i].m, pts[i].k);
      Signal l(g, t.left);
      acc += t.weight * gabor_synthesis(field, l).data;
    }
    return acc;
  }
  PhaseFunction field = PhaseFunction::zero(g);
  for (size_t i = 0; i < pts.size(); ++i)
    field.values(pts[i].m, pts[i].k) = coeff[i];
  MatrixXcd G = fn_op_convolution_matrix(field, S.matrix);
  return G * f.data;
}

struct AscentOutcome {
  Signal f;
  double value = 0.0;  // J, not J^p
  std::vector<TraceEntry> trace;
  bool converged = false;
  int iterations = 0;
};

inline AscentOutcome ascend(const ConcentrationProblem& prob, const Signal& f0,
                            const OptimizerConfig& cfg) {
  const GridModel& g = prob.region.grid;
  const double p = prob.p;
  const double w = g.phase_weight();
  auto pts = prob.region.points();

  auto phi_of = [&](const VectorXcd& q) {
    KahanSum s;
    for (int i = 0; i < q.size(); ++i) s.add(std::pow(std::abs(q[i]), p));
    return s.value() * w;  // J^p
  };

  AscentOutcome out;
  Signal f = normalized(f0);
  VectorXcd q = cohen_on_region(prob.window, f, f, prob.region);
  double phi = phi_of(q);
  double step = cfg.step0;
  out.trace.push_back({0, std::pow(phi, 1.0 / p), 0.0});

  int stall = 0;
  int iter = 0;
  for (iter = 1; iter <= cfg.max_iter; ++iter) {
    VectorXcd coeff(q.size());
    for (int i = 0; i < q.size(); ++i) {
      double a = std::abs(q[i]);
      if (p < 2.0 && a < 1e-12) {
        coeff[i] = 0.0;  // subgradient handling at zeros of Q_S f
        continue;
      }
      coeff[i] = p * std::pow(a, p - 2.0) * std::conj(q[i]);
    }
    VectorXcd grad = apply_field_operator(prob, pts, coeff, f);
    if (!prob.window.flags.hermitian) {
      // symmetrized pairing: average with the adjoint-window application
      const OperatorWindow& S = prob.window;
      if (S.structure == WindowStructure::Shift) {
        // G = s pi(z0) with a scalar s; pi(z0)^* is a phased negative shift
        const int m0 = S.shift_point.m, k0 = S.shift_point.k;
        cplx s = 0.0;
        for (size_t i = 0; i < pts.size(); ++i) {
          double a = kTwoPi *
                     (double(m0) * pts[i].k - double(k0) * pts[i].m) /
                     double(g.n);
          s += w * coeff[i] * cplx(std::cos(a), std::sin(a));
        }
        double b = -kTwoPi * double(k0) * double(m0) / double(g.n);
        cplx adj_phase = std::conj(s) * cplx(std::cos(b), std::sin(b));
        grad = 0.5 * (grad +
                      adj_phase * tf_shift(f, {-m0, -k0}).data);
      } else {
        OperatorWindow adj = prob.window;
        adj.matrix = prob.window.matrix.adjoint();
        adj.factored = prob.window.factored;
        adj.id_coeff = std::conj(prob.window.id_coeff);
        adj.terms.clear();
        for (const auto& t : prob.window.terms)
          adj.terms.push_back({std::conj(t.weight), t.right, t.left});
        ConcentrationProblem aprob(adj, prob.region, prob.p);
        VectorXcd cconj(q.size());
        for (int i = 0; i < q.size(); ++i) cconj[i] = std::conj(coeff[i]);
        grad = 0.5 * (grad + apply_field_operator(aprob, pts, cconj, f));
      }
    }
    // tangent direction on the sphere
    cplx overlap = g.delta() * f.data.dot(grad);
    VectorXcd dir = grad - overlap * f.data / (g.delta() * f.data.squaredNorm());
    double dn = dir.norm();
    if (dn * std::sqrt(g.delta()) < 1e-16 * std::max(1.0, phi)) {
      out.converged = true;
      break;
    }
    dir /= dn;

    bool improved = false;
    double eta = step;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      Signal cand(g, f.data + eta * dir);
      cand = normalized(cand);
      VectorXcd qc = cohen_on_region(prob.window, cand, cand, prob.region);
      double pc = phi_of(qc);
      if (pc > phi * (1.0 + 1e-15) + 1e-300) {
        double gain = pc - phi;
        f = cand;
        q = qc;
        phi = pc;
        improved = true;
        out.trace.push_back({iter, std::pow(phi, 1.0 / p), eta});
        step = std::min(eta * 2.0, cfg.step0 * 16.0);
        if (gain < cfg.tol * std::max(1.0, phi))
          ++stall;
        else
          stall = 0;
        break;
      }
      eta *= 0.5;
    }
    if (!improved || stall >= 3) {
      out.converged = true;
      break;
    }
  }
  out.iterations = iter;
  out.f = f;
  out.value = std::pow(phi, 1.0 / p);
  return out;
}

inline std::vector<Signal> ascent_starts(const ConcentrationProblem& prob,
                                         const OptimizerConfig& cfg) {
  const GridModel& g = prob.region.grid;
  std::vector<Signal> starts;
  double cx, cxi;
  prob.region.centroid(cx, cxi);
  PhasePoint zc{int(std::lround(cx / g.delta())),
                int(std::lround(cxi / g.delta_xi()))};
  // eigenvector starts from the localization operator (shift-covariant)
  {
    LocalizationResult loc = localization_operator(prob.region, prob.window);
    MatrixXcd H = loc.op.matrix;
    if (!loc.op.flags.hermitian) H = MatrixXcd(0.5 * (H + H.adjoint().eval()));
    if (g.n <= 512) {
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
      starts.emplace_back(g, es.eigenvectors().col(g.n - 1));
      starts.emplace_back(g, es.eigenvectors().col(g.n - 2));
    } else {
      Rng rng(cfg.seed ^ 0x5eedULL);
      VectorXcd v(g.n);
      for (int i = 0; i < g.n; ++i) v[i] = rng.normal_cplx();
      v.normalize();
      double shift = operator_norm_estimate(H) + 1.0;
      MatrixXcd M = H + shift * identity_matrix(g);
      for (int it = 0; it < 60; ++it) {
        v = M * v;
        v.normalize();
      }
      starts.emplace_back(g, v);
    }
  }
  if (g.mode == GridMode::ContinuumEmulation) {
    starts.push_back(tf_shift(gaussian_signal(g, 1.0), zc));
    starts.push_back(tf_shift(hermite_signal(g, 1), zc));
  } else {
    Signal spike = Signal::zero(g);
    spike.data[g.wrap(zc.m)] = 1.0;
    starts.push_back(normalized(spike));
  }
  if (!cfg.covariant_starts_only) {
    int have = int(starts.size());
    for (int r = have; r < std::max(cfg.restarts, have); ++r)
      starts.push_back(random_signal(g, cfg.seed + 1000 + r));
  }
  return starts;
}

}  // namespace detail

// --- the optimizer -----------------------------------------------------------

inline ConcentrationResult optimize_concentration(
    const ConcentrationProblem& prob, const OptimizerConfig& cfg = {}) {
  const GridModel& g = prob.region.grid;
  const OperatorWindow& S = prob.window;
  ConcentrationResult res;
  res.upper_bounds.universal =
      (std::isinf(prob.p) ? 1.0 : std::pow(prob.region.measure, 1.0 / prob.p)) *
      operator_norm(S.matrix);

  if (std::isinf(prob.p)) {
    // L^infinity: the optimal value is the numerical radius; the optimizer is
    // a near-maximizing vector transported to a region point.
    res.value = numerical_radius(S);
    VectorXcd gvec = numerical_radius_vector(S);
    double cx, cxi;
    prob.region.centroid(cx, cxi);
    // nearest mask point to the centroid
    PhasePoint best{0, 0};
    double bd = 1e300;
    for (const auto& z : prob.region.points()) {
      double dx = phase_x(g, z.m) - cx, dxi = phase_xi(g, z.k) - cxi;
      double d2 = dx * dx + dxi * dxi;
      if (d2 < bd) {
        bd = d2;
        best = z;
      }
    }
    res.optimizer = tf_shift(Signal(g, gvec), best);
    res.trace.push_back({0, res.value, 0.0});
    res.converged = true;
    return res;
  }

  if (prob.p == 1.0 && S.flags.positive) {
    // exact finite-dimensional reduction: J = <H_{Omega,S} f, f>
    LocalizationResult loc = localization_operator(prob.region, S);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(loc.op.matrix);
    res.value = es.eigenvalues()[g.n - 1];
    res.optimizer = Signal(g, es.eigenvectors().col(g.n - 1));
    res.optimizer = normalized(res.optimizer);
    res.trace.push_back({0, res.value, 0.0});
    res.converged = true;
    res.upper_bounds.jensen = res.value;  // H_{Omega,S} norm is tight at p = 1
    return res;
  }

  auto starts = detail::ascent_starts(prob, cfg);
  std::vector<detail::AscentOutcome> runs(starts.size());
  parallel_for(0, long(starts.size()), [&](long i) {
    runs[i] = detail::ascend(prob, starts[i], cfg);
  });
  int best = 0;
  for (size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].value > runs[best].value + 1e-10 ||
        (std::abs(runs[i].value - runs[best].value) <= 1e-10 &&
         runs[i].iterations < runs[best].iterations))
      best = int(i);
  }
  res.value = runs[best].value;
  res.optimizer = runs[best].f;
  res.trace = runs[best].trace;
  res.converged = runs[best].converged;
  res.iterations = runs[best].iterations;

  if (S.flags.positive && g.n <= 512) {
    // Jensen route: ||H_{Omega, S^p}||^{1/p} via functional calculus
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(S.matrix);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    MatrixXcd Sp = es.eigenvectors() *
                   ev.array().pow(prob.p).matrix().asDiagonal() *
                   es.eigenvectors().adjoint();
    OperatorWindow spw(g, Sp, WindowStructure::Generic);
    detail::verify_flags(spw);
    LocalizationResult loc = localization_operator(prob.region, spw);
    res.upper_bounds.jensen =
        std::pow(operator_norm(loc.op.matrix), 1.0 / prob.p);
  }
  if (S.structure == WindowStructure::ParityMultiple && prob.p >= 2.0) {
    double cp = cosine_moment_cp(prob.p);
    double m_bound = 2.0 * std::min(std::pow(prob.region.measure, 1.0 / prob.p),
                                    std::pow(2.0 * prob.p, -1.0 / prob.p));
    res.upper_bounds.wigner_escape = cp * m_bound;
  }
  return res;
}

// --- strict gap check ----------------------------------------------------------

struct StrictGapOptions {
  OptimizerConfig optimizer;
  std::vector<EscapeFamily> families;  // empty -> defaults
  bool nonattainment_probes = false;
};

inline ConcentrationResult strict_gap_check(const ConcentrationProblem& prob,
                                            const StrictGapOptions& opts = {}) {
  const GridModel& g = prob.region.grid;
  ConcentrationResult res = optimize_concentration(prob, opts.optimizer);
  auto fams = opts.families.empty() ? default_escape_families(prob)
                                    : opts.families;
  EssentialEstimate est = essential_value_estimate_full(prob, fams);
  res.ess_lower = est.tail;
  if (est.best_member > res.value) {
    res.value = est.best_member;
    res.optimizer = est.best_signal;
  }

  const double omega_p = std::isinf(prob.p)
                             ? 1.0
                             : std::pow(prob.region.measure, 1.0 / prob.p);
  const OperatorWindow& S = prob.window;
  switch (S.structure) {
    case WindowStructure::RankOne:
    case WindowStructure::DiagonalSeries:
      res.ess_certified_upper = 0.0;
      res.ess_certificate_basis = "compact window: weakly continuous class";
      break;
    case WindowStructure::IdentityPlusCompact:
      if (S.factored) {
        res.ess_certified_upper = std::abs(S.id_coeff) * omega_p;
        res.ess_certificate_basis =
            "identity component: essential level |c| |Omega|^{1/p}";
      }
      break;
    case WindowStructure::Shift:
      if (!(S.shift_point == PhasePoint{0, 0})) {
        res.ess_certified_upper = omega_p;
        res.ess_certificate_basis =
            "shift window: value and essential level both |Omega|^{1/p}";
      }
      break;
    case WindowStructure::ParityMultiple:
      if (res.upper_bounds.wigner_escape) {
        res.ess_certified_upper = *res.upper_bounds.wigner_escape;
        res.ess_certificate_basis = "cosine-moment bound on the escape level";
      }
      break;
    default:
      break;
  }

  const double margin = 1e-3 * std::max(res.value, 1e-300);
  bool cert_gap = res.ess_certified_upper &&
                  *res.ess_certified_upper < res.value - margin;
  if (cert_gap) {
    res.verdict = "certified-gap";
    return res;
  }
  if (res.ess_lower < res.value - margin &&
      !(res.ess_certified_upper &&
        *res.ess_certified_upper >= res.value - margin)) {
    res.verdict = "empirical-gap";
    return res;
  }
  res.verdict = "threshold-suspected";

  if (opts.nonattainment_probes) {
    if (S.structure == WindowStructure::Shift &&
        !(S.shift_point == PhasePoint{0, 0})) {
      // strictness of the correlation peak: |Af(z0)| < ||f||^2 for generic f
      bool strict = true;
      for (int t = 0; t < 100 && strict; ++t) {
        Signal f = random_signal(g, opts.optimizer.seed + 50000 + t);
        cplx a = inner(f, tf_shift(f, S.shift_point));
        strict = std::abs(a) < 1.0 - 1e-9;
      }
      if (strict) res.verdict = "unattained-suspected";
    } else if (S.structure == WindowStructure::IdentityPlusCompact &&
               S.factored && !S.terms.empty()) {
      // negative-semidefinite compact part at threshold level: the inner
      // problem cannot exceed the identity level, so mass escapes
      bool neg_semidefinite = true, nonzero = false;
      for (const auto& t : S.terms) {
        bool symmetric = (t.left - t.right).norm() <=
                         1e-10 * std::max(1.0, t.left.norm());
        if (!symmetric || t.weight.real() > 1e-12 ||
            std::abs(t.weight.imag()) > 1e-12)
          neg_semidefinite = false;
        if (std::abs(t.weight) * t.left.norm() * t.right.norm() > 1e-12)
          nonzero = true;
      }
      double id_level = std::abs(S.id_coeff) * omega_p;
      if (neg_semidefinite && nonzero && res.value <= id_level * (1.0 + 1e-9))
        res.verdict = "unattained-suspected";
    }
  }
  return res;
}

}  // namespace qhalab
