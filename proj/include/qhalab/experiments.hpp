#pragma once

// Scripted reproductions: nonattainment runs, the perturbed-identity
// attainment run, the sparsified diagonal-series construction, the squeeze
// multiplier quadrature, the ball-verdict survey, and the affine (wavelet)
// diagonal-coefficient computation.

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "qhalab/concentration.hpp"
#include "qhalab/gap_criteria.hpp"
#include "qhalab/operator_rep.hpp"

namespace qhalab {

struct ExperimentRow {
  std::string parameter;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string target_basis;  // where the target comes from
};

struct ExperimentReport {
  std::string name;
  std::string inputs;  // human-readable run configuration
  std::vector<double> measured_sequence;
  std::vector<ExperimentRow> rows;
  std::string verdict;       // gap-check verdict when one ran
  bool pass = true;
  bool tail_monotone = true;  // measured tail moves one way; false flags it
  double runtime_seconds = 0.0;  // console-only; not part of the canonical report

  void add_row(const std::string& param, double measured, double target,
               double tol, const std::string& basis,
               bool relative = false) {
    double err = std::abs(measured - target);
    if (relative) err /= std::max(std::abs(target), 1e-300);
    ExperimentRow r{param, measured, target, tol, err <= tol, basis};
    pass = pass && r.pass;
    rows.push_back(r);
  }
  void add_flag(const std::string& param, bool ok, const std::string& basis) {
    ExperimentRow r{param, ok ? 1.0 : 0.0, 1.0, 0.0, ok, basis};
    pass = pass && ok;
    rows.push_back(r);
  }
};

struct ExperimentConfig {
  int n = 0;  // 0 = experiment default
  double p = 2.0;
  std::optional<RegionSpec> region;
  OptimizerConfig optimizer;
  // tf-shift-window
  int shift_m0 = 0;  // 0 = default (one sample step scaled up, see below)
  // diagonal series
  int sparsify_depth = 4;
  // born-jordan
  int bj_compare_n = 128;
};

namespace detail {

inline GridModel cont_grid(int n) {
  return GridModel(n, GridMode::ContinuumEmulation);
}

inline double region_level(const Region& omega, double p) {
  return std::pow(omega.measure, 1.0 / p);
}

// C_Omega(u)^2 = sum_v |A u(v)|^2 overlap(v) w^2, overlap via mask FFT.
inline double ambiguity_region_correlation(const Signal& u, const Region& om) {
  const GridModel& g = u.grid;
  const int n = g.n;
  PhaseFunction A = ambiguity(u);
  // overlap(v) = #{(w,z) in Omega^2 : w - z = v} = |DFT2(mask)|^2 inverse
  MatrixXcd mask(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) mask(m, k) = om.contains(m, k) ? 1.0 : 0.0;
  MatrixXcd fm(n, n);
  for (int m = 0; m < n; ++m)
    fm.row(m) = dft(VectorXcd(mask.row(m).transpose())).transpose();
  for (int k = 0; k < n; ++k) fm.col(k) = dft(VectorXcd(fm.col(k)));
  fm = fm.cwiseAbs2().cast<cplx>();
  for (int m = 0; m < n; ++m)
    fm.row(m) = idft(VectorXcd(fm.row(m).transpose())).transpose();
  for (int k = 0; k < n; ++k) fm.col(k) = idft(VectorXcd(fm.col(k)));
  // fm(v) now holds overlap counts (real up to rounding)
  KahanSum s;
  const double w2 = g.phase_weight() * g.phase_weight();
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      s.add(std::norm(A.values(m, k)) * fm(m, k).real() * w2);
  return std::sqrt(std::max(0.0, s.value()));
}

}  // namespace detail

// --- named experiments -----------------------------------------------------------

inline ExperimentReport experiment_id_minus_gauss(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "id-minus-gauss";
  const int n = cfg.n > 0 ? cfg.n : 1024;
  GridModel g = detail::cont_grid(n);
  Region omega = make_region(
      g, cfg.region.value_or(RegionSpec::ball(0.0, 0.0, 1.0)));
  const double p = cfg.p;
  rep.inputs = "n=" + std::to_string(n) + " p=" + format12(p) +
               " |Omega|=" + format12(omega.measure);

  WindowSpec spec = WindowSpec::identity_plus(
      1.0, WindowSpec::rank_one(SignalSpec{}, SignalSpec{}), -1.0);
  OperatorWindow S = build_window(g, spec);
  ConcentrationProblem prob(S, omega, p);
  const double target = detail::region_level(omega, p);

  // escape run: J along shifted copies of the Gaussian
  Signal phi0 = gaussian_signal(g, 1.0);
  double extent = 0.5 * n * g.delta();
  std::vector<double> mags;
  for (int i = 1; i <= 10; ++i) mags.push_back(0.85 * extent * i / 10.0);
  EscapeFamily fam = EscapeFamily::shifted(phi0, 1.0, 1.0, mags);
  for (const Signal& f : fam.members(g))
    rep.measured_sequence.push_back(concentration_functional(prob, f));
  double tail = rep.measured_sequence.back();
  rep.add_row("escape-tail", tail, target, 0.01,
              "closed-form limit |Omega|^{1/p}", /*relative=*/true);

  // two-term assembly against the dense route at a reduced size
  {
    GridModel gs = detail::cont_grid(128);
    OperatorWindow Ss = build_window(gs, spec);
    OperatorWindow Sd(gs, Ss.matrix, WindowStructure::Generic);
    detail::verify_flags(Sd);
    Signal f = random_signal(gs, cfg.optimizer.seed + 3);
    PhaseFunction qa = cohen_transform(Ss, f);
    PhaseFunction qb = cohen_transform(Sd, f);
    double dev = (qa.values - qb.values).cwiseAbs().maxCoeff();
    rep.add_row("pointwise-structure", dev, 0.0, 1e-10,
                "factored vs dense assembly of the same window");
  }

  // no interior optimizer exceeds the level: multistart stays at or below it
  StrictGapOptions opts;
  opts.optimizer = cfg.optimizer;
  opts.nonattainment_probes = true;
  ConcentrationResult gap = strict_gap_check(prob, opts);
  rep.verdict = gap.verdict;
  rep.add_flag("multistart-below-level", gap.value <= target * (1.0 + 1e-9),
               "upper bound |Omega|^{1/p} ||S||");
  rep.add_flag("verdict-unattained-suspected",
               gap.verdict == "unattained-suspected", "gap diagnostic");
  return rep;
}

inline ExperimentReport experiment_tf_shift_window(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "tf-shift-window";
  const int n = cfg.n > 0 ? cfg.n : 1024;
  GridModel g = detail::cont_grid(n);
  Region omega = make_region(
      g, cfg.region.value_or(RegionSpec::ball(0.0, 0.0, 1.0)));
  const double p = cfg.p;
  const int m0 = cfg.shift_m0 > 0 ? cfg.shift_m0 : std::max(1, n / 256);
  const double x0 = m0 * g.delta();
  rep.inputs = "n=" + std::to_string(n) + " p=" + format12(p) +
               " x0=" + format12(x0);

  OperatorWindow S = build_window(g, WindowSpec::shift({m0, 0}));
  ConcentrationProblem prob(S, omega, p);
  const double target = detail::region_level(omega, p);

  std::vector<double> lambdas{0.5, 1.0, 2.0, 3.0, 4.0, 6.0};
  double closed_dev = 0.0;
  for (double lam : lambdas) {
    Signal f = gaussian_signal(g, lam);
    double J = concentration_functional(prob, f);
    rep.measured_sequence.push_back(J);
    double closed = target * std::exp(-kPi * x0 * x0 / (2.0 * lam * lam));
    closed_dev = std::max(closed_dev, std::abs(J - closed));
  }
  rep.add_row("escape-tail", rep.measured_sequence.back(), target, 0.01,
              "closed-form limit |Omega|^{1/p}", /*relative=*/true);
  rep.add_row("gaussian-ambiguity-closed-form", closed_dev, 0.0, 1e-4,
              "dilated Gaussian correlation value");

  // strictness of the correlation peak away from the origin
  bool strict = true;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    Signal f = random_signal(g, cfg.optimizer.seed + 900 + t);
    double a = std::abs(inner(f, tf_shift(f, {m0, 0})));
    worst = std::max(worst, a);
    strict = strict && a < 1.0 - 1e-9;
  }
  rep.add_row("radar-worst-peak", worst, 0.0, 1.0 - 1e-9,
              "correlation peak strictly below 1 off the origin");
  rep.add_flag("radar-strictness", strict,
               "correlation peak strictly below 1 off the origin");

  StrictGapOptions opts;
  opts.optimizer = cfg.optimizer;
  opts.nonattainment_probes = true;
  ConcentrationResult gap = strict_gap_check(prob, opts);
  rep.verdict = gap.verdict;
  rep.add_flag("verdict-unattained-suspected",
               gap.verdict == "unattained-suspected", "gap diagnostic");
  return rep;
}

inline ExperimentReport experiment_perturbation_identity(
    const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "perturbation-identity";
  const int n = cfg.n > 0 ? cfg.n : 512;
  GridModel g = detail::cont_grid(n);
  Region omega = make_region(
      g, cfg.region.value_or(RegionSpec::ball(0.0, 0.0, 1.0)));
  const double p = cfg.p;
  rep.inputs = "n=" + std::to_string(n) + " p=" + format12(p) + " c=1";

  WindowSpec s0 = WindowSpec::rank_one(SignalSpec{}, SignalSpec{});
  OperatorWindow S = build_window(g, WindowSpec::identity_plus(1.0, s0, 1.0));
  OperatorWindow S0 = build_window(g, s0);
  ConcentrationProblem prob(S, omega, p);

  ConcentrationResult opt = optimize_concentration(prob, cfg.optimizer);
  const double id_level = detail::region_level(omega, p);

  // endpoint formula: value = max(|c| |Omega|^{1/p}, max_u ||c + Q_{S0} u||),
  // inner maximum evaluated on localization eigenvectors
  double inner_best = 0.0;
  {
    LocalizationResult loc = localization_operator(omega, S0);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(loc.op.matrix);
    for (int j = 0; j < 3; ++j) {
      Signal u(g, es.eigenvectors().col(g.n - 1 - j));
      u = normalized(u);
      double J = concentration_functional(prob, u);  // ||c + Q_{S0} u||
      inner_best = std::max(inner_best, J);
    }
  }
  double formula = std::max(id_level, inner_best);
  rep.add_row("endpoint-formula", opt.value, formula, 1e-4,
              "identity-plus-compact endpoint maximum", /*relative=*/true);

  // escape with a retained profile: f_t = sqrt(1-t) f* + sqrt(t) shifted g
  double extent = 0.5 * n * g.delta();
  PhasePoint far{int(std::lround(0.8 * extent / g.delta())),
                 int(std::lround(0.8 * extent / g.delta()))};
  Signal gshift = tf_shift(gaussian_signal(g, 1.0), far);
  PhaseFunction q0 = cohen_transform(S0, opt.optimizer);
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    Signal f(g, std::sqrt(1.0 - t) * opt.optimizer.data +
                    std::sqrt(t) * gshift.data);
    f = normalized(f);
    double J = concentration_functional(prob, f);
    // limit: || c + (1-t) Q_{S0} f* ||_{L^p(Omega)}
    KahanSum s;
    for (const auto& z : omega.points())
      s.add(std::pow(std::abs(1.0 + (1.0 - t) * q0.at(z).real()), p));
    double limit = std::pow(s.value() * g.phase_weight(), 1.0 / p);
    rep.measured_sequence.push_back(J);
    rep.add_row("profile-mix-t=" + format12(t), J, limit, 1e-8,
                "retained-profile limit value");
  }

  StrictGapOptions opts;
  opts.optimizer = cfg.optimizer;
  ConcentrationResult gap = strict_gap_check(prob, opts);
  rep.verdict = gap.verdict;
  rep.add_flag("verdict-certified-gap", gap.verdict == "certified-gap",
               "positive compact part raises the value above the identity level");
  return rep;
}

inline ExperimentReport experiment_diagonal_series(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "diagonal-series-local-compactness";
  const int n = cfg.n > 0 ? cfg.n : 1024;
  GridModel g = detail::cont_grid(n);
  Region omega = make_region(
      g, cfg.region.value_or(RegionSpec::ball(0.0, 0.0, 0.25)));
  const double p = cfg.p;
  rep.inputs = "n=" + std::to_string(n) + " p=" + format12(p) +
               " |Omega|=" + format12(omega.measure);

  // sparsify: C_Omega(phi_{m_k}) <= 2^{-k}, indices strictly increasing
  std::vector<int> indices;
  std::vector<double> weights;
  int m_prev = 0;
  for (int k = 1; k <= cfg.sparsify_depth; ++k) {
    double targetC = std::pow(2.0, -k);
    int lo = m_prev + 1, hi = lo;
    auto fits = [&](int m) {
      return detail::ambiguity_region_correlation(hermite_signal(g, m), omega) <=
             targetC;
    };
    while (hi < g.n / 4 && !fits(hi)) {
      lo = hi + 1;
      hi = std::min(g.n / 4 - 1, hi * 2 + 1);
      if (hi == g.n / 4 - 1 && !fits(hi))
        throw std::invalid_argument("insufficient resolution for sparsification");
    }
    while (lo < hi) {  // first index at or above lo satisfying the bound
      int mid = (lo + hi) / 2;
      if (fits(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    double c = detail::ambiguity_region_correlation(hermite_signal(g, lo), omega);
    rep.add_row("C-omega-k=" + std::to_string(k), c, 0.0, targetC,
                "ambiguity double integral over the region");
    indices.push_back(lo);
    weights.push_back(1.0);
    m_prev = lo;
    rep.measured_sequence.push_back(double(lo));
  }

  OperatorWindow S = build_window(g, WindowSpec::diagonal_series(indices, weights));
  rep.add_row("operator-norm", operator_norm(S.matrix), 1.0, 1e-8,
              "orthonormal projections with unit weights");

  // localized operator eigenvalue decay past the effective-rank proxy
  LocalizationResult loc = localization_operator(omega, S);
  long r_star = std::lround(std::ceil(4.0 * omega.measure * n));
  double tail_eig = 0.0;
  for (size_t i = r_star; i < loc.spectrum.size(); ++i)
    tail_eig = std::max(tail_eig, std::abs(loc.spectrum[i]));
  rep.add_row("H-eigen-decay", tail_eig, 0.0, 1e-6,
              "eigensolver on the assembled localization operator");

  // escape families lose everything: the window is locally compact.
  // Position escape is exponentially fast; the Hermite (index) direction
  // passes through the window's own annuli and decays only at the rate of
  // the local ambiguity mass, so it is reported with a loose gate.
  ConcentrationProblem prob(S, omega, p);
  const double scale = detail::region_level(omega, p) * operator_norm(S.matrix);
  {
    double extent = 0.5 * n * g.delta();
    std::vector<double> mags;
    for (int i = 1; i <= 8; ++i)
      mags.push_back(0.95 * extent * std::sqrt(2.0) * i / 8.0);
    EscapeFamily shifted =
        EscapeFamily::shifted(gaussian_signal(g, 1.0), 1.0, 1.0, mags);
    double est = essential_value_estimate(prob, {shifted});
    rep.add_row("shifted-escape-tail", est, 0.0, 1e-3 * scale,
                "position escape on the oversized grid");
  }
  {
    std::vector<int> ladder;
    for (int j = 2; j < g.n / 4; j *= 2) ladder.push_back(j);
    EscapeFamily herm = EscapeFamily::hermite(ladder);
    std::vector<double> vals;
    for (const Signal& f : herm.members(g))
      vals.push_back(concentration_functional(prob, f));
    for (double v : vals) rep.measured_sequence.push_back(v);
    rep.add_row("hermite-escape-tail", vals.back(), 0.0, 0.25 * scale,
                "index escape; decays with the local ambiguity mass");
  }
  return rep;
}

inline ExperimentReport experiment_born_jordan_msech(
    const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "born-jordan-msech";
  rep.inputs = "lambda in [-5,5]";

  // quadrature of int e^{-is lambda} / (2 cosh(s/2)) ds against the
  // closed form pi / cosh(pi lambda)
  double worst = 0.0;
  for (double lam = -5.0; lam <= 5.0 + 1e-12; lam += 0.25) {
    auto integrand = [lam](double s) {
      return std::cos(s * lam) / std::cosh(0.5 * s);
    };
    double val = adaptive_simpson(integrand, 0.0, 90.0, 1e-13);
    double closed = kPi / std::cosh(kPi * lam);
    worst = std::max(worst, std::abs(val - closed));
    rep.measured_sequence.push_back(val);
  }
  rep.add_row("squeeze-multiplier", worst, 0.0, 1e-8,
              "independent quadrature vs sech closed form");

  // two constructions of the window agree in operator norm
  const int n = cfg.bj_compare_n;
  GridModel g = detail::cont_grid(n);
  OperatorWindow bj_sinc = build_window(
      g, WindowSpec::born_jordan(WindowSpec::BjMethod::SincSymbol));
  OperatorWindow bj_avg = build_window(
      g, WindowSpec::born_jordan(WindowSpec::BjMethod::TauAverage, 201));
  double rel = schatten_norm(MatrixXcd(bj_sinc.matrix - bj_avg.matrix), INFINITY) /
               schatten_norm(bj_sinc.matrix, INFINITY);
  rep.add_row("construction-cross-check", rel, 0.0, 1e-3,
              "sinc symbol vs 201-point tau average");

  // concentration optimizer existence at p = 2 on a unit ball
  Region omega = make_region(g, RegionSpec::ball(0.0, 0.0, 1.0));
  ConcentrationProblem prob(bj_sinc, omega, 2.0);
  ConcentrationResult opt = optimize_concentration(prob, cfg.optimizer);
  rep.measured_sequence.push_back(opt.value);
  rep.add_flag("ascent-converged",
               opt.converged && opt.value > 0.0 &&
                   opt.value <= opt.upper_bounds.universal + 1e-9,
               "interior ascent on the ball");
  return rep;
}

inline ExperimentReport experiment_wigner_gap_survey(
    const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.name = "wigner-gap-survey";
  const int n = cfg.n > 0 ? cfg.n : 64;
  GridModel g = detail::cont_grid(n);
  rep.inputs = "n=" + std::to_string(n);
  OperatorWindow SW = build_window(g, WindowSpec::wigner());

  for (double p : {2.0, 3.0, 4.0}) {
    for (double R : {0.25, 0.5, 1.0, 2.0}) {
      BallVerdict v = wigner_ball_verdict(1, p, R);
      Region omega = make_region(g, RegionSpec::ball(0.0, 0.0, R));
      ConcentrationProblem prob(SW, omega, p);
      StrictGapOptions opts;
      opts.optimizer = cfg.optimizer;
      ConcentrationResult gap = strict_gap_check(prob, opts);
      rep.measured_sequence.push_back(gap.value);
      std::string tag = "p=" + format12(p) + ",R=" + format12(R);
      if (v.certified)
        rep.add_flag("certified-" + tag, gap.verdict == "certified-gap",
                     "ball criterion " + v.criterion);
      else
        rep.add_flag("reported-" + tag, !gap.verdict.empty(),
                     "uncertified ball; verdict reported only");
    }
  }
  return rep;
}

inline ExperimentReport run_experiment(const std::string& name,
                                       const ExperimentConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  if (name == "id-minus-gauss")
    rep = experiment_id_minus_gauss(cfg);
  else if (name == "tf-shift-window")
    rep = experiment_tf_shift_window(cfg);
  else if (name == "perturbation-identity")
    rep = experiment_perturbation_identity(cfg);
  else if (name == "diagonal-series-local-compactness")
    rep = experiment_diagonal_series(cfg);
  else if (name == "born-jordan-msech")
    rep = experiment_born_jordan_msech(cfg);
  else if (name == "wigner-gap-survey")
    rep = experiment_wigner_gap_survey(cfg);
  else
    throw std::invalid_argument("unknown experiment: " + name);
  // the measured tail should move one way toward its target after burn-in;
  // if it does not, the report carries the flag together with the full trace
  if (rep.measured_sequence.size() >= 4) {
    size_t tail = std::max<size_t>(3, rep.measured_sequence.size() / 2);
    size_t start = rep.measured_sequence.size() - tail;
    bool up = true, down = true;
    for (size_t i = start + 1; i < rep.measured_sequence.size(); ++i) {
      up = up && rep.measured_sequence[i] >= rep.measured_sequence[i - 1] - 1e-12;
      down = down && rep.measured_sequence[i] <= rep.measured_sequence[i - 1] + 1e-12;
    }
    rep.tail_monotone = up || down;
  }
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

// --- affine diagonal coefficient ---------------------------------------------------

struct AffineParameters {
  int n_seq = 20;      // index n of the frequency-spread sequence
  double m_n = 10.0;   // drift M_n
  double B = 1.0;      // |b| <= B
  double L = 1.0;      // |log a| <= L
  int grid_b = 21;     // evaluation grid over K
  int grid_a = 21;
  // region inside K for the L^p check, rectangle in (b, a)
  double om_b0 = -0.5, om_b1 = 0.5, om_a0 = 0.8, om_a1 = 1.25;
  double p = 2.0;
};

// A(b,a) = (1/n) int_{J cap (J - log a)} e^{2 pi i b e^s} ds,
// J = [-M_n - n, -M_n]; empty overlap for |log a| >= n.
inline cplx affine_coefficient(const AffineParameters& prm, double b, double a) {
  const double n = prm.n_seq;
  const double la = std::log(a);
  const double lo = -prm.m_n - n + std::max(0.0, -la);
  const double hi = -prm.m_n - std::max(0.0, la);
  if (hi <= lo) return 0.0;
  double re = adaptive_simpson(
      [b](double s) { return std::cos(kTwoPi * b * std::exp(s)); }, lo, hi,
      1e-14);
  double im = adaptive_simpson(
      [b](double s) { return std::sin(kTwoPi * b * std::exp(s)); }, lo, hi,
      1e-14);
  return cplx(re / n, im / n);
}

inline ExperimentReport affine_autovoice(const AffineParameters& prm) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.name = "affine-autovoice";
  rep.inputs = "n=" + std::to_string(prm.n_seq) + " M_n=" + format12(prm.m_n) +
               " K={|b|<=" + format12(prm.B) + ",|log a|<=" + format12(prm.L) +
               "}";
  if (prm.n_seq < 2) throw std::invalid_argument("n_seq >= 2 required");
  if (prm.L >= prm.n_seq)
    throw std::invalid_argument("overlap empty: L >= n");

  // (i) overlap identity: measure of I_n cap a^{-1} I_n in d omega/omega
  double worst_overlap = 0.0;
  for (int i = 0; i <= 16; ++i) {
    double la = -prm.L + 2.0 * prm.L * i / 16.0;
    double lo = -prm.m_n - prm.n_seq + std::max(0.0, -la);
    double hi = -prm.m_n - std::max(0.0, la);
    double measured = std::max(0.0, hi - lo);
    worst_overlap =
        std::max(worst_overlap,
                 std::abs(measured - (prm.n_seq - std::abs(la))));
  }
  rep.add_row("overlap-identity", worst_overlap, 0.0, 1e-12,
              "interval length in the log variable");

  // exact spot values
  rep.add_row("value-at-identity", std::abs(affine_coefficient(prm, 0.0, 1.0)),
              1.0, 1e-12, "full overlap, unit phase");
  rep.add_row("value-at-a=e",
              std::abs(affine_coefficient(prm, 0.0, std::exp(1.0))),
              (prm.n_seq - 1.0) / prm.n_seq, 1e-12,
              "overlap length (n-1)/n, unit phase");

  // (ii) uniform deviation bound over K
  double sup_dev = 0.0;
  for (int i = 0; i < prm.grid_b; ++i) {
    double b = -prm.B + 2.0 * prm.B * i / (prm.grid_b - 1);
    for (int j = 0; j < prm.grid_a; ++j) {
      double la = -prm.L + 2.0 * prm.L * j / (prm.grid_a - 1);
      cplx v = affine_coefficient(prm, b, std::exp(la));
      sup_dev = std::max(sup_dev, std::abs(v - 1.0));
    }
  }
  double bound = kTwoPi * prm.B * std::exp(-prm.m_n) + prm.L / prm.n_seq;
  rep.measured_sequence.push_back(sup_dev);
  rep.add_flag("uniform-bound", sup_dev <= bound + 1e-12,
               "drift-plus-overlap deviation bound " + format12(bound));

  // (iii) L^p over a region inside K with the left-invariant weight a^{-2}
  double mu = (prm.om_b1 - prm.om_b0) * (1.0 / prm.om_a0 - 1.0 / prm.om_a1);
  auto inner_a = [&](double b) {
    return gauss_legendre(
        [&](double a) {
          double v = std::abs(affine_coefficient(prm, b, a));
          return std::pow(v, prm.p) / (a * a);
        },
        prm.om_a0, prm.om_a1, 4);
  };
  double ip = gauss_legendre([&](double b) { return inner_a(b); }, prm.om_b0,
                             prm.om_b1, 4);
  double lp = std::pow(ip, 1.0 / prm.p);
  rep.add_row("lp-vs-haar-measure", lp, std::pow(mu, 1.0 / prm.p), 0.02,
              "left-Haar measure of the region", /*relative=*/true);
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace qhalab
