#include <catch2/catch_amalgamated.hpp>

#include "qhalab/concentration.hpp"
#include "qhalab/identity_suite.hpp"

using namespace qhalab;

namespace {
OperatorWindow random_positive_compact(const GridModel& g, std::uint64_t seed,
                                       int rank = 3) {
  Rng rng(seed);
  MatrixXcd M = MatrixXcd::Zero(g.n, g.n);
  for (int r = 0; r < rank; ++r) {
    VectorXcd v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = rng.normal_cplx();
    v.normalize();
    v /= std::sqrt(g.delta());
    M += (0.2 + rng.uniform()) * rank_one_matrix(g, v, v);
  }
  OperatorWindow S(g, std::move(M), WindowStructure::Generic);
  detail::verify_flags(S);
  return S;
}
}  // namespace

TEST_CASE("functional basics") {
  GridModel g(32, GridMode::ExactCyclic);
  Region om = make_region(g, RegionSpec::rectangle(-4, 4, -0.1, 0.1));
  OperatorWindow id(g, identity_matrix(g), WindowStructure::IdentityPlusCompact);
  detail::verify_flags(id);
  for (double p : {1.0, 2.0, 3.5}) {
    ConcentrationProblem prob(id, om, p);
    Signal f = random_signal(g, 1);
    CHECK(concentration_functional(prob, f) ==
          Catch::Approx(std::pow(om.measure, 1.0 / p)).margin(1e-10));
  }
  OperatorWindow zero(g, MatrixXcd::Zero(32, 32));
  ConcentrationProblem pz(zero, om, 2.0);
  CHECK(concentration_functional(pz, random_signal(g, 2)) == 0.0);
  CHECK_THROWS(concentration_functional(pz, Signal::zero(g)));

  // universal bound on random inputs
  OperatorWindow S = random_window(g, 3);
  double opn = schatten_norm(S.matrix, INFINITY);
  for (double p : {1.0, 2.0, double(INFINITY)}) {
    ConcentrationProblem prob(S, om, p);
    for (int t = 0; t < 5; ++t) {
      Signal f = random_signal(g, 50 + t);
      double cap = std::isinf(p) ? opn : std::pow(om.measure, 1.0 / p) * opn;
      CHECK(concentration_functional(prob, f) <= cap + 1e-10);
    }
  }
}

TEST_CASE("homogeneity of degree two") {
  GridModel g(32, GridMode::ExactCyclic);
  Region om = make_region(g, RegionSpec::rectangle(-2, 2, -0.1, 0.1));
  OperatorWindow S = random_window(g, 4);
  ConcentrationProblem prob(S, om, 2.5);
  Signal f = random_signal(g, 5);
  double base = concentration_functional(prob, f);
  for (cplx a : {cplx(2.0, 0.0), cplx(0.0, -1.5), cplx(0.3, 0.4)}) {
    Signal af(g, a * f.data);
    CHECK(concentration_functional(prob, af) ==
          Catch::Approx(std::norm(a) * base).epsilon(1e-12));
  }
}

TEST_CASE("localization operator identities") {
  GridModel g(8, GridMode::ExactCyclic);
  OperatorWindow S = random_window(g, 6, true);
  Region om = make_region(g, RegionSpec::rectangle(-2, 2, -0.2, 0.2));
  LocalizationResult loc = localization_operator(om, S);

  // trace invariance under the shift action
  cplx tr = loc.op.matrix.trace();
  CHECK(std::abs(tr - om.measure * S.matrix.trace()) < 1e-10);

  // positivity transfer
  OperatorWindow Spos(g, MatrixXcd(S.matrix * S.matrix));
  detail::verify_flags(Spos);
  LocalizationResult lp = localization_operator(om, Spos);
  CHECK(lp.spectrum.back() > -1e-10);

  // full grid: irreducibility average
  LocalizationResult lf = localization_operator(full_grid_region(g), S);
  CHECK((lf.op.matrix - S.matrix.trace() * identity_matrix(g)).norm() < 1e-11);
}

TEST_CASE("p=1 reduction is exact for positive windows") {
  GridModel g(48, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 0.8));
  OperatorWindow S = random_positive_compact(g, 7);
  ConcentrationProblem prob(S, om, 1.0);
  LocalizationResult loc = localization_operator(om, S);
  for (int t = 0; t < 10; ++t) {
    Signal f = random_signal(g, 70 + t);
    double lhs = concentration_functional(prob, f);
    double rhs = (g.delta() * f.data.dot(loc.op.matrix * f.data)).real();
    CHECK(lhs == Catch::Approx(rhs).margin(1e-11));
  }
  ConcentrationResult res = optimize_concentration(prob);
  CHECK(res.value == Catch::Approx(loc.spectrum.front()).margin(1e-12));
}

TEST_CASE("jensen chain for positive windows") {
  GridModel g(48, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 0.8));
  OperatorWindow S = random_positive_compact(g, 8);
  const double p = 3.0;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(S.matrix);
  MatrixXcd Sp = es.eigenvectors() *
                 es.eigenvalues().cwiseMax(0.0).array().pow(p).matrix().asDiagonal() *
                 es.eigenvectors().adjoint();
  OperatorWindow spw(g, Sp);
  detail::verify_flags(spw);
  LocalizationResult hp = localization_operator(om, spw);
  double hp_norm = schatten_norm(hp.op.matrix, INFINITY);
  ConcentrationProblem prob(S, om, p);
  for (int t = 0; t < 10; ++t) {
    Signal f = random_signal(g, 90 + t);
    double lhs = std::pow(concentration_functional(prob, f), p);
    double mid = (g.delta() * f.data.dot(hp.op.matrix * f.data)).real();
    CHECK(lhs <= mid + 1e-10);
    CHECK(mid <= hp_norm + 1e-10);
  }
}

TEST_CASE("general-p ascent matches the eigen route at p=1") {
  GridModel g(48, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 0.8));
  OperatorWindow S = random_positive_compact(g, 9);
  ConcentrationProblem eig_prob(S, om, 1.0);
  double eig_value = optimize_concentration(eig_prob).value;
  OperatorWindow S2 = S;
  S2.flags.positive = false;  // force the generic ascent
  ConcentrationProblem asc_prob(S2, om, 1.0);
  OptimizerConfig cfg;
  cfg.max_iter = 500;
  double asc_value = optimize_concentration(asc_prob, cfg).value;
  CHECK(std::abs(asc_value - eig_value) < 1e-8);
}

TEST_CASE("monotone ascent trace") {
  GridModel g(48, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 0.8));
  OperatorWindow S = random_positive_compact(g, 10);
  ConcentrationProblem prob(S, om, 2.0);
  ConcentrationResult res = optimize_concentration(prob);
  for (size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i].value >= res.trace[i - 1].value - 1e-12);
}

TEST_CASE("shift invariance of the optimum") {
  GridModel g(48, GridMode::ContinuumEmulation);
  OperatorWindow S = random_positive_compact(g, 11);
  Region om1 = make_region(g, RegionSpec::ball(0, 0, 0.8));
  PhasePoint w{7, -5};
  Region om2 = make_region(
      g, RegionSpec::ball(-7 * g.delta(), 5 * g.delta_xi(), 0.8));

  // p = 1 route is exactly covariant
  ConcentrationProblem p1(S, om1, 1.0), p2(S, om2, 1.0);
  double v1 = optimize_concentration(p1).value;
  double v2 = optimize_concentration(p2).value;
  CHECK(std::abs(v1 - v2) < 1e-10);

  // general p with covariant starts only
  OptimizerConfig cfg;
  cfg.covariant_starts_only = true;
  ConcentrationProblem q1(S, om1, 2.0), q2(S, om2, 2.0);
  ConcentrationResult r1 = optimize_concentration(q1, cfg);
  ConcentrationResult r2 = optimize_concentration(q2, cfg);
  CHECK(std::abs(r1.value - r2.value) < 1e-8);
  // the argmax transports by the corresponding shift
  Signal moved = tf_shift(r1.optimizer, {-w.m, -w.k});
  CHECK(concentration_functional(q2, moved) ==
        Catch::Approx(r1.value).margin(1e-9));
}

TEST_CASE("escape preconditions") {
  GridModel g(64, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 1.0));
  OperatorWindow S = build_window(g, WindowSpec::rank_one(SignalSpec{}, SignalSpec{}));
  ConcentrationProblem prob(S, om, 2.0);
  CHECK_THROWS(essential_value_estimate(prob, {}));
  EscapeFamily tiny = EscapeFamily::shifted(gaussian_signal(g, 1.0), 1.0, 0.0,
                                            {0.5, 1.0, 1.5});
  CHECK_THROWS_WITH(essential_value_estimate(prob, {tiny}),
                    "grid too small to emulate escape");
  CHECK_THROWS(EscapeFamily::shifted(gaussian_signal(g, 1.0), 1, 0, {2.0, 1.0}));
}

TEST_CASE("essential estimates by structure") {
  GridModel g(1024, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 1.0));
  const double level = std::pow(om.measure, 0.5);

  OperatorWindow compact = build_window(
      g, WindowSpec::rank_one(SignalSpec{}, SignalSpec{}));
  ConcentrationProblem pc(compact, om, 2.0);
  CHECK(essential_value_estimate(pc, default_escape_families(pc)) <=
        1e-3 * level * operator_norm(compact.matrix));

  OperatorWindow id(g, identity_matrix(g), WindowStructure::IdentityPlusCompact);
  id.factored = true;
  id.id_coeff = 1.0;
  detail::verify_flags(id);
  ConcentrationProblem pi(id, om, 2.0);
  CHECK(essential_value_estimate(pi, default_escape_families(pi)) ==
        Catch::Approx(level).margin(1e-10));

  WindowSpec img = WindowSpec::identity_plus(
      1.0, WindowSpec::rank_one(SignalSpec{}, SignalSpec{}), -1.0);
  OperatorWindow S = build_window(g, img);
  ConcentrationProblem pm(S, om, 2.0);
  double est = essential_value_estimate(pm, default_escape_families(pm));
  CHECK(std::abs(est - level) / level < 0.01);
}

TEST_CASE("strict gap verdicts by structure") {
  GridModel g(128, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 0.75));

  SECTION("compact window certifies a gap") {
    OperatorWindow S = build_window(
        g, WindowSpec::rank_one(SignalSpec{}, SignalSpec{}));
    ConcentrationProblem prob(S, om, 2.0);
    ConcentrationResult res = strict_gap_check(prob);
    CHECK(res.verdict == "certified-gap");
    CHECK(res.ess_certified_upper.value() == 0.0);
    CHECK(res.value > 0.0);
    CHECK(res.ess_lower <= res.value + 1e-9);
    CHECK(res.value <= res.upper_bounds.universal + 1e-9);
  }
  SECTION("wigner window on a ball: certified by the cosine-moment bound") {
    OperatorWindow SW = build_window(g, WindowSpec::wigner());
    ConcentrationProblem prob(SW, om, 2.0);
    ConcentrationResult res = strict_gap_check(prob);
    CHECK(res.verdict == "certified-gap");
    REQUIRE(res.upper_bounds.wigner_escape.has_value());
    CHECK(*res.upper_bounds.wigner_escape < res.value);
  }
  SECTION("shift window: threshold, upgraded by the strictness probe") {
    OperatorWindow S = build_window(g, WindowSpec::shift({3, 0}));
    ConcentrationProblem prob(S, om, 2.0);
    ConcentrationResult plain = strict_gap_check(prob);
    CHECK(plain.verdict == "threshold-suspected");
    StrictGapOptions opts;
    opts.nonattainment_probes = true;
    ConcentrationResult probed = strict_gap_check(prob, opts);
    CHECK(probed.verdict == "unattained-suspected");
  }
}

TEST_CASE("p = infinity dispatch") {
  GridModel g(32, GridMode::ExactCyclic);
  Region om = make_region(g, RegionSpec::rectangle(-3, 3, -0.05, 0.05));
  OperatorWindow S = random_window(g, 20, true);
  ConcentrationProblem prob(S, om, INFINITY);
  ConcentrationResult res = optimize_concentration(prob);
  double sr = hermitian_eigenvalues(S.matrix).cwiseAbs().maxCoeff();
  CHECK(res.value == Catch::Approx(sr).margin(1e-10));
  CHECK(concentration_functional(prob, res.optimizer) ==
        Catch::Approx(res.value).margin(1e-10));
}

TEST_CASE("perturbed identity endpoint values") {
  GridModel g(128, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 1.0));
  WindowSpec s0 = WindowSpec::rank_one(SignalSpec{}, SignalSpec{});
  OperatorWindow S = build_window(g, WindowSpec::identity_plus(1.0, s0, 1.0));
  ConcentrationProblem prob(S, om, 2.0);
  ConcentrationResult res = optimize_concentration(prob);
  double id_level = std::pow(om.measure, 0.5);
  CHECK(res.value > id_level);  // the positive part raises the value
  CHECK(res.value <= res.upper_bounds.universal + 1e-9);
}
