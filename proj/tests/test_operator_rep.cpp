#include <catch2/catch_amalgamated.hpp>

#include "qhalab/identity_suite.hpp"
#include "qhalab/operator_rep.hpp"

using namespace qhalab;

namespace {
OperatorWindow random_positive_compact(const GridModel& g, std::uint64_t seed,
                                       int rank = 2) {
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

TEST_CASE("density operator checks") {
  GridModel g(16, GridMode::ExactCyclic);
  Signal f = random_signal(g, 1);
  DensityOperator rho =
      DensityOperator::from_matrix(g, rank_one_matrix(g, f.data, f.data));
  CHECK(rho.base.flags.positive);
  OperatorWindow notpos = random_window(g, 2, true);
  CHECK_THROWS(DensityOperator::from_matrix(g, notpos.matrix));
}

TEST_CASE("husimi transform") {
  GridModel g(256, GridMode::ContinuumEmulation);
  Signal phi0 = gaussian_signal(g, 1.0);
  OperatorWindow P0(g, rank_one_matrix(g, phi0.data, phi0.data),
                    WindowStructure::RankOne);
  detail::verify_flags(P0);
  PhaseFunction h = husimi_transform(P0);  // default window is the same state
  double worst = 0.0;
  for (int m = 0; m < g.n; ++m)
    for (int k = 0; k < g.n; ++k) {
      double r2 = phase_abs2(g, {m, k});
      if (r2 > 4.0) continue;
      double cf = std::exp(-kPi * r2);
      worst = std::max(worst, std::abs(h.values(m, k).real() - cf) / cf);
    }
  CHECK(worst < 1e-4);

  // symbol route at n = 8: convolution of the Weyl symbols
  GridModel gs(8, GridMode::ExactCyclic);
  OperatorWindow T = random_window(gs, 3), S = random_window(gs, 4);
  PhaseFunction lhs = husimi_transform(T, S);
  PhaseFunction rhs = field_convolution(
      weyl_symbol(T), weyl_symbol_of(gs, reflect_matrix(gs, S.matrix)));
  CHECK((lhs.values - rhs.values).cwiseAbs().maxCoeff() < 1e-10);

  // Young bound on random inputs
  double linf = lhs.values.cwiseAbs().maxCoeff();
  CHECK(linf <= T.matrix.norm() * S.matrix.norm() + 1e-10);
}

TEST_CASE("total correlation") {
  GridModel g(16, GridMode::ExactCyclic);
  OperatorWindow H = random_window(g, 5, true);
  TotalCorrelation tc = total_correlation(H);
  CHECK(std::abs(tc.field.values(0, 0)) ==
        Catch::Approx(tc.hs_norm_sq).margin(1e-10));
  CHECK(tc.peak_attained);
  CHECK(tc.field.values.cwiseAbs().maxCoeff() <= tc.hs_norm_sq * (1 + 1e-12));

  // nilpotent rank-one: zero total correlation at the origin
  Signal f = random_signal(g, 6);
  VectorXcd gperp = random_signal(g, 7).data;
  gperp -= g.delta() * f.data.dot(gperp) * f.data /
           (g.delta() * f.data.squaredNorm());
  Signal h = normalized(Signal(g, gperp));
  OperatorWindow N(g, rank_one_matrix(g, f.data, h.data));
  TotalCorrelation tcn = total_correlation(N);
  CHECK(std::abs(tcn.field.values(0, 0)) < 1e-12);
  CHECK_FALSE(tcn.peak_attained);

  // rank-one self-correlation is the squared ambiguity
  OperatorWindow fxf(g, rank_one_matrix(g, f.data, f.data));
  TotalCorrelation tcf = total_correlation(fxf);
  PhaseFunction A = ambiguity(f);
  double worst = 0.0;
  for (int m = 0; m < 16; ++m)
    for (int k = 0; k < 16; ++k)
      worst = std::max(worst, std::abs(tcf.field.values(m, k) -
                                       std::norm(A.values(m, k))));
  CHECK(worst < 1e-10);
}

TEST_CASE("spectral decomposition linearity of the representation") {
  GridModel g(12, GridMode::ExactCyclic);
  std::vector<Signal> fs{random_signal(g, 8), random_signal(g, 9),
                         random_signal(g, 10)};
  std::vector<double> lam{0.5, 0.3, 0.2};
  MatrixXcd T = MatrixXcd::Zero(12, 12);
  for (int i = 0; i < 3; ++i)
    T += lam[i] * rank_one_matrix(g, fs[i].data, fs[i].data);
  OperatorWindow S = random_window(g, 11);
  PhaseFunction lhs = husimi_transform(OperatorWindow(g, T), S);
  MatrixXcd rhs = MatrixXcd::Zero(12, 12);
  for (int i = 0; i < 3; ++i)
    rhs += lam[i] * cohen_transform(reflect_window(reflect_window(S)), fs[i]).values;
  CHECK((lhs.values - rhs).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("hilbert-schmidt concentration at p = infinity") {
  GridModel g(48, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0.3, -0.2, 0.6));
  OperatorWindow S = random_window(g, 12);
  S.matrix /= S.matrix.norm();
  OperatorConcentrationResult res =
      optimize_hs_concentration(S, om, INFINITY);
  CHECK(res.value == Catch::Approx(1.0).margin(1e-10));
  // the optimizer is the shifted adjoint; the normalized field peak on the
  // region equals the Hilbert-Schmidt norm
  PhaseFunction f = husimi_transform(OperatorWindow(g, res.optimizer), S);
  double got = 0.0;
  for (const auto& z : om.points())
    got = std::max(got, std::abs(f.at(z)));
  CHECK(got == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("hilbert-schmidt concentration: matrix and symbol routes agree") {
  GridModel g(32, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 0.8));
  OperatorWindow S = build_window(g, WindowSpec::rank_one(SignalSpec{}, SignalSpec{}));
  OptimizerConfig cfg;
  cfg.restarts = 3;
  cfg.max_iter = 250;
  OperatorConcentrationResult mat = optimize_hs_concentration(S, om, 2.0, cfg);
  double sym = optimize_hs_symbol_route(S, om, 2.0, cfg);
  CHECK(std::abs(mat.value - sym) / sym < 1e-4);
}

TEST_CASE("total-correlation class escapes to the measure level") {
  GridModel g(128, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 0.25));
  OperatorConcentrationResult res = optimize_tc_concentration(om, 2.0);
  CHECK(res.unattained_flag);
  CHECK(res.family_values.back() >= 0.98 * std::pow(om.measure, 0.5));
  // the family values increase toward the level
  for (size_t i = 1; i < res.family_values.size(); ++i)
    CHECK(res.family_values[i] >= res.family_values[i - 1] - 1e-12);
}

TEST_CASE("density route equals the signal route at a rank-one state") {
  GridModel g(64, GridMode::ContinuumEmulation);
  Region om = make_region(g, RegionSpec::ball(0, 0, 0.8));
  OptimizerConfig cfg;
  cfg.restarts = 3;
  for (int t = 0; t < 3; ++t) {
    OperatorWindow S = random_positive_compact(g, 20 + t);
    auto res = optimize_operator_concentration(S, om, 2.0,
                                               OperatorClass::Density, cfg);
    INFO("window " << t);
    CHECK(std::abs(res.value - res.signal_route_value) <=
          1e-4 * res.signal_route_value);
    CHECK(res.second_singular < 1e-4);
    double tr = res.optimizer.trace().real();
    CHECK(tr == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("polarized transform guard and checks at n = 8") {
  GridModel g(8, GridMode::ExactCyclic);
  OperatorWindow T = random_window(g, 30);
  OperatorWindow S = random_window(g, 31);
  S.matrix /= S.matrix.norm();

  DoublePhaseFunction q = polarized_cohen(T, S);
  CHECK(q.l2_norm() == Catch::Approx(T.matrix.norm()).margin(1e-10));

  OperatorWindow W = random_window(g, 32);
  W.matrix /= W.matrix.norm();
  OperatorWindow V = random_window(g, 33);
  DoublePhaseFunction qw = polarized_cohen(V, W);
  double w2 = g.phase_weight() * g.phase_weight();
  cplx pair = (q.values.array() * qw.values.array().conjugate()).sum() * w2;
  cplx tv = (T.matrix.array() * V.matrix.array().conjugate()).sum();
  cplx sw = (S.matrix.array() * W.matrix.array().conjugate()).sum();
  CHECK(std::abs(pair - tv * std::conj(sw)) < 1e-10);

  MatrixXcd rec = polarized_adjoint(g, S, q);
  CHECK((rec - T.matrix).cwiseAbs().maxCoeff() < 1e-10);

  GridModel big(32, GridMode::ExactCyclic);
  OperatorWindow Tb = random_window(big, 34), Sb = random_window(big, 35);
  CHECK_THROWS(polarized_cohen(Tb, Sb));
}

TEST_CASE("polarized concentration never beats the kernel bound") {
  // the double-phase value of a normalized pair is capped by the product of
  // Hilbert-Schmidt norms; random pairs sit strictly inside
  GridModel g(8, GridMode::ExactCyclic);
  OperatorWindow S = random_window(g, 36);
  S.matrix /= S.matrix.norm();
  const double w2 = g.phase_weight() * g.phase_weight();
  for (int t = 0; t < 5; ++t) {
    OperatorWindow T = random_window(g, 40 + t);
    T.matrix /= T.matrix.norm();
    DoublePhaseFunction q = polarized_cohen(T, S);
    // L^p over a double-phase sub-box
    double val = 0.0;
    long nn = 8L * 8;
    for (long wi = 0; wi < nn / 2; ++wi)
      for (long zi = 0; zi < nn / 2; ++zi)
        val += std::norm(q.values(wi, zi)) * w2;
    CHECK(std::sqrt(val) <= 1.0 + 1e-12);
  }
}
