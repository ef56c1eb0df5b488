#include <catch2/catch_amalgamated.hpp>

#include "qhalab/region.hpp"
#include "qhalab/signal.hpp"
#include "qhalab/window.hpp"

using namespace qhalab;

TEST_CASE("grid invariants") {
  CHECK_THROWS(GridModel(3, GridMode::ExactCyclic));
  CHECK_THROWS(GridModel(7, GridMode::ExactCyclic));
  GridModel g(8, GridMode::ExactCyclic);
  CHECK(g.delta() == 1.0);
  CHECK(g.phase_weight() == Catch::Approx(1.0 / 8));
  GridModel c(64, GridMode::ContinuumEmulation);
  CHECK(c.delta() == Catch::Approx(1.0 / 8.0));
  CHECK(c.delta() * c.delta_xi() == Catch::Approx(1.0 / 64));
  CHECK(c.signed_index(63) == -1);
  CHECK(c.signed_index(32) == -32);
  CHECK(c.signed_index(31) == 31);
}

TEST_CASE("tf_shift identity and unitarity") {
  GridModel g(16, GridMode::ExactCyclic);
  Signal f = random_signal(g, 3);
  CHECK((tf_shift(f, {0, 0}).data - f.data).norm() == 0.0);
  for (int t = 0; t < 20; ++t) {
    Rng rng(100 + t);
    PhasePoint z{int(rng.next_u64() % 16), int(rng.next_u64() % 16)};
    Signal sf = tf_shift(f, z);
    CHECK(norm(sf) == Catch::Approx(norm(f)).margin(1e-14));
  }
}

TEST_CASE("tf_shift projective composition at n=8") {
  // brute-force matrix comparison: pi(1,0) pi(0,1) = c pi(1,1) with
  // c = e^{-2 pi i / 8} (frozen from the composition law)
  GridModel g(8, GridMode::ExactCyclic);
  Signal f = random_signal(g, 7);
  Signal lhs = tf_shift(tf_shift(f, {0, 1}), {1, 0});
  Signal rhs = tf_shift(f, {1, 1});
  cplx c_expected = std::polar(1.0, -kTwoPi / 8.0);
  CHECK((lhs.data - c_expected * rhs.data).norm() < 1e-13);
  CHECK(std::abs(std::abs(c_expected) - 1.0) < 1e-15);
}

TEST_CASE("tf_shift adjoint is a phased negative shift") {
  GridModel g(8, GridMode::ExactCyclic);
  MatrixXcd P1 = tf_shift_matrix(g, {3, 5});
  MatrixXcd P2 = tf_shift_matrix(g, {-3, -5});
  // pi(z)^* = e^{-2 pi i k m / n} pi(-z)
  cplx phase = std::polar(1.0, -kTwoPi * 5.0 * 3.0 / 8.0);
  CHECK((P1.adjoint() - phase * P2).norm() < 1e-13);
}

TEST_CASE("parity involution and spectrum") {
  GridModel g(8, GridMode::ExactCyclic);
  Signal d0 = Signal::zero(g);
  d0.data[0] = 1.0;
  CHECK((parity(d0).data - d0.data).norm() == 0.0);
  Signal f = random_signal(g, 11);
  CHECK((parity(parity(f)).data - f.data).norm() == 0.0);
  // dense eigensolver oracle: eigenvalues +-1 with multiplicities n/2+1, n/2-1
  Eigen::VectorXd ev = hermitian_eigenvalues(parity_matrix(g));
  int plus = 0, minus = 0;
  for (int i = 0; i < ev.size(); ++i) (ev[i] > 0 ? plus : minus)++;
  CHECK(plus == 5);
  CHECK(minus == 3);
}

TEST_CASE("regions: measures and rasterization") {
  GridModel g(16, GridMode::ExactCyclic);
  Region full = full_grid_region(g);
  CHECK(full.measure == Catch::Approx(16.0));

  CHECK_THROWS_WITH(make_region(g, RegionSpec::ball(100.0, 100.0, 0.01)),
                    "degenerate region");

  // measure additivity over disjoint masks is exact
  Region a = make_region(g, RegionSpec::rectangle(-3, -1, -3, 3));
  Region b = make_region(g, RegionSpec::rectangle(1, 3, -3, 3));
  RegionSpec u;
  u.kind = RegionSpec::Kind::Union;
  u.parts = {RegionSpec::rectangle(-3, -1, -3, 3),
             RegionSpec::rectangle(1, 3, -3, 3)};
  CHECK(make_region(g, u).measure == a.measure + b.measure);

  // lattice-point count oracle: disk area at n=1024
  GridModel big(1024, GridMode::ContinuumEmulation);
  Region ball = make_region(big, RegionSpec::ball(0, 0, 1.0));
  CHECK(std::abs(ball.measure - kPi) / kPi < 0.02);
}

TEST_CASE("complement within box") {
  GridModel g(32, GridMode::ContinuumEmulation);
  RegionSpec spec;
  spec.kind = RegionSpec::Kind::ComplementWithinBox;
  spec.parts = {RegionSpec::rectangle(-1, 1, -1, 1), RegionSpec::ball(0, 0, 0.5)};
  Region r = make_region(g, spec);
  Region box = make_region(g, RegionSpec::rectangle(-1, 1, -1, 1));
  Region hole = make_region(g, RegionSpec::ball(0, 0, 0.5));
  CHECK(r.count == box.count - hole.count);
}

TEST_CASE("special signals") {
  GridModel g(256, GridMode::ContinuumEmulation);
  CHECK(norm(gaussian_signal(g, 1.0)) == Catch::Approx(1.0).margin(1e-14));
  CHECK_THROWS(gaussian_signal(g, -1.0));
  CHECK_THROWS(hermite_signal(g, g.n / 4));
  CHECK_THROWS_AS(hermite_signal(GridModel(16, GridMode::ExactCyclic), 1),
                  std::invalid_argument);

  // quadrature oracle: orthonormality of the sampled Hermite family
  for (int i = 0; i <= 8; ++i)
    for (int j = i; j <= 8; ++j) {
      cplx ip = inner(hermite_signal(g, i), hermite_signal(g, j));
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
}

TEST_CASE("sampled gaussian norm converges") {
  double prev = 1e9;
  for (int n : {64, 256, 1024}) {
    GridModel g(n, GridMode::ContinuumEmulation);
    double err = std::abs(gaussian_raw_norm(g) - 1.0);
    CHECK(err <= prev + 5e-15);
    prev = err;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("dilated gaussian ambiguity closed form") {
  GridModel g(256, GridMode::ContinuumEmulation);
  for (double lam : {0.5, 1.0, 2.0}) {
    Signal f = gaussian_signal(g, lam);
    PhaseFunction A = ambiguity(f);
    double worst = 0.0;
    for (int m = 0; m < g.n; ++m)
      for (int k = 0; k < g.n; ++k) {
        double x = phase_x(g, m), xi = phase_xi(g, k);
        if (x * x + xi * xi > 4.0) continue;
        double cf = std::exp(-kPi * x * x / (2 * lam * lam)) *
                    std::exp(-kPi * lam * lam * xi * xi / 2);
        worst = std::max(worst, std::abs(std::abs(A.values(m, k)) - cf));
      }
    CHECK(worst < 1e-6);
  }
}
