#include <doctest.h>

#include <random>

#include "squeeze/core.hpp"
#include "support.hpp"

using namespace squeeze;

TEST_CASE("mobius_apply examples") {
  CHECK(std::abs(mobius_apply(MobiusDisc<double>(0.3), Cplxd(0.0)) - Cplxd(0.3)) < 1e-15);
  CHECK(std::abs(mobius_apply(MobiusDisc<double>(0.0), Cplxd(0.5, 0.2)) - Cplxd(0.5, 0.2)) < 1e-15);
  CHECK(std::abs(mobius_apply(MobiusDisc<double>(0.3), Cplxd(-0.3))) < 1e-15);
}

TEST_CASE("mobius rejects parameters off the disc and its pole") {
  CHECK_THROWS_AS(MobiusDisc<double>(Cplxd(1.0, 0.0)), Error);
  // 1 + ζ̄t = 0 at t = −1/ζ̄, which lies outside the closed disc; call it anyway
  const MobiusDisc<double> m(0.5);
  try {
    m(Cplxd(-2.0));
    FAIL("expected a singular-input error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularInput);
  }
}

TEST_CASE("mobius group law and boundary preservation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double worst_law = 0.0, worst_circle = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const MobiusDisc<double> m(test::random_in_disc(rng, 0.999));
    const Cplxd t = test::random_in_disc(rng);
    worst_law = std::max(worst_law, std::abs(m.inverse()(m(t)) - t));
    CHECK(std::abs(m(t)) < 1.0);
    worst_circle = std::max(worst_circle, std::abs(std::abs(m(std::polar(1.0, angle(rng)))) - 1.0));
  }
  CHECK(worst_law <= 1e-12);
  CHECK(worst_circle <= 1e-12);
}

TEST_CASE("mobius derivative matches a difference quotient") {
  const MobiusDisc<double> m(Cplxd(0.2, -0.4));
  const Cplxd t(0.1, 0.3);
  const double h = 1e-6;
  const Cplxd fd = (m(t + h) - m(t - h)) / (2 * h);
  CHECK(std::abs(fd - m.derivative(t)) < 1e-8);
}

TEST_CASE("rho examples") {
  CHECK(rho(0.5, 0.5) == doctest::Approx(0.0));
  CHECK(rho(0.75, 0.5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(rho(1.0 - 1e-12, 0.7) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(rho(0.2, 0.5), Error);  // 1 − |ζ| = 0.8 > r′
  CHECK_THROWS_AS(rho(0.5, 2.5), Error);
}

TEST_CASE("rho is increasing in |zeta| and r' and stays in [0,1)") {
  for (int i = 0; i < 50; ++i) {
    const double rp = 0.02 + 1.96 * i / 49.0;
    double prev = -1.0;
    for (int j = 0; j < 50; ++j) {
      const double z = std::max(0.0, 1.0 - rp) + (1.0 - std::max(0.0, 1.0 - rp)) * (j + 0.5) / 50.0;
      const double v = rho(z, rp);
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
      CHECK(v > prev);
      prev = v;
      if (i > 0) {
        const double rp_prev = 0.02 + 1.96 * (i - 1) / 49.0;
        if (1.0 - z <= rp_prev) CHECK(rho(z, rp_prev) < v);
      }
    }
  }
}

TEST_CASE("rho limit slope") {
  CHECK(rho_limit_slope(1.0) == 1.0);
  CHECK(rho_limit_slope(0.5) == 3.0);
  CHECK(rho_limit_slope(2.0) == 0.0);
  for (double rp : {0.25, 0.5, 1.0, 1.5}) {
    const double eps = 1e-6;
    const double slope = (1.0 - rho(1.0 - eps, rp)) / eps;
    CHECK(std::abs(slope - rho_limit_slope(rp)) <= 1e-2 * rho_limit_slope(rp));
  }
}

TEST_CASE("d_n closed forms") {
  CHECK(dn_worst_case(1) == doctest::Approx(1.0 / 16));
  CHECK(dn_worst_case(2) == doctest::Approx(1.0 / 64));
  CHECK(dn_worst_case(3) == doctest::Approx(1.0 / 288));
  CHECK(dn_for_matrix(UnitTriangularMatrix<double>::identity(2)) == doctest::Approx(1.0 / 32));
  CHECK(dn_for_matrix(UnitTriangularMatrix<double>::identity(1)) == doctest::Approx(1.0 / 16));

  CMatd a(2, 2);
  a << 1.0, 0.0, -1.0, 1.0;
  // hand inverse [[1,0],[1,1]], entry sum 3
  CHECK(dn_for_matrix(UnitTriangularMatrix<double>(a)) == doctest::Approx(1.0 / 48));

  CHECK(cn(1.0 / 16, 1) == doctest::Approx(1.0 / 16));
  CHECK(cn(1.0 / 64, 2) == doctest::Approx(1.0 / (64 * std::sqrt(2.0))));
  CHECK_THROWS_AS(cn(0.0, 2), Error);
}

TEST_CASE("unit triangular matrix validation") {
  CMatd a = CMatd::Identity(2, 2);
  a(0, 1) = 0.1;
  CHECK_THROWS_AS(UnitTriangularMatrix<double>{a}, Error);
  a = CMatd::Identity(2, 2);
  a(1, 1) = 2.0;
  CHECK_THROWS_AS(UnitTriangularMatrix<double>{a}, Error);
  a = CMatd::Identity(2, 2);
  a(1, 0) = 1.5;
  CHECK_THROWS_AS(UnitTriangularMatrix<double>{a}, Error);
}

TEST_CASE("unitary validation") {
  CMatd t(2, 2);
  t << 1.0, 0.0, 0.0, 2.0;
  CHECK_THROWS_AS(UnitaryMatrix<double>{t}, Error);
  std::mt19937_64 rng(3);
  CHECK_NOTHROW(test::random_unitary(4, rng));
}

TEST_CASE("norm ordering") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 6;
    CVecd z(n);
    for (int j = 0; j < n; ++j) z[j] = test::random_in_disc(rng, 3.0);
    CHECK(norm_inf(z) <= norm2(z) + 1e-15);
    CHECK(norm2(z) <= norm1(z) + 1e-15);
    CHECK(norm1(z) <= n * norm_inf(z) + 1e-15);
  }
}

TEST_CASE("inverse max norm bounded by (n-1)!") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 6; ++n) {
    double fact = 1.0;
    for (int k = 2; k < n; ++k) fact *= k;
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = test::random_admissible(n, rng);
      CHECK(max_norm(a.matrix()) <= 1.0 + 1e-15);
      CHECK(max_norm(a.inverse()) <= fact + 1e-12);
    }
    // extremal case: all subdiagonal entries −1
    CMatd worst = CMatd::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) worst(i, j) = -1.0;
    CHECK(max_norm(UnitTriangularMatrix<double>(worst).inverse()) <= fact + 1e-12);
    CHECK(dn_for_matrix(UnitTriangularMatrix<double>(worst)) >= dn_worst_case(n));
  }
}

TEST_CASE("d_n certificate: small polydisc maps into the 1-norm ball") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const auto a = test::random_admissible(n, rng);
    const double delta = 16.0 * dn_for_matrix(a);
    CHECK(dn_for_matrix(a) >= dn_worst_case(n));
    for (int k = 0; k < 10000; ++k) {
      CVecd w(n);
      for (int j = 0; j < n; ++j) w[j] = test::random_in_disc(rng, delta);
      REQUIRE(norm1(a.solve(w)) < 1.0);
    }
  }
}

TEST_CASE("core is usable at long double") {
  const MobiusDisc<long double> m(0.25L);
  CHECK(std::abs(m(-0.25L)) < 1e-18L);
  CHECK(rho(0.75L, 0.5L) == doctest::Approx(0.4));
}
