#include <doctest.h>

#include <random>

#include "squeeze/domains.hpp"
#include "support.hpp"

using namespace squeeze;

namespace {

const PlaneDomain& unit_disc() {
  static const PlaneDomain d = PlaneDomain::disc(0.0, 1.0);
  return d;
}

const PlaneDomain& annulus() {
  static const PlaneDomain d = PlaneDomain::annulus(0.0, 0.25, 1.0);
  return d;
}

}  // namespace

TEST_CASE("contains examples") {
  CHECK(contains(unit_disc(), 0.0));
  CHECK_FALSE(contains(unit_disc(), 2.0));
  CHECK_FALSE(contains(annulus(), 0.1));
  CHECK(contains(annulus(), 0.5));
  CHECK(unit_disc().classify(1.0) == PointClass::Boundary);
  CHECK(unit_disc().classify(Cplxd(0.0, 1.0 - 1e-11)) == PointClass::Boundary);
}

TEST_CASE("boundary_distance examples") {
  CHECK(boundary_distance(unit_disc(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(boundary_distance(unit_disc(), 0.7) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(boundary_distance(annulus(), 0.5) == doctest::Approx(0.25).epsilon(1e-12));
  const auto punctured = PlaneDomain::punctured_disc(0.0, 1.0, 0.0);
  CHECK(boundary_distance(punctured, 0.3) == doctest::Approx(0.3));
  CHECK_FALSE(punctured.contains(0.0));
  CHECK_FALSE(punctured.simply_connected());
}

TEST_CASE("winding-number membership agrees with analytic predicates") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  const auto circle = BoundaryCurve::circle(Cplxd(0.2, -0.1), 1.3);
  const auto ellipse = BoundaryCurve::ellipse(Cplxd(-0.3, 0.4), 2.0, 1.0, 0.6);
  int mismatches = 0, checked = 0;
  for (int k = 0; k < 10000; ++k) {
    const Cplxd z(u(rng), u(rng));
    // circle
    const double rc = std::abs(z - Cplxd(0.2, -0.1)) - 1.3;
    if (std::abs(rc) > 1e-9) {
      ++checked;
      mismatches += (circle.winding_number(z) != 0) != (rc < 0);
    }
    // ellipse
    const Cplxd local = (z - Cplxd(-0.3, 0.4)) * std::polar(1.0, -0.6);
    const double re = std::hypot(local.real() / 2.0, local.imag() / 1.0) - 1.0;
    if (std::abs(re) > 1e-9) {
      ++checked;
      mismatches += (ellipse.winding_number(z) != 0) != (re < 0);
    }
    // annulus via the domain
    const double m = std::abs(z);
    if (std::abs(m - 1.0) > 1e-9 && std::abs(m - 0.25) > 1e-9) {
      ++checked;
      mismatches += annulus().contains(z) != (m > 0.25 && m < 1.0);
    }
  }
  CHECK(checked > 29000);
  CHECK(mismatches == 0);
}

TEST_CASE("boundary distance to a disc is |R - |z - c||") {
  std::mt19937_64 rng(19);
  const Cplxd c(0.5, -1.0);
  const double R = 1.7;
  const auto disc = PlaneDomain::disc(c, R);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Cplxd z = c + test::random_in_disc(rng, 2.5);
    worst = std::max(worst, std::abs(disc.boundary_distance(z) - std::abs(R - std::abs(z - c))));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("boundary distance is 1-Lipschitz") {
  std::mt19937_64 rng(23);
  const PlaneDomain domain(BoundaryCurve::ellipse(0.0, 2.0, 1.0), {BoundaryCurve::circle(Cplxd(0.7, 0.1), 0.3)});
  for (int k = 0; k < 1000; ++k) {
    const Cplxd z = test::random_in_disc(rng, 2.0), w = test::random_in_disc(rng, 2.0);
    CHECK(std::abs(domain.boundary_distance(z) - domain.boundary_distance(w)) <= std::abs(z - w) + 1e-12);
  }
}

TEST_CASE("polygon and digon curves") {
  const auto square = BoundaryCurve::polygon({Cplxd(-1, -1), Cplxd(1, -1), Cplxd(1, 1), Cplxd(-1, 1)});
  CHECK(square.orientation() == 1);
  CHECK(square.winding_number(0.0) == 1);
  CHECK(square.distance(Cplxd(0.2, 0.5)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(square.is_smooth());
  CHECK(square.corner_parameters().size() == 4);

  // upper half disc: diameter from −1 to 1 through 0, then the arc back through i
  const auto half = BoundaryCurve::digon(-1.0, 1.0, 0.0, Cplxd(0, 1));
  CHECK(half.orientation() == 1);
  CHECK(half.signed_area() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-5));
  CHECK(half.winding_number(Cplxd(0.0, 0.5)) == 1);
  CHECK(half.winding_number(Cplxd(0.0, -0.5)) == 0);
  CHECK(half.distance(Cplxd(0.0, 0.6)) == doctest::Approx(0.4).epsilon(1e-10));

  CHECK_THROWS_AS(BoundaryCurve::polygon({0.0, Cplxd(1, 1), 1.0, Cplxd(0, 1)}), Error);  // bow tie
}

TEST_CASE("trigonometric curve has exact derivatives") {
  const auto curve = BoundaryCurve::trig(-1, {Cplxd(0.1, 0.0), 0.0, 1.0, 0.0, Cplxd(0.05, 0.02)});
  const double s = 0.7, h = 1e-5;
  const Cplxd fd = (curve.point(s + h) - curve.point(s - h)) / (2 * h);
  CHECK(std::abs(fd - curve.tangent(s)) < 1e-8);
  const Cplxd fd2 = (curve.tangent(s + h) - curve.tangent(s - h)) / (2 * h);
  CHECK(std::abs(fd2 - curve.second_derivative(s)) < 1e-7);
}

TEST_CASE("domain construction rejects bad holes and punctures") {
  CHECK_THROWS_AS(PlaneDomain(BoundaryCurve::circle(0.0, 1.0), {BoundaryCurve::circle(0.9, 0.3)}), Error);
  CHECK_THROWS_AS(PlaneDomain(BoundaryCurve::circle(0.0, 1.0), {BoundaryCurve::circle(3.0, 0.3)}), Error);
  CHECK_THROWS_AS(PlaneDomain(BoundaryCurve::circle(0.0, 1.0),
                              {BoundaryCurve::circle(0.0, 0.5), BoundaryCurve::circle(0.0, 0.2)}),
                  Error);
  CHECK_THROWS_AS(PlaneDomain::punctured_disc(0.0, 1.0, 2.0), Error);
}

TEST_CASE("dini modulus of a circle is the identity and converges") {
  const auto circle = BoundaryCurve::circle(0.0, 1.0);
  const auto grid = log_grid(1.0, 1e-2, 4);
  const DiniModulus dm = dini_modulus(circle, grid);
  REQUIRE(dm.samples.size() == grid.size());
  CHECK(dm.samples.front().first > dm.samples.back().first);
  for (const auto& [t, w] : dm.samples) {
    CHECK(w <= t + 1e-12);
    CHECK(w >= t - 2.0 * std::numbers::pi / BoundaryCurve::kDistanceNodes);
  }
  CHECK(dm.verdict == DiniVerdict::Converged);
  // ∫_{0}^{1} t/t dt = 1 on the sampled range, up to the log-cell rule
  CHECK(dm.integral_estimate == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("dini modulus of an ellipse converges") {
  const DiniModulus dm = dini_modulus(BoundaryCurve::ellipse(0.0, 2.0, 1.0), log_grid(1.0, 1e-2, 4));
  CHECK(dm.verdict == DiniVerdict::Converged);
  for (std::size_t i = 1; i < dm.samples.size(); ++i) CHECK(dm.samples[i].second <= dm.samples[i - 1].second);
}

TEST_CASE("synthetic 1/log(1/t) modulus diverges") {
  std::vector<std::pair<double, double>> samples;
  for (double t : log_grid(0.5, 1e-12, 4)) samples.emplace_back(t, 1.0 / std::log(1.0 / t));
  CHECK(dini_integrate(samples).verdict == DiniVerdict::Diverged);

  std::vector<std::pair<double, double>> holder;
  for (double t : log_grid(0.5, 1e-12, 4)) holder.emplace_back(t, std::sqrt(t));
  CHECK(dini_integrate(holder).verdict == DiniVerdict::Converged);
}

TEST_CASE("dini modulus rejects polygons") {
  const auto square = BoundaryCurve::polygon({Cplxd(-1, -1), Cplxd(1, -1), Cplxd(1, 1), Cplxd(-1, 1)});
  try {
    dini_modulus(square, log_grid(1.0, 1e-2, 4));
    FAIL("expected unsupported-curve");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedCurve);
  }
}

namespace {

std::vector<PlaneDomain> unit_discs(int n) {
  return std::vector<PlaneDomain>(n, PlaneDomain::disc(0.0, 1.0));
}

}  // namespace

TEST_CASE("validate_cconvex passes on the 1-norm and Euclidean balls") {
  for (auto kind : {CConvexBase::Kind::L1Ball, CConvexBase::Kind::L2Ball}) {
    const auto spec = CConvexSpec::from_base({kind, {}}, 2, UnitaryMatrix<double>::identity(2),
                                             UnitTriangularMatrix<double>::identity(2), unit_discs(2));
    const auto report = validate_cconvex(spec, 2000, 42);
    CHECK(report.passed);
    CHECK(report.l1_ball_samples_checked == 2000);
    CHECK(report.normalized_samples_checked == 2000);
    CHECK(report.min_gap_to_one > 0.0);
    CHECK(report.dn == doctest::Approx(1.0 / 32));
  }
}

TEST_CASE("validate_cconvex passes on random admissible normalizations of the 1-norm ball") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 2 + trial % 2;
    const auto spec = CConvexSpec::from_base({CConvexBase::Kind::L1Ball, {}}, n, test::random_unitary(n, rng),
                                             test::random_admissible(n, rng), unit_discs(n));
    CHECK(validate_cconvex(spec, 1000, trial).passed);
  }
}

TEST_CASE("validate_cconvex reports a witness when a projection omits the origin") {
  std::vector<PlaneDomain> proj{PlaneDomain::disc(0.0, 1.0), PlaneDomain::disc(Cplxd(2.0, 0.0), 1.0)};
  const auto spec = CConvexSpec::from_base({CConvexBase::Kind::L1Ball, {}}, 2, UnitaryMatrix<double>::identity(2),
                                           UnitTriangularMatrix<double>::identity(2), proj);
  try {
    validate_cconvex(spec, 100);
    FAIL("expected validation failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(e.witness().size() == 2);
  }
}

TEST_CASE("validate_cconvex catches a domain that misses the 1-norm ball") {
  // the ball of radius 0.6 does not contain E_2
  const auto small = CConvexSpec{
      2, [](const CVecd& z) { return norm2(z) < 0.6; }, UnitaryMatrix<double>::identity(2),
      UnitTriangularMatrix<double>::identity(2), unit_discs(2), {}};
  try {
    validate_cconvex(small, 1000);
    FAIL("expected validation failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    REQUIRE(e.witness().size() == 2);
    CVecd w(2);
    w << e.witness()[0], e.witness()[1];
    CHECK(norm1(w) < 1.0);
    CHECK(norm2(w) >= 0.6);
  }
}

TEST_CASE("validate_cconvex: sampled normalized points lie in the projections") {
  // product of an ellipse containing the unit disc and a unit disc
  std::vector<PlaneDomain> factors{PlaneDomain(BoundaryCurve::ellipse(0.0, 1.0, 1.5, 0.0)),
                                   PlaneDomain::disc(0.0, 1.0)};
  const auto spec = CConvexSpec::from_base({CConvexBase::Kind::Product, factors}, 2,
                                           UnitaryMatrix<double>::identity(2),
                                           UnitTriangularMatrix<double>::identity(2), factors);
  CHECK(validate_cconvex(spec, 500).passed);

  // wrong projection: too small for the samples of the normalized domain
  std::vector<PlaneDomain> bad{PlaneDomain::disc(0.0, 1.0), PlaneDomain::disc(0.0, 1.0)};
  const auto wrong = CConvexSpec::from_base({CConvexBase::Kind::Product, factors}, 2,
                                            UnitaryMatrix<double>::identity(2),
                                            UnitTriangularMatrix<double>::identity(2), bad);
  CHECK_THROWS_AS(validate_cconvex(wrong, 500), Error);
}

TEST_CASE("projections of passing specs contain the 16 d_n disc") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const auto a = test::random_admissible(2, rng);
    const auto spec = CConvexSpec::from_base({CConvexBase::Kind::L1Ball, {}}, 2, test::random_unitary(2, rng), a,
                                             unit_discs(2));
    REQUIRE(validate_cconvex(spec, 10000, trial).passed);
    const double radius = 16.0 * dn_for_matrix(a);
    for (const auto& dj : spec.projections)
      for (int k = 0; k < 256; ++k)
        CHECK(dj.contains(std::polar(radius * (1 - 1e-12), 2 * std::numbers::pi * k / 256)));
  }
}
