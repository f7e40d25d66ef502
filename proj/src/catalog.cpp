#include <cmath>
#include <limits>
#include <numbers>

#include "squeeze/conformal.hpp"

namespace squeeze::catalog {

namespace {

using std::numbers::pi;

// e^{iα} with α chosen so that scale·e^{iα} > 0
Cplxd unit_rotation(Cplxd scale) { return std::conj(scale) / std::abs(scale); }

Cplxd infinity() {
  const double inf = std::numeric_limits<double>::infinity();
  return {inf, inf};
}

// Disc automorphism sending c to 0: t ↦ (t − c)/(1 − c̄t). Evaluated in long
// double: near the circle both numerator and denominator cancel.
struct Recentre {
  Cplxd c;
  using L = std::complex<long double>;
  Cplxd operator()(Cplxd t) const {
    const L lt(t), lc(c);
    return Cplxd((lt - lc) / (1.0L - std::conj(lc) * lt));
  }
  Cplxd derivative(Cplxd t) const {
    const L lt(t), lc(c);
    const L den = 1.0L - std::conj(lc) * lt;
    return Cplxd((1.0L - std::norm(lc)) / (den * den));
  }
  Cplxd inverse(Cplxd w) const {
    const L lw(w), lc(c);
    return Cplxd((lw + lc) / (1.0L + std::conj(lc) * lw));
  }
};

}  // namespace

ConformalMapHandle disc_map(Cplxd center, double radius, Cplxd p) {
  auto source = std::make_shared<const PlaneDomain>(PlaneDomain::disc(center, radius));
  if (!source->contains(p)) throw Error(ErrorKind::Domain, "basepoint outside the disc", {p});
  const Recentre m{(p - center) / radius};
  auto forward = [=](Cplxd z) { return m((z - center) / radius); };
  auto inverse = [=](Cplxd w) { return center + radius * m.inverse(w); };
  auto derivative = [=](Cplxd z) { return m.derivative((z - center) / radius) / radius; };
  return ConformalMapHandle(forward, inverse, derivative, p, 0.0, Backend::ClosedForm, source, "disc");
}

Cplxd theta_ratio(Cplxd w, double q, Cplxd* derivative) {
  if (!(q >= 0.0 && q < 1.0)) throw Error(ErrorKind::Domain, "nome must lie in [0,1)", {}, q);
  // θ1(w) = 2Σ (−1)ⁿ q^{(n+½)²} sin((2n+1)w),  θ4(w) = 1 + 2Σ (−1)ⁿ q^{n²} cos(2nw)
  Cplxd t1 = 0, dt1 = 0, t4 = 1, dt4 = 0;
  const double lq = q > 0 ? std::log(q) : -std::numeric_limits<double>::infinity();
  for (int n = 0; n < 400; ++n) {
    const double sign = n % 2 ? -1.0 : 1.0;
    const double c1 = 2.0 * sign * std::exp(lq * (n + 0.5) * (n + 0.5));
    const double k1 = 2 * n + 1;
    const Cplxd a1 = c1 * std::sin(k1 * w);
    const Cplxd b1 = c1 * k1 * std::cos(k1 * w);
    t1 += a1;
    dt1 += b1;
    Cplxd a4 = 0, b4 = 0;
    if (n > 0) {
      const double c4 = 2.0 * sign * std::exp(lq * double(n) * n);
      const double k4 = 2 * n;
      a4 = c4 * std::cos(k4 * w);
      b4 = -c4 * k4 * std::sin(k4 * w);
      t4 += a4;
      dt4 += b4;
    }
    const double tail = std::abs(a1) + std::abs(b1) + std::abs(a4) + std::abs(b4);
    if (n > 1 && tail <= 1e-18 * (std::abs(t1) + std::abs(dt1) + std::abs(t4) + std::abs(dt4))) break;
    if (q == 0.0) break;
  }
  if (derivative) *derivative = (dt1 * t4 - t1 * dt4) / (t4 * t4);
  return t1 / t4;
}

ConformalMapHandle ellipse_map(const BoundaryCurve::Ellipse& ellipse, Cplxd p) {
  double a = ellipse.semi_major, b = ellipse.semi_minor, angle = ellipse.angle;
  if (a < b) {
    std::swap(a, b);
    angle += pi / 2;
  }
  if (a - b <= 1e-14 * a) {
    ConformalMapHandle disc = disc_map(ellipse.center, a, p);
    auto source = std::make_shared<const PlaneDomain>(
        BoundaryCurve::ellipse(ellipse.center, ellipse.semi_major, ellipse.semi_minor, ellipse.angle));
    return ConformalMapHandle([disc](Cplxd z) { return disc.forward(z); },
                              [disc](Cplxd w) { return disc.inverse(w); },
                              [disc](Cplxd z) { return disc.derivative(z); }, p, 0.0, Backend::ClosedForm, source,
                              "ellipse");
  }
  auto source = std::make_shared<const PlaneDomain>(
      BoundaryCurve::ellipse(ellipse.center, ellipse.semi_major, ellipse.semi_minor, ellipse.angle));
  if (!source->contains(p)) throw Error(ErrorKind::Domain, "basepoint outside the ellipse", {p});

  const double focal = std::sqrt(a * a - b * b);
  const double ratio = (a - b) / (a + b);
  const double q = ratio * ratio;
  const Cplxd rot = std::polar(1.0, -angle);
  const Cplxd c = ellipse.center;

  // G sends the ellipse onto the disc with G(c) = 0.
  auto g = [=](Cplxd z, Cplxd* dg) {
    const Cplxd zeta = rot * (z - c) / focal;
    const Cplxd w = std::asin(zeta);
    Cplxd dtheta;
    const Cplxd value = theta_ratio(w, q, &dtheta);
    if (dg) {
      const Cplxd cw = std::cos(w);
      if (std::abs(cw) > 1e-7) {
        *dg = dtheta / cw * rot / focal;
      } else {
        // at a focus: average of central differences on a small circle
        const double eps = 1e-5 * focal;
        Cplxd acc = 0;
        for (int k = 0; k < 8; ++k) {
          const Cplxd e = std::polar(1.0, 2 * pi * k / 8);
          const Cplxd wp = std::asin(rot * (z + eps * e - c) / focal);
          const Cplxd wm = std::asin(rot * (z - eps * e - c) / focal);
          acc += (theta_ratio(wp, q) - theta_ratio(wm, q)) / (2.0 * eps * e);
        }
        *dg = acc / 8.0;
      }
    }
    return value;
  };

  Cplxd dgp;
  const Recentre m{g(p, &dgp)};
  const Cplxd spin = unit_rotation(dgp * m.derivative(m.c));

  auto forward = [=](Cplxd z) { return spin * m(g(z, nullptr)); };
  auto derivative = [=](Cplxd z) {
    Cplxd dg;
    const Cplxd t = g(z, &dg);
    return spin * m.derivative(t) * dg;
  };
  auto g_value = [=](Cplxd z) { return g(z, nullptr); };
  auto g_derivative = [=](Cplxd z) {
    Cplxd dg;
    g(z, &dg);
    return dg;
  };
  auto inverse = [=](Cplxd w) {
    const Cplxd t = m.inverse(std::conj(spin) * w);
    return newton_inverse(g_value, g_derivative, t, c, 0.0);
  };
  return ConformalMapHandle(forward, inverse, derivative, p, 0.0, Backend::ClosedForm, source, "ellipse");
}

ConformalMapHandle digon_map(const BoundaryCurve::Digon& digon, Cplxd interior, Cplxd p,
                             std::shared_ptr<const PlaneDomain> source) {
  const Cplxd v1 = digon.v1, v2 = digon.v2;
  if (!source)
    source = std::make_shared<const PlaneDomain>(BoundaryCurve::digon(v1, v2, digon.m1, digon.m2));
  if (!source->contains(p)) throw Error(ErrorKind::Domain, "basepoint outside the digon", {p});

  // M sends v1 to 0 and v2 to ∞, so both arcs become rays and the region a sector.
  auto mob = [=](Cplxd z) { return (z - v1) / (z - v2); };
  auto wrap = [](double t) {
    t = std::fmod(t, 2 * pi);
    return t < 0 ? t + 2 * pi : t;
  };
  const double a1 = std::arg(mob(digon.m1));
  const double a2 = std::arg(mob(digon.m2));
  const double width12 = wrap(a2 - a1);
  double start, width;
  if (wrap(std::arg(mob(interior)) - a1) < width12) {
    start = a1;
    width = width12;
  } else {
    start = a2;
    width = 2 * pi - width12;
  }
  const double power = pi / width;

  // ξ = (e^{−iβ}M)^{π/γ} in the upper half-plane
  auto xi_of_m = [=](Cplxd mz) {
    return std::polar(std::pow(std::abs(mz), power), power * wrap(std::arg(mz) - start));
  };
  auto xi = [=](Cplxd z, Cplxd* dxi) {
    const Cplxd mz = mob(z);
    const double r = std::abs(mz);
    const double t = wrap(std::arg(mz) - start);
    const Cplxd value = std::polar(std::pow(r, power), power * t);
    if (dxi) {
      const Cplxd dm = (v1 - v2) / ((z - v2) * (z - v2));
      *dxi = power * value / mz * dm;
    }
    return value;
  };

  Cplxd dxp;
  const Cplxd xp = xi(p, &dxp);
  // Cayley map centred at ξ_p
  auto cayley = [=](Cplxd x) { return (x - xp) / (x - std::conj(xp)); };
  auto dcayley = [=](Cplxd x) {
    const Cplxd den = x - std::conj(xp);
    return (xp - std::conj(xp)) / (den * den);
  };
  const Cplxd spin = unit_rotation(dcayley(xp) * dxp);

  auto forward = [=](Cplxd z) {
    if (!std::isfinite(std::abs(z))) return spin * cayley(xi_of_m(1.0));
    return spin * cayley(xi(z, nullptr));
  };
  auto derivative = [=](Cplxd z) {
    Cplxd dx;
    const Cplxd x = xi(z, &dx);
    return spin * dcayley(x) * dx;
  };
  auto inverse = [=](Cplxd w) {
    const Cplxd t = std::conj(spin) * w;
    if (std::abs(1.0 - t) < 1e-300) return infinity();
    const Cplxd x = (xp - t * std::conj(xp)) / (1.0 - t);
    const Cplxd mz = std::polar(1.0, start) * std::polar(std::pow(std::abs(x), 1.0 / power), std::arg(x) / power);
    const Cplxd den = 1.0 - mz;
    if (std::abs(den) < 1e-300) return infinity();
    return (v1 - v2 * mz) / den;
  };
  return ConformalMapHandle(forward, inverse, derivative, p, 0.0, Backend::ClosedForm, source, "digon");
}

}  // namespace squeeze::catalog
