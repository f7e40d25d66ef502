#include "squeeze/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "szego.hpp"

namespace squeeze {

using std::numbers::pi;

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::ClosedForm: return "closed-form";
    case Backend::BoundaryIntegral: return "boundary-integral";
  }
  return "unknown";
}

ConformalMapHandle::ConformalMapHandle(Fn forward, Fn inverse, Fn derivative, Cplxd basepoint, double accuracy,
                                       Backend backend, std::shared_ptr<const PlaneDomain> source,
                                       std::string description)
    : forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      derivative_(std::move(derivative)),
      basepoint_(basepoint),
      accuracy_(accuracy),
      backend_(backend),
      source_(std::move(source)),
      description_(std::move(description)) {
  if (std::isfinite(basepoint_.real()) && std::isfinite(basepoint_.imag())) {
    const Cplxd d = derivative_(basepoint_);
    if (!(std::abs(d) > 0) || std::abs(d.imag()) > 1e-8 * std::abs(d) || d.real() <= 0)
      throw Error(ErrorKind::Inconsistency, "map is not normalized at its basepoint", {basepoint_});
    derivative_at_basepoint_ = Cplxd(d.real(), 0.0);
  }
}

ConformalMapHandle ConformalMapHandle::with_accuracy(double accuracy) const {
  ConformalMapHandle out = *this;
  out.accuracy_ = accuracy;
  return out;
}

ConformalMapHandle ConformalMapHandle::with_nodes(int nodes) const {
  ConformalMapHandle out = *this;
  out.nodes_ = nodes;
  return out;
}

Cplxd newton_inverse(const ConformalMapHandle::Fn& f, const ConformalMapHandle::Fn& df, Cplxd w, Cplxd start,
                     Cplxd start_value) {
  constexpr int kSteps = 16;
  Cplxd z = start;
  for (int j = 1; j <= kSteps; ++j) {
    const Cplxd target = start_value + (double(j) / kSteps) * (w - start_value);
    const bool last = j == kSteps;
    Cplxd res = f(z) - target;
    for (int it = 0; it < (last ? 60 : 8); ++it) {
      if (std::abs(res) <= 1e-16) break;
      const Cplxd step = res / df(z);
      double lambda = 1.0;
      Cplxd next = z - step;
      Cplxd next_res = f(next) - target;
      while (!(std::abs(next_res) < std::abs(res)) && lambda > 1e-8) {
        lambda *= 0.5;
        next = z - lambda * step;
        next_res = f(next) - target;
      }
      if (!(std::abs(next_res) < std::abs(res))) break;
      z = next;
      res = next_res;
      if (lambda * std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
  }
  return z;
}

MapResidual measure_residual(const ConformalMapHandle& handle, int test_points, std::uint64_t seed) {
  MapResidual out;
  const PlaneDomain& source = handle.source();
  const auto [lo, hi] = source.bounding_box();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo.real(), hi.real()), uy(lo.imag(), hi.imag());
  int accepted = 0;
  for (long trial = 0; accepted < test_points && trial < 10000L * test_points; ++trial) {
    const Cplxd z(ux(rng), uy(rng));
    if (!source.contains(z)) continue;
    ++accepted;
    // measured in the image, where the accuracy is debited
    const Cplxd w = handle.forward(z);
    out.round_trip = std::max(out.round_trip, std::abs(handle.forward(handle.inverse(w)) - w));
  }
  for (const BoundaryCurve* curve : source.curves()) {
    for (int k = 0; k < test_points; ++k) {
      const double s = 2 * pi * (k + 0.5) / test_points;
      out.boundary_modulus = std::max(out.boundary_modulus, std::abs(std::abs(handle.forward(curve->point(s))) - 1.0));
    }
  }
  return out;
}

namespace {

ConformalMapHandle szego_map(const PlaneDomain& domain, Cplxd p, const RiemannOptions& options) {
  const BoundaryCurve& curve = domain.outer();
  if (!curve.is_smooth())
    throw Error(ErrorKind::UnsupportedCurve,
                std::string("boundary-integral backend needs a smooth curve, got ") + to_string(curve.kind()));
  auto source = std::make_shared<const PlaneDomain>(domain);
  std::shared_ptr<const detail::SzegoSolution> prev;
  double best = std::numeric_limits<double>::infinity();
  for (int n = options.initial_nodes; n <= options.max_nodes; n *= 2) {
    auto sol = std::make_shared<const detail::SzegoSolution>(detail::solve_szego(curve, p, n));
    if (prev) {
      const double gap = detail::refinement_gap(*prev, *sol);
      best = std::min(best, gap);
      if (gap <= options.target_accuracy) {
        ConformalMapHandle handle([sol](Cplxd z) { return sol->forward(z); },
                                  [sol](Cplxd w) { return sol->inverse(w); },
                                  [sol](Cplxd z) { return sol->derivative(z); }, p, 0.0, Backend::BoundaryIntegral,
                                  source, "szego");
        const double accuracy =
            std::max(gap, measure_residual(handle, options.test_points, options.seed).max());
        best = std::min(best, accuracy);
        if (accuracy <= options.target_accuracy) return handle.with_accuracy(accuracy).with_nodes(n);
      }
    }
    prev = sol;
  }
  throw Error(ErrorKind::AccuracyNotReached, "boundary-integral map did not reach the target accuracy", {}, best);
}

}  // namespace

ConformalMapHandle riemann_map(const PlaneDomain& domain, Cplxd p, const RiemannOptions& options) {
  if (!domain.simply_connected())
    throw Error(ErrorKind::Topology, "Riemann map needs a simply connected domain");
  if (!domain.contains(p)) throw Error(ErrorKind::Domain, "basepoint is not inside the domain", {p});

  using Prefer = RiemannOptions::Prefer;
  const BoundaryCurve& curve = domain.outer();
  std::optional<ConformalMapHandle> closed;
  if (options.prefer != Prefer::BoundaryIntegral) {
    if (auto c = std::get_if<BoundaryCurve::Circle>(&curve.params())) {
      closed = catalog::disc_map(c->center, c->radius, p);
    } else if (auto e = std::get_if<BoundaryCurve::Ellipse>(&curve.params())) {
      closed = catalog::ellipse_map(*e, p);
    } else if (auto d = std::get_if<BoundaryCurve::Digon>(&curve.params())) {
      closed = catalog::digon_map(*d, p, p, std::make_shared<const PlaneDomain>(domain));
    } else if (options.prefer == Prefer::ClosedForm) {
      throw Error(ErrorKind::UnsupportedCurve,
                  std::string("no closed-form map for ") + to_string(curve.kind()) + " boundaries");
    }
  }
  if (closed) {
    const double accuracy = measure_residual(*closed, options.test_points, options.seed).max();
    return closed->with_accuracy(accuracy);
  }
  if (curve.kind() == CurveKind::Polygon)
    throw Error(ErrorKind::UnsupportedCurve, "polygons have no conformal backend");
  return szego_map(domain, p, options);
}

double koebe_guaranteed_radius(const ConformalMapHandle& handle, double restriction_radius) {
  if (!(restriction_radius > 0))
    throw Error(ErrorKind::Domain, "restriction radius must be positive", {}, restriction_radius);
  const double room = handle.source().boundary_distance(handle.basepoint());
  if (restriction_radius > room * (1 + kAlgebraicTol))
    throw Error(ErrorKind::Containment, "restriction disc leaves the source domain", {handle.basepoint()}, room);
  return restriction_radius * std::abs(handle.derivative_at_basepoint()) / 4.0;
}

double koebe_derivative_lower(const ConformalMapHandle& handle) {
  const double d = std::abs(handle.derivative_at_basepoint());
  const double dist = handle.source().boundary_distance(handle.basepoint());
  // Köbe for the inverse map: dist(p, ∂source) ≥ 1/(4|f′(p)|).
  if (4.0 * d * dist < 1.0 - 1e-9)
    throw Error(ErrorKind::Inconsistency, "derivative violates the quarter theorem", {handle.basepoint()}, d);
  return d;
}

namespace {

// Circle or line carrying the boundary near a.
struct LocalArc {
  bool line = false;
  Cplxd center;   // circle only
  double radius = 0.0;
  Cplxd tangent;  // line only

  double gap(Cplxd z) const {
    if (line) return std::abs((std::conj(tangent) * (z - center)).imag());
    return std::abs(std::abs(z - center) - radius);
  }
};

struct Located {
  const BoundaryCurve* curve = nullptr;
  bool outer = true;
  double param = 0.0;
  LocalArc arc;
  double feature_distance = std::numeric_limits<double>::infinity();
};

Located locate(const PlaneDomain& domain, Cplxd a) {
  for (Cplxd q : domain.punctures())
    if (std::abs(q - a) < 1e-9) throw Error(ErrorKind::UnsupportedCurve, "a puncture has no tangent", {a});
  Located out;
  double best = std::numeric_limits<double>::infinity();
  const auto curves = domain.curves();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    double s = 0;
    const double d = curves[i]->distance(a, &s);
    if (d < best) {
      best = d;
      out.curve = curves[i];
      out.outer = i == 0;
      out.param = s;
    }
  }
  const double scale = std::max(1.0, std::abs(a));
  if (best > 1e-9 * scale) throw Error(ErrorKind::Domain, "a is not a boundary point", {a}, best);

  const BoundaryCurve& c = *out.curve;
  for (double t : c.corner_parameters()) {
    const Cplxd corner = c.point(t);
    const double d = std::abs(corner - a);
    if (d < 1e-9 * scale) throw Error(ErrorKind::UnsupportedCurve, "a is a corner of the boundary", {a});
    out.feature_distance = std::min(out.feature_distance, d);
  }

  if (auto circle = std::get_if<BoundaryCurve::Circle>(&c.params())) {
    out.arc.center = circle->center;
    out.arc.radius = circle->radius;
  } else if (auto poly = std::get_if<BoundaryCurve::Polygon>(&c.params())) {
    (void)poly;
    out.arc.line = true;
    out.arc.center = a;
    out.arc.tangent = c.tangent(out.param) / std::abs(c.tangent(out.param));
  } else if (auto dg = std::get_if<BoundaryCurve::Digon>(&c.params())) {
    // the arc through m1 for s < π, through m2 otherwise
    const double s = out.param;
    const Cplxd m = s < pi ? dg->m1 : dg->m2;
    const Cplxd u = dg->v1, v = dg->v2;
    const double cross = ((v - u) * std::conj(m - u)).imag();
    if (std::abs(cross) <= 1e-14 * std::norm(v - u)) {
      out.arc.line = true;
      out.arc.center = a;
      out.arc.tangent = (v - u) / std::abs(v - u);
    } else {
      // circumcentre of u, v, m
      const Cplxd b = v - u, d = m - u;
      const Cplxd cc = u + Cplxd(0, 1) * (b * std::norm(d) - d * std::norm(b)) / (2.0 * (std::conj(b) * d).imag());
      out.arc.center = cc;
      out.arc.radius = std::abs(u - cc);
    }
  } else {
    throw Error(ErrorKind::UnsupportedCurve,
                std::string("osculation chart needs a circular or straight boundary arc near a, got ") +
                    to_string(c.kind()));
  }
  return out;
}

}  // namespace

OsculationChart osculation_chart(const PlaneDomain& domain, Cplxd a, const ChartOptions& options) {
  const Located loc = locate(domain, a);
  const BoundaryCurve& curve = *loc.curve;
  const Cplxd n_in_curve = curve.inner_normal(loc.param);
  const Cplxd n_out = loc.outer ? -n_in_curve : n_in_curve;

  // distance from a to every other boundary component
  double others = std::numeric_limits<double>::infinity();
  for (const BoundaryCurve* c : domain.curves())
    if (c != loc.curve) others = std::min(others, c->distance(a));
  for (Cplxd q : domain.punctures()) others = std::min(others, std::abs(q - a));

  double u;
  if (options.u) {
    u = *options.u;
    if (!(u > 0)) throw Error(ErrorKind::Placement, "chart radius must be positive", {a}, u);
  } else {
    u = std::min(others, loc.feature_distance);
    if (!loc.arc.line) u = std::min(u, loc.arc.radius);
    if (!std::isfinite(u)) u = 1.0;
    u *= 0.5;
  }
  if (u >= others || u >= loc.feature_distance || (!loc.arc.line && u >= 2 * loc.arc.radius))
    throw Error(ErrorKind::Placement, "chart disc reaches another boundary feature", {a}, u);

  // E = U ∖ closure(D): the digon cut from U by the local arc
  Cplxd v1, v2;
  if (loc.arc.line) {
    v1 = a + u * loc.arc.tangent;
    v2 = a - u * loc.arc.tangent;
  } else {
    const double R = loc.arc.radius;
    const Cplxd e = (a - loc.arc.center) / R;
    const double x = (2 * R * R - u * u) / (2 * R);
    const double h = std::sqrt(std::max(0.0, R * R - x * x));
    v1 = loc.arc.center + Cplxd(x, h) * e;
    v2 = loc.arc.center + Cplxd(x, -h) * e;
  }
  const Cplxd m2 = a + u * n_out;
  const PlaneDomain e_dom(BoundaryCurve::digon(v1, v2, a, m2));
  for (const Cplxd& z : curve.cached_samples())
    if (std::abs(z - a) < u * (1 - 1e-9) && loc.arc.gap(z) > 1e-9 * std::max(1.0, u))
      throw Error(ErrorKind::Placement, "boundary inside the chart disc is not a single arc", {z});

  const Cplxd b = options.b ? *options.b : a + 0.5 * u * n_out;
  if (!e_dom.contains(b)) throw Error(ErrorKind::Placement, "b is not inside E", {b});

  // φ(ζ) = 1/(ζ − b) sends the complement of closure(E) onto a bounded digon F ∋ 0
  auto phi = [b](Cplxd z) -> Cplxd {
    if (!std::isfinite(std::abs(z))) return 0.0;
    return 1.0 / (z - b);
  };
  const BoundaryCurve::Digon f_arcs{phi(v1), phi(v2), phi(a), phi(m2)};
  auto f_dom = std::make_shared<const PlaneDomain>(BoundaryCurve::digon(f_arcs.v1, f_arcs.v2, f_arcs.m1, f_arcs.m2));
  if (!f_dom->contains(0.0)) throw Error(ErrorKind::Inconsistency, "image of the exterior of E misses 0");
  const ConformalMapHandle psi = catalog::digon_map(f_arcs, 0.0, 0.0, f_dom);
  const double psi_accuracy = measure_residual(psi, options.riemann.test_points, options.riemann.seed).max();

  const Cplxd psi_a = psi.forward(phi(a));
  const Cplxd spin = std::conj(psi_a) / std::abs(psi_a);

  auto theta_fwd = [=](Cplxd z) { return spin * psi.forward(phi(z)); };
  auto theta_inv = [=](Cplxd w) -> Cplxd {
    const Cplxd x = psi.inverse(std::conj(spin) * w);
    if (std::abs(x) == 0.0) {
      const double inf = std::numeric_limits<double>::infinity();
      return {inf, inf};
    }
    return b + 1.0 / x;
  };
  auto theta_der = [=](Cplxd z) {
    const Cplxd d = z - b;
    return -spin * psi.derivative(phi(z)) / (d * d);
  };
  const double inf = std::numeric_limits<double>::infinity();
  auto theta = std::make_shared<const ConformalMapHandle>(theta_fwd, theta_inv, theta_der, Cplxd(inf, inf),
                                                          psi_accuracy, Backend::ClosedForm,
                                                          std::make_shared<const PlaneDomain>(domain),
                                                          "osculation chart");

  // r: distance from 1 to the image of the boundary outside U
  double r_min = std::numeric_limits<double>::infinity();
  for (Cplxd v : {v1, v2}) r_min = std::min(r_min, std::abs(theta_fwd(v) - 1.0));
  for (Cplxd q : domain.punctures()) r_min = std::min(r_min, std::abs(theta_fwd(q) - 1.0));
  for (const BoundaryCurve* c : domain.curves()) {
    const auto& pts = c->cached_samples();
    const int n = static_cast<int>(pts.size());
    const double h = 2 * pi / n;
    auto objective = [&](double s) {
      const Cplxd z = c->point(s);
      if (std::abs(z - a) < u) return inf;
      return std::abs(theta_fwd(z) - 1.0);
    };
    std::vector<double> vals(n);
    for (int k = 0; k < n; ++k) vals[k] = std::abs(pts[k] - a) < u ? inf : std::abs(theta_fwd(pts[k]) - 1.0);
    for (int k = 0; k < n; ++k) {
      const double here = vals[k];
      if (!std::isfinite(here)) continue;
      r_min = std::min(r_min, here);
      if (here <= vals[(k + n - 1) % n] && here <= vals[(k + 1) % n]) {
        const auto best = boost::math::tools::brent_find_minima(objective, (k - 1) * h, (k + 1) * h, 52);
        r_min = std::min(r_min, best.second);
      }
    }
  }
  const double r = std::min(r_min * (1 - 1e-3), 2.0 * (1 - 1e-9));
  if (r < 1e-4) throw Error(ErrorKind::ChartTooThin, "chart lens radius collapsed", {a}, r);

  // θ′(a): one-sided three-point differences along the inner normal, Richardson-extrapolated
  const Cplxd n_in = -n_out;
  auto one_sided = [&](double step) {
    const Cplxd f0 = theta_fwd(a), f1 = theta_fwd(a + step * n_in), f2 = theta_fwd(a + 2 * step * n_in);
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step) / n_in;
  };
  const double step = 1e-4 * u;
  const Cplxd d1 = one_sided(step), d2 = one_sided(step / 2), d4 = one_sided(step / 4);
  const Cplxd rich = (4.0 * d2 - d1) / 3.0;
  const Cplxd rich_half = (4.0 * d4 - d2) / 3.0;

  OsculationChart chart;
  chart.theta = theta;
  chart.a = a;
  chart.u = u;
  chart.b = b;
  chart.r = r;
  chart.theta_prime_at_a = rich_half;
  chart.theta_prime_error = std::abs(rich_half - rich);
  chart.accuracy = psi_accuracy;
  return chart;
}

int chart_consistency_failures(const OsculationChart& chart, const PlaneDomain& domain, double radius, int samples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(1.0 - radius, 1.0), uy(-radius, radius);
  int failures = 0, drawn = 0;
  while (drawn < samples) {
    const Cplxd w(ux(rng), uy(rng));
    if (!(std::abs(w) < 1.0 && std::abs(w - 1.0) < radius)) continue;
    ++drawn;
    if (!domain.contains(chart.theta->inverse(w))) ++failures;
  }
  return failures;
}

}  // namespace squeeze
