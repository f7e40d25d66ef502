#include "squeeze/domains.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace squeeze {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_param(double s) {
  double w = std::fmod(s, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w;
}

double cross(Cplxd a, Cplxd b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Circular arc (or segment) from p to q passing through m.
struct Arc {
  bool line = false;
  Cplxd p, q;
  Cplxd center;
  double radius = 0.0;
  double phi0 = 0.0;
  double dphi = 0.0;

  Arc(Cplxd from, Cplxd through, Cplxd to) : p(from), q(to) {
    const double scale = std::max({std::abs(through - from), std::abs(to - from), 1e-300});
    const double d = 2.0 * cross(through - from, to - from);
    if (std::abs(d) <= 1e-12 * scale * scale) {
      line = true;
      return;
    }
    // circumcenter of (from, through, to) relative to `from`
    const Cplxd b = through - from, c = to - from;
    const double bb = std::norm(b), cc = std::norm(c);
    const Cplxd rel((c.imag() * bb - b.imag() * cc) / d, (b.real() * cc - c.real() * bb) / d);
    center = from + rel;
    radius = std::abs(rel);
    phi0 = std::arg(from - center);
    const double to_q = wrap_param(std::arg(to - center) - phi0);
    const double to_m = wrap_param(std::arg(through - center) - phi0);
    dphi = to_m < to_q ? to_q : -(kTwoPi - to_q);
  }

  Cplxd at(double tau) const {
    if (line) return p + tau * (q - p);
    return center + std::polar(radius, phi0 + tau * dphi);
  }
  Cplxd d1(double tau) const {
    if (line) return q - p;
    return Cplxd(0, dphi) * std::polar(radius, phi0 + tau * dphi);
  }
  Cplxd d2(double tau) const {
    if (line) return 0.0;
    return -dphi * dphi * std::polar(radius, phi0 + tau * dphi);
  }
};

bool segments_cross(Cplxd a, Cplxd b, Cplxd c, Cplxd d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

struct Box {
  double x0, x1, y0, y1;
};

Box seg_box(Cplxd a, Cplxd b) {
  return {std::min(a.real(), b.real()), std::max(a.real(), b.real()), std::min(a.imag(), b.imag()),
          std::max(a.imag(), b.imag())};
}

bool overlap(const Box& u, const Box& v) {
  return u.x0 <= v.x1 && v.x0 <= u.x1 && u.y0 <= v.y1 && v.y0 <= u.y1;
}

// First crossing between two closed polylines (or within one, skipping
// adjacent segments). Returns the crossing location.
std::optional<Cplxd> polyline_crossing(const std::vector<Cplxd>& a, const std::vector<Cplxd>& b, bool same) {
  const std::size_t na = a.size(), nb = b.size();
  std::vector<Box> boxes_b(nb);
  for (std::size_t j = 0; j < nb; ++j) boxes_b[j] = seg_box(b[j], b[(j + 1) % nb]);
  for (std::size_t i = 0; i < na; ++i) {
    const Cplxd p = a[i], q = a[(i + 1) % na];
    const Box bi = seg_box(p, q);
    for (std::size_t j = same ? i + 2 : 0; j < nb; ++j) {
      if (same && i == 0 && j == nb - 1) continue;
      if (!overlap(bi, boxes_b[j])) continue;
      if (segments_cross(p, q, b[j], b[(j + 1) % nb])) return p;
    }
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Ellipse: return "ellipse";
    case CurveKind::Polygon: return "polygon";
    case CurveKind::Trig: return "trig";
    case CurveKind::Digon: return "digon";
  }
  return "unknown";
}

const char* to_string(DiniVerdict verdict) {
  switch (verdict) {
    case DiniVerdict::Converged: return "converged";
    case DiniVerdict::Diverged: return "diverged";
    case DiniVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// BoundaryCurve

BoundaryCurve::BoundaryCurve(Params params) : params_(std::move(params)) {
  auto samples = std::make_shared<std::vector<Cplxd>>(kDistanceNodes);
  for (int k = 0; k < kDistanceNodes; ++k) (*samples)[k] = point(kTwoPi * k / kDistanceNodes);
  for (const Cplxd& z : *samples)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::Domain, "curve has non-finite points");
  samples_ = std::move(samples);

  const std::vector<Cplxd> coarse = sample(kIntersectionNodes);
  if (auto hit = polyline_crossing(coarse, coarse, true))
    throw Error(ErrorKind::Domain, "boundary curve intersects itself", {*hit});

  const double area = signed_area();
  if (!(std::abs(area) > 0)) throw Error(ErrorKind::Domain, "boundary curve encloses no area");
  orientation_ = area > 0 ? 1 : -1;
}

BoundaryCurve BoundaryCurve::circle(Cplxd center, double radius) {
  if (!(radius > 0)) throw Error(ErrorKind::Domain, "circle radius must be positive", {}, radius);
  return BoundaryCurve(Circle{center, radius});
}

BoundaryCurve BoundaryCurve::ellipse(Cplxd center, double semi_major, double semi_minor, double angle) {
  if (!(semi_major > 0 && semi_minor > 0))
    throw Error(ErrorKind::Domain, "ellipse semi-axes must be positive");
  return BoundaryCurve(Ellipse{center, semi_major, semi_minor, angle});
}

BoundaryCurve BoundaryCurve::polygon(std::vector<Cplxd> vertices) {
  if (vertices.size() < 3) throw Error(ErrorKind::Domain, "polygon needs at least 3 vertices");
  return BoundaryCurve(Polygon{std::move(vertices)});
}

BoundaryCurve BoundaryCurve::trig(int min_freq, std::vector<Cplxd> coeffs) {
  if (coeffs.empty()) throw Error(ErrorKind::Domain, "trigonometric curve needs coefficients");
  return BoundaryCurve(Trig{min_freq, std::move(coeffs)});
}

BoundaryCurve BoundaryCurve::digon(Cplxd v1, Cplxd v2, Cplxd m1, Cplxd m2) {
  if (std::abs(v1 - v2) == 0) throw Error(ErrorKind::Domain, "digon vertices must differ");
  return BoundaryCurve(Digon{v1, v2, m1, m2});
}

CurveKind BoundaryCurve::kind() const { return static_cast<CurveKind>(params_.index()); }

bool BoundaryCurve::is_smooth() const {
  const CurveKind k = kind();
  return k == CurveKind::Circle || k == CurveKind::Ellipse || k == CurveKind::Trig;
}

Cplxd BoundaryCurve::point(double s) const {
  return std::visit(
      [&](const auto& c) -> Cplxd {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return c.center + std::polar(c.radius, s);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return c.center + std::polar(1.0, c.angle) * Cplxd(c.semi_major * std::cos(s), c.semi_minor * std::sin(s));
        } else if constexpr (std::is_same_v<T, Polygon>) {
          const int m = static_cast<int>(c.vertices.size());
          const double u = wrap_param(s) / kTwoPi * m;
          const int k = std::min(static_cast<int>(u), m - 1);
          const double tau = u - k;
          return c.vertices[k] + tau * (c.vertices[(k + 1) % m] - c.vertices[k]);
        } else if constexpr (std::is_same_v<T, Trig>) {
          Cplxd z = 0.0;
          for (std::size_t j = 0; j < c.coeffs.size(); ++j)
            z += c.coeffs[j] * std::polar(1.0, (c.min_freq + static_cast<int>(j)) * s);
          return z;
        } else {
          const double w = wrap_param(s);
          if (w < std::numbers::pi) return Arc(c.v1, c.m1, c.v2).at(w / std::numbers::pi);
          return Arc(c.v2, c.m2, c.v1).at((w - std::numbers::pi) / std::numbers::pi);
        }
      },
      params_);
}

Cplxd BoundaryCurve::tangent(double s) const {
  return std::visit(
      [&](const auto& c) -> Cplxd {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return Cplxd(0, 1) * std::polar(c.radius, s);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return std::polar(1.0, c.angle) * Cplxd(-c.semi_major * std::sin(s), c.semi_minor * std::cos(s));
        } else if constexpr (std::is_same_v<T, Polygon>) {
          const int m = static_cast<int>(c.vertices.size());
          const double u = wrap_param(s) / kTwoPi * m;
          const int k = std::min(static_cast<int>(u), m - 1);
          return (c.vertices[(k + 1) % m] - c.vertices[k]) * (m / kTwoPi);
        } else if constexpr (std::is_same_v<T, Trig>) {
          Cplxd z = 0.0;
          for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
            const int k = c.min_freq + static_cast<int>(j);
            z += Cplxd(0, k) * c.coeffs[j] * std::polar(1.0, k * s);
          }
          return z;
        } else {
          const double w = wrap_param(s);
          if (w < std::numbers::pi) return Arc(c.v1, c.m1, c.v2).d1(w / std::numbers::pi) / std::numbers::pi;
          return Arc(c.v2, c.m2, c.v1).d1((w - std::numbers::pi) / std::numbers::pi) / std::numbers::pi;
        }
      },
      params_);
}

Cplxd BoundaryCurve::second_derivative(double s) const {
  return std::visit(
      [&](const auto& c) -> Cplxd {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return -std::polar(c.radius, s);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return -std::polar(1.0, c.angle) * Cplxd(c.semi_major * std::cos(s), c.semi_minor * std::sin(s));
        } else if constexpr (std::is_same_v<T, Polygon>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Trig>) {
          Cplxd z = 0.0;
          for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
            const int k = c.min_freq + static_cast<int>(j);
            z -= double(k) * k * c.coeffs[j] * std::polar(1.0, k * s);
          }
          return z;
        } else {
          const double w = wrap_param(s);
          const double pi2 = std::numbers::pi * std::numbers::pi;
          if (w < std::numbers::pi) return Arc(c.v1, c.m1, c.v2).d2(w / std::numbers::pi) / pi2;
          return Arc(c.v2, c.m2, c.v1).d2((w - std::numbers::pi) / std::numbers::pi) / pi2;
        }
      },
      params_);
}

std::vector<double> BoundaryCurve::corner_parameters() const {
  if (const auto* poly = std::get_if<Polygon>(&params_)) {
    std::vector<double> out;
    const int m = static_cast<int>(poly->vertices.size());
    for (int k = 0; k < m; ++k) out.push_back(kTwoPi * k / m);
    return out;
  }
  if (std::holds_alternative<Digon>(params_)) return {0.0, std::numbers::pi};
  return {};
}

Cplxd BoundaryCurve::inner_normal(double s) const {
  const Cplxd t = tangent(s);
  const double len = std::abs(t);
  if (!(len > 0)) throw Error(ErrorKind::UnsupportedCurve, "curve is not regular at the requested parameter");
  return Cplxd(0, orientation_) * t / len;
}

std::vector<Cplxd> BoundaryCurve::sample(int count) const {
  std::vector<Cplxd> out(count);
  if (kDistanceNodes % count == 0) {
    const int stride = kDistanceNodes / count;
    for (int k = 0; k < count; ++k) out[k] = (*samples_)[k * stride];
    return out;
  }
  for (int k = 0; k < count; ++k) out[k] = point(kTwoPi * k / count);
  return out;
}

double BoundaryCurve::signed_area() const {
  const auto& z = *samples_;
  double area = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) area += cross(z[k], z[(k + 1) % z.size()]);
  return 0.5 * area;
}

double BoundaryCurve::distance(Cplxd z, double* param) const {
  const auto& pts = *samples_;
  const int n = static_cast<int>(pts.size());
  std::vector<double> d2(n);
  for (int k = 0; k < n; ++k) d2[k] = std::norm(pts[k] - z);

  // Local minima of the sampled distance, best first; refine the best few.
  std::vector<int> minima;
  for (int k = 0; k < n; ++k)
    if (d2[k] <= d2[(k + n - 1) % n] && d2[k] <= d2[(k + 1) % n]) minima.push_back(k);
  std::sort(minima.begin(), minima.end(), [&](int a, int b) { return d2[a] < d2[b]; });
  if (minima.size() > 3) minima.resize(3);

  const double h = kTwoPi / n;
  double best = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  for (int k : minima) {
    const double s0 = h * k;
    auto f = [&](double s) { return std::norm(point(s) - z); };
    const auto [s, v] = boost::math::tools::brent_find_minima(f, s0 - h, s0 + h, 52);
    const double cand = std::min(v, d2[k]);
    if (cand < best) {
      best = cand;
      best_s = v < d2[k] ? wrap_param(s) : s0;
    }
  }
  if (param) *param = best_s;
  return std::sqrt(best);
}

namespace {

double subtended(const BoundaryCurve& c, Cplxd z, double s0, double s1, Cplxd z0, Cplxd z1, int depth) {
  const double d = std::arg((z1 - z) / (z0 - z));
  if (std::abs(d) < 0.5 || depth > 48) return d;
  const double sm = 0.5 * (s0 + s1);
  const Cplxd zm = c.point(sm);
  return subtended(c, z, s0, sm, z0, zm, depth + 1) + subtended(c, z, sm, s1, zm, z1, depth + 1);
}

}  // namespace

int BoundaryCurve::winding_number(Cplxd z) const {
  // coarse pass over every 16th cached sample; subdivision refines near z
  constexpr int kStride = 16;
  const auto& pts = *samples_;
  const int n = static_cast<int>(pts.size()) / kStride;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const Cplxd z0 = pts[k * kStride], z1 = pts[((k + 1) % n) * kStride];
    total += subtended(*this, z, kTwoPi * k / n, kTwoPi * (k + 1) / n, z0, z1, 0);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

// ---------------------------------------------------------------------------
// PlaneDomain

PlaneDomain::PlaneDomain(BoundaryCurve outer, std::vector<BoundaryCurve> holes, std::vector<Cplxd> punctures)
    : outer_(std::move(outer)), holes_(std::move(holes)), punctures_(std::move(punctures)) {
  const auto outer_poly = outer_.sample(BoundaryCurve::kIntersectionNodes);
  for (std::size_t i = 0; i < holes_.size(); ++i) {
    const auto hole_poly = holes_[i].sample(BoundaryCurve::kIntersectionNodes);
    if (auto hit = polyline_crossing(hole_poly, outer_poly, false))
      throw Error(ErrorKind::Domain, "hole crosses the outer boundary", {*hit});
    if (outer_.winding_number(hole_poly.front()) == 0)
      throw Error(ErrorKind::Domain, "hole lies outside the outer boundary", {hole_poly.front()});
    for (std::size_t j = 0; j < i; ++j) {
      const auto other = holes_[j].sample(BoundaryCurve::kIntersectionNodes);
      if (auto hit = polyline_crossing(hole_poly, other, false))
        throw Error(ErrorKind::Domain, "holes intersect", {*hit});
      if (holes_[j].winding_number(hole_poly.front()) != 0 || holes_[i].winding_number(other.front()) != 0)
        throw Error(ErrorKind::Domain, "holes are nested", {hole_poly.front()});
    }
  }
  for (const Cplxd& p : punctures_) {
    if (outer_.distance(p) < kBoundaryCollar || outer_.winding_number(p) == 0)
      throw Error(ErrorKind::Domain, "puncture outside the domain", {p});
    for (const auto& h : holes_)
      if (h.distance(p) < kBoundaryCollar || h.winding_number(p) != 0)
        throw Error(ErrorKind::Domain, "puncture inside a hole", {p});
  }
}

PlaneDomain PlaneDomain::disc(Cplxd center, double radius) {
  return PlaneDomain(BoundaryCurve::circle(center, radius));
}

PlaneDomain PlaneDomain::annulus(Cplxd center, double inner, double outer) {
  if (!(inner > 0 && inner < outer)) throw Error(ErrorKind::Domain, "annulus radii must satisfy 0 < inner < outer");
  return PlaneDomain(BoundaryCurve::circle(center, outer), {BoundaryCurve::circle(center, inner)});
}

PlaneDomain PlaneDomain::punctured_disc(Cplxd center, double radius, Cplxd puncture) {
  return PlaneDomain(BoundaryCurve::circle(center, radius), {}, {puncture});
}

std::vector<const BoundaryCurve*> PlaneDomain::curves() const {
  std::vector<const BoundaryCurve*> out{&outer_};
  for (const auto& h : holes_) out.push_back(&h);
  return out;
}

double PlaneDomain::boundary_distance(Cplxd z) const {
  double d = outer_.distance(z);
  for (const auto& h : holes_) d = std::min(d, h.distance(z));
  for (const Cplxd& p : punctures_) d = std::min(d, std::abs(z - p));
  return d;
}

double BoundaryCurve::coarse_distance(Cplxd z) const {
  const auto& pts = *samples_;
  double best = std::numeric_limits<double>::infinity();
  for (const Cplxd& p : pts) best = std::min(best, std::norm(p - z));
  return std::sqrt(best);
}

double BoundaryCurve::max_step() const {
  if (max_step_ < 0) {
    const auto& pts = *samples_;
    double step = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) step = std::max(step, std::abs(pts[(k + 1) % pts.size()] - pts[k]));
    max_step_ = step;
  }
  return max_step_;
}

PointClass PlaneDomain::classify(Cplxd z) const {
  // Every curve point lies within one chord of a sample, so a sampled distance
  // above collar + chord settles the boundary question without refinement.
  bool near = false;
  for (const Cplxd& p : punctures_) near = near || std::abs(z - p) < kBoundaryCollar;
  for (const BoundaryCurve* c : curves())
    if (!near && c->coarse_distance(z) <= kBoundaryCollar + c->max_step()) near = c->distance(z) < kBoundaryCollar;
  if (near) return PointClass::Boundary;
  if (outer_.winding_number(z) == 0) return PointClass::Outside;
  for (const auto& h : holes_)
    if (h.winding_number(z) != 0) return PointClass::Outside;
  return PointClass::Inside;
}

std::pair<Cplxd, Cplxd> PlaneDomain::bounding_box() const {
  const auto& pts = outer_.cached_samples();
  double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0, step = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    x0 = std::min(x0, pts[k].real());
    x1 = std::max(x1, pts[k].real());
    y0 = std::min(y0, pts[k].imag());
    y1 = std::max(y1, pts[k].imag());
    step = std::max(step, std::abs(pts[(k + 1) % pts.size()] - pts[k]));
  }
  // the curve deviates from its samples by less than one chord
  return {Cplxd(x0 - step, y0 - step), Cplxd(x1 + step, y1 + step)};
}

double boundary_distance(const PlaneDomain& domain, Cplxd z) { return domain.boundary_distance(z); }
bool contains(const PlaneDomain& domain, Cplxd z) { return domain.contains(z); }

// ---------------------------------------------------------------------------
// Dini modulus

std::vector<double> log_grid(double t_max, double t_min, int per_decade) {
  if (!(t_max > t_min && t_min > 0 && per_decade > 0))
    throw Error(ErrorKind::Domain, "log grid needs t_max > t_min > 0");
  std::vector<double> out;
  const int steps = static_cast<int>(std::ceil(std::log10(t_max / t_min) * per_decade - 1e-9));
  for (int k = 0; k <= steps; ++k) out.push_back(t_max * std::pow(10.0, -double(k) / per_decade));
  return out;
}

DiniModulus dini_modulus(const BoundaryCurve& curve, std::vector<double> t_grid) {
  if (!curve.is_smooth())
    throw Error(ErrorKind::UnsupportedCurve, std::string("Dini modulus needs a C1 curve, got ") + to_string(curve.kind()));
  if (t_grid.empty()) throw Error(ErrorKind::Domain, "empty t grid");
  std::sort(t_grid.begin(), t_grid.end());

  const auto& pts = curve.cached_samples();
  const int n = static_cast<int>(pts.size());
  std::vector<Cplxd> normals(n);
  for (int k = 0; k < n; ++k) normals[k] = curve.inner_normal(2.0 * std::numbers::pi * k / n);

  // bin[i]: largest deviation among pairs with t_grid[i-1] <= |x−y| < t_grid[i]
  std::vector<double> bin(t_grid.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(pts[i] - pts[j]);
      const auto it = std::upper_bound(t_grid.begin(), t_grid.end(), d);
      if (it == t_grid.end()) continue;
      const std::size_t idx = static_cast<std::size_t>(it - t_grid.begin());
      bin[idx] = std::max(bin[idx], std::abs(normals[i] - normals[j]));
    }
  }
  std::vector<std::pair<double, double>> samples(t_grid.size());
  double running = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    running = std::max(running, bin[i]);
    samples[i] = {t_grid[i], running};
  }
  return dini_integrate(std::move(samples));
}

DiniModulus dini_integrate(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw Error(ErrorKind::Domain, "Dini integration needs at least two samples");
  std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [t, w] : samples)
    if (!(t > 0) || !(w >= 0)) throw Error(ErrorKind::Domain, "Dini samples need t > 0 and omega >= 0", {}, t);

  // Each t is the log-midpoint of its cell, so the cell contributes ω(t)·Δlog t.
  const std::size_t m = samples.size();
  std::vector<double> contrib(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lo = i + 1 < m ? std::log(samples[i].first / samples[i + 1].first) : std::log(samples[i - 1].first / samples[i].first);
    const double hi = i > 0 ? std::log(samples[i - 1].first / samples[i].first) : lo;
    contrib[i] = samples[i].second * 0.5 * (lo + hi);
    total += contrib[i];
  }

  // Tail: the smallest-t half, at least four cells.
  const std::size_t tail = std::max<std::size_t>(4, m / 2);
  const std::size_t first = m > tail ? m - tail : 0;
  std::vector<double> ratios;
  bool all_zero = true;
  for (std::size_t i = first; i < m; ++i) {
    if (contrib[i] > 0) all_zero = false;
    if (i > first && contrib[i - 1] > 0) ratios.push_back(contrib[i] / contrib[i - 1]);
  }

  DiniModulus out;
  out.samples = std::move(samples);
  out.integral_estimate = total;
  if (all_zero) {
    out.verdict = DiniVerdict::Converged;
    return out;
  }
  if (ratios.empty()) return out;
  const std::size_t last = std::min<std::size_t>(4, ratios.size());
  double mean = 0.0;
  for (std::size_t i = ratios.size() - last; i < ratios.size(); ++i) mean += ratios[i];
  mean /= double(last);
  if (mean <= 0.9)
    out.verdict = DiniVerdict::Converged;
  else if (mean >= 0.95)
    out.verdict = DiniVerdict::Diverged;
  return out;
}

// ---------------------------------------------------------------------------
// C-convex specifications

CConvexSpec CConvexSpec::from_base(CConvexBase base, int n, UnitaryMatrix<double> T, UnitTriangularMatrix<double> A,
                                   std::vector<PlaneDomain> projections) {
  if (T.dim() != n || A.dim() != n) throw Error(ErrorKind::Domain, "normalization matrices do not match dimension");
  std::function<bool(const CVecd&)> membership;
  const CMatd t = T.matrix();
  switch (base.kind) {
    case CConvexBase::Kind::L1Ball:
      membership = [t](const CVecd& z) { return norm1(t * z) < 1.0; };
      break;
    case CConvexBase::Kind::L2Ball:
      membership = [t](const CVecd& z) { return norm2(t * z) < 1.0; };
      break;
    case CConvexBase::Kind::Product: {
      if (static_cast<int>(base.factors.size()) != n)
        throw Error(ErrorKind::Domain, "product base needs one factor per coordinate");
      auto factors = std::make_shared<std::vector<PlaneDomain>>(base.factors);
      membership = [t, factors](const CVecd& z) {
        const CVecd w = t * z;
        for (Eigen::Index j = 0; j < w.size(); ++j)
          if (!(*factors)[j].contains(w[j])) return false;
        return true;
      };
      break;
    }
    case CConvexBase::Kind::Custom:
      throw Error(ErrorKind::Domain, "custom base needs an explicit membership oracle");
  }
  return CConvexSpec{n, std::move(membership), std::move(T), std::move(A), std::move(projections), std::move(base)};
}

CVecd CConvexSpec::denormalize(const CVecd& w) const { return T.apply_inverse(A.solve(w)); }
CVecd CConvexSpec::normalize(const CVecd& z) const { return A.apply(T.apply(z)); }
bool CConvexSpec::in_normalized(const CVecd& w) const { return membership(denormalize(w)); }

namespace {

std::vector<std::complex<double>> to_witness(const CVecd& z) { return {z.data(), z.data() + z.size()}; }

[[noreturn]] void fail(const std::string& what, const CVecd& witness) {
  throw Error(ErrorKind::Validation, what, to_witness(witness));
}

}  // namespace

CConvexValidation validate_cconvex(const CConvexSpec& spec, int samples, std::uint64_t seed) {
  const int n = spec.n;
  if (n < 1 || spec.T.dim() != n || spec.A.dim() != n || static_cast<int>(spec.projections.size()) != n ||
      !spec.membership)
    throw Error(ErrorKind::Validation, "C-convex spec is structurally malformed");
  if (samples < 1) throw Error(ErrorKind::Domain, "sample count must be positive");

  CConvexValidation report;
  report.samples = samples;
  report.seed = seed;
  report.dn = dn_for_matrix(spec.A);

  // Projections: simply connected, contain 0, omit 1, dist(0, ∂D_j) <= 1, and
  // contain the disc of radius 16·d_n(A) the Köbe argument starts from.
  const double inner_radius = 16.0 * report.dn;
  for (int j = 0; j < n; ++j) {
    const PlaneDomain& dj = spec.projections[j];
    CVecd w = CVecd::Zero(n);
    if (!dj.simply_connected()) fail("projection " + std::to_string(j) + " is not simply connected", w);
    if (dj.classify(0.0) != PointClass::Inside) fail("projection " + std::to_string(j) + " does not contain 0", w);
    w[j] = 1.0;
    if (dj.classify(1.0) == PointClass::Inside) fail("projection " + std::to_string(j) + " contains the point 1", w);
    if (dj.boundary_distance(0.0) > 1.0 + kAlgebraicTol)
      fail("projection " + std::to_string(j) + " has dist(0, boundary) > 1", CVecd::Zero(n));
    for (int k = 0; k < 256; ++k) {
      const Cplxd zeta = std::polar(inner_radius * (1.0 - 1e-12), 2.0 * std::numbers::pi * k / 256);
      if (!dj.contains(zeta)) {
        CVecd wz = CVecd::Zero(n);
        wz[j] = zeta;
        fail("projection " + std::to_string(j) + " misses the disc of radius 16 d_n", wz);
      }
    }
  }

  std::mt19937_64 rng(seed);

  // E_n ⊂ T(D): every sample e of the 1-norm ball has T⁻¹e ∈ D.
  for (int k = 0; k < samples; ++k) {
    const CVecd e = sample_l1_ball(n, rng);
    const CVecd z = spec.T.apply_inverse(e);
    if (!spec.in_domain(z)) fail("1-norm ball point outside T(D)", e);
  }
  report.l1_ball_samples_checked = samples;

  // Normalized domain: rejection sampling in the polydisc bounding the projections.
  std::vector<double> radii(n);
  for (int j = 0; j < n; ++j) {
    const auto [lo, hi] = spec.projections[j].bounding_box();
    radii[j] = std::max({std::abs(lo), std::abs(hi), std::abs(Cplxd(lo.real(), hi.imag())),
                         std::abs(Cplxd(hi.real(), lo.imag()))});
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const long long max_trials = 20000LL * samples + 1000000LL;
  long long trials = 0;
  int accepted = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  while (accepted < samples) {
    if (++trials > max_trials)
      throw Error(ErrorKind::Validation, "normalized domain too thin to sample in its bounding polydisc", {},
                  double(accepted));
    CVecd w(n);
    for (int j = 0; j < n; ++j) w[j] = std::polar(radii[j] * std::sqrt(unit(rng)), phase(rng));
    if (!spec.in_normalized(w)) continue;
    ++accepted;
    for (int j = 0; j < n; ++j) {
      const double gap = std::abs(w[j] - 1.0);
      min_gap = std::min(min_gap, gap);
      if (gap < 1e-9) fail("normalized coordinate equals 1", w);
      if (spec.projections[j].classify(w[j]) == PointClass::Outside)
        fail("normalized coordinate " + std::to_string(j) + " outside its projection", w);
    }
  }
  report.normalized_samples_checked = accepted;
  report.min_gap_to_one = min_gap;
  report.passed = true;
  return report;
}

}  // namespace squeeze
