#include "squeeze/squeezing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "nelder_mead.hpp"

namespace squeeze {

using std::numbers::pi;

const char* to_string(CompetitorTag tag) {
  switch (tag) {
    case CompetitorTag::MobiusOfIdentity: return "mobius-of-identity";
    case CompetitorTag::Riemann: return "riemann";
    case CompetitorTag::Theorem1Product: return "theorem1-product";
    case CompetitorTag::Custom: return "custom";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double arg_step(Cplxd from, Cplxd to) { return std::arg(to / from); }

// Σ of argument increments over [s0, s1], bisecting while a step turns by more than 0.5.
double turning(const ParametricCurve& curve, double s0, Cplxd z0, double s1, Cplxd z1, int depth) {
  if (z0 == 0.0 || z1 == 0.0) throw Error(ErrorKind::DegenerateCompetitor, "image boundary passes through 0");
  const double step = arg_step(z0, z1);
  if (std::abs(step) <= 0.5 || depth == 0) return step;
  const double sm = 0.5 * (s0 + s1);
  const Cplxd zm = curve(sm);
  return turning(curve, s0, z0, sm, zm, depth - 1) + turning(curve, sm, zm, s1, z1, depth - 1);
}

// Sampled minimum of |γ| with Brent refinement around each sampled local minimum.
double min_modulus(const ParametricCurve& curve, int samples) {
  const double h = 2 * pi / samples;
  std::vector<double> vals(samples);
  for (int k = 0; k < samples; ++k) vals[k] = std::abs(curve(k * h));
  double best = *std::min_element(vals.begin(), vals.end());
  auto f = [&](double s) { return std::abs(curve(s)); };
  for (int k = 0; k < samples; ++k) {
    const double v = vals[k];
    if (v > vals[(k + samples - 1) % samples] || v > vals[(k + 1) % samples]) continue;
    if (v > 1.5 * best + 1e-300) continue;
    const auto r = boost::math::tools::brent_find_minima(f, (k - 1) * h, (k + 1) * h, 52);
    best = std::min(best, r.second);
  }
  return best;
}

// Sampled maximum of |γ − c| with the same refinement.
double max_distance(const ParametricCurve& curve, Cplxd c, int samples) {
  const double h = 2 * pi / samples;
  std::vector<double> vals(samples);
  for (int k = 0; k < samples; ++k) vals[k] = std::abs(curve(k * h) - c);
  double best = *std::max_element(vals.begin(), vals.end());
  auto f = [&](double s) { return -std::abs(curve(s) - c); };
  for (int k = 0; k < samples; ++k) {
    const double v = vals[k];
    if (v < vals[(k + samples - 1) % samples] || v < vals[(k + 1) % samples]) continue;
    if (v < 0.9 * best) continue;
    const auto r = boost::math::tools::brent_find_minima(f, (k - 1) * h, (k + 1) * h, 52);
    best = std::max(best, -r.second);
  }
  return best;
}

InjectivityCertificate plane_injectivity(const PlaneDomain& domain, const std::function<Cplxd(Cplxd)>& f,
                                         int winding) {
  InjectivityCertificate cert;
  const auto [lo, hi] = domain.bounding_box();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(lo.real(), hi.real()), uy(lo.imag(), hi.imag());
  std::vector<Cplxd> img;
  for (int trial = 0; img.size() < 64 && trial < 100000; ++trial) {
    const Cplxd z(ux(rng), uy(rng));
    if (domain.contains(z)) img.push_back(f(z));
  }
  double sep = kInf;
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = i + 1; j < img.size(); ++j) sep = std::min(sep, std::abs(img[i] - img[j]));
  cert.samples = static_cast<int>(img.size());
  cert.min_separation = sep;
  cert.argument_principle = std::abs(winding) == 1;
  return cert;
}

}  // namespace

int winding_about_zero(const ParametricCurve& curve, int samples) {
  const double h = 2 * pi / samples;
  double total = 0;
  Cplxd prev = curve(0.0);
  for (int k = 1; k <= samples; ++k) {
    const double s = k == samples ? 2 * pi : k * h;
    const Cplxd z = k == samples ? curve(0.0) : curve(s);
    total += turning(curve, (k - 1) * h, prev, s, z, 40);
    prev = z;
  }
  return static_cast<int>(std::lround(total / (2 * pi)));
}

double inradius_at_zero(const std::vector<ParametricCurve>& boundary, const std::vector<Cplxd>& points, int samples) {
  if (boundary.empty()) throw Error(ErrorKind::DegenerateCompetitor, "image has no boundary");
  int enclosing = 0;
  for (const auto& c : boundary) {
    const int w = winding_about_zero(c);
    if (std::abs(w) == 1) {
      ++enclosing;
    } else if (w != 0) {
      throw Error(ErrorKind::DegenerateCompetitor, "image boundary winds more than once around 0");
    }
  }
  if (enclosing != 1) throw Error(ErrorKind::DegenerateCompetitor, "0 is not interior to the image");
  double r = kInf;
  for (const auto& c : boundary) r = std::min(r, min_modulus(c, samples));
  for (Cplxd q : points) r = std::min(r, std::abs(q));
  if (!(r > 0)) throw Error(ErrorKind::DegenerateCompetitor, "image boundary touches 0");
  return r;
}

SqueezingEstimate evaluate_plane_competitor(const PlaneDomain& domain, Cplxd p, const std::function<Cplxd(Cplxd)>& f,
                                            double debit, int samples, CompetitorTag tag) {
  if (std::abs(f(p)) > 1e-12) throw Error(ErrorKind::DegenerateCompetitor, "competitor does not send p to 0", {p});
  std::vector<ParametricCurve> images;
  for (const BoundaryCurve* c : domain.curves()) images.push_back([c, f](double s) { return f(c->point(s)); });
  std::vector<Cplxd> pts;
  for (Cplxd q : domain.punctures()) pts.push_back(f(q));
  for (const auto& img : images) {
    const double h = 2 * pi / samples;
    for (int k = 0; k < samples; ++k) {
      const Cplxd w = img(k * h);
      if (!(std::abs(w) <= 1.0 + 1e-9 + debit))
        throw Error(ErrorKind::DegenerateCompetitor, "competitor leaves the unit disc", {w});
    }
  }
  const double r = inradius_at_zero(images, pts, samples);
  int winding = 0;
  for (const auto& img : images) winding += winding_about_zero(img);

  SqueezingEstimate est;
  est.point = CVecd::Constant(1, p);
  est.competitor.tag = tag;
  est.competitor.dim = 1;
  est.competitor.forward = [f](const CVecd& z) { return CVecd::Constant(1, f(z[0])); };
  est.competitor.basepoint = est.point;
  est.competitor.injectivity = plane_injectivity(domain, f, winding);
  est.evidence.boundary_samples = samples * static_cast<int>(images.size());
  est.evidence.min_boundary_distance = r;
  est.accuracy_debit = debit;
  est.lower_bound = std::min(r, 1.0) - debit;
  return est;
}

namespace {

// Möbius competitors: optional inversion h(z) = 1/(z − q) with q in a hole,
// rescale into the disc |w − C| < R enclosing h(D), then recentre at h(p).
struct MobiusFamily {
  const PlaneDomain& domain;
  Cplxd p;
  int hole = -1;  // −1: h is the identity
  Cplxd q0;
  double q_scale = 1.0;
  Cplxd c0;
  double c_scale = 1.0;

  bool pole(const Eigen::VectorXd& x, Cplxd& q) const {
    if (hole < 0) return true;
    q = q0 + Cplxd(x[2], x[3]) * q_scale;
    const BoundaryCurve& c = domain.holes()[hole];
    return c.winding_number(q) != 0 && c.distance(q) > 1e-6 * q_scale;
  }

  std::function<Cplxd(Cplxd)> premap(Cplxd q) const {
    if (hole < 0) return [](Cplxd z) { return z; };
    return [q](Cplxd z) { return 1.0 / (z - q); };
  }

  // Competitor for parameters x; `samples` sets the density of the enclosing-radius search.
  std::optional<std::function<Cplxd(Cplxd)>> competitor(const Eigen::VectorXd& x, int samples) const {
    Cplxd q;
    if (!pole(x, q)) return std::nullopt;
    const auto h = premap(q);
    const Cplxd c = c0 + Cplxd(x[0], x[1]) * c_scale;
    double radius = 0;
    for (const BoundaryCurve* curve : domain.curves())
      radius = std::max(radius, max_distance([&](double s) { return h(curve->point(s)); }, c, samples));
    radius *= 1 + 1e-12;
    const Cplxd wp = (h(p) - c) / radius;
    if (!(std::abs(wp) < 1)) return std::nullopt;
    return [h, c, radius, wp](Cplxd z) {
      const Cplxd w = (h(z) - c) / radius;
      return (w - wp) / (1.0 - std::conj(wp) * w);
    };
  }

  double inradius(const Eigen::VectorXd& x, int samples) const {
    const auto f = competitor(x, samples);
    if (!f) return -1.0;
    double r = kInf;
    const double h = 2 * pi / samples;
    for (const BoundaryCurve* curve : domain.curves())
      for (int k = 0; k < samples; ++k) r = std::min(r, std::abs((*f)(curve->point(k * h))));
    for (Cplxd pt : domain.punctures()) r = std::min(r, std::abs((*f)(pt)));
    return r;
  }
};

Cplxd interior_point_of(const BoundaryCurve& c) {
  Cplxd mean = 0;
  for (const Cplxd& z : c.cached_samples()) mean += z;
  mean /= double(c.cached_samples().size());
  if (c.winding_number(mean) != 0) return mean;
  // step inward from the curve
  for (int k = 0; k < BoundaryCurve::kDistanceNodes; k += 64) {
    const double s = 2 * pi * k / BoundaryCurve::kDistanceNodes;
    for (double t : {1e-1, 1e-2, 1e-3}) {
      const Cplxd z = c.point(s) + t * std::abs(c.tangent(s)) * c.inner_normal(s);
      if (c.winding_number(z) != 0) return z;
    }
  }
  throw Error(ErrorKind::Domain, "no interior point found for a hole");
}

SqueezingEstimate mobius_estimate(const PlaneDomain& domain, Cplxd p, const PlaneEstimateOptions& options) {
  const auto [lo, hi] = domain.bounding_box();
  std::vector<MobiusFamily> families;
  families.push_back(MobiusFamily{domain, p, -1, 0.0, 1.0, 0.5 * (lo + hi), 0.5 * std::abs(hi - lo)});
  for (int j = 0; j < static_cast<int>(domain.holes().size()); ++j) {
    const BoundaryCurve& c = domain.holes()[j];
    MobiusFamily fam{domain, p, j, interior_point_of(c), 1.0, 0.0, 1.0};
    fam.q_scale = c.distance(fam.q0);
    Cplxd ilo(kInf, kInf), ihi(-kInf, -kInf);
    for (const Cplxd& z : c.cached_samples()) {
      const Cplxd w = 1.0 / (z - fam.q0);
      ilo = {std::min(ilo.real(), w.real()), std::min(ilo.imag(), w.imag())};
      ihi = {std::max(ihi.real(), w.real()), std::max(ihi.imag(), w.imag())};
    }
    fam.c0 = 0.5 * (ilo + ihi);
    fam.c_scale = 0.5 * std::abs(ihi - ilo);
    families.push_back(fam);
  }

  const std::vector<std::array<double, 2>> seeds = {{0, 0},     {0.25, 0},   {-0.25, 0},  {0, 0.25},
                                                    {0, -0.25}, {0.2, 0.2},  {-0.2, 0.2}, {0.2, -0.2}};
  double best_value = -kInf, best_norm = kInf;
  const MobiusFamily* best_family = nullptr;
  Eigen::VectorXd best_x;
  for (const MobiusFamily& fam : families) {
    const int dim = fam.hole < 0 ? 2 : 4;
    auto embed = [&](const Eigen::VectorXd& y) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
      x.head(dim) = y;
      return x;
    };
    auto objective = [&](const Eigen::VectorXd& y) { return -fam.inradius(embed(y), options.search_samples); };
    for (const auto& seed : seeds) {
      Eigen::VectorXd y0 = Eigen::VectorXd::Zero(dim);
      y0[0] = seed[0];
      y0[1] = seed[1];
      const auto res = detail::nelder_mead(objective, y0, 0.05, 1e-12, 400);
      const double value = -res.value;
      const double norm = res.x.norm();
      if (value > best_value + 1e-12 || (std::abs(value - best_value) <= 1e-12 && norm < best_norm)) {
        best_value = value;
        best_norm = norm;
        best_family = &fam;
        best_x = embed(res.x);
      }
    }
  }
  if (!best_family || !(best_value > 0))
    throw Error(ErrorKind::DegenerateCompetitor, "no Mobius competitor with positive inradius", {p});
  const auto f = best_family->competitor(best_x, options.samples);
  if (!f) throw Error(ErrorKind::DegenerateCompetitor, "optimal Mobius competitor is invalid", {p});
  SqueezingEstimate est =
      evaluate_plane_competitor(domain, p, *f, 0.0, options.samples, CompetitorTag::MobiusOfIdentity);
  est.competitor.detail = best_family->hole < 0 ? "identity" : "inversion in hole " + std::to_string(best_family->hole);
  return est;
}

}  // namespace

SqueezingEstimate squeeze_lower_plane(const PlaneDomain& domain, Cplxd p, const PlaneEstimateOptions& options) {
  if (!domain.contains(p)) throw Error(ErrorKind::Domain, "point is not inside the domain", {p});
  if (domain.simply_connected() && domain.outer().kind() != CurveKind::Polygon) {
    try {
      const ConformalMapHandle f = riemann_map(domain, p, options.riemann);
      auto fwd = [f](Cplxd z) { return f.forward(z); };
      SqueezingEstimate est = evaluate_plane_competitor(domain, p, fwd, f.accuracy(), options.samples,
                                                        CompetitorTag::Riemann);
      // The exact Riemann map is onto the disc; only its accuracy is debited.
      est.lower_bound = 1.0 - f.accuracy();
      est.competitor.detail = std::string(to_string(f.backend()));
      return est;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AccuracyNotReached) throw;
    }
  }
  return mobius_estimate(domain, p, options);
}

namespace {

// Uniform sample of the normalized domain A(T(D)).
CVecd sample_normalized(const CConvexSpec& spec, std::mt19937_64& rng, long& trials) {
  const int n = spec.n;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  switch (spec.base.kind) {
    case CConvexBase::Kind::L1Ball: {
      ++trials;
      return spec.A.apply(sample_l1_ball(n, rng));
    }
    case CConvexBase::Kind::L2Ball: {
      ++trials;
      CVecd g(n);
      for (int j = 0; j < n; ++j) g[j] = Cplxd(normal(rng), normal(rng));
      const double radius = std::pow(unit(rng), 1.0 / (2 * n));
      return spec.A.apply(g / g.norm() * radius);
    }
    case CConvexBase::Kind::Product: {
      CVecd x(n);
      for (int j = 0; j < n; ++j) {
        const PlaneDomain& fac = spec.base.factors[j];
        const auto [lo, hi] = fac.bounding_box();
        std::uniform_real_distribution<double> ux(lo.real(), hi.real()), uy(lo.imag(), hi.imag());
        for (;;) {
          ++trials;
          const Cplxd z(ux(rng), uy(rng));
          if (fac.contains(z)) {
            x[j] = z;
            break;
          }
        }
      }
      return spec.A.apply(x);
    }
    case CConvexBase::Kind::Custom: break;
  }
  CVecd lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    const auto box = spec.projections[j].bounding_box();
    lo[j] = box.first;
    hi[j] = box.second;
  }
  for (;;) {
    ++trials;
    if (trials > 200000000L) throw Error(ErrorKind::Certificate, "rejection sampling of the normalized domain stalled");
    CVecd w(n);
    for (int j = 0; j < n; ++j)
      w[j] = Cplxd(lo[j].real() + unit(rng) * (hi[j].real() - lo[j].real()),
                   lo[j].imag() + unit(rng) * (hi[j].imag() - lo[j].imag()));
    if (spec.in_normalized(w)) return w;
  }
}

}  // namespace

SqueezingEstimate theorem1_bound(const CConvexSpec& spec, const CConvexValidation& validation,
                                 const Theorem1Options& options) {
  if (!validation.passed) throw Error(ErrorKind::State, "theorem1_bound needs a passed validation");
  const int n = spec.n;
  const double sqrt_n = std::sqrt(double(n));
  std::vector<ConformalMapHandle> phi;
  double debit = 0;
  for (int j = 0; j < n; ++j) {
    phi.push_back(riemann_map(spec.projections[j], 0.0, options.riemann));
    koebe_derivative_lower(phi.back());
    debit += phi.back().accuracy();
  }
  const double dn = dn_for_matrix(spec.A);

  auto to_normalized = [&](const CVecd& x, CVecd& w) {
    w.resize(n);
    for (int j = 0; j < n; ++j) {
      if (!(std::abs(x[j]) < 1.0)) return false;
      w[j] = phi[j].inverse(x[j]);
    }
    return true;
  };
  auto member = [&](const CVecd& x) {
    CVecd w;
    return to_normalized(x, w) && spec.in_normalized(w);
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SqueezingEvidence ev;
  ev.dn = dn;
  ev.floor = cn(dn_worst_case(n), n);
  ev.matrix_floor = cn(dn, n);

  // (i) d_n·Dⁿ ⊂ φ(normalized D)
  for (int i = 0; i < options.samples; ++i) {
    CVecd v(n);
    for (int j = 0; j < n; ++j) v[j] = std::polar(dn * std::sqrt(unit(rng)), 2 * pi * unit(rng));
    if (!member(v)) throw Error(ErrorKind::Certificate, "polydisc point outside the competitor image",
                                std::vector<Cplxd>(v.data(), v.data() + n));
    ++ev.polydisc_samples_checked;
  }
  // (ii) φ(normalized D) ⊂ closed polydisc
  long trials = 0;
  for (int i = 0; i < options.samples; ++i) {
    const CVecd w = sample_normalized(spec, rng, trials);
    for (int j = 0; j < n; ++j) {
      const bool inside = spec.projections[j].classify(w[j]) != PointClass::Outside;
      if (!inside || !(std::abs(phi[j].forward(w[j])) <= 1.0 + phi[j].accuracy() + 1e-12))
        throw Error(ErrorKind::Certificate, "normalized point maps outside the closed polydisc",
                    std::vector<Cplxd>(w.data(), w.data() + n));
    }
    ++ev.domain_samples_checked;
  }

  // Euclidean inradius of φ(normalized D) at 0: first exit along sampled rays,
  // then local minimization over the direction.
  auto exit_radius = [&](CVecd v) {
    v /= v.norm();
    const double vmax = v.cwiseAbs().maxCoeff();
    double lo = dn / vmax, hi = 1.0 / vmax;
    constexpr int kScan = 32;
    double prev = lo;
    bool found = false;
    for (int k = 1; k <= kScan; ++k) {
      const double t = lo + (hi - lo) * k / kScan;
      if (k < kScan && member(t * v)) {
        prev = t;
        continue;
      }
      lo = prev;
      hi = t;
      found = true;
      break;
    }
    if (!found) return hi;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (member(mid * v) ? lo : hi) = mid;
    }
    return lo;
  };
  auto direction = [n](const Eigen::VectorXd& y) {
    CVecd v(n);
    for (int j = 0; j < n; ++j) v[j] = Cplxd(y[2 * j], y[2 * j + 1]);
    return v;
  };
  std::normal_distribution<double> normal;
  std::vector<std::pair<double, Eigen::VectorXd>> rays;
  for (int i = 0; i < options.directions; ++i) {
    Eigen::VectorXd y(2 * n);
    for (int k = 0; k < 2 * n; ++k) y[k] = normal(rng);
    rays.emplace_back(exit_radius(direction(y)), y / y.norm());
  }
  std::sort(rays.begin(), rays.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double inradius = rays.front().first;
  auto objective = [&](const Eigen::VectorXd& y) {
    if (y.norm() < 1e-12) return kInf;
    return exit_radius(direction(y));
  };
  for (int i = 0; i < std::min<int>(4, static_cast<int>(rays.size())); ++i) {
    const auto res = detail::nelder_mead(objective, rays[i].second, 0.05, 1e-12, 300);
    inradius = std::min(inradius, res.value);
  }
  ev.sampled_inradius = inradius;

  SqueezingEstimate est;
  est.point = CVecd::Zero(n);
  est.accuracy_debit = debit;
  est.lower_bound = std::max(dn, inradius) / sqrt_n - debit;
  est.evidence = ev;
  est.evidence.boundary_samples = options.directions;
  est.evidence.min_boundary_distance = inradius;

  CompetitorEmbedding& comp = est.competitor;
  comp.tag = CompetitorTag::Theorem1Product;
  comp.dim = n;
  comp.basepoint = spec.denormalize(CVecd::Zero(n));
  const auto phis = std::make_shared<const std::vector<ConformalMapHandle>>(phi);
  const CMatd at = spec.A.matrix() * spec.T.matrix();
  comp.forward = [phis, at, sqrt_n](const CVecd& z) {
    CVecd w = at * z;
    for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = (*phis)[j].forward(w[j]) / sqrt_n;
    return w;
  };
  // injectivity: coordinatewise Riemann maps and an invertible linear map
  std::vector<CVecd> img;
  long t2 = 0;
  for (int i = 0; i < 64; ++i) img.push_back(comp.forward(spec.denormalize(sample_normalized(spec, rng, t2))));
  double sep = kInf;
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = i + 1; j < img.size(); ++j) sep = std::min(sep, (img[i] - img[j]).norm());
  comp.injectivity.samples = static_cast<int>(img.size());
  comp.injectivity.min_separation = sep;
  bool wind = true;
  for (int j = 0; j < n; ++j) {
    const BoundaryCurve& c = spec.projections[j].outer();
    const auto& f = phi[j];
    wind = wind && std::abs(winding_about_zero([&](double s) { return f.forward(c.point(s)); }, 512)) == 1;
  }
  comp.injectivity.argument_principle = wind;
  comp.detail = "phi(A T z)/sqrt(n)";
  return est;
}

double prop2a_competitor_bound(double r, double r_prime, Cplxd zeta, int samples, std::uint64_t seed) {
  const double az = std::abs(zeta);
  if (!(r > 0 && r < 2)) throw Error(ErrorKind::Domain, "r must lie in (0,2)", {}, r);
  if (!(r_prime > 0 && r_prime < r)) throw Error(ErrorKind::Domain, "need 0 < r' < r", {}, r_prime);
  if (!(az < 1 && std::abs(zeta - 1.0) < r)) throw Error(ErrorKind::Domain, "zeta is not in the lens D_r", {zeta});
  if (!(1 - az <= r_prime)) throw Error(ErrorKind::Domain, "need 1 - |zeta| <= r'", {zeta});
  const Cplxd dir = az > 0 ? zeta / az : Cplxd(1.0);
  const double tilt = std::abs(dir - 1.0);
  if (!(tilt < r - r_prime)) throw Error(ErrorKind::Domain, "need |e^{i theta} - 1| < r - r'", {zeta}, tilt);

  const double bound = rho(az, r_prime);
  if (bound == 0) return 0;
  const MobiusDisc<double> f(zeta);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < samples; ++i) {
    // radii biased toward ρ, where the chain is tightest
    const double rad = bound * std::pow(unit(rng), 0.25);
    const Cplxd t = std::polar(rad, 2 * pi * unit(rng));
    const double at = std::abs(t);
    const double gap = std::abs(f(t) - 1.0);
    const double chain = tilt + (1 - az) * (1 + at) / (1 - az * at);
    if (!(gap <= chain * (1 + 1e-12) + 1e-15 && chain < r && std::abs(f(t)) < 1.0))
      throw Error(ErrorKind::Inconsistency, "lens competitor chain violated", {zeta, t}, gap);
  }
  return bound;
}

namespace {

struct BoundaryPoint {
  const BoundaryCurve* curve = nullptr;
  double param = 0.0;
  Cplxd inner_normal;
};

BoundaryPoint locate_boundary(const PlaneDomain& domain, Cplxd a) {
  BoundaryPoint out;
  double best = kInf;
  const auto curves = domain.curves();
  bool outer = true;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    double s;
    const double d = curves[i]->distance(a, &s);
    if (d < best) {
      best = d;
      out.curve = curves[i];
      out.param = s;
      outer = i == 0;
    }
  }
  if (best > 1e-9 * std::max(1.0, std::abs(a))) throw Error(ErrorKind::Domain, "a is not a boundary point", {a}, best);
  const Cplxd n = out.curve->inner_normal(out.param);
  out.inner_normal = outer ? n : -n;
  return out;
}

}  // namespace

BoundaryReport boundary_report(const PlaneDomain& domain, Cplxd a, double alpha, int K,
                               const PlaneEstimateOptions& options) {
  if (!(alpha > 0 && alpha <= 1)) throw Error(ErrorKind::Domain, "alpha must lie in (0,1]", {}, alpha);
  if (K < 1 || K > 6) throw Error(ErrorKind::Domain, "K must lie in [1,6]", {}, K);
  const BoundaryPoint bp = locate_boundary(domain, a);

  BoundaryReport rep;
  rep.a = a;
  rep.alpha = alpha;
  rep.K = K;
  for (int k = 1; k <= K; ++k) {
    BoundaryRow row;
    row.z = a + std::pow(10.0, -k) * bp.inner_normal;
    row.delta = domain.boundary_distance(row.z);
    row.s_lb = squeeze_lower_plane(domain, row.z, options).lower_bound;
    row.ratio = (1.0 - row.s_lb) / std::pow(row.delta, alpha);
    if (!std::isfinite(row.ratio)) throw Error(ErrorKind::Inconsistency, "non-finite ratio", {row.z});
    if (!rep.rows.empty() && !(row.delta < rep.rows.back().delta))
      throw Error(ErrorKind::Inconsistency, "approach distances are not decreasing", {row.z}, row.delta);
    rep.running_max = std::max(rep.running_max, row.ratio);
    rep.rows.push_back(row);
  }
  rep.strictly_decreasing = rep.strictly_increasing = rep.rows.size() > 1;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    rep.strictly_decreasing = rep.strictly_decreasing && rep.rows[i].ratio < rep.rows[i - 1].ratio;
    rep.strictly_increasing = rep.strictly_increasing && rep.rows[i].ratio > rep.rows[i - 1].ratio;
  }

  try {
    ChartOptions copt;
    copt.riemann = options.riemann;
    const OsculationChart chart = osculation_chart(domain, a, copt);
    rep.chart_r = chart.r;
    rep.theta_prime_abs = std::abs(chart.theta_prime_at_a);
    rep.theoretical_cap = (2 - chart.r) / chart.r * std::abs(chart.theta_prime_at_a);
  } catch (const Error& e) {
    rep.chart_failure = e.what();
  }
  return rep;
}

MetricCheck metric_check_disc(Cplxd z) {
  if (!(std::abs(z) < 1)) throw Error(ErrorKind::Domain, "point must lie in the unit disc", {z});
  const double w = 1.0 - std::norm(z);
  const double kappa = 1.0 / w;
  const double beta = std::sqrt(2.0) / w;
  const double s = 1.0;
  MetricCheck out;
  out.lhs = s * s * beta;
  out.rhs = std::sqrt(2.0) * kappa;
  out.holds = out.lhs <= out.rhs * (1 + 1e-12);
  return out;
}

}  // namespace squeeze
