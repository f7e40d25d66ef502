#pragma once

// Riemann maps onto the unit disc: a closed-form catalog, a boundary-integral
// (Kerzman–Stein / Szegő kernel) backend, Köbe quarter-theorem utilities, and
// the osculation chart that flattens a domain near a smooth boundary point.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "squeeze/domains.hpp"

namespace squeeze {

enum class Backend { ClosedForm, BoundaryIntegral };

const char* to_string(Backend backend);

/// Evaluable conformal map with inverse and derivative.
///
/// Handles returned by riemann_map send their source domain onto the unit
/// disc with forward(basepoint) = 0 and a positive derivative there; their
/// `accuracy` is a measured residual, never the requested target.
class ConformalMapHandle {
public:
  using Fn = std::function<Cplxd(Cplxd)>;

  ConformalMapHandle(Fn forward, Fn inverse, Fn derivative, Cplxd basepoint, double accuracy, Backend backend,
                     std::shared_ptr<const PlaneDomain> source, std::string description = {});

  Cplxd forward(Cplxd z) const { return forward_(z); }
  Cplxd inverse(Cplxd w) const { return inverse_(w); }
  Cplxd derivative(Cplxd z) const { return derivative_(z); }
  Cplxd operator()(Cplxd z) const { return forward_(z); }

  Cplxd basepoint() const { return basepoint_; }
  Cplxd derivative_at_basepoint() const { return derivative_at_basepoint_; }
  double accuracy() const { return accuracy_; }
  Backend backend() const { return backend_; }
  const PlaneDomain& source() const { return *source_; }
  std::shared_ptr<const PlaneDomain> source_ptr() const { return source_; }
  const std::string& description() const { return description_; }
  // Boundary nodes used by the numerical backend (0 for closed forms).
  int nodes() const { return nodes_; }

  ConformalMapHandle with_accuracy(double accuracy) const;
  ConformalMapHandle with_nodes(int nodes) const;

private:
  Fn forward_, inverse_, derivative_;
  Cplxd basepoint_;
  Cplxd derivative_at_basepoint_;
  double accuracy_;
  Backend backend_;
  std::shared_ptr<const PlaneDomain> source_;
  std::string description_;
  int nodes_ = 0;
};

struct RiemannOptions {
  enum class Prefer { Auto, ClosedForm, BoundaryIntegral };
  Prefer prefer = Prefer::Auto;
  double target_accuracy = 1e-8;
  int initial_nodes = 64;
  int max_nodes = 1 << 14;
  int test_points = 512;
  std::uint64_t seed = 1;
};

// Riemann map of a simply connected domain normalized by f(p) = 0, f′(p) > 0.
ConformalMapHandle riemann_map(const PlaneDomain& domain, Cplxd p, const RiemannOptions& options = {});

// Measured accuracy of a handle: sup of the round-trip residual over
// interior points and of ||f(z)| − 1| over boundary points.
struct MapResidual {
  double round_trip = 0.0;
  double boundary_modulus = 0.0;
  double max() const { return std::max(round_trip, boundary_modulus); }
};
MapResidual measure_residual(const ConformalMapHandle& handle, int test_points, std::uint64_t seed);

// Radius of the disc about 0 guaranteed inside f(B(p, R)) by the Köbe quarter
// theorem applied to the restriction t ↦ f(p + R t).
double koebe_guaranteed_radius(const ConformalMapHandle& handle, double restriction_radius);

// |f′(p)|, checked against the 1/4 lower bound implied by dist(p, ∂source) ≤ 1.
double koebe_derivative_lower(const ConformalMapHandle& handle);

// Inversion of a closed-form map through a homotopy from the basepoint
// followed by Newton polishing.
Cplxd newton_inverse(const ConformalMapHandle::Fn& f, const ConformalMapHandle::Fn& df, Cplxd w, Cplxd start,
                     Cplxd start_value);

/// Closed-form catalog.
namespace catalog {

// Möbius map of the disc |z − c| < R onto the unit disc.
ConformalMapHandle disc_map(Cplxd center, double radius, Cplxd p);
// Elliptic-function map of an ellipse (theta-function form).
ConformalMapHandle ellipse_map(const BoundaryCurve::Ellipse& ellipse, Cplxd p);
// Region bounded by two circular arcs through v1, v2 (through m1 and m2),
// containing `interior`. The region may contain ∞ only through the point at
// infinity being excluded from evaluation; `interior` must be finite.
ConformalMapHandle digon_map(const BoundaryCurve::Digon& digon, Cplxd interior, Cplxd p,
                             std::shared_ptr<const PlaneDomain> source = nullptr);

// θ1(w)/θ4(w) for nome q, the ellipse map in the variable w = asin(ζ/c).
Cplxd theta_ratio(Cplxd w, double q, Cplxd* derivative = nullptr);

}  // namespace catalog

/// The Prop-2 style chart at a boundary point: θ maps the domain into the unit
/// disc with θ(a) = 1 and the lens {|ζ| < 1, |ζ − 1| < r} contained in θ(D).
struct OsculationChart {
  std::shared_ptr<const ConformalMapHandle> theta;
  Cplxd a;
  double u = 0.0;
  Cplxd b;
  double r = 0.0;
  Cplxd theta_prime_at_a;
  double theta_prime_error = 0.0;  // step-halving estimate
  double accuracy = 0.0;           // of the inner Riemann map ψ
};

struct ChartOptions {
  std::optional<double> u;
  std::optional<Cplxd> b;
  RiemannOptions riemann;
};

OsculationChart osculation_chart(const PlaneDomain& domain, Cplxd a, const ChartOptions& options = {});

// Sampled-membership check that every point of the lens of radius `radius`
// maps back into the domain under θ⁻¹. Returns the number of failures.
int chart_consistency_failures(const OsculationChart& chart, const PlaneDomain& domain, double radius, int samples);

}  // namespace squeeze
