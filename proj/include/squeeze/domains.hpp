#pragma once

// Plane domains bounded by Jordan curves, and C-convex domain descriptions
// together with the sampling validator for their normalization data.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "squeeze/core.hpp"

namespace squeeze {

enum class CurveKind { Circle, Ellipse, Polygon, Trig, Digon };

const char* to_string(CurveKind kind);

/// Closed Jordan curve parameterized over s ∈ [0, 2π).
///
/// Circles, ellipses and trigonometric-polynomial curves are smooth and carry
/// exact derivatives. Polygons and digons (two circular arcs or segments
/// meeting at two vertices) have corners and are accepted only where the
/// consumer tolerates them.
class BoundaryCurve {
public:
  struct Circle {
    Cplxd center;
    double radius;
  };
  struct Ellipse {
    Cplxd center;
    double semi_major;
    double semi_minor;
    double angle;  // rotation of the major axis
  };
  struct Polygon {
    std::vector<Cplxd> vertices;
  };
  // z(s) = Σ_k coeffs[k - min_freq] e^{iks}
  struct Trig {
    int min_freq;
    std::vector<Cplxd> coeffs;
  };
  // Arc v1 → v2 through m1, then arc v2 → v1 through m2. Each arc is a circular
  // arc or a segment (when its midpoint is collinear with the vertices).
  struct Digon {
    Cplxd v1, v2, m1, m2;
  };
  using Params = std::variant<Circle, Ellipse, Polygon, Trig, Digon>;

  static BoundaryCurve circle(Cplxd center, double radius);
  static BoundaryCurve ellipse(Cplxd center, double semi_major, double semi_minor, double angle = 0.0);
  static BoundaryCurve polygon(std::vector<Cplxd> vertices);
  static BoundaryCurve trig(int min_freq, std::vector<Cplxd> coeffs);
  static BoundaryCurve digon(Cplxd v1, Cplxd v2, Cplxd m1, Cplxd m2);

  CurveKind kind() const;
  const Params& params() const { return params_; }

  Cplxd point(double s) const;
  // dz/ds; one-sided (right) at corners
  Cplxd tangent(double s) const;
  Cplxd second_derivative(double s) const;

  bool is_smooth() const;
  // +1 for counterclockwise, −1 for clockwise
  int orientation() const { return orientation_; }
  // Parameters of corners (polygon and digon vertices).
  std::vector<double> corner_parameters() const;

  // Unit normal pointing into the bounded region enclosed by the curve.
  Cplxd inner_normal(double s) const;

  // Cached uniform samples at s_k = 2πk/kDistanceNodes.
  static constexpr int kDistanceNodes = 4096;
  static constexpr int kIntersectionNodes = 2048;
  const std::vector<Cplxd>& cached_samples() const { return *samples_; }
  std::vector<Cplxd> sample(int count) const;

  // Distance from z to the curve; `param` receives the closest parameter.
  double distance(Cplxd z, double* param = nullptr) const;
  // Winding number of the curve about z (z must not lie on the curve).
  int winding_number(Cplxd z) const;
  double signed_area() const;

  // Distance to the nearest cached sample, and the longest chord between samples.
  double coarse_distance(Cplxd z) const;
  double max_step() const;

private:
  explicit BoundaryCurve(Params params);
  Params params_;
  int orientation_ = 1;
  mutable double max_step_ = -1.0;
  std::shared_ptr<const std::vector<Cplxd>> samples_;
};

enum class PointClass { Inside, Boundary, Outside };

/// Bounded plane domain: interior of `outer` minus the closed interiors of the
/// holes, minus finitely many punctures.
class PlaneDomain {
public:
  static constexpr double kBoundaryCollar = 1e-10;

  explicit PlaneDomain(BoundaryCurve outer, std::vector<BoundaryCurve> holes = {},
                       std::vector<Cplxd> punctures = {});

  static PlaneDomain disc(Cplxd center, double radius);
  static PlaneDomain annulus(Cplxd center, double inner, double outer);
  static PlaneDomain punctured_disc(Cplxd center, double radius, Cplxd puncture);

  const BoundaryCurve& outer() const { return outer_; }
  const std::vector<BoundaryCurve>& holes() const { return holes_; }
  const std::vector<Cplxd>& punctures() const { return punctures_; }

  bool simply_connected() const { return holes_.empty() && punctures_.empty(); }

  PointClass classify(Cplxd z) const;
  bool contains(Cplxd z) const { return classify(z) == PointClass::Inside; }
  double boundary_distance(Cplxd z) const;

  // All boundary curves in order: outer first, then holes.
  std::vector<const BoundaryCurve*> curves() const;

  // Axis-aligned bounding box of the outer curve: (lower-left, upper-right).
  std::pair<Cplxd, Cplxd> bounding_box() const;

private:
  BoundaryCurve outer_;
  std::vector<BoundaryCurve> holes_;
  std::vector<Cplxd> punctures_;
};

double boundary_distance(const PlaneDomain& domain, Cplxd z);
bool contains(const PlaneDomain& domain, Cplxd z);

enum class DiniVerdict { Converged, Diverged, Inconclusive };

const char* to_string(DiniVerdict verdict);

struct DiniModulus {
  std::vector<std::pair<double, double>> samples;  // (t, ω(t)), t descending
  double integral_estimate = 0.0;
  DiniVerdict verdict = DiniVerdict::Inconclusive;
};

// Modulus of continuity of the inner normal, estimated at kDistanceNodes
// samples, followed by dini_integrate.
DiniModulus dini_modulus(const BoundaryCurve& curve, std::vector<double> t_grid);

// Log-midpoint integral of ω(t)/t and a heuristic tail verdict.
DiniModulus dini_integrate(std::vector<std::pair<double, double>> samples);

// Log-spaced grid from t_max down to t_min, `per_decade` points per decade.
std::vector<double> log_grid(double t_max, double t_min, int per_decade);

/// Shape of the domain D before normalization; `membership` is derived from it.
struct CConvexBase {
  enum class Kind { L1Ball, L2Ball, Product, Custom };
  Kind kind = Kind::Custom;
  std::vector<PlaneDomain> factors;  // Product only
};

/// C-convex domain D ⊂ Cⁿ with its normalization (T, A) and the coordinate
/// projections of the normalized domain A(T(D)).
struct CConvexSpec {
  int n = 0;
  std::function<bool(const CVecd&)> membership;
  UnitaryMatrix<double> T;
  UnitTriangularMatrix<double> A;
  std::vector<PlaneDomain> projections;
  CConvexBase base;

  // T(D) = base, so D's membership is base membership of T z.
  static CConvexSpec from_base(CConvexBase base, int n, UnitaryMatrix<double> T,
                               UnitTriangularMatrix<double> A, std::vector<PlaneDomain> projections);

  bool in_domain(const CVecd& z) const { return membership(z); }
  // Membership of w in the normalized domain A(T(D)).
  bool in_normalized(const CVecd& w) const;
  // Pre-image (A T)⁻¹ w.
  CVecd denormalize(const CVecd& w) const;
  CVecd normalize(const CVecd& z) const;
};

struct CConvexValidation {
  bool passed = false;
  int samples = 0;
  std::uint64_t seed = 0;
  int l1_ball_samples_checked = 0;
  int normalized_samples_checked = 0;
  double min_gap_to_one = 0.0;  // min over samples and coordinates of |w_j − 1|
  double dn = 0.0;              // dn_for_matrix(A)
};

// Throws Error(ErrorKind::Validation) with the offending point on failure.
CConvexValidation validate_cconvex(const CConvexSpec& spec, int samples, std::uint64_t seed = 1);

// Uniform (volume) sample of the open 1-norm unit ball of Cⁿ.
template <typename Rng>
CVecd sample_l1_ball(int n, Rng& rng);

}  // namespace squeeze

#include "squeeze/detail/sampling.hpp"
