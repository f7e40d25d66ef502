#pragma once

// Certified lower bounds for the squeezing function: competitor embeddings,
// the inradius certifier, the product-competitor pipeline for C-convex domains,
// the lens competitor near a boundary point and boundary-asymptotics reports.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "squeeze/conformal.hpp"
#include "squeeze/domains.hpp"

namespace squeeze {

// Closed curve s ↦ γ(s), s ∈ [0, 2π).
using ParametricCurve = std::function<Cplxd(double)>;

enum class CompetitorTag { MobiusOfIdentity, Riemann, Theorem1Product, Custom };

const char* to_string(CompetitorTag tag);

struct InjectivityCertificate {
  int samples = 0;
  double min_separation = 0.0;  // min |f(x) − f(y)| over sampled pairs
  bool argument_principle = false;
};

/// A holomorphic embedding f of the domain into the unit ball with f(p) = 0.
struct CompetitorEmbedding {
  CompetitorTag tag = CompetitorTag::Custom;
  int dim = 1;
  std::function<CVecd(const CVecd&)> forward;
  CVecd basepoint;
  InjectivityCertificate injectivity;
  std::string detail;
};

struct SqueezingEvidence {
  int boundary_samples = 0;
  double min_boundary_distance = 0.0;  // distance from 0 to the sampled image boundary
  // C-convex pipeline only
  int polydisc_samples_checked = 0;
  int domain_samples_checked = 0;
  double sampled_inradius = 0.0;
  double dn = 0.0;
  double floor = 0.0;         // cn(dn_worst_case(n), n)
  double matrix_floor = 0.0;  // cn(dn_for_matrix(A), n)
};

/// lower_bound = certified inradius of the competitor image at 0 − accuracy_debit.
struct SqueezingEstimate {
  CVecd point;
  double lower_bound = 0.0;
  CompetitorEmbedding competitor;
  SqueezingEvidence evidence;
  double accuracy_debit = 0.0;
};

// Distance from 0 to the image boundary given as closed curves (outer first,
// then holes) and isolated points, refined to relative error 1e−9. The outer
// curve must wind once around 0 and the others not at all.
double inradius_at_zero(const std::vector<ParametricCurve>& boundary, const std::vector<Cplxd>& points = {},
                        int samples = 4096);

// Winding number of a closed parametric curve about 0, with adaptive
// subdivision where the argument turns quickly.
int winding_about_zero(const ParametricCurve& curve, int samples = 1024);

struct PlaneEstimateOptions {
  RiemannOptions riemann;
  int samples = 4096;          // final certification density
  int search_samples = 384;    // per curve inside the optimizer
};

SqueezingEstimate squeeze_lower_plane(const PlaneDomain& domain, Cplxd p, const PlaneEstimateOptions& options = {});

// Estimate for a given plane competitor f with f(p) = 0 mapping the domain into
// the unit disc: inradius of f(∂domain) at 0 minus `debit`.
SqueezingEstimate evaluate_plane_competitor(const PlaneDomain& domain, Cplxd p,
                                            const std::function<Cplxd(Cplxd)>& f, double debit = 0.0,
                                            int samples = 4096, CompetitorTag tag = CompetitorTag::Custom);

struct Theorem1Options {
  int samples = 10000;
  std::uint64_t seed = 1;
  int directions = 256;
  RiemannOptions riemann;
};

SqueezingEstimate theorem1_bound(const CConvexSpec& spec, const CConvexValidation& validation,
                                 const Theorem1Options& options = {});

// ρ(ζ) after checking the chain |f_ζ(t) − 1| < r on `samples` points |t| < ρ.
double prop2a_competitor_bound(double r, double r_prime, Cplxd zeta, int samples = 1024, std::uint64_t seed = 1);

struct BoundaryRow {
  Cplxd z;
  double delta = 0.0;
  double s_lb = 0.0;
  double ratio = 0.0;
};

struct BoundaryReport {
  Cplxd a;
  double alpha = 1.0;
  int K = 0;
  std::vector<BoundaryRow> rows;  // δ strictly decreasing
  std::optional<double> theoretical_cap;
  std::optional<double> chart_r;
  std::optional<double> theta_prime_abs;
  std::string chart_failure;
  double running_max = 0.0;
  bool strictly_decreasing = false;
  bool strictly_increasing = false;
};

BoundaryReport boundary_report(const PlaneDomain& domain, Cplxd a, double alpha, int K,
                               const PlaneEstimateOptions& options = {});

struct MetricCheck {
  double lhs = 0.0;  // s²·β
  double rhs = 0.0;  // √2·κ
  bool holds = false;
};

MetricCheck metric_check_disc(Cplxd z);

}  // namespace squeeze
