#pragma once

// Spec files and report serialization. Specs are JSON objects with
// "schema": 1 and a "kind"; unknown fields are rejected.
//
//   disc            center, radius
//   annulus         center, inner, outer
//   punctured_disc  center, radius, puncture
//   ellipse         center, semi_major, semi_minor, angle?
//   polygon         vertices
//   trig_curve      min_freq, coeffs
//   digon           v1, v2, m1, m2
//   plane           outer (curve), holes? (curves), punctures? (points)
//   cconvex         n, base, T, A, projections (plane specs without "schema")
//
// Complex numbers are [re, im]. Matrices are row-major arrays of rows. A
// cconvex base is {"kind": "l1_ball" | "l2_ball"} or
// {"kind": "product", "factors": [...]}. Every spec may carry "name" and
// "description".

#include <optional>
#include <string>

#include <json.hpp>

#include "squeeze/domains.hpp"
#include "squeeze/squeezing.hpp"

namespace squeeze::io {

using nlohmann::json;

inline constexpr int kSchema = 1;

struct DomainSpec {
  std::string kind;
  std::string name;
  std::optional<PlaneDomain> plane;
  std::optional<CConvexSpec> cconvex;
};

// Throws Error(Parse) on malformed input; domain constructors may throw
// their own validation errors.
DomainSpec parse_spec(const json& j);
DomainSpec load_spec(const std::string& path);

BoundaryCurve parse_curve(const json& j);
PlaneDomain parse_plane(const json& j);

json to_json(Cplxd z);
json to_json(const CVecd& v);
json to_json(const BoundaryCurve& curve);
json to_json(const PlaneDomain& domain);
json to_json(const SqueezingEstimate& estimate);
json to_json(const BoundaryReport& report);
json to_json(const CConvexValidation& validation);
json to_json(const Error& error);

// Header delta,s_lb,ratio,alpha,cap; %.17g; LF line endings. The cap column
// is empty when no chart was available.
std::string to_csv(const BoundaryReport& report);

// Two-space indented JSON with a trailing newline.
std::string dump(const json& j);

}  // namespace squeeze::io
