#include "squeeze/io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

namespace squeeze::io {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::Parse, msg); }

double number(const json& j, const std::string& what) {
  if (!j.is_number()) fail(what + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) fail(what + ": expected an integer");
  return j.get<int>();
}

Cplxd complex(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) fail(what + ": expected [re, im]");
  return {number(j[0], what), number(j[1], what)};
}

std::vector<Cplxd> complex_list(const json& j, const std::string& what) {
  if (!j.is_array()) fail(what + ": expected an array of [re, im]");
  std::vector<Cplxd> out;
  for (const auto& e : j) out.push_back(complex(e, what));
  return out;
}

CMatd matrix(const json& j, int n, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) fail(what + ": expected " + std::to_string(n) + " rows");
  CMatd m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n)
      fail(what + ": row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    for (int k = 0; k < n; ++k) m(i, k) = complex(j[i][k], what);
  }
  return m;
}

// Rejects fields outside required ∪ optional (plus the metadata fields at the
// top level) and reports missing required ones.
void check(const json& j, const std::string& what, std::initializer_list<const char*> required,
           std::initializer_list<const char*> optional, bool top_level) {
  if (!j.is_object()) fail(what + ": expected an object");
  std::set<std::string> known(optional.begin(), optional.end());
  if (top_level) known.insert({"schema", "name", "description"});
  for (const char* k : required) {
    known.insert(k);
    if (!j.contains(k)) fail(what + ": missing field \"" + k + "\"");
  }
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) fail(what + ": unknown field \"" + key + "\"");
}

std::string kind_of(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) fail(what + ": missing string field \"kind\"");
  return j["kind"].get<std::string>();
}

BoundaryCurve curve_from(const json& j, const std::string& kind, bool top_level) {
  if (kind == "circle") {
    check(j, "circle", {"kind", "center", "radius"}, {}, top_level);
    return BoundaryCurve::circle(complex(j["center"], "center"), number(j["radius"], "radius"));
  }
  if (kind == "ellipse") {
    check(j, "ellipse", {"kind", "center", "semi_major", "semi_minor"}, {"angle"}, top_level);
    return BoundaryCurve::ellipse(complex(j["center"], "center"), number(j["semi_major"], "semi_major"),
                                  number(j["semi_minor"], "semi_minor"),
                                  j.contains("angle") ? number(j["angle"], "angle") : 0.0);
  }
  if (kind == "polygon") {
    check(j, "polygon", {"kind", "vertices"}, {}, top_level);
    return BoundaryCurve::polygon(complex_list(j["vertices"], "vertices"));
  }
  if (kind == "trig_curve") {
    check(j, "trig_curve", {"kind", "min_freq", "coeffs"}, {}, top_level);
    return BoundaryCurve::trig(integer(j["min_freq"], "min_freq"), complex_list(j["coeffs"], "coeffs"));
  }
  if (kind == "digon") {
    check(j, "digon", {"kind", "v1", "v2", "m1", "m2"}, {}, top_level);
    return BoundaryCurve::digon(complex(j["v1"], "v1"), complex(j["v2"], "v2"), complex(j["m1"], "m1"),
                                complex(j["m2"], "m2"));
  }
  fail("unknown curve kind \"" + kind + "\"");
}

PlaneDomain plane_from(const json& j, bool top_level) {
  const std::string kind = kind_of(j, "domain");
  if (kind == "disc") {
    check(j, "disc", {"kind", "center", "radius"}, {}, top_level);
    return PlaneDomain::disc(complex(j["center"], "center"), number(j["radius"], "radius"));
  }
  if (kind == "annulus") {
    check(j, "annulus", {"kind", "center", "inner", "outer"}, {}, top_level);
    return PlaneDomain::annulus(complex(j["center"], "center"), number(j["inner"], "inner"),
                                number(j["outer"], "outer"));
  }
  if (kind == "punctured_disc") {
    check(j, "punctured_disc", {"kind", "center", "radius", "puncture"}, {}, top_level);
    return PlaneDomain::punctured_disc(complex(j["center"], "center"), number(j["radius"], "radius"),
                                       complex(j["puncture"], "puncture"));
  }
  if (kind == "plane") {
    check(j, "plane", {"kind", "outer"}, {"holes", "punctures"}, top_level);
    std::vector<BoundaryCurve> holes;
    if (j.contains("holes")) {
      if (!j["holes"].is_array()) fail("holes: expected an array of curves");
      for (const auto& h : j["holes"]) holes.push_back(parse_curve(h));
    }
    std::vector<Cplxd> punctures;
    if (j.contains("punctures")) punctures = complex_list(j["punctures"], "punctures");
    return PlaneDomain(parse_curve(j["outer"]), std::move(holes), std::move(punctures));
  }
  // a bare curve bounds a simply connected domain
  return PlaneDomain(curve_from(j, kind, top_level));
}

CConvexSpec cconvex_from(const json& j) {
  check(j, "cconvex", {"kind", "n", "base", "T", "A", "projections"}, {}, true);
  const int n = integer(j["n"], "n");
  if (n < 1) fail("n must be positive");
  const json& b = j["base"];
  const std::string bk = kind_of(b, "base");
  CConvexBase base;
  if (bk == "l1_ball" || bk == "l2_ball") {
    check(b, "base", {"kind"}, {}, false);
    base.kind = bk == "l1_ball" ? CConvexBase::Kind::L1Ball : CConvexBase::Kind::L2Ball;
  } else if (bk == "product") {
    check(b, "base", {"kind", "factors"}, {}, false);
    base.kind = CConvexBase::Kind::Product;
    if (!b["factors"].is_array() || static_cast<int>(b["factors"].size()) != n) fail("base: need n factors");
    for (const auto& f : b["factors"]) base.factors.push_back(parse_plane(f));
  } else {
    fail("base: unknown kind \"" + bk + "\"");
  }
  if (!j["projections"].is_array() || static_cast<int>(j["projections"].size()) != n)
    fail("projections: need n plane domains");
  std::vector<PlaneDomain> projections;
  for (const auto& p : j["projections"]) projections.push_back(parse_plane(p));
  return CConvexSpec::from_base(std::move(base), n, UnitaryMatrix<double>(matrix(j["T"], n, "T")),
                                UnitTriangularMatrix<double>(matrix(j["A"], n, "A")), std::move(projections));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

BoundaryCurve parse_curve(const json& j) { return curve_from(j, kind_of(j, "curve"), false); }

PlaneDomain parse_plane(const json& j) { return plane_from(j, false); }

DomainSpec parse_spec(const json& j) {
  if (!j.is_object()) fail("spec: expected an object");
  if (!j.contains("schema")) fail("spec: missing field \"schema\"");
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kSchema)
    fail("spec: unsupported schema (expected " + std::to_string(kSchema) + ")");
  DomainSpec out;
  out.kind = kind_of(j, "spec");
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("name: expected a string");
    out.name = j["name"].get<std::string>();
  }
  if (j.contains("description") && !j["description"].is_string()) fail("description: expected a string");
  if (out.kind == "cconvex")
    out.cconvex = cconvex_from(j);
  else
    out.plane = plane_from(j, true);
  return out;
}

DomainSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open spec file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(std::string("spec is not valid JSON: ") + e.what());
  }
  return parse_spec(j);
}

json to_json(Cplxd z) { return json::array({z.real(), z.imag()}); }

json to_json(const CVecd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

namespace {

json points(const std::vector<Cplxd>& zs) {
  json out = json::array();
  for (Cplxd z : zs) out.push_back(to_json(z));
  return out;
}

}  // namespace

json to_json(const BoundaryCurve& curve) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, BoundaryCurve::Circle>)
          return {{"kind", "circle"}, {"center", to_json(p.center)}, {"radius", p.radius}};
        else if constexpr (std::is_same_v<P, BoundaryCurve::Ellipse>)
          return {{"kind", "ellipse"},
                  {"center", to_json(p.center)},
                  {"semi_major", p.semi_major},
                  {"semi_minor", p.semi_minor},
                  {"angle", p.angle}};
        else if constexpr (std::is_same_v<P, BoundaryCurve::Polygon>)
          return {{"kind", "polygon"}, {"vertices", points(p.vertices)}};
        else if constexpr (std::is_same_v<P, BoundaryCurve::Trig>)
          return {{"kind", "trig_curve"}, {"min_freq", p.min_freq}, {"coeffs", points(p.coeffs)}};
        else
          return {{"kind", "digon"},
                  {"v1", to_json(p.v1)},
                  {"v2", to_json(p.v2)},
                  {"m1", to_json(p.m1)},
                  {"m2", to_json(p.m2)}};
      },
      curve.params());
}

json to_json(const PlaneDomain& domain) {
  json holes = json::array();
  for (const auto& h : domain.holes()) holes.push_back(to_json(h));
  return {{"kind", "plane"}, {"outer", to_json(domain.outer())}, {"holes", holes},
          {"punctures", points(domain.punctures())}};
}

json to_json(const SqueezingEstimate& e) {
  const auto& c = e.competitor;
  const auto& ev = e.evidence;
  json evidence = {{"boundary_samples", ev.boundary_samples},
                   {"min_boundary_distance", ev.min_boundary_distance}};
  if (c.tag == CompetitorTag::Theorem1Product) {
    evidence["polydisc_samples_checked"] = ev.polydisc_samples_checked;
    evidence["domain_samples_checked"] = ev.domain_samples_checked;
    evidence["sampled_inradius"] = ev.sampled_inradius;
    evidence["dn"] = ev.dn;
    evidence["floor"] = ev.floor;
    evidence["matrix_floor"] = ev.matrix_floor;
  }
  return {{"point", to_json(e.point)},
          {"lower_bound", e.lower_bound},
          {"accuracy_debit", e.accuracy_debit},
          {"competitor",
           {{"tag", to_string(c.tag)},
            {"dim", c.dim},
            {"basepoint", to_json(c.basepoint)},
            {"detail", c.detail},
            {"injectivity",
             {{"samples", c.injectivity.samples},
              {"min_separation", c.injectivity.min_separation},
              {"argument_principle", c.injectivity.argument_principle}}}}},
          {"evidence", evidence}};
}

json to_json(const BoundaryReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"z", to_json(row.z)}, {"delta", row.delta}, {"s_lb", row.s_lb}, {"ratio", row.ratio}});
  return {{"a", to_json(r.a)},
          {"alpha", r.alpha},
          {"K", r.K},
          {"rows", rows},
          {"theoretical_cap", optional_number(r.theoretical_cap)},
          {"chart_r", optional_number(r.chart_r)},
          {"theta_prime_abs", optional_number(r.theta_prime_abs)},
          {"chart_failure", r.chart_failure.empty() ? json(nullptr) : json(r.chart_failure)},
          {"running_max", r.running_max},
          {"strictly_decreasing", r.strictly_decreasing},
          {"strictly_increasing", r.strictly_increasing}};
}

json to_json(const CConvexValidation& v) {
  return {{"passed", v.passed},
          {"samples", v.samples},
          {"seed", v.seed},
          {"l1_ball_samples_checked", v.l1_ball_samples_checked},
          {"normalized_samples_checked", v.normalized_samples_checked},
          {"min_gap_to_one", v.min_gap_to_one},
          {"dn", v.dn}};
}

json to_json(const Error& e) {
  json out = {{"status", "failure"}, {"kind", to_string(e.kind())}, {"reason", e.what()}};
  if (!e.witness().empty()) out["witness"] = points(e.witness());
  if (e.value()) out["value"] = *e.value();
  return out;
}

std::string to_csv(const BoundaryReport& r) {
  std::string out = "delta,s_lb,ratio,alpha,cap\n";
  char buf[256];
  std::string cap;
  if (r.theoretical_cap) {
    std::snprintf(buf, sizeof buf, "%.17g", *r.theoretical_cap);
    cap = buf;
  }
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,", row.delta, row.s_lb, row.ratio, r.alpha);
    out += buf;
    out += cap;
    out += '\n';
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace squeeze::io
