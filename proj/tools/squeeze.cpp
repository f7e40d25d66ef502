// squeeze <estimate|theorem1|boundary-report|verify> --spec PATH --out PATH [options]
//
// Exit status: 0 on success, 1 on usage errors and unreadable specs, 2 when a
// validation or certificate check fails. Failures are reported as JSON with a
// "reason" field, and a "witness" when the failing check has one.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "squeeze/conformal.hpp"
#include "squeeze/io.hpp"
#include "squeeze/squeezing.hpp"

using namespace squeeze;
using io::json;

namespace {

constexpr int kValidationSamples = 10000;

struct RunConfig {
  std::string command;
  std::string spec_path;
  std::string out_path;
  std::optional<std::string> point;
  std::optional<std::string> a;
  double alpha = 1.0;
  int K = 4;
  std::uint64_t seed = 1;
  double accuracy = 1e-8;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A failed invariant in `verify`; reported like a certificate failure.
struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Cplxd parse_complex(const std::string& text, const char* option) {
  double re = 0, im = 0;
  char tail = 0;
  const int got = std::sscanf(text.c_str(), "%lf,%lf%c", &re, &im, &tail);
  if (got == 2) return {re, im};
  if (std::sscanf(text.c_str(), "%lf%c", &re, &tail) == 1) return {re, 0.0};
  throw UsageError(std::string(option) + " expects RE,IM, got \"" + text + "\"");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

json header(const RunConfig& cfg, const io::DomainSpec& spec) {
  return {{"command", cfg.command}, {"spec", spec.name}, {"spec_kind", spec.kind}, {"seed", cfg.seed}};
}

RiemannOptions riemann_options(const RunConfig& cfg) {
  RiemannOptions o;
  o.target_accuracy = cfg.accuracy;
  o.seed = cfg.seed;
  return o;
}

json merge(json base, const json& extra) {
  for (const auto& [k, v] : extra.items()) base[k] = v;
  return base;
}

json run_theorem1(const RunConfig& cfg, const CConvexSpec& spec, json* validation_out) {
  const auto validation = validate_cconvex(spec, kValidationSamples, cfg.seed);
  Theorem1Options opt;
  opt.seed = cfg.seed;
  opt.riemann = riemann_options(cfg);
  const auto est = theorem1_bound(spec, validation, opt);
  if (validation_out) *validation_out = io::to_json(validation);
  return io::to_json(est);
}

json estimate(const RunConfig& cfg, const io::DomainSpec& spec) {
  json out = header(cfg, spec);
  out["status"] = "ok";
  if (spec.cconvex) return merge(out, run_theorem1(cfg, *spec.cconvex, nullptr));
  if (!cfg.point) throw UsageError("estimate on a plane domain needs --point");
  PlaneEstimateOptions opt;
  opt.riemann = riemann_options(cfg);
  return merge(out, io::to_json(squeeze_lower_plane(*spec.plane, parse_complex(*cfg.point, "--point"), opt)));
}

json theorem1(const RunConfig& cfg, const io::DomainSpec& spec) {
  if (!spec.cconvex) throw UsageError("theorem1 needs a cconvex spec");
  json validation;
  const json est = run_theorem1(cfg, *spec.cconvex, &validation);
  json out = header(cfg, spec);
  out["status"] = "certified";
  out["bound"] = est["lower_bound"];
  out["floor"] = est["evidence"]["floor"];
  out["matrix_floor"] = est["evidence"]["matrix_floor"];
  out["validation"] = validation;
  out["estimate"] = est;
  return out;
}

std::pair<std::string, std::string> report_paths(const std::string& out) {
  std::filesystem::path p(out);
  if (p.extension() == ".json") return {std::filesystem::path(p).replace_extension(".csv").string(), out};
  return {out, std::filesystem::path(p).replace_extension(".json").string()};
}

void boundary(const RunConfig& cfg, const io::DomainSpec& spec) {
  if (!spec.plane) throw UsageError("boundary-report needs a plane spec");
  if (!cfg.a) throw UsageError("boundary-report needs --a");
  PlaneEstimateOptions opt;
  opt.riemann = riemann_options(cfg);
  const auto report = boundary_report(*spec.plane, parse_complex(*cfg.a, "--a"), cfg.alpha, cfg.K, opt);
  const auto [csv, js] = report_paths(cfg.out_path);
  write_file(csv, io::to_csv(report));
  json out = header(cfg, spec);
  out["status"] = "ok";
  write_file(js, io::dump(merge(out, io::to_json(report))));
}

// Interior point farthest from the boundary on a 33×33 grid over the bounding box.
Cplxd deep_point(const PlaneDomain& d) {
  const auto [lo, hi] = d.bounding_box();
  Cplxd best = 0.5 * (lo + hi);
  double best_dist = -1;
  constexpr int kGrid = 33;
  for (int i = 1; i < kGrid; ++i)
    for (int k = 1; k < kGrid; ++k) {
      const Cplxd z(lo.real() + (hi.real() - lo.real()) * i / kGrid, lo.imag() + (hi.imag() - lo.imag()) * k / kGrid);
      if (!d.contains(z)) continue;
      const double dist = d.boundary_distance(z);
      if (dist > best_dist) {
        best_dist = dist;
        best = z;
      }
    }
  return best;
}

json map_summary(const ConformalMapHandle& h, const RunConfig& cfg) {
  const auto res = measure_residual(h, 512, cfg.seed);
  if (!(res.round_trip <= cfg.accuracy))
    throw CheckFailed("round-trip residual " + std::to_string(res.round_trip) + " exceeds the target accuracy");
  koebe_derivative_lower(h);
  return {{"backend", to_string(h.backend())},
          {"description", h.description()},
          {"nodes", h.nodes()},
          {"accuracy", h.accuracy()},
          {"round_trip", res.round_trip},
          {"boundary_modulus", res.boundary_modulus},
          {"derivative_at_basepoint", h.derivative_at_basepoint().real()}};
}

json verify_plane(const RunConfig& cfg, const PlaneDomain& d) {
  json out;
  const Cplxd p = cfg.point ? parse_complex(*cfg.point, "--point") : deep_point(d);
  if (!d.contains(p)) throw Error(ErrorKind::Domain, "basepoint is not inside the domain", {p});
  out["basepoint"] = io::to_json(p);
  json curves = json::array();
  for (const BoundaryCurve* c : d.curves()) {
    json cj = {{"kind", to_string(c->kind())}, {"smooth", c->is_smooth()}, {"orientation", c->orientation()}};
    if (c->is_smooth()) cj["dini"] = to_string(dini_modulus(*c, log_grid(1.0, 1e-2, 4)).verdict);
    curves.push_back(cj);
  }
  out["curves"] = curves;
  out["simply_connected"] = d.simply_connected();
  if (d.simply_connected()) {
    const RiemannOptions ro = riemann_options(cfg);
    out["riemann"] = map_summary(riemann_map(d, p, ro), cfg);
    if (d.outer().is_smooth()) {
      RiemannOptions bi = ro;
      bi.prefer = RiemannOptions::Prefer::BoundaryIntegral;
      out["boundary_integral"] = map_summary(riemann_map(d, p, bi), cfg);
    }
  } else {
    PlaneEstimateOptions opt;
    opt.riemann = riemann_options(cfg);
    const auto est = squeeze_lower_plane(d, p, opt);
    if (!(est.lower_bound > 0 && est.lower_bound <= 1))
      throw CheckFailed("estimate outside (0, 1]: " + std::to_string(est.lower_bound));
    out["estimate"] = {{"lower_bound", est.lower_bound}, {"competitor", to_string(est.competitor.tag)}};
  }
  return out;
}

json verify(const RunConfig& cfg, const io::DomainSpec& spec) {
  json out = header(cfg, spec);
  if (spec.plane) {
    out = merge(out, verify_plane(cfg, *spec.plane));
  } else {
    const auto& s = *spec.cconvex;
    out["validation"] = io::to_json(validate_cconvex(s, kValidationSamples, cfg.seed));
    json projections = json::array();
    for (const auto& d : s.projections) projections.push_back(map_summary(riemann_map(d, 0.0, riemann_options(cfg)), cfg));
    out["projections"] = projections;
    out["dn_worst_case"] = dn_worst_case(s.n);
    out["dn_for_matrix"] = dn_for_matrix(s.A);
  }
  out["status"] = "ok";
  return out;
}

void print_failure(const json& j) { std::cerr << j.dump() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified lower bounds for the squeezing function"};
  app.require_subcommand(1);
  RunConfig cfg;
  for (const char* name : {"estimate", "theorem1", "boundary-report", "verify"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--spec", cfg.spec_path, "domain spec (JSON)")->required();
    sub->add_option("--out", cfg.out_path, "output path")->required();
    sub->add_option("--point", cfg.point, "evaluation point RE,IM");
    sub->add_option("--a", cfg.a, "boundary point RE,IM");
    sub->add_option("--alpha", cfg.alpha, "exponent in (0, 1]")
        ->check([](const std::string& s) -> std::string {
          double v = 0;
          char tail = 0;
          const bool ok = std::sscanf(s.c_str(), "%lf%c", &v, &tail) == 1 && v > 0 && v <= 1;
          return ok ? "" : "alpha must lie in (0, 1]";
        });
    sub->add_option("--K", cfg.K, "approach levels")->check(CLI::Range(2, 6));
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--accuracy", cfg.accuracy, "target conformal-map accuracy")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    print_failure({{"status", "error"}, {"reason", e.what()}});
    return 1;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    const io::DomainSpec spec = io::load_spec(cfg.spec_path);
    try {
      if (cfg.command == "estimate")
        write_file(cfg.out_path, io::dump(estimate(cfg, spec)));
      else if (cfg.command == "theorem1")
        write_file(cfg.out_path, io::dump(theorem1(cfg, spec)));
      else if (cfg.command == "boundary-report")
        boundary(cfg, spec);
      else
        write_file(cfg.out_path, io::dump(verify(cfg, spec)));
    } catch (const Error& e) {
      json out = merge(header(cfg, spec), io::to_json(e));
      write_file(cfg.out_path, io::dump(out));
      print_failure(out);
      return 2;
    } catch (const CheckFailed& e) {
      json out = header(cfg, spec);
      out["status"] = "failure";
      out["kind"] = "invariant";
      out["reason"] = e.what();
      write_file(cfg.out_path, io::dump(out));
      print_failure(out);
      return 2;
    }
  } catch (const Error& e) {
    // spec construction: parse errors are unreadable input, the rest are validation failures
    json out = io::to_json(e);
    if (e.kind() == ErrorKind::Parse) {
      out["status"] = "error";
      print_failure(out);
      return 1;
    }
    write_file(cfg.out_path, io::dump(out));
    print_failure(out);
    return 2;
  } catch (const UsageError& e) {
    print_failure({{"status", "error"}, {"reason", e.what()}});
    return 1;
  }
  return 0;
}
