// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "squeeze/conformal.hpp"
#include "squeeze/io.hpp"
#include "squeeze/squeezing.hpp"
#include "support.hpp"

using namespace squeeze;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ζ with 0 < r′ < r < 2, 1 − |ζ| < r′ and |e^{i arg ζ} − 1| < r − r′, so ζ lies in the lens.
struct Triple {
  double r, rp;
  Cplxd zeta;
};

Triple random_triple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = 0.05 + 1.9 * u(rng);
  const double rp = r * (0.05 + 0.9 * u(rng));
  const double max_angle = 2 * std::asin(std::min(1.0, (r - rp) / 2));
  const double angle = (2 * u(rng) - 1) * 0.999 * max_angle;
  const double lo = std::max(0.0, 1 - rp);
  const double mod = lo + (1 - lo) * (0.001 + 0.998 * u(rng));
  return {r, rp, std::polar(mod, angle)};
}

Outcome rho_slope() {
  double worst = 0;
  for (double rp : {0.25, 0.5, 1.0, 1.5}) {
    const double az = 1 - 1e-6;
    const double slope = (1 - rho(az, rp)) / (1 - az);
    worst = std::max(worst, std::abs(slope / rho_limit_slope(rp) - 1));
  }
  return {worst <= 1e-3, "max relative error " + fmt("%.3g", worst)};
}

Outcome chain_inequality() {
  std::mt19937_64 rng(2024);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const Triple t = random_triple(rng);
    try {
      prop2a_competitor_bound(t.r, t.rp, t.zeta, 1024, i);
    } catch (const Error&) {
      ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in 1000 triples"};
}

Outcome cconvex_floor() {
  std::vector<std::pair<std::string, CConvexSpec>> specs;
  auto unit_discs = [](int n) { return std::vector<PlaneDomain>(n, PlaneDomain::disc(0.0, 1.0)); };
  for (auto kind : {CConvexBase::Kind::L1Ball, CConvexBase::Kind::L2Ball})
    specs.emplace_back(kind == CConvexBase::Kind::L1Ball ? "E_2" : "B_2",
                       CConvexSpec::from_base({kind, {}}, 2, UnitaryMatrix<double>::identity(2),
                                              UnitTriangularMatrix<double>::identity(2), unit_discs(2)));
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 2;
    specs.emplace_back("random #" + std::to_string(i),
                       CConvexSpec::from_base({CConvexBase::Kind::L1Ball, {}}, n, test::random_unitary(n, rng),
                                              test::random_admissible(n, rng), unit_discs(n)));
  }
  double worst_margin = 1e300;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& [name, spec] = specs[i];
    try {
      Theorem1Options opt;
      opt.seed = i + 1;
      const auto est = theorem1_bound(spec, validate_cconvex(spec, 10000, i + 1), opt);
      const double floor = cn(dn_worst_case(spec.n), spec.n);
      worst_margin = std::min(worst_margin, est.lower_bound - floor);
      if (est.lower_bound < floor || est.evidence.polydisc_samples_checked != 10000 ||
          est.evidence.domain_samples_checked != 10000)
        return {false, name + ": bound " + fmt("%.17g", est.lower_bound) + " below floor or short certificate"};
    } catch (const Error& e) {
      return {false, name + ": " + e.what()};
    }
  }
  return {true, "22 specs certified, min margin over the floor " + fmt("%.3g", worst_margin)};
}

Outcome simply_connected() {
  std::mt19937_64 rng(4);
  double worst = 1;
  const auto disc = PlaneDomain::disc(0.0, 1.0);
  const PlaneDomain ellipse(BoundaryCurve::ellipse(0.0, 2.0, 1.0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Cplxd p = test::random_in_disc(rng);
    worst = std::min(worst, squeeze_lower_plane(disc, p).lower_bound);
  }
  for (int i = 0; i < 100;) {
    const Cplxd p(4 * u(rng) - 2, 2 * u(rng) - 1);
    if (!ellipse.contains(p)) continue;
    worst = std::min(worst, squeeze_lower_plane(ellipse, p).lower_bound);
    ++i;
  }
  return {worst >= 1 - 1e-6, "min lower bound " + fmt("%.17g", worst)};
}

// k(t) = t/(1 − t)² on ρD
PlaneDomain koebe_image(double rho_) {
  std::vector<Cplxd> coeffs;
  for (int n = 1;; ++n) {
    const double c = n * std::pow(rho_, n);
    if (c < 1e-17) break;
    coeffs.push_back(c);
  }
  return PlaneDomain(BoundaryCurve::trig(1, coeffs));
}

Outcome koebe_suite() {
  const auto disc = PlaneDomain::disc(0.0, 1.0);
  auto disc_ptr = std::make_shared<const PlaneDomain>(disc);
  std::vector<ConformalMapHandle> handles;
  handles.push_back(riemann_map(disc, 0.0));
  handles.push_back(ConformalMapHandle([](Cplxd z) { return 3.0 * z; }, [](Cplxd w) { return w / 3.0; },
                                       [](Cplxd) { return Cplxd(3.0); }, 0.0, 0.0, Backend::ClosedForm, disc_ptr,
                                       "scaled identity"));
  for (Cplxd p : {Cplxd(0.5), Cplxd(0.3, -0.6), Cplxd(-0.9, 0.05)}) handles.push_back(riemann_map(disc, p));
  for (double rr : {0.5, 0.9, 0.999}) {
    auto src = std::make_shared<const PlaneDomain>(PlaneDomain::disc(0.0, rr));
    handles.push_back(ConformalMapHandle(
        [](Cplxd t) { return t / ((1.0 - t) * (1.0 - t)); },
        [](Cplxd w) {
          // inverse Köbe: t = (1 + 2w − √(1 + 4w))/(2w)
          if (std::abs(w) < 1e-300) return Cplxd(0);
          return (1.0 + 2.0 * w - std::sqrt(1.0 + 4.0 * w)) / (2.0 * w);
        },
        [](Cplxd t) { return (1.0 + t) / ((1.0 - t) * (1.0 - t) * (1.0 - t)); }, 0.0, 0.0, Backend::ClosedForm, src,
        "koebe"));
  }
  handles.push_back(riemann_map(koebe_image(0.7), 0.0));
  handles.push_back(riemann_map(PlaneDomain(BoundaryCurve::ellipse(0.0, 2.0, 1.0)), Cplxd(0.5, 0.2)));

  double worst = 1e300;
  for (const auto& h : handles) {
    const Cplxd p = h.basepoint();
    const double room = h.source().boundary_distance(p);
    const double guaranteed = koebe_guaranteed_radius(h, room);
    double nearest = 1e300;
    for (int k = 0; k < 4096; ++k)
      nearest = std::min(nearest, std::abs(h.forward(p + room * std::polar(1.0, 2 * pi * (k + 0.5) / 4096))));
    worst = std::min(worst, nearest - guaranteed + h.accuracy());
  }
  const double rho_ = 1 - 1e-4;
  const double inr = inradius_at_zero({[rho_](double s) {
    const Cplxd t = std::polar(rho_, s);
    return t / ((1.0 - t) * (1.0 - t));
  }});
  const bool pass = worst >= -1e-8 && std::abs(inr - 0.25) <= 1e-6;
  return {pass, std::to_string(handles.size()) + " handles, min margin " + fmt("%.3g", worst) +
                    ", Koebe image inradius " + fmt("%.12f", inr)};
}

Outcome annulus_report(BoundaryReport& alpha1, BoundaryReport& alpha09) {
  const auto annulus = PlaneDomain::annulus(0.0, 0.25, 1.0);
  alpha1 = boundary_report(annulus, 1.0, 1.0, 4);
  alpha09 = boundary_report(annulus, 1.0, 0.9, 4);
  double max_ratio = 0;
  for (const auto& row : alpha1.rows) max_ratio = std::max(max_ratio, row.ratio);
  bool pass = max_ratio <= 5.0 / 3 + 0.05;
  std::string detail = "max ratio " + fmt("%.6f", max_ratio);
  if (alpha1.theoretical_cap) {
    pass = pass && max_ratio <= *alpha1.theoretical_cap * 1.1;
    detail += ", cap " + fmt("%.6f", *alpha1.theoretical_cap);
  } else {
    detail += ", chart failed: " + alpha1.chart_failure;
  }
  return {pass, detail};
}

Outcome holder_trend(const BoundaryReport& r) {
  std::string ratios;
  for (const auto& row : r.rows) ratios += (ratios.empty() ? "" : " ") + fmt("%.6f", row.ratio);
  return {r.strictly_decreasing && r.rows.size() == 4, "ratios " + ratios};
}

Outcome metric() {
  std::mt19937_64 rng(8);
  double worst = 0;
  bool holds = true;
  for (int i = 0; i < 100; ++i) {
    const auto m = metric_check_disc(test::random_in_disc(rng));
    worst = std::max(worst, std::abs(m.lhs - m.rhs) / m.rhs);
    holds = holds && m.holds;
  }
  return {holds && worst <= 1e-12, "max relative gap " + fmt("%.3g", worst)};
}

Outcome solver_certification(const fs::path& spec_dir) {
  const auto disc = PlaneDomain::disc(0.0, 1.0);
  RiemannOptions bi;
  bi.prefer = RiemannOptions::Prefer::BoundaryIntegral;
  bi.max_nodes = 1 << 12;
  double sup = 0;
  int nodes = 0;
  for (Cplxd p : {Cplxd(0.0), Cplxd(0.5), Cplxd(0.3, 0.4), Cplxd(-0.2, -0.7)}) {
    const auto f = riemann_map(disc, p, bi);
    const auto g = riemann_map(disc, p);
    nodes = std::max(nodes, f.nodes());
    for (int k = 0; k < 4096; ++k) {
      const Cplxd z = std::polar(1.0, 2 * pi * (k + 0.37) / 4096);
      sup = std::max(sup, std::abs(f.forward(z) - g.forward(z)));
    }
  }
  double round_trip = 0;
  int smooth_specs = 0;
  for (const auto& entry : fs::directory_iterator(spec_dir)) {
    const auto spec = io::load_spec(entry.path().string());
    if (!spec.plane || !spec.plane->simply_connected() || !spec.plane->outer().is_smooth()) continue;
    ++smooth_specs;
    const auto [lo, hi] = spec.plane->bounding_box();
    const Cplxd p = 0.5 * (lo + hi) + 0.1 * (hi - lo) * Cplxd(0.3, 0.2);
    for (auto prefer : {RiemannOptions::Prefer::Auto, RiemannOptions::Prefer::BoundaryIntegral}) {
      RiemannOptions o;
      o.prefer = prefer;
      round_trip = std::max(round_trip, measure_residual(riemann_map(*spec.plane, p, o), 512, 3).round_trip);
    }
  }
  const bool pass = sup <= 1e-7 && nodes <= (1 << 12) && round_trip <= 1e-8 && smooth_specs >= 2;
  return {pass, "disc sup error " + fmt("%.3g", sup) + " at " + std::to_string(nodes) + " nodes, round trip " +
                    fmt("%.3g", round_trip) + " on " + std::to_string(smooth_specs) + " smooth specs"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const fs::path& spec_dir) {
  const fs::path work = fs::temp_directory_path() / ("squeeze_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);
  struct Cmd {
    std::string args;
    std::vector<std::string> outputs;
  };
  std::vector<Cmd> cmds;
  auto spec = [&](const char* name) { return (spec_dir / name).string(); };
  cmds.push_back({"estimate --spec " + spec("unit_disc.json") + " --point 0.3,0", {"out.json"}});
  cmds.push_back({"estimate --spec " + spec("ellipse.json") + " --point 1.2,0.3", {"out.json"}});
  cmds.push_back({"estimate --spec " + spec("annulus.json") + " --point 0.5,0.2", {"out.json"}});
  cmds.push_back({"estimate --spec " + spec("punctured_disc.json") + " --point 0.4,-0.1", {"out.json"}});
  for (const char* s : {"E2.json", "B2.json", "random_l1_n3.json"})
    cmds.push_back({"theorem1 --spec " + spec(s) + " --seed 7", {"out.json"}});
  cmds.push_back({"boundary-report --spec " + spec("annulus.json") + " --a 1,0 --alpha 1 --K 4", {"out.csv", "out.json"}});
  cmds.push_back({"boundary-report --spec " + spec("unit_disc.json") + " --a 0,1 --alpha 0.9 --K 3", {"out.csv", "out.json"}});
  for (const auto& entry : fs::directory_iterator(spec_dir))
    cmds.push_back({"verify --spec " + entry.path().string(), {"out.json"}});

  int runs = 0;
  for (const auto& c : cmds) {
    std::string first[2];
    for (int rep = 0; rep < 2; ++rep) {
      for (const auto& o : c.outputs) fs::remove(work / o);
      const std::string line = cli + " " + c.args + " --out " + (work / c.outputs.front()).string() + " > /dev/null 2>&1";
      if (std::system(line.c_str()) != 0) return {false, "command failed: " + c.args};
      std::string all;
      for (const auto& o : c.outputs) all += slurp(work / o) + '\0';
      if (all.size() < 2) return {false, "empty output: " + c.args};
      first[rep] = all;
    }
    if (first[0] != first[1]) return {false, "outputs differ: " + c.args};
    ++runs;
  }
  fs::remove_all(work);
  return {true, std::to_string(runs) + " commands byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : SQUEEZE_CLI;
  const fs::path spec_dir = argc > 2 ? argv[2] : SQUEEZE_SPECS;

  BoundaryReport r1, r09;
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no budget
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "rho slope", 1, rho_slope},
      {2, "lens chain inequality", 10, chain_inequality},
      {3, "C-convex floor", 120, cconvex_floor},
      {4, "simply connected exactness", 60, simply_connected},
      {5, "Koebe suite", 10, koebe_suite},
      {6, "annulus boundary report", 120, [&] { return annulus_report(r1, r09); }},
      {7, "Holder exponent trend", 0, [&] { return holder_trend(r09); }},
      {8, "disc metric equality", 1, metric},
      {9, "conformal solver certification", 60, [&] { return solver_certification(spec_dir); }},
      {10, "CLI determinism", 0, [&] { return determinism(cli, spec_dir); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%g", c.budget_s) + " s budget";
    }
    failures += !o.pass;
    std::printf("criterion %2d %s  %s (%.2f s): %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
