// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "seqlab/algorithms.hpp"
#include "seqlab/experiments.hpp"
#include "seqlab/parallel.hpp"

using namespace seqlab;
using namespace seqlab::bodies;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
  const char* name;
  std::chrono::steady_clock::time_point start;
  bool ok = true;
  std::string detail;

  explicit Criterion(const char* n)
      : name(n), start(std::chrono::steady_clock::now()) {}
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  ~Criterion() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %-38s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

std::string fmt(double v) { return report::format_double(v); }

// --------------------------------------------------------------------------
void criterion_1_width_calibration() {
  Criterion c("1 width engine calibration");
  for (const int n : {2, 4, 8}) {
    auto body = ConvexBody::make(BodySpec::full_space(n));
    const double target = oracles::gaussian_norm_mean(n);
    int hits = 0;
    for (int seed = 0; seed < 100; ++seed) {
      const auto w =
          widths::local_width(body, Vec(n, 0.0), 1.0, 0.05, 0.01, 1000 + seed);
      if (std::fabs(w.value - target) <= 2 * 0.05) ++hits;
    }
    c.expect(hits >= 99, "n=" + std::to_string(n) + " hits=" +
                             std::to_string(hits) + "/100");
  }
}

// --------------------------------------------------------------------------
void criterion_2_projection_oracle() {
  Criterion c("2 projection vs grid oracle");
  struct Case {
    BodySpec spec;
    double box;
  };
  Vec basis3 = {1, 0, 0, 0, 1, 0};
  std::vector<Case> cases;
  cases.push_back({BodySpec::l2_ball(3, 1.0), 1.6});
  cases.push_back({BodySpec::l1_ball(3, 1.0), 1.6});
  cases.push_back({BodySpec::lp_ball(2, 1.5, 1.0), 1.6});
  cases.push_back({BodySpec::hyper_rectangle({0.8, 1.1, 0.6}), 1.6});
  cases.push_back({BodySpec::ellipsoid({2.0, 1.0, 0.5}), 2.4});
  cases.push_back({BodySpec::isotonic_tv(3, 1.0), 2.4});
  cases.push_back({BodySpec::isotonic_box(3, 0.0, 1.0), 1.6});
  cases.push_back({BodySpec::multi_isotonic(2, 4, 0.0, 1.0), 1.5});
  cases.push_back({BodySpec::subspace(3, basis3, 2), 1.8});
  cases.push_back({BodySpec::pyramid(Vec{0, 0, 1.5}, BodySpec::l2_ball(2, 1.0)), 2.0});
  cases.push_back({BodySpec::solid_of_revolution(3, {0, 1, 2}, {0, 0.75, 0}), 2.4});
  cases.push_back({BodySpec::singleton(Vec{0.3, -0.4}), 1.2});
  cases.push_back({BodySpec::full_space(2), 1.2});

  const double h = 0.01;
  for (const auto& [spec, halfbox] : cases) {
    auto body = ConvexBody::make(spec);
    const int n = body.dim();
    Vec lo(n, -halfbox), hi(n, halfbox);
    if (spec.kind == Kind::SolidOfRevolution || spec.kind == Kind::IsotonicBox ||
        spec.kind == Kind::MultiIsotonicLattice) {
      for (int d = 0; d < n; ++d) lo[d] = -0.4;
    }
    if (spec.kind == Kind::SolidOfRevolution) hi[0] = 2.4;
    oracles::GridProjector oracle(body, lo, hi, h);
    Rng rng(42 + n + int(spec.kind));
    int failures = 0, done = 0;
    const auto anchors = body.sample_points(100, SampleMode::Interior, 7);
    for (int q = 0; q < 100; ++q) {
      Vec y(n);
      for (int d = 0; d < n; ++d) {
        y[d] = anchors[q][d] + 0.12 * rng.gaussian();
        y[d] = std::clamp(y[d], lo[d] + 0.2, hi[d] - 0.2);
      }
      const Vec proj = body.project(y);
      const double dist = distance(y, proj);
      const double slack = 2 * h * std::sqrt(double(n));
      const double grid_min = oracle.feasible_min_distance(y, dist + slack);
      if (!(dist <= grid_min + slack) || !body.contains(proj, 1e-6)) ++failures;
      ++done;
    }
    c.expect(failures == 0, kind_name(spec.kind) + " failures=" +
                                std::to_string(failures) + "/" +
                                std::to_string(done));
  }
}

// --------------------------------------------------------------------------
void criterion_3_hyperrect_identity() {
  Criterion c("3 hyperrectangle risk identity");
  const int n = 16;
  Rng rng(314);
  Vec a(n);
  for (auto& v : a) v = rng.uniform(0.1, 3.0);
  auto body = ConvexBody::make(BodySpec::hyper_rectangle(a));
  const double sigma = 1.0;
  const auto est = risk::lse_risk(body, Vec(n, 0.0), sigma, 100000, 2718);
  double oracle = 0.0;
  for (const double ai : a) oracle += risk::clamp_risk_1d(ai, sigma, 0.0);
  c.expect(std::fabs(est.mean - oracle) <= 0.01 * oracle + 3 * est.std_error,
           "mc=" + fmt(est.mean) + " oracle=" + fmt(oracle));
  const auto cf = rates::closed_form_rates(
      "hyperrect", nlohmann::json{{"a", a}, {"sigma", sigma}});
  const double closed = cf.values["closed_form"].get<double>();
  c.expect(est.mean <= 3 * closed && closed <= 3 * est.mean,
           "closed=" + fmt(closed) + " mc=" + fmt(est.mean));
}

// --------------------------------------------------------------------------
void criterion_4_isotonic_scaling() {
  Criterion c("4 isotonic risk scaling");
  auto cfg = experiments::default_config("isotonic_tv");
  cfg.seed = 11;
  cfg.consts.seed = 11;
  cfg.budgets.reps = 600;
  cfg.budgets.probe_budget = 8;
  const auto rep = experiments::run_experiment(cfg);
  const double slope = rep.results["slope"].get<double>();
  c.expect(slope >= 0.23 && slope <= 0.43, "slope=" + fmt(slope));
}

// --------------------------------------------------------------------------
void criterion_5_zhang() {
  Criterion c("5 Zhang ellipsoid suboptimality");
  auto cfg = experiments::default_config("ellipsoid_zhang");
  cfg.seed = 5;
  cfg.consts.seed = 5;
  cfg.budgets.reps = 3000;
  cfg.budgets.cloud_budget = 2000;
  cfg.budgets.probe_budget = 4;
  cfg.budgets.bisect_iters = 14;
  const auto rep = experiments::run_experiment(cfg);
  c.expect(rep.certified,
           rep.failures.empty() ? "" : rep.failures.front());
}

// --------------------------------------------------------------------------
void criterion_6_pyramid_solid() {
  Criterion c("6 pyramid / solid-of-revolution gaps");
  for (const char* id : {"pyramid", "solid_of_revolution"}) {
    auto cfg = experiments::default_config(id);
    cfg.seed = 6;
    cfg.consts.seed = 6;
    cfg.budgets.reps = 2000;
    const auto rep = experiments::run_experiment(cfg);
    std::string why;
    for (const auto& f : rep.failures) {
      if (!rep.certified && why.empty()) why = f;
    }
    c.expect(rep.certified, std::string(id) + ": " + why);
    if (rep.results.contains("gap"))
      c.detail += std::string(" ") + id + " gap=" +
                  fmt(rep.results["gap"].get<double>());
  }
}

// --------------------------------------------------------------------------
void criterion_7_property_suites() {
  Criterion c("7 property suites");
  long checks = 0, failures = 0;
  std::string failed_labels;
  auto tally = [&](bool ok, const char* label) {
    ++checks;
    if (!ok) {
      ++failures;
      failed_labels += std::string(" ") + label;
    }
  };

  struct BodyCase {
    BodySpec spec;
    double sigma;
  };
  std::vector<BodyCase> bodies;
  bodies.push_back({BodySpec::l2_ball(8, 1.0), 0.2});
  bodies.push_back({BodySpec::hyper_rectangle(Vec(8, 1.0)), 0.3});
  bodies.push_back({BodySpec::l1_ball(8, 1.0), 0.2});
  bodies.push_back({BodySpec::isotonic_box(16, 0.0, 1.0), 0.2});

  for (const auto& bc : bodies) {
    auto body = ConvexBody::make(bc.spec);
    const double t = 0.04;
    widths::CrnWidths crn(body, t, 0.05, 555, 3000);
    const double d = body.diameter().upper;
    const auto probes = body.sample_points(4, SampleMode::ProbeGrid, 3);

    // Width monotonicity and slope monotonicity on a grid.
    double prev_w = -1.0, prev_slope = 1e300;
    for (const double eps : {0.12 * d, 0.25 * d, 0.5 * d, 1.0 * d}) {
      const double w = crn.eval(probes[0], eps);
      tally(w >= prev_w - 2 * t, "monotone");
      tally(w / eps <= prev_slope + 3 * t / eps, "slope");
      prev_w = w;
      prev_slope = w / eps;
    }
    // Concavity and Lipschitz in the center.
    const double eps = 0.4 * d;
    for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
      const Vec mid = scaled(add(probes[i], probes[i + 1]), 0.5);
      const double wm = crn.eval(mid, eps);
      const double wa = crn.eval(probes[i], eps);
      const double wb = crn.eval(probes[i + 1], eps);
      tally(wm >= 0.5 * wa + 0.5 * wb - 3 * t, "concavity");
      const double dist = distance(probes[i], probes[i + 1]);
      if (dist > 1e-9)
        tally(std::fabs(wa - wb) <= dist * std::min(wa, wb) / eps + 3 * t,
              "lipschitz_center");
      tally(std::fabs(wa - wb) <=
                std::sqrt(double(body.dim())) * dist + 3 * t,
            "lipschitz_sqrt_n");
    }
    // Projection variational inequality.
    Rng rng(8 + body.dim());
    for (int trial = 0; trial < 10; ++trial) {
      Vec y(body.dim());
      for (auto& v : y) v = 2.0 * rng.gaussian();
      const Vec p = body.project(y);
      const Vec resid = sub(y, p);
      for (const auto& x : probes)
        tally(dot(resid, sub(x, p)) <= 1e-6 * (1 + norm(y)) * (1 + norm(x)),
              "variational");
    }
    // eps_mu properties.
    rates::ConstantsConfig consts;
    consts.sigma = bc.sigma;
    consts.seed = 555;
    rates::BudgetConfig budgets;
    budgets.width_max_samples = 3000;
    budgets.probe_budget = 4;
    budgets.cloud_budget = 3000;
    budgets.grid_per_decade = 5;
    budgets.width_t = 0.08;
    auto ctx = rates::RateContext::make(body, consts, budgets);
    const Vec mu = probes[0];
    const double e1 = rates::epsilon_mu(ctx, mu, bc.sigma);
    const double e2 = rates::epsilon_mu(ctx, mu, 2 * bc.sigma);
    // Width noise sigma*t flattens the concave objective over an eps window
    // of order sqrt(sigma*t); the comparison tolerance absorbs it.
    const double tol = 0.15 * std::max(e1, e2) +
                       2.0 * std::sqrt(2.0 * bc.sigma * ctx.width_t()) +
                       2e-3 * d;
    tally(e2 >= e1 - tol, "eps_mu_monotone");
    tally(e2 <= 2 * e1 + tol, "eps_mu_scaling");
    tally(e1 <= d + 1e-9, "eps_mu_diameter");

    // Minimax fixed point: constant invariance and the sigma wedge d floor.
    packing::EntropyBudget eb{4, 3000, 0};
    const auto base =
        packing::minimax_rate(body, bc.sigma, 5.0, eb, 555, 1.0, 1.0, 16);
    for (const auto& [c1, c2] :
         std::vector<std::pair<double, double>>{{0.5, 2.0}, {2.0, 0.5}}) {
      const auto alt =
          packing::minimax_rate(body, bc.sigma, 5.0, eb, 555, c1, c2, 16);
      tally(alt.lower <= 8.0 * std::max(base.lower, 1e-12), "c1c2_upper");
      tally(base.lower <= 8.0 * std::max(alt.lower, 1e-12), "c1c2_lower");
    }
    tally(base.lower >= std::min(bc.sigma, d) / 10.0, "sigma_wedge_floor");

    // Yang-Barron sandwich at a mid scale.
    const double ye = 0.5 * d;
    auto fine = packing::global_entropy(body, ye / 5.0, 4000, 555);
    const auto coarse = packing::global_entropy(body, ye, 4000, 555);
    const auto local = packing::local_entropy(body, ye, 5.0, 4, 4000, 555);
    double fine_log = std::max(fine.log_count_lower, local.log_count_lower);
    fine_log = std::max(fine_log, coarse.log_count_lower);
    const auto [yb_lo, yb_hi] =
        packing::yang_barron_interval(fine_log, coarse.log_count_lower);
    tally(local.log_count_lower <= yb_hi + 1e-9, "yb_upper");
    tally(yb_lo <= local.log_count_lower +
                       std::max(1.0, 0.5 * local.log_count_lower) + 1e-9,
          "yb_lower");
  }
  const double rate = checks ? double(failures) / double(checks) : 0.0;
  c.expect(rate <= 1e-3, "failures=" + std::to_string(failures) + "/" +
                             std::to_string(checks) + failed_labels);
}

// --------------------------------------------------------------------------
void criterion_8_regime_law() {
  Criterion c("8 variational-radius risk law");
  // Configured regime constant: the quadrature value of the proof constant is
  // exposed but puts the regime beyond desk scale, so the configured C_hat
  // drives the regime check (recorded).
  const double c_hat = 8.0;
  struct Case {
    BodySpec spec;
    double sigma;
  };
  std::vector<Case> cases;
  cases.push_back({BodySpec::full_space(1600), 0.1});
  cases.push_back({BodySpec::hyper_rectangle(Vec(1600, 1.0)), 0.1});
  for (const auto& [spec, sigma] : cases) {
    auto body = ConvexBody::make(spec);
    rates::ConstantsConfig consts;
    consts.sigma = sigma;
    consts.seed = 88;
    consts.C_hat = c_hat;
    rates::BudgetConfig budgets;
    budgets.width_max_samples = 600;
    budgets.probe_budget = 2;
    auto ctx = rates::RateContext::make(body, consts, budgets);
    const Vec mu(body.dim(), 0.0);
    const double eps_mu = rates::epsilon_mu(ctx, mu);
    if (!(eps_mu >= 4 * c_hat * sigma)) {
      c.expect(false, "regime not reached: eps_mu=" + fmt(eps_mu));
      continue;
    }
    const auto est = risk::lse_risk(body, mu, sigma, 2000, 88);
    const double ratio = est.mean / (eps_mu * eps_mu);
    c.expect(ratio >= 0.15 && ratio <= 2.6,
             kind_name(spec.kind) + " ratio=" + fmt(ratio));
  }
}

// --------------------------------------------------------------------------
void criterion_9_algorithms() {
  Criterion c("9 packing search consistency");
  auto cfg = experiments::default_config("algorithms_demo");
  cfg.seed = 9;
  cfg.consts.seed = 9;
  const auto rep = experiments::run_experiment(cfg);
  c.expect(rep.certified, rep.failures.empty() ? "" : rep.failures.front());

  // Queue trace FIFO discipline on an instrumented one-dimensional case.
  rates::ConstantsConfig consts;
  consts.sigma = 0.4;
  consts.seed = 9;
  rates::BudgetConfig budgets;
  budgets.max_depth = 3;
  budgets.nodes_per_level = 4;
  budgets.cloud_budget = 500;
  budgets.width_max_samples = 400;
  auto ctx = rates::RateContext::make(
      ConvexBody::make(BodySpec::hyper_rectangle({1.0})), consts, budgets);
  const auto res = algorithms::local_packing_algorithm(ctx);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    c.expect(res.trace[i].level >= res.trace[i - 1].level,
             "trace level order broken");
}

// --------------------------------------------------------------------------
void criterion_10_vg_constructions() {
  Criterion c("10 explicit packing constructions");
  {
    const auto pack = packing::isotonic_vg_packing(64, 0.0, 1.0, 1.0);
    auto body = ConvexBody::make(BodySpec::isotonic_box(64, 0.0, 1.0));
    try {
      pack.validate(body, 1e-9);
    } catch (const std::exception& e) {
      c.expect(false, std::string("staircase validate: ") + e.what());
    }
    c.expect(pack.log_count() >= pack.log_count_claimed,
             "staircase log-count " + fmt(pack.log_count()) + " < claimed " +
                 fmt(pack.log_count_claimed));
  }
  {
    const auto pack = packing::multiiso_vg_packing(2, 256, 0.25);
    auto body = ConvexBody::make(BodySpec::multi_isotonic(2, 256, 0.0, 1.0));
    try {
      pack.validate(body, 1e-9);
    } catch (const std::exception& e) {
      c.expect(false, std::string("lattice validate: ") + e.what());
    }
    c.expect(pack.log_count() >= pack.log_count_claimed,
             "lattice log-count below claim");
  }
}

// --------------------------------------------------------------------------
void criterion_11_neykov() {
  Criterion c("11 bisection-packing estimator");
  Rng rng(111);
  int bad = 0;
  const int k = 18;
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = 0.1 + 3.0 * rng.uniform();
    const double y = 6.0 * rng.gaussian();
    const double target = std::clamp(y, -a, a);
    if (std::fabs(risk::neykov_1d(y, a, 5.0, k) - target) >
        2.0 * a / std::ldexp(1.0, k))
      ++bad;
  }
  c.expect(bad == 0, "violations=" + std::to_string(bad) + "/1000");
}

// --------------------------------------------------------------------------
void criterion_12_determinism() {
  Criterion c("12 byte-identical reports");
  auto cfg = experiments::default_config("subspace");
  cfg.seed = 12;
  cfg.consts.seed = 12;
  cfg.budgets.reps = 300;
  cfg.budgets.cloud_budget = 400;
  cfg.budgets.width_max_samples = 400;
  cfg.budgets.probe_budget = 4;
  cfg.budgets.grid_per_decade = 3;
  cfg.sigmas = {0.5};
  const fs::path base = fs::temp_directory_path() / "seqlab_acceptance_det";
  fs::remove_all(base);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };
  set_max_threads(1);
  const auto rep1 = experiments::run_experiment(cfg);
  experiments::emit_report(rep1, "json", (base / "t1").string());
  experiments::emit_report(rep1, "csv", (base / "t1").string());
  set_max_threads(8);
  const auto rep2 = experiments::run_experiment(cfg);
  experiments::emit_report(rep2, "json", (base / "t8").string());
  experiments::emit_report(rep2, "csv", (base / "t8").string());
  set_max_threads(0);
  c.expect(slurp(base / "t1" / "report.json") == slurp(base / "t8" / "report.json"),
           "report.json differs across thread counts");
  c.expect(slurp(base / "t1" / "summary.csv") == slurp(base / "t8" / "summary.csv"),
           "summary.csv differs across thread counts");
}

}  // namespace

int main() {
  criterion_1_width_calibration();
  criterion_2_projection_oracle();
  criterion_3_hyperrect_identity();
  criterion_4_isotonic_scaling();
  criterion_5_zhang();
  criterion_6_pyramid_solid();
  criterion_7_property_suites();
  criterion_8_regime_law();
  criterion_9_algorithms();
  criterion_10_vg_constructions();
  criterion_11_neykov();
  criterion_12_determinism();
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
