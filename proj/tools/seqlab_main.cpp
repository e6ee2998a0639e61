// seqlab: numerical laboratory for least-squares estimation over convex
// constraints in the Gaussian sequence model.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "seqlab/algorithms.hpp"
#include "seqlab/experiments.hpp"
#include "seqlab/parallel.hpp"
#include "seqlab/report.hpp"

namespace {

using namespace seqlab;
using bodies::BodySpec;
using bodies::ConvexBody;
using nlohmann::json;
using nlohmann::ordered_json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfigError("cannot read file: " + path);
  json j;
  in >> j;
  return j;
}

json parse_json_arg(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InvalidConfigError("invalid JSON: " + text);
  return j;
}

ConvexBody body_from_flags(const std::string& spec_file,
                           const std::string& spec_inline) {
  if (!spec_file.empty()) return ConvexBody::make(BodySpec::from_json(load_json(spec_file)));
  if (!spec_inline.empty())
    return ConvexBody::make(BodySpec::from_json(parse_json_arg(spec_inline)));
  throw InvalidConfigError("provide --spec <file> or --spec-json <json>");
}

Vec parse_point(const std::string& csv) {
  Vec out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

int run_body(const std::string& spec_file, const std::string& spec_inline,
             const std::string& op, const std::string& point_csv, double tol,
             double radius, const std::string& center_csv, int count,
             const std::string& mode, std::uint64_t seed) {
  auto body = body_from_flags(spec_file, spec_inline);
  ordered_json out;
  out["body_id"] = body.id();
  if (op == "project") {
    out["point"] = body.project(parse_point(point_csv));
  } else if (op == "member") {
    out["member"] = body.contains(parse_point(point_csv), tol);
  } else if (op == "separate") {
    const auto sep = body.separation_oracle(parse_point(point_csv));
    out["inside"] = sep.inside;
    if (!sep.inside) {
      out["normal"] = sep.normal;
      out["value"] = sep.value;
    }
  } else if (op == "project-intersection") {
    out["point"] = body.project_intersection(parse_point(center_csv), radius,
                                             parse_point(point_csv));
  } else if (op == "sample") {
    bodies::SampleMode m = bodies::SampleMode::Interior;
    if (mode == "boundary") m = bodies::SampleMode::Boundary;
    if (mode == "probe") m = bodies::SampleMode::ProbeGrid;
    out["points"] = body.sample_points(count, m, seed);
  } else if (op == "diameter") {
    const auto d = body.diameter();
    out["lower"] = d.lower;
    out["upper"] = d.upper;
    out["unbounded"] = d.unbounded;
  } else {
    throw InvalidConfigError("unknown body op: " + op);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_width(const std::string& spec_file, const std::string& spec_inline,
              const std::string& center_csv, double eps, double grid_lo,
              double grid_hi, int grid_count, double t, double delta,
              std::uint64_t seed) {
  auto body = body_from_flags(spec_file, spec_inline);
  Vec center = center_csv.empty() ? zeros(body.dim()) : parse_point(center_csv);
  std::vector<std::pair<std::string, widths::WidthEstimate>> rows;
  if (grid_count > 0) {
    std::vector<double> grid(grid_count);
    for (int i = 0; i < grid_count; ++i)
      grid[i] = grid_lo * std::pow(grid_hi / grid_lo, double(i) / (grid_count - 1));
    const auto profile = widths::width_profile(body, center, grid, t, delta, seed);
    for (const auto& w : profile) rows.emplace_back("c0", w);
  } else {
    rows.emplace_back("c0", widths::local_width(body, center, eps, t, delta, seed));
  }
  std::cout << report::width_csv(body.id(), rows);
  return 0;
}

int run_pack(const std::string& spec_file, const std::string& spec_inline,
             const std::string& op, double eps, double c_star, int probes,
             long cloud, std::uint64_t seed, const std::string& out_dir,
             int vg_n, double vg_a, double vg_b, int vg_p) {
  ordered_json out;
  if (op == "vg-isotonic") {
    const auto pack = packing::isotonic_vg_packing(vg_n, vg_a, vg_b, eps);
    auto [csv, manifest] = report::packing_export(pack, seed);
    out["manifest"] = manifest;
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      report::write_file(out_dir + "/packing.csv", csv);
    }
  } else if (op == "vg-multiiso") {
    const auto pack = packing::multiiso_vg_packing(vg_p, vg_n, eps);
    auto [csv, manifest] = report::packing_export(pack, seed);
    out["manifest"] = manifest;
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      report::write_file(out_dir + "/packing.csv", csv);
    }
  } else {
    auto body = body_from_flags(spec_file, spec_inline);
    if (op == "local") {
      out["entropy"] =
          report::to_json(packing::local_entropy(body, eps, c_star, probes, cloud, seed));
    } else if (op == "global") {
      out["entropy"] =
          report::to_json(packing::global_entropy(body, eps, cloud, seed));
    } else if (op == "minimax") {
      packing::EntropyBudget budget{probes, cloud, 0};
      out["bracket"] = report::to_json(
          packing::minimax_rate(body, /*sigma=*/1.0, c_star, budget, seed));
    } else {
      throw InvalidConfigError("unknown pack op: " + op);
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_rate(const std::string& spec_file, const std::string& spec_inline,
             const std::string& method, double sigma,
             const std::string& params_text, const std::string& constants_text,
             std::uint64_t seed) {
  ordered_json out;
  if (method.rfind("closed:", 0) == 0) {
    const auto rep = rates::closed_form_rates(method.substr(7),
                                              parse_json_arg(params_text));
    out["example_id"] = rep.example_id;
    out["values"] = rep.values;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  auto body = body_from_flags(spec_file, spec_inline);
  rates::ConstantsConfig consts;
  if (!constants_text.empty())
    consts = rates::ConstantsConfig::from_json(parse_json_arg(constants_text));
  consts.sigma = sigma;
  consts.seed = seed;
  rates::BudgetConfig budgets;
  budgets.grid_per_decade = 6;
  budgets.cloud_budget = 4000;
  auto ctx = rates::RateContext::make(body, consts, budgets);
  if (method == "eps_k_bar") {
    out["bracket"] = report::to_json(rates::epsilon_K_bar(ctx));
  } else if (method == "main") {
    out["bracket"] = report::to_json(rates::main_theorem_bound(ctx));
  } else if (method == "width_global") {
    out["bracket"] = report::to_json(rates::width_global_bound(ctx));
  } else if (method == "minimax") {
    packing::EntropyBudget eb{budgets.probe_budget, budgets.cloud_budget, 0};
    out["bracket"] = report::to_json(
        packing::minimax_rate(body, sigma, consts.c_star, eb, seed));
  } else if (method == "important") {
    packing::EntropyBudget eb{budgets.probe_budget, budgets.cloud_budget, 0};
    const auto minimax =
        packing::minimax_rate(body, sigma, consts.c_star, eb, seed);
    const auto res = rates::important_thm_bound(ctx, minimax);
    out["bracket"] = report::to_json(res.bracket);
    out["underline_eps"] = res.underline_eps;
    out["geometric_mean_value"] = res.geometric_mean_value;
  } else if (method == "charA" || method == "charB" || method == "charC") {
    const auto v = method == "charA"   ? rates::CharVariant::A
                   : method == "charB" ? rates::CharVariant::B
                                       : rates::CharVariant::C;
    out["bracket"] = report::to_json(rates::characterization_bracket(ctx, v));
  } else if (method == "sufficient") {
    out["condition"] = report::to_json(rates::sufficient_condition_check(ctx));
  } else if (method == "lipschitz") {
    out["condition"] = report::to_json(rates::lipschitz_check(ctx, 0.0));
  } else {
    throw InvalidConfigError("unknown rate method: " + method);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_risk(const std::string& spec_file, const std::string& spec_inline,
             const std::string& mu_csv, double sigma, long reps,
             std::uint64_t seed, const std::string& estimator, bool worst,
             int probes) {
  auto body = body_from_flags(spec_file, spec_inline);
  std::vector<std::pair<std::string, risk::RiskEstimate>> rows;
  if (worst) {
    const auto probe_set =
        body.sample_points(probes, bodies::SampleMode::ProbeGrid, seed);
    auto [argmax, est] = risk::worst_case_risk(body, sigma, probe_set, reps, seed);
    rows.emplace_back("worst", est);
  } else {
    Vec mu = mu_csv.empty() ? zeros(body.dim()) : parse_point(mu_csv);
    risk::Estimator e = risk::Estimator::LSE;
    if (estimator == "identity") e = risk::Estimator::Identity;
    else if (estimator == "subspace_proj") e = risk::Estimator::SubspaceProj;
    else if (estimator == "axis_proj") e = risk::Estimator::AxisProj;
    else if (estimator == "clamp_1d") e = risk::Estimator::Clamp1D;
    else if (estimator == "neykov_1d") e = risk::Estimator::Neykov1D;
    rows.emplace_back("mu0", e == risk::Estimator::LSE
                                 ? risk::lse_risk(body, mu, sigma, reps, seed)
                                 : risk::alt_estimator_risk(body, e, mu, sigma,
                                                            reps, seed));
  }
  std::cout << report::risk_csv(body.id(), rows, seed);
  return 0;
}

int run_alg(int which, const std::string& spec_file,
            const std::string& spec_inline, double sigma, std::uint64_t seed,
            int max_depth, int max_doublings) {
  auto body = body_from_flags(spec_file, spec_inline);
  rates::ConstantsConfig consts;
  consts.sigma = sigma;
  consts.seed = seed;
  rates::BudgetConfig budgets;
  budgets.cloud_budget = 2000;
  budgets.nodes_per_level = 12;
  budgets.max_depth = max_depth;
  budgets.max_doublings = max_doublings;
  auto ctx = rates::RateContext::make(body, consts, budgets);
  ordered_json out;
  if (which == 2) {
    const auto res = algorithms::local_packing_algorithm(ctx);
    out["terminated"] = res.terminated;
    out["level"] = res.level;
    out["beta"] = res.beta;
    out["bracket"] = report::to_json(res.bracket);
    for (const auto& t : res.trace) {
      out["trace"].push_back(ordered_json{{"level", t.level},
                                          {"node", t.node},
                                          {"delta", t.delta},
                                          {"psi", t.psi},
                                          {"threshold", t.threshold},
                                          {"children", t.children}});
    }
  } else {
    const auto res = algorithms::global_packing_algorithm(ctx);
    out["eps"] = res.eps;
    out["terminated_on_init"] = res.terminated_on_init;
    out["iterations"] = res.iterations;
    out["delta_history"] = res.delta_history;
    out["degraded"] = res.degraded;
    out["bracket"] = report::to_json(res.bracket);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seqlab: LSE optimality laboratory for convex Gaussian sequence models"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (results unchanged)");

  std::string spec_file, spec_inline, op, point_csv, center_csv, mode, method,
      estimator, params_text, constants_text, out_dir, config_file, exp_id,
      format;
  double tol = 1e-9, radius = 1.0, eps = 1.0, grid_lo = 0, grid_hi = 0, t = 0.05,
         delta = 0.05, sigma = 1.0, c_star = 5.0, vg_a = 0.0, vg_b = 1.0;
  int count = 8, grid_count = 0, probes = 8, vg_n = 64, vg_p = 2, max_depth = 8,
      max_doublings = 20;
  long reps = 2000, cloud = 4000;
  std::uint64_t seed = 1;
  bool worst = false;
  std::vector<std::string> overrides;

  auto add_spec = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_file, "BodySpec JSON file");
    cmd->add_option("--spec-json", spec_inline, "inline BodySpec JSON");
    cmd->add_option("--seed", seed, "RNG seed");
  };

  auto* body_cmd = app.add_subcommand("body", "membership/projection/sampling ops");
  add_spec(body_cmd);
  body_cmd->add_option("--op", op, "project|member|separate|project-intersection|sample|diameter")
      ->required();
  body_cmd->add_option("--point", point_csv, "comma-separated point");
  body_cmd->add_option("--center", center_csv, "ball center for intersections");
  body_cmd->add_option("--radius", radius, "ball radius");
  body_cmd->add_option("--tol", tol, "membership tolerance");
  body_cmd->add_option("--count", count, "sample count");
  body_cmd->add_option("--mode", mode, "interior|boundary|probe");

  auto* width_cmd = app.add_subcommand("width", "local Gaussian width estimates");
  add_spec(width_cmd);
  width_cmd->add_option("--center", center_csv, "center point (default 0)");
  width_cmd->add_option("--eps", eps, "ball radius");
  width_cmd->add_option("--grid-lo", grid_lo, "profile grid start");
  width_cmd->add_option("--grid-hi", grid_hi, "profile grid end");
  width_cmd->add_option("--grid-count", grid_count, "profile grid size");
  width_cmd->add_option("--t", t, "precision target");
  width_cmd->add_option("--delta", delta, "confidence parameter");

  auto* pack_cmd = app.add_subcommand("pack", "packings and entropy estimates");
  add_spec(pack_cmd);
  pack_cmd->add_option("--op", op, "local|global|minimax|vg-isotonic|vg-multiiso")
      ->required();
  pack_cmd->add_option("--eps", eps, "packing scale");
  pack_cmd->add_option("--c-star", c_star, "local entropy ratio");
  pack_cmd->add_option("--probes", probes, "probe centers");
  pack_cmd->add_option("--cloud", cloud, "candidate cloud budget");
  pack_cmd->add_option("--out", out_dir, "directory for CSV exports");
  pack_cmd->add_option("--n", vg_n, "construction dimension");
  pack_cmd->add_option("--a", vg_a, "range low");
  pack_cmd->add_option("--b", vg_b, "range high");
  pack_cmd->add_option("--p", vg_p, "lattice order");

  auto* rate_cmd = app.add_subcommand("rate", "rate brackets and conditions");
  add_spec(rate_cmd);
  rate_cmd->add_option("--method", method,
                       "minimax|eps_k_bar|main|width_global|important|charA|charB|charC|sufficient|lipschitz|closed:<id>")
      ->required();
  rate_cmd->add_option("--sigma", sigma, "noise level");
  rate_cmd->add_option("--params", params_text, "JSON params for closed forms");
  rate_cmd->add_option("--constants", constants_text, "ConstantsConfig JSON");

  auto* risk_cmd = app.add_subcommand("risk", "Monte-Carlo estimator risks");
  add_spec(risk_cmd);
  risk_cmd->add_option("--mu", point_csv, "center (default 0)");
  risk_cmd->add_option("--sigma", sigma, "noise level");
  risk_cmd->add_option("--reps", reps, "replications");
  risk_cmd->add_option("--estimator", estimator,
                       "lse|identity|subspace_proj|axis_proj|clamp_1d|neykov_1d");
  risk_cmd->add_flag("--worst", worst, "probe-max risk");
  risk_cmd->add_option("--probes", probes, "probe count for --worst");

  auto* alg2_cmd = app.add_subcommand("alg2", "local packing search");
  add_spec(alg2_cmd);
  alg2_cmd->add_option("--sigma", sigma, "noise level");
  alg2_cmd->add_option("--max-depth", max_depth, "tree depth budget");

  auto* alg3_cmd = app.add_subcommand("alg3", "global packing search");
  add_spec(alg3_cmd);
  alg3_cmd->add_option("--sigma", sigma, "noise level");
  alg3_cmd->add_option("--max-doublings", max_doublings, "doubling budget");

  auto* exp_cmd = app.add_subcommand("experiment", "registry experiments");
  auto* exp_run = exp_cmd->add_subcommand("run", "run one experiment");
  exp_run->add_option("id", exp_id, "experiment id")->required();
  exp_run->add_option("--config", config_file, "config JSON file");
  exp_run->add_option("--out", out_dir, "output directory")->required();
  exp_run->add_option("--set", overrides, "dot-path overrides key=value");
  auto* exp_list = exp_cmd->add_subcommand("list", "list experiment ids");

  auto* list_cmd = app.add_subcommand("list", "list experiment ids");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) seqlab::set_max_threads(threads);

  try {
    if (*list_cmd || (exp_cmd->parsed() && *exp_list)) {
      for (const auto& id : seqlab::experiments::list_experiments())
        std::cout << id << "\n";
      return 0;
    }
    if (*body_cmd)
      return run_body(spec_file, spec_inline, op, point_csv, tol, radius,
                      center_csv, count, mode, seed);
    if (*width_cmd)
      return run_width(spec_file, spec_inline, center_csv, eps, grid_lo, grid_hi,
                       grid_count, t, delta, seed);
    if (*pack_cmd)
      return run_pack(spec_file, spec_inline, op, eps, c_star, probes, cloud,
                      seed, out_dir, vg_n, vg_a, vg_b, vg_p);
    if (*rate_cmd)
      return run_rate(spec_file, spec_inline, method, sigma, params_text,
                      constants_text, seed);
    if (*risk_cmd)
      return run_risk(spec_file, spec_inline, point_csv, sigma, reps, seed,
                      estimator, worst, probes);
    if (*alg2_cmd)
      return run_alg(2, spec_file, spec_inline, sigma, seed, max_depth,
                     max_doublings);
    if (*alg3_cmd)
      return run_alg(3, spec_file, spec_inline, sigma, seed, max_depth,
                     max_doublings);
    if (exp_cmd->parsed() && *exp_run) {
      nlohmann::ordered_json doc;
      if (!config_file.empty()) {
        doc = load_json(config_file);
      } else {
        doc = seqlab::experiments::default_config(exp_id).to_json();
      }
      doc["experiment_id"] = exp_id;
      for (const auto& assignment : overrides)
        seqlab::experiments::apply_override(doc, assignment);
      const auto cfg = seqlab::experiments::config_from_json(doc);
      const auto rep = seqlab::experiments::run_experiment(cfg);
      const auto start = std::chrono::steady_clock::now();
      seqlab::experiments::emit_report(rep, "json", out_dir);
      seqlab::experiments::emit_report(rep, "csv", out_dir);
      seqlab::experiments::emit_report(rep, "md", out_dir);
      const auto elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      // Wall time lives outside the deterministic CSV/JSON artifacts.
      seqlab::report::write_file(out_dir + "/timing.txt",
                                 "emit_seconds " +
                                     seqlab::report::format_double(elapsed) + "\n");
      if (!rep.certified) {
        for (const auto& f : rep.failures) std::cerr << "FAIL: " << f << "\n";
        return 2;
      }
      return 0;
    }
  } catch (const seqlab::BudgetExhaustedError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const seqlab::InvalidConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 4;
  } catch (const seqlab::InvalidSpecError& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
