#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "seqlab/experiments.hpp"
#include "seqlab/parallel.hpp"

using namespace seqlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

experiments::ExperimentConfig tiny_config() {
  auto cfg = experiments::default_config("subspace");
  cfg.seed = 99;
  cfg.consts.seed = 99;
  cfg.budgets.reps = 300;
  cfg.budgets.cloud_budget = 400;
  cfg.budgets.probe_budget = 4;
  cfg.budgets.width_max_samples = 400;
  cfg.budgets.grid_per_decade = 3;
  cfg.sigmas = {0.5};
  return cfg;
}

}  // namespace

TEST_CASE("double formatting is shortest round-trip") {
  CHECK(report::format_double(0.5) == "0.5");
  CHECK(report::format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(report::format_double(M_PI)) == M_PI);
}

TEST_CASE("registry is stable") {
  const auto ids = experiments::list_experiments();
  CHECK(ids.size() == 16);
  CHECK(ids == experiments::list_experiments());
  CHECK(std::find(ids.begin(), ids.end(), "algorithms_demo") != ids.end());
  CHECK_THROWS_AS(experiments::default_config("unknown_everything"),
                  InvalidConfigError);
}

TEST_CASE("config json round trip and overrides") {
  auto cfg = tiny_config();
  auto doc = cfg.to_json();
  experiments::apply_override(doc, "budgets.reps=512");
  experiments::apply_override(doc, "verdict_slack=25");
  const auto parsed = experiments::config_from_json(doc);
  CHECK(parsed.budgets.reps == 512);
  CHECK(parsed.verdict_slack == 25.0);
  CHECK(parsed.seed == 99);

  nlohmann::json incomplete = {{"experiment_id", "l2ball"}};
  CHECK_THROWS_AS(experiments::config_from_json(incomplete), InvalidConfigError);
}

TEST_CASE("reports are byte-identical across reruns and thread counts") {
  const auto cfg = tiny_config();
  const fs::path base = fs::temp_directory_path() / "seqlab_report_test";
  fs::remove_all(base);

  set_max_threads(1);
  auto rep1 = experiments::run_experiment(cfg);
  experiments::emit_report(rep1, "json", (base / "a").string());
  experiments::emit_report(rep1, "csv", (base / "a").string());
  experiments::emit_report(rep1, "md", (base / "a").string());

  set_max_threads(8);
  auto rep2 = experiments::run_experiment(cfg);
  experiments::emit_report(rep2, "json", (base / "b").string());
  experiments::emit_report(rep2, "csv", (base / "b").string());
  experiments::emit_report(rep2, "md", (base / "b").string());
  set_max_threads(0);

  CHECK(slurp(base / "a" / "report.json") == slurp(base / "b" / "report.json"));
  CHECK(slurp(base / "a" / "summary.csv") == slurp(base / "b" / "summary.csv"));
  CHECK(slurp(base / "a" / "report.md") == slurp(base / "b" / "report.md"));
  CHECK(rep1.config_hash == rep2.config_hash);
}

TEST_CASE("markdown table rows follow the sigma list") {
  auto cfg = tiny_config();
  const auto rep = experiments::run_experiment(cfg);
  REQUIRE(rep.results.contains("rows"));
  CHECK(rep.results["rows"].size() == cfg.sigmas.size());
}

TEST_CASE("csv writers emit the documented schemas") {
  widths::WidthEstimate w;
  w.eps = 0.5;
  w.value = 1.25;
  w.t = 0.05;
  w.delta = 0.01;
  w.sample_count = 42;
  w.seed = 7;
  const auto csv = report::width_csv("bodyX", {{"c0", w}});
  CHECK(csv.rfind("body_id,center_id,eps,value,t,delta,N,seed\n", 0) == 0);
  CHECK(csv.find("bodyX,c0,0.5,1.25,0.05,0.01,42,7") != std::string::npos);

  packing::PackingSet pack;
  pack.points = {{0.0, 1.0}, {1.0, 0.0}};
  pack.spacing = 0.7;
  const auto [pcsv, manifest] = report::packing_export(pack, 3);
  CHECK(pcsv == "0,1\n1,0\n");
  CHECK(manifest["count"] == 2);
  CHECK(manifest["seed"] == 3);
}
