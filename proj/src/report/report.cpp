#include "seqlab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace seqlab {

std::string rate_method_name(RateMethod m) {
  switch (m) {
    case RateMethod::MinimaxStar: return "minimax_star";
    case RateMethod::EpsilonMu: return "epsilon_mu";
    case RateMethod::MainTheorem: return "main_theorem";
    case RateMethod::RestrictedMainTheorem: return "restricted_main_theorem";
    case RateMethod::WidthGlobal: return "width_global";
    case RateMethod::ImportantThm: return "entropy_chaining";
    case RateMethod::GeometricMean: return "geometric_mean";
    case RateMethod::CharA: return "char_width_gap";
    case RateMethod::CharB: return "char_inf_width";
    case RateMethod::CharC: return "char_pair_width";
    case RateMethod::LipschitzThm: return "lipschitz";
    case RateMethod::LocalPackAlg: return "local_packing_search";
    case RateMethod::GlobalPackAlg: return "global_packing_search";
    case RateMethod::ClosedForm: return "closed_form";
  }
  return "closed_form";
}

}  // namespace seqlab

namespace seqlab::report {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void Csv::add(const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += row[i];
  }
  buffer_ += '\n';
}

nlohmann::ordered_json to_json(const RateBracket& b) {
  nlohmann::ordered_json j;
  j["method"] = rate_method_name(b.method);
  j["lower"] = b.lower;
  j["upper"] = std::isinf(b.upper) ? -1.0 : b.upper;
  j["lower_sq"] = b.lower * b.lower;
  j["upper_sq"] = std::isinf(b.upper) ? -1.0 : b.upper * b.upper;
  j["sigma"] = b.sigma;
  j["inconclusive"] = b.inconclusive;
  if (!b.closed_form_name.empty()) j["closed_form_name"] = b.closed_form_name;
  j["notes"] = b.notes;
  return j;
}

nlohmann::ordered_json to_json(const rates::ConditionReport& r) {
  nlohmann::ordered_json j;
  j["condition_id"] = r.condition_id;
  j["verdict"] = rates::verdict_name(r.verdict);
  j["eps_grid"] = r.eps_grid;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["satisfied"] = r.satisfied;
  j["notes"] = r.notes;
  return j;
}

nlohmann::ordered_json to_json(const risk::RiskEstimate& r) {
  nlohmann::ordered_json j;
  j["estimator"] = risk::estimator_name(r.estimator);
  j["mean"] = r.mean;
  j["std_error"] = r.std_error;
  j["replications"] = r.replications;
  j["sigma"] = r.sigma;
  j["antithetic"] = r.antithetic;
  return j;
}

nlohmann::ordered_json to_json(const packing::EntropyEstimate& e) {
  nlohmann::ordered_json j;
  j["eps"] = e.eps;
  j["log_count_lower"] = e.log_count_lower;
  if (e.log_count_upper)
    j["log_count_upper"] = *e.log_count_upper;
  j["c_star"] = e.c_star;
  j["probe_centers_used"] = e.probe_centers_used;
  j["count_lower"] = e.count_lower;
  j["capped"] = e.capped;
  return j;
}

std::string width_csv(
    const std::string& body_id,
    const std::vector<std::pair<std::string, widths::WidthEstimate>>& rows) {
  Csv csv({"body_id", "center_id", "eps", "value", "t", "delta", "N", "seed"});
  for (const auto& [center_id, w] : rows) {
    csv.add({body_id, center_id, format_double(w.eps), format_double(w.value),
             format_double(w.t), format_double(w.delta),
             std::to_string(w.sample_count), std::to_string(w.seed)});
  }
  return csv.str();
}

std::string risk_csv(
    const std::string& body_id,
    const std::vector<std::pair<std::string, risk::RiskEstimate>>& rows,
    std::uint64_t seed) {
  Csv csv({"body_id", "mu_id", "sigma", "estimator", "mean", "stderr", "reps",
           "seed"});
  for (const auto& [mu_id, r] : rows) {
    csv.add({body_id, mu_id, format_double(r.sigma),
             risk::estimator_name(r.estimator), format_double(r.mean),
             format_double(r.std_error), std::to_string(r.replications),
             std::to_string(seed)});
  }
  return csv.str();
}

std::pair<std::string, nlohmann::ordered_json> packing_export(
    const packing::PackingSet& pack, std::uint64_t seed) {
  std::string csv;
  for (const auto& p : pack.points) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) csv += ',';
      csv += format_double(p[i]);
    }
    csv += '\n';
  }
  nlohmann::ordered_json manifest;
  manifest["count"] = pack.points.size();
  manifest["spacing"] = pack.spacing;
  manifest["whole_body"] = pack.whole_body;
  if (!pack.whole_body) {
    manifest["domain_center"] = pack.domain_center;
    manifest["domain_radius"] = pack.domain_radius;
  }
  manifest["maximal_wrt"] = pack.maximal_wrt;
  manifest["log_count_claimed"] = pack.log_count_claimed;
  manifest["seed"] = seed;
  return {csv, manifest};
}

std::string entropy_curve_csv(
    const std::vector<packing::EntropyEstimate>& curve) {
  Csv csv({"eps", "lower", "upper"});
  for (const auto& e : curve) {
    csv.add({format_double(e.eps), format_double(e.log_count_lower),
             e.log_count_upper ? format_double(*e.log_count_upper) : ""});
  }
  return csv.str();
}

std::string fnv_hash_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[17];
  const auto res = std::to_chars(buf, buf + sizeof(buf), h, 16);
  return std::string(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidConfigError("cannot open output file: " + path);
  out << content;
}

}  // namespace seqlab::report
