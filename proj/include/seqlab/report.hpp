#pragma once

// Deterministic serialization: shortest round-trip doubles, fixed key order,
// no wall-clock content. Identical config+seed must reproduce identical bytes.

#include <string>
#include <vector>

#include "seqlab/bracket.hpp"
#include "seqlab/packing.hpp"
#include "seqlab/rates.hpp"
#include "seqlab/risk.hpp"
#include "seqlab/widths.hpp"

#include "json.hpp"

namespace seqlab::report {

std::string format_double(double v);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  void add(const std::vector<std::string>& row);
  std::string cell(double v) const { return format_double(v); }
  const std::string& str() const { return buffer_; }

 private:
  std::string buffer_;
  std::size_t columns_;
};

nlohmann::ordered_json to_json(const RateBracket& b);
nlohmann::ordered_json to_json(const rates::ConditionReport& r);
nlohmann::ordered_json to_json(const risk::RiskEstimate& r);
nlohmann::ordered_json to_json(const packing::EntropyEstimate& e);

// CSV row schema: body_id, center_id, eps, value, t, delta, N, seed
std::string width_csv(const std::string& body_id,
                      const std::vector<std::pair<std::string,
                                                  widths::WidthEstimate>>& rows);

// CSV schema: body_id, mu_id, sigma, estimator, mean, stderr, reps, seed
std::string risk_csv(const std::string& body_id,
                     const std::vector<std::pair<std::string,
                                                 risk::RiskEstimate>>& rows,
                     std::uint64_t seed);

// Points CSV plus a manifest (spacing, domain, seed).
std::pair<std::string, nlohmann::ordered_json> packing_export(
    const packing::PackingSet& pack, std::uint64_t seed);

// CSV schema: eps, lower, upper
std::string entropy_curve_csv(const std::vector<packing::EntropyEstimate>& curve);

std::string fnv_hash_hex(const std::string& text);

void write_file(const std::string& path, const std::string& content);

}  // namespace seqlab::report
