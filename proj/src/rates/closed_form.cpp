#include <algorithm>
#include <cmath>

#include "seqlab/rates.hpp"

namespace seqlab::rates {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json hyperrect(const json& params) {
  Vec a = params.at("a").get<Vec>();
  const double sigma = params.at("sigma").get<double>();
  const int n = static_cast<int>(a.size());
  std::sort(a.begin(), a.end());
  double sum_min = 0.0, sum_sq = 0.0;
  for (const double ai : a) {
    sum_min += std::min(ai * ai, sigma * sigma);
    sum_sq += ai * ai;
  }
  // Prefix sums of a_1^2..a_m^2 in ascending order.
  std::vector<double> prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + a[i] * a[i];
  int k = 0;
  for (int cand = 0; cand < n; ++cand) {
    const bool c1 = (cand + 1) * sigma * sigma <= prefix[n - cand];
    const bool c2 =
        cand + 1 > n - 1 || (cand + 2) * sigma * sigma >= prefix[n - cand - 1];
    if (c1 && c2) {
      k = cand;
      break;
    }
    if (!c1) break;  // fails for all larger k too once prefix shrinks
  }
  const double closed = std::min((k + 2) * sigma * sigma, sum_sq);
  return {{"n", n},
          {"sigma", sigma},
          {"sum_min", sum_min},
          {"k", k},
          {"closed_form", closed},
          {"ratio", sum_min / closed}};
}

ordered_json ellipsoid_minimax(const json& params) {
  const Vec d = params.at("axes").get<Vec>();
  const double sigma = params.at("sigma").get<double>();
  const int n = static_cast<int>(d.size());
  const double diam_sq = 4.0 / (d.back() * d.back());
  if (1.0 / (d[n - 1] * d[n - 1]) <= sigma * sigma)
    return {{"k", n}, {"minimax_sq", diam_sq}, {"branch", "diameter"}};
  int k_found = -1;
  for (int k = 0; k < n; ++k) {
    const double dn_k = d[n - 1 - k];  // 1-indexed d_{n-k}
    const bool c1 = 1.0 / (dn_k * dn_k) <= (k + 1) * sigma * sigma;
    bool c2 = true;
    if (k >= 1) {
      const double dn_k1 = d[n - k];  // 1-indexed d_{n-k+1}
      c2 = 1.0 / (dn_k1 * dn_k1) > k * sigma * sigma;
    }
    if (c1 && c2) {
      k_found = k;
      break;
    }
  }
  if (k_found < 0)
    return {{"k", -1}, {"minimax_sq", diam_sq}, {"branch", "diameter"}};
  return {{"k", k_found},
          {"minimax_sq", std::min((k_found + 1) * sigma * sigma, diam_sq)},
          {"branch", "k_sigma_sq"}};
}

ordered_json ellipsoid_prelude_lower(const json& params) {
  const Vec d = params.at("axes").get<Vec>();
  double inv_sq = 0.0;
  for (const double di : d) inv_sq += 1.0 / (di * di);
  const double w = std::sqrt(inv_sq);  // Gaussian width proxy, constant 1
  const double dn = d.back();
  double sum_inv_lambda = 0.0;  // lambda_i = d_i^2 / (2 d_n)
  for (const double di : d) sum_inv_lambda += 2.0 * dn / (di * di);
  const double diam = 2.0 / dn;
  return {{"width", w},
          {"eps_bar_lower", w * w / sum_inv_lambda},
          {"sigma_min", diam * diam / w}};
}

ordered_json l1_local_entropy(const json& params) {
  const int n = params.at("n").get<int>();
  const double eps = params.at("eps").get<double>();
  const double boundary = 1.0 / std::sqrt(double(n));
  double value;
  std::string branch;
  if (eps >= boundary && eps * eps * n > 1.0) {
    value = std::log(eps * eps * n) / (eps * eps);
    branch = "log";
  } else {
    value = n;
    branch = "dimension";
  }
  return {{"n", n}, {"eps", eps}, {"value", value}, {"branch", branch}};
}

ordered_json isotonic_entropy(const json& params) {
  const int n = params.at("n").get<int>();
  const double v = params.at("v").get<double>();
  const double eps = params.at("eps").get<double>();
  const double c_star = params.value("c_star", 5.0);
  const double upper = 3.0 * c_star * (v * std::sqrt(double(n)) + eps) / eps;
  const double lower =
      std::max(0.0, (std::sqrt(double(n)) * v / eps - 2.0) / 8.0);
  return {{"upper", upper}, {"lower", lower}};
}

ordered_json isotonic_rate(const json& params) {
  const int n = params.at("n").get<int>();
  const double v = params.at("v").get<double>();
  const double sigma = params.at("sigma").get<double>();
  const double eps =
      std::min(std::pow(double(n), 1.0 / 6.0) * std::cbrt(v) *
                   std::pow(sigma, 2.0 / 3.0),
               std::sqrt(double(n)) * sigma);
  return {{"eps", eps}, {"eps_sq", eps * eps}};
}

ordered_json multiiso_minimax(const json& params) {
  const int p = params.at("p").get<int>();
  const int n = params.at("n").get<int>();
  const double sigma = params.at("sigma").get<double>();
  if (p <= 2) throw RegimeViolationError("multiiso minimax formula needs p > 2");
  if (sigma < 1.0 / std::sqrt(double(n)) || sigma > 1.0)
    throw RegimeViolationError("multiiso minimax needs 1/sqrt(n) <= sigma <= 1");
  const double eps_star = std::pow(sigma, 1.0 / p);
  return {{"eps_star", eps_star}, {"minimax_sq", eps_star * eps_star}};
}

ordered_json multiiso_lse_log(const json& params) {
  const int p = params.at("p").get<int>();
  const int n = params.at("n").get<int>();
  if (p <= 2) throw RegimeViolationError("multiiso lse bound needs p > 2");
  const double sigma = 1.0 / std::sqrt(double(n));
  const double logn = std::log(double(n));
  const double bound = std::pow(sigma, 1.0 / p) * logn * logn;
  return {{"sigma", sigma}, {"lse_upper", bound}, {"lse_upper_sq", bound * bound}};
}

ordered_json multiiso_suboptimal_window(const json& params) {
  const int p = params.at("p").get<int>();
  const int n = params.at("n").get<int>();
  if (p <= 2) throw RegimeViolationError("suboptimal window needs p > 2");
  const double logn = std::log(double(n));
  const double lo = std::max(
      std::pow(double(n), -0.5),
      std::pow(double(n), double(2 - p) / (2.0 * p - 2.0)) *
          std::pow(logn, 4.0 * p / (p - 1.0)));
  const double hi = std::pow(double(n), -0.5 + 1.0 / p);
  if (lo >= hi)
    throw RegimeViolationError(
        "suboptimality window is empty at this n (log factors dominate)");
  return {{"sigma_lo", lo}, {"sigma_hi", hi}};
}

ordered_json zhang_ellipsoid(const json& params) {
  const int n = params.at("n").get<int>();
  const double dn = std::pow(double(n), -0.25);
  double inv_sq = double(n - 1) + 1.0 / (dn * dn);
  const double sigma = 1.0 / (dn * dn * std::sqrt(inv_sq));
  const double diam_sq = 4.0 / (dn * dn);
  return {{"n", n},
          {"d_n", dn},
          {"sigma", sigma},
          {"lse_sq", diam_sq},
          {"minimax_sq", 2.0 * sigma * sigma}};
}

ordered_json sobolev_ellipsoid(const json& params) {
  const double alpha = params.at("alpha").get<double>();
  const int n = params.at("n").get<int>();
  if (!(alpha > 0.0 && alpha < 0.5))
    throw RegimeViolationError("sobolev example needs alpha in (0, 1/2)");
  const double sigma = std::pow(double(n), (-1.0 + 2.0 * alpha) / 2.0);
  const int k = static_cast<int>(
      std::ceil(std::pow(double(n), (1.0 - 2.0 * alpha) / (1.0 + 2.0 * alpha))));
  const double minimax_sq = k * std::pow(double(n), -1.0 + 2.0 * alpha);
  const double asymptotic =
      std::pow(double(n), -2.0 * alpha * (1.0 - 2.0 * alpha) / (1.0 + 2.0 * alpha));
  return {{"sigma", sigma},
          {"k", k},
          {"minimax_sq", minimax_sq},
          {"minimax_asymptotic", asymptotic},
          {"lse_sq_order", 1.0}};
}

ordered_json lp_strong_convexity(const json& params) {
  const double p = params.at("p").get<double>();
  const int n = params.at("n").get<int>();
  if (!(p > 1.0 && p < 2.0))
    throw RegimeViolationError("strong convexity example needs p in (1,2)");
  const double k = (p - 1.0) * std::pow(double(n), 0.5 - 1.0 / p);
  const double sigma_bad = std::pow(double(n), -(1.0 - 1.0 / p));
  return {{"k", k},
          {"sigma_bad", sigma_bad},
          {"diameter", 2.0},
          {"lse_lower_order", 2.0}};
}

ordered_json extreme_sigma(const json& params) {
  const double r = params.at("r").get<double>();
  const double d = params.at("d").get<double>();
  const int n = params.at("n").get<int>();
  return {{"sigma_small", r / std::sqrt(double(n))}, {"sigma_large", d}};
}

ordered_json geometric_mean(const json& params) {
  const double sigma = params.at("sigma").get<double>();
  const double eps_star = params.at("eps_star").get<double>();
  const int n = params.at("n").get<int>();
  const double c_star = params.value("c_star", 5.0);
  const double c_n =
      4.0 * std::pow(1.0 + std::log(std::sqrt(2.0 * M_PI * n)) / std::log(c_star),
                     1.5);
  const double value =
      std::sqrt(sigma) * c_n * std::sqrt(eps_star) * std::pow(double(n), 0.25);
  return {{"c_n", c_n}, {"value", value}, {"value_sq", value * value}};
}

}  // namespace

ClosedFormReport closed_form_rates(const std::string& example_id,
                                   const nlohmann::json& params) {
  ClosedFormReport rep;
  rep.example_id = example_id;
  if (example_id == "hyperrect") rep.values = hyperrect(params);
  else if (example_id == "ellipsoid_minimax") rep.values = ellipsoid_minimax(params);
  else if (example_id == "ellipsoid_prelude_lower")
    rep.values = ellipsoid_prelude_lower(params);
  else if (example_id == "l1_local_entropy") rep.values = l1_local_entropy(params);
  else if (example_id == "isotonic_entropy") rep.values = isotonic_entropy(params);
  else if (example_id == "isotonic_rate") rep.values = isotonic_rate(params);
  else if (example_id == "multiiso_minimax") rep.values = multiiso_minimax(params);
  else if (example_id == "multiiso_lse_log") rep.values = multiiso_lse_log(params);
  else if (example_id == "multiiso_suboptimal_window")
    rep.values = multiiso_suboptimal_window(params);
  else if (example_id == "zhang_ellipsoid") rep.values = zhang_ellipsoid(params);
  else if (example_id == "sobolev_ellipsoid") rep.values = sobolev_ellipsoid(params);
  else if (example_id == "lp_strong_convexity")
    rep.values = lp_strong_convexity(params);
  else if (example_id == "extreme_sigma") rep.values = extreme_sigma(params);
  else if (example_id == "geometric_mean") rep.values = geometric_mean(params);
  else
    throw InvalidConfigError("unknown closed-form example: " + example_id);
  return rep;
}

}  // namespace seqlab::rates
