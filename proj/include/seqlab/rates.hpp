#pragma once

// The variational radius eps_mu, every computable rate bound/characterization,
// condition checkers, and closed-form rates for the catalog examples.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqlab/bracket.hpp"
#include "seqlab/packing.hpp"
#include "seqlab/widths.hpp"

#include "json.hpp"

namespace seqlab::rates {

using bodies::ConvexBody;

struct ConstantsConfig {
  double sigma = 1.0;
  double c_star = 5.0;   // local entropy ratio; > 4 for the packing search
  double L = 2.0;        // Talagrand-type constant in the width/entropy terms
  double C_char = 2.0;   // variant A outer radius factor, > 1
  double c_char = 0.5;   // variant A inner radius factor, in (0,1)
  double c_b = 2.0;      // variant B shrink factor, > 1
  double kappa_regime = 1.0;  // "eps-bar vs sigma" regime threshold
  double kappa_lip = 1.0;     // Lipschitz condition slack
  double kappa_suff = 3.0;    // sufficient-condition comparison slack
  double C_hat = 8.0;         // configured regime constant for the risk law
  double r_eff_factor = 1e3;  // effective radius for unbounded kinds
  std::uint64_t seed = 1;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  static ConstantsConfig from_json(const nlohmann::json& j);
};

struct BudgetConfig {
  double width_t = 0.0;      // absolute width precision; 0 -> width_t_rel * d
  double width_t_rel = 0.05;
  double width_delta = 0.05;
  long width_max_samples = 20000;
  int probe_budget = 8;
  long cloud_budget = 20000;
  int bisect_iters = 40;
  int grid_per_decade = 25;
  double grid_lo_frac = 1e-3;
  int pair_budget = 16;
  long reps = 2000;
  int max_depth = 12;
  int max_doublings = 20;
  int nodes_per_level = 64;
  int multistart = 8;

  nlohmann::ordered_json to_json() const;
  static BudgetConfig from_json(const nlohmann::json& j);
};

enum class Verdict { SufficientForOptimal, NecessaryViolated, Inconclusive };
std::string verdict_name(Verdict v);

struct ConditionReport {
  std::string condition_id;
  std::vector<double> eps_grid;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<int> satisfied;
  Verdict verdict = Verdict::Inconclusive;
  std::string notes;
};

// Shared evaluation context: one CRN width pool and one entropy memo per
// (body, constants, budgets, seed).
struct RateContext {
  ConvexBody body;
  ConstantsConfig consts;
  BudgetConfig budgets;
  double d_eff = 1.0;       // diameter upper, or the configured R_eff
  bool unbounded = false;
  widths::CrnWidths widths;
  packing::LocalEntropyEval entropy;
  std::vector<Vec> probe_set;

  static RateContext make(ConvexBody body, ConstantsConfig consts,
                          BudgetConfig budgets);
  double width(ConstSpan center, double eps) { return widths.eval(center, eps); }
  double width_t() const { return widths.precision(); }
};

// argmax over [0, d] of sigma * w_mu(eps) - eps^2/2 (golden section on the
// CRN profile). sigma_override = 0 uses consts.sigma.
double epsilon_mu(RateContext& ctx, ConstSpan mu, double sigma_override = 0.0);

RateBracket epsilon_K_bar(RateContext& ctx);

RateBracket main_theorem_bound(RateContext& ctx,
                               const std::vector<Vec>* restrict_to = nullptr);

RateBracket width_global_bound(RateContext& ctx);

struct ImportantThmResult {
  RateBracket bracket;
  double underline_eps = 0.0;
  double c_n = 0.0;
  double geometric_mean_value = 0.0;  // sqrt(sigma) * C_n * sqrt(eps*) * n^(1/4)
};
ImportantThmResult important_thm_bound(RateContext& ctx,
                                       const RateBracket& minimax);

enum class CharVariant { A, B, C };
RateBracket characterization_bracket(RateContext& ctx, CharVariant variant);

ConditionReport lipschitz_check(RateContext& ctx, double eps_star_lower,
                                const std::vector<double>* eps_grid = nullptr);

ConditionReport sufficient_condition_check(
    RateContext& ctx, const std::vector<double>* eps_grid = nullptr);

// Entropy-integral diagnostic; curve rows are (t, certified log M(t, K)).
RateBracket dudley_bound(RateContext& ctx,
                         const std::vector<std::pair<double, double>>& curve,
                         double c_prime = 1.0);

// Geometric eps grid between grid_lo_frac*d and 2d.
std::vector<double> eps_grid(const RateContext& ctx);

struct ClosedFormReport {
  std::string example_id;
  nlohmann::ordered_json values;
  std::string notes;
};

// Pure arithmetic evaluation of the catalog example formulas; throws
// RegimeViolationError outside a formula's validity window.
ClosedFormReport closed_form_rates(const std::string& example_id,
                                   const nlohmann::json& params);

// One-off quadrature for the regime constant C = int_0^inf 6x
// exp(-x^4/(32(1+x)^2)) dx (exposed, not used as a default threshold).
double regime_constant_quadrature();

}  // namespace seqlab::rates
