#include "seqlab/rates.hpp"

#include <algorithm>
#include <cmath>

#include "seqlab/optim.hpp"
#include "seqlab/rng.hpp"

namespace seqlab::rates {

using bodies::SampleMode;

void ConstantsConfig::validate() const {
  if (!(sigma > 0)) throw InvalidConfigError("sigma must be positive");
  if (!(c_star > 4)) throw InvalidConfigError("c_star must exceed 4");
  if (!(C_char > 1) || !(c_char > 0) || !(c_char < 1))
    throw InvalidConfigError("need C_char > 1 > c_char > 0");
  if (!(c_b > 1)) throw InvalidConfigError("need c_b > 1");
  if (!(L > 0)) throw InvalidConfigError("L must be positive");
}

nlohmann::ordered_json ConstantsConfig::to_json() const {
  return {{"sigma", sigma},       {"c_star", c_star},
          {"L", L},               {"C_char", C_char},
          {"c_char", c_char},     {"c_b", c_b},
          {"kappa_regime", kappa_regime}, {"kappa_lip", kappa_lip},
          {"kappa_suff", kappa_suff},     {"C_hat", C_hat},
          {"r_eff_factor", r_eff_factor}, {"seed", seed}};
}

ConstantsConfig ConstantsConfig::from_json(const nlohmann::json& j) {
  ConstantsConfig c;
  c.sigma = j.value("sigma", c.sigma);
  c.c_star = j.value("c_star", c.c_star);
  c.L = j.value("L", c.L);
  c.C_char = j.value("C_char", c.C_char);
  c.c_char = j.value("c_char", c.c_char);
  c.c_b = j.value("c_b", c.c_b);
  c.kappa_regime = j.value("kappa_regime", c.kappa_regime);
  c.kappa_lip = j.value("kappa_lip", c.kappa_lip);
  c.kappa_suff = j.value("kappa_suff", c.kappa_suff);
  c.C_hat = j.value("C_hat", c.C_hat);
  c.r_eff_factor = j.value("r_eff_factor", c.r_eff_factor);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

nlohmann::ordered_json BudgetConfig::to_json() const {
  return {{"width_t", width_t},
          {"width_t_rel", width_t_rel},
          {"width_delta", width_delta},
          {"width_max_samples", width_max_samples},
          {"probe_budget", probe_budget},
          {"cloud_budget", cloud_budget},
          {"bisect_iters", bisect_iters},
          {"grid_per_decade", grid_per_decade},
          {"grid_lo_frac", grid_lo_frac},
          {"pair_budget", pair_budget},
          {"reps", reps},
          {"max_depth", max_depth},
          {"max_doublings", max_doublings},
          {"nodes_per_level", nodes_per_level},
          {"multistart", multistart}};
}

BudgetConfig BudgetConfig::from_json(const nlohmann::json& j) {
  BudgetConfig b;
  b.width_t = j.value("width_t", b.width_t);
  b.width_t_rel = j.value("width_t_rel", b.width_t_rel);
  b.width_delta = j.value("width_delta", b.width_delta);
  b.width_max_samples = j.value("width_max_samples", b.width_max_samples);
  b.probe_budget = j.value("probe_budget", b.probe_budget);
  b.cloud_budget = j.value("cloud_budget", b.cloud_budget);
  b.bisect_iters = j.value("bisect_iters", b.bisect_iters);
  b.grid_per_decade = j.value("grid_per_decade", b.grid_per_decade);
  b.grid_lo_frac = j.value("grid_lo_frac", b.grid_lo_frac);
  b.pair_budget = j.value("pair_budget", b.pair_budget);
  b.reps = j.value("reps", b.reps);
  b.max_depth = j.value("max_depth", b.max_depth);
  b.max_doublings = j.value("max_doublings", b.max_doublings);
  b.nodes_per_level = j.value("nodes_per_level", b.nodes_per_level);
  b.multistart = j.value("multistart", b.multistart);
  return b;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::SufficientForOptimal: return "sufficient_for_optimal";
    case Verdict::NecessaryViolated: return "necessary_violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

RateContext RateContext::make(ConvexBody body, ConstantsConfig consts,
                              BudgetConfig budgets) {
  consts.validate();
  const auto diam = body.diameter();
  double d_eff;
  bool unbounded = diam.unbounded;
  if (unbounded) {
    d_eff = consts.r_eff_factor * consts.sigma * std::sqrt(double(body.dim()));
  } else {
    d_eff = diam.upper;
  }
  // Width precision follows the noise scale on unbounded kinds: R_eff only
  // substitutes for the diameter, not for the magnitude of the widths that
  // matter near eps_mu.
  const double t_scale =
      unbounded ? std::max(consts.sigma * std::sqrt(double(body.dim())), 1e-9)
                : std::max(d_eff, 1e-9);
  const double t =
      budgets.width_t > 0 ? budgets.width_t : budgets.width_t_rel * t_scale;
  widths::CrnWidths crn(body, t, budgets.width_delta, consts.seed,
                        budgets.width_max_samples);
  packing::EntropyBudget eb{budgets.probe_budget, budgets.cloud_budget, 0};
  packing::LocalEntropyEval entropy(body, consts.c_star, eb, consts.seed + 101);

  RateContext ctx{std::move(body), consts,  budgets, d_eff,
                  unbounded,       std::move(crn), std::move(entropy),
                  {}};
  const int half = std::max(1, budgets.probe_budget / 2);
  ctx.probe_set = ctx.body.sample_points(half, SampleMode::ProbeGrid, consts.seed);
  if (budgets.probe_budget > half) {
    auto extra = ctx.body.sample_points(budgets.probe_budget - half,
                                        SampleMode::Interior, consts.seed + 7);
    ctx.probe_set.insert(ctx.probe_set.end(), extra.begin(), extra.end());
  }
  return ctx;
}

std::vector<double> eps_grid(const RateContext& ctx) {
  const double lo = ctx.budgets.grid_lo_frac * ctx.d_eff;
  const double hi = 2.0 * ctx.d_eff;
  const double decades = std::log10(hi / lo);
  const int count =
      std::max(2, static_cast<int>(std::ceil(decades * ctx.budgets.grid_per_decade)));
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
  return grid;
}

double epsilon_mu(RateContext& ctx, ConstSpan mu, double sigma_override) {
  const double sigma = sigma_override > 0 ? sigma_override : ctx.consts.sigma;
  auto objective = [&](double eps) {
    return -(sigma * ctx.widths.eval(mu, eps) - 0.5 * eps * eps);
  };
  // On unbounded kinds the maximizer sits near sigma sqrt(n), far below the
  // substituted R_eff, so the bracket tolerance follows the smaller scale.
  const double search_scale =
      ctx.unbounded
          ? std::min(ctx.d_eff,
                     20.0 * sigma * std::sqrt(double(ctx.body.dim())))
          : ctx.d_eff;
  const double tol = std::max(1e-3 * search_scale, 1e-12);
  return golden_section_min(0.0, ctx.d_eff, tol, objective);
}

RateBracket epsilon_K_bar(RateContext& ctx) {
  RateBracket out;
  out.method = RateMethod::EpsilonMu;
  out.sigma = ctx.consts.sigma;
  double best = 0.0;
  for (const auto& mu : ctx.probe_set)
    best = std::max(best, epsilon_mu(ctx, mu));
  out.lower = best;
  out.upper = ctx.d_eff;
  out.notes = "probe max of eps_mu; upper is the diameter bound";
  return out;
}

RateBracket main_theorem_bound(RateContext& ctx,
                               const std::vector<Vec>* restrict_to) {
  const auto& probes = restrict_to ? *restrict_to : ctx.probe_set;
  const double sigma = ctx.consts.sigma;
  auto sup_width = [&](double eps) {
    double best = 0.0;
    for (const auto& mu : probes) best = std::max(best, ctx.width(mu, eps));
    return best;
  };
  const double wk = sup_width(ctx.d_eff);
  double lo = 1e-9 * ctx.d_eff;
  double hi = std::max(2.0 * ctx.d_eff, std::sqrt(2.0 * sigma * std::max(wk, 0.0))) + lo;
  // g(eps) = eps^2/(2 sigma) - sup_mu w_mu(eps) crosses zero once.
  auto g = [&](double eps) { return eps * eps / (2.0 * sigma) - sup_width(eps); };
  double crossing = hi;
  if (g(lo) > 0) {
    crossing = lo;
  } else {
    for (int it = 0; it < ctx.budgets.bisect_iters; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (g(mid) <= 0)
        lo = mid;
      else
        hi = mid;
    }
    crossing = hi;
  }
  RateBracket out;
  out.method = restrict_to ? RateMethod::RestrictedMainTheorem
                           : RateMethod::MainTheorem;
  out.sigma = sigma;
  out.lower = 0.0;
  out.upper = restrict_to ? crossing : std::min(crossing, ctx.d_eff);
  out.notes = "upper-bound-only method";
  return out;
}

RateBracket width_global_bound(RateContext& ctx) {
  const double wk = ctx.width(ctx.probe_set.front(), ctx.d_eff);
  RateBracket out;
  out.method = RateMethod::WidthGlobal;
  out.sigma = ctx.consts.sigma;
  out.lower = 0.0;
  out.upper = std::sqrt(2.0 * ctx.consts.sigma * std::max(wk, 0.0));
  return out;
}

ImportantThmResult important_thm_bound(RateContext& ctx,
                                       const RateBracket& minimax) {
  const double sigma = ctx.consts.sigma;
  const double cs = ctx.consts.c_star;
  const int n = ctx.body.dim();
  ImportantThmResult res;
  res.c_n = 4.0 * std::pow(1.0 + std::log(std::sqrt(2.0 * M_PI * n)) / std::log(cs),
                           1.5);  // C = 1 recorded as the implementer constant

  // Running sup of (delta/c*) sqrt(log Mloc(delta)) on a coarse geometric grid.
  const double lo = ctx.budgets.grid_lo_frac * ctx.d_eff;
  const double hi = 2.0 * ctx.d_eff;
  const int pts = 14;
  std::vector<double> ds(pts), running(pts);
  double run = 0.0;
  for (int i = 0; i < pts; ++i) {
    ds[i] = lo * std::pow(hi / lo, double(i) / (pts - 1));
    const double v = ds[i] / cs * std::sqrt(ctx.entropy.lower(ds[i]));
    run = std::max(run, v);
    running[i] = run;
  }
  double underline = 0.0;
  for (int i = 0; i < pts; ++i) {
    if (ds[i] * ds[i] / (2.0 * sigma) <= 0.5 * running[i]) underline = ds[i];
  }
  res.underline_eps = underline;
  res.bracket.method = RateMethod::ImportantThm;
  res.bracket.sigma = sigma;
  res.bracket.lower = 0.0;
  res.bracket.upper = std::min(4.0 * res.c_n * underline, ctx.d_eff);
  res.bracket.notes = "C=1 implementer constant inside C_n";
  res.geometric_mean_value = std::sqrt(sigma) * res.c_n *
                             std::sqrt(std::max(minimax.upper, 0.0)) *
                             std::pow(double(n), 0.25);
  return res;
}

namespace {

struct CharResult {
  double eps_bar = 0.0;
};

double largest_satisfying(const std::vector<double>& grid,
                          const std::function<bool(double)>& cond) {
  double best = 0.0;
  for (const double eps : grid)
    if (cond(eps)) best = eps;
  return best;
}

}  // namespace

RateBracket characterization_bracket(RateContext& ctx, CharVariant variant) {
  const double sigma = ctx.consts.sigma;
  const auto grid = eps_grid(ctx);
  const auto& probes = ctx.probe_set;
  RateBracket out;
  out.sigma = sigma;
  const double sd = std::min(sigma, ctx.d_eff);
  const double kappa = ctx.consts.kappa_regime;

  switch (variant) {
    case CharVariant::A: {
      out.method = RateMethod::CharA;
      const double C = ctx.consts.C_char, c = ctx.consts.c_char;
      auto cond = [&](double eps) {
        double best = -1e300;
        for (const auto& mu : probes)
          best = std::max(best, ctx.width(mu, C * eps) - ctx.width(mu, c * eps));
        return best >= (C * C - c * c) * eps * eps / (2.0 * sigma);
      };
      const double eps_bar = largest_satisfying(grid, cond);
      if (eps_bar >= kappa * sigma) {
        out.lower = c * eps_bar;
        out.upper = C * eps_bar;
        out.notes = "eps_bar regime";
      } else {
        out.lower = out.upper = sd;
        out.notes = "sigma-wedge-d regime";
      }
      return out;
    }
    case CharVariant::B: {
      out.method = RateMethod::CharB;
      const double c = ctx.consts.c_b;
      auto eps_bar_at = [&](double s) {
        auto cond = [&](double eps) {
          double best = -1e300;
          for (const auto& mu : probes) {
            double inf_w = ctx.width(mu, eps / c);
            for (const auto& nu : probes) {
              if (distance(mu, nu) <= eps)
                inf_w = std::min(inf_w, ctx.width(nu, eps / c));
            }
            best = std::max(best, ctx.width(mu, eps) - inf_w);
          }
          return best >= (4.0 + 4.0 / c) * eps * eps / (2.0 * s);
        };
        return largest_satisfying(grid, cond);
      };
      const double sigma_prime = 4.0 * c * sigma / (c - 1.0);
      const double eb = eps_bar_at(sigma);
      const double eb_prime = eps_bar_at(sigma_prime);
      if (eb >= kappa * sigma) {
        out.lower = eb / c;
        out.upper = std::max(eb_prime, out.lower);
        out.notes = "eps_bar regime; sigma'=" + std::to_string(sigma_prime);
      } else if (eb_prime <= kappa * sigma) {
        out.lower = out.upper = sd;
        out.notes = "sigma-wedge-d regime";
      } else {
        out.inconclusive = true;
        out.lower = 0.0;
        out.upper = std::max(eb_prime, sd);
        out.notes = "middle band: eps_bar(sigma)=" + std::to_string(eb) +
                    " eps_bar(sigma')=" + std::to_string(eb_prime);
      }
      return out;
    }
    case CharVariant::C: {
      out.method = RateMethod::CharC;
      const double cs = ctx.consts.c_star;
      const double C = 8.0 + 8.0 / cs;
      const double L = ctx.consts.L;
      auto eps_bar_at = [&](double s) {
        auto cond = [&](double eps) {
          const double entropy_term =
              (L / cs) * eps * std::sqrt(ctx.entropy.lower(eps));
          double best = -1e300;
          for (const auto& nu1 : probes)
            for (const auto& nu2 : probes) {
              if (distance(nu1, nu2) > 2.0 * eps) continue;
              best = std::max(best,
                              ctx.width(nu1, eps / cs) - ctx.width(nu2, eps / cs));
            }
          return best - C * eps * eps / (2.0 * s) + entropy_term >= 0.0;
        };
        return largest_satisfying(grid, cond);
      };
      const double sigma_prime = C * sigma / (1.0 - 1.0 / (cs * cs));
      const double eb = eps_bar_at(sigma);
      const double eb_prime = eps_bar_at(sigma_prime);
      if (eb >= kappa * sigma) {
        out.lower = eb / cs;
        out.upper = std::max(eb_prime, out.lower);
        out.notes = "eps_bar regime; sigma'=" + std::to_string(sigma_prime);
      } else if (eb_prime <= kappa * sigma) {
        out.lower = out.upper = sd;
        out.notes = "sigma-wedge-d regime";
      } else {
        out.inconclusive = true;
        out.lower = 0.0;
        out.upper = std::max(eb_prime, sd);
        out.notes = "middle band: eps_bar(sigma)=" + std::to_string(eb) +
                    " eps_bar(sigma')=" + std::to_string(eb_prime);
      }
      return out;
    }
  }
  return out;
}

ConditionReport lipschitz_check(RateContext& ctx, double eps_star_lower,
                                const std::vector<double>* custom_grid) {
  ConditionReport rep;
  rep.condition_id = "lipschitz_width_map";
  const double sigma = ctx.consts.sigma;
  const double kappa = ctx.consts.kappa_lip;

  // Pairs: probes plus boundary-vs-center pairs when a boundary sampler
  // exists.
  std::vector<Vec> pts = ctx.probe_set;
  try {
    auto boundary = ctx.body.sample_points(
        std::max(2, ctx.budgets.pair_budget / 4), SampleMode::Boundary,
        ctx.consts.seed + 31);
    pts.insert(pts.end(), boundary.begin(), boundary.end());
  } catch (const UnsupportedModeError&) {
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < pts.size() && pairs.size() < std::size_t(ctx.budgets.pair_budget); ++i)
    for (std::size_t j = i + 1; j < pts.size() && pairs.size() < std::size_t(ctx.budgets.pair_budget); ++j)
      if (distance(pts[i], pts[j]) > 1e-9 * ctx.d_eff) pairs.emplace_back(i, j);

  const auto grid = custom_grid ? *custom_grid : eps_grid(ctx);
  bool any_violation = false;
  for (const double eps : grid) {
    if (eps < eps_star_lower) continue;
    double lip = 0.0;
    for (const auto& [i, j] : pairs) {
      const double dw =
          std::fabs(ctx.width(pts[i], eps) - ctx.width(pts[j], eps));
      const double slack = 3.0 * ctx.width_t();
      lip = std::max(lip, (dw - slack) / distance(pts[i], pts[j]));
    }
    const double bound = kappa * eps / sigma;
    rep.eps_grid.push_back(eps);
    rep.lhs.push_back(lip);
    rep.rhs.push_back(bound);
    const bool ok = lip <= bound;
    rep.satisfied.push_back(ok);
    if (!ok) any_violation = true;
  }
  rep.verdict = any_violation ? Verdict::NecessaryViolated
                              : Verdict::SufficientForOptimal;
  rep.notes = "estimated Lipschitz slopes are lower bounds (sampled pairs, "
              "3t noise allowance)";
  return rep;
}

ConditionReport sufficient_condition_check(RateContext& ctx,
                                           const std::vector<double>* custom_grid) {
  ConditionReport rep;
  rep.condition_id = "width_slope_vs_local_entropy";
  const double c = ctx.consts.c_char;
  const double kappa = ctx.consts.kappa_suff;
  std::vector<Vec> centers;
  if (ctx.body.centrally_symmetric()) {
    centers.push_back(zeros(ctx.body.dim()));
    rep.notes = "symmetric body: zero center only; ";
  } else {
    centers = ctx.probe_set;
  }
  const auto grid = custom_grid ? *custom_grid : eps_grid(ctx);
  bool all_ok = true;
  for (const double eps : grid) {
    if (eps > ctx.d_eff) continue;
    double lhs = 0.0;
    for (const auto& mu : centers) lhs = std::max(lhs, ctx.width(mu, eps) / eps);
    const double rhs = std::sqrt(ctx.entropy.lower(c * eps));
    rep.eps_grid.push_back(eps);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    const bool ok = lhs <= kappa * rhs;
    rep.satisfied.push_back(ok);
    if (!ok) all_ok = false;
  }
  // The condition is sufficient only: failures prove nothing.
  rep.verdict = all_ok ? Verdict::SufficientForOptimal : Verdict::Inconclusive;
  rep.notes += "certified entropy side; kappa_suff=" + std::to_string(kappa);
  return rep;
}

RateBracket dudley_bound(RateContext& ctx,
                         const std::vector<std::pair<double, double>>& curve,
                         double c_prime) {
  const double sigma = ctx.consts.sigma;
  auto sqrt_logM = [&](double t) {
    if (curve.empty() || t <= 0) return 0.0;
    if (t <= curve.front().first) return std::sqrt(curve.front().second);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (t <= curve[i].first) {
        const double w = (t - curve[i - 1].first) /
                         (curve[i].first - curve[i - 1].first);
        const double v =
            curve[i - 1].second + w * (curve[i].second - curve[i - 1].second);
        return std::sqrt(std::max(0.0, v));
      }
    }
    return std::sqrt(std::max(0.0, curve.back().second));
  };
  auto integral = [&](double a, double b) {
    if (b <= a) return 0.0;
    const int steps = 200;
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double t0 = a + (b - a) * i / steps;
      const double t1 = a + (b - a) * (i + 1) / steps;
      acc += 0.5 * (sqrt_logM(t0) + sqrt_logM(t1)) * (t1 - t0);
    }
    return acc;
  };
  const auto grid = eps_grid(ctx);
  RateBracket out;
  out.method = RateMethod::ClosedForm;
  out.closed_form_name = "dudley_entropy_integral";
  out.sigma = sigma;
  out.lower = 0.0;
  out.upper = grid.back();
  for (const double eps : grid) {
    const double lhs = sigma * integral(c_prime / 16.0 * eps * eps, 2.0 * eps);
    if (lhs <= eps * eps) {
      out.upper = eps;
      break;
    }
  }
  out.notes =
      "certified-lower entropy makes this an optimistic (lower-side) "
      "diagnostic for the main-theorem crossing";
  return out;
}

double regime_constant_quadrature() {
  // Adaptive-enough Simpson on [0, 60]; the integrand decays like
  // exp(-x^2/32) in the tail.
  auto f = [](double x) {
    return 6.0 * x * std::exp(-std::pow(x, 4) / (32.0 * (1.0 + x) * (1.0 + x)));
  };
  const int steps = 120000;
  const double hi = 60.0;
  double acc = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double a = hi * i / steps, b = hi * (i + 1) / steps;
    acc += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  }
  return acc;
}

}  // namespace seqlab::rates
