#include "seqlab/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "seqlab/parallel.hpp"
#include "seqlab/rng.hpp"

namespace seqlab::algorithms {

using bodies::SampleMode;

namespace {

// Candidates inside B(theta, radius) ∩ K (theta must lie in K).
std::vector<Vec> intersection_cloud(RateContext& ctx, ConstSpan theta,
                                    double radius, long budget,
                                    std::uint64_t salt) {
  const int n = ctx.body.dim();
  std::vector<Vec> cloud(static_cast<std::size_t>(budget));
  parallel_for(0, static_cast<std::size_t>(budget), [&](std::size_t i) {
    Rng rng(ctx.consts.seed ^ salt, i);
    Vec y = rng.gaussian_vector(n);
    const double nr = norm(y);
    const double rad = radius * std::pow(rng.uniform(), 1.0 / n);
    for (int d = 0; d < n; ++d)
      y[d] = theta[d] + (nr > 0 ? y[d] * rad / nr : 0.0);
    Vec z = ctx.body.project(y);
    const double dist = distance(z, theta);
    if (dist > radius) {
      const double shrink = radius / dist;
      for (int d = 0; d < n; ++d) z[d] = theta[d] + shrink * (z[d] - theta[d]);
    }
    cloud[i] = std::move(z);
  });
  return cloud;
}

}  // namespace

ChildrenDistanceResult children_distance(RateContext& ctx, ConstSpan nu, int k) {
  if (ctx.unbounded)
    throw UnboundedBodyError("local packing search needs a bounded body");
  if (k < 1) throw InvalidConfigError("level k must be >= 1");
  const double d = ctx.d_eff;
  const double cs = ctx.consts.c_star;
  const double sigma = ctx.consts.sigma;
  const double delta = d / (std::ldexp(1.0, k - 1) * cs);

  ChildrenDistanceResult res;
  res.delta = delta;
  // Larger clouds at shallow levels, where maximality matters most.
  const long cloud_budget =
      std::max<long>(256, ctx.budgets.cloud_budget >> std::min(k - 1, 8));
  const auto cloud =
      intersection_cloud(ctx, nu, delta * cs, cloud_budget, 0xA16 * k + 1);
  res.children = packing::greedy_packing(cloud, delta,
                                         2L * ctx.budgets.nodes_per_level);
  res.children.whole_body = false;
  res.children.domain_center.assign(nu.begin(), nu.end());
  res.children.domain_radius = delta * cs;

  double min_child = std::numeric_limits<double>::infinity();
  for (const auto& child : res.children.points)
    min_child = std::min(min_child, ctx.width(child, delta));
  res.psi = ctx.width(nu, delta * cs) - min_child;
  const double c_thm = 4.0 - 1.0 / (cs * cs);
  res.threshold = c_thm * (delta * cs) * (delta * cs) / (2.0 * sigma);
  res.gamma = res.psi - res.threshold;
  return res;
}

LocalPackResult local_packing_algorithm(RateContext& ctx) {
  if (ctx.unbounded)
    throw UnboundedBodyError("local packing search needs a bounded body");
  const double d = ctx.d_eff;
  const double cs = ctx.consts.c_star;
  const double sigma = ctx.consts.sigma;
  const double sd = std::min(sigma, d);
  const double c_prime =
      (2.0 * cs - 4.0) * (4.0 * cs - 1.0 / cs) / ((cs - 4.0) * cs);

  LocalPackResult out;
  out.bracket.method = RateMethod::LocalPackAlg;
  out.bracket.sigma = sigma;
  if (d <= 0.0) {  // singleton: never terminates, case (2) with d = 0
    out.status = LocalPackStatus::DepthExhaustedClean;
    out.bracket.lower = out.bracket.upper = 0.0;
    out.bracket.notes = "degenerate body";
    return out;
  }

  struct Node {
    Vec point;
    int level;
  };
  // Pseudocode queue: children are added at the start, removal is at the end.
  std::deque<Node> queue;
  queue.push_back({ctx.probe_set.front(), 1});
  out.nodes_per_level.assign(ctx.budgets.max_depth + 2, 0);
  std::vector<long> enqueued(ctx.budgets.max_depth + 2, 0);
  enqueued[1] = 1;
  bool dropped = false;
  int node_id = 0;
  int deepest_completed = 0;

  while (!queue.empty()) {
    Node node = std::move(queue.back());
    queue.pop_back();
    if (node.level > ctx.budgets.max_depth) break;
    deepest_completed = std::max(deepest_completed, node.level - 1);
    ++out.nodes_per_level[node.level];
    auto cd = children_distance(ctx, node.point, node.level);
    out.trace.push_back({node.level, node_id++, cd.delta, cd.psi, cd.threshold,
                         static_cast<int>(cd.children.points.size())});
    if (cd.gamma > 0.0) {
      out.terminated = true;
      out.status = LocalPackStatus::Terminated;
      out.level = node.level;
      out.beta = d / (std::ldexp(1.0, node.level - 1) * cs);
      out.bracket.lower = out.beta;
      // Levels below the terminating one completed without a positive gap.
      if (node.level >= 2 && !dropped) {
        out.bracket.upper =
            std::min(d, c_prime * d / std::ldexp(1.0, node.level - 1));
      } else {
        out.bracket.upper = d;
      }
      out.bracket.notes = "terminated at level " + std::to_string(node.level);
      return out;
    }
    // The per-level node budget caps the whole breadth-first frontier.
    for (auto& child : cd.children.points) {
      if (enqueued[node.level + 1] >= ctx.budgets.nodes_per_level) {
        dropped = true;
        break;
      }
      queue.push_front({std::move(child), node.level + 1});
      ++enqueued[node.level + 1];
    }
  }

  const int k = ctx.budgets.max_depth;
  out.level = k;
  out.status = dropped ? LocalPackStatus::DepthExhaustedBudget
                       : LocalPackStatus::DepthExhaustedClean;
  const double cap = c_prime * d / std::ldexp(1.0, k);
  if (sigma >= cap) {
    // Case (2)(a): eps_K is sigma wedge d up to constants.
    out.bracket.lower = sd / 3.0;
    out.bracket.upper = !dropped ? std::min(3.0 * sd, d) : d;
    out.bracket.notes = "depth exhausted, sigma-wedge-d regime";
  } else {
    out.bracket.lower = sd / 3.0;  // universal minimax lower bound
    out.bracket.upper = !dropped ? std::min(cap, d) : d;
    out.bracket.notes = "depth exhausted, cap c'd/2^k";
  }
  if (dropped) out.bracket.notes += "; node caps bound the covering";
  return out;
}

double underline_eps_star(RateContext& ctx) {
  const double sigma = ctx.consts.sigma;
  const double cs = ctx.consts.c_star;
  const double L = ctx.consts.L;
  const double C = 8.0 + 8.0 / cs;
  const double d = ctx.d_eff;
  if (d <= 0.0) return 0.0;
  auto pred = [&](double eps) {
    const double lhs = C * C * eps * eps / (4.0 * sigma * sigma);
    const double needed = lhs / ((L / cs) * (L / cs));
    return (L / cs) * (L / cs) * ctx.entropy.lower(eps, needed) >= lhs;
  };
  double lo = 1e-6 * d, hi = 2.0 * d;
  if (!pred(lo)) return 0.0;
  for (int it = 0; it < ctx.budgets.bisect_iters; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

GlobalPackResult global_packing_algorithm(RateContext& ctx) {
  if (ctx.unbounded)
    throw UnboundedBodyError("global packing search needs a bounded body");
  const double sigma = ctx.consts.sigma;
  const double cs = ctx.consts.c_star;
  const double L = ctx.consts.L;
  const double C = 8.0 + 8.0 / cs;
  const double d = ctx.d_eff;
  const double c_prime = (1.0 + cs * cs) / (cs * cs * (10.0 + 8.0 / cs));

  GlobalPackResult out;
  out.bracket.method = RateMethod::GlobalPackAlg;
  out.bracket.sigma = sigma;

  const double under = underline_eps_star(ctx);
  double eps = 2.0 * under;
  if (eps <= 0.0) {
    out.terminated_on_init = true;
    out.eps = 0.0;
    out.bracket.lower = 0.0;
    out.bracket.upper = std::min(sigma, d);
    out.bracket.notes = "underline eps* = 0";
    return out;
  }

  const long pack_cap = std::max(8, ctx.budgets.nodes_per_level);
  const int multistart = std::max(1, ctx.budgets.multistart);
  int it = 0;
  for (; it <= ctx.budgets.max_doublings; ++it) {
    double sup_w = 0.0;
    for (const auto& mu : ctx.probe_set)
      sup_w = std::max(sup_w, ctx.width(mu, eps / cs));
    double delta = eps;
    if (sup_w > 0)
      delta = std::min(eps, eps * eps * eps / (4.0 * cs * sup_w * sigma));
    out.delta_history.push_back(delta);

    // Maximal delta-packing of K, greedy over probes + interior cloud.
    std::vector<Vec> cloud = ctx.probe_set;
    auto interior = ctx.body.sample_points(
        std::max<long>(64, ctx.budgets.cloud_budget / 8), SampleMode::Interior,
        ctx.consts.seed + 977 + it);
    cloud.insert(cloud.end(), interior.begin(), interior.end());
    auto packing = packing::greedy_packing(cloud, delta, pack_cap);
    if (static_cast<long>(packing.points.size()) >= pack_cap) out.degraded = true;

    double psi = -std::numeric_limits<double>::infinity();
    for (const auto& nu_i : packing.points) {
      const double base = ctx.width(nu_i, eps / cs);
      double sup_local = base;  // nu' = nu_i is feasible
      const double reach = std::max(2.0 * eps - delta, 1e-12);
      for (int s = 1; s < multistart; ++s) {
        Rng rng(ctx.consts.seed ^ 0x9106c, (it + 1) * 1000 + s);
        Vec y = rng.gaussian_vector(ctx.body.dim());
        const double nr = norm(y);
        const double rad = reach * std::pow(rng.uniform(), 1.0 / ctx.body.dim());
        for (int dd = 0; dd < ctx.body.dim(); ++dd)
          y[dd] = nu_i[dd] + (nr > 0 ? y[dd] * rad / nr : 0.0);
        Vec z = ctx.body.project(y);
        const double dist = distance(z, nu_i);
        if (dist > reach)
          for (int dd = 0; dd < ctx.body.dim(); ++dd)
            z[dd] = nu_i[dd] + (reach / dist) * (z[dd] - nu_i[dd]);
        sup_local = std::max(sup_local, ctx.width(z, eps / cs));
      }
      for (const auto& other : packing.points) {
        if (distance(other, nu_i) <= reach)
          sup_local = std::max(sup_local, ctx.width(other, eps / cs));
      }
      psi = std::max(psi, sup_local - base);
    }
    const double threshold = C * eps * eps / (2.0 * sigma) -
                             (L / cs) * eps * std::sqrt(ctx.entropy.lower(eps));
    out.trace.push_back({it, it, delta, psi, threshold,
                         static_cast<int>(packing.points.size())});
    if (psi < threshold) {
      out.terminated_on_init = it == 0;
      break;
    }
    eps *= 2.0;
  }
  out.iterations = it;
  out.eps = eps;

  if (out.terminated_on_init) {
    out.bracket.lower = eps / (2.0 * cs);
    out.bracket.upper = std::min(2.0 * cs * eps, d);
    out.bracket.notes = "terminated on initialization: eps tracks eps_K";
  } else if (sigma >= eps) {
    const double sd = std::min(sigma, d);
    out.bracket.lower = sd / 3.0;
    out.bracket.upper = std::min(3.0 * sd, d);
    out.bracket.notes = "sigma >= eps: sigma-wedge-d regime";
  } else {
    out.bracket.lower = eps / (2.0 * cs);
    out.bracket.upper = std::min(eps / c_prime, d);
    out.bracket.notes = "eps tracks eps_K; c'=" + std::to_string(c_prime);
  }
  if (out.degraded) out.bracket.notes += "; packing budget bound (coarser certified delta)";
  return out;
}

}  // namespace seqlab::algorithms
