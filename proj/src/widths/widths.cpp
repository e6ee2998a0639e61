#include "seqlab/widths.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

#include "seqlab/parallel.hpp"
#include "seqlab/rng.hpp"

namespace seqlab::widths {

using bodies::Kind;

long mc_sample_count(double eps, double t, double delta) {
  if (!(t > 0) || !(delta > 0) || !(delta < 1))
    throw InvalidPrecisionError("need t > 0 and delta in (0,1)");
  if (!(eps >= 0)) throw InvalidPrecisionError("need eps >= 0");
  const double raw = 2.0 * eps * eps * std::log(2.0 / delta) / (t * t);
  const double capped = std::min(raw, 9.0e18);
  return std::max<long>(1, static_cast<long>(std::ceil(capped)));
}

LinMaxResult linear_max(const ConvexBody& body, ConstSpan nu, double eps,
                        ConstSpan xi, double tol) {
  if (!(eps > 0)) throw InvalidPrecisionError("linear_max needs eps > 0");
  const double xi_norm = norm(xi);
  LinMaxResult res;
  res.maximizer.assign(nu.begin(), nu.end());
  if (xi_norm == 0.0) return res;

  switch (body.spec().kind) {
    case Kind::Singleton:
      return res;  // nu in K forces nu == the point
    case Kind::FullSpace: {
      res.maximizer = add_scaled(nu, eps / xi_norm, xi);
      res.value = eps * xi_norm;
      res.iterations = 1;
      return res;
    }
    default:
      break;
  }

  // When the ball swallows K the problem is a support-function evaluation.
  const auto diam = body.diameter();
  if (!diam.unbounded && eps >= diam.upper) {
    if (auto sup = body.support(xi)) {
      res.maximizer = std::move(sup->first);
      res.value = sup->second - dot(xi, nu);
      res.iterations = 1;
      if (res.value < 0) {  // numerical guard: eta = nu is feasible
        res.maximizer.assign(nu.begin(), nu.end());
        res.value = 0.0;
      }
      return res;
    }
  }

  const double scale = eps * xi_norm;
  const double err_budget = std::max(tol * scale, 1e-14 * scale);
  const double base = dot(xi, nu);

  // Coarse phase: s-doubling with sup - value(s) <= eps^2/(2s). Targets stay
  // within 32 eps of nu so the Dykstra subproblems remain well conditioned.
  double s = eps / xi_norm;
  long iters = 0;
  for (int j = 0; j <= 5; ++j, s *= 2.0) {
    Vec eta = body.project_intersection(nu, eps, add_scaled(nu, s, xi));
    ++iters;
    const double v = dot(xi, eta) - base;
    if (v > res.value) {
      res.value = v;
      res.maximizer = std::move(eta);
    }
  }

  // Refinement: eta <- Pi_C(eta + tau xi) increases the objective monotonically
  // and has the maximizers as its fixed points; tau halves when progress
  // stalls.
  double tau = 4.0 * eps / xi_norm;
  const double tau_floor = eps / (64.0 * xi_norm);
  double last_gain = scale;
  for (int it = 0; it < 80 && iters < 120; ++it) {
    Vec eta = body.project_intersection(nu, eps,
                                        add_scaled(res.maximizer, tau, xi));
    ++iters;
    const double v = dot(xi, eta) - base;
    last_gain = v - res.value;
    if (v > res.value) {
      res.value = v;
      res.maximizer = std::move(eta);
    }
    if (last_gain < err_budget / 4.0) {
      if (tau <= tau_floor) break;
      tau *= 0.5;
    }
  }
  res.iterations = iters;
  res.residual = std::max(last_gain, 0.0);
  return res;
}

namespace {

double inner_tol_rel(double eps, double xi_norm, double t) {
  const double scale = eps * xi_norm;
  if (scale <= 0) return 1e-6;
  return std::max(1e-12, (t / 10.0) / scale);
}

}  // namespace

WidthEstimate local_width(const ConvexBody& body, ConstSpan nu, double eps,
                          double t, double delta, std::uint64_t seed,
                          long max_samples) {
  long n_samples = mc_sample_count(eps, t, delta);
  double t_eff = t;
  if (max_samples > 0 && n_samples > max_samples) {
    n_samples = max_samples;
    t_eff = std::sqrt(2.0 * eps * eps * std::log(2.0 / delta) / n_samples);
  }
  WidthEstimate est;
  est.center.assign(nu.begin(), nu.end());
  est.eps = eps;
  est.sample_count = n_samples;
  est.t = t_eff;
  est.delta = delta;
  est.seed = seed;
  if (eps == 0.0) return est;

  const int n = body.dim();
  std::vector<double> values(n_samples, 0.0);
  std::exception_ptr failure;
  std::mutex failure_mu;
  parallel_for(0, static_cast<std::size_t>(n_samples), [&](std::size_t i) {
    try {
      Rng rng(seed, i);
      Vec xi = rng.gaussian_vector(n);
      const auto lm =
          linear_max(body, nu, eps, xi, inner_tol_rel(eps, norm(xi), t_eff));
      values[i] = lm.value;
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  est.value = kernels::sum(values.data(), values.size()) / double(n_samples);
  return est;
}

std::vector<WidthEstimate> width_profile(const ConvexBody& body, ConstSpan nu,
                                         const std::vector<double>& eps_grid,
                                         double t, double delta,
                                         std::uint64_t seed, long max_samples) {
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] > eps_grid[i - 1]))
      throw InvalidPrecisionError("eps grid must be strictly increasing");

  CrnWidths crn(body, t, delta, seed, max_samples > 0 ? max_samples : 20000);
  std::vector<WidthEstimate> out;
  out.reserve(eps_grid.size());
  for (const double eps : eps_grid) out.push_back(crn.estimate(nu, eps));

  // Isotonic post-smoothing: the true profile is nondecreasing in eps.
  Vec raw(out.size()), fit(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) raw[i] = out[i].value;
  bodies::isotonic_project(raw.data(), fit.data(), raw.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].smoothed = fit[i] != raw[i];
    out[i].value = fit[i];
  }
  return out;
}

CrnWidths::CrnWidths(ConvexBody body, double t, double delta,
                     std::uint64_t seed, long max_samples)
    : body_(std::move(body)),
      n_(body_.dim()),
      t_(t),
      delta_(delta),
      seed_(seed),
      max_samples_(max_samples) {}

void CrnWidths::ensure_pool(long count) {
  if (count <= pool_count_) return;
  pool_.resize(std::size_t(count) * n_);
  parallel_for(pool_count_, count, [&](std::size_t i) {
    Rng rng(seed_, i);
    rng.fill_gaussian(pool_.data() + i * n_, n_);
  });
  pool_count_ = count;
}

double CrnWidths::eval(ConstSpan center, double eps) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (const double c : center) {
    std::uint64_t bits;
    std::memcpy(&bits, &c, sizeof(bits));
    mix(bits);
  }
  std::uint64_t ebits;
  std::memcpy(&ebits, &eps, sizeof(ebits));
  mix(ebits);
  if (const auto it = cache_.find(h); it != cache_.end()) return it->second;

  if (eps <= 0.0) {
    cache_.emplace(h, 0.0);
    return 0.0;
  }
  long count = mc_sample_count(eps, t_, delta_);
  double t_eff = t_;
  if (count > max_samples_) {
    count = max_samples_;
    t_eff = std::sqrt(2.0 * eps * eps * std::log(2.0 / delta_) / count);
  }
  ensure_pool(count);
  std::vector<double> values(count, 0.0);
  std::exception_ptr failure;
  std::mutex failure_mu;
  parallel_for(0, static_cast<std::size_t>(count), [&](std::size_t i) {
    try {
      ConstSpan xi(sample(i), std::size_t(n_));
      const auto lm =
          linear_max(body_, center, eps, xi, inner_tol_rel(eps, norm(xi), t_eff));
      values[i] = lm.value;
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  const double v = kernels::sum(values.data(), values.size()) / double(count);
  cache_.emplace(h, v);
  return v;
}

WidthEstimate CrnWidths::estimate(ConstSpan center, double eps) {
  WidthEstimate est;
  est.value = eval(center, eps);
  est.center.assign(center.begin(), center.end());
  est.eps = eps;
  long count = eps > 0 ? mc_sample_count(eps, t_, delta_) : 1;
  est.t = t_;
  if (count > max_samples_) {
    count = max_samples_;
    est.t = std::sqrt(2.0 * eps * eps * std::log(2.0 / delta_) / count);
  }
  est.sample_count = count;
  est.delta = delta_;
  est.seed = seed_;
  return est;
}

}  // namespace seqlab::widths
