#pragma once

// Monte-Carlo estimation of local Gaussian widths w_mu(eps) = E sup <xi, eta -
// mu> over eta in B(mu,eps) ∩ K. The inner linear maximization runs a
// projected line search along xi whose error after j doublings is at most
// eps^2 / (2 s_j), so the inner tolerance budget is explicit.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "seqlab/bodies.hpp"

namespace seqlab::widths {

using bodies::ConvexBody;

struct WidthEstimate {
  double value = 0.0;
  Vec center;
  double eps = 0.0;
  long sample_count = 0;
  double t = 0.0;       // effective precision (recomputed if samples capped)
  double delta = 0.0;
  std::uint64_t seed = 0;
  double failed_fraction = 0.0;  // estimates are only emitted when 0
  bool smoothed = false;
};

struct LinMaxResult {
  Vec maximizer;
  double value = 0.0;
  long iterations = 0;
  double residual = 0.0;
};

// ceil(2 eps^2 log(2/delta) / t^2), at least 1.
long mc_sample_count(double eps, double t, double delta);

// Maximize <xi, eta - nu> over B(nu, eps) ∩ K; tol is relative to the support
// scale eps*||xi||.
LinMaxResult linear_max(const ConvexBody& body, ConstSpan nu, double eps,
                        ConstSpan xi, double tol = 1e-4);

WidthEstimate local_width(const ConvexBody& body, ConstSpan nu, double eps,
                          double t, double delta, std::uint64_t seed,
                          long max_samples = 0);

// Common-random-numbers evaluation over an increasing eps grid with isotonic
// post-smoothing of the profile.
std::vector<WidthEstimate> width_profile(const ConvexBody& body, ConstSpan nu,
                                         const std::vector<double>& eps_grid,
                                         double t, double delta,
                                         std::uint64_t seed,
                                         long max_samples = 0);

// Cached width evaluations sharing one Gaussian pool: used wherever a theorem
// compares widths across centers and radii with common noise.
class CrnWidths {
 public:
  CrnWidths(ConvexBody body, double t, double delta, std::uint64_t seed,
            long max_samples = 20000);

  double eval(ConstSpan center, double eps);
  WidthEstimate estimate(ConstSpan center, double eps);
  const ConvexBody& body() const { return body_; }
  double precision() const { return t_; }
  std::uint64_t seed() const { return seed_; }

 private:
  const double* sample(long i) const { return pool_.data() + std::size_t(i) * n_; }
  void ensure_pool(long count);

  ConvexBody body_;
  int n_;
  double t_, delta_;
  std::uint64_t seed_;
  long max_samples_;
  std::vector<double> pool_;
  long pool_count_ = 0;
  std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace seqlab::widths
