#pragma once

// Test-only oracles, independent of the implementation paths they check:
// brute-force grid projection, analytic Gaussian moments, closed-form clamp
// risk, and a tiny deterministic RNG wrapper for query generation.

#include <cmath>
#include <vector>

#include "seqlab/bodies.hpp"
#include "seqlab/rng.hpp"

namespace oracles {

using seqlab::ConstSpan;
using seqlab::Vec;
using seqlab::bodies::ConvexBody;

// E ||g_n|| = sqrt(2) Gamma((n+1)/2) / Gamma(n/2).
inline double gaussian_norm_mean(int n) {
  return std::sqrt(2.0) *
         std::exp(std::lgamma((n + 1) / 2.0) - std::lgamma(n / 2.0));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

// Closed form for E (clamp(mu + sigma Z, -a, a) - mu)^2: the independent
// second route against the adaptive quadrature.
inline double clamp_risk_closed_form(double a, double sigma, double mu) {
  if (sigma <= 0) return 0.0;
  const double alpha = (-a - mu) / sigma;
  const double beta = (a - mu) / sigma;
  const double left = (a + mu) * (a + mu) * normal_cdf(alpha);
  const double right = (a - mu) * (a - mu) * (1.0 - normal_cdf(beta));
  const double mid =
      sigma * sigma *
      (normal_cdf(beta) - normal_cdf(alpha) -
       (beta * normal_pdf(beta) - alpha * normal_pdf(alpha)));
  return left + right + mid;
}

// Brute-force grid projection oracle. Scans feasible grid points of spacing h
// inside [lo_i, hi_i]; the scan is pruned to the cube of radius
// ||y - candidate|| + slack around y, which cannot exclude any grid point
// closer to y than the candidate.
struct GridProjector {
  const ConvexBody& body;
  Vec lo, hi;
  double h;
  double feas_tol;

  GridProjector(const ConvexBody& b, Vec lo_, Vec hi_, double h_)
      : body(b), lo(std::move(lo_)), hi(std::move(hi_)), h(h_), feas_tol(h_) {}

  // Smallest distance from y to a feasible grid point with ||y-g|| <= reach.
  double feasible_min_distance(ConstSpan y, double reach) const {
    const int n = body.dim();
    std::vector<long> idx_lo(n), idx_hi(n), idx(n);
    for (int d = 0; d < n; ++d) {
      const double a = std::max(lo[d], y[d] - reach);
      const double b = std::min(hi[d], y[d] + reach);
      idx_lo[d] = static_cast<long>(std::ceil((a - lo[d]) / h - 1e-12));
      idx_hi[d] = static_cast<long>(std::floor((b - lo[d]) / h + 1e-12));
      if (idx_lo[d] > idx_hi[d]) return std::numeric_limits<double>::infinity();
      idx[d] = idx_lo[d];
    }
    Vec g(n);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
      for (int d = 0; d < n; ++d) g[d] = lo[d] + h * idx[d];
      const double dist2 = seqlab::squared_distance(y, g);
      if (dist2 < best * best && body.contains(g, feas_tol)) {
        best = std::sqrt(dist2);
      }
      int d = 0;
      for (; d < n; ++d) {
        if (++idx[d] <= idx_hi[d]) break;
        idx[d] = idx_lo[d];
      }
      if (d == n) break;
    }
    return best;
  }
};

// Max packing of an interval with strict spacing, by direct reasoning:
// floor(length/delta) + 1 points fit iff spacing can exceed delta.
inline long interval_max_packing(double length, double delta) {
  long count = static_cast<long>(std::floor(length / delta)) + 1;
  if (std::fabs(length - delta * (count - 1)) < 1e-12 * std::max(1.0, length))
    --count;  // endpoints exactly delta apart violate the strict inequality
  return count;
}

}  // namespace oracles
