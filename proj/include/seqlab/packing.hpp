#pragma once

// Packing-set construction, local/global metric entropy estimates (certified
// lower bounds from explicit packings), the minimax fixed point, and the
// explicit staircase / lattice packing constructions.

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "seqlab/bodies.hpp"
#include "seqlab/bracket.hpp"

namespace seqlab::packing {

using bodies::ConvexBody;

struct PackingSet {
  std::vector<Vec> points;
  double spacing = 0.0;  // certified: all pairwise distances > spacing
  bool whole_body = true;
  Vec domain_center;
  double domain_radius = 0.0;
  long maximal_wrt = 0;  // candidate cloud size the greedy pass saw
  // Claimed-by-construction log-count (VG constructions); 0 otherwise.
  double log_count_claimed = 0.0;

  double log_count() const {
    return points.empty() ? 0.0 : std::log(double(points.size()));
  }
  // Re-validates membership and strict pairwise spacing (rounding guard 1e-12).
  void validate(const ConvexBody& body, double membership_tol) const;
};

// Order-preserving greedy pass; the output is maximal w.r.t. the cloud. A
// positive cap stops early once cap points are kept.
PackingSet greedy_packing(const std::vector<Vec>& candidates, double delta,
                          long cap = 0);

struct EntropyEstimate {
  double eps = 0.0;
  double log_count_lower = 0.0;  // certified by an explicit packing
  std::optional<double> log_count_upper;
  double c_star = 0.0;
  int probe_centers_used = 0;
  long count_lower = 1;
  bool capped = false;  // greedy stopped at the requested cap
};

struct EntropyBudget {
  int probe_budget = 8;
  long cloud_budget = 20000;
  long count_cap = 0;  // 0 = unlimited
};

EntropyEstimate local_entropy(const ConvexBody& body, double eps, double c_star,
                              int probe_budget, long cloud_budget,
                              std::uint64_t seed, long count_cap = 0);

EntropyEstimate global_entropy(const ConvexBody& body, double eps,
                               long cloud_budget, std::uint64_t seed,
                               long count_cap = 0);

// Rigorous closed-form upper bound on log M^loc(eps) (volumetric bound for
// every kind, plus kind-specific formulas where the source gives constants).
double local_entropy_upper(const ConvexBody& body, double eps, double c_star);

// (logM_fine - logM_coarse, logM_fine) with fine at eps/c*, coarse at eps.
std::pair<double, double> yang_barron_interval(double logM_fine,
                                               double logM_coarse);

// Memoized certified-lower evaluations with the nonincreasing envelope
// applied: any evaluation at eps' >= eps also lower-bounds log M^loc(eps).
class LocalEntropyEval {
 public:
  LocalEntropyEval(ConvexBody body, double c_star, EntropyBudget budget,
                   std::uint64_t seed);
  // needed: stop the greedy once exp(needed) points are found (0 = no cap).
  double lower(double eps, double needed = 0.0);
  double upper(double eps) const;
  const ConvexBody& body() const { return body_; }
  double c_star() const { return c_star_; }

 private:
  ConvexBody body_;
  double c_star_;
  EntropyBudget budget_;
  std::uint64_t seed_;
  // (eps, achieved log-count, capped)
  std::vector<std::tuple<double, double, bool>> evals_;
};

// Fixed point eps* = sup{eps : eps^2/sigma^2 <= C1 log M^loc(C2 eps)};
// bracket sides are already cut at the diameter. lower uses certified
// packings, upper the closed-form upper entropy.
RateBracket minimax_rate(const ConvexBody& body, double sigma, double c_star,
                         const EntropyBudget& budget, std::uint64_t seed,
                         double c1 = 1.0, double c2 = 1.0,
                         int bisect_iters = 40);

// Staircase packing of {a <= x_1 <= ... <= x_n <= b} at scale eps with
// greedy Hamming-separated block perturbations.
PackingSet isotonic_vg_packing(int n, double a, double b, double eps,
                               long enumeration_budget = (1L << 22));

// Lattice evaluations of monotone 0/1 indicator functions with sign patterns
// on the antichain diag cubes; eps_internal must be a dyadic 2^-m.
PackingSet multiiso_vg_packing(int p, int n, double eps_internal,
                               long enumeration_budget = (1L << 22));

// Number of antichain cubes (sum of indices == 2^m, each < 2^m).
long multiiso_antichain_size(int p, double eps_internal);

}  // namespace seqlab::packing
