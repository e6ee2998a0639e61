#pragma once

// Monte-Carlo risk of the LSE and the comparison estimators, plus the
// one-dimensional oracles (clamp quadrature, bisection-packing estimator).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seqlab/bodies.hpp"

namespace seqlab::risk {

using bodies::ConvexBody;

enum class Estimator { LSE, Identity, SubspaceProj, AxisProj, Clamp1D, Neykov1D };
std::string estimator_name(Estimator e);

struct RiskEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long replications = 0;
  Vec mu;
  double sigma = 0.0;
  Estimator estimator = Estimator::LSE;
  bool antithetic = false;
};

// E ||project(mu + sigma xi) - mu||^2 by Monte Carlo; antithetic +/-xi pairs
// on centrally symmetric bodies.
RiskEstimate lse_risk(const ConvexBody& body, ConstSpan mu, double sigma,
                      long reps, std::uint64_t seed);

std::pair<Vec, RiskEstimate> worst_case_risk(const ConvexBody& body,
                                             double sigma,
                                             const std::vector<Vec>& probes,
                                             long reps, std::uint64_t seed);

// proj_dir is the direction for SubspaceProj (e.g. the pyramid apex).
RiskEstimate alt_estimator_risk(const ConvexBody& body, Estimator estimator,
                                ConstSpan mu, double sigma, long reps,
                                std::uint64_t seed, ConstSpan proj_dir = {});

// Quadrature of E (clamp(mu + sigma Z, -a, a) - mu)^2 to ~1e-8 absolute.
double clamp_risk_1d(double a, double sigma, double mu);

// Bisection-packing estimator on [-a,a]: maximal packing of the shrinking
// interval, move to the packing point nearest y. |nu_k - clamp(y)| <= 2a/2^k.
double neykov_1d(double y, double a, double c, int iters);

}  // namespace seqlab::risk
