#pragma once

// The two packing searches for the worst-case LSE rate on bounded bodies,
// with the bracket interpretations of their guarantee theorems.

#include <vector>

#include "seqlab/packing.hpp"
#include "seqlab/rates.hpp"

namespace seqlab::algorithms {

using rates::RateContext;

struct TraceRow {
  int level = 0;   // tree level / doubling index
  int node = 0;    // node id within the run
  double delta = 0.0;
  double psi = 0.0;
  double threshold = 0.0;
  int children = 0;
};

struct ChildrenDistanceResult {
  double gamma = 0.0;  // psi - threshold
  double psi = 0.0;
  double threshold = 0.0;
  double delta = 0.0;
  packing::PackingSet children;
};

// delta = d / (2^(k-1) c*); packs B(nu, delta c*) ∩ K at delta and compares
// the parent width at delta*c* with the smallest child width at delta.
ChildrenDistanceResult children_distance(RateContext& ctx, ConstSpan nu, int k);

enum class LocalPackStatus {
  Terminated,           // found a level with psi > threshold
  DepthExhaustedClean,  // ran max_depth complete levels, never positive
  DepthExhaustedBudget, // same, but node caps dropped children on the way
};

struct LocalPackResult {
  LocalPackStatus status = LocalPackStatus::DepthExhaustedClean;
  bool terminated = false;
  int level = 0;
  double beta = 0.0;  // d / (2^(k-1) c*) when terminated
  RateBracket bracket;
  std::vector<long> nodes_per_level;
  std::vector<TraceRow> trace;
};

LocalPackResult local_packing_algorithm(RateContext& ctx);

// sup{eps > 0 : C^2 eps^2/(4 sigma^2) <= (L/c*)^2 log M^loc(eps)}, evaluated
// against the certified entropy lower bound (C = 8 + 8/c*).
double underline_eps_star(RateContext& ctx);

struct GlobalPackResult {
  double eps = 0.0;
  bool terminated_on_init = false;
  int iterations = 0;
  std::vector<double> delta_history;
  RateBracket bracket;
  bool degraded = false;  // packing budget bound the maximal packing of K
  std::vector<TraceRow> trace;
};

GlobalPackResult global_packing_algorithm(RateContext& ctx);

}  // namespace seqlab::algorithms
