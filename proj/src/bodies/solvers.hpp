#pragma once

// Internal projection solvers shared by the body kinds.

#include <functional>

#include "seqlab/linalg.hpp"
#include "seqlab/optim.hpp"

namespace seqlab::bodies::detail {

// Projection of y onto the simplex {x >= 0, sum x = r} / the l1 ball of
// radius r (sort based).
Vec project_l1_ball(ConstSpan y, double r);

// Projection onto {x : sum |x_i|^p <= r^p}, p in (1,2); dual Newton on the
// multiplier with bisection fallback.
Vec project_lp_ball(ConstSpan y, double p, double r);

// Projection onto {x : sum d_i^2 x_i^2 <= 1}; safeguarded Newton on the
// multiplier equation sum d_i^2 y_i^2 / (1 + lambda d_i^2)^2 = 1.
Vec project_ellipsoid(ConstSpan y, ConstSpan axes);

}  // namespace seqlab::bodies::detail
