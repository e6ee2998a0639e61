#pragma once

#include <functional>

namespace seqlab {

// Golden-section minimization of a unimodal function on [lo, hi]; endpoints
// are also candidates so monotone objectives resolve to a boundary.
double golden_section_min(double lo, double hi, double tol,
                          const std::function<double(double)>& f);

}  // namespace seqlab
