#pragma once

#include <limits>
#include <string>

namespace seqlab {

// Rate quantities are carried on the epsilon scale (not squared); reports emit
// both. lower is always a certified side unless notes say otherwise.
enum class RateMethod {
  MinimaxStar,
  EpsilonMu,
  MainTheorem,
  RestrictedMainTheorem,
  WidthGlobal,
  ImportantThm,
  GeometricMean,
  CharA,
  CharB,
  CharC,
  LipschitzThm,
  LocalPackAlg,
  GlobalPackAlg,
  ClosedForm,
};

std::string rate_method_name(RateMethod m);

struct RateBracket {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  RateMethod method = RateMethod::ClosedForm;
  double sigma = 0.0;
  std::string notes;
  std::string closed_form_name;
  bool inconclusive = false;  // condition fell in a theorem's unhandled band
};

}  // namespace seqlab
