#include "seqlab/risk.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "seqlab/parallel.hpp"
#include "seqlab/rng.hpp"

namespace seqlab::risk {

using bodies::Kind;

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::LSE: return "lse";
    case Estimator::Identity: return "identity";
    case Estimator::SubspaceProj: return "subspace_proj";
    case Estimator::AxisProj: return "axis_proj";
    case Estimator::Clamp1D: return "clamp_1d";
    case Estimator::Neykov1D: return "neykov_1d";
  }
  return "lse";
}

namespace {

struct McAccumulator {
  double mean = 0.0;
  double std_error = 0.0;
  long replications = 0;
};

template <typename LossFn>
McAccumulator run_mc(const LossFn& loss, long reps, bool antithetic) {
  // loss(i, sign) evaluates one draw; antithetic averages the +/- pair.
  const long groups = antithetic ? reps / 2 : reps;
  std::vector<double> values(groups, 0.0);
  std::exception_ptr failure;
  std::mutex failure_mu;
  parallel_for(0, static_cast<std::size_t>(groups), [&](std::size_t i) {
    try {
      if (antithetic) {
        values[i] = 0.5 * (loss(i, +1.0) + loss(i, -1.0));
      } else {
        values[i] = loss(i, +1.0);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  McAccumulator acc;
  acc.replications = antithetic ? groups * 2 : groups;
  acc.mean = kernels::sum(values.data(), values.size()) / double(groups);
  double ss = 0.0;
  for (const double v : values) ss += (v - acc.mean) * (v - acc.mean);
  const double var = groups > 1 ? ss / double(groups - 1) : 0.0;
  acc.std_error = std::sqrt(var / double(groups));
  return acc;
}

}  // namespace

RiskEstimate lse_risk(const ConvexBody& body, ConstSpan mu, double sigma,
                      long reps, std::uint64_t seed) {
  if (reps < 100) throw InvalidConfigError("risk estimates need reps >= 100");
  if (!body.contains(mu, 1e-6 * std::max(1.0, body.scale_hint())))
    throw InvalidSpecError("risk center must lie in the body");
  const int n = body.dim();
  const bool anti = body.centrally_symmetric();
  auto loss = [&](std::size_t i, double sign) {
    Rng rng(seed, i);
    Vec y(n);
    rng.fill_gaussian(y.data(), n);
    for (int d = 0; d < n; ++d) y[d] = mu[d] + sign * sigma * y[d];
    const Vec fit = body.project(y);
    return squared_distance(fit, mu);
  };
  const auto acc = run_mc(loss, reps, anti);
  RiskEstimate est;
  est.mean = acc.mean;
  est.std_error = acc.std_error;
  est.replications = acc.replications;
  est.mu.assign(mu.begin(), mu.end());
  est.sigma = sigma;
  est.estimator = Estimator::LSE;
  est.antithetic = anti;
  return est;
}

std::pair<Vec, RiskEstimate> worst_case_risk(const ConvexBody& body,
                                             double sigma,
                                             const std::vector<Vec>& probes,
                                             long reps, std::uint64_t seed) {
  if (probes.empty()) throw InvalidConfigError("worst_case_risk needs probes");
  RiskEstimate best;
  Vec argmax;
  bool first = true;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    auto est = lse_risk(body, probes[i], sigma, reps, seed + i);
    if (first || est.mean > best.mean) {
      best = std::move(est);
      argmax = probes[i];
      first = false;
    }
  }
  return {std::move(argmax), std::move(best)};
}

RiskEstimate alt_estimator_risk(const ConvexBody& body, Estimator estimator,
                                ConstSpan mu, double sigma, long reps,
                                std::uint64_t seed, ConstSpan proj_dir) {
  if (reps < 100) throw InvalidConfigError("risk estimates need reps >= 100");
  const int n = body.dim();
  const auto& spec = body.spec();
  Vec dir;
  switch (estimator) {
    case Estimator::LSE:
      return lse_risk(body, mu, sigma, reps, seed);
    case Estimator::Identity:
      break;
    case Estimator::SubspaceProj: {
      if (!proj_dir.empty()) {
        dir.assign(proj_dir.begin(), proj_dir.end());
      } else if (spec.kind == Kind::Pyramid) {
        dir = spec.apex;
      } else {
        throw UnsupportedEstimatorError(
            "subspace projection estimator needs a direction");
      }
      const double dn = norm(dir);
      if (!(dn > 0)) throw UnsupportedEstimatorError("zero projection direction");
      kernels::scale(1.0 / dn, dir.data(), dir.size());
      break;
    }
    case Estimator::AxisProj:
      if (spec.kind != Kind::SolidOfRevolution && n < 1)
        throw UnsupportedEstimatorError("axis projection needs a first axis");
      break;
    case Estimator::Clamp1D:
    case Estimator::Neykov1D:
      if (n != 1 || spec.kind != Kind::HyperRectangle)
        throw UnsupportedEstimatorError(
            "one-dimensional estimators need HyperRectangle(n=1)");
      break;
  }

  const bool anti = body.centrally_symmetric();
  auto loss = [&](std::size_t i, double sign) {
    Rng rng(seed, i);
    Vec y(n);
    rng.fill_gaussian(y.data(), n);
    for (int d = 0; d < n; ++d) y[d] = mu[d] + sign * sigma * y[d];
    Vec fit;
    switch (estimator) {
      case Estimator::Identity:
        fit = y;
        break;
      case Estimator::SubspaceProj: {
        const double c = dot(dir, y);
        fit = scaled(dir, c);
        break;
      }
      case Estimator::AxisProj: {
        fit.assign(n, 0.0);
        fit[0] = y[0];
        break;
      }
      case Estimator::Clamp1D: {
        fit.assign(1, std::clamp(y[0], -spec.half_widths[0], spec.half_widths[0]));
        break;
      }
      case Estimator::Neykov1D: {
        fit.assign(1, neykov_1d(y[0], spec.half_widths[0], 5.0, 40));
        break;
      }
      case Estimator::LSE:
        break;  // handled above
    }
    return squared_distance(fit, mu);
  };
  const auto acc = run_mc(loss, reps, anti);
  RiskEstimate est;
  est.mean = acc.mean;
  est.std_error = acc.std_error;
  est.replications = acc.replications;
  est.mu.assign(mu.begin(), mu.end());
  est.sigma = sigma;
  est.estimator = estimator;
  est.antithetic = anti;
  return est;
}

namespace {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double simpson(double a, double b, const std::function<double(double)>& f) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

double adaptive(double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth, const std::function<double(double)>& f) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, f) +
         adaptive(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, f);
}

}  // namespace

double clamp_risk_1d(double a, double sigma, double mu) {
  if (std::fabs(mu) > a) throw InvalidConfigError("clamp oracle needs |mu| <= a");
  if (!(sigma > 0)) return 0.0;
  auto f = [&](double z) {
    const double fit = std::clamp(mu + sigma * z, -a, a);
    return (fit - mu) * (fit - mu) * normal_pdf(z);
  };
  // Composite panels seed the adaptive pass; a single coarse Simpson start
  // can miss the concentrated mass entirely when sigma is small.
  const int panels = 48;
  const double lo = -12.0, hi = 12.0;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double p0 = lo + (hi - lo) * i / panels;
    const double p1 = lo + (hi - lo) * (i + 1) / panels;
    const double fa = f(p0), fb = f(p1), fm = f(0.5 * (p0 + p1));
    acc += adaptive(p0, p1, fa, fm, fb, simpson(p0, p1, f), 1e-9 / panels, 36, f);
  }
  return acc;
}

double neykov_1d(double y, double a, double c, int iters) {
  if (!(a > 0)) throw InvalidConfigError("neykov_1d needs a > 0");
  if (!(c > 2)) throw InvalidConfigError("neykov_1d needs c > 2");
  const double d = 2.0 * a;
  double nu = 0.0;
  for (int k = 0; k < iters; ++k) {
    const double radius = d / std::ldexp(1.0, k);
    const double lo = std::max(-a, nu - radius);
    const double hi = std::min(a, nu + radius);
    const double delta = radius / c;
    // Maximal packing of [lo, hi]: equispaced with spacing in (delta, 2*delta].
    double best = 0.5 * (lo + hi);
    if (hi - lo > delta) {
      long m = static_cast<long>(std::floor((hi - lo) / delta));
      if (m * delta >= (hi - lo) - 1e-15 * (hi - lo)) --m;
      m = std::max<long>(1, m);
      const double s = (hi - lo) / double(m);
      // Nearest grid point lo + j*s to y.
      long j = std::llround((y - lo) / s);
      j = std::clamp<long>(j, 0, m);
      best = lo + double(j) * s;
    }
    nu = best;
  }
  return nu;
}

}  // namespace seqlab::risk
