#include "solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "seqlab/errors.hpp"

namespace seqlab::bodies::detail {

Vec project_l1_ball(ConstSpan y, double r) {
  const std::size_t n = y.size();
  if (sum_abs(y) <= r) return Vec(y.begin(), y.end());
  Vec w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::fabs(y[i]);
  Vec sorted = w;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumsum += sorted[j];
    const double cand = (cumsum - r) / static_cast<double>(j + 1);
    if (sorted[j] - cand > 0.0) tau = cand;
  }
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::max(w[i] - tau, 0.0);
    out[i] = y[i] < 0 ? -m : m;
  }
  return out;
}

namespace {

// Root of x + lambda*p*x^(p-1) = z on (0, z], increasing lhs.
double lp_coordinate(double z, double lambda, double p) {
  if (z <= 0.0) return 0.0;
  double lo = 0.0, hi = z;
  double x = 0.5 * z;
  for (int it = 0; it < 200; ++it) {
    const double xp1 = std::pow(x, p - 1.0);
    const double g = x + lambda * p * xp1 - z;
    if (g > 0)
      hi = x;
    else
      lo = x;
    const double dg = 1.0 + lambda * p * (p - 1.0) * std::pow(x, p - 2.0);
    double nx = x - g / dg;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::fabs(nx - x) <= 1e-15 * (1.0 + x)) {
      x = nx;
      break;
    }
    x = nx;
  }
  return x;
}

}  // namespace

Vec project_lp_ball(ConstSpan y, double p, double r) {
  const std::size_t n = y.size();
  double pow_sum = 0.0;
  for (const double v : y) pow_sum += std::pow(std::fabs(v), p);
  if (pow_sum <= std::pow(r, p)) return Vec(y.begin(), y.end());

  Vec z(n), x(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::fabs(y[i]);
  const double target = std::pow(r, p);
  // g(lambda) = sum x_i(lambda)^p - r^p with its exact derivative; x_i solves
  // x + lambda p x^(p-1) = z_i.
  auto eval = [&](double lambda, double& g, double& dg) {
    g = -target;
    dg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = lp_coordinate(z[i], lambda, p);
      if (x[i] <= 0.0) continue;
      const double xp1 = std::pow(x[i], p - 1.0);
      g += xp1 * x[i];
      const double dxdl = -p * xp1 / (1.0 + lambda * p * (p - 1.0) * std::pow(x[i], p - 2.0));
      dg += p * xp1 * dxdl;
    }
  };

  double g, dg;
  double lo = 0.0, hi = 1.0;
  eval(hi, g, dg);
  while (g > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18)
      throw NonConvergenceError("lp projection multiplier bracket", 64, hi);
    eval(hi, g, dg);
  }
  // Dual Newton inside the bracket, bisection fallback.
  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    eval(lambda, g, dg);
    if (std::fabs(g) <= 1e-12 * target || hi - lo <= 1e-15 * (1.0 + lambda))
      break;
    if (g > 0)
      lo = lambda;
    else
      hi = lambda;
    double next = dg != 0.0 ? lambda - g / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    lambda = next;
  }
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = lp_coordinate(z[i], lambda, p);
    out[i] = y[i] < 0 ? -m : m;
  }
  return out;
}

Vec project_ellipsoid(ConstSpan y, ConstSpan axes) {
  const std::size_t n = y.size();
  double level = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = axes[i] * y[i];
    level += t * t;
  }
  if (level <= 1.0) return Vec(y.begin(), y.end());

  auto phi = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = axes[i] * axes[i];
      const double t = axes[i] * y[i] / (1.0 + lambda * d2);
      s += t * t;
    }
    return s - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  while (phi(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18)
      throw NonConvergenceError("ellipsoid projection bracket", 64, hi);
  }
  double lambda = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = phi(lambda);
    if (g > 0)
      lo = lambda;
    else
      hi = lambda;
    // Newton step on phi, safeguarded by the bracket.
    double dg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = axes[i] * axes[i];
      const double denom = 1.0 + lambda * d2;
      dg += -2.0 * d2 * (axes[i] * y[i]) * (axes[i] * y[i]) /
            (denom * denom * denom);
    }
    double next = lambda - g / dg;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - lambda) <= 1e-16 * (1.0 + lambda)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] / (1.0 + lambda * axes[i] * axes[i]);
  return out;
}

}  // namespace seqlab::bodies::detail

namespace seqlab {

double golden_section_min(double lo, double hi, double tol,
                          const std::function<double(double)>& f) {
  constexpr double inv_phi = 0.6180339887498948482;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  const double mid = 0.5 * (a + b);
  // Endpoints can win on functions that are monotone over [lo, hi].
  double best = mid, fb = f(mid);
  for (const double c : {lo, hi}) {
    const double fc = f(c);
    if (fc < fb) {
      fb = fc;
      best = c;
    }
  }
  return best;
}

}  // namespace seqlab
