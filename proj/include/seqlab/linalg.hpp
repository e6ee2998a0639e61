#pragma once

// Thin vector helpers over the dispatched kernels.

#include <cmath>
#include <span>
#include <vector>

#include "seqlab/kernels.hpp"

namespace seqlab {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;

inline double dot(ConstSpan x, ConstSpan y) {
  return kernels::dot(x.data(), y.data(), x.size());
}

inline double squared_norm(ConstSpan x) {
  return kernels::squared_norm(x.data(), x.size());
}

inline double norm(ConstSpan x) { return std::sqrt(squared_norm(x)); }

inline double squared_distance(ConstSpan x, ConstSpan y) {
  return kernels::squared_distance(x.data(), y.data(), x.size());
}

inline double distance(ConstSpan x, ConstSpan y) {
  return std::sqrt(squared_distance(x, y));
}

inline double sum_abs(ConstSpan x) { return kernels::sum_abs(x.data(), x.size()); }

inline double max_abs(ConstSpan x) { return kernels::max_abs(x.data(), x.size()); }

inline Vec add(ConstSpan x, ConstSpan y) {
  Vec out(x.begin(), x.end());
  kernels::axpy(1.0, y.data(), out.data(), out.size());
  return out;
}

inline Vec sub(ConstSpan x, ConstSpan y) {
  Vec out(x.begin(), x.end());
  kernels::axpy(-1.0, y.data(), out.data(), out.size());
  return out;
}

inline Vec scaled(ConstSpan x, double a) {
  Vec out(x.begin(), x.end());
  kernels::scale(a, out.data(), out.size());
  return out;
}

// out = x + a*y
inline Vec add_scaled(ConstSpan x, double a, ConstSpan y) {
  Vec out(x.begin(), x.end());
  kernels::axpy(a, y.data(), out.data(), out.size());
  return out;
}

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

inline Vec basis_vector(std::size_t n, std::size_t i, double v = 1.0) {
  Vec out(n, 0.0);
  out[i] = v;
  return out;
}

inline double lp_norm(ConstSpan x, double p) {
  double acc = 0.0;
  for (const double v : x) acc += std::pow(std::fabs(v), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace seqlab
