#include "seqlab/kernels.hpp"

namespace seqlab::kernels {

namespace {

Isa detect() {
#if SEQLAB_HAVE_AVX2_BUILD
#if defined(__GNUC__) || defined(__clang__)
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
#endif
  return Isa::Scalar;
}

Isa g_isa = detect();

}  // namespace

Isa active_isa() { return g_isa; }

bool avx2_available() {
#if SEQLAB_HAVE_AVX2_BUILD
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") != 0;
#endif
#endif
  return false;
}

void force_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) return;
  g_isa = isa;
}

#if SEQLAB_HAVE_AVX2_BUILD
#define SEQLAB_DISPATCH(fn, ...)                          \
  (g_isa == Isa::Avx2 ? detail::avx2::fn(__VA_ARGS__)     \
                      : detail::scalar::fn(__VA_ARGS__))
#else
#define SEQLAB_DISPATCH(fn, ...) detail::scalar::fn(__VA_ARGS__)
#endif

double dot(const double* x, const double* y, std::size_t n) {
  return SEQLAB_DISPATCH(dot, x, y, n);
}
double squared_norm(const double* x, std::size_t n) {
  return SEQLAB_DISPATCH(squared_norm, x, n);
}
double squared_distance(const double* x, const double* y, std::size_t n) {
  return SEQLAB_DISPATCH(squared_distance, x, y, n);
}
double sum(const double* x, std::size_t n) { return SEQLAB_DISPATCH(sum, x, n); }
double sum_abs(const double* x, std::size_t n) {
  return SEQLAB_DISPATCH(sum_abs, x, n);
}
double max_abs(const double* x, std::size_t n) {
  return SEQLAB_DISPATCH(max_abs, x, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
  SEQLAB_DISPATCH(axpy, a, x, y, n);
}
void scale(double a, double* x, std::size_t n) { SEQLAB_DISPATCH(scale, a, x, n); }
void clamp(const double* x, const double* lo, const double* hi, double* out,
           std::size_t n) {
  SEQLAB_DISPATCH(clamp, x, lo, hi, out, n);
}
void clamp_scalar(const double* x, double lo, double hi, double* out,
                  std::size_t n) {
  SEQLAB_DISPATCH(clamp_scalar, x, lo, hi, out, n);
}

#undef SEQLAB_DISPATCH

}  // namespace seqlab::kernels
