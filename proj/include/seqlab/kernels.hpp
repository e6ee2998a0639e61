#pragma once

// Dense double-precision kernels used by the Monte-Carlo and packing inner
// loops. A scalar reference implementation always exists; an AVX2 variant is
// selected at runtime when the CPU supports it. The two are equivalence-tested
// in tests/test_kernels.cpp.

#include <cstddef>

namespace seqlab::kernels {

enum class Isa { Scalar, Avx2 };

// ISA picked at startup (overridable for tests / benchmarking).
Isa active_isa();
void force_isa(Isa isa);
bool avx2_available();

double dot(const double* x, const double* y, std::size_t n);
double squared_norm(const double* x, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_abs(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
// out_i = min(max(x_i, lo_i), hi_i)
void clamp(const double* x, const double* lo, const double* hi, double* out,
           std::size_t n);
void clamp_scalar(const double* x, double lo, double hi, double* out,
                  std::size_t n);

namespace detail::scalar {
double dot(const double* x, const double* y, std::size_t n);
double squared_norm(const double* x, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_abs(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
void clamp(const double* x, const double* lo, const double* hi, double* out,
           std::size_t n);
void clamp_scalar(const double* x, double lo, double hi, double* out,
                  std::size_t n);
}  // namespace detail::scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SEQLAB_HAVE_AVX2_BUILD 1
namespace detail::avx2 {
double dot(const double* x, const double* y, std::size_t n);
double squared_norm(const double* x, std::size_t n);
double squared_distance(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_abs(const double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
void clamp(const double* x, const double* lo, const double* hi, double* out,
           std::size_t n);
void clamp_scalar(const double* x, double lo, double hi, double* out,
                  std::size_t n);
}  // namespace detail::avx2
#else
#define SEQLAB_HAVE_AVX2_BUILD 0
#endif

}  // namespace seqlab::kernels
