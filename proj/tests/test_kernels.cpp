#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "seqlab/kernels.hpp"
#include "seqlab/rng.hpp"

using namespace seqlab;
namespace ks = seqlab::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.gaussian() * (1.0 + rng.uniform());
  return v;
}

const std::vector<std::size_t> kSizes = {1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 33, 64, 100, 1000};

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
  if (!ks::avx2_available()) {
    MESSAGE("no AVX2 on this host; scalar-only build exercised");
    return;
  }
  namespace sc = ks::detail::scalar;
  namespace vx = ks::detail::avx2;
  for (const auto n : kSizes) {
    const auto x = random_vec(n, 11 * n + 1);
    const auto y = random_vec(n, 13 * n + 5);
    const double scale = 1.0 + sc::sum_abs(x.data(), n) + sc::sum_abs(y.data(), n);
    const double tol = 1e-10 * scale;
    CHECK(std::fabs(sc::dot(x.data(), y.data(), n) - vx::dot(x.data(), y.data(), n)) <= tol);
    CHECK(std::fabs(sc::squared_norm(x.data(), n) - vx::squared_norm(x.data(), n)) <= tol);
    CHECK(std::fabs(sc::squared_distance(x.data(), y.data(), n) -
                    vx::squared_distance(x.data(), y.data(), n)) <= tol);
    CHECK(std::fabs(sc::sum(x.data(), n) - vx::sum(x.data(), n)) <= tol);
    CHECK(std::fabs(sc::sum_abs(x.data(), n) - vx::sum_abs(x.data(), n)) <= tol);
    CHECK(sc::max_abs(x.data(), n) == vx::max_abs(x.data(), n));

    auto y1 = y, y2 = y;
    sc::axpy(0.37, x.data(), y1.data(), n);
    vx::axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-12));

    auto x1 = x, x2 = x;
    sc::scale(-1.75, x1.data(), n);
    vx::scale(-1.75, x2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(x1[i] == x2[i]);

    std::vector<double> lo(n, -0.5), hi(n, 0.9), o1(n), o2(n);
    sc::clamp(x.data(), lo.data(), hi.data(), o1.data(), n);
    vx::clamp(x.data(), lo.data(), hi.data(), o2.data(), n);
    CHECK(o1 == o2);
    sc::clamp_scalar(x.data(), -0.2, 0.4, o1.data(), n);
    vx::clamp_scalar(x.data(), -0.2, 0.4, o2.data(), n);
    CHECK(o1 == o2);
  }
}

TEST_CASE("dispatch selects a working implementation") {
  const auto x = random_vec(37, 3);
  const double direct = ks::detail::scalar::squared_norm(x.data(), x.size());
  CHECK(ks::squared_norm(x.data(), x.size()) == doctest::Approx(direct).epsilon(1e-12));
  const ks::Isa original = ks::active_isa();
  ks::force_isa(ks::Isa::Scalar);
  CHECK(ks::squared_norm(x.data(), x.size()) == direct);
  ks::force_isa(original);
}

TEST_CASE("counter rng is stream independent") {
  Rng a(42, 7), b(42, 7), c(42, 8);
  CHECK(a.gaussian() == b.gaussian());
  CHECK(a.next_u64() == b.next_u64());
  CHECK(Rng(42, 7).uniform() != Rng(43, 7).uniform());
  (void)c;
}
