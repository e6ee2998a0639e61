#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "seqlab/lattice.hpp"
#include "seqlab/packing.hpp"

using namespace seqlab;
using namespace seqlab::bodies;
using namespace seqlab::packing;

TEST_CASE("greedy packing walks in candidate order") {
  std::vector<Vec> line = {{0.0}, {0.5}, {1.0}, {1.5}};
  const auto pack = greedy_packing(line, 0.6);
  REQUIRE(pack.points.size() == 2);
  CHECK(pack.points[0][0] == 0.0);
  CHECK(pack.points[1][0] == 1.0);

  const auto one = greedy_packing(line, 10.0);
  CHECK(one.points.size() == 1);

  // Dense grid on [-1, 1] at strict spacing 0.5: brute force says 4.
  std::vector<Vec> grid;
  for (int i = 0; i <= 2000; ++i) grid.push_back({-1.0 + 0.001 * i});
  const auto packed = greedy_packing(grid, 0.5);
  CHECK(long(packed.points.size()) == oracles::interval_max_packing(2.0, 0.5));
  CHECK(packed.points.size() == 4);
}

TEST_CASE("packing validation re-checks membership and spacing") {
  auto ball = ConvexBody::make(BodySpec::l2_ball(2, 1.0));
  PackingSet ok;
  ok.points = {{0.0, 0.0}, {0.9, 0.0}};
  ok.spacing = 0.5;
  CHECK_NOTHROW(ok.validate(ball, 1e-9));
  PackingSet bad_spacing = ok;
  bad_spacing.spacing = 0.95;
  CHECK_THROWS_AS(bad_spacing.validate(ball, 1e-9), InvalidSpecError);
  PackingSet escape = ok;
  escape.points.push_back({2.0, 0.0});
  CHECK_THROWS_AS(escape.validate(ball, 1e-9), InvalidSpecError);
}

TEST_CASE("yang-barron interval") {
  const auto [lo, hi] = yang_barron_interval(5.0, 2.0);
  CHECK(lo == 3.0);
  CHECK(hi == 5.0);
  const auto [lo2, hi2] = yang_barron_interval(2.0, 2.0);
  CHECK(lo2 == 0.0);
  CHECK(hi2 == 2.0);
  CHECK_THROWS_AS(yang_barron_interval(1.0, 2.0), OrderViolationError);
}

TEST_CASE("local entropy lower bounds") {
  auto single = ConvexBody::make(BodySpec::singleton(Vec{1.0, 1.0}));
  CHECK(local_entropy(single, 0.5, 5.0, 2, 100, 1).log_count_lower == 0.0);

  // Volumetric growth on the ball: >= 0.3 n at eps = 0.5, c* = 5.
  auto ball = ConvexBody::make(BodySpec::l2_ball(8, 1.0));
  const auto est = local_entropy(ball, 0.5, 5.0, 4, 100000, 7);
  CHECK(est.log_count_lower >= 0.3 * 8);
  CHECK(est.log_count_upper.has_value());
  CHECK(est.log_count_lower <= *est.log_count_upper + 1e-9);

  // An interval of half-width a packs two points at eps <= a.
  auto seg = ConvexBody::make(BodySpec::hyper_rectangle({1.0}));
  CHECK(local_entropy(seg, 0.9, 5.0, 3, 2000, 3).count_lower >= 2);

  // l1 ball at eps below 1/sqrt(n): dimension-order entropy.
  auto l1 = ConvexBody::make(BodySpec::l1_ball(16, 1.0));
  const double eps = 0.5 / std::sqrt(16.0);
  CHECK(local_entropy(l1, eps, 5.0, 4, 100000, 11).log_count_lower >= 0.2 * 16);
}

TEST_CASE("global entropy and the nonincreasing envelope") {
  auto box = ConvexBody::make(BodySpec::hyper_rectangle({1.0, 1.0}));
  const auto g = global_entropy(box, 0.9, 20000, 5);
  CHECK(g.count_lower >= 4);  // the four vertices are pairwise >= 2 apart
  CHECK_THROWS_AS(global_entropy(ConvexBody::make(BodySpec::full_space(2)), 1.0,
                                 100, 1),
                  UnboundedBodyError);

  LocalEntropyEval eval(box, 5.0, EntropyBudget{4, 4000, 0}, 3);
  const double hi = eval.lower(1.0);
  const double lo_env = eval.lower(0.25);
  CHECK(lo_env >= hi - 1e-12);  // envelope keeps the certified monotonicity
}

TEST_CASE("minimax fixed point brackets") {
  auto single = ConvexBody::make(BodySpec::singleton(Vec{0.0, 0.0}));
  const auto bs = minimax_rate(single, 0.3, 5.0, EntropyBudget{2, 200, 0}, 1);
  CHECK(bs.lower == 0.0);
  CHECK(bs.upper == 0.0);

  auto ball = ConvexBody::make(BodySpec::l2_ball(10, 1.0));
  const auto bb = minimax_rate(ball, 0.1, 5.0, EntropyBudget{4, 20000, 0}, 5, 1.0,
                               1.0, 24);
  // Squared bracket must intersect [min(1, n sigma^2)/10, 10 min(1, n sigma^2)].
  const double target = std::min(1.0, 10 * 0.01);
  CHECK(bb.lower * bb.lower <= 10.0 * target);
  CHECK(bb.upper * bb.upper >= target / 10.0);
  CHECK(bb.lower <= bb.upper);

  // Interval [-a, a]: eps*^2 within a factor band of min(a^2, sigma^2).
  auto seg = ConvexBody::make(BodySpec::hyper_rectangle({0.5}));
  for (const double sigma : {0.05, 1.0}) {
    const auto b = minimax_rate(seg, sigma, 5.0, EntropyBudget{3, 4000, 0}, 2);
    const double want = std::min(0.25, sigma * sigma);
    CHECK(b.upper * b.upper >= want / 10.0);
    CHECK(b.lower * b.lower <= 10.0 * want);
  }

  CHECK_THROWS_AS(minimax_rate(ConvexBody::make(BodySpec::full_space(3)), 1.0,
                               5.0, EntropyBudget{2, 100, 0}, 1),
                  UnboundedBodyError);
}

TEST_CASE("staircase packing construction") {
  const int n = 64;
  const auto pack = isotonic_vg_packing(n, 0.0, 1.0, 1.0);
  REQUIRE(pack.points.size() >= 2);
  auto body = ConvexBody::make(BodySpec::isotonic_box(n, 0.0, 1.0));
  pack.validate(body, 1e-9);
  CHECK(pack.log_count() >= pack.log_count_claimed);

  // Pairwise floor from the construction: k (eps/sqrt n)^2 (n/k - 2)/8.
  const long k = std::llround(1.0 * std::sqrt(double(n)) / 1.0);
  const double floor_sq =
      k * std::pow(1.0 / std::sqrt(double(n)), 2) * (double(n) / k - 2.0) / 8.0;
  for (std::size_t i = 0; i < pack.points.size(); ++i)
    for (std::size_t j = i + 1; j < pack.points.size(); ++j)
      CHECK(squared_distance(pack.points[i], pack.points[j]) >=
            floor_sq * (1.0 - 1e-9));

  CHECK(isotonic_vg_packing(16, 0.5, 0.5, 1.0).points.size() == 1);
  CHECK_THROWS_AS(isotonic_vg_packing(64, 0.0, 1.0, 0.01), RegimeViolationError);
}

TEST_CASE("lattice packing construction") {
  const int p = 2, n = 256;
  const double eps = 0.25;
  const auto pack = multiiso_vg_packing(p, n, eps);
  auto body = ConvexBody::make(BodySpec::multi_isotonic(p, n, 0.0, 1.0));
  pack.validate(body, 1e-9);
  // Monotone against every lattice order pair.
  const auto grid = lattice::Grid::make(p, n);
  for (const auto& mu : pack.points)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (grid.leq(a, b)) CHECK(mu[a] <= mu[b] + 1e-12);

  // Antichain count obeys the weak-composition bounds (cap excluded tuples
  // restored by adding p).
  const long a_size = multiiso_antichain_size(p, eps);
  const double inv = 1.0 / eps;
  CHECK(a_size + p >= std::pow(inv, p - 1) / std::pow(p - 1.0, p - 1.0));
  double fact = 1.0;
  for (int i = 2; i <= p - 1; ++i) fact *= i;
  CHECK(a_size + p <= std::pow(inv, p - 1) * std::pow(double(p), p - 1.0) / fact);

  CHECK(double(pack.points.size()) >=
        std::exp(pack.log_count_claimed) * (1.0 - 1e-12));

  CHECK(multiiso_vg_packing(2, 256, 1.0).points.size() == 1);
  CHECK_THROWS_AS(multiiso_vg_packing(2, 256, 0.3), RegimeViolationError);
  CHECK_THROWS_AS(multiiso_vg_packing(2, 256, 1.0 / 32), RegimeViolationError);
}
