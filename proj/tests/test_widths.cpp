#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "seqlab/widths.hpp"

using namespace seqlab;
using namespace seqlab::bodies;
using namespace seqlab::widths;

TEST_CASE("mc_sample_count formula") {
  CHECK(mc_sample_count(1.0, 0.1, 0.01) == 1060);
  CHECK(mc_sample_count(0.5, 0.05, 0.05) == 738);
  CHECK(mc_sample_count(0.0, 0.1, 0.1) == 1);
  CHECK_THROWS_AS(mc_sample_count(1.0, 0.0, 0.1), InvalidPrecisionError);
  CHECK_THROWS_AS(mc_sample_count(1.0, 0.1, 1.5), InvalidPrecisionError);
}

TEST_CASE("linear_max closed cases") {
  auto box = ConvexBody::make(BodySpec::hyper_rectangle({1.0, 1.0}));
  Vec origin = {0.0, 0.0};
  // Ball swallows the box: support function of the box.
  auto lm = linear_max(box, origin, 10.0, Vec{1.0, 0.0});
  CHECK(lm.value == doctest::Approx(1.0).epsilon(1e-6));

  auto full = ConvexBody::make(BodySpec::full_space(3));
  Vec xi = {1.0, 2.0, -2.0};
  auto lf = linear_max(full, Vec(3, 0.0), 1.0, xi);
  CHECK(lf.value == doctest::Approx(3.0));
  CHECK(norm(lf.maximizer) == doctest::Approx(1.0));

  // Quarter-plane box [0,1]^2 through the ordered box body; max of <(1,1), .>
  // over the unit ball intersection is sqrt(2) at (s,s).
  auto quad = ConvexBody::make(BodySpec::isotonic_box(2, 0.0, 1.0));
  auto lq = linear_max(quad, Vec(2, 0.0), 1.0, Vec{1.0, 1.0}, 1e-5);
  CHECK(lq.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));

  auto single = ConvexBody::make(BodySpec::singleton(Vec{0.5, 0.5}));
  CHECK(linear_max(single, Vec{0.5, 0.5}, 1.0, Vec{3.0, -1.0}).value == 0.0);
}

TEST_CASE("local width calibration") {
  auto single = ConvexBody::make(BodySpec::singleton(Vec{1.0, 2.0}));
  CHECK(local_width(single, Vec{1.0, 2.0}, 0.7, 0.05, 0.05, 1).value == 0.0);

  auto full2 = ConvexBody::make(BodySpec::full_space(2));
  const auto w2 = local_width(full2, Vec(2, 0.0), 1.0, 0.05, 0.01, 12);
  CHECK(std::fabs(w2.value - std::sqrt(M_PI / 2.0)) <= 0.1);

  auto box = ConvexBody::make(BodySpec::hyper_rectangle({1.0, 1.0}));
  const auto wb = local_width(box, Vec(2, 0.0), 4.0, 0.05, 0.01, 5);
  CHECK(std::fabs(wb.value - 2.0 * std::sqrt(2.0 / M_PI)) <= 0.1);
}

TEST_CASE("width profile: CRN, monotone smoothing") {
  auto single = ConvexBody::make(BodySpec::singleton(Vec{0.0, 0.0}));
  for (const auto& w :
       width_profile(single, Vec(2, 0.0), {0.1, 0.5, 1.0}, 0.05, 0.05, 3))
    CHECK(w.value == 0.0);

  auto full = ConvexBody::make(BodySpec::full_space(4));
  std::vector<double> grid;
  for (int i = 1; i <= 8; ++i) grid.push_back(0.25 * i);
  const auto profile = width_profile(full, Vec(4, 0.0), grid, 0.05, 0.05, 9);
  const double c4 = oracles::gaussian_norm_mean(4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::fabs(profile[i].value - grid[i] * c4) <= 3 * 0.05 * (1 + grid[i]));
    if (i) CHECK(profile[i].value >= profile[i - 1].value - 1e-12);
  }
  CHECK_THROWS_AS(width_profile(full, Vec(4, 0.0), {1.0, 0.5}, 0.05, 0.05, 1),
                  InvalidPrecisionError);
}

TEST_CASE("width invariants on the ball") {
  auto ball = ConvexBody::make(BodySpec::l2_ball(4, 1.0));
  const double t = 0.04;
  CrnWidths crn(ball, t, 0.05, 21);
  Vec center(4, 0.0);
  Vec edge = {0.9, 0, 0, 0};

  // slope eps -> w/eps nonincreasing within tolerance
  double prev_slope = 1e300;
  for (const double eps : {0.2, 0.4, 0.8, 1.6}) {
    const double w = crn.eval(center, eps);
    const double slope = w / eps;
    CHECK(slope <= prev_slope + 3 * t / eps);
    prev_slope = slope;
  }

  // concavity in the center along a segment
  const double eps = 0.5;
  Vec mid = scaled(add(center, edge), 0.5);
  const double w_mid = crn.eval(mid, eps);
  const double w_a = crn.eval(center, eps);
  const double w_b = crn.eval(edge, eps);
  CHECK(w_mid >= 0.5 * w_a + 0.5 * w_b - 3 * t);

  // Lipschitz in the center
  const double lhs = std::fabs(w_a - w_b);
  const double rhs = distance(center, edge) * std::min(w_a, w_b) / eps + 3 * t;
  CHECK(lhs <= rhs);

  // lower bound against the inscribed diameter of B(nu,eps) ∩ K
  const double diam_sample = 2 * eps;  // full eps-ball sits inside K at 0
  CHECK(w_a >= diam_sample / std::sqrt(2 * M_PI) - 2 * t);
}

TEST_CASE("estimates carry effective precision when capped") {
  auto full = ConvexBody::make(BodySpec::full_space(2));
  const auto w = local_width(full, Vec(2, 0.0), 2.0, 0.01, 0.01, 4, 500);
  CHECK(w.sample_count == 500);
  CHECK(w.t > 0.01);  // recomputed from the cap
  CHECK(w.failed_fraction == 0.0);
}
