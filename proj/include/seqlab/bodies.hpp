#pragma once

// Catalog of convex constraint bodies: membership, Euclidean projection (the
// least squares estimator), separation, intersection projection, samplers and
// diameters. Handles are immutable and safe to share across threads.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqlab/errors.hpp"
#include "seqlab/linalg.hpp"

#include "json.hpp"

namespace seqlab::bodies {

enum class Kind {
  L2Ball,
  L1Ball,
  LpBall,
  HyperRectangle,
  Ellipsoid,
  IsotonicTV,
  IsotonicBox,
  MultiIsotonicLattice,
  Subspace,
  Pyramid,
  SolidOfRevolution,
  Singleton,
  FullSpace,
};

std::string kind_name(Kind kind);
Kind kind_from_name(const std::string& name);

struct BodySpec {
  Kind kind = Kind::FullSpace;
  int n = 0;

  double radius = 1.0;             // balls
  double p = 1.5;                  // LpBall
  Vec half_widths;                 // HyperRectangle
  Vec axes;                        // Ellipsoid, d_1 >= ... >= d_n > 0
  double tv = 1.0;                 // IsotonicTV
  double lo = 0.0, hi = 1.0;       // IsotonicBox / MultiIsotonicLattice range
  int lattice_p = 2;               // MultiIsotonicLattice order
  Vec basis;                       // Subspace, column-major n x k orthonormal
  int subspace_dim = 0;
  Vec apex;                        // Pyramid apex v
  std::shared_ptr<const BodySpec> base;  // Pyramid base, dimension n-1
  Vec knots, values;               // SolidOfRevolution profile
  Vec point;                       // Singleton

  nlohmann::ordered_json to_json() const;
  static BodySpec from_json(const nlohmann::json& j);
  std::string id() const;

  static BodySpec l2_ball(int n, double r);
  static BodySpec l1_ball(int n, double r);
  static BodySpec lp_ball(int n, double p, double r);
  static BodySpec hyper_rectangle(Vec half_widths);
  static BodySpec ellipsoid(Vec axes);
  static BodySpec isotonic_tv(int n, double v);
  static BodySpec isotonic_box(int n, double lo, double hi);
  static BodySpec multi_isotonic(int p, int n, double lo, double hi);
  static BodySpec subspace(int n, Vec basis_col_major, int k);
  static BodySpec pyramid(Vec apex, BodySpec base);
  static BodySpec solid_of_revolution(int n, Vec knots, Vec values);
  static BodySpec singleton(Vec point);
  static BodySpec full_space(int n);
};

struct SeparationResult {
  bool inside = true;
  Vec normal;    // x - project(x); positive norm when outside
  double value;  // <normal, y> <= value for every y in K, < <normal, x>
};

enum class SampleMode { Interior, Boundary, ProbeGrid };

struct Diameter {
  double lower = 0.0;
  double upper = 0.0;
  bool unbounded = false;
};

struct ProjectionConfig {
  double dykstra_tol = 1e-7;
  double closed_form_tol = 1e-9;
  long max_iterations = 100000;
};

class ConvexBody {
 public:
  static ConvexBody make(const BodySpec& spec,
                         ProjectionConfig config = ProjectionConfig{});

  int dim() const;
  const BodySpec& spec() const;
  const std::string& id() const;

  bool contains(ConstSpan x, double tol = 1e-9) const;
  Vec project(ConstSpan y) const;
  SeparationResult separation_oracle(ConstSpan x) const;
  // Euclidean projection onto B(center, radius) ∩ K (Dykstra).
  Vec project_intersection(ConstSpan center, double radius, ConstSpan y) const;
  std::vector<Vec> sample_points(int count, SampleMode mode,
                                 std::uint64_t seed) const;
  Diameter diameter() const;

  bool centrally_symmetric() const;
  bool is_bounded() const;
  // Closed-form support maximizer over K when available.
  std::optional<std::pair<Vec, double>> support(ConstSpan direction) const;
  // Characteristic length used for tolerances (diameter upper, or 1 for
  // unbounded kinds).
  double scale_hint() const;

  const ProjectionConfig& config() const;

  struct Impl;

 private:
  explicit ConvexBody(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// Pool-adjacent-violators: projection onto {x_1 <= ... <= x_n}.
void isotonic_project(const double* y, double* out, std::size_t n);

}  // namespace seqlab::bodies
