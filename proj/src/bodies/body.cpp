#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>

#include "seqlab/bodies.hpp"
#include "seqlab/lattice.hpp"
#include "seqlab/rng.hpp"
#include "solvers.hpp"

namespace seqlab::bodies {

void isotonic_project(const double* y, double* out, std::size_t n) {
  // Pool adjacent violators with block merging.
  std::vector<double> mean(n), weight(n);
  std::vector<std::size_t> len(n);
  std::size_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean[blocks] = y[i];
    weight[blocks] = 1.0;
    len[blocks] = 1;
    ++blocks;
    while (blocks > 1 && mean[blocks - 2] > mean[blocks - 1]) {
      const double w = weight[blocks - 2] + weight[blocks - 1];
      mean[blocks - 2] =
          (weight[blocks - 2] * mean[blocks - 2] + weight[blocks - 1] * mean[blocks - 1]) / w;
      weight[blocks - 2] = w;
      len[blocks - 2] += len[blocks - 1];
      --blocks;
    }
  }
  std::size_t pos = 0;
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t k = 0; k < len[b]; ++k) out[pos++] = mean[b];
}

namespace {

using seqlab::golden_section_min;

void check_dim(const BodySpec& spec, ConstSpan x) {
  if (static_cast<int>(x.size()) != spec.n)
    throw DimensionMismatchError("point dimension " + std::to_string(x.size()) +
                                 " != body dimension " + std::to_string(spec.n));
}

void check_finite(ConstSpan x) {
  for (const double v : x)
    if (!std::isfinite(v)) throw InvalidSpecError("non-finite coordinate");
}

Vec ball_interior(Rng& rng, int n, double r) {
  Vec x = rng.gaussian_vector(n);
  const double nr = norm(x);
  const double target = r * std::pow(rng.uniform(), 1.0 / n);
  kernels::scale(nr > 0 ? target / nr : 0.0, x.data(), x.size());
  return x;
}

Vec sphere_point(Rng& rng, int n, double r) {
  Vec x = rng.gaussian_vector(n);
  const double nr = norm(x);
  kernels::scale(nr > 0 ? r / nr : 0.0, x.data(), x.size());
  return x;
}

}  // namespace

struct ConvexBody::Impl {
  BodySpec spec;
  ProjectionConfig cfg;
  std::string ident;

  virtual ~Impl() = default;

  int dim() const { return spec.n; }

  virtual void project(ConstSpan y, Vec& out) const = 0;
  // Exact accept test; may return false for points that are merely within tol.
  virtual bool quick_contains(ConstSpan x) const = 0;
  virtual Diameter diameter() const = 0;
  virtual bool symmetric() const = 0;
  virtual std::optional<std::pair<Vec, double>> support(ConstSpan) const {
    return std::nullopt;
  }
  // Structured probe points, strongest first.
  virtual std::vector<Vec> probes(std::uint64_t seed) const = 0;
  virtual Vec sample_interior(Rng& rng) const = 0;
  virtual std::optional<Vec> sample_boundary(Rng&) const { return std::nullopt; }

  Vec project_vec(ConstSpan y) const {
    Vec out;
    project(y, out);
    return out;
  }

  bool contains(ConstSpan x, double tol) const {
    if (quick_contains(x)) return true;
    Vec p;
    project(x, p);
    return squared_distance(x, p) <= tol * tol;
  }

  double scale_hint() const {
    const Diameter d = diameter();
    if (!d.unbounded && d.upper > 0) return d.upper;
    return 1.0;
  }
};

namespace {

// ---------------------------------------------------------------------------
// Balls

struct L2BallImpl final : ConvexBody::Impl {
  double r() const { return spec.radius; }

  void project(ConstSpan y, Vec& out) const override {
    out.assign(y.begin(), y.end());
    const double nr = norm(y);
    if (nr > r()) kernels::scale(r() / nr, out.data(), out.size());
  }
  bool quick_contains(ConstSpan x) const override {
    return squared_norm(x) <= r() * r() * (1.0 + 1e-15);
  }
  Diameter diameter() const override { return {2 * r(), 2 * r(), false}; }
  bool symmetric() const override { return true; }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    const double nd = norm(dir);
    if (nd == 0) return std::make_pair(zeros(dim()), 0.0);
    return std::make_pair(scaled(dir, r() / nd), r() * nd);
  }
  std::vector<Vec> probes(std::uint64_t) const override {
    std::vector<Vec> out;
    out.push_back(zeros(dim()));
    for (int i = 0; i < dim(); ++i) {
      out.push_back(basis_vector(dim(), i, r()));
      out.push_back(basis_vector(dim(), i, -r()));
    }
    out.push_back(Vec(dim(), r() / std::sqrt(double(dim()))));
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    return ball_interior(rng, dim(), r());
  }
  std::optional<Vec> sample_boundary(Rng& rng) const override {
    return sphere_point(rng, dim(), r());
  }
};

struct L1BallImpl final : ConvexBody::Impl {
  double r() const { return spec.radius; }

  void project(ConstSpan y, Vec& out) const override {
    out = detail::project_l1_ball(y, r());
  }
  bool quick_contains(ConstSpan x) const override {
    return sum_abs(x) <= r() * (1.0 + 1e-15);
  }
  Diameter diameter() const override { return {2 * r(), 2 * r(), false}; }
  bool symmetric() const override { return true; }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    std::size_t best = 0;
    for (std::size_t i = 1; i < dir.size(); ++i)
      if (std::fabs(dir[i]) > std::fabs(dir[best])) best = i;
    Vec arg = basis_vector(dim(), best, dir[best] >= 0 ? r() : -r());
    return std::make_pair(std::move(arg), r() * std::fabs(dir[best]));
  }
  std::vector<Vec> probes(std::uint64_t) const override {
    std::vector<Vec> out;
    out.push_back(zeros(dim()));
    for (int i = 0; i < dim(); ++i) {
      out.push_back(basis_vector(dim(), i, r()));
      out.push_back(basis_vector(dim(), i, -r()));
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    Vec x(dim());
    double t = rng.exponential();
    for (int i = 0; i < dim(); ++i) {
      const double e = rng.exponential();
      x[i] = rng.uniform() < 0.5 ? -e : e;
      t += e;
    }
    kernels::scale(r() / t, x.data(), x.size());
    return x;
  }
  std::optional<Vec> sample_boundary(Rng& rng) const override {
    Vec x(dim());
    double t = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double e = rng.exponential();
      x[i] = rng.uniform() < 0.5 ? -e : e;
      t += e;
    }
    kernels::scale(r() / t, x.data(), x.size());
    return x;
  }
};

struct LpBallImpl final : ConvexBody::Impl {
  double r() const { return spec.radius; }
  double p() const { return spec.p; }

  void project(ConstSpan y, Vec& out) const override {
    out = detail::project_lp_ball(y, p(), r());
  }
  bool quick_contains(ConstSpan x) const override {
    return lp_norm(x, p()) <= r() * (1.0 + 1e-14);
  }
  Diameter diameter() const override { return {2 * r(), 2 * r(), false}; }
  bool symmetric() const override { return true; }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    // Dual norm q; maximizer x_i proportional to sign(d_i)|d_i|^(q-1).
    const double q = p() / (p() - 1.0);
    double dq = 0.0;
    for (const double v : dir) dq += std::pow(std::fabs(v), q);
    if (dq == 0) return std::make_pair(zeros(dim()), 0.0);
    const double dual = std::pow(dq, 1.0 / q);
    Vec arg(dim());
    for (int i = 0; i < dim(); ++i) {
      const double m = std::pow(std::fabs(dir[i]) / dual, q - 1.0) * r();
      arg[i] = dir[i] >= 0 ? m : -m;
    }
    return std::make_pair(std::move(arg), r() * dual);
  }
  std::vector<Vec> probes(std::uint64_t) const override {
    std::vector<Vec> out;
    out.push_back(zeros(dim()));
    for (int i = 0; i < dim(); ++i) {
      out.push_back(basis_vector(dim(), i, r()));
      out.push_back(basis_vector(dim(), i, -r()));
    }
    out.push_back(Vec(dim(), r() * std::pow(double(dim()), -1.0 / p())));
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    // Barthe-Guedon-Mendelson-Naor: eps_i ~ exp(-|t|^p), normalize with an
    // extra exponential.
    Vec x(dim());
    double s = rng.exponential();
    for (int i = 0; i < dim(); ++i) {
      const double g = std::pow(rng.gamma(1.0 / p()), 1.0 / p());
      x[i] = rng.uniform() < 0.5 ? -g : g;
      s += std::pow(g, p());
    }
    const double denom = std::pow(s, 1.0 / p());
    kernels::scale(r() / denom, x.data(), x.size());
    return x;
  }
  std::optional<Vec> sample_boundary(Rng& rng) const override {
    Vec x(dim());
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double g = std::pow(rng.gamma(1.0 / p()), 1.0 / p());
      x[i] = rng.uniform() < 0.5 ? -g : g;
      s += std::pow(g, p());
    }
    kernels::scale(r() / std::pow(s, 1.0 / p()), x.data(), x.size());
    return x;
  }
};

// ---------------------------------------------------------------------------
// Hyperrectangle [-a_i, a_i]

struct BoxImpl final : ConvexBody::Impl {
  Vec lo_, hi_;

  void init() {
    lo_ = scaled(spec.half_widths, -1.0);
    hi_ = spec.half_widths;
  }
  void project(ConstSpan y, Vec& out) const override {
    out.resize(y.size());
    kernels::clamp(y.data(), lo_.data(), hi_.data(), out.data(), y.size());
  }
  bool quick_contains(ConstSpan x) const override {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
    return true;
  }
  Diameter diameter() const override {
    const double d = 2.0 * norm(spec.half_widths);
    return {d, d, false};
  }
  bool symmetric() const override { return true; }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    Vec arg(dim());
    double val = 0.0;
    for (int i = 0; i < dim(); ++i) {
      arg[i] = dir[i] >= 0 ? hi_[i] : lo_[i];
      val += dir[i] * arg[i];
    }
    return std::make_pair(std::move(arg), val);
  }
  std::vector<Vec> probes(std::uint64_t seed) const override {
    std::vector<Vec> out;
    out.push_back(zeros(dim()));
    if (dim() <= 10) {
      for (std::uint64_t mask = 0; mask < (1ULL << dim()); ++mask) {
        Vec v(dim());
        for (int i = 0; i < dim(); ++i)
          v[i] = (mask >> i) & 1 ? hi_[i] : lo_[i];
        out.push_back(std::move(v));
      }
    } else {
      Rng rng(seed, 77);
      for (int k = 0; k < 32; ++k) {
        Vec v(dim());
        for (int i = 0; i < dim(); ++i)
          v[i] = rng.uniform() < 0.5 ? lo_[i] : hi_[i];
        out.push_back(std::move(v));
      }
    }
    for (int i = 0; i < dim(); ++i) {
      out.push_back(basis_vector(dim(), i, hi_[i]));
      out.push_back(basis_vector(dim(), i, lo_[i]));
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    Vec x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = rng.uniform(lo_[i], hi_[i]);
    return x;
  }
  std::optional<Vec> sample_boundary(Rng& rng) const override {
    Vec x = sample_interior(rng);
    const int face = static_cast<int>(rng.integer(dim()));
    x[face] = rng.uniform() < 0.5 ? lo_[face] : hi_[face];
    return x;
  }
};

// ---------------------------------------------------------------------------
// Ellipsoid {x : ||Dx|| <= 1}, D = diag(axes), axes descending

struct EllipsoidImpl final : ConvexBody::Impl {
  void project(ConstSpan y, Vec& out) const override {
    out = detail::project_ellipsoid(y, spec.axes);
  }
  bool quick_contains(ConstSpan x) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = spec.axes[i] * x[i];
      s += t * t;
    }
    return s <= 1.0 + 1e-14;
  }
  Diameter diameter() const override {
    const double d = 2.0 / spec.axes.back();
    return {d, d, false};
  }
  bool symmetric() const override { return true; }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) {
      const double t = dir[i] / spec.axes[i];
      s += t * t;
    }
    const double val = std::sqrt(s);
    Vec arg(dim(), 0.0);
    if (val > 0) {
      for (int i = 0; i < dim(); ++i)
        arg[i] = dir[i] / (spec.axes[i] * spec.axes[i] * val);
    }
    return std::make_pair(std::move(arg), val);
  }
  std::vector<Vec> probes(std::uint64_t) const override {
    std::vector<Vec> out;
    out.push_back(zeros(dim()));
    // Axis tips, longest semi-axis first: the nu = (0,..,1/d_{n-k},..,0) family.
    for (int j = dim() - 1; j >= 0; --j) {
      out.push_back(basis_vector(dim(), j, 1.0 / spec.axes[j]));
      out.push_back(basis_vector(dim(), j, -1.0 / spec.axes[j]));
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    Vec x = ball_interior(rng, dim(), 1.0);
    for (int i = 0; i < dim(); ++i) x[i] /= spec.axes[i];
    return x;
  }
  std::optional<Vec> sample_boundary(Rng& rng) const override {
    Vec x = sphere_point(rng, dim(), 1.0);
    for (int i = 0; i < dim(); ++i) x[i] /= spec.axes[i];
    return x;
  }
};

// ---------------------------------------------------------------------------
// Isotonic with box range {lo <= x_1 <= ... <= x_n <= hi}

struct IsotonicBoxImpl final : ConvexBody::Impl {
  void project(ConstSpan y, Vec& out) const override {
    out.resize(y.size());
    isotonic_project(y.data(), out.data(), y.size());
    kernels::clamp_scalar(out.data(), spec.lo, spec.hi, out.data(), out.size());
  }
  bool quick_contains(ConstSpan x) const override {
    if (x.front() < spec.lo || x.back() > spec.hi) return false;
    for (std::size_t i = 1; i < x.size(); ++i)
      if (x[i] < x[i - 1]) return false;
    return true;
  }
  Diameter diameter() const override {
    const double d = (spec.hi - spec.lo) * std::sqrt(double(dim()));
    return {d, d, false};
  }
  bool symmetric() const override { return false; }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    // Extreme points are single-step vectors; scan the cut position.
    const int n = dim();
    double suffix = 0.0;
    for (int i = 0; i < n; ++i) suffix += dir[i];
    double best = spec.hi * suffix;  // cut before 0: all hi
    int best_cut = 0;
    double prefix = 0.0;
    double run = best;
    for (int cut = 1; cut <= n; ++cut) {
      prefix += dir[cut - 1];
      run = spec.lo * prefix + spec.hi * (suffix - prefix);
      if (run > best) {
        best = run;
        best_cut = cut;
      }
    }
    Vec arg(n);
    for (int i = 0; i < n; ++i) arg[i] = i < best_cut ? spec.lo : spec.hi;
    return std::make_pair(std::move(arg), best);
  }
  std::vector<Vec> probes(std::uint64_t) const override {
    const int n = dim();
    std::vector<Vec> out;
    out.push_back(Vec(n, spec.lo));
    out.push_back(Vec(n, spec.hi));
    out.push_back(Vec(n, 0.5 * (spec.lo + spec.hi)));
    Vec ramp(n);
    for (int i = 0; i < n; ++i)
      ramp[i] = spec.lo + (spec.hi - spec.lo) * (n > 1 ? double(i) / (n - 1) : 0.0);
    out.push_back(std::move(ramp));
    for (int steps = 1; steps <= n; steps *= 2) {
      Vec v(n);
      for (int i = 0; i < n; ++i) {
        const int level = std::min(steps, 1 + i * steps / n);
        v[i] = spec.lo + (spec.hi - spec.lo) * double(level) / (steps + 1);
      }
      out.push_back(std::move(v));
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    Vec x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = rng.uniform(spec.lo, spec.hi);
    std::sort(x.begin(), x.end());
    return x;
  }
};

// ---------------------------------------------------------------------------
// Isotonic with total-variation bound {x nondecreasing, x_n - x_1 <= V}

struct IsotonicTVImpl final : ConvexBody::Impl {
  void project(ConstSpan y, Vec& out) const override {
    const std::size_t n = y.size();
    out.resize(n);
    isotonic_project(y.data(), out.data(), n);
    if (out[n - 1] - out[0] <= spec.tv) return;

    // Dykstra between the monotone cone (PAVA) and the slab
    // {x_n - x_1 <= V}.
    Vec x(y.begin(), y.end());
    Vec cone_corr(n, 0.0);
    double slab_corr = 0.0;
    Vec work(n), prev(n, 0.0);
    const double s = std::max(1.0, norm(y));
    long it = 0;
    for (; it < cfg.max_iterations; ++it) {
      // Slab with correction.
      work = x;
      work[0] -= slab_corr;
      work[n - 1] += slab_corr;
      const double gap = work[n - 1] - work[0] - spec.tv;
      const double theta = std::max(0.0, 0.5 * gap);
      slab_corr = theta;
      work[0] += theta;
      work[n - 1] -= theta;
      // Cone with correction.
      for (std::size_t i = 0; i < n; ++i) work[i] += cone_corr[i];
      isotonic_project(work.data(), x.data(), n);
      for (std::size_t i = 0; i < n; ++i) cone_corr[i] = work[i] - x[i];
      if (it > 0 && std::sqrt(squared_distance(x, prev)) <= cfg.dykstra_tol * s &&
          x[n - 1] - x[0] <= spec.tv + cfg.dykstra_tol * s)
        break;
      prev = x;
    }
    if (it >= cfg.max_iterations)
      throw NonConvergenceError("isotonic-tv Dykstra", it,
                                std::sqrt(squared_distance(x, prev)));
    out = x;
  }
  bool quick_contains(ConstSpan x) const override {
    for (std::size_t i = 1; i < x.size(); ++i)
      if (x[i] < x[i - 1]) return false;
    return x.back() - x.front() <= spec.tv * (1.0 + 1e-14) + 1e-15;
  }
  Diameter diameter() const override { return {0.0, 0.0, true}; }
  bool symmetric() const override { return false; }
  std::vector<Vec> probes(std::uint64_t) const override {
    const int n = dim();
    const double v = spec.tv;
    std::vector<Vec> out;
    out.push_back(zeros(n));
    Vec ramp(n);
    for (int i = 0; i < n; ++i)
      ramp[i] = n > 1 ? v * (double(i) / (n - 1) - 0.5) : 0.0;
    out.push_back(std::move(ramp));
    for (int steps = 1; steps <= n; steps *= 2) {
      Vec x(n);
      for (int i = 0; i < n; ++i) {
        const int level = std::min(steps, 1 + i * steps / n);
        x[i] = v * (double(level) / (steps + 1) - 0.5);
      }
      out.push_back(std::move(x));
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    Vec x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = rng.uniform(0.0, spec.tv);
    std::sort(x.begin(), x.end());
    const double shift = rng.gaussian() * std::max(spec.tv, 1.0) -
                         kernels::sum(x.data(), x.size()) / dim();
    for (auto& v : x) v += shift;
    return x;
  }
};

// ---------------------------------------------------------------------------
// Multivariate isotonic on the lattice, values in [lo, hi]

struct MultiIsoImpl final : ConvexBody::Impl {
  lattice::Grid grid;
  std::vector<std::pair<int, int>> edges;

  void init() {
    grid = lattice::Grid::make(spec.lattice_p, spec.n);
    edges = grid.cover_edges();
  }
  void project(ConstSpan y, Vec& out) const override {
    const std::size_t n = y.size();
    Vec x(y.begin(), y.end());
    kernels::clamp_scalar(x.data(), spec.lo, spec.hi, x.data(), n);
    if (order_ok(x)) {
      out = x;
      return;
    }
    // Dykstra over the box and the cover-relation halfspaces. Halfspace
    // corrections stay parallel to their normals, so one scalar per edge.
    x.assign(y.begin(), y.end());
    Vec box_corr(n, 0.0);
    Vec edge_corr(edges.size(), 0.0);
    Vec work(n), prev(n, 0.0);
    const double s = std::max(1.0, norm(y));
    const long max_sweeps = std::min<long>(cfg.max_iterations, 50000);
    long sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
      work = x;
      kernels::axpy(1.0, box_corr.data(), work.data(), n);
      kernels::clamp_scalar(work.data(), spec.lo, spec.hi, x.data(), n);
      for (std::size_t i = 0; i < n; ++i) box_corr[i] = work[i] - x[i];
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [j, k] = edges[e];
        const double zj = x[j] + edge_corr[e];
        const double zk = x[k] - edge_corr[e];
        const double theta = std::max(0.0, 0.5 * (zj - zk));
        x[j] = zj - theta;
        x[k] = zk + theta;
        edge_corr[e] = theta;
      }
      if (sweep > 0 && std::sqrt(squared_distance(x, prev)) <= cfg.dykstra_tol * s &&
          order_violation(x) <= cfg.dykstra_tol * s)
        break;
      prev = x;
    }
    if (sweep >= max_sweeps)
      throw NonConvergenceError("lattice Dykstra", sweep, order_violation(x));
    kernels::clamp_scalar(x.data(), spec.lo, spec.hi, x.data(), n);
    out = x;
  }
  bool order_ok(const Vec& x) const {
    for (const auto& [j, k] : edges)
      if (x[j] > x[k]) return false;
    return true;
  }
  double order_violation(const Vec& x) const {
    double worst = 0.0;
    for (const auto& [j, k] : edges) worst = std::max(worst, x[j] - x[k]);
    return worst;
  }
  bool quick_contains(ConstSpan x) const override {
    for (const double v : x)
      if (v < spec.lo - 1e-15 || v > spec.hi + 1e-15) return false;
    for (const auto& [j, k] : edges)
      if (x[j] > x[k] + 1e-15) return false;
    return true;
  }
  Diameter diameter() const override {
    const double d = (spec.hi - spec.lo) * std::sqrt(double(dim()));
    return {d, d, false};
  }
  bool symmetric() const override { return false; }
  std::vector<Vec> probes(std::uint64_t) const override {
    const int n = dim();
    std::vector<Vec> out;
    out.push_back(Vec(n, spec.lo));
    out.push_back(Vec(n, spec.hi));
    out.push_back(Vec(n, 0.5 * (spec.lo + spec.hi)));
    Vec diag(n);
    const double denom = double(grid.p) * (grid.side - 1);
    for (int j = 0; j < n; ++j) {
      int s = 0;
      for (int d = 0; d < grid.p; ++d) s += grid.coord(j, d);
      diag[j] = spec.lo + (spec.hi - spec.lo) * (denom > 0 ? s / denom : 0.0);
    }
    out.push_back(std::move(diag));
    // Halfspace indicators along each diagonal level set.
    for (int cut = 1; cut < grid.p * (grid.side - 1); cut *= 2) {
      Vec v(n);
      for (int j = 0; j < n; ++j) {
        int s = 0;
        for (int d = 0; d < grid.p; ++d) s += grid.coord(j, d);
        v[j] = s >= cut ? spec.hi : spec.lo;
      }
      out.push_back(std::move(v));
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    // Running-max of box noise along the partial order keeps monotonicity.
    Vec x(dim());
    for (int j = 0; j < dim(); ++j) x[j] = rng.uniform(spec.lo, spec.hi);
    Vec out(dim());
    int stride = 1;
    out = x;
    for (int d = 0; d < grid.p; ++d) {
      for (int j = 0; j < dim(); ++j) {
        if (grid.coord(j, d) > 0) out[j] = std::max(out[j], out[j - stride]);
      }
      stride *= grid.side;
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Subspace (column span of an orthonormal basis)

struct SubspaceImpl final : ConvexBody::Impl {
  int k() const { return spec.subspace_dim; }
  const double* col(int j) const { return spec.basis.data() + std::size_t(j) * dim(); }

  void project(ConstSpan y, Vec& out) const override {
    out.assign(dim(), 0.0);
    for (int j = 0; j < k(); ++j) {
      const double c = kernels::dot(col(j), y.data(), dim());
      kernels::axpy(c, col(j), out.data(), dim());
    }
  }
  bool quick_contains(ConstSpan) const override { return false; }
  Diameter diameter() const override { return {0.0, 0.0, true}; }
  bool symmetric() const override { return true; }
  std::vector<Vec> probes(std::uint64_t) const override {
    std::vector<Vec> out;
    out.push_back(zeros(dim()));
    for (int j = 0; j < k(); ++j) {
      Vec c(col(j), col(j) + dim());
      out.push_back(c);
      out.push_back(scaled(c, -1.0));
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    Vec out(dim(), 0.0);
    for (int j = 0; j < k(); ++j) kernels::axpy(rng.gaussian(), col(j), out.data(), dim());
    return out;
  }
};

// ---------------------------------------------------------------------------
// Pyramid over a symmetric base living in the apex's orthogonal complement

struct PyramidImpl final : ConvexBody::Impl {
  std::shared_ptr<const ConvexBody::Impl> base;
  Vec vhat;       // apex direction
  Vec house_u;    // Householder vector mapping e1 -> vhat (empty if identity)
  double vnorm = 0.0;

  void init(std::shared_ptr<const ConvexBody::Impl> base_impl) {
    base = std::move(base_impl);
    vnorm = norm(spec.apex);
    vhat = scaled(spec.apex, 1.0 / vnorm);
    Vec e1 = basis_vector(dim(), 0);
    Vec diff = sub(e1, vhat);
    const double dn = norm(diff);
    if (dn > 1e-12) {
      house_u = scaled(diff, 1.0 / dn);
    }
  }

  // x = t*vhat + Q*c with Q = columns 2..n of the Householder reflection.
  void to_local(ConstSpan x, double& t, Vec& c) const {
    Vec h(x.begin(), x.end());
    if (!house_u.empty()) {
      const double d = 2.0 * dot(h, house_u);
      kernels::axpy(-d, house_u.data(), h.data(), h.size());
    }
    // After reflecting, vhat maps to e1.
    t = h[0];
    c.assign(h.begin() + 1, h.end());
  }
  Vec from_local(double t, ConstSpan c) const {
    Vec h(dim());
    h[0] = t;
    std::copy(c.begin(), c.end(), h.begin() + 1);
    if (!house_u.empty()) {
      const double d = 2.0 * dot(h, house_u);
      kernels::axpy(-d, house_u.data(), h.data(), h.size());
    }
    return h;
  }

  void project(ConstSpan y, Vec& out) const override {
    double t;
    Vec c;
    to_local(y, t, c);
    Vec base_proj;
    auto dist2 = [&](double alpha) {
      const double beta = 1.0 - alpha;
      const double axial = t - alpha * vnorm;
      double radial2;
      if (beta <= 1e-14) {
        radial2 = squared_norm(c);
      } else {
        Vec scaled_c = scaled(c, 1.0 / beta);
        base->project(scaled_c, base_proj);
        kernels::scale(beta, base_proj.data(), base_proj.size());
        radial2 = squared_distance(c, base_proj);
      }
      return axial * axial + radial2;
    };
    const double alpha =
        golden_section_min(0.0, 1.0, 1e-12, dist2);
    const double beta = 1.0 - alpha;
    Vec cstar;
    if (beta <= 1e-14) {
      cstar.assign(c.size(), 0.0);
    } else {
      Vec scaled_c = scaled(c, 1.0 / beta);
      base->project(scaled_c, cstar);
      kernels::scale(beta, cstar.data(), cstar.size());
    }
    out = from_local(alpha * vnorm, cstar);
  }
  bool quick_contains(ConstSpan x) const override {
    double t;
    Vec c;
    to_local(x, t, c);
    const double alpha = t / vnorm;
    if (alpha < -1e-14 || alpha > 1.0 + 1e-14) return false;
    const double beta = 1.0 - alpha;
    if (beta <= 1e-14) return squared_norm(c) <= 1e-24;
    Vec scaled_c = scaled(c, 1.0 / beta);
    return base->quick_contains(scaled_c);
  }
  Diameter diameter() const override {
    const Diameter bd = base->diameter();
    const double rbase = 0.5 * bd.upper;  // symmetric base
    const double d = std::max(bd.upper, std::sqrt(vnorm * vnorm + rbase * rbase));
    return {d, d, false};
  }
  bool symmetric() const override { return false; }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    double t;
    Vec c;
    to_local(dir, t, c);
    const auto base_sup = base->support(c);
    if (!base_sup) return std::nullopt;
    const double apex_val = dot(dir, spec.apex);
    if (apex_val >= base_sup->second)
      return std::make_pair(Vec(spec.apex), apex_val);
    return std::make_pair(from_local(0.0, base_sup->first), base_sup->second);
  }
  std::vector<Vec> probes(std::uint64_t seed) const override {
    std::vector<Vec> out;
    out.push_back(Vec(spec.apex));
    out.push_back(zeros(dim()));
    out.push_back(scaled(spec.apex, 0.5));
    const auto base_probes = base->probes(seed);
    for (const auto& bp : base_probes) {
      out.push_back(from_local(0.0, bp));
      out.push_back(add_scaled(scaled(spec.apex, 0.5), 0.5, from_local(0.0, bp)));
      if (out.size() > 64) break;
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    const double alpha = rng.uniform();
    Vec bp = base->sample_interior(rng);
    kernels::scale(1.0 - alpha, bp.data(), bp.size());
    Vec x = from_local(alpha * vnorm, bp);
    return x;
  }
  std::optional<Vec> sample_boundary(Rng& rng) const override {
    auto bb = base->sample_boundary(rng);
    if (!bb) return std::nullopt;
    const double alpha = rng.uniform();
    kernels::scale(1.0 - alpha, bb->data(), bb->size());
    return from_local(alpha * vnorm, *bb);
  }
};

// ---------------------------------------------------------------------------
// Solid of revolution about the first axis

struct SolidImpl final : ConvexBody::Impl {
  double b() const { return spec.knots.back(); }

  double profile(double u) const {
    const auto& ks = spec.knots;
    const auto& vs = spec.values;
    if (u <= ks.front()) return vs.front();
    if (u >= ks.back()) return vs.back();
    const auto it = std::upper_bound(ks.begin(), ks.end(), u);
    const std::size_t j = static_cast<std::size_t>(it - ks.begin());
    const double w = (u - ks[j - 1]) / (ks[j] - ks[j - 1]);
    return vs[j - 1] + w * (vs[j] - vs[j - 1]);
  }

  void project(ConstSpan y, Vec& out) const override {
    const std::size_t n = y.size();
    const double r = std::sqrt(kernels::squared_norm(y.data() + 1, n - 1));
    const auto& ks = spec.knots;
    const auto& vs = spec.values;

    double best_u = std::clamp(y[0], 0.0, b());
    double best_g = std::numeric_limits<double>::infinity();
    auto consider = [&](double u) {
      u = std::clamp(u, 0.0, b());
      const double gap = std::max(0.0, r - profile(u));
      const double g = (y[0] - u) * (y[0] - u) + gap * gap;
      if (g < best_g) {
        best_g = g;
        best_u = u;
      }
    };
    for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
      const double u0 = ks[j], u1 = ks[j + 1];
      const double m = (vs[j + 1] - vs[j]) / (u1 - u0);
      const double c = vs[j] - m * u0;
      consider(u0);
      consider(u1);
      // Inside radially: minimize (y0-u)^2 where f(u) >= r.
      if (std::max(vs[j], vs[j + 1]) >= r) {
        double a0 = u0, a1 = u1;
        if (vs[j] < r) a0 = (r - c) / m;
        if (vs[j + 1] < r) a1 = (r - c) / m;
        if (a0 <= a1) consider(std::clamp(y[0], a0, a1));
      }
      // Outside radially: quadratic in u.
      const double u_quad = (y[0] + m * (r - c)) / (1.0 + m * m);
      consider(std::clamp(u_quad, u0, u1));
    }
    out.assign(n, 0.0);
    out[0] = best_u;
    const double f = profile(best_u);
    if (r > 1e-300) {
      const double s = std::min(1.0, f / r);
      for (std::size_t i = 1; i < n; ++i) out[i] = y[i] * s;
    }
  }
  bool quick_contains(ConstSpan x) const override {
    if (x[0] < 0.0 || x[0] > b()) return false;
    const double r2 = kernels::squared_norm(x.data() + 1, x.size() - 1);
    const double f = profile(x[0]);
    return r2 <= f * f * (1 + 1e-14) + 1e-30;
  }
  Diameter diameter() const override {
    double best = b();
    for (std::size_t i = 0; i < spec.knots.size(); ++i)
      for (std::size_t j = i; j < spec.knots.size(); ++j) {
        const double du = spec.knots[i] - spec.knots[j];
        const double dv = spec.values[i] + spec.values[j];
        best = std::max(best, std::sqrt(du * du + dv * dv));
      }
    return {best, best, false};
  }
  bool symmetric() const override { return false; }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    // Extreme points sit on knot circles: u*dir_1 + f(u)*||dir_rest||.
    const double rd = std::sqrt(kernels::squared_norm(dir.data() + 1, dir.size() - 1));
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < spec.knots.size(); ++j) {
      const double v = spec.knots[j] * dir[0] + spec.values[j] * rd;
      if (v > best) {
        best = v;
        best_j = j;
      }
    }
    Vec arg(dim(), 0.0);
    arg[0] = spec.knots[best_j];
    if (rd > 0 && spec.values[best_j] > 0) {
      for (int i = 1; i < dim(); ++i)
        arg[i] = dir[i] / rd * spec.values[best_j];
    }
    return std::make_pair(std::move(arg), best);
  }
  std::vector<Vec> probes(std::uint64_t) const override {
    std::vector<Vec> out;
    out.push_back(zeros(dim()));
    out.push_back(basis_vector(dim(), 0, b()));
    out.push_back(basis_vector(dim(), 0, 0.5 * b()));
    for (std::size_t j = 0; j < spec.knots.size(); ++j) {
      if (spec.values[j] <= 0) continue;
      for (int axis = 1; axis < std::min(dim(), 4); ++axis) {
        Vec v(dim(), 0.0);
        v[0] = spec.knots[j];
        v[axis] = spec.values[j];
        out.push_back(std::move(v));
      }
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    const double u = rng.uniform(0.0, b());
    Vec rest = ball_interior(rng, dim() - 1, std::max(profile(u), 0.0));
    Vec x(dim());
    x[0] = u;
    std::copy(rest.begin(), rest.end(), x.begin() + 1);
    return x;
  }
  std::optional<Vec> sample_boundary(Rng& rng) const override {
    const double u = rng.uniform(0.0, b());
    Vec rest = sphere_point(rng, dim() - 1, std::max(profile(u), 0.0));
    Vec x(dim());
    x[0] = u;
    std::copy(rest.begin(), rest.end(), x.begin() + 1);
    return x;
  }
};

// ---------------------------------------------------------------------------

struct SingletonImpl final : ConvexBody::Impl {
  void project(ConstSpan, Vec& out) const override {
    out = spec.point;
  }
  bool quick_contains(ConstSpan x) const override {
    return squared_distance(x, spec.point) <= 1e-28;
  }
  Diameter diameter() const override { return {0.0, 0.0, false}; }
  bool symmetric() const override {
    return squared_norm(spec.point) == 0.0;
  }
  std::optional<std::pair<Vec, double>> support(ConstSpan dir) const override {
    return std::make_pair(Vec(spec.point), dot(dir, spec.point));
  }
  std::vector<Vec> probes(std::uint64_t) const override { return {spec.point}; }
  Vec sample_interior(Rng&) const override { return spec.point; }
  std::optional<Vec> sample_boundary(Rng&) const override { return spec.point; }
};

struct FullSpaceImpl final : ConvexBody::Impl {
  void project(ConstSpan y, Vec& out) const override {
    out.assign(y.begin(), y.end());
  }
  bool quick_contains(ConstSpan) const override { return true; }
  Diameter diameter() const override { return {0.0, 0.0, true}; }
  bool symmetric() const override { return true; }
  std::vector<Vec> probes(std::uint64_t) const override {
    std::vector<Vec> out;
    out.push_back(zeros(dim()));
    for (int i = 0; i < dim(); ++i) {
      out.push_back(basis_vector(dim(), i, 1.0));
      out.push_back(basis_vector(dim(), i, -1.0));
    }
    return out;
  }
  Vec sample_interior(Rng& rng) const override {
    return rng.gaussian_vector(dim());
  }
};

// ---------------------------------------------------------------------------
// Validation

void validate(const BodySpec& s) {
  if (s.n < 1) throw InvalidSpecError("dimension must be positive");
  auto finite = [](const Vec& v, const char* what) {
    for (const double x : v)
      if (!std::isfinite(x)) throw InvalidSpecError(std::string(what) + " must be finite");
  };
  switch (s.kind) {
    case Kind::L2Ball:
    case Kind::L1Ball:
      if (!(s.radius > 0) || !std::isfinite(s.radius))
        throw InvalidSpecError("radius must be positive");
      break;
    case Kind::LpBall:
      if (!(s.radius > 0) || !std::isfinite(s.radius))
        throw InvalidSpecError("radius must be positive");
      if (!(s.p > 1.0 && s.p < 2.0))
        throw InvalidSpecError("lp ball requires p in (1,2)");
      break;
    case Kind::HyperRectangle:
      if (static_cast<int>(s.half_widths.size()) != s.n)
        throw InvalidSpecError("half_widths size mismatch");
      finite(s.half_widths, "half_widths");
      for (const double a : s.half_widths)
        if (!(a > 0)) throw InvalidSpecError("half-widths must be positive");
      break;
    case Kind::Ellipsoid:
      if (static_cast<int>(s.axes.size()) != s.n)
        throw InvalidSpecError("axes size mismatch");
      finite(s.axes, "axes");
      for (std::size_t i = 0; i < s.axes.size(); ++i) {
        if (!(s.axes[i] > 0)) throw InvalidSpecError("axes must be positive");
        if (i > 0 && s.axes[i] > s.axes[i - 1] * (1 + 1e-12))
          throw InvalidSpecError("axes must be sorted descending");
      }
      break;
    case Kind::IsotonicTV:
      if (!(s.tv >= 0) || !std::isfinite(s.tv))
        throw InvalidSpecError("total variation bound must be >= 0");
      break;
    case Kind::IsotonicBox:
      if (!(s.lo < s.hi)) throw InvalidSpecError("need lo < hi");
      break;
    case Kind::MultiIsotonicLattice:
      if (!(s.lo < s.hi)) throw InvalidSpecError("need lo < hi");
      (void)lattice::Grid::make(s.lattice_p, s.n);
      break;
    case Kind::Subspace: {
      const int k = s.subspace_dim;
      if (k < 1 || k > s.n) throw InvalidSpecError("subspace dim out of range");
      if (static_cast<int>(s.basis.size()) != s.n * k)
        throw InvalidSpecError("basis size mismatch");
      finite(s.basis, "basis");
      for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
          const double g = kernels::dot(s.basis.data() + std::size_t(a) * s.n,
                                        s.basis.data() + std::size_t(b) * s.n, s.n);
          const double want = a == b ? 1.0 : 0.0;
          if (std::fabs(g - want) > 1e-8)
            throw InvalidSpecError("basis columns must be orthonormal");
        }
      break;
    }
    case Kind::Pyramid: {
      if (static_cast<int>(s.apex.size()) != s.n)
        throw InvalidSpecError("apex size mismatch");
      finite(s.apex, "apex");
      if (!(squared_norm(s.apex) > 0))
        throw InvalidSpecError("apex must be nonzero");
      if (!s.base) throw InvalidSpecError("pyramid requires a base spec");
      if (s.base->n != s.n - 1)
        throw InvalidSpecError("pyramid base must have dimension n-1");
      switch (s.base->kind) {
        case Kind::L2Ball:
        case Kind::L1Ball:
        case Kind::LpBall:
        case Kind::HyperRectangle:
        case Kind::Ellipsoid:
          break;
        default:
          throw InvalidSpecError("pyramid base must be a bounded symmetric kind");
      }
      validate(*s.base);
      break;
    }
    case Kind::SolidOfRevolution: {
      if (s.n < 2) throw InvalidSpecError("solid of revolution needs n >= 2");
      const auto& ks = s.knots;
      const auto& vs = s.values;
      if (ks.size() != vs.size() || ks.size() < 2)
        throw InvalidSpecError("profile needs matching knot/value arrays");
      finite(ks, "knots");
      finite(vs, "values");
      if (ks.front() != 0.0 || !(ks.back() > 0))
        throw InvalidSpecError("profile domain must be [0, b]");
      for (std::size_t i = 1; i < ks.size(); ++i)
        if (!(ks[i] > ks[i - 1])) throw InvalidSpecError("knots must increase");
      if (vs.front() != 0.0 || vs.back() != 0.0)
        throw InvalidSpecError("profile must vanish at the endpoints");
      for (const double v : vs)
        if (v < 0) throw InvalidSpecError("profile must be nonnegative");
      const double b = ks.back();
      const std::size_t m = ks.size();
      for (std::size_t i = 0; i < m; ++i) {
        if (std::fabs((b - ks[m - 1 - i]) - ks[i]) > 1e-9 * std::max(1.0, b) ||
            std::fabs(vs[m - 1 - i] - vs[i]) > 1e-9)
          throw InvalidSpecError("profile must be symmetric about b/2");
      }
      double prev_slope = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < m; ++i) {
        const double slope = (vs[i] - vs[i - 1]) / (ks[i] - ks[i - 1]);
        if (slope > prev_slope + 1e-9)
          throw InvalidSpecError("profile must be concave");
        prev_slope = slope;
      }
      break;
    }
    case Kind::Singleton:
      if (static_cast<int>(s.point.size()) != s.n)
        throw InvalidSpecError("point size mismatch");
      finite(s.point, "point");
      break;
    case Kind::FullSpace:
      break;
  }
}

std::shared_ptr<ConvexBody::Impl> build(const BodySpec& spec,
                                        const ProjectionConfig& cfg) {
  std::shared_ptr<ConvexBody::Impl> impl;
  switch (spec.kind) {
    case Kind::L2Ball: impl = std::make_shared<L2BallImpl>(); break;
    case Kind::L1Ball: impl = std::make_shared<L1BallImpl>(); break;
    case Kind::LpBall: impl = std::make_shared<LpBallImpl>(); break;
    case Kind::HyperRectangle: {
      auto box = std::make_shared<BoxImpl>();
      box->spec = spec;
      box->init();
      impl = box;
      break;
    }
    case Kind::Ellipsoid: impl = std::make_shared<EllipsoidImpl>(); break;
    case Kind::IsotonicTV: impl = std::make_shared<IsotonicTVImpl>(); break;
    case Kind::IsotonicBox: impl = std::make_shared<IsotonicBoxImpl>(); break;
    case Kind::MultiIsotonicLattice: {
      auto mi = std::make_shared<MultiIsoImpl>();
      mi->spec = spec;
      mi->init();
      impl = mi;
      break;
    }
    case Kind::Subspace: impl = std::make_shared<SubspaceImpl>(); break;
    case Kind::Pyramid: {
      auto py = std::make_shared<PyramidImpl>();
      py->spec = spec;
      py->cfg = cfg;
      py->init(build(*spec.base, cfg));
      impl = py;
      break;
    }
    case Kind::SolidOfRevolution: impl = std::make_shared<SolidImpl>(); break;
    case Kind::Singleton: impl = std::make_shared<SingletonImpl>(); break;
    case Kind::FullSpace: impl = std::make_shared<FullSpaceImpl>(); break;
  }
  impl->spec = spec;
  impl->cfg = cfg;
  impl->ident = spec.id();
  return impl;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public handle

ConvexBody::ConvexBody(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ConvexBody ConvexBody::make(const BodySpec& spec, ProjectionConfig config) {
  validate(spec);
  return ConvexBody(build(spec, config));
}

int ConvexBody::dim() const { return impl_->dim(); }
const BodySpec& ConvexBody::spec() const { return impl_->spec; }
const std::string& ConvexBody::id() const { return impl_->ident; }
const ProjectionConfig& ConvexBody::config() const { return impl_->cfg; }

bool ConvexBody::contains(ConstSpan x, double tol) const {
  check_dim(impl_->spec, x);
  return impl_->contains(x, tol);
}

Vec ConvexBody::project(ConstSpan y) const {
  check_dim(impl_->spec, y);
  check_finite(y);
  return impl_->project_vec(y);
}

SeparationResult ConvexBody::separation_oracle(ConstSpan x) const {
  check_dim(impl_->spec, x);
  check_finite(x);
  Vec p = impl_->project_vec(x);
  Vec normal = sub(x, p);
  const double nn = norm(normal);
  if (nn <= impl_->cfg.closed_form_tol * std::max(1.0, impl_->scale_hint())) {
    return SeparationResult{true, {}, 0.0};
  }
  const double value = dot(normal, p);
  return SeparationResult{false, std::move(normal), value};
}

Vec ConvexBody::project_intersection(ConstSpan center, double radius,
                                     ConstSpan y) const {
  check_dim(impl_->spec, center);
  check_dim(impl_->spec, y);
  if (!(radius > 0)) throw InvalidSpecError("intersection radius must be positive");

  auto ball_proj = [&](ConstSpan x) {
    Vec out(x.begin(), x.end());
    const double d = distance(x, center);
    if (d > radius) {
      // center + (x-center) * radius/d
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = center[i] + (x[i] - center[i]) * (radius / d);
    }
    return out;
  };

  const double s = std::max({1.0, radius, norm(y)});
  const double tol = impl_->cfg.dykstra_tol * s;

  // One-set shortcuts.
  Vec pk = impl_->project_vec(y);
  if (distance(pk, center) <= radius + 1e-15 * s) return pk;
  Vec pb = ball_proj(y);
  if (impl_->contains(pb, 1e-12 * s)) return pb;

  Vec x(y.begin(), y.end());
  Vec p(x.size(), 0.0), q(x.size(), 0.0);
  Vec a, bvec, prev(x.size(), 0.0);
  double gap_floor = std::numeric_limits<double>::infinity();
  long stall = 0;
  for (long it = 0; it < impl_->cfg.max_iterations; ++it) {
    Vec xp = add(x, p);
    a = ball_proj(xp);
    p = sub(xp, a);
    Vec aq = add(a, q);
    impl_->project(aq, bvec);
    q = sub(aq, bvec);
    const double gap = distance(a, bvec);
    const double step = distance(bvec, prev);
    prev = bvec;
    x = bvec;
    if (gap <= tol && step <= tol) return bvec;
    // Infeasibility shows up as a stalled positive gap.
    if (gap < gap_floor - 0.01 * tol) {
      gap_floor = gap;
      stall = 0;
    } else if (++stall > 2000 && gap > 100 * tol) {
      throw EmptyIntersectionError("ball/body intersection appears empty");
    }
  }
  throw NonConvergenceError("Dykstra intersection projection",
                            impl_->cfg.max_iterations, distance(a, bvec));
}

std::vector<Vec> ConvexBody::sample_points(int count, SampleMode mode,
                                           std::uint64_t seed) const {
  if (count < 1) throw InvalidSpecError("sample count must be >= 1");
  std::vector<Vec> out;
  out.reserve(count);
  switch (mode) {
    case SampleMode::ProbeGrid: {
      auto structured = impl_->probes(seed);
      for (auto& pt : structured) {
        if (static_cast<int>(out.size()) >= count) break;
        out.push_back(std::move(pt));
      }
      for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
        Rng rng(seed, 1000003ULL + i);
        out.push_back(impl_->sample_interior(rng));
      }
      break;
    }
    case SampleMode::Interior: {
      for (int i = 0; i < count; ++i) {
        Rng rng(seed, i);
        out.push_back(impl_->sample_interior(rng));
      }
      break;
    }
    case SampleMode::Boundary: {
      for (int i = 0; i < count; ++i) {
        Rng rng(seed, i);
        auto pt = impl_->sample_boundary(rng);
        if (!pt)
          throw UnsupportedModeError("no boundary sampler for kind " +
                                     kind_name(impl_->spec.kind));
        out.push_back(std::move(*pt));
      }
      break;
    }
  }
  return out;
}

Diameter ConvexBody::diameter() const { return impl_->diameter(); }
bool ConvexBody::centrally_symmetric() const { return impl_->symmetric(); }
bool ConvexBody::is_bounded() const { return !impl_->diameter().unbounded; }

std::optional<std::pair<Vec, double>> ConvexBody::support(ConstSpan dir) const {
  check_dim(impl_->spec, dir);
  return impl_->support(dir);
}

double ConvexBody::scale_hint() const { return impl_->scale_hint(); }

}  // namespace seqlab::bodies
