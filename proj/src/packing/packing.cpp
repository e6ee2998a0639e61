#include "seqlab/packing.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>

#include "seqlab/lattice.hpp"
#include "seqlab/parallel.hpp"
#include "seqlab/rng.hpp"

namespace seqlab::packing {

using bodies::Kind;
using bodies::SampleMode;

void PackingSet::validate(const ConvexBody& body, double membership_tol) const {
  const double guard = spacing - 1e-12 * std::max(1.0, spacing);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!body.contains(points[i], membership_tol))
      throw InvalidSpecError("packing point escapes the body");
    if (!whole_body) {
      if (distance(points[i], domain_center) >
          domain_radius + membership_tol + 1e-12)
        throw InvalidSpecError("packing point escapes the local ball");
    }
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (distance(points[i], points[j]) <= guard)
        throw InvalidSpecError("packing spacing violated");
    }
  }
}

PackingSet greedy_packing(const std::vector<Vec>& candidates, double delta,
                          long cap) {
  if (!(delta > 0)) throw InvalidPrecisionError("packing spacing must be > 0");
  PackingSet out;
  out.spacing = delta;
  out.maximal_wrt = static_cast<long>(candidates.size());
  const double d2 = delta * delta;
  for (const auto& c : candidates) {
    bool ok = true;
    for (const auto& kept : out.points) {
      if (squared_distance(c, kept) <= d2) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.points.push_back(c);
      if (cap > 0 && static_cast<long>(out.points.size()) >= cap) {
        // Stopped early: maximality holds only for the prefix examined.
        out.maximal_wrt = static_cast<long>(&c - candidates.data()) + 1;
        break;
      }
    }
  }
  return out;
}

namespace {

// Candidate cloud inside B(theta, eps) ∩ K: project a ball sample onto K and
// pull it back along the segment to theta (theta in K keeps the segment in K).
std::vector<Vec> local_cloud(const ConvexBody& body, ConstSpan theta,
                             double eps, long budget, std::uint64_t seed) {
  const int n = body.dim();
  std::vector<Vec> cloud(static_cast<std::size_t>(budget));
  parallel_for(0, static_cast<std::size_t>(budget), [&](std::size_t i) {
    Rng rng(seed, 0xC10D + i);
    Vec y = rng.gaussian_vector(n);
    const double nr = norm(y);
    const double rad = eps * std::pow(rng.uniform(), 1.0 / n);
    for (int d = 0; d < n; ++d)
      y[d] = theta[d] + (nr > 0 ? y[d] * rad / nr : 0.0);
    Vec z = body.project(y);
    const double dist = distance(z, theta);
    if (dist > eps) {
      const double shrink = eps / dist;
      for (int d = 0; d < n; ++d)
        z[d] = theta[d] + shrink * (z[d] - theta[d]);
    }
    cloud[i] = std::move(z);
  });
  return cloud;
}

}  // namespace

EntropyEstimate local_entropy(const ConvexBody& body, double eps, double c_star,
                              int probe_budget, long cloud_budget,
                              std::uint64_t seed, long count_cap) {
  if (!(eps > 0)) throw InvalidPrecisionError("local_entropy needs eps > 0");
  if (!(c_star > 1)) throw InvalidPrecisionError("local_entropy needs c* > 1");

  EntropyEstimate est;
  est.eps = eps;
  est.c_star = c_star;

  const int half = std::max(1, probe_budget / 2);
  auto probes = body.sample_points(half, SampleMode::ProbeGrid, seed);
  if (probe_budget > half) {
    auto extra =
        body.sample_points(probe_budget - half, SampleMode::Interior, seed + 1);
    probes.insert(probes.end(), extra.begin(), extra.end());
  }
  est.probe_centers_used = static_cast<int>(probes.size());

  const long per_probe = std::max<long>(64, cloud_budget / probes.size());
  long best = 1;
  bool capped = false;
  for (std::size_t pi = 0; pi < probes.size(); ++pi) {
    const auto cloud = local_cloud(body, probes[pi], eps, per_probe, seed + pi);
    const auto pack = greedy_packing(cloud, eps / c_star, count_cap);
    const long count = static_cast<long>(pack.points.size());
    if (count > best) {
      best = count;
      capped = count_cap > 0 && count >= count_cap;
    }
    if (count_cap > 0 && best >= count_cap) break;
  }
  est.count_lower = best;
  est.log_count_lower = std::log(static_cast<double>(best));
  est.capped = capped;
  est.log_count_upper = local_entropy_upper(body, eps, c_star);
  return est;
}

EntropyEstimate global_entropy(const ConvexBody& body, double eps,
                               long cloud_budget, std::uint64_t seed,
                               long count_cap) {
  if (!(eps > 0)) throw InvalidPrecisionError("global_entropy needs eps > 0");
  if (!body.is_bounded())
    throw UnboundedBodyError("global_entropy rejects unbounded bodies");
  EntropyEstimate est;
  est.eps = eps;
  est.c_star = 1.0;
  auto cloud = body.sample_points(
      std::max<long>(16, cloud_budget / 8), SampleMode::ProbeGrid, seed);
  auto interior = body.sample_points(
      std::max<long>(16, cloud_budget - static_cast<long>(cloud.size())),
      SampleMode::Interior, seed + 1);
  cloud.insert(cloud.end(), interior.begin(), interior.end());
  const auto pack = greedy_packing(cloud, eps, count_cap);
  est.count_lower = static_cast<long>(pack.points.size());
  est.log_count_lower = std::log(static_cast<double>(est.count_lower));
  est.capped = count_cap > 0 && est.count_lower >= count_cap;
  est.probe_centers_used = 1;
  return est;
}

double local_entropy_upper(const ConvexBody& body, double eps, double c_star) {
  const auto d = body.diameter();
  if (!d.unbounded && eps / c_star > d.upper) return 0.0;
  // Volume bound: any eps/c* packing of an eps ball has at most (1+2c*)^n
  // points.
  double upper = body.dim() * std::log1p(2.0 * c_star);
  const auto& spec = body.spec();
  switch (spec.kind) {
    case Kind::Singleton:
      return 0.0;
    case Kind::IsotonicTV: {
      const double v = spec.tv;
      upper = std::min(upper,
                       3.0 * c_star * (v * std::sqrt(double(spec.n)) + eps) / eps);
      break;
    }
    case Kind::IsotonicBox: {
      const double v = spec.hi - spec.lo;
      upper = std::min(upper,
                       3.0 * c_star * (v * std::sqrt(double(spec.n)) + eps) / eps);
      break;
    }
    default:
      break;
  }
  return upper;
}

std::pair<double, double> yang_barron_interval(double logM_fine,
                                               double logM_coarse) {
  if (logM_coarse < -1e-12 || logM_fine < logM_coarse - 1e-12)
    throw OrderViolationError("need logM_fine >= logM_coarse >= 0");
  return {std::max(0.0, logM_fine - logM_coarse), logM_fine};
}

LocalEntropyEval::LocalEntropyEval(ConvexBody body, double c_star,
                                   EntropyBudget budget, std::uint64_t seed)
    : body_(std::move(body)), c_star_(c_star), budget_(budget), seed_(seed) {}

double LocalEntropyEval::lower(double eps, double needed) {
  long cap = budget_.count_cap;
  if (needed > 0) {
    const double want = std::exp(std::min(needed, 25.0)) + 1.0;
    cap = static_cast<long>(std::min<double>(want, 2e7));
  }
  // Reuse any evaluation that already answers the question.
  double env = 0.0;
  bool have_exact = false;
  for (const auto& [e, v, was_capped] : evals_) {
    if (e >= eps * (1.0 - 1e-12)) env = std::max(env, v);
    if (std::fabs(e - eps) <= 1e-12 * eps) {
      if (!was_capped || (needed > 0 && v >= needed)) have_exact = true;
    }
  }
  if (needed > 0 && env >= needed) return env;
  if (!have_exact) {
    const auto est = local_entropy(body_, eps, c_star_, budget_.probe_budget,
                                   budget_.cloud_budget, seed_, cap);
    evals_.emplace_back(eps, est.log_count_lower, est.capped);
    env = std::max(env, est.log_count_lower);
  }
  return env;
}

double LocalEntropyEval::upper(double eps) const {
  return local_entropy_upper(body_, eps, c_star_);
}

RateBracket minimax_rate(const ConvexBody& body, double sigma, double c_star,
                         const EntropyBudget& budget, std::uint64_t seed,
                         double c1, double c2, int bisect_iters) {
  if (!(sigma > 0)) throw InvalidPrecisionError("minimax_rate needs sigma > 0");
  if (!body.is_bounded())
    throw UnboundedBodyError("minimax_rate rejects unbounded bodies");
  const double d = body.diameter().upper;

  RateBracket out;
  out.method = RateMethod::MinimaxStar;
  out.sigma = sigma;
  if (d <= 0.0) {  // singleton: log M^loc == 0 everywhere
    out.lower = out.upper = 0.0;
    out.notes = "degenerate body";
    return out;
  }

  LocalEntropyEval entropy(body, c_star, budget, seed);
  auto pred_lower = [&](double eps) {
    const double needed = eps * eps / (c1 * sigma * sigma);
    return c1 * entropy.lower(c2 * eps, needed) >=
           eps * eps / (sigma * sigma);
  };
  auto pred_upper = [&](double eps) {
    return eps * eps / (sigma * sigma) <= c1 * entropy.upper(c2 * eps);
  };

  double lo = 1e-6 * d, hi = 2.0 * d;
  double lower = 0.0;
  if (pred_lower(lo)) {
    lower = lo;
    double a = lo, b = hi;
    for (int it = 0; it < bisect_iters; ++it) {
      const double mid = std::sqrt(a * b);
      if (pred_lower(mid)) {
        a = mid;
        lower = mid;
      } else {
        b = mid;
      }
    }
  }

  double upper = 0.0;
  {
    double a = 1e-9 * d, b = (c_star + 1.0) * d;
    if (!pred_upper(a)) {
      upper = 0.0;
    } else {
      for (int it = 0; it < 60; ++it) {
        const double mid = std::sqrt(a * b);
        if (pred_upper(mid))
          a = mid;
        else
          b = mid;
      }
      upper = a;
    }
  }

  out.lower = std::min(lower, d);
  out.upper = std::min(std::max(upper, out.lower), d);
  out.notes = "c*=" + std::to_string(c_star) + " C1=" + std::to_string(c1) +
              " C2=" + std::to_string(c2);
  return out;
}

namespace {

// Greedy binary code at Hamming distance >= threshold. Enumerates
// sequentially (or pseudo-randomly past the budget) and stops at cap.
std::vector<std::vector<std::uint64_t>> greedy_code(int bits, long threshold,
                                                    long cap, long budget) {
  const int words = (bits + 63) / 64;
  std::vector<std::vector<std::uint64_t>> kept;
  auto hamming = [&](const std::vector<std::uint64_t>& a,
                     const std::vector<std::uint64_t>& b) {
    long h = 0;
    for (int w = 0; w < words; ++w)
      h += __builtin_popcountll(a[w] ^ b[w]);
    return h;
  };
  const bool exhaustive = bits <= 26;
  const long total = exhaustive ? (1L << bits) : budget;
  std::vector<std::uint64_t> cand(words, 0);
  Rng rng(0x5eedc0de, 17);
  for (long c = 0; c < total && c < budget; ++c) {
    if (exhaustive) {
      cand.assign(words, 0);
      cand[0] = static_cast<std::uint64_t>(c);
    } else {
      for (int w = 0; w < words; ++w) cand[w] = rng.next_u64();
      const int rem = bits % 64;
      if (rem) cand[words - 1] &= (1ULL << rem) - 1;
    }
    bool ok = true;
    for (const auto& k : kept) {
      if (hamming(cand, k) < threshold) {
        ok = false;
        break;
      }
    }
    if (ok) {
      kept.push_back(cand);
      if (cap > 0 && static_cast<long>(kept.size()) >= cap) break;
    }
  }
  return kept;
}

}  // namespace

PackingSet isotonic_vg_packing(int n, double a, double b, double eps,
                               long enumeration_budget) {
  PackingSet out;
  out.whole_body = true;
  if (b - a <= 0.0) {
    out.points.push_back(Vec(n, a));
    out.spacing = 0.0;
    return out;
  }
  const double range = b - a;
  const double k_real = eps * std::sqrt(double(n)) / range;
  if (k_real < 0.5)
    throw RegimeViolationError(
        "isotonic staircase packing needs eps >= (b-a)/sqrt(n)");
  const long k = std::max<long>(1, std::llround(k_real));
  const long blocks = n / k;
  const double h = range * double(k) / double(n);

  Vec u(n);
  for (long i = 0; i < n; ++i) {
    const long blk = std::min(blocks - 1, i / k);
    u[i] = a + h * double(blk);
  }
  const long m = blocks - 2;
  if (m < 1) {
    out.points.push_back(std::move(u));
    out.spacing = 0.0;
    return out;
  }

  const long threshold = std::max<long>(1, static_cast<long>(std::ceil(m / 8.0)));
  const long target =
      static_cast<long>(std::ceil(std::exp(std::min(25.0, m / 8.0))));
  auto codes = greedy_code(static_cast<int>(m), threshold,
                           std::max<long>(target, 64), enumeration_budget);

  for (const auto& code : codes) {
    Vec x = u;
    for (long j = 0; j < m; ++j) {
      const bool bit = (code[j / 64] >> (j % 64)) & 1;
      if (!bit) continue;
      const long blk = 1 + j;  // perturb interior blocks only
      const long lo_i = blk * k;
      const long hi_i = std::min<long>(n, lo_i + k);
      for (long i = lo_i; i < hi_i; ++i) x[i] += h;
    }
    out.points.push_back(std::move(x));
  }
  out.spacing =
      std::sqrt(double(threshold) * double(k)) * h * (1.0 - 1e-9);
  out.maximal_wrt = enumeration_budget;
  out.log_count_claimed = m / 8.0;
  return out;
}

long multiiso_antichain_size(int p, double eps_internal) {
  const int m = static_cast<int>(std::llround(-std::log2(eps_internal)));
  const long cubes = 1L << m;
  // Compositions of `cubes` into p parts, each part < cubes.
  std::function<long(int, long)> rec = [&](int dims, long remain) -> long {
    if (dims == 1) return remain < cubes ? 1 : 0;
    long total = 0;
    for (long r = std::max<long>(0, remain - (dims - 1) * (cubes - 1));
         r <= std::min(cubes - 1, remain); ++r)
      total += rec(dims - 1, remain - r);
    return total;
  };
  return rec(p, cubes);
}

PackingSet multiiso_vg_packing(int p, int n, double eps_internal,
                               long enumeration_budget) {
  const auto grid = lattice::Grid::make(p, n);
  PackingSet out;
  out.whole_body = true;
  if (!(eps_internal > 0.0) || !(eps_internal < 1.0 + 1e-12)) {
    out.points.push_back(Vec(n, 0.0));
    out.spacing = 0.0;
    return out;
  }
  const int m = static_cast<int>(std::llround(-std::log2(eps_internal)));
  if (std::fabs(eps_internal - std::ldexp(1.0, -m)) > 1e-9 * eps_internal)
    throw RegimeViolationError("internal eps must be dyadic 2^-m");
  if (m == 0) {
    out.points.push_back(Vec(n, 0.0));
    out.spacing = 0.0;
    return out;
  }
  const long cubes = 1L << m;
  if (grid.side % cubes != 0)
    throw RegimeViolationError("2^m must divide the lattice side length");
  const long ksub = grid.side / cubes;

  // Antichain cubes: sum of indices == 2^m.
  std::vector<std::vector<int>> anti;
  std::vector<int> r(p, 0);
  std::function<void(int, long)> rec = [&](int dim, long remain) {
    if (dim == p - 1) {
      if (remain < cubes) {
        r[dim] = static_cast<int>(remain);
        anti.push_back(r);
      }
      return;
    }
    const long lo = std::max<long>(0, remain - (p - 1 - dim) * (cubes - 1));
    for (long v = lo; v <= std::min(cubes - 1, remain); ++v) {
      r[dim] = static_cast<int>(v);
      rec(dim + 1, remain - v);
    }
  };
  rec(0, cubes);
  const long a_size = static_cast<long>(anti.size());
  if (a_size == 0) {
    out.points.push_back(Vec(n, 0.0));
    out.spacing = 0.0;
    return out;
  }

  std::map<std::vector<int>, long> anti_index;
  for (long i = 0; i < a_size; ++i) anti_index[anti[i]] = i;

  const long threshold =
      std::max<long>(1, static_cast<long>(std::ceil(a_size / 4.0)));
  const long target =
      static_cast<long>(std::ceil(std::exp(std::min(25.0, a_size / 32.0))));
  auto codes = greedy_code(static_cast<int>(a_size), threshold,
                           std::max<long>(target, 32), enumeration_budget);

  // Precompute each lattice point's cube and diagonal sum.
  std::vector<long> cube_of(n, -1);
  std::vector<int> regime(n, 0);  // -1 below, +1 above, 0 on the antichain
  std::vector<int> rr(p);
  for (int j = 0; j < n; ++j) {
    long s = 0;
    for (int d = 0; d < p; ++d) {
      const int coord1 = grid.coord(j, d) + 1;  // 1-based lattice coordinate
      rr[d] = static_cast<int>((coord1 - 1) / ksub);
      s += rr[d];
    }
    if (s > cubes)
      regime[j] = 1;
    else if (s < cubes)
      regime[j] = -1;
    else
      cube_of[j] = anti_index.at(rr);
  }

  for (const auto& code : codes) {
    Vec x(n, 0.0);
    for (int j = 0; j < n; ++j) {
      if (regime[j] > 0)
        x[j] = 1.0;
      else if (regime[j] == 0)
        x[j] = (code[cube_of[j] / 64] >> (cube_of[j] % 64)) & 1 ? 1.0 : 0.0;
    }
    out.points.push_back(std::move(x));
  }
  out.spacing = std::sqrt(double(threshold) * double(n) *
                          std::pow(eps_internal, p)) *
                (1.0 - 1e-9);
  out.maximal_wrt = enumeration_budget;
  out.log_count_claimed = a_size / 32.0;
  return out;
}

}  // namespace seqlab::packing
