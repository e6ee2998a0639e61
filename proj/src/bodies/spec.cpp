#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

#include "seqlab/bodies.hpp"

namespace seqlab::bodies {

namespace {

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  h ^= v;
  return h * 1099511628211ULL;
}

std::uint64_t hash_vec(std::uint64_t h, const Vec& v) {
  for (const double x : v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    std::memcpy(&bits, &x, sizeof(bits));
    h = fnv_mix(h, bits);
  }
  return h;
}

}  // namespace

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::L2Ball: return "l2_ball";
    case Kind::L1Ball: return "l1_ball";
    case Kind::LpBall: return "lp_ball";
    case Kind::HyperRectangle: return "hyper_rectangle";
    case Kind::Ellipsoid: return "ellipsoid";
    case Kind::IsotonicTV: return "isotonic_tv";
    case Kind::IsotonicBox: return "isotonic_box";
    case Kind::MultiIsotonicLattice: return "multi_isotonic_lattice";
    case Kind::Subspace: return "subspace";
    case Kind::Pyramid: return "pyramid";
    case Kind::SolidOfRevolution: return "solid_of_revolution";
    case Kind::Singleton: return "singleton";
    case Kind::FullSpace: return "full_space";
  }
  throw InvalidSpecError("unknown body kind");
}

Kind kind_from_name(const std::string& name) {
  static const std::pair<const char*, Kind> table[] = {
      {"l2_ball", Kind::L2Ball},
      {"l1_ball", Kind::L1Ball},
      {"lp_ball", Kind::LpBall},
      {"hyper_rectangle", Kind::HyperRectangle},
      {"ellipsoid", Kind::Ellipsoid},
      {"isotonic_tv", Kind::IsotonicTV},
      {"isotonic_box", Kind::IsotonicBox},
      {"multi_isotonic_lattice", Kind::MultiIsotonicLattice},
      {"subspace", Kind::Subspace},
      {"pyramid", Kind::Pyramid},
      {"solid_of_revolution", Kind::SolidOfRevolution},
      {"singleton", Kind::Singleton},
      {"full_space", Kind::FullSpace},
  };
  for (const auto& [key, kind] : table)
    if (name == key) return kind;
  throw InvalidSpecError("unknown body kind: " + name);
}

BodySpec BodySpec::l2_ball(int n, double r) {
  BodySpec s;
  s.kind = Kind::L2Ball;
  s.n = n;
  s.radius = r;
  return s;
}

BodySpec BodySpec::l1_ball(int n, double r) {
  BodySpec s;
  s.kind = Kind::L1Ball;
  s.n = n;
  s.radius = r;
  return s;
}

BodySpec BodySpec::lp_ball(int n, double p, double r) {
  BodySpec s;
  s.kind = Kind::LpBall;
  s.n = n;
  s.p = p;
  s.radius = r;
  return s;
}

BodySpec BodySpec::hyper_rectangle(Vec half_widths) {
  BodySpec s;
  s.kind = Kind::HyperRectangle;
  s.n = static_cast<int>(half_widths.size());
  s.half_widths = std::move(half_widths);
  return s;
}

BodySpec BodySpec::ellipsoid(Vec axes) {
  BodySpec s;
  s.kind = Kind::Ellipsoid;
  s.n = static_cast<int>(axes.size());
  s.axes = std::move(axes);
  return s;
}

BodySpec BodySpec::isotonic_tv(int n, double v) {
  BodySpec s;
  s.kind = Kind::IsotonicTV;
  s.n = n;
  s.tv = v;
  return s;
}

BodySpec BodySpec::isotonic_box(int n, double lo, double hi) {
  BodySpec s;
  s.kind = Kind::IsotonicBox;
  s.n = n;
  s.lo = lo;
  s.hi = hi;
  return s;
}

BodySpec BodySpec::multi_isotonic(int p, int n, double lo, double hi) {
  BodySpec s;
  s.kind = Kind::MultiIsotonicLattice;
  s.n = n;
  s.lattice_p = p;
  s.lo = lo;
  s.hi = hi;
  return s;
}

BodySpec BodySpec::subspace(int n, Vec basis_col_major, int k) {
  BodySpec s;
  s.kind = Kind::Subspace;
  s.n = n;
  s.basis = std::move(basis_col_major);
  s.subspace_dim = k;
  return s;
}

BodySpec BodySpec::pyramid(Vec apex, BodySpec base_spec) {
  BodySpec s;
  s.kind = Kind::Pyramid;
  s.n = static_cast<int>(apex.size());
  s.apex = std::move(apex);
  s.base = std::make_shared<const BodySpec>(std::move(base_spec));
  return s;
}

BodySpec BodySpec::solid_of_revolution(int n, Vec knots, Vec values) {
  BodySpec s;
  s.kind = Kind::SolidOfRevolution;
  s.n = n;
  s.knots = std::move(knots);
  s.values = std::move(values);
  return s;
}

BodySpec BodySpec::singleton(Vec point) {
  BodySpec s;
  s.kind = Kind::Singleton;
  s.n = static_cast<int>(point.size());
  s.point = std::move(point);
  return s;
}

BodySpec BodySpec::full_space(int n) {
  BodySpec s;
  s.kind = Kind::FullSpace;
  s.n = n;
  return s;
}

nlohmann::ordered_json BodySpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(kind);
  j["n"] = n;
  switch (kind) {
    case Kind::L2Ball:
    case Kind::L1Ball:
      j["radius"] = radius;
      break;
    case Kind::LpBall:
      j["p"] = p;
      j["radius"] = radius;
      break;
    case Kind::HyperRectangle:
      j["half_widths"] = half_widths;
      break;
    case Kind::Ellipsoid:
      j["axes"] = axes;
      break;
    case Kind::IsotonicTV:
      j["v"] = tv;
      break;
    case Kind::IsotonicBox:
      j["lo"] = lo;
      j["hi"] = hi;
      break;
    case Kind::MultiIsotonicLattice:
      j["p"] = lattice_p;
      j["lo"] = lo;
      j["hi"] = hi;
      break;
    case Kind::Subspace:
      j["dim"] = subspace_dim;
      j["basis"] = basis;
      break;
    case Kind::Pyramid:
      j["apex"] = apex;
      j["base"] = base ? base->to_json() : nlohmann::ordered_json();
      break;
    case Kind::SolidOfRevolution:
      j["knots"] = knots;
      j["values"] = values;
      break;
    case Kind::Singleton:
      j["point"] = point;
      break;
    case Kind::FullSpace:
      break;
  }
  return j;
}

BodySpec BodySpec::from_json(const nlohmann::json& j) {
  BodySpec s;
  s.kind = kind_from_name(j.at("kind").get<std::string>());
  s.n = j.at("n").get<int>();
  switch (s.kind) {
    case Kind::L2Ball:
    case Kind::L1Ball:
      s.radius = j.at("radius").get<double>();
      break;
    case Kind::LpBall:
      s.p = j.at("p").get<double>();
      s.radius = j.at("radius").get<double>();
      break;
    case Kind::HyperRectangle:
      s.half_widths = j.at("half_widths").get<Vec>();
      break;
    case Kind::Ellipsoid:
      s.axes = j.at("axes").get<Vec>();
      break;
    case Kind::IsotonicTV:
      s.tv = j.at("v").get<double>();
      break;
    case Kind::IsotonicBox:
      s.lo = j.at("lo").get<double>();
      s.hi = j.at("hi").get<double>();
      break;
    case Kind::MultiIsotonicLattice:
      s.lattice_p = j.at("p").get<int>();
      s.lo = j.at("lo").get<double>();
      s.hi = j.at("hi").get<double>();
      break;
    case Kind::Subspace:
      s.subspace_dim = j.at("dim").get<int>();
      s.basis = j.at("basis").get<Vec>();
      break;
    case Kind::Pyramid:
      s.apex = j.at("apex").get<Vec>();
      s.base = std::make_shared<const BodySpec>(from_json(j.at("base")));
      break;
    case Kind::SolidOfRevolution:
      s.knots = j.at("knots").get<Vec>();
      s.values = j.at("values").get<Vec>();
      break;
    case Kind::Singleton:
      s.point = j.at("point").get<Vec>();
      break;
    case Kind::FullSpace:
      break;
  }
  return s;
}

std::string BodySpec::id() const {
  std::uint64_t h = 1469598103934665603ULL;
  h = fnv_mix(h, static_cast<std::uint64_t>(kind));
  h = fnv_mix(h, static_cast<std::uint64_t>(n));
  h = hash_vec(h, {radius, p, tv, lo, hi, static_cast<double>(lattice_p),
                   static_cast<double>(subspace_dim)});
  h = hash_vec(h, half_widths);
  h = hash_vec(h, axes);
  h = hash_vec(h, basis);
  h = hash_vec(h, apex);
  h = hash_vec(h, knots);
  h = hash_vec(h, values);
  h = hash_vec(h, point);
  if (base) {
    for (const char c : base->id()) h = fnv_mix(h, static_cast<std::uint64_t>(c));
  }
  std::ostringstream out;
  out << kind_name(kind) << "_n" << n << "_" << std::hex << (h & 0xffffffffULL);
  return out.str();
}

}  // namespace seqlab::bodies
