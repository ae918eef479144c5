#include "crosslab/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "crosslab/quadrature.hpp"

namespace crosslab {

RadialKernel RadialKernel::make(double delta) {
  if (!(delta > 0.0) || !(delta <= 0.2))
    throw std::invalid_argument("RadialKernel: delta must lie in (0, 0.2]");
  RadialKernel k;
  k.delta = delta;
  k.normalization = 1.0;
  // integral of profile(d(x,y)) over mu(dy) = (1/2) int_0^delta k(u) sin u du
  const QuadResult q = integrate_adaptive(
      [&](double u) { return k.profile(u) * std::sin(u); }, 0.0, delta, 1e-10);
  k.normalization = 0.5 * q.value;
  if (!(k.normalization > 0.0)) throw std::runtime_error("RadialKernel: normalization failed");
  return k;
}

double RadialKernel::lipschitz() const {
  // d/du profile = -profile(u) * 2u/delta^2 / (1-(u/delta)^2)^2
  double worst = 0.0;
  const int n = 4096;
  for (int i = 1; i < n; ++i) {
    const double u = delta * i / n;
    const double s = (u / delta) * (u / delta);
    const double d = profile(u) * 2.0 * u / (delta * delta) / ((1.0 - s) * (1.0 - s));
    worst = std::max(worst, std::abs(d));
  }
  return worst / normalization;
}

// ---------------------------------------------------------------------------
// Smoothed density machinery
// ---------------------------------------------------------------------------

namespace {

// Fixed-radius neighbor index over unit vectors; cells of chord size.
class VertexGrid {
 public:
  VertexGrid(const std::vector<UnitVec3>& pts, double radius) : pts_(pts), radius_(radius) {
    cell_ = std::max(1e-3, 2.0 * std::sin(0.5 * std::min(radius, 3.141592653589793)));
    for (std::uint32_t i = 0; i < pts.size(); ++i) cells_[key(pts[i].vec())].push_back(i);
  }

  /// Invokes fn for the indices (ascending) of vertices within `radius_` of x.
  template <class Fn>
  void for_neighbors(const UnitVec3& x, const Fn& fn) const {
    thread_local std::vector<std::uint32_t> scratch;
    const double cos_r = std::cos(radius_);
    const Vec3& v = x.vec();
    const long cx = static_cast<long>(std::floor(v.x / cell_));
    const long cy = static_cast<long>(std::floor(v.y / cell_));
    const long cz = static_cast<long>(std::floor(v.z / cell_));
    scratch.clear();
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          const auto it = cells_.find(pack(cx + dx, cy + dy, cz + dz));
          if (it == cells_.end()) continue;
          for (std::uint32_t j : it->second)
            if (pts_[j].vec().dot(v) >= cos_r) scratch.push_back(j);
        }
    std::sort(scratch.begin(), scratch.end());
    for (std::uint32_t j : scratch) fn(j);
  }

 private:
  static std::uint64_t pack(long a, long b, long c) {
    return (static_cast<std::uint64_t>(a + (1L << 20)) << 42) |
           (static_cast<std::uint64_t>(b + (1L << 20)) << 21) |
           static_cast<std::uint64_t>(c + (1L << 20));
  }
  std::uint64_t key(const Vec3& v) const {
    return pack(static_cast<long>(std::floor(v.x / cell_)), static_cast<long>(std::floor(v.y / cell_)),
                static_cast<long>(std::floor(v.z / cell_)));
  }

  const std::vector<UnitVec3>& pts_;
  double radius_, cell_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace

/// Everything the smoothed evaluate needs, built once and then read-only.
struct SmoothedData {
  std::vector<UnitVec3> vertices;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adjacency;  // (other, edge id)
  RadialKernel kernel;
  std::unique_ptr<VertexGrid> grid;
  std::size_t n = 0;

  double rho(const UnitVec3& x) const {
    double sum = 0.0;
    grid->for_neighbors(
        x, [&](std::uint32_t v) { sum += kernel(spherical_distance(x, vertices[v])); });
    return sum / static_cast<double>(n);
  }

  // w(x,y) = (1/n^2) sum over oriented edges of K_u(x) K_v(y); assembled per
  // undirected edge in index order so that evaluate(x,y) == evaluate(y,x)
  // bitwise.
  double w(const UnitVec3& x, const UnitVec3& y) const {
    thread_local std::vector<std::pair<std::uint32_t, double>> near_x, near_y;
    thread_local std::vector<std::uint32_t> candidate_edges;
    near_x.clear();
    near_y.clear();
    candidate_edges.clear();

    grid->for_neighbors(x, [&](std::uint32_t v) {
      near_x.emplace_back(v, kernel(spherical_distance(x, vertices[v])));
    });
    if (near_x.empty()) return 0.0;
    grid->for_neighbors(y, [&](std::uint32_t v) {
      near_y.emplace_back(v, kernel(spherical_distance(y, vertices[v])));
    });
    if (near_y.empty()) return 0.0;

    auto weight_in = [](const std::vector<std::pair<std::uint32_t, double>>& set,
                        std::uint32_t v) -> double {
      auto it = std::lower_bound(set.begin(), set.end(), v,
                                 [](const auto& a, std::uint32_t b) { return a.first < b; });
      return (it != set.end() && it->first == v) ? it->second : 0.0;
    };

    for (const auto& [u, wu] : near_x) {
      (void)wu;
      for (const auto& [v, eid] : adjacency[u])
        if (weight_in(near_y, v) > 0.0) candidate_edges.push_back(eid);
    }
    std::sort(candidate_edges.begin(), candidate_edges.end());
    candidate_edges.erase(std::unique(candidate_edges.begin(), candidate_edges.end()),
                          candidate_edges.end());

    double sum = 0.0;
    for (std::uint32_t eid : candidate_edges) {
      const auto [a, b] = edges[eid];
      sum += weight_in(near_x, a) * weight_in(near_y, b) +
             weight_in(near_x, b) * weight_in(near_y, a);
    }
    return sum / (static_cast<double>(n) * static_cast<double>(n));
  }
};

double EdgeDensity::evaluate(const UnitVec3& x, const UnitVec3& y) const {
  if (ambient_ != Ambient::Sphere)
    throw std::logic_error("EdgeDensity: spherical evaluate on a planar density");
  switch (kind_) {
    case Kind::Constant:
      return scale_ * p1_;
    case Kind::Threshold:
      return spherical_distance(x, y) <= p1_ ? scale_ : 0.0;
    case Kind::Band: {
      const double d = spherical_distance(x, y);
      return (p1_ <= d && d <= p2_) ? scale_ : 0.0;
    }
    case Kind::Smoothed:
      return scale_ * smoothed_->w(x, y);
  }
  return 0.0;
}

double EdgeDensity::evaluate(const Point2& x, const Point2& y) const {
  if (ambient_ != Ambient::Planar)
    throw std::logic_error("EdgeDensity: planar evaluate on a spherical density");
  switch (kind_) {
    case Kind::Constant:
      return scale_ * p1_;
    case Kind::Threshold:
      return (x - y).norm() <= p1_ ? scale_ : 0.0;
    case Kind::Band: {
      const double d = (x - y).norm();
      return (p1_ <= d && d <= p2_) ? scale_ : 0.0;
    }
    case Kind::Smoothed:
      break;
  }
  throw std::logic_error("EdgeDensity: unsupported planar kind");
}

std::optional<double> EdgeDensity::closed_form_edge_density() const {
  if (ambient_ != Ambient::Sphere) {
    if (kind_ == Kind::Constant) return scale_ * p1_;
    return std::nullopt;  // planar threshold has boundary effects; MC only
  }
  switch (kind_) {
    case Kind::Constant:
      return scale_ * p1_;
    case Kind::Threshold:
      return scale_ * 0.5 * (1.0 - std::cos(p1_));
    case Kind::Band:
      return scale_ * 0.5 * (std::cos(p1_) - std::cos(p2_));
    case Kind::Smoothed: {
      const double n = static_cast<double>(smoothed_->n);
      return scale_ * 2.0 * static_cast<double>(smoothed_->edges.size()) / (n * n);
    }
  }
  return std::nullopt;
}

std::optional<double> EdgeDensity::smoothing_scale() const {
  if (kind_ != Kind::Smoothed) return std::nullopt;
  return smoothed_->kernel.delta;
}

std::string EdgeDensity::describe() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::Threshold:
      os << "threshold:" << p1_;
      break;
    case Kind::Band:
      os << "band:" << p1_ << "," << p2_;
      break;
    case Kind::Constant:
      os << "const:" << p1_;
      break;
    case Kind::Smoothed:
      os << "smoothed:n=" << smoothed_->n << ",delta=" << smoothed_->kernel.delta;
      break;
  }
  if (scale_ != 1.0) os << ",scale=" << scale_;
  return os.str();
}

EdgeDensity EdgeDensity::threshold_sphere(double t) {
  if (!(t > 0.0) || !(t <= 3.14159265358979323846))
    throw std::invalid_argument("threshold_sphere: t must lie in (0, pi]");
  EdgeDensity d;
  d.ambient_ = Ambient::Sphere;
  d.kind_ = Kind::Threshold;
  d.p1_ = t;
  return d;
}

EdgeDensity EdgeDensity::band_sphere(double t1, double t2) {
  if (!(0.0 <= t1) || !(t1 < t2) || !(t2 <= 3.14159265358979323846))
    throw std::invalid_argument("band_sphere: need 0 <= t1 < t2 <= pi");
  EdgeDensity d;
  d.ambient_ = Ambient::Sphere;
  d.kind_ = Kind::Band;
  d.p1_ = t1;
  d.p2_ = t2;
  return d;
}

EdgeDensity EdgeDensity::threshold_planar(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("threshold_planar: r must be positive");
  EdgeDensity d;
  d.ambient_ = Ambient::Planar;
  d.kind_ = Kind::Threshold;
  d.p1_ = r;
  return d;
}

EdgeDensity EdgeDensity::band_planar(double r1, double r2) {
  if (!(0.0 <= r1) || !(r1 < r2)) throw std::invalid_argument("band_planar: need 0 <= r1 < r2");
  EdgeDensity d;
  d.ambient_ = Ambient::Planar;
  d.kind_ = Kind::Band;
  d.p1_ = r1;
  d.p2_ = r2;
  return d;
}

EdgeDensity EdgeDensity::constant(Ambient ambient, double p) {
  if (!(p >= 0.0) || !(p <= 1.0)) throw std::invalid_argument("constant: p must lie in [0,1]");
  EdgeDensity d;
  d.ambient_ = ambient;
  d.kind_ = Kind::Constant;
  d.p1_ = p;
  return d;
}

double threshold_for_density(double e) {
  if (!(e >= 0.0) || !(e <= 1.0)) throw std::invalid_argument("threshold_for_density: e in [0,1]");
  // cos t = 1 - 2e, evaluated as t = 2 asin(sqrt(e)) for accuracy at both ends
  return 2.0 * std::asin(std::min(1.0, std::sqrt(e)));
}

SmoothedPair smoothed_from_drawing(const Drawing& d, double delta, std::size_t eta_probe_points) {
  if (d.ambient != Ambient::Sphere)
    throw std::invalid_argument("smoothed_from_drawing: spherical drawings only");

  auto data = std::make_shared<SmoothedData>();
  data->vertices = d.sphere_vertices;
  data->edges = d.edges;
  data->kernel = RadialKernel::make(delta);
  data->n = d.n();
  data->adjacency.resize(d.n());
  for (std::uint32_t e = 0; e < d.m(); ++e) {
    const auto [a, b] = d.edges[e];
    data->adjacency[a].emplace_back(b, e);
    data->adjacency[b].emplace_back(a, e);
  }
  data->grid = std::make_unique<VertexGrid>(data->vertices, delta);

  SmoothedPair sp;
  sp.w.ambient_ = Ambient::Sphere;
  sp.w.kind_ = EdgeDensity::Kind::Smoothed;
  sp.w.smoothed_ = data;

  // Sup-norm deviation of rho from 1 over a Fibonacci probe grid, plus a
  // Lipschitz slack covering the gaps between probes.
  const std::vector<UnitVec3> probes = fibonacci_sphere(eta_probe_points);
  double worst = 0.0;
  double max_local = 0.0;
  for (const UnitVec3& p : probes) {
    double count = 0;
    double sum = 0.0;
    data->grid->for_neighbors(p, [&](std::uint32_t v) {
      sum += data->kernel(spherical_distance(p, data->vertices[v]));
      count += 1.0;
    });
    worst = std::max(worst, std::abs(sum / static_cast<double>(data->n) - 1.0));
    max_local = std::max(max_local, count);
  }
  // Probe mesh: covering radius of the Fibonacci grid, estimated from the
  // equal-area cap radius with a safety factor.
  const double cap = 2.0 / static_cast<double>(eta_probe_points);
  sp.mesh = 2.0 * std::acos(1.0 - cap);
  const double lip_rho = max_local / static_cast<double>(data->n) * data->kernel.lipschitz();
  sp.eta_grid = worst;
  sp.eta = worst + lip_rho * sp.mesh;
  return sp;
}

double SmoothedPair::rho(const UnitVec3& x) const {
  return w.smoothed_data()->rho(x);
}

const RadialKernel& SmoothedPair::kernel() const { return w.smoothed_data()->kernel; }

std::size_t SmoothedPair::vertex_count() const { return w.smoothed_data()->n; }

EdgeDensity rescale_near_uniform(const SmoothedPair& sp) {
  if (!(sp.eta >= 0.0)) throw std::invalid_argument("rescale_near_uniform: eta must be >= 0");
  EdgeDensity d = sp.w;
  d.scale_ = sp.w.scale_ / ((1.0 + sp.eta) * (1.0 + sp.eta));
  return d;
}

EdgeDensity parse_density(const std::string& spec, Ambient ambient) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("density spec: missing ':' in " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  auto parse_list = [&](std::size_t expect) {
    std::vector<double> out;
    std::istringstream is(body);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    if (out.size() != expect)
      throw std::invalid_argument("density spec: wrong arity in " + spec);
    return out;
  };

  if (kind == "threshold") {
    const auto v = parse_list(1);
    return ambient == Ambient::Sphere ? EdgeDensity::threshold_sphere(v[0])
                                      : EdgeDensity::threshold_planar(v[0]);
  }
  if (kind == "band") {
    const auto v = parse_list(2);
    return ambient == Ambient::Sphere ? EdgeDensity::band_sphere(v[0], v[1])
                                      : EdgeDensity::band_planar(v[0], v[1]);
  }
  if (kind == "const") {
    const auto v = parse_list(1);
    return EdgeDensity::constant(ambient, v[0]);
  }
  if (kind == "smoothed") {
    if (ambient != Ambient::Sphere)
      throw std::invalid_argument("density spec: smoothed densities are spherical");
    const auto comma = body.rfind(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("density spec: smoothed:<file>,delta");
    const std::string file = body.substr(0, comma);
    const double delta = std::stod(body.substr(comma + 1));
    const Drawing d = load_drawing(file);
    return smoothed_from_drawing(d, delta).w;
  }
  throw std::invalid_argument("density spec: unknown kind " + kind);
}

}  // namespace crosslab
