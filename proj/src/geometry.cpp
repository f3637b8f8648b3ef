#include "tentpitch/geometry.hpp"

#include "tentpitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tentpitch {
namespace {

using EdgeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

// Weights within this (absolute, on affine weights in [0,1]) count as inside.
constexpr double kInsideSlack = 1e-12;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double longest_edge_of(std::span<const Point> pts) {
  double longest = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) longest = std::max(longest, (pts[i] - pts[j]).norm());
  return longest;
}

// Edge vectors x_j - x_0 as columns.
EdgeMatrix edges_of(std::span<const Point> pts) {
  const auto d = pts.front().size();
  const auto k = static_cast<Eigen::Index>(pts.size()) - 1;
  EdgeMatrix e(d, k);
  for (Eigen::Index j = 0; j < k; ++j) e.col(j) = pts[static_cast<std::size_t>(j + 1)] - pts.front();
  return e;
}

using EdgeQR = Eigen::HouseholderQR<EdgeMatrix>;

// sqrt(det(E^T E)) from the triangular factor.
double volume_factor(const EdgeQR& qr) {
  double v = 1.0;
  for (Eigen::Index j = 0; j < qr.matrixQR().cols(); ++j) v *= std::abs(qr.matrixQR()(j, j));
  return v;
}

// y = R^{-T} dt, so that the gradient is Q y and its squared norm is |y|^2.
SmallVector gradient_coefficients(const EdgeQR& qr, const SmallVector& dt) {
  const auto m = qr.matrixQR().cols();
  return qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>().transpose().solve(dt);
}

void check_nondegenerate(std::span<const Point> pts, double volume) {
  const int k = static_cast<int>(pts.size()) - 1;
  if (k == 0) return;
  const double measure = volume / factorial(k);
  const double scale = std::pow(longest_edge_of(pts), k);
  if (!(measure >= kDegenerateRatio * scale) || scale == 0.0)
    throw DegeneracyError("degenerate " + std::to_string(k) + "-simplex (measure " + std::to_string(measure) + ")");
}

}  // namespace

Point make_point(std::initializer_list<double> coords) {
  return make_point(std::span<const double>(coords.begin(), coords.size()));
}

Point make_point(std::span<const double> coords) {
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw UnsupportedError("points must have 1.." + std::to_string(kMaxDim) + " coordinates");
  Point p(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) p(static_cast<Eigen::Index>(i)) = coords[i];
  return p;
}

SimplexGeometry::SimplexGeometry(std::span<const Point> vertices) {
  if (vertices.empty() || vertices.size() > static_cast<std::size_t>(kMaxSimplexVertices))
    throw UnsupportedError("simplex must have 1.." + std::to_string(kMaxSimplexVertices) + " vertices");
  count_ = static_cast<int>(vertices.size());
  std::copy(vertices.begin(), vertices.end(), vertices_.begin());
  init();
}

SimplexGeometry::SimplexGeometry(std::initializer_list<Point> vertices)
    : SimplexGeometry(std::span<const Point>(vertices.begin(), vertices.size())) {}

void SimplexGeometry::init() {
  ambient_dim_ = static_cast<int>(vertices_[0].size());
  if (ambient_dim_ < 1 || ambient_dim_ > kMaxDim) throw UnsupportedError("unsupported ambient dimension");
  for (int i = 0; i < count_; ++i) {
    if (vertices_[static_cast<std::size_t>(i)].size() != ambient_dim_)
      throw MeshError("simplex vertices have mixed dimensions");
    if (!vertices_[static_cast<std::size_t>(i)].allFinite()) throw MeshError("non-finite vertex coordinate");
  }
  if (dim() > ambient_dim_) throw DegeneracyError("simplex dimension exceeds ambient dimension");
  const auto pts = vertices();
  longest_edge_ = longest_edge_of(pts);
  if (dim() == 0) {
    measure_ = 1.0;
    return;
  }
  const EdgeQR qr(edges_of(pts));
  const double volume = volume_factor(qr);
  check_nondegenerate(pts, volume);
  measure_ = volume / factorial(dim());
}

SimplexGeometry SimplexGeometry::facet(int i) const {
  if (i < 0 || i >= count_) throw std::out_of_range("facet index out of range");
  if (count_ == 1) throw DegeneracyError("a point has no facets");
  std::array<Point, kMaxSimplexVertices> rest{};
  int n = 0;
  for (int j = 0; j < count_; ++j)
    if (j != i) rest[static_cast<std::size_t>(n++)] = vertices_[static_cast<std::size_t>(j)];
  return SimplexGeometry(std::span<const Point>(rest.data(), static_cast<std::size_t>(n)));
}

AffineFoot project_affine(const Point& p, std::span<const Point> hull) {
  AffineFoot foot;
  if (hull.size() == 1) {
    foot.point = hull.front();
    foot.weights[0] = 1.0;
    return foot;
  }
  const EdgeMatrix e = edges_of(hull);
  const SmallVector a = EdgeQR(e).solve(SmallVector(p - hull.front()));
  foot.point = hull.front() + e * a;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    foot.weights[static_cast<std::size_t>(j + 1)] = a(j);
    sum += a(j);
  }
  foot.weights[0] = 1.0 - sum;
  return foot;
}

double altitude_distance(const SimplexGeometry& s, int i) {
  if (s.dim() == 0) throw DegeneracyError("altitude of a point is undefined");
  const SimplexGeometry f = s.facet(i);
  return (s.vertex(i) - project_affine(s.vertex(i), f.vertices()).point).norm();
}

Point project_to_hyperplane(const Point& p, const SimplexGeometry& facet) {
  if (p.size() != facet.ambient_dim()) throw MeshError("point and facet dimensions differ");
  const AffineFoot foot = project_affine(p, facet.vertices());
  const double dist = (p - foot.point).norm();
  const double scale = std::max(facet.longest_edge(), (p - facet.vertex(0)).norm());
  if (!(dist > kDegenerateRatio * scale)) throw DegeneracyError("point lies on the facet's affine hull");
  return foot.point;
}

Point closest_point_in_facet(const Point& p, const SimplexGeometry& facet) {
  if (p.size() != facet.ambient_dim()) throw MeshError("point and facet dimensions differ");
  const int n = facet.vertex_count();
  // Enumerate every face; the nearest face whose hull-projection lands
  // inside it holds the answer.
  Point best = facet.vertex(0);
  double best_dist = std::numeric_limits<double>::infinity();
  std::array<Point, kMaxSimplexVertices> sub{};
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::size_t m = 0;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) sub[m++] = facet.vertex(j);
    const AffineFoot foot = project_affine(p, std::span<const Point>(sub.data(), m));
    bool inside = true;
    for (std::size_t j = 0; j < m; ++j) inside = inside && foot.weights[j] >= -kInsideSlack;
    if (!inside) continue;
    const double dist = (p - foot.point).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = foot.point;
    }
  }
  return best;
}

double sigma_F(const Point& p, const SimplexGeometry& facet) {
  const Point ph = project_to_hyperplane(p, facet);
  const AffineFoot foot = project_affine(p, facet.vertices());
  bool inside = true;
  for (int j = 0; j < facet.vertex_count(); ++j)
    inside = inside && foot.weights[static_cast<std::size_t>(j)] >= -kInsideSlack;
  if (inside) return 1.0;
  const Point pf = closest_point_in_facet(p, facet);
  return std::min(1.0, (p - ph).norm() / (p - pf).norm());
}

Point time_gradient(std::span<const SpaceTimePoint> verts) {
  if (verts.empty() || verts.size() > static_cast<std::size_t>(kMaxSimplexVertices))
    throw UnsupportedError("time_gradient needs 1.." + std::to_string(kMaxSimplexVertices) + " vertices");
  std::array<Point, kMaxSimplexVertices> space{};
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (!std::isfinite(verts[i].time)) throw MeshError("non-finite time value");
    space[i] = verts[i].space;
  }
  const std::span<const Point> pts(space.data(), verts.size());
  if (verts.size() == 1) return Point::Zero(verts.front().space.size());
  const EdgeQR qr(edges_of(pts));
  check_nondegenerate(pts, volume_factor(qr));
  const auto m = qr.matrixQR().cols();
  SmallVector dt(m);
  for (Eigen::Index j = 0; j < m; ++j) dt(j) = verts[static_cast<std::size_t>(j + 1)].time - verts.front().time;
  Point y = Point::Zero(qr.matrixQR().rows());
  y.head(m) = gradient_coefficients(qr, dt);
  return qr.householderQ() * y;
}

double time_gradient_norm_sq(std::span<const Point> space, std::span<const double> times) {
  if (space.size() != times.size() || space.empty() || space.size() > static_cast<std::size_t>(kMaxSimplexVertices))
    throw UnsupportedError("time_gradient_norm_sq: bad vertex count");
  if (space.size() == 1) return 0.0;
  const EdgeQR qr(edges_of(space));
  check_nondegenerate(space, volume_factor(qr));
  const auto m = qr.matrixQR().cols();
  SmallVector dt(m);
  for (Eigen::Index j = 0; j < m; ++j) dt(j) = times[static_cast<std::size_t>(j + 1)] - times.front();
  return gradient_coefficients(qr, dt).squaredNorm();
}

}  // namespace tentpitch
