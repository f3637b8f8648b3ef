#pragma once

// Dimension-generic simplex primitives for ground meshes of dimension 1..3.
// All vectors use Eigen types with a fixed maximum size so nothing here
// touches the heap.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tentpitch {

inline constexpr int kMaxDim = 3;
inline constexpr int kMaxSimplexVertices = kMaxDim + 1;

/// Degeneracy threshold: measure < kDegenerateRatio * (longest edge)^k.
inline constexpr double kDegenerateRatio = 1e-12;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

struct SpaceTimePoint {
  Point space;
  double time = 0.0;
};

/// Builds a Point from a list of coordinates.
Point make_point(std::initializer_list<double> coords);
Point make_point(std::span<const double> coords);

/// A non-degenerate k-simplex (0 <= k <= d) embedded in R^d.
///
/// The constructor rejects zero-measure simplices with DegeneracyError. A
/// 0-simplex (single point) is allowed and has measure 1 by convention, so
/// facets of segments can be handled uniformly.
class SimplexGeometry {
 public:
  explicit SimplexGeometry(std::span<const Point> vertices);
  SimplexGeometry(std::initializer_list<Point> vertices);

  int ambient_dim() const noexcept { return ambient_dim_; }
  int dim() const noexcept { return count_ - 1; }
  int vertex_count() const noexcept { return count_; }
  const Point& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  std::span<const Point> vertices() const { return {vertices_.data(), static_cast<std::size_t>(count_)}; }

  /// k-dimensional volume.
  double measure() const noexcept { return measure_; }
  double longest_edge() const noexcept { return longest_edge_; }

  /// The (k-1)-simplex opposite vertex i.
  SimplexGeometry facet(int i) const;

 private:
  void init();

  std::array<Point, kMaxSimplexVertices> vertices_{};
  int count_ = 0;
  int ambient_dim_ = 0;
  double measure_ = 0.0;
  double longest_edge_ = 0.0;
};

/// Orthogonal projection onto the affine hull of `hull`, with the affine
/// weights of the foot point relative to the hull's vertices.
struct AffineFoot {
  Point point;
  std::array<double, kMaxSimplexVertices> weights{};
};

AffineFoot project_affine(const Point& p, std::span<const Point> hull);

/// Distance from vertex i of s to the affine hull of the opposite facet.
double altitude_distance(const SimplexGeometry& s, int i);

/// Orthogonal projection of p onto the affine hull of facet. Throws
/// DegeneracyError if p lies on that hull.
Point project_to_hyperplane(const Point& p, const SimplexGeometry& facet);

/// Nearest point of the closed facet (convex hull of its vertices) to p.
Point closest_point_in_facet(const Point& p, const SimplexGeometry& facet);

/// |p - p_H| / |p - p_F|; 1 exactly when the hull projection lands in the facet.
double sigma_F(const Point& p, const SimplexGeometry& facet);

/// Gradient of the affine time function interpolating the given lifted
/// vertices, expressed in ambient coordinates and lying in the direction space
/// of the simplex's spatial hull. Its norm is the steepest slope of the facet.
Point time_gradient(std::span<const SpaceTimePoint> verts);

/// Same as time_gradient but returns only the squared norm; avoids building
/// SpaceTimePoints in hot loops.
double time_gradient_norm_sq(std::span<const Point> space, std::span<const double> times);

}  // namespace tentpitch
