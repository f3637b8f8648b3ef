#pragma once

#include "tentpitch/geometry.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace tentpitch {

using Index = std::int32_t;
inline constexpr Index kNone = -1;

/// Wave speed of an element as a function of time. Must be positive and
/// non-increasing in time; the pitcher evaluates it at the earliest time a
/// tent touches, which is the maximum over the tent.
using SpeedSchedule = std::function<double(Index element, double time)>;

/// Parsed, unvalidated mesh description as produced by the readers in io.hpp.
struct RawMesh {
  int dim = 0;
  std::vector<std::vector<double>> vertices;
  std::vector<std::vector<std::int64_t>> elements;
  std::vector<double> speeds;         // empty: every element has speed 1
  std::vector<double> initial_times;  // empty: constant zero
};

/// Immutable d-dimensional simplicial complex (d = 1, 2, 3) with vertex stars.
class GroundMesh {
 public:
  /// Validates and builds the mesh. Throws MeshError or DegeneracyError,
  /// naming the offending vertex or element.
  static GroundMesh load(const RawMesh& raw);

  GroundMesh(int dim, std::vector<Point> vertices, std::vector<Index> element_vertices,
             std::vector<double> speeds = {});

  int dim() const noexcept { return dim_; }
  Index vertex_count() const noexcept { return static_cast<Index>(vertices_.size()); }
  Index element_count() const noexcept { return static_cast<Index>(speeds_.size()); }
  int vertices_per_element() const noexcept { return dim_ + 1; }

  const Point& vertex(Index v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const Index> element(Index e) const;
  SimplexGeometry element_geometry(Index e) const;

  /// Static per-element wave speed.
  double speed(Index e) const { return speeds_.at(static_cast<std::size_t>(e)); }
  /// Wave speed at a given time; equals speed(e) unless a schedule is attached.
  double speed(Index e, double time) const;
  bool has_speed_schedule() const noexcept { return static_cast<bool>(schedule_); }
  std::span<const double> speeds() const noexcept { return speeds_; }

  /// Copy of this mesh with a time-dependent speed schedule attached.
  GroundMesh with_speed_schedule(SpeedSchedule schedule) const;

  /// Elements containing v, in increasing id order.
  std::span<const Index> star(Index v) const;
  /// Vertices sharing an element with v, in increasing id order.
  std::span<const Index> neighbors(Index v) const;
  /// Position of v inside element e, or -1.
  int local_index(Index e, Index v) const;

 private:
  void build_adjacency();

  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<Index> element_vertices_;
  std::vector<double> speeds_;
  std::vector<Index> star_offsets_, star_;
  std::vector<Index> neighbor_offsets_, neighbors_;
  SpeedSchedule schedule_;
};

/// Element that bounds the admissible slope of a capped face.
struct FaceParent {
  Index element = kNone;
  double kappa = 1.0;  // dimensionless cap this element imposes on the face
};

/// A lower-dimensional face (dimension >= 2) carrying its own gradient cap.
/// Only present for d >= 3 ground meshes.
struct CappedFace {
  std::array<Index, kMaxSimplexVertices> vertices{};
  int vertex_count = 0;
  double kappa = 1.0;  // minimum over parents
  std::vector<FaceParent> parents;
  std::array<double, kMaxSimplexVertices> altitude{};  // of each vertex within the face

  std::span<const Index> vertex_ids() const { return {vertices.data(), static_cast<std::size_t>(vertex_count)}; }
};

/// Geometric constants derived once from the ground mesh.
struct MeshConstants {
  int dim = 0;
  double epsilon = 0.0;
  std::vector<double> altitude;          // [e * (d+1) + i]: distance of vertex i of e to its opposite facet hull
  std::vector<double> sigma;             // [e * (d+1) + i]: sigma_F of the facet opposite vertex i
  std::vector<double> omega;             // per vertex: min altitude over its star
  std::vector<double> measure;           // per element
  std::vector<double> boundary_measure;  // per element: summed facet measures (perimeter for d = 2)
  std::vector<CappedFace> faces;
  std::vector<Index> vertex_face_offsets, vertex_faces;

  double altitude_of(Index e, int i) const {
    return altitude[static_cast<std::size_t>(e) * static_cast<std::size_t>(dim + 1) + static_cast<std::size_t>(i)];
  }
  double sigma_of(Index e, int i) const {
    return sigma[static_cast<std::size_t>(e) * static_cast<std::size_t>(dim + 1) + static_cast<std::size_t>(i)];
  }
  std::span<const Index> faces_of(Index v) const;

  /// Sum over vertices of 1/omega.
  double inverse_omega_sum() const;
};

/// Computes altitudes, omega, sigma ratios and (for d >= 3) the recursive
/// per-face gradient caps. The caps depend on epsilon.
MeshConstants precompute(const GroundMesh& mesh, double epsilon);

/// Admissible time slope (time per unit length) on element e: 1 / c_e(time).
double element_slope_cap(const GroundMesh& mesh, Index e, double time);

/// Admissible time slope on a capped face: min over parents of kappa / c(time).
double face_slope_cap(const GroundMesh& mesh, const CappedFace& face, double time);

/// Smallest advance (time units) any non-clamped lift of v is guaranteed to
/// make, divided by epsilon: min over elements of w/c and, for d >= 3, over
/// capped triangular faces of kappa * w / c. Uses speeds at `time`.
double guaranteed_advance_scale(const GroundMesh& mesh, const MeshConstants& constants, Index v, double time);

}  // namespace tentpitch
