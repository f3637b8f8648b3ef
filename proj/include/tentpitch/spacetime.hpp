#pragma once

#include "tentpitch/ground_mesh.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace tentpitch {

inline constexpr int kMaxFacetVertices = kMaxSimplexVertices;

/// Vertex tuple of a front facet: the lifted ground element, in the ground
/// element's local vertex order. Unused slots hold kNone.
using FacetVertices = std::array<Index, kMaxFacetVertices>;

/// One inflow facet of a tent being pitched.
struct TentFacet {
  Index ground_element = kNone;
  FacetVertices vertices{};
  Index source = kNone;  // patch that produced it, kNone for the initial front
};

/// A tent before it is committed to the mesh.
struct Tent {
  Index ground_vertex = kNone;
  Index base = kNone;  // space-time vertex currently on the front
  double apex_time = 0.0;
  std::vector<TentFacet> inflow;
};

/// Space-time simplex. vertices[0] is the tent apex; vertices[1..d+1] are the
/// inflow facet in ground-element order. The outflow facet is the inflow facet
/// with the base vertex replaced by the apex.
struct SpaceTimeElement {
  std::array<Index, kMaxFacetVertices + 1> vertices{};
  Index patch = kNone;
  Index ground_element = kNone;
  Index source = kNone;
};

struct Patch {
  Index id = kNone;
  Index ground_vertex = kNone;
  Index base = kNone;
  Index apex = kNone;
  Index first_element = 0;
  Index element_count = 0;
};

/// Output mesh: lifted vertices, simplices and patches in creation order.
///
/// Space-time vertices 0..n-1 are the initial front, one per ground vertex.
class SpaceTimeMesh {
 public:
  SpaceTimeMesh(const GroundMesh& ground, std::span<const double> initial_times);

  /// Rebuilds a mesh from stored records without checking causality (the
  /// verifier does that). Index ranges and arities are still validated.
  static SpaceTimeMesh from_records(int ground_dim, std::vector<Index> ground_connectivity, std::vector<double> coords,
                                    std::vector<double> times, std::vector<Index> vertex_ground,
                                    std::vector<SpaceTimeElement> elements, std::vector<Patch> patches);

  int ground_dim() const noexcept { return ground_dim_; }
  int dim() const noexcept { return ground_dim_ + 1; }
  int facet_size() const noexcept { return ground_dim_ + 1; }
  Index ground_element_count() const noexcept {
    return static_cast<Index>(ground_connectivity_.size() / static_cast<std::size_t>(facet_size()));
  }
  Index ground_vertex_count() const noexcept { return initial_vertex_count_; }
  std::span<const Index> ground_element(Index e) const;

  Index vertex_count() const noexcept { return static_cast<Index>(times_.size()); }
  double time(Index v) const { return times_.at(static_cast<std::size_t>(v)); }
  Index vertex_ground(Index v) const { return vertex_ground_.at(static_cast<std::size_t>(v)); }
  SpaceTimePoint point(Index v) const;
  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const double> times() const noexcept { return times_; }
  std::span<const Index> vertex_grounds() const noexcept { return vertex_ground_; }

  Index element_count() const noexcept { return static_cast<Index>(elements_.size()); }
  const SpaceTimeElement& element(Index e) const { return elements_.at(static_cast<std::size_t>(e)); }
  std::span<const SpaceTimeElement> elements() const noexcept { return elements_; }
  std::span<const Index> element_vertices(Index e) const;
  FacetVertices inflow_facet(Index e) const;
  FacetVertices outflow_facet(Index e) const;
  /// Temporal extent (max minus min vertex time) of an element.
  double element_duration(Index e) const;

  Index patch_count() const noexcept { return static_cast<Index>(patches_.size()); }
  /// Patch at position i of the creation order.
  const Patch& patch(Index i) const { return patches_.at(static_cast<std::size_t>(i)); }
  std::span<const Patch> patches() const noexcept { return patches_; }

  /// Current front facet over ground element e, and the patch that made it.
  FacetVertices frontier_facet(Index e) const;
  Index frontier_source(Index e) const { return frontier_source_.at(static_cast<std::size_t>(e)); }
  /// Space-time vertex currently representing ground vertex v on the front.
  Index front_vertex(Index v) const { return front_vertex_.at(static_cast<std::size_t>(v)); }

  /// Commits a tent: adds the apex vertex and one simplex per inflow facet and
  /// advances the frontier. Throws InvariantViolation if any inflow facet is
  /// not the current frontier facet.
  Index append_patch(const Tent& tent);

  /// Reorders two patches in the creation order. Test hook for causality
  /// fault injection; ids and element links are left untouched.
  void swap_patch_order(Index a, Index b);

  void reserve(std::size_t elements, std::size_t vertices);

 private:
  SpaceTimeMesh() = default;
  void reset_frontier();

  int ground_dim_ = 0;
  Index initial_vertex_count_ = 0;
  std::vector<Index> ground_connectivity_;
  std::vector<double> coords_;
  std::vector<double> times_;
  std::vector<Index> vertex_ground_;
  std::vector<SpaceTimeElement> elements_;
  std::vector<Patch> patches_;
  std::vector<Index> frontier_;  // facet_size() per ground element
  std::vector<Index> frontier_source_;
  std::vector<Index> front_vertex_;
};

/// Opaque solution token passed between patches by causal_sweep.
using SweepToken = std::uint64_t;

/// Receives a patch with one token per inflow facet (element order) and
/// returns one token per outflow facet.
using SweepVisitor = std::function<std::vector<SweepToken>(const Patch&, std::span<const SweepToken>)>;

struct SweepResult {
  bool ok = true;
  Index failed_patch = kNone;  // position in creation order
  std::string message;
  SweepToken digest = 0;       // combined tokens of the final front
};

/// Visits patches in creation order, checking that each inflow facet is the
/// current frontier facet produced by the patch its link names.
SweepResult causal_sweep(const SpaceTimeMesh& mesh, const SweepVisitor& visitor = {});

struct MeshStats {
  Index patches = 0;
  Index elements = 0;
  double duration_min = 0.0;
  double duration_max = 0.0;
  double duration_mean = 0.0;
  double duration_ratio = 0.0;  // max / min, 0 for an empty mesh
  std::map<Index, Index> patch_size_histogram;
  double seconds = 0.0;
  double elements_per_second = 0.0;
};

MeshStats stats(const SpaceTimeMesh& mesh, double seconds = 0.0);

}  // namespace tentpitch
