#pragma once
// Independent checks of a finished space-time mesh. Bounds are re-derived
// from geometry primitives and a bisection oracle; nothing here calls into
// the pitcher or reuses its precomputed constants.

#include "tentpitch/ground_mesh.hpp"
#include "tentpitch/pitcher.hpp"
#include "tentpitch/spacetime.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tentpitch {

struct CheckResult {
  std::string name;
  bool passed = true;
  bool skipped = false;
  std::string message;          // first failure, or a short summary
  std::vector<Index> offenders;  // capped at a handful of ids
  std::map<std::string, double> metrics;

  void fail(Index id, const std::string& what);
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
  double tolerance = kDefaultTolerance;
  /// Fraction of lifts whose maximality is re-derived by bisection.
  double oracle_sample_rate = 0.01;
  double oracle_tolerance = 1e-7;
  std::uint64_t seed = 1;
  bool causality_self_test = true;
};

/// Per-face gradient caps for d = 3, recomputed from sigma ratios.
class FaceCapTable {
 public:
  FaceCapTable(const GroundMesh& ground, double epsilon);

  struct Entry {
    std::array<Index, 3> vertices{};
    std::vector<std::pair<Index, double>> parents;  // (element, kappa)
  };

  std::span<const Entry> faces() const noexcept { return faces_; }
  std::span<const Index> faces_of(Index v) const;
  /// min over parents of kappa / c(time).
  double slope_cap(const GroundMesh& ground, std::size_t face, double time) const;

 private:
  std::vector<Entry> faces_;
  std::vector<Index> offsets_, incidence_;
};

/// Minimum advance scale of v (time units): min over its elements of w / c
/// and over its capped faces of cap * w_face.
double advance_scale(const GroundMesh& ground, const FaceCapTable& caps, Index v, double time);

/// Lift records recovered from patch order (bindings are unknown and left as
/// Target).
RunTrace trace_from_mesh(const SpaceTimeMesh& mesh, double target_time, double epsilon);

/// Largest t for vertex v with every other time fixed such that all cone,
/// progress and face-cap constraints touching v hold, capped at target_time.
/// Found by bracketing and bisection on a feasibility predicate.
double max_feasible_time(const GroundMesh& ground, const FaceCapTable& caps, std::span<const double> times, Index v,
                         double epsilon, double target_time);

CheckResult check_cone_facets(const SpaceTimeMesh& mesh, const GroundMesh& ground, double tolerance = kDefaultTolerance);
CheckResult check_face_caps(const SpaceTimeMesh& mesh, const GroundMesh& ground, double epsilon,
                            double tolerance = kDefaultTolerance);
CheckResult check_progress_trace(const RunTrace& trace, const GroundMesh& ground, Index element_count,
                                 double tolerance = kDefaultTolerance);
CheckResult check_causality(const SpaceTimeMesh& mesh, bool self_test = true);
CheckResult check_front_snapshots(const RunTrace& trace, const GroundMesh& ground, const VerifyOptions& options = {});
CheckResult check_trace_consistency(const RunTrace& recorded, const RunTrace& derived);

/// Runs every check. Without a recorded trace the lift sequence is read from
/// the mesh itself.
VerifyReport verify(const SpaceTimeMesh& mesh, const GroundMesh& ground, double target_time, double epsilon,
                    const VerifyOptions& options = {}, const std::optional<RunTrace>& trace = std::nullopt);

}  // namespace tentpitch
