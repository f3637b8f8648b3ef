#pragma once

#include "tentpitch/ground_mesh.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

namespace tentpitch {

/// How the next local minimum is chosen.
struct Strategy {
  enum class Kind { GreedyLowest, MISPhases };
  Kind kind = Kind::GreedyLowest;
  /// MISPhases only: 0 scans minima in index order, any other value scans a
  /// fixed permutation drawn from this seed.
  std::uint64_t seed = 0;

  static Strategy greedy() { return {}; }
  static Strategy mis(std::uint64_t seed = 0) { return {Kind::MISPhases, seed}; }
};

struct FrontOptions {
  double epsilon = 0.1;
  double target_time = 0.0;
  double tolerance = 1e-9;
};

/// The advancing front: a piecewise-linear time function over the ground
/// mesh, kept valid under the cone and progress constraints, together with
/// the scheduler that hands out local minima.
class Front {
 public:
  /// Validates the initial time function (default: constant zero). Throws
  /// InvariantViolation naming the first element that breaks a constraint.
  Front(const GroundMesh& mesh, const MeshConstants& constants, FrontOptions options, Strategy strategy = {},
        std::vector<double> initial_times = {});

  const GroundMesh& mesh() const noexcept { return *mesh_; }
  const MeshConstants& constants() const noexcept { return *constants_; }
  const FrontOptions& options() const noexcept { return options_; }
  const Strategy& strategy() const noexcept { return strategy_; }

  double time(Index v) const { return times_.at(static_cast<std::size_t>(v)); }
  std::span<const double> times() const noexcept { return times_; }
  bool finished(Index v) const { return time(v) >= options_.target_time; }
  Index unfinished_count() const noexcept { return unfinished_; }

  /// t(v) <= t(u) for every neighbor u.
  bool is_local_minimum(Index v) const;

  /// The next vertex to lift, or nullopt once every vertex reached the target.
  /// Does not consume the candidate; apply_lift does.
  std::optional<Index> next_vertex();

  /// Number of maximal-independent-set phases started so far (0 for greedy).
  std::int64_t phase() const noexcept { return phase_; }

  /// Moves v to t_new and re-validates every constraint touching v. On any
  /// violation the front is left unchanged and InvariantViolation is thrown.
  void apply_lift(Index v, double t_new);

  /// Checks cone and progress constraints on every element and capped face
  /// containing v, with wave speeds evaluated at `speed_time`.
  void validate_star(Index v, double speed_time) const;
  void validate_all() const;

 private:
  void validate_element(Index e, double speed_time) const;
  void validate_face(Index f, double speed_time) const;
  void build_phase();

  const GroundMesh* mesh_;
  const MeshConstants* constants_;
  FrontOptions options_;
  Strategy strategy_;
  std::vector<double> times_;
  Index unfinished_ = 0;

  using HeapEntry = std::pair<double, Index>;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap_;

  std::vector<Index> scan_order_;
  std::vector<Index> phase_members_;
  std::size_t phase_cursor_ = 0;
  std::vector<std::int64_t> blocked_stamp_;
  std::int64_t phase_ = 0;
};

/// Cone check shared by validators: squared gradient norm against a slope cap
/// widened by a relative tolerance and an absolute rounding allowance.
bool within_slope_cap(double gradient_norm_sq, double slope_cap, double tolerance, double rounding = 0.0);

/// Gradient resolution of a simplex whose times are stored as doubles:
/// a few ulps of the largest |time| divided by the smallest altitude.
double slope_rounding(std::span<const double> times, double min_altitude);

/// Progress-constraint check for a triangle (or capped triangular face):
/// the highest vertex may exceed the middle one by at most
/// (1 - epsilon) * slope_cap * (altitude of the highest vertex).
bool within_progress(std::span<const double> times, std::span<const double> altitudes, double epsilon,
                     double slope_cap, double tolerance);

}  // namespace tentpitch
