#pragma once

#include "tentpitch/front.hpp"
#include "tentpitch/ground_mesh.hpp"
#include "tentpitch/spacetime.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tentpitch {

inline constexpr double kDefaultEpsilon = 0.1;
inline constexpr double kDefaultTolerance = 1e-9;
/// Relative shrink applied to every computed lift increment so that facets
/// meant to be tight never exceed the cap through rounding.
inline constexpr double kLiftSlack = 1e-12;

class PitchConfig {
 public:
  /// Throws ConfigError unless 0 < epsilon <= 1/2, target_time >= 0 and
  /// tolerance >= 0.
  explicit PitchConfig(double target_time, double epsilon = kDefaultEpsilon, Strategy strategy = {},
                       double tolerance = kDefaultTolerance);

  /// Skips the epsilon range check. Only for adversarial tests.
  static PitchConfig unchecked(double target_time, double epsilon, Strategy strategy = {},
                               double tolerance = kDefaultTolerance);

  double target_time() const noexcept { return target_time_; }
  double epsilon() const noexcept { return epsilon_; }
  const Strategy& strategy() const noexcept { return strategy_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  PitchConfig() = default;

  double target_time_ = 0.0;
  double epsilon_ = kDefaultEpsilon;
  Strategy strategy_;
  double tolerance_ = kDefaultTolerance;
};

enum class BindingKind { Cone, Progress, FaceCap, Target };

const char* to_string(BindingKind kind);
BindingKind binding_kind_from_string(const std::string& name);

/// Which constraint produced a lift value.
struct Binding {
  BindingKind kind = BindingKind::Target;
  Index element = kNone;  // ground element, when element-level
  Index face = kNone;     // capped face id, when face-level
};

struct LiftBound {
  double value = 0.0;
  Binding binding;
};

/// Ground-mesh-only data for the cone constraint of one vertex of a simplex:
/// the altitude, the affine weights of its foot point on the opposite facet,
/// and the inverse R factor of a QR decomposition of that facet's edges.
struct ConeStencil {
  double height = 0.0;
  int facet_vertex_count = 0;
  std::array<double, kMaxSimplexVertices> foot_weights{};
  std::array<double, (kMaxDim - 1) * (kMaxDim - 1)> edge_r_inverse{};
  double facet_min_altitude = 0.0;  // within the facet; its length for an edge
};

ConeStencil make_cone_stencil(const SimplexGeometry& simplex, int vertex);

/// Largest time for `vertex` such that the simplex's time gradient has norm at
/// most slope_cap, given the times of the opposite facet's vertices (in
/// simplex order with `vertex` skipped). Throws InvariantViolation if the
/// facet alone is already steeper than the cap.
double cone_bound(const ConeStencil& stencil, std::span<const double> facet_times, double slope_cap,
                  double tolerance = kDefaultTolerance);
double cone_bound(const SimplexGeometry& simplex, int vertex, std::span<const double> facet_times, double slope_cap,
                  double tolerance = kDefaultTolerance);

/// Progress constraint for a triangle: max(other times) + (1 - eps) * cap * altitude.
double progress_bound(double altitude, std::span<const double> other_times, double epsilon, double slope_cap = 1.0);

/// Cone bound restricted to a face's own hull with slope cap kappa / speed.
double face_cap_bound(const SimplexGeometry& face, int vertex, std::span<const double> facet_times, double kappa,
                      double speed = 1.0, double tolerance = kDefaultTolerance);

struct LiftRecord {
  Index vertex = kNone;
  double old_time = 0.0;
  double new_time = 0.0;
  Binding binding;
  Index patch = kNone;
  std::int64_t phase = 0;
};

struct RunTrace {
  double target_time = 0.0;
  double epsilon = 0.0;
  std::vector<double> initial_times;
  std::vector<LiftRecord> lifts;
};

/// Computes lift bounds and builds tents for a fixed ground mesh.
class Pitcher {
 public:
  Pitcher(const GroundMesh& mesh, const MeshConstants& constants, const PitchConfig& config);

  /// Largest admissible new time for local minimum v. Throws StallError if the
  /// result would not advance v.
  LiftBound compute_lift(const Front& front, Index v) const;

  /// Tent over star(v) from the current frontier of `mesh` up to t_new.
  Tent pitch_tent(Index v, double t_new, const SpaceTimeMesh& mesh) const;

 private:
  // An element, or a capped face for d >= 3, with one stencil per vertex.
  struct Carrier {
    std::array<Index, kMaxSimplexVertices> vertices{};
    int count = 0;
    Index element = kNone;
    Index face = kNone;
    std::array<ConeStencil, kMaxSimplexVertices> stencils{};
    std::array<double, kMaxSimplexVertices> altitude{};
  };
  struct Incidence {
    Index carrier;
    int local;
  };

  std::string stall_report(const Front& front, Index v, const LiftBound& bound) const;

  const GroundMesh* mesh_;
  const MeshConstants* constants_;
  PitchConfig config_;
  std::vector<Carrier> carriers_;
  std::vector<Index> incidence_offsets_;
  std::vector<Incidence> incidence_;
};

struct RunResult {
  SpaceTimeMesh mesh;
  RunTrace trace;
  double seconds = 0.0;
};

/// Pitches tents until every vertex reaches the target time.
RunResult run(const GroundMesh& mesh, const PitchConfig& config, std::vector<double> initial_times = {});

}  // namespace tentpitch
