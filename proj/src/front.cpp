#include "tentpitch/front.hpp"

#include "tentpitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace tentpitch {
namespace {

constexpr double kRoundoff = 8.0 * std::numeric_limits<double>::epsilon();

}  // namespace

bool within_slope_cap(double gradient_norm_sq, double slope_cap, double tolerance, double rounding) {
  const double limit = slope_cap * (1.0 + tolerance) + rounding;
  return gradient_norm_sq <= limit * limit;
}

double slope_rounding(std::span<const double> times, double min_altitude) {
  double top = 0.0;
  for (double t : times) top = std::max(top, std::abs(t));
  return 4.0 * kRoundoff * top / min_altitude;
}

bool within_progress(std::span<const double> times, std::span<const double> altitudes, double epsilon,
                     double slope_cap, double tolerance) {
  std::size_t top = 0;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] > times[top]) top = i;
  double mid = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i)
    if (i != top) mid = std::max(mid, times[i]);
  const double allowed = (1.0 - epsilon) * slope_cap * altitudes[top];
  return times[top] - mid <= allowed * (1.0 + tolerance) + kRoundoff * std::abs(times[top]);
}

Front::Front(const GroundMesh& mesh, const MeshConstants& constants, FrontOptions options, Strategy strategy,
             std::vector<double> initial_times)
    : mesh_(&mesh), constants_(&constants), options_(options), strategy_(strategy), times_(std::move(initial_times)) {
  const auto nv = static_cast<std::size_t>(mesh.vertex_count());
  if (times_.empty()) times_.assign(nv, 0.0);
  if (times_.size() != nv)
    throw MeshError("initial time count " + std::to_string(times_.size()) + " does not match vertex count " +
                    std::to_string(nv));
  for (std::size_t v = 0; v < nv; ++v)
    if (!std::isfinite(times_[v])) throw MeshError("vertex " + std::to_string(v) + " has a non-finite initial time");
  validate_all();

  for (Index v = 0; v < mesh.vertex_count(); ++v)
    if (!finished(v)) {
      ++unfinished_;
      if (strategy_.kind == Strategy::Kind::GreedyLowest) heap_.emplace(times_[static_cast<std::size_t>(v)], v);
    }
  scan_order_.resize(nv);
  std::iota(scan_order_.begin(), scan_order_.end(), Index{0});
  if (strategy_.kind == Strategy::Kind::MISPhases && strategy_.seed != 0) {
    std::mt19937_64 rng(strategy_.seed);
    std::shuffle(scan_order_.begin(), scan_order_.end(), rng);
  }
  blocked_stamp_.assign(nv, -1);
}

bool Front::is_local_minimum(Index v) const {
  const double t = time(v);
  for (auto u : mesh_->neighbors(v))
    if (times_[static_cast<std::size_t>(u)] < t) return false;
  return true;
}

void Front::build_phase() {
  ++phase_;
  phase_members_.clear();
  phase_cursor_ = 0;
  for (auto v : scan_order_) {
    if (finished(v) || blocked_stamp_[static_cast<std::size_t>(v)] == phase_ || !is_local_minimum(v)) continue;
    phase_members_.push_back(v);
    for (auto u : mesh_->neighbors(v)) blocked_stamp_[static_cast<std::size_t>(u)] = phase_;
  }
}

std::optional<Index> Front::next_vertex() {
  if (unfinished_ == 0) return std::nullopt;
  if (strategy_.kind == Strategy::Kind::GreedyLowest) {
    while (!heap_.empty()) {
      const auto [t, v] = heap_.top();
      if (t == times_[static_cast<std::size_t>(v)] && !finished(v)) return v;
      heap_.pop();
    }
    return std::nullopt;
  }
  for (int attempt = 0; attempt < 2; ++attempt) {
    while (phase_cursor_ < phase_members_.size()) {
      const Index v = phase_members_[phase_cursor_];
      if (!finished(v) && is_local_minimum(v)) return v;
      ++phase_cursor_;
    }
    if (attempt == 0) build_phase();
  }
  // A fresh phase always holds the lowest unfinished vertex.
  throw InvariantViolation("maximal independent set phase came up empty with unfinished vertices");
}

void Front::apply_lift(Index v, double t_new) {
  const double t_old = time(v);
  if (!(t_new > t_old) || !std::isfinite(t_new)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lift of vertex " << v << " from " << t_old << " to " << t_new << " does not move it forward";
    throw InvariantViolation(msg.str());
  }
  if (t_new > options_.target_time)
    throw InvariantViolation("lift of vertex " + std::to_string(v) + " overshoots the target time");
  if (!is_local_minimum(v)) throw InvariantViolation("vertex " + std::to_string(v) + " is not a local minimum");

  times_[static_cast<std::size_t>(v)] = t_new;
  try {
    validate_star(v, t_old);
  } catch (...) {
    times_[static_cast<std::size_t>(v)] = t_old;
    throw;
  }
  if (finished(v)) --unfinished_;

  if (strategy_.kind == Strategy::Kind::GreedyLowest) {
    if (!finished(v)) heap_.emplace(t_new, v);
  } else if (phase_cursor_ < phase_members_.size() && phase_members_[phase_cursor_] == v) {
    ++phase_cursor_;
  }
}

void Front::validate_element(Index e, double speed_time) const {
  const auto ids = mesh_->element(e);
  std::array<Point, kMaxSimplexVertices> pts{};
  std::array<double, kMaxSimplexVertices> ts{};
  std::array<double, kMaxSimplexVertices> alt{};
  double min_alt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    pts[i] = mesh_->vertex(ids[i]);
    ts[i] = times_[static_cast<std::size_t>(ids[i])];
    alt[i] = constants_->altitude_of(e, static_cast<int>(i));
    min_alt = std::min(min_alt, alt[i]);
  }
  const double cap = element_slope_cap(*mesh_, e, speed_time);
  const double g2 = time_gradient_norm_sq({pts.data(), ids.size()}, {ts.data(), ids.size()});
  if (!within_slope_cap(g2, cap, options_.tolerance, slope_rounding({ts.data(), ids.size()}, min_alt))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "element " << e << " violates the cone constraint: slope " << std::sqrt(g2) << " > " << cap;
    throw InvariantViolation(msg.str());
  }
  if (ids.size() == 3 &&
      !within_progress({ts.data(), 3}, {alt.data(), 3}, options_.epsilon, cap, options_.tolerance))
    throw InvariantViolation("element " + std::to_string(e) + " violates the progress constraint");
}

void Front::validate_face(Index f, double speed_time) const {
  const auto& face = constants_->faces[static_cast<std::size_t>(f)];
  const auto ids = face.vertex_ids();
  std::array<Point, kMaxSimplexVertices> pts{};
  std::array<double, kMaxSimplexVertices> ts{};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    pts[i] = mesh_->vertex(ids[i]);
    ts[i] = times_[static_cast<std::size_t>(ids[i])];
  }
  const double cap = face_slope_cap(*mesh_, face, speed_time);
  const double g2 = time_gradient_norm_sq({pts.data(), ids.size()}, {ts.data(), ids.size()});
  const double min_alt = *std::min_element(face.altitude.begin(), face.altitude.begin() + 3);
  if (!within_slope_cap(g2, cap, options_.tolerance, slope_rounding({ts.data(), ids.size()}, min_alt))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "face " << f << " violates its gradient cap: slope " << std::sqrt(g2) << " > " << cap;
    throw InvariantViolation(msg.str());
  }
  if (ids.size() == 3 &&
      !within_progress({ts.data(), 3}, {face.altitude.data(), 3}, options_.epsilon, cap, options_.tolerance))
    throw InvariantViolation("face " + std::to_string(f) + " violates the progress constraint");
}

void Front::validate_star(Index v, double speed_time) const {
  for (auto e : mesh_->star(v)) validate_element(e, speed_time);
  for (auto f : constants_->faces_of(v)) validate_face(f, speed_time);
}

void Front::validate_all() const {
  for (Index e = 0; e < mesh_->element_count(); ++e) {
    double t_min = std::numeric_limits<double>::infinity();
    for (auto id : mesh_->element(e)) t_min = std::min(t_min, times_[static_cast<std::size_t>(id)]);
    validate_element(e, t_min);
  }
  for (std::size_t f = 0; f < constants_->faces.size(); ++f) {
    double t_min = std::numeric_limits<double>::infinity();
    for (auto id : constants_->faces[f].vertex_ids()) t_min = std::min(t_min, times_[static_cast<std::size_t>(id)]);
    validate_face(static_cast<Index>(f), t_min);
  }
}

}  // namespace tentpitch
