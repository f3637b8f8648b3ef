#include "tentpitch/pitcher.hpp"

#include "tentpitch/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace tentpitch {

PitchConfig::PitchConfig(double target_time, double epsilon, Strategy strategy, double tolerance)
    : target_time_(target_time), epsilon_(epsilon), strategy_(strategy), tolerance_(tolerance) {
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw ConfigError("epsilon must lie in (0, 1/2], got " + std::to_string(epsilon));
  if (!(target_time >= 0.0) || !std::isfinite(target_time))
    throw ConfigError("target time must be finite and non-negative");
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) throw ConfigError("tolerance must be finite and non-negative");
}

PitchConfig PitchConfig::unchecked(double target_time, double epsilon, Strategy strategy, double tolerance) {
  PitchConfig c;
  c.target_time_ = target_time;
  c.epsilon_ = epsilon;
  c.strategy_ = strategy;
  c.tolerance_ = tolerance;
  return c;
}

const char* to_string(BindingKind kind) {
  switch (kind) {
    case BindingKind::Cone: return "cone";
    case BindingKind::Progress: return "progress";
    case BindingKind::FaceCap: return "face_cap";
    case BindingKind::Target: return "target";
  }
  return "unknown";
}

BindingKind binding_kind_from_string(const std::string& name) {
  if (name == "cone") return BindingKind::Cone;
  if (name == "progress") return BindingKind::Progress;
  if (name == "face_cap") return BindingKind::FaceCap;
  if (name == "target") return BindingKind::Target;
  throw Error("unknown binding kind '" + name + "'");
}

ConeStencil make_cone_stencil(const SimplexGeometry& simplex, int vertex) {
  if (simplex.dim() < 1) throw DegeneracyError("cone stencil needs at least a segment");
  const SimplexGeometry facet = simplex.facet(vertex);
  ConeStencil st;
  st.facet_vertex_count = facet.vertex_count();
  const AffineFoot foot = project_affine(simplex.vertex(vertex), facet.vertices());
  st.height = (simplex.vertex(vertex) - foot.point).norm();
  st.foot_weights = foot.weights;
  const int m = facet.vertex_count() - 1;
  if (m > 0) {
    st.facet_min_altitude = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= m; ++i) st.facet_min_altitude = std::min(st.facet_min_altitude, altitude_distance(facet, i));
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim> edges(simplex.ambient_dim(), m);
    for (int j = 0; j < m; ++j) edges.col(j) = facet.vertex(j + 1) - facet.vertex(0);
    using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
    const Eigen::HouseholderQR<Small> qr(edges);
    const Small r_inv = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(Small::Identity(m, m));
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) st.edge_r_inverse[static_cast<std::size_t>(r * m + c)] = r_inv(r, c);
  }
  return st;
}

double cone_bound(const ConeStencil& stencil, std::span<const double> facet_times, double slope_cap,
                  double tolerance) {
  const int k = stencil.facet_vertex_count;
  double foot_time = 0.0;
  for (int j = 0; j < k; ++j) foot_time += stencil.foot_weights[static_cast<std::size_t>(j)] * facet_times[static_cast<std::size_t>(j)];
  const int m = k - 1;
  std::array<double, kMaxDim> delta{};
  for (int j = 0; j < m; ++j) delta[static_cast<std::size_t>(j)] = facet_times[static_cast<std::size_t>(j + 1)] - facet_times[0];
  // |R^{-T} delta|^2 is the squared slope of the facet.
  double facet_slope_sq = 0.0;
  for (int c = 0; c < m; ++c) {
    double y = 0.0;
    for (int r = 0; r <= c; ++r)
      y += stencil.edge_r_inverse[static_cast<std::size_t>(r * m + c)] * delta[static_cast<std::size_t>(r)];
    facet_slope_sq += y * y;
  }
  const double cap_sq = slope_cap * slope_cap;
  if (m > 0 &&
      !within_slope_cap(facet_slope_sq, slope_cap, tolerance,
                        slope_rounding(facet_times.first(static_cast<std::size_t>(k)), stencil.facet_min_altitude))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "opposite facet already violates the cone constraint: slope " << std::sqrt(facet_slope_sq) << " > "
        << slope_cap;
    throw InvariantViolation(msg.str());
  }
  return foot_time + stencil.height * std::sqrt(std::max(0.0, cap_sq - facet_slope_sq));
}

double cone_bound(const SimplexGeometry& simplex, int vertex, std::span<const double> facet_times, double slope_cap,
                  double tolerance) {
  if (facet_times.size() != static_cast<std::size_t>(simplex.vertex_count() - 1))
    throw Error("cone_bound: expected one time per facet vertex");
  return cone_bound(make_cone_stencil(simplex, vertex), facet_times, slope_cap, tolerance);
}

double progress_bound(double altitude, std::span<const double> other_times, double epsilon, double slope_cap) {
  const double top = *std::max_element(other_times.begin(), other_times.end());
  return top + (1.0 - epsilon) * slope_cap * altitude;
}

double face_cap_bound(const SimplexGeometry& face, int vertex, std::span<const double> facet_times, double kappa,
                      double speed, double tolerance) {
  return cone_bound(face, vertex, facet_times, kappa / speed, tolerance);
}

namespace {

SimplexGeometry geometry_of(const GroundMesh& mesh, std::span<const Index> ids) {
  std::array<Point, kMaxSimplexVertices> pts{};
  for (std::size_t i = 0; i < ids.size(); ++i) pts[i] = mesh.vertex(ids[i]);
  return SimplexGeometry(std::span<const Point>(pts.data(), ids.size()));
}

}  // namespace

Pitcher::Pitcher(const GroundMesh& mesh, const MeshConstants& constants, const PitchConfig& config)
    : mesh_(&mesh), constants_(&constants), config_(config) {
  carriers_.reserve(static_cast<std::size_t>(mesh.element_count()) + constants.faces.size());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    Carrier c;
    const auto ids = mesh.element(e);
    std::copy(ids.begin(), ids.end(), c.vertices.begin());
    c.count = static_cast<int>(ids.size());
    c.element = e;
    const SimplexGeometry s = mesh.element_geometry(e);
    for (int i = 0; i < c.count; ++i) {
      c.stencils[static_cast<std::size_t>(i)] = make_cone_stencil(s, i);
      c.altitude[static_cast<std::size_t>(i)] = constants.altitude_of(e, i);
    }
    carriers_.push_back(c);
  }
  for (std::size_t f = 0; f < constants.faces.size(); ++f) {
    const auto& face = constants.faces[f];
    Carrier c;
    std::copy(face.vertex_ids().begin(), face.vertex_ids().end(), c.vertices.begin());
    c.count = face.vertex_count;
    c.face = static_cast<Index>(f);
    const SimplexGeometry s = geometry_of(mesh, face.vertex_ids());
    for (int i = 0; i < c.count; ++i) {
      c.stencils[static_cast<std::size_t>(i)] = make_cone_stencil(s, i);
      c.altitude[static_cast<std::size_t>(i)] = face.altitude[static_cast<std::size_t>(i)];
    }
    carriers_.push_back(c);
  }

  const auto nv = static_cast<std::size_t>(mesh.vertex_count());
  incidence_offsets_.assign(nv + 1, 0);
  for (const auto& c : carriers_)
    for (int i = 0; i < c.count; ++i) ++incidence_offsets_[static_cast<std::size_t>(c.vertices[static_cast<std::size_t>(i)]) + 1];
  for (std::size_t v = 0; v < nv; ++v) incidence_offsets_[v + 1] += incidence_offsets_[v];
  incidence_.resize(static_cast<std::size_t>(incidence_offsets_.back()));
  std::vector<Index> fill(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
  for (std::size_t ci = 0; ci < carriers_.size(); ++ci) {
    const auto& c = carriers_[ci];
    for (int i = 0; i < c.count; ++i)
      incidence_[static_cast<std::size_t>(fill[static_cast<std::size_t>(c.vertices[static_cast<std::size_t>(i)])]++)] = {
          static_cast<Index>(ci), i};
  }
}

LiftBound Pitcher::compute_lift(const Front& front, Index v) const {
  const double t_v = front.time(v);
  const double target = config_.target_time();
  LiftBound best{target, {BindingKind::Target, kNone, kNone}};
  const auto times = front.times();
  const auto begin = static_cast<std::size_t>(incidence_offsets_[static_cast<std::size_t>(v)]);
  const auto end = static_cast<std::size_t>(incidence_offsets_[static_cast<std::size_t>(v) + 1]);
  std::array<double, kMaxSimplexVertices> others{};
  for (std::size_t k = begin; k < end; ++k) {
    const auto [ci, local] = incidence_[k];
    const Carrier& c = carriers_[static_cast<std::size_t>(ci)];
    std::size_t n = 0;
    for (int j = 0; j < c.count; ++j)
      if (j != local) others[n++] = times[static_cast<std::size_t>(c.vertices[static_cast<std::size_t>(j)])];
    const std::span<const double> facet_times(others.data(), n);
    const double cap = c.element != kNone
                           ? element_slope_cap(*mesh_, c.element, t_v)
                           : face_slope_cap(*mesh_, constants_->faces[static_cast<std::size_t>(c.face)], t_v);
    double cone;
    try {
      cone = cone_bound(c.stencils[static_cast<std::size_t>(local)], facet_times, cap, config_.tolerance());
    } catch (const InvariantViolation& err) {
      throw InvariantViolation("vertex " + std::to_string(v) + ", " +
                               (c.element != kNone ? "element " + std::to_string(c.element)
                                                   : "face " + std::to_string(c.face)) +
                               ": " + err.what());
    }
    if (cone < best.value)
      best = {cone, {c.element != kNone ? BindingKind::Cone : BindingKind::FaceCap, c.element, c.face}};
    if (c.count == 3) {
      const double progress =
          progress_bound(c.altitude[static_cast<std::size_t>(local)], facet_times, config_.epsilon(), cap);
      if (progress < best.value) best = {progress, {BindingKind::Progress, c.element, c.face}};
    }
  }
  if (best.binding.kind != BindingKind::Target) {
    best.value = t_v + (best.value - t_v) * (1.0 - kLiftSlack);
    const double omega = constants_->omega[static_cast<std::size_t>(v)];
    if (!(best.value > t_v + config_.tolerance() * omega)) throw StallError(stall_report(front, v, best));
  } else if (!(best.value > t_v)) {
    throw StallError(stall_report(front, v, best));
  }
  return best;
}

std::string Pitcher::stall_report(const Front& front, Index v, const LiftBound& bound) const {
  std::ostringstream msg;
  msg.precision(17);
  msg << "stalled at vertex " << v << ": time " << front.time(v) << ", best lift " << bound.value << " (binding "
      << to_string(bound.binding.kind) << ", element " << bound.binding.element << ", face " << bound.binding.face
      << "), omega " << constants_->omega[static_cast<std::size_t>(v)] << ", epsilon " << config_.epsilon();
  for (auto e : mesh_->star(v)) {
    msg << "\n  element " << e << " times:";
    for (auto u : mesh_->element(e)) msg << ' ' << u << '@' << front.time(u);
  }
  return msg.str();
}

Tent Pitcher::pitch_tent(Index v, double t_new, const SpaceTimeMesh& mesh) const {
  Tent tent;
  tent.ground_vertex = v;
  tent.base = mesh.front_vertex(v);
  tent.apex_time = t_new;
  const auto star = mesh_->star(v);
  tent.inflow.reserve(star.size());
  for (auto e : star) tent.inflow.push_back({e, mesh.frontier_facet(e), mesh.frontier_source(e)});
  return tent;
}

RunResult run(const GroundMesh& mesh, const PitchConfig& config, std::vector<double> initial_times) {
  const auto start = std::chrono::steady_clock::now();
  const MeshConstants constants = precompute(mesh, config.epsilon());
  Front front(mesh, constants, {config.epsilon(), config.target_time(), config.tolerance()}, config.strategy(),
              std::move(initial_times));
  RunResult result{SpaceTimeMesh(mesh, front.times()), {}, 0.0};
  result.trace.target_time = config.target_time();
  result.trace.epsilon = config.epsilon();
  result.trace.initial_times.assign(front.times().begin(), front.times().end());
  const Pitcher pitcher(mesh, constants, config);
  while (const auto next = front.next_vertex()) {
    const Index v = *next;
    const LiftBound bound = pitcher.compute_lift(front, v);
    const Tent tent = pitcher.pitch_tent(v, bound.value, result.mesh);
    const double old_time = front.time(v);
    const std::int64_t phase = front.phase();
    front.apply_lift(v, bound.value);
    const Index id = result.mesh.append_patch(tent);
    result.trace.lifts.push_back({v, old_time, bound.value, bound.binding, id, phase});
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace tentpitch
