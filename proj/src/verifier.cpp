#include "tentpitch/verifier.hpp"

#include "tentpitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <unordered_map>

namespace tentpitch {
namespace {

constexpr std::size_t kMaxOffenders = 16;

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// Ground simplex data reused across lifts: the inverse R factor of a QR of
// its edges (slope^2 = |R^{-T} dt|^2) and the vertex altitudes.
struct SimplexData {
  int count = 0;
  double min_altitude = 0.0;
  SmallMatrix r_inverse;
  std::array<double, kMaxSimplexVertices> altitude{};
};

SimplexData make_simplex_data(std::span<const Point> pts) {
  SimplexData data;
  data.count = static_cast<int>(pts.size());
  const SimplexGeometry s(pts);
  const auto m = static_cast<Eigen::Index>(pts.size()) - 1;
  SmallMatrix edges(pts.front().size(), m);
  for (Eigen::Index j = 0; j < m; ++j) edges.col(j) = pts[static_cast<std::size_t>(j + 1)] - pts.front();
  const Eigen::HouseholderQR<SmallMatrix> qr(edges);
  data.r_inverse = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(SmallMatrix::Identity(m, m));
  for (int i = 0; i < data.count; ++i) data.altitude[static_cast<std::size_t>(i)] = altitude_distance(s, i);
  data.min_altitude = *std::min_element(data.altitude.begin(), data.altitude.begin() + data.count);
  return data;
}

struct ElementView {
  const SimplexData* data = nullptr;
  std::array<double, kMaxSimplexVertices> time{};
  std::size_t count = 0;
};

class LocalGeometry {
 public:
  explicit LocalGeometry(const GroundMesh& ground, const FaceCapTable* caps = nullptr) {
    elements_.reserve(static_cast<std::size_t>(ground.element_count()));
    std::array<Point, kMaxSimplexVertices> pts{};
    for (Index e = 0; e < ground.element_count(); ++e) {
      const auto ids = ground.element(e);
      for (std::size_t i = 0; i < ids.size(); ++i) pts[i] = ground.vertex(ids[i]);
      elements_.push_back(make_simplex_data({pts.data(), ids.size()}));
    }
    if (!caps) return;
    for (const auto& f : caps->faces()) {
      for (std::size_t i = 0; i < 3; ++i) pts[i] = ground.vertex(f.vertices[i]);
      faces_.push_back(make_simplex_data({pts.data(), 3}));
    }
  }

  const SimplexData& element(Index e) const { return elements_[static_cast<std::size_t>(e)]; }
  const SimplexData& face(std::size_t f) const { return faces_[f]; }

 private:
  std::vector<SimplexData> elements_, faces_;
};

ElementView gather(const SimplexData& data, std::span<const Index> ids, std::span<const double> times) {
  ElementView view;
  view.data = &data;
  view.count = ids.size();
  for (std::size_t i = 0; i < ids.size(); ++i) view.time[i] = times[static_cast<std::size_t>(ids[i])];
  return view;
}

double slope_sq(const ElementView& view) {
  const auto& r_inv = view.data->r_inverse;
  const auto m = static_cast<Eigen::Index>(view.count) - 1;
  double sum = 0.0;
  for (Eigen::Index c = 0; c < m; ++c) {
    double y = 0.0;
    for (Eigen::Index r = 0; r <= c; ++r) y += r_inv(r, c) * (view.time[static_cast<std::size_t>(r + 1)] - view.time[0]);
    sum += y * y;
  }
  return sum;
}

// Times are doubles, so a simplex cannot resolve gradients finer than a few
// ulps of its largest |time| over its smallest altitude.
double rounding(const ElementView& view) {
  double top = 0.0;
  for (std::size_t i = 0; i < view.count; ++i) top = std::max(top, std::abs(view.time[i]));
  return 32.0 * std::numeric_limits<double>::epsilon() * top / view.data->min_altitude;
}

bool slope_ok(double g2, double cap, double tol, double allowance) {
  const double limit = cap * (1.0 + tol) + allowance;
  return g2 <= limit * limit;
}

// Triangle progress: highest minus middle at most (1 - eps) * cap * altitude(highest).
bool progress_ok(const ElementView& view, double epsilon, double cap, double tol) {
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return view.time[static_cast<std::size_t>(a)] < view.time[static_cast<std::size_t>(b)]; });
  const auto top = static_cast<std::size_t>(order[2]);
  const auto mid = static_cast<std::size_t>(order[1]);
  const double allowed = (1.0 - epsilon) * cap * view.data->altitude[top];
  const double excess = view.time[top] - view.time[mid];
  return excess <= allowed * (1.0 + tol) + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(view.time[top]);
}

// The lowest vertex can be raised to the second-lowest time within the cap.
bool liftable_ok(ElementView view, double cap, double tol) {
  if (view.count < 3) return true;
  std::array<std::size_t, kMaxSimplexVertices> order{0, 1, 2, 3};
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(view.count),
            [&](std::size_t a, std::size_t b) { return view.time[a] < view.time[b]; });
  view.time[order[0]] = view.time[order[1]];
  return slope_ok(slope_sq(view), cap, tol, rounding(view));
}

double min_time(const ElementView& view) {
  return *std::min_element(view.time.begin(), view.time.begin() + static_cast<std::ptrdiff_t>(view.count));
}

double cached_advance_scale(const GroundMesh& ground, const FaceCapTable& caps, const LocalGeometry& geo, Index v,
                            double time) {
  double scale = std::numeric_limits<double>::infinity();
  for (auto e : ground.star(v))
    scale = std::min(scale, geo.element(e).altitude[static_cast<std::size_t>(ground.local_index(e, v))] /
                                ground.speed(e, time));
  for (auto f : caps.faces_of(v)) {
    const auto& face = caps.faces()[static_cast<std::size_t>(f)];
    const auto i = static_cast<std::size_t>(std::find(face.vertices.begin(), face.vertices.end(), v) - face.vertices.begin());
    scale = std::min(scale, caps.slope_cap(ground, static_cast<std::size_t>(f), time) *
                                geo.face(static_cast<std::size_t>(f)).altitude[i]);
  }
  return scale;
}

double feasible_maximum(const GroundMesh& ground, const FaceCapTable& caps, const LocalGeometry& geo,
                        std::span<const double> times, Index v, double epsilon, double target_time) {
  const double t0 = times[static_cast<std::size_t>(v)];
  struct Constraint {
    ElementView view;
    std::size_t slot = 0;
    double cap = 0.0;
    double progress_room = std::numeric_limits<double>::infinity();
    double others_max = -std::numeric_limits<double>::infinity();
  };
  std::vector<Constraint> cs;
  auto add = [&](const SimplexData& data, std::span<const Index> ids, double cap) {
    Constraint c;
    c.view = gather(data, ids, times);
    c.slot = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), v) - ids.begin());
    c.cap = cap;
    if (ids.size() == 3) {
      c.progress_room = (1.0 - epsilon) * cap * data.altitude[c.slot];
      for (std::size_t i = 0; i < 3; ++i)
        if (i != c.slot) c.others_max = std::max(c.others_max, c.view.time[i]);
    }
    cs.push_back(c);
  };
  for (auto e : ground.star(v)) add(geo.element(e), ground.element(e), 1.0 / ground.speed(e, t0));
  for (auto f : caps.faces_of(v)) {
    const auto& face = caps.faces()[static_cast<std::size_t>(f)];
    add(geo.face(static_cast<std::size_t>(f)), face.vertices, caps.slope_cap(ground, static_cast<std::size_t>(f), t0));
  }
  auto feasible = [&](double t) {
    for (auto& c : cs) {
      c.view.time[c.slot] = t;
      if (slope_sq(c.view) > c.cap * c.cap) return false;
      if (t - c.others_max > c.progress_room) return false;
    }
    return true;
  };

  if (feasible(target_time)) return target_time;
  double lo = t0;
  double step = std::max(cached_advance_scale(ground, caps, geo, v, t0), std::numeric_limits<double>::min());
  double hi = lo + step;
  while (hi < target_time && feasible(hi)) {
    lo = hi;
    step *= 2.0;
    hi = lo + step;
  }
  hi = std::min(hi, target_time);
  for (int it = 0; it < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * std::abs(hi); ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

void CheckResult::fail(Index id, const std::string& what) {
  if (passed) message = what;
  passed = false;
  if (offenders.size() < kMaxOffenders) offenders.push_back(id);
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

FaceCapTable::FaceCapTable(const GroundMesh& ground, double epsilon) {
  offsets_.assign(static_cast<std::size_t>(ground.vertex_count()) + 1, 0);
  if (ground.dim() < 3) return;
  std::map<std::array<Index, 3>, std::size_t> lookup;
  for (Index e = 0; e < ground.element_count(); ++e) {
    const auto ids = ground.element(e);
    const SimplexGeometry tet = ground.element_geometry(e);
    for (int i = 0; i < 4; ++i) {
      std::array<Index, 3> key{};
      std::size_t n = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) key[n++] = ids[static_cast<std::size_t>(j)];
      std::sort(key.begin(), key.end());
      const double kappa = (1.0 - epsilon) * sigma_F(tet.vertex(i), tet.facet(i));
      auto [it, inserted] = lookup.emplace(key, faces_.size());
      if (inserted) faces_.push_back({key, {}});
      faces_[it->second].parents.emplace_back(e, kappa);
    }
  }
  for (const auto& f : faces_)
    for (auto v : f.vertices) ++offsets_[static_cast<std::size_t>(v) + 1];
  for (std::size_t v = 1; v < offsets_.size(); ++v) offsets_[v] += offsets_[v - 1];
  incidence_.resize(static_cast<std::size_t>(offsets_.back()));
  std::vector<Index> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t f = 0; f < faces_.size(); ++f)
    for (auto v : faces_[f].vertices) incidence_[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = static_cast<Index>(f);
}

std::span<const Index> FaceCapTable::faces_of(Index v) const {
  const auto b = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
  return std::span<const Index>(incidence_).subspan(b, e - b);
}

double FaceCapTable::slope_cap(const GroundMesh& ground, std::size_t face, double time) const {
  double cap = std::numeric_limits<double>::infinity();
  for (const auto& [e, kappa] : faces_[face].parents) cap = std::min(cap, kappa / ground.speed(e, time));
  return cap;
}

double advance_scale(const GroundMesh& ground, const FaceCapTable& caps, Index v, double time) {
  return cached_advance_scale(ground, caps, LocalGeometry(ground, &caps), v, time);
}

RunTrace trace_from_mesh(const SpaceTimeMesh& mesh, double target_time, double epsilon) {
  RunTrace trace;
  trace.target_time = target_time;
  trace.epsilon = epsilon;
  for (Index v = 0; v < mesh.ground_vertex_count(); ++v) trace.initial_times.push_back(mesh.time(v));
  trace.lifts.reserve(static_cast<std::size_t>(mesh.patch_count()));
  for (Index pos = 0; pos < mesh.patch_count(); ++pos) {
    const Patch& p = mesh.patch(pos);
    LiftRecord r;
    r.vertex = p.ground_vertex;
    r.old_time = mesh.time(p.base);
    r.new_time = mesh.time(p.apex);
    r.patch = p.id;
    trace.lifts.push_back(r);
  }
  return trace;
}

double max_feasible_time(const GroundMesh& ground, const FaceCapTable& caps, std::span<const double> times, Index v,
                         double epsilon, double target_time) {
  return feasible_maximum(ground, caps, LocalGeometry(ground, &caps), times, v, epsilon, target_time);
}

CheckResult check_cone_facets(const SpaceTimeMesh& mesh, const GroundMesh& ground, double tolerance) {
  CheckResult r;
  r.name = "cone_facets";
  const LocalGeometry geo(ground);
  const auto n = static_cast<std::size_t>(mesh.facet_size());
  double worst = 0.0, worst_excess = -std::numeric_limits<double>::infinity();
  std::int64_t facets = 0;
  auto check = [&](Index ge, const FacetVertices& f, Index id, const std::string& label) {
    ElementView view;
    view.data = &geo.element(ge);
    view.count = n;
    for (std::size_t i = 0; i < n; ++i) view.time[i] = mesh.time(f[i]);
    const double cap = 1.0 / ground.speed(ge, min_time(view));
    const double slope = std::sqrt(slope_sq(view));
    worst = std::max(worst, slope / cap);
    worst_excess = std::max(worst_excess, slope - cap);
    ++facets;
    if (slope > cap * (1.0 + tolerance) + rounding(view))
      r.fail(id, label + " has slope " + fmt(slope) + " above cap " + fmt(cap));
  };
  for (Index ge = 0; ge < mesh.ground_element_count(); ++ge) {
    FacetVertices f{};
    f.fill(kNone);
    const auto ids = mesh.ground_element(ge);
    std::copy(ids.begin(), ids.end(), f.begin());
    check(ge, f, ge, "initial facet over ground element " + std::to_string(ge));
  }
  for (Index e = 0; e < mesh.element_count(); ++e) {
    check(mesh.element(e).ground_element, mesh.outflow_facet(e), e,
          "outflow facet of space-time element " + std::to_string(e));
    if (!(mesh.element_duration(e) > 0.0)) r.fail(e, "space-time element " + std::to_string(e) + " has no duration");
  }
  r.metrics["facets"] = static_cast<double>(facets);
  r.metrics["max_slope_ratio"] = worst;
  r.metrics["max_slope_excess"] = worst_excess;
  if (r.passed) r.message = std::to_string(facets) + " facets, max slope/cap " + fmt(worst);
  return r;
}

CheckResult check_face_caps(const SpaceTimeMesh& mesh, const GroundMesh& ground, double epsilon, double tolerance) {
  CheckResult r;
  r.name = "face_caps";
  if (ground.dim() < 3) {
    r.skipped = true;
    r.message = "no capped faces below dimension 3";
    return r;
  }
  const FaceCapTable caps(ground, epsilon);
  const LocalGeometry geo(ground, &caps);
  std::map<std::array<Index, 3>, std::size_t> lookup;
  for (std::size_t f = 0; f < caps.faces().size(); ++f) lookup.emplace(caps.faces()[f].vertices, f);
  double worst = 0.0;
  std::int64_t checked = 0;
  auto check_facet = [&](Index ge, const FacetVertices& f, Index id) {
    const auto ids = ground.element(ge);
    for (int skip = 0; skip < 4; ++skip) {
      std::array<std::pair<Index, Index>, 3> pairs{};  // (ground vertex, space-time vertex)
      std::size_t n = 0;
      for (int j = 0; j < 4; ++j)
        if (j != skip) pairs[n++] = {ids[static_cast<std::size_t>(j)], f[static_cast<std::size_t>(j)]};
      std::sort(pairs.begin(), pairs.end());
      const std::size_t face = lookup.at({pairs[0].first, pairs[1].first, pairs[2].first});
      ElementView view;
      view.data = &geo.face(face);
      view.count = 3;
      for (std::size_t i = 0; i < 3; ++i) view.time[i] = mesh.time(pairs[i].second);
      const double cap = caps.slope_cap(ground, face, min_time(view));
      const double g2 = slope_sq(view);
      worst = std::max(worst, std::sqrt(g2) / cap);
      ++checked;
      if (!slope_ok(g2, cap, tolerance, rounding(view)))
        r.fail(id, "face (" + std::to_string(pairs[0].first) + "," + std::to_string(pairs[1].first) + "," +
                       std::to_string(pairs[2].first) + ") of facet " + std::to_string(id) + " has slope " +
                       fmt(std::sqrt(g2)) + " above its cap " + fmt(cap));
      if (!progress_ok(view, epsilon, cap, tolerance))
        r.fail(id, "face of facet " + std::to_string(id) + " violates the scaled progress constraint");
    }
  };
  for (Index ge = 0; ge < mesh.ground_element_count(); ++ge) {
    FacetVertices f{};
    f.fill(kNone);
    const auto ids = mesh.ground_element(ge);
    std::copy(ids.begin(), ids.end(), f.begin());
    check_facet(ge, f, ge);
  }
  for (Index e = 0; e < mesh.element_count(); ++e) check_facet(mesh.element(e).ground_element, mesh.outflow_facet(e), e);
  r.metrics["faces_checked"] = static_cast<double>(checked);
  r.metrics["max_slope_ratio"] = worst;
  if (r.passed) r.message = std::to_string(checked) + " face instances, max slope/cap " + fmt(worst);
  return r;
}

CheckResult check_progress_trace(const RunTrace& trace, const GroundMesh& ground, Index element_count,
                                 double tolerance) {
  CheckResult r;
  r.name = "progress_trace";
  const double eps = trace.epsilon;
  const double T = trace.target_time;
  const FaceCapTable caps(ground, eps);
  const LocalGeometry geo(ground, &caps);
  double min_ratio = std::numeric_limits<double>::infinity();
  std::int64_t unclamped = 0;
  for (std::size_t k = 0; k < trace.lifts.size(); ++k) {
    const auto& lift = trace.lifts[k];
    if (lift.new_time > T) r.fail(static_cast<Index>(k), "lift " + std::to_string(k) + " overshoots the target");
    if (lift.new_time >= T) continue;
    ++unclamped;
    const double scale = cached_advance_scale(ground, caps, geo, lift.vertex, lift.old_time);
    const double ratio = (lift.new_time - lift.old_time) / (eps * scale);
    min_ratio = std::min(min_ratio, ratio);
    if (ratio < 1.0 - tolerance)
      r.fail(static_cast<Index>(k), "lift " + std::to_string(k) + " of vertex " + std::to_string(lift.vertex) +
                                        " advanced " + fmt(lift.new_time - lift.old_time) + " < eps * scale = " +
                                        fmt(eps * scale));
  }
  double inverse_sum = 0.0;
  double t_start = T;
  for (Index v = 0; v < ground.vertex_count(); ++v) {
    const double t0 = v < static_cast<Index>(trace.initial_times.size()) ? trace.initial_times[static_cast<std::size_t>(v)] : 0.0;
    t_start = std::min(t_start, t0);
    inverse_sum += 1.0 / cached_advance_scale(ground, caps, geo, v, t0);
  }
  const double span = std::max(0.0, T - t_start);
  const double patch_bound = span / eps * inverse_sum;
  const auto patches = static_cast<double>(trace.lifts.size());
  r.metrics["patches"] = patches;
  r.metrics["patch_bound"] = patch_bound;
  r.metrics["unclamped_lifts"] = static_cast<double>(unclamped);
  r.metrics["min_advance_ratio"] = unclamped ? min_ratio : 0.0;
  if (patches > patch_bound)
    r.fail(kNone, "patch count " + fmt(patches) + " exceeds the bound " + fmt(patch_bound));
  r.metrics["elements"] = static_cast<double>(element_count);
  if (ground.dim() == 2) {
    const double element_bound = 6.0 * patch_bound;
    r.metrics["element_bound"] = element_bound;
    if (static_cast<double>(element_count) > element_bound)
      r.fail(kNone, "element count " + std::to_string(element_count) + " exceeds the bound " + fmt(element_bound));
  }
  if (r.passed)
    r.message = std::to_string(trace.lifts.size()) + " lifts, min advance / (eps * scale) " +
                (unclamped ? fmt(min_ratio) : std::string("n/a")) + ", patches " + fmt(patches) + " <= " +
                fmt(patch_bound);
  return r;
}

CheckResult check_causality(const SpaceTimeMesh& mesh, bool self_test) {
  CheckResult r;
  r.name = "causality";
  const SweepResult sweep = causal_sweep(mesh);
  if (!sweep.ok) r.fail(sweep.failed_patch, sweep.message);
  r.metrics["patches"] = static_cast<double>(mesh.patch_count());
  if (!self_test || !sweep.ok) return r;

  std::unordered_map<Index, Index> position;
  for (Index pos = 0; pos < mesh.patch_count(); ++pos) position[mesh.patch(pos).id] = pos;
  Index later = kNone, earlier = kNone;
  for (Index pos = 0; pos < mesh.patch_count() && later == kNone; ++pos) {
    const Patch& p = mesh.patch(pos);
    for (Index e = p.first_element; e < p.first_element + p.element_count; ++e)
      if (mesh.element(e).source != kNone) {
        later = pos;
        earlier = position.at(mesh.element(e).source);
        break;
      }
  }
  if (later == kNone) {
    r.metrics["self_test"] = 0.0;
    r.message = "sweep ok; no dependent patch pair to swap";
    return r;
  }
  SpaceTimeMesh broken = mesh;
  broken.swap_patch_order(earlier, later);
  const SweepResult injected = causal_sweep(broken);
  r.metrics["self_test"] = 1.0;
  if (injected.ok)
    r.fail(later, "swapping dependent patches at positions " + std::to_string(earlier) + " and " +
                      std::to_string(later) + " went undetected");
  else
    r.message = "sweep ok over " + std::to_string(mesh.patch_count()) + " patches; injected swap detected";
  return r;
}

CheckResult check_front_snapshots(const RunTrace& trace, const GroundMesh& ground, const VerifyOptions& options) {
  CheckResult r;
  r.name = "front_snapshots";
  const double eps = trace.epsilon;
  const double T = trace.target_time;
  const double tol = options.tolerance;
  const FaceCapTable caps(ground, eps);
  const LocalGeometry geo(ground, &caps);
  std::vector<double> times = trace.initial_times;
  if (times.size() != static_cast<std::size_t>(ground.vertex_count())) {
    r.fail(kNone, "initial time count does not match the ground mesh");
    return r;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::int64_t sampled = 0;
  double worst_oracle = 0.0;

  auto check_simplex = [&](const SimplexData& data, std::span<const Index> ids, double cap, Index lift,
                           const auto& what) {
    const ElementView view = gather(data, ids, times);
    if (!slope_ok(slope_sq(view), cap, tol, rounding(view))) r.fail(lift, what() + " breaks its slope cap after lift " + std::to_string(lift));
    if (view.count == 3 && !progress_ok(view, eps, cap, tol))
      r.fail(lift, what() + " breaks the progress constraint after lift " + std::to_string(lift));
    if (!liftable_ok(view, cap, tol))
      r.fail(lift, what() + ": lowest vertex cannot reach the middle vertex after lift " + std::to_string(lift));
  };

  for (Index e = 0; e < ground.element_count(); ++e) {
    const auto ids = ground.element(e);
    const ElementView view = gather(geo.element(e), ids, times);
    check_simplex(geo.element(e), ids, 1.0 / ground.speed(e, min_time(view)), kNone,
                  [&] { return "initial element " + std::to_string(e); });
  }

  for (std::size_t k = 0; k < trace.lifts.size(); ++k) {
    const auto& lift = trace.lifts[k];
    const auto id = static_cast<Index>(k);
    const Index v = lift.vertex;
    if (v < 0 || v >= ground.vertex_count()) {
      r.fail(id, "lift " + std::to_string(k) + " names an unknown vertex");
      return r;
    }
    auto& tv = times[static_cast<std::size_t>(v)];
    if (tv != lift.old_time) r.fail(id, "lift " + std::to_string(k) + " starts from a stale time");
    for (auto u : ground.neighbors(v))
      if (times[static_cast<std::size_t>(u)] < tv)
        r.fail(id, "lift " + std::to_string(k) + " raises vertex " + std::to_string(v) + " which is not a local minimum");
    if (!(lift.new_time > tv) || lift.new_time > T)
      r.fail(id, "lift " + std::to_string(k) + " does not move its vertex forward within the target");

    const bool sample = k == 0 || coin(rng) < options.oracle_sample_rate;
    if (sample) {
      ++sampled;
      const double oracle = feasible_maximum(ground, caps, geo, times, v, eps, T);
      const double scale = std::max(std::abs(oracle), oracle - tv);
      const double gap = std::abs(lift.new_time - oracle) / scale;
      worst_oracle = std::max(worst_oracle, gap);
      if (gap > options.oracle_tolerance)
        r.fail(id, "lift " + std::to_string(k) + " reached " + fmt(lift.new_time) + " but the oracle maximum is " +
                       fmt(oracle));
    }

    const double speed_time = tv;
    tv = lift.new_time;
    for (auto e : ground.star(v))
      check_simplex(geo.element(e), ground.element(e), 1.0 / ground.speed(e, speed_time), id,
                    [&] { return "element " + std::to_string(e); });
    for (auto f : caps.faces_of(v)) {
      const auto fi = static_cast<std::size_t>(f);
      check_simplex(geo.face(fi), caps.faces()[fi].vertices, caps.slope_cap(ground, fi, speed_time), id,
                    [&] { return "face " + std::to_string(f); });
    }
    if (r.offenders.size() >= kMaxOffenders) break;
  }
  if (r.passed)
    for (Index v = 0; v < ground.vertex_count(); ++v)
      if (times[static_cast<std::size_t>(v)] != T && !trace.lifts.empty()) {
        r.fail(kNone, "vertex " + std::to_string(v) + " ends at " + fmt(times[static_cast<std::size_t>(v)]) +
                          " instead of the target");
        break;
      }
  r.metrics["lifts"] = static_cast<double>(trace.lifts.size());
  r.metrics["oracle_samples"] = static_cast<double>(sampled);
  r.metrics["max_oracle_gap"] = worst_oracle;
  if (r.passed)
    r.message = std::to_string(trace.lifts.size()) + " lifts replayed, " + std::to_string(sampled) +
                " checked against the oracle (max relative gap " + fmt(worst_oracle) + ")";
  return r;
}

CheckResult check_trace_consistency(const RunTrace& recorded, const RunTrace& derived) {
  CheckResult r;
  r.name = "trace_consistency";
  if (recorded.initial_times != derived.initial_times) r.fail(kNone, "initial times differ from the mesh");
  if (recorded.lifts.size() != derived.lifts.size()) {
    r.fail(kNone, "trace has " + std::to_string(recorded.lifts.size()) + " lifts, mesh has " +
                      std::to_string(derived.lifts.size()) + " patches");
    return r;
  }
  for (std::size_t k = 0; k < recorded.lifts.size(); ++k) {
    const auto& a = recorded.lifts[k];
    const auto& b = derived.lifts[k];
    if (a.vertex != b.vertex || a.old_time != b.old_time || a.new_time != b.new_time || a.patch != b.patch)
      r.fail(static_cast<Index>(k), "lift " + std::to_string(k) + " disagrees with patch " + std::to_string(k));
  }
  if (r.passed) r.message = "trace matches the mesh patch sequence";
  return r;
}

VerifyReport verify(const SpaceTimeMesh& mesh, const GroundMesh& ground, double target_time, double epsilon,
                    const VerifyOptions& options, const std::optional<RunTrace>& trace) {
  if (mesh.ground_dim() != ground.dim() || mesh.ground_element_count() != ground.element_count() ||
      mesh.ground_vertex_count() != ground.vertex_count())
    throw MeshError("space-time mesh was not built over this ground mesh");
  for (Index e = 0; e < ground.element_count(); ++e) {
    const auto a = mesh.ground_element(e);
    const auto b = ground.element(e);
    if (!std::equal(a.begin(), a.end(), b.begin(), b.end()))
      throw MeshError("ground element " + std::to_string(e) + " differs between the meshes");
  }
  VerifyReport report;
  const RunTrace derived = trace_from_mesh(mesh, target_time, epsilon);
  report.checks.push_back(check_cone_facets(mesh, ground, options.tolerance));
  report.checks.push_back(check_face_caps(mesh, ground, epsilon, options.tolerance));
  report.checks.push_back(check_progress_trace(derived, ground, mesh.element_count(), options.tolerance));
  report.checks.push_back(check_causality(mesh, options.causality_self_test));
  report.checks.push_back(check_front_snapshots(derived, ground, options));
  if (trace) {
    report.checks.push_back(check_trace_consistency(*trace, derived));
  } else {
    CheckResult skipped;
    skipped.name = "trace_consistency";
    skipped.skipped = true;
    skipped.message = "no trace supplied";
    report.checks.push_back(skipped);
  }
  return report;
}

}  // namespace tentpitch
