#include "tentpitch/spacetime.hpp"

#include "tentpitch/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

namespace tentpitch {
namespace {

SweepToken mix(SweepToken x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<SweepToken> default_visitor(const Patch& patch, std::span<const SweepToken> inflow) {
  SweepToken acc = mix(static_cast<SweepToken>(patch.ground_vertex));
  for (auto t : inflow) acc = mix(acc ^ t);
  std::vector<SweepToken> out(inflow.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mix(acc + i);
  return out;
}

std::string facet_string(const FacetVertices& f, int n) {
  std::string s = "(";
  for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(f[static_cast<std::size_t>(i)]);
  return s + ")";
}

}  // namespace

SpaceTimeMesh::SpaceTimeMesh(const GroundMesh& ground, std::span<const double> initial_times) {
  ground_dim_ = ground.dim();
  initial_vertex_count_ = ground.vertex_count();
  if (initial_times.size() != static_cast<std::size_t>(ground.vertex_count()))
    throw MeshError("initial time count does not match vertex count");
  ground_connectivity_.reserve(static_cast<std::size_t>(ground.element_count()) * static_cast<std::size_t>(facet_size()));
  for (Index e = 0; e < ground.element_count(); ++e)
    for (auto v : ground.element(e)) ground_connectivity_.push_back(v);
  for (Index v = 0; v < ground.vertex_count(); ++v) {
    const Point& p = ground.vertex(v);
    for (Eigen::Index k = 0; k < p.size(); ++k) coords_.push_back(p(k));
    times_.push_back(initial_times[static_cast<std::size_t>(v)]);
    vertex_ground_.push_back(v);
  }
  reset_frontier();
}

SpaceTimeMesh SpaceTimeMesh::from_records(int ground_dim, std::vector<Index> ground_connectivity,
                                          std::vector<double> coords, std::vector<double> times,
                                          std::vector<Index> vertex_ground, std::vector<SpaceTimeElement> elements,
                                          std::vector<Patch> patches) {
  if (ground_dim < 1 || ground_dim > kMaxDim) throw UnsupportedError("unsupported ground dimension");
  SpaceTimeMesh m;
  m.ground_dim_ = ground_dim;
  const auto fs = static_cast<std::size_t>(ground_dim + 1);
  if (ground_connectivity.empty() || ground_connectivity.size() % fs != 0)
    throw MeshError("ground connectivity length is not a positive multiple of d+1");
  if (coords.size() != times.size() * static_cast<std::size_t>(ground_dim) || vertex_ground.size() != times.size())
    throw MeshError("space-time vertex arrays have inconsistent lengths");
  Index nground = 0;
  for (auto v : ground_connectivity) {
    if (v < 0) throw MeshError("negative ground vertex id");
    nground = std::max(nground, v + 1);
  }
  if (static_cast<std::size_t>(nground) > times.size()) throw MeshError("fewer space-time vertices than ground vertices");
  for (std::size_t v = 0; v < static_cast<std::size_t>(nground); ++v)
    if (vertex_ground[v] != static_cast<Index>(v)) throw MeshError("initial front vertices must map to their ground vertex");
  for (auto g : vertex_ground)
    if (g < 0 || g >= nground) throw MeshError("space-time vertex maps to unknown ground vertex");
  const auto nv = static_cast<Index>(times.size());
  const auto ne = static_cast<Index>(elements.size());
  const auto np = static_cast<Index>(patches.size());
  const auto nge = static_cast<Index>(ground_connectivity.size() / fs);
  for (const auto& el : elements) {
    for (std::size_t i = 0; i <= fs; ++i)
      if (el.vertices[i] < 0 || el.vertices[i] >= nv) throw MeshError("element references unknown vertex");
    if (el.ground_element < 0 || el.ground_element >= nge) throw MeshError("element references unknown ground element");
    if (el.patch < 0 || el.patch >= np) throw MeshError("element references unknown patch");
    if (el.source < kNone || el.source >= np) throw MeshError("element references unknown source patch");
  }
  for (const auto& p : patches) {
    if (p.id < 0 || p.id >= np) throw MeshError("patch id out of range");
    if (p.first_element < 0 || p.element_count < 0 || p.first_element + p.element_count > ne)
      throw MeshError("patch " + std::to_string(p.id) + " element range out of bounds");
    if (p.base < 0 || p.base >= nv || p.apex < 0 || p.apex >= nv) throw MeshError("patch vertex out of range");
    if (p.ground_vertex < 0 || p.ground_vertex >= nground) throw MeshError("patch ground vertex out of range");
  }
  m.initial_vertex_count_ = nground;
  m.ground_connectivity_ = std::move(ground_connectivity);
  m.coords_ = std::move(coords);
  m.times_ = std::move(times);
  m.vertex_ground_ = std::move(vertex_ground);
  m.elements_ = std::move(elements);
  m.patches_ = std::move(patches);
  m.reset_frontier();
  // Frontier after the stored patches, taken in stored order without checks.
  for (const auto& p : m.patches_) {
    for (Index e = p.first_element; e < p.first_element + p.element_count; ++e) {
      const auto& el = m.elements_[static_cast<std::size_t>(e)];
      const FacetVertices out = m.outflow_facet(e);
      std::copy_n(out.begin(), fs, m.frontier_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(el.ground_element) * fs));
      m.frontier_source_[static_cast<std::size_t>(el.ground_element)] = p.id;
    }
    m.front_vertex_[static_cast<std::size_t>(p.ground_vertex)] = p.apex;
  }
  return m;
}

void SpaceTimeMesh::reset_frontier() {
  frontier_ = ground_connectivity_;
  frontier_source_.assign(static_cast<std::size_t>(ground_element_count()), kNone);
  front_vertex_.resize(static_cast<std::size_t>(initial_vertex_count_));
  for (Index v = 0; v < initial_vertex_count_; ++v) front_vertex_[static_cast<std::size_t>(v)] = v;
}

void SpaceTimeMesh::reserve(std::size_t elements, std::size_t vertices) {
  elements_.reserve(elements);
  times_.reserve(vertices);
  vertex_ground_.reserve(vertices);
  coords_.reserve(vertices * static_cast<std::size_t>(ground_dim_));
}

std::span<const Index> SpaceTimeMesh::ground_element(Index e) const {
  if (e < 0 || e >= ground_element_count()) throw std::out_of_range("ground element out of range");
  const auto fs = static_cast<std::size_t>(facet_size());
  return {ground_connectivity_.data() + static_cast<std::size_t>(e) * fs, fs};
}

SpaceTimePoint SpaceTimeMesh::point(Index v) const {
  const auto d = static_cast<std::size_t>(ground_dim_);
  return {make_point(std::span<const double>(coords_.data() + static_cast<std::size_t>(v) * d, d)), time(v)};
}

std::span<const Index> SpaceTimeMesh::element_vertices(Index e) const {
  const auto& el = element(e);
  return {el.vertices.data(), static_cast<std::size_t>(facet_size() + 1)};
}

FacetVertices SpaceTimeMesh::inflow_facet(Index e) const {
  const auto& el = element(e);
  FacetVertices f;
  f.fill(kNone);
  std::copy_n(el.vertices.begin() + 1, facet_size(), f.begin());
  return f;
}

FacetVertices SpaceTimeMesh::outflow_facet(Index e) const {
  const auto& el = element(e);
  FacetVertices f = inflow_facet(e);
  const Index apex = el.vertices[0];
  const Index g = vertex_ground_[static_cast<std::size_t>(apex)];
  for (int i = 0; i < facet_size(); ++i)
    if (vertex_ground_[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])] == g) f[static_cast<std::size_t>(i)] = apex;
  return f;
}

double SpaceTimeMesh::element_duration(Index e) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto v : element_vertices(e)) {
    lo = std::min(lo, time(v));
    hi = std::max(hi, time(v));
  }
  return hi - lo;
}

FacetVertices SpaceTimeMesh::frontier_facet(Index e) const {
  if (e < 0 || e >= ground_element_count()) throw std::out_of_range("ground element out of range");
  FacetVertices f;
  f.fill(kNone);
  const auto fs = static_cast<std::size_t>(facet_size());
  std::copy_n(frontier_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(e) * fs), fs, f.begin());
  return f;
}

Index SpaceTimeMesh::append_patch(const Tent& tent) {
  const Index gv = tent.ground_vertex;
  if (gv < 0 || gv >= initial_vertex_count_) throw InvariantViolation("tent ground vertex out of range");
  if (tent.base != front_vertex(gv))
    throw InvariantViolation("tent base " + std::to_string(tent.base) + " is not the front vertex of ground vertex " +
                             std::to_string(gv));
  if (!(tent.apex_time > time(tent.base))) throw InvariantViolation("tent apex is not above its base");
  const auto fs = static_cast<std::size_t>(facet_size());
  for (const auto& f : tent.inflow) {
    if (f.ground_element < 0 || f.ground_element >= ground_element_count())
      throw InvariantViolation("tent facet references unknown ground element");
    const FacetVertices current = frontier_facet(f.ground_element);
    if (!std::equal(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(fs), f.vertices.begin()) ||
        frontier_source_[static_cast<std::size_t>(f.ground_element)] != f.source)
      throw InvariantViolation("inflow facet " + facet_string(f.vertices, facet_size()) + " over ground element " +
                               std::to_string(f.ground_element) + " is not on the frontier");
    if (std::find(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(fs), tent.base) ==
        current.begin() + static_cast<std::ptrdiff_t>(fs))
      throw InvariantViolation("inflow facet does not contain the tent base");
  }

  const Index id = patch_count();
  const Index apex = vertex_count();
  const auto d = static_cast<std::size_t>(ground_dim_);
  for (std::size_t k = 0; k < d; ++k) coords_.push_back(coords_[static_cast<std::size_t>(tent.base) * d + k]);
  times_.push_back(tent.apex_time);
  vertex_ground_.push_back(gv);

  Patch patch{id, gv, tent.base, apex, element_count(), static_cast<Index>(tent.inflow.size())};
  for (const auto& f : tent.inflow) {
    SpaceTimeElement el;
    el.vertices.fill(kNone);
    el.vertices[0] = apex;
    std::copy_n(f.vertices.begin(), fs, el.vertices.begin() + 1);
    el.patch = id;
    el.ground_element = f.ground_element;
    el.source = f.source;
    elements_.push_back(el);
    auto slot = frontier_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(f.ground_element) * fs);
    std::replace(slot, slot + static_cast<std::ptrdiff_t>(fs), tent.base, apex);
    frontier_source_[static_cast<std::size_t>(f.ground_element)] = id;
  }
  patches_.push_back(patch);
  front_vertex_[static_cast<std::size_t>(gv)] = apex;
  return id;
}

void SpaceTimeMesh::swap_patch_order(Index a, Index b) {
  std::swap(patches_.at(static_cast<std::size_t>(a)), patches_.at(static_cast<std::size_t>(b)));
}

SweepResult causal_sweep(const SpaceTimeMesh& mesh, const SweepVisitor& visitor) {
  SweepResult result;
  const auto fs = static_cast<std::size_t>(mesh.facet_size());
  const auto nge = static_cast<std::size_t>(mesh.ground_element_count());
  std::vector<FacetVertices> frontier(nge);
  std::vector<Index> source(nge, kNone);
  std::vector<SweepToken> token(nge);
  for (std::size_t e = 0; e < nge; ++e) {
    frontier[e].fill(kNone);
    const auto ids = mesh.ground_element(static_cast<Index>(e));
    std::copy(ids.begin(), ids.end(), frontier[e].begin());
    token[e] = mix(e);
  }
  std::vector<SweepToken> inflow;
  for (Index pos = 0; pos < mesh.patch_count(); ++pos) {
    const Patch& p = mesh.patch(pos);
    inflow.clear();
    for (Index e = p.first_element; e < p.first_element + p.element_count; ++e) {
      const auto& el = mesh.element(e);
      const auto ge = static_cast<std::size_t>(el.ground_element);
      const FacetVertices in = mesh.inflow_facet(e);
      const bool same = std::equal(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(fs), frontier[ge].begin());
      if (el.patch != p.id || !same || el.source != source[ge]) {
        result.ok = false;
        result.failed_patch = pos;
        result.message = "patch " + std::to_string(p.id) + " (position " + std::to_string(pos) +
                         ") consumes facet over ground element " + std::to_string(ge) + " linked to patch " +
                         std::to_string(el.source) + ", but the frontier there was produced by " +
                         (source[ge] == kNone ? std::string("the initial front") : "patch " + std::to_string(source[ge]));
        return result;
      }
      inflow.push_back(token[ge]);
    }
    std::vector<SweepToken> outflow = visitor ? visitor(p, inflow) : default_visitor(p, inflow);
    if (outflow.size() != inflow.size()) {
      result.ok = false;
      result.failed_patch = pos;
      result.message = "visitor returned the wrong number of outflow tokens for patch " + std::to_string(p.id);
      return result;
    }
    for (Index e = p.first_element; e < p.first_element + p.element_count; ++e) {
      const auto ge = static_cast<std::size_t>(mesh.element(e).ground_element);
      frontier[ge] = mesh.outflow_facet(e);
      source[ge] = p.id;
      token[ge] = outflow[static_cast<std::size_t>(e - p.first_element)];
    }
  }
  SweepToken digest = 0;
  for (auto t : token) digest = mix(digest ^ t);
  result.digest = digest;
  return result;
}

MeshStats stats(const SpaceTimeMesh& mesh, double seconds) {
  MeshStats s;
  s.patches = mesh.patch_count();
  s.elements = mesh.element_count();
  s.seconds = seconds;
  s.elements_per_second = seconds > 0.0 ? s.elements / seconds : 0.0;
  for (const auto& p : mesh.patches()) ++s.patch_size_histogram[p.element_count];
  if (s.elements == 0) return s;
  s.duration_min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const double d = mesh.element_duration(e);
    s.duration_min = std::min(s.duration_min, d);
    s.duration_max = std::max(s.duration_max, d);
    sum += d;
  }
  s.duration_mean = sum / s.elements;
  s.duration_ratio = s.duration_min > 0.0 ? s.duration_max / s.duration_min : 0.0;
  return s;
}

}  // namespace tentpitch
