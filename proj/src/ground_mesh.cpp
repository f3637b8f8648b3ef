#include "tentpitch/ground_mesh.hpp"

#include "tentpitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace tentpitch {

GroundMesh GroundMesh::load(const RawMesh& raw) {
  if (raw.dim < 1 || raw.dim > kMaxDim)
    throw UnsupportedError("unsupported mesh dimension " + std::to_string(raw.dim) + " (expected 1, 2 or 3)");
  const auto nv = raw.vertices.size();
  if (nv > static_cast<std::size_t>(std::numeric_limits<Index>::max())) throw MeshError("too many vertices");
  std::vector<Point> vertices;
  vertices.reserve(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& c = raw.vertices[v];
    if (c.size() != static_cast<std::size_t>(raw.dim))
      throw MeshError("vertex " + std::to_string(v) + " has " + std::to_string(c.size()) + " coordinates, expected " +
                      std::to_string(raw.dim));
    for (double x : c)
      if (!std::isfinite(x)) throw MeshError("vertex " + std::to_string(v) + " has a non-finite coordinate");
    vertices.push_back(make_point(c));
  }
  std::vector<Index> flat;
  flat.reserve(raw.elements.size() * static_cast<std::size_t>(raw.dim + 1));
  for (std::size_t e = 0; e < raw.elements.size(); ++e) {
    const auto& el = raw.elements[e];
    if (el.size() != static_cast<std::size_t>(raw.dim + 1))
      throw MeshError("element " + std::to_string(e) + " has " + std::to_string(el.size()) + " vertices, expected " +
                      std::to_string(raw.dim + 1));
    for (auto id : el) {
      if (id < 0 || static_cast<std::size_t>(id) >= nv)
        throw MeshError("element " + std::to_string(e) + " references vertex " + std::to_string(id) +
                        " out of range [0, " + std::to_string(nv) + ")");
      flat.push_back(static_cast<Index>(id));
    }
  }
  if (!raw.speeds.empty() && raw.speeds.size() != raw.elements.size())
    throw MeshError("speed count " + std::to_string(raw.speeds.size()) + " does not match element count " +
                    std::to_string(raw.elements.size()));
  return GroundMesh(raw.dim, std::move(vertices), std::move(flat), raw.speeds);
}

GroundMesh::GroundMesh(int dim, std::vector<Point> vertices, std::vector<Index> element_vertices,
                       std::vector<double> speeds)
    : dim_(dim), vertices_(std::move(vertices)), element_vertices_(std::move(element_vertices)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw UnsupportedError("unsupported mesh dimension " + std::to_string(dim_));
  const auto per = static_cast<std::size_t>(dim_ + 1);
  if (element_vertices_.size() % per != 0) throw MeshError("element connectivity length is not a multiple of d+1");
  const auto ne = element_vertices_.size() / per;
  if (ne == 0) throw MeshError("mesh has no elements");
  if (speeds.empty()) speeds.assign(ne, 1.0);
  if (speeds.size() != ne) throw MeshError("speed count does not match element count");
  speeds_ = std::move(speeds);
  for (std::size_t e = 0; e < ne; ++e)
    if (!(speeds_[e] > 0.0) || !std::isfinite(speeds_[e]))
      throw MeshError("element " + std::to_string(e) + " has non-positive wave speed " + std::to_string(speeds_[e]));
  for (const auto& p : vertices_)
    if (p.size() != dim_) throw MeshError("vertex dimension does not match mesh dimension");
  for (auto id : element_vertices_)
    if (id < 0 || id >= vertex_count()) throw MeshError("element references vertex " + std::to_string(id) + " out of range");
  for (Index e = 0; e < element_count(); ++e) {
    try {
      (void)element_geometry(e);
    } catch (const DegeneracyError& err) {
      throw DegeneracyError("element " + std::to_string(e) + ": " + err.what());
    }
  }
  build_adjacency();
  for (Index v = 0; v < vertex_count(); ++v)
    if (star(v).empty()) throw MeshError("vertex " + std::to_string(v) + " is isolated (belongs to no element)");
}

std::span<const Index> GroundMesh::element(Index e) const {
  if (e < 0 || e >= element_count()) throw std::out_of_range("element id " + std::to_string(e) + " out of range");
  const auto per = static_cast<std::size_t>(dim_ + 1);
  return {element_vertices_.data() + static_cast<std::size_t>(e) * per, per};
}

SimplexGeometry GroundMesh::element_geometry(Index e) const {
  std::array<Point, kMaxSimplexVertices> pts{};
  const auto ids = element(e);
  for (std::size_t i = 0; i < ids.size(); ++i) pts[i] = vertices_[static_cast<std::size_t>(ids[i])];
  return SimplexGeometry(std::span<const Point>(pts.data(), ids.size()));
}

double GroundMesh::speed(Index e, double time) const {
  if (!schedule_) return speed(e);
  const double c = schedule_(e, time);
  if (!(c > 0.0) || !std::isfinite(c))
    throw ConfigError("speed schedule returned " + std::to_string(c) + " for element " + std::to_string(e));
  return c;
}

GroundMesh GroundMesh::with_speed_schedule(SpeedSchedule schedule) const {
  GroundMesh copy = *this;
  copy.schedule_ = std::move(schedule);
  return copy;
}

std::span<const Index> GroundMesh::star(Index v) const {
  if (v < 0 || v >= vertex_count()) throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
  const auto b = static_cast<std::size_t>(star_offsets_[static_cast<std::size_t>(v)]);
  const auto n = static_cast<std::size_t>(star_offsets_[static_cast<std::size_t>(v) + 1]) - b;
  return {star_.data() + b, n};
}

std::span<const Index> GroundMesh::neighbors(Index v) const {
  if (v < 0 || v >= vertex_count()) throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
  const auto b = static_cast<std::size_t>(neighbor_offsets_[static_cast<std::size_t>(v)]);
  const auto n = static_cast<std::size_t>(neighbor_offsets_[static_cast<std::size_t>(v) + 1]) - b;
  return {neighbors_.data() + b, n};
}

int GroundMesh::local_index(Index e, Index v) const {
  const auto ids = element(e);
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == v) return static_cast<int>(i);
  return -1;
}

void GroundMesh::build_adjacency() {
  const auto nv = static_cast<std::size_t>(vertex_count());
  star_offsets_.assign(nv + 1, 0);
  for (auto id : element_vertices_) ++star_offsets_[static_cast<std::size_t>(id) + 1];
  for (std::size_t v = 0; v < nv; ++v) star_offsets_[v + 1] += star_offsets_[v];
  star_.assign(element_vertices_.size(), 0);
  std::vector<Index> fill(star_offsets_.begin(), star_offsets_.end() - 1);
  for (Index e = 0; e < element_count(); ++e)
    for (auto id : element(e)) star_[static_cast<std::size_t>(fill[static_cast<std::size_t>(id)]++)] = e;

  neighbor_offsets_.assign(nv + 1, 0);
  neighbors_.clear();
  std::vector<Index> scratch;
  for (std::size_t v = 0; v < nv; ++v) {
    scratch.clear();
    for (auto e : star(static_cast<Index>(v)))
      for (auto u : element(e))
        if (u != static_cast<Index>(v)) scratch.push_back(u);
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    neighbors_.insert(neighbors_.end(), scratch.begin(), scratch.end());
    neighbor_offsets_[v + 1] = static_cast<Index>(neighbors_.size());
  }
}

std::span<const Index> MeshConstants::faces_of(Index v) const {
  if (vertex_face_offsets.empty()) return {};
  const auto b = static_cast<std::size_t>(vertex_face_offsets[static_cast<std::size_t>(v)]);
  const auto n = static_cast<std::size_t>(vertex_face_offsets[static_cast<std::size_t>(v) + 1]) - b;
  return {vertex_faces.data() + b, n};
}

double MeshConstants::inverse_omega_sum() const {
  double sum = 0.0;
  for (double w : omega) sum += 1.0 / w;
  return sum;
}

namespace {

using FaceKey = std::array<Index, kMaxSimplexVertices>;

// One occurrence of a face inside a chain rooted at an element.
struct FaceOccurrence {
  std::array<Index, kMaxSimplexVertices> vertices{};
  int count = 0;
  Index root = kNone;
  double kappa = 1.0;
};

FaceKey key_of(const FaceOccurrence& f) {
  FaceKey key;
  key.fill(kNone);
  std::copy_n(f.vertices.begin(), f.count, key.begin());
  std::sort(key.begin(), key.begin() + f.count);
  return key;
}

SimplexGeometry geometry_of(const GroundMesh& mesh, std::span<const Index> ids) {
  std::array<Point, kMaxSimplexVertices> pts{};
  for (std::size_t i = 0; i < ids.size(); ++i) pts[i] = mesh.vertex(ids[i]);
  return SimplexGeometry(std::span<const Point>(pts.data(), ids.size()));
}

}  // namespace

MeshConstants precompute(const GroundMesh& mesh, double epsilon) {
  MeshConstants c;
  c.dim = mesh.dim();
  c.epsilon = epsilon;
  const int d = mesh.dim();
  const auto per = static_cast<std::size_t>(d + 1);
  const auto ne = static_cast<std::size_t>(mesh.element_count());
  c.altitude.resize(ne * per);
  c.sigma.resize(ne * per);
  c.measure.resize(ne);
  c.boundary_measure.resize(ne);
  c.omega.assign(static_cast<std::size_t>(mesh.vertex_count()), std::numeric_limits<double>::infinity());

  for (Index e = 0; e < mesh.element_count(); ++e) {
    const SimplexGeometry s = mesh.element_geometry(e);
    const auto ids = mesh.element(e);
    c.measure[static_cast<std::size_t>(e)] = s.measure();
    double boundary = 0.0;
    for (int i = 0; i <= d; ++i) {
      const SimplexGeometry f = s.facet(i);
      boundary += f.measure();
      const double w = altitude_distance(s, i);
      const auto slot = static_cast<std::size_t>(e) * per + static_cast<std::size_t>(i);
      c.altitude[slot] = w;
      c.sigma[slot] = sigma_F(s.vertex(i), f);
      auto& om = c.omega[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])];
      om = std::min(om, w);
    }
    c.boundary_measure[static_cast<std::size_t>(e)] = boundary;
  }

  if (d < 3) return c;

  // Recursive caps: a face g with cap k passes (1 - eps) * sigma_F * k down to
  // the facet F opposite each of its vertices. Chains stop at triangles.
  std::vector<FaceOccurrence> level;
  for (Index e = 0; e < mesh.element_count(); ++e) {
    FaceOccurrence occ;
    const auto ids = mesh.element(e);
    std::copy(ids.begin(), ids.end(), occ.vertices.begin());
    occ.count = static_cast<int>(ids.size());
    occ.root = e;
    level.push_back(occ);
  }
  std::map<FaceKey, Index> index_of;
  while (!level.empty() && level.front().count - 1 > 2) {
    std::vector<FaceOccurrence> next;
    for (const auto& g : level) {
      const SimplexGeometry gs = geometry_of(mesh, std::span<const Index>(g.vertices.data(), static_cast<std::size_t>(g.count)));
      for (int i = 0; i < g.count; ++i) {
        FaceOccurrence f;
        f.root = g.root;
        for (int j = 0; j < g.count; ++j)
          if (j != i) f.vertices[static_cast<std::size_t>(f.count++)] = g.vertices[static_cast<std::size_t>(j)];
        f.kappa = (1.0 - epsilon) * sigma_F(gs.vertex(i), gs.facet(i)) * g.kappa;
        next.push_back(f);
      }
    }
    for (const auto& f : next) {
      const FaceKey key = key_of(f);
      auto [it, inserted] = index_of.try_emplace(key, static_cast<Index>(c.faces.size()));
      if (inserted) {
        CappedFace face;
        std::copy_n(key.begin(), f.count, face.vertices.begin());
        face.vertex_count = f.count;
        face.kappa = f.kappa;
        const SimplexGeometry fs = geometry_of(mesh, face.vertex_ids());
        for (int i = 0; i < f.count; ++i) face.altitude[static_cast<std::size_t>(i)] = altitude_distance(fs, i);
        c.faces.push_back(face);
      }
      CappedFace& face = c.faces[static_cast<std::size_t>(it->second)];
      face.kappa = std::min(face.kappa, f.kappa);
      auto parent = std::find_if(face.parents.begin(), face.parents.end(),
                                 [&](const FaceParent& p) { return p.element == f.root; });
      if (parent == face.parents.end())
        face.parents.push_back({f.root, f.kappa});
      else
        parent->kappa = std::min(parent->kappa, f.kappa);
    }
    level = std::move(next);
  }

  const auto nv = static_cast<std::size_t>(mesh.vertex_count());
  c.vertex_face_offsets.assign(nv + 1, 0);
  for (const auto& f : c.faces)
    for (auto v : f.vertex_ids()) ++c.vertex_face_offsets[static_cast<std::size_t>(v) + 1];
  for (std::size_t v = 0; v < nv; ++v) c.vertex_face_offsets[v + 1] += c.vertex_face_offsets[v];
  c.vertex_faces.assign(static_cast<std::size_t>(c.vertex_face_offsets.back()), 0);
  std::vector<Index> fill(c.vertex_face_offsets.begin(), c.vertex_face_offsets.end() - 1);
  for (std::size_t f = 0; f < c.faces.size(); ++f)
    for (auto v : c.faces[f].vertex_ids()) c.vertex_faces[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = static_cast<Index>(f);
  return c;
}

double element_slope_cap(const GroundMesh& mesh, Index e, double time) { return 1.0 / mesh.speed(e, time); }

double face_slope_cap(const GroundMesh& mesh, const CappedFace& face, double time) {
  double cap = std::numeric_limits<double>::infinity();
  for (const auto& p : face.parents) cap = std::min(cap, p.kappa / mesh.speed(p.element, time));
  return cap;
}

double guaranteed_advance_scale(const GroundMesh& mesh, const MeshConstants& constants, Index v, double time) {
  double scale = std::numeric_limits<double>::infinity();
  for (auto e : mesh.star(v)) {
    const int i = mesh.local_index(e, v);
    scale = std::min(scale, constants.altitude_of(e, i) / mesh.speed(e, time));
  }
  for (auto f : constants.faces_of(v)) {
    const auto& face = constants.faces[static_cast<std::size_t>(f)];
    const auto ids = face.vertex_ids();
    const auto i = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), v) - ids.begin());
    for (const auto& p : face.parents)
      scale = std::min(scale, p.kappa * face.altitude[i] / mesh.speed(p.element, time));
  }
  return scale;
}

}  // namespace tentpitch
