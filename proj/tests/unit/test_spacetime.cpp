#include "support/generators.hpp"

#include "tentpitch/errors.hpp"
#include "tentpitch/pitcher.hpp"
#include "tentpitch/spacetime.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace tentpitch;
using namespace tentpitch::testing;
using doctest::Approx;

namespace {

GroundMesh two_triangles() {
  return GroundMesh(2, {make_point({0, 0}), make_point({1, 0}), make_point({0, 1}), make_point({1, 1})},
                    {0, 1, 2, 1, 3, 2});
}

Tent tent_over(const SpaceTimeMesh& mesh, const GroundMesh& g, Index v, double t) {
  Tent tent;
  tent.ground_vertex = v;
  tent.base = mesh.front_vertex(v);
  tent.apex_time = t;
  for (auto e : g.star(v)) tent.inflow.push_back({e, mesh.frontier_facet(e), mesh.frontier_source(e)});
  return tent;
}

}  // namespace

TEST_CASE("append_patch examples") {
  const GroundMesh g = two_triangles();
  SpaceTimeMesh mesh(g, std::vector<double>(4, 0.0));
  CHECK(mesh.vertex_count() == 4);
  CHECK(mesh.dim() == 3);

  const Index p0 = mesh.append_patch(tent_over(mesh, g, 1, 0.2));
  CHECK(p0 == 0);
  CHECK(mesh.element_count() == 2);
  CHECK(mesh.vertex_count() == 5);
  CHECK(mesh.front_vertex(1) == 4);
  CHECK(mesh.time(4) == 0.2);
  CHECK(mesh.vertex_ground(4) == 1);
  for (Index e = 0; e < 2; ++e) {
    CHECK(mesh.element(e).vertices[0] == 4);
    CHECK(mesh.element(e).source == kNone);
    CHECK(mesh.element_duration(e) == Approx(0.2));
    const auto out = mesh.outflow_facet(e);
    CHECK(std::find(out.begin(), out.begin() + 3, 4) != out.begin() + 3);
    CHECK(mesh.frontier_source(mesh.element(e).ground_element) == p0);
  }

  const Index p1 = mesh.append_patch(tent_over(mesh, g, 0, 0.1));
  CHECK(mesh.patch(p1).element_count == 1);
  CHECK(mesh.element(2).source == p0);
}

TEST_CASE("append_patch rejects stale or foreign facets") {
  const GroundMesh g = two_triangles();
  SpaceTimeMesh mesh(g, std::vector<double>(4, 0.0));
  const Tent stale = tent_over(mesh, g, 1, 0.2);
  mesh.append_patch(stale);
  Tent again = stale;
  again.base = mesh.front_vertex(1);
  again.apex_time = 0.3;
  CHECK_THROWS_WITH_AS(mesh.append_patch(again), doctest::Contains("ground element 0"), InvariantViolation);
  CHECK(mesh.patch_count() == 1);

  Tent low = tent_over(mesh, g, 0, 0.0);
  CHECK_THROWS_AS(mesh.append_patch(low), InvariantViolation);
  Tent wrong_base = tent_over(mesh, g, 0, 0.1);
  wrong_base.base = 3;
  CHECK_THROWS_AS(mesh.append_patch(wrong_base), InvariantViolation);
  CHECK(mesh.element_count() == 2);
}

TEST_CASE("causal_sweep examples") {
  const GroundMesh g = two_triangles();
  const SpaceTimeMesh empty(g, std::vector<double>(4, 0.0));
  const SweepResult r0 = causal_sweep(empty);
  CHECK(r0.ok);

  const RunResult run_result = run(g, PitchConfig(1.0, 0.1));
  CHECK(causal_sweep(run_result.mesh).ok);

  SpaceTimeMesh broken = run_result.mesh;
  Index a = kNone, b = kNone;
  for (Index i = 0; i + 1 < broken.patch_count() && a == kNone; ++i)
    for (Index j = i + 1; j < broken.patch_count(); ++j) {
      const auto& pi = broken.patch(i);
      bool depends = false;
      for (Index e = broken.patch(j).first_element; e < broken.patch(j).first_element + broken.patch(j).element_count; ++e)
        depends = depends || broken.element(e).source == pi.id;
      if (depends) {
        a = i;
        b = j;
        break;
      }
    }
  REQUIRE(a != kNone);
  broken.swap_patch_order(a, b);
  const SweepResult bad = causal_sweep(broken);
  CHECK(!bad.ok);
  CHECK(bad.failed_patch <= b);
  CHECK(bad.message.find("patch") != std::string::npos);
}

TEST_CASE("causal_sweep passes tokens along facets") {
  Rng rng(51);
  PlanarMesh pm = sweep_triangulation(random_points(rng, 20));
  delaunay_flip(pm);
  const GroundMesh g = to_ground(pm);
  const RunResult r = run(g, PitchConfig(0.5, 0.1));
  std::set<Index> seen;
  Index visited = 0;
  const SweepResult res = causal_sweep(r.mesh, [&](const Patch& p, std::span<const SweepToken> in) {
    CHECK(static_cast<Index>(in.size()) == p.element_count);
    seen.insert(p.id);
    ++visited;
    return std::vector<SweepToken>(in.size(), static_cast<SweepToken>(p.id) + 1);
  });
  CHECK(res.ok);
  CHECK(visited == r.mesh.patch_count());
  CHECK(static_cast<Index>(seen.size()) == r.mesh.patch_count());

  const SweepResult wrong = causal_sweep(r.mesh, [](const Patch&, std::span<const SweepToken>) {
    return std::vector<SweepToken>{};
  });
  CHECK(!wrong.ok);
  CHECK(causal_sweep(r.mesh).digest == causal_sweep(r.mesh).digest);
}

TEST_CASE("stats examples") {
  const GroundMesh g = two_triangles();
  SpaceTimeMesh mesh(g, std::vector<double>(4, 0.0));
  const MeshStats empty = stats(mesh);
  CHECK(empty.elements == 0);
  CHECK(empty.duration_ratio == 0.0);

  mesh.append_patch(tent_over(mesh, g, 1, 0.2));
  mesh.append_patch(tent_over(mesh, g, 0, 0.1));
  const MeshStats s = stats(mesh, 2.0);
  CHECK(s.patches == 2);
  CHECK(s.elements == 3);
  CHECK(s.duration_min == Approx(0.2));
  CHECK(s.duration_max == Approx(0.2));
  CHECK(s.duration_ratio == Approx(1.0));
  CHECK(s.elements_per_second == Approx(1.5));
  CHECK(s.patch_size_histogram.at(2) == 1);
  CHECK(s.patch_size_histogram.at(1) == 1);
}

TEST_CASE("the frontier always covers every ground element once") {
  Rng rng(52);
  PlanarMesh pm = sweep_triangulation(random_points(rng, 25));
  const GroundMesh g = to_ground(pm);
  const RunResult r = run(g, PitchConfig(0.3, 0.1));
  const SpaceTimeMesh& m = r.mesh;
  for (Index e = 0; e < g.element_count(); ++e) {
    const auto facet = m.frontier_facet(e);
    const auto ground = g.element(e);
    for (int i = 0; i < 3; ++i) {
      CHECK(m.vertex_ground(facet[static_cast<std::size_t>(i)]) == ground[static_cast<std::size_t>(i)]);
      CHECK(m.time(facet[static_cast<std::size_t>(i)]) == 0.3);
    }
  }
  Index total = 0;
  for (const auto& p : m.patches()) {
    CHECK(p.element_count == static_cast<Index>(g.star(p.ground_vertex).size()));
    total += p.element_count;
  }
  CHECK(total == m.element_count());
}

TEST_CASE("from_records validates ranges") {
  const GroundMesh g = two_triangles();
  const RunResult r = run(g, PitchConfig(0.5, 0.1));
  const SpaceTimeMesh& m = r.mesh;
  std::vector<Index> conn;
  for (Index e = 0; e < g.element_count(); ++e) conn.insert(conn.end(), g.element(e).begin(), g.element(e).end());
  const auto rebuild = [&](std::vector<SpaceTimeElement> els) {
    return SpaceTimeMesh::from_records(2, conn, {m.coords().begin(), m.coords().end()},
                                       {m.times().begin(), m.times().end()},
                                       {m.vertex_grounds().begin(), m.vertex_grounds().end()}, std::move(els),
                                       {m.patches().begin(), m.patches().end()});
  };
  const SpaceTimeMesh copy = rebuild({m.elements().begin(), m.elements().end()});
  CHECK(copy.element_count() == m.element_count());
  CHECK(causal_sweep(copy).ok);
  std::vector<SpaceTimeElement> bad(m.elements().begin(), m.elements().end());
  bad[0].vertices[1] = 999;
  CHECK_THROWS_AS(rebuild(bad), MeshError);
}
