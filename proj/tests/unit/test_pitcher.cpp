#include "support/generators.hpp"
#include "support/oracles.hpp"

#include "tentpitch/errors.hpp"
#include "tentpitch/pitcher.hpp"
#include "tentpitch/verifier.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tentpitch;
using namespace tentpitch::testing;
using doctest::Approx;

namespace {

const double kSqrt3Half = std::sqrt(3.0) / 2.0;

SimplexGeometry right_triangle() { return SimplexGeometry({make_point({0, 1}), make_point({0, 0}), make_point({1, 0})}); }

SimplexGeometry equilateral() {
  return SimplexGeometry({make_point({0, 0}), make_point({1, 0}), make_point({0.5, kSqrt3Half})});
}

GroundMesh equilateral_mesh() {
  return GroundMesh(2, {make_point({0, 0}), make_point({1, 0}), make_point({0.5, kSqrt3Half})}, {0, 1, 2});
}

SimplexGeometry regular_tet() {
  return SimplexGeometry({make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0.5, kSqrt3Half, 0}),
                          make_point({0.5, std::sqrt(3.0) / 6, std::sqrt(2.0 / 3.0)})});
}

GroundMesh random_planar(Rng& rng, int n) {
  PlanarMesh pm = sweep_triangulation(random_points(rng, n));
  delaunay_flip(pm);
  return to_ground(pm);
}

// Runs greedily until `lifts` lifts were made and returns the front.
Front advanced_front(const GroundMesh& g, const MeshConstants& c, const PitchConfig& cfg, int lifts) {
  Front f(g, c, {cfg.epsilon(), cfg.target_time(), cfg.tolerance()});
  const Pitcher p(g, c, cfg);
  for (int k = 0; k < lifts; ++k) {
    const auto v = f.next_vertex();
    if (!v) break;
    f.apply_lift(*v, p.compute_lift(f, *v).value);
  }
  return f;
}

}  // namespace

TEST_CASE("configuration guards") {
  CHECK_THROWS_AS(PitchConfig(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(PitchConfig(1.0, 0.51), ConfigError);
  CHECK_THROWS_AS(PitchConfig(1.0, -0.1), ConfigError);
  CHECK_THROWS_AS(PitchConfig(-1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(PitchConfig(INFINITY, 0.1), ConfigError);
  CHECK_THROWS_AS(PitchConfig(1.0, 0.1, {}, -1.0), ConfigError);
  CHECK_NOTHROW(PitchConfig(0.0, 0.5));
  CHECK(PitchConfig::unchecked(1.0, 0.9).epsilon() == 0.9);
  CHECK(binding_kind_from_string(to_string(BindingKind::FaceCap)) == BindingKind::FaceCap);
  CHECK_THROWS_AS(binding_kind_from_string("steep"), Error);
}

TEST_CASE("cone bound examples") {
  const std::vector<double> qr{0.0, 0.3};
  CHECK(cone_bound(right_triangle(), 0, qr, 1.0) == Approx(0.9539392).epsilon(1e-7));
  CHECK(cone_bound(right_triangle(), 0, qr, 1.0) == Approx(std::sqrt(0.91)).epsilon(1e-14));
  CHECK(cone_bound(right_triangle(), 0, std::vector<double>{0.0, 0.0}, 1.0) == Approx(1.0).epsilon(1e-14));
  CHECK(cone_bound(equilateral(), 0, std::vector<double>{0.0, 0.0}, 0.5) == Approx(0.4330127).epsilon(1e-7));
  CHECK_THROWS_AS(cone_bound(right_triangle(), 0, std::vector<double>{0.0, 1.5}, 1.0), InvariantViolation);
  const SimplexGeometry seg({make_point({0}), make_point({2})});
  CHECK(cone_bound(seg, 1, std::vector<double>{0.25}, 1.0) == Approx(2.25));
}

TEST_CASE("cone bound agrees with the bisection oracle") {
  const std::vector<Point> pts{make_point({0, 1}), make_point({0, 0}), make_point({1, 0})};
  CHECK(bisect_max_time(pts, {0.0, 0.0, 0.3}, 0, 1.0) == Approx(0.9539392).epsilon(1e-7));
  const std::vector<Point> eq{make_point({0, 0}), make_point({1, 0}), make_point({0.5, kSqrt3Half})};
  CHECK(bisect_max_time(eq, {0.0, 0.0, 0.0}, 0, 0.5) == Approx(0.4330127).epsilon(1e-7));
}

TEST_CASE("progress bound examples") {
  CHECK(progress_bound(1.0, std::vector<double>{0.0, 0.3}, 0.1) == Approx(1.2).epsilon(1e-14));
  CHECK(progress_bound(kSqrt3Half, std::vector<double>{0.0, 0.0}, 0.5) == Approx(0.4330127).epsilon(1e-7));
  CHECK(progress_bound(1.0, std::vector<double>{0.0, 0.3}, 0.1, 0.5) == Approx(0.75).epsilon(1e-14));
}

TEST_CASE("face cap bound examples") {
  const SimplexGeometry face = regular_tet().facet(3);
  const std::vector<double> zeros{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    CHECK(face_cap_bound(face, i, zeros, 1.0) == cone_bound(face, i, zeros, 1.0));
    CHECK(face_cap_bound(face, i, zeros, 0.9) == Approx(0.9 * kSqrt3Half).epsilon(1e-12));
  }
  const double kappa = 0.7;
  const std::vector<double> tet_zeros{0.0, 0.0, 0.0};
  CHECK(cone_bound(regular_tet(), 0, tet_zeros, kappa) == Approx(kappa * std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  const SimplexGeometry tet = regular_tet();
  std::vector<Point> tp(tet.vertices().begin(), tet.vertices().end());
  CHECK(bisect_max_time(tp, {0, 0, 0, 0}, 0, kappa) == Approx(kappa * std::sqrt(2.0 / 3.0)).epsilon(1e-9));
  CHECK(face_cap_bound(face, 0, zeros, 0.9, 2.0) == Approx(0.45 * kSqrt3Half).epsilon(1e-12));
}

TEST_CASE("compute_lift examples") {
  const GroundMesh right(2, {make_point({0, 1}), make_point({0, 0}), make_point({1, 0})}, {0, 1, 2});
  const PitchConfig cfg(10.0, 0.1);
  const MeshConstants rc = precompute(right, 0.1);
  const Front f(right, rc, {0.1, 10.0}, {}, {0.0, 0.0, 0.3});
  const LiftBound b = Pitcher(right, rc, cfg).compute_lift(f, 0);
  CHECK(b.value == Approx(0.9539392).epsilon(1e-7));
  CHECK(b.value <= std::sqrt(0.91));
  CHECK(b.binding.kind == BindingKind::Cone);
  CHECK(b.binding.element == 0);

  const GroundMesh eq = equilateral_mesh();
  const MeshConstants ec = precompute(eq, 0.1);
  const Front flat(eq, ec, {0.1, 10.0});
  const LiftBound e = Pitcher(eq, ec, cfg).compute_lift(flat, 0);
  CHECK(e.value == Approx(0.7794229).epsilon(1e-7));
  CHECK(e.binding.kind == BindingKind::Progress);

  const PitchConfig low(0.2, 0.1);
  const Front lf(eq, ec, {0.1, 0.2});
  const LiftBound t = Pitcher(eq, ec, low).compute_lift(lf, 0);
  CHECK(t.value == 0.2);
  CHECK(t.binding.kind == BindingKind::Target);
}

TEST_CASE("tent sizes") {
  std::vector<Point> pts{make_point({0, 0})};
  for (int k = 0; k < 6; ++k) pts.push_back(make_point({std::cos(k * M_PI / 3), std::sin(k * M_PI / 3)}));
  std::vector<Index> tris;
  for (Index k = 0; k < 6; ++k) tris.insert(tris.end(), {0, 1 + k, 1 + (k + 1) % 6});
  const GroundMesh fan(2, pts, tris);
  const MeshConstants fc = precompute(fan, 0.1);
  const PitchConfig cfg(1.0, 0.1);
  SpaceTimeMesh mesh(fan, std::vector<double>(7, 0.0));
  const Pitcher p(fan, fc, cfg);
  const Tent tent = p.pitch_tent(0, 0.3, mesh);
  CHECK(tent.inflow.size() == 6);
  const Index id = mesh.append_patch(tent);
  CHECK(mesh.patch(0).id == id);
  CHECK(mesh.patch(0).element_count == 6);
  CHECK(mesh.element_count() == 6);

  const GroundMesh one = equilateral_mesh();
  SpaceTimeMesh m1(one, std::vector<double>(3, 0.0));
  CHECK(Pitcher(one, precompute(one, 0.1), cfg).pitch_tent(2, 0.1, m1).inflow.size() == 1);

  const GroundMesh path(1, {make_point({0}), make_point({1}), make_point({2})}, {0, 1, 1, 2});
  SpaceTimeMesh mp(path, std::vector<double>(3, 0.0));
  const Tent pt = Pitcher(path, precompute(path, 0.1), cfg).pitch_tent(1, 0.5, mp);
  CHECK(pt.inflow.size() == 2);
  mp.append_patch(pt);
  CHECK(mp.element_count() == 2);
  CHECK(mp.dim() == 2);
}

TEST_CASE("run examples") {
  const GroundMesh right(2, {make_point({0, 1}), make_point({0, 0}), make_point({1, 0})}, {0, 1, 2});
  const RunResult r = run(right, PitchConfig(10.0, 0.1));
  CHECK(r.mesh.element_count() <= 341);
  CHECK(verify(r.mesh, right, 10.0, 0.1, {}, r.trace).passed());

  const RunResult zero = run(right, PitchConfig(0.0, 0.1));
  CHECK(zero.mesh.patch_count() == 0);
  CHECK(zero.trace.lifts.empty());

  const GroundMesh path(1, {make_point({0}), make_point({1}), make_point({2})}, {0, 1, 1, 2});
  const RunResult p = run(path, PitchConfig(3.0, 0.1));
  CHECK(p.mesh.patch_count() > 3);
  CHECK(p.trace.lifts[0].vertex == 0);
  bool middle_seen = false;
  for (const auto& l : p.trace.lifts) middle_seen = middle_seen || l.vertex == 1;
  CHECK(middle_seen);
  const VerifyReport rep = verify(p.mesh, path, 3.0, 0.1, {}, p.trace);
  CHECK(rep.passed());
  CHECK(rep.find("cone_facets")->metrics.at("max_slope_ratio") <= 1.0 + 1e-9);
  for (Index v = 0; v < path.vertex_count(); ++v) CHECK(p.mesh.time(p.mesh.front_vertex(v)) == 3.0);
}

TEST_CASE("initial times are honoured") {
  const GroundMesh path(1, {make_point({0}), make_point({1}), make_point({2})}, {0, 1, 1, 2});
  const RunResult r = run(path, PitchConfig(2.0, 0.1), {0.5, 0.0, 0.25});
  CHECK(r.trace.initial_times == std::vector<double>{0.5, 0.0, 0.25});
  CHECK(r.trace.lifts[0].vertex == 1);
  CHECK(verify(r.mesh, path, 2.0, 0.1, {}, r.trace).passed());
}

TEST_CASE("planar cone bound matches the closed form") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0), frac(0.0, 0.95);
  int done = 0;
  while (done < 500) {
    const Point p = make_point({u(rng), u(rng)}), q = make_point({u(rng), u(rng)}), r = make_point({u(rng), u(rng)});
    try {
      const SimplexGeometry s({p, q, r});
      if (s.measure() < 1e-3) continue;
      const double tq = u(rng), tr = tq + frac(rng) * (r - q).norm() * (u(rng) < 0 ? -1 : 1);
      CHECK(cone_bound(s, 0, std::vector<double>{tq, tr}, 1.0) ==
            Approx(planar_cone_bound(p, q, r, tq, tr)).epsilon(1e-9));
      ++done;
    } catch (const DegeneracyError&) {
    }
  }
}

TEST_CASE("both orderings of the opposite pair agree") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0), frac(0.0, 0.95);
  int done = 0;
  while (done < 500) {
    const Point p = make_point({u(rng), u(rng)}), q = make_point({u(rng), u(rng)}), r = make_point({u(rng), u(rng)});
    try {
      const SimplexGeometry a({p, q, r}), b({p, r, q});
      if (a.measure() < 1e-3) continue;
      const double tq = u(rng), tr = tq + frac(rng) * (r - q).norm() * (u(rng) < 0 ? -1 : 1);
      const double x = cone_bound(a, 0, std::vector<double>{tq, tr}, 1.0);
      const double y = cone_bound(b, 0, std::vector<double>{tr, tq}, 1.0);
      CHECK(std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)));
      CHECK(planar_cone_bound(p, q, r, tq, tr) == Approx(planar_cone_bound(p, r, q, tr, tq)).epsilon(1e-12));
      ++done;
    } catch (const DegeneracyError&) {
    }
  }
}

TEST_CASE("cone-bound lifts are tight") {
  Rng rng(43);
  const GroundMesh g = random_planar(rng, 40);
  const MeshConstants c = precompute(g, 0.1);
  const PitchConfig cfg(3.0, 0.1);
  Front f(g, c, {0.1, 3.0});
  const Pitcher p(g, c, cfg);
  int tight = 0;
  while (auto v = f.next_vertex()) {
    const LiftBound b = p.compute_lift(f, *v);
    f.apply_lift(*v, b.value);
    if (b.binding.kind != BindingKind::Cone) continue;
    const auto ids = g.element(b.binding.element);
    std::vector<Point> pts;
    std::vector<double> ts;
    for (auto id : ids) {
      pts.push_back(g.vertex(id));
      ts.push_back(f.time(id));
    }
    CHECK(std::sqrt(time_gradient_norm_sq(pts, ts)) == Approx(1.0).epsilon(1e-9));
    ++tight;
  }
  CHECK(tight > 0);
}

TEST_CASE("lift value does not increase with epsilon") {
  Rng rng(44);
  const GroundMesh g = random_planar(rng, 30);
  const PitchConfig base(2.0, 0.1);
  const MeshConstants c = precompute(g, 0.1);
  Front f = advanced_front(g, c, base, 60);
  for (Index v = 0; v < g.vertex_count(); ++v) {
    if (!f.is_local_minimum(v) || f.finished(v)) continue;
    double previous = INFINITY;
    for (double eps : {0.01, 0.05, 0.1, 0.2, 1.0 / 3.0, 0.5}) {
      const MeshConstants ce = precompute(g, eps);
      const double value = Pitcher(g, ce, PitchConfig(2.0, eps)).compute_lift(f, v).value;
      CHECK(value <= previous);
      previous = value;
    }
  }
}

TEST_CASE("every unclamped lift advances by at least eps times the advance scale") {
  Rng rng(45);
  for (int trial = 0; trial < 3; ++trial) {
    PlanarMesh pm = sweep_triangulation(random_points(rng, 50));
    delaunay_flip(pm);
    force_obtuse(pm, rng, 4, 175.0);
    const GroundMesh g = to_ground(pm);
    for (double eps : {0.05, 0.3}) {
      const MeshConstants c = precompute(g, eps);
      const PitchConfig cfg(1.0, eps);
      Front f(g, c, {eps, 1.0});
      const Pitcher p(g, c, cfg);
      while (auto v = f.next_vertex()) {
        const double before = f.time(*v);
        const LiftBound b = p.compute_lift(f, *v);
        if (b.binding.kind != BindingKind::Target)
          CHECK(b.value - before >= eps * guaranteed_advance_scale(g, c, *v, before) * (1.0 - 1e-9));
        f.apply_lift(*v, b.value);
      }
    }
  }
}

TEST_CASE("obtuse meshes terminate") {
  Rng rng(46);
  for (int trial = 0; trial < 5; ++trial) {
    PlanarMesh pm = sweep_triangulation(random_points(rng, 40));
    force_obtuse(pm, rng, 3, 179.0);
    CHECK(max_angle_deg(pm) >= 179.0 - 1e-6);
    const GroundMesh g = to_ground(pm);
    const RunResult r = run(g, PitchConfig(0.5, 0.1));
    for (Index v = 0; v < g.vertex_count(); ++v) CHECK(r.mesh.time(r.mesh.front_vertex(v)) == 0.5);
  }
}

TEST_CASE("tetrahedral meshes terminate within their caps") {
  Rng rng(47);
  for (int trial = 0; trial < 4; ++trial) {
    const GroundMesh g = trial == 0 ? random_tetrahedron(rng) : kuhn_box(rng, trial, 1, 1, 0.2);
    const RunResult r = run(g, PitchConfig(1.0, 0.1));
    const VerifyReport rep = verify(r.mesh, g, 1.0, 0.1, {}, r.trace);
    CHECK(rep.passed());
    CHECK(!rep.find("face_caps")->skipped);
  }
}

TEST_CASE("variable speeds shrink the lifts") {
  const GroundMesh fast(2, {make_point({0, 0}), make_point({1, 0}), make_point({0.5, kSqrt3Half})}, {0, 1, 2}, {2.0});
  const MeshConstants c = precompute(fast, 0.1);
  const Front f(fast, c, {0.1, 10.0});
  const LiftBound b = Pitcher(fast, c, PitchConfig(10.0, 0.1)).compute_lift(f, 0);
  CHECK(b.value == Approx(0.5 * 0.7794229).epsilon(1e-7));

  const RunResult r = run(fast, PitchConfig(2.0, 0.1));
  CHECK(verify(r.mesh, fast, 2.0, 0.1, {}, r.trace).passed());
}
