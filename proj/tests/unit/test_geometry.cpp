#include "support/oracles.hpp"

#include "tentpitch/errors.hpp"
#include "tentpitch/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace tentpitch;
using namespace tentpitch::testing;
using doctest::Approx;

namespace {

SimplexGeometry equilateral() {
  return SimplexGeometry({make_point({0, 0}), make_point({1, 0}), make_point({0.5, std::sqrt(3.0) / 2})});
}

SimplexGeometry regular_tet() {
  return SimplexGeometry({make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0.5, std::sqrt(3.0) / 2, 0}),
                          make_point({0.5, std::sqrt(3.0) / 6, std::sqrt(2.0 / 3.0)})});
}

std::vector<Point> random_simplex(std::mt19937_64& rng, int dim, int count) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<Point> pts;
    for (int i = 0; i < count; ++i) {
      Point p(dim);
      for (int k = 0; k < dim; ++k) p(k) = u(rng);
      pts.push_back(p);
    }
    try {
      const SimplexGeometry s{std::span<const Point>(pts)};
      if (s.measure() > 1e-3) return pts;
    } catch (const DegeneracyError&) {
    }
  }
}

bool near(const Point& a, const Point& b, double tol = 1e-12) { return (a - b).norm() <= tol; }

}  // namespace

TEST_CASE("altitude examples") {
  for (int i = 0; i < 3; ++i) CHECK(altitude_distance(equilateral(), i) == Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
  const SimplexGeometry right({make_point({0, 1}), make_point({0, 0}), make_point({1, 0})});
  CHECK(altitude_distance(right, 0) == Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) CHECK(altitude_distance(regular_tet(), i) == Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("projection examples") {
  const SimplexGeometry seg({make_point({-1, 0}), make_point({1, 0})});
  const SimplexGeometry unit({make_point({0, 0}), make_point({1, 0})});
  const SimplexGeometry tri({make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0, 1, 0})});
  CHECK(near(project_to_hyperplane(make_point({0, 1}), seg), make_point({0, 0})));
  CHECK(near(project_to_hyperplane(make_point({2, 1}), unit), make_point({2, 0})));
  CHECK(near(project_to_hyperplane(make_point({1, 1, 1}), tri), make_point({1, 1, 0})));
  CHECK_THROWS_AS(project_to_hyperplane(make_point({0.5, 0}), unit), DegeneracyError);

  CHECK(near(closest_point_in_facet(make_point({0, 1}), seg), make_point({0, 0})));
  CHECK(near(closest_point_in_facet(make_point({2, 1}), unit), make_point({1, 0})));
  CHECK(near(closest_point_in_facet(make_point({2, 2, 1}), tri), make_point({0.5, 0.5, 0})));
}

TEST_CASE("closest point on a triangle beats dense samples") {
  const SimplexGeometry tri({make_point({0, 0, 0}), make_point({1, 0, 0}), make_point({0, 1, 0})});
  const Point p = make_point({2, 2, 1});
  const double best = (p - closest_point_in_facet(p, tri)).norm();
  double sampled = 1e300;
  const int n = 400;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const Point x = make_point({double(i) / n, double(j) / n, 0.0});
      sampled = std::min(sampled, (p - x).norm());
    }
  CHECK(best <= sampled + 1e-15);
  CHECK(best == Approx(sampled).epsilon(1e-4));
}

TEST_CASE("sigma examples") {
  CHECK(sigma_F(make_point({0, 1}), SimplexGeometry({make_point({-1, 0}), make_point({1, 0})})) == 1.0);
  CHECK(sigma_F(make_point({2, 1}), SimplexGeometry({make_point({0, 0}), make_point({1, 0})})) ==
        Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  const SimplexGeometry tri({make_point({-1, -1, 0}), make_point({1, -1, 0}), make_point({0, 1, 0})});
  CHECK(sigma_F(make_point({0, 0, 1}), tri) == 1.0);
}

TEST_CASE("time gradient examples") {
  const std::vector<SpaceTimePoint> flat{{make_point({0, 0}), 2.0}, {make_point({1, 0}), 2.0}, {make_point({0, 1}), 2.0}};
  CHECK(time_gradient(flat).norm() == 0.0);
  const std::vector<SpaceTimePoint> seg{{make_point({0}), 0.0}, {make_point({1}), 0.5}};
  CHECK(time_gradient(seg).norm() == Approx(0.5).epsilon(1e-14));
  const double tp = std::sqrt(0.91);
  const std::vector<SpaceTimePoint> tri{{make_point({0, 1}), tp}, {make_point({0, 0}), 0.0}, {make_point({1, 0}), 0.3}};
  const Point g = time_gradient(tri);
  CHECK(g(0) == Approx(0.3).epsilon(1e-12));
  CHECK(g(1) == Approx(tp).epsilon(1e-12));
  CHECK(g.norm() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate simplices are rejected") {
  CHECK_THROWS_AS(SimplexGeometry({make_point({0, 0}), make_point({1, 1}), make_point({2, 2})}), DegeneracyError);
  CHECK_THROWS_AS(SimplexGeometry({make_point({0, 0}), make_point({0, 0})}), DegeneracyError);
  CHECK_NOTHROW(SimplexGeometry({make_point({0, 0}), make_point({1, 0}), make_point({0.5, 1e-6})}));
}

TEST_CASE("altitude times facet measure is k times the measure") {
  std::mt19937_64 rng(11);
  for (int dim = 1; dim <= 3; ++dim)
    for (int k = 1; k <= dim; ++k)
      for (int trial = 0; trial < 200; ++trial) {
        const auto pts = random_simplex(rng, dim, k + 1);
        const SimplexGeometry s{std::span<const Point>(pts)};
        for (int i = 0; i <= k; ++i) {
          const double lhs = altitude_distance(s, i) * s.facet(i).measure();
          CHECK(lhs == Approx(k * s.measure()).epsilon(1e-9));
        }
      }
}

TEST_CASE("closest point is no farther than random facet samples") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::exponential_distribution<double> ex(1.0);
  for (int dim = 2; dim <= 3; ++dim)
    for (int trial = 0; trial < 20; ++trial) {
      const auto pts = random_simplex(rng, dim, dim);
      const SimplexGeometry facet{std::span<const Point>(pts)};
      Point p(dim);
      for (int k = 0; k < dim; ++k) p(k) = u(rng);
      const double best = (p - closest_point_in_facet(p, facet)).norm();
      for (int s = 0; s < 1000; ++s) {
        std::vector<double> w(pts.size());
        double sum = 0;
        for (auto& x : w) sum += (x = ex(rng));
        Point x = Point::Zero(dim);
        for (std::size_t i = 0; i < pts.size(); ++i) x += w[i] / sum * pts[i];
        CHECK(best <= (p - x).norm() + 1e-12);
      }
    }
}

TEST_CASE("sigma is one exactly when the hull projection lies in the facet") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int dim = 2; dim <= 3; ++dim)
    for (int trial = 0; trial < 300; ++trial) {
      const auto pts = random_simplex(rng, dim, dim);
      const SimplexGeometry facet{std::span<const Point>(pts)};
      Point p(dim);
      for (int k = 0; k < dim; ++k) p(k) = u(rng);
      const Point foot = project_to_hyperplane(p, facet);
      const bool inside = (foot - closest_point_in_facet(foot, facet)).norm() <= 1e-9;
      const double sigma = sigma_F(p, facet);
      CHECK(sigma > 0.0);
      CHECK(sigma <= 1.0);
      CHECK((std::abs(sigma - 1.0) <= 1e-9) == inside);
    }
}

TEST_CASE("time gradient recovers affine data") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int dim = 1; dim <= 3; ++dim)
    for (int trial = 0; trial < 200; ++trial) {
      const auto pts = random_simplex(rng, dim, dim + 1);
      Point g(dim);
      for (int k = 0; k < dim; ++k) g(k) = u(rng);
      const double t0 = 5.0 * u(rng);
      std::vector<SpaceTimePoint> verts;
      for (const auto& p : pts) verts.push_back({p, t0 + g.dot(p)});
      const Point got = time_gradient(verts);
      CHECK((got - g).norm() <= 1e-12 * std::max(1.0, g.norm()) * 10);
      std::vector<double> times;
      for (const auto& v : verts) times.push_back(v.time);
      CHECK(time_gradient_norm_sq(pts, times) == Approx(g.squaredNorm()).epsilon(1e-11));
    }
}

TEST_CASE("a lower-dimensional gradient lies in the facet's direction space") {
  const std::vector<SpaceTimePoint> edge{{make_point({0, 0, 0}), 0.0}, {make_point({1, 1, 0}), 1.0}};
  const Point g = time_gradient(edge);
  CHECK(g(2) == 0.0);
  CHECK(g(0) == Approx(0.5));
  CHECK(g.norm() == Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("geometry is invariant under rigid motions") {
  std::mt19937_64 rng(15);
  for (int dim = 1; dim <= 3; ++dim)
    for (int trial = 0; trial < 50; ++trial) {
      const auto pts = random_simplex(rng, dim, dim + 1);
      const RigidMotion m = random_motion(rng, dim);
      std::vector<Point> moved;
      for (const auto& p : pts) moved.push_back(m.apply(p));
      const SimplexGeometry a{std::span<const Point>(pts)}, b{std::span<const Point>(moved)};
      CHECK(b.measure() == Approx(a.measure()).epsilon(1e-9));
      std::vector<SpaceTimePoint> ta, tb;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        ta.push_back({pts[i], 0.1 * double(i)});
        tb.push_back({moved[i], 0.1 * double(i)});
      }
      CHECK(time_gradient(tb).norm() == Approx(time_gradient(ta).norm()).epsilon(1e-9));
      for (int i = 0; i <= dim; ++i) {
        CHECK(altitude_distance(b, i) == Approx(altitude_distance(a, i)).epsilon(1e-9));
        if (dim >= 2) {
          CHECK(sigma_F(b.vertex(i), b.facet(i)) == Approx(sigma_F(a.vertex(i), a.facet(i))).epsilon(1e-9));
          const Point far = 3.0 * (a.vertex(i) - a.facet(i).vertex(0)) + a.vertex(i);
          const Point mc = m.apply(closest_point_in_facet(far, a.facet(i)));
          CHECK(near(closest_point_in_facet(m.apply(far), b.facet(i)), mc, 1e-9));
        }
      }
    }
}
