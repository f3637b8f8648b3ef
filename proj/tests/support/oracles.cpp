#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace tentpitch::testing {

double bisect_max_time(std::span<const Point> points, std::vector<double> times, int vertex, double cap) {
  const auto n = points.size();
  std::vector<SpaceTimePoint> lifted(n);
  for (std::size_t i = 0; i < n; ++i) lifted[i].space = points[i];
  auto slope = [&](double t) {
    times[static_cast<std::size_t>(vertex)] = t;
    for (std::size_t i = 0; i < n; ++i) lifted[i].time = times[i];
    return time_gradient(lifted).norm();
  };
  double diam = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) diam = std::max(diam, (points[i] - points[j]).norm());
  const double centre = *std::max_element(times.begin(), times.end());
  double a = centre - 10.0 * (cap + 1.0) * diam - 10.0;
  double b = centre + 10.0 * (cap + 1.0) * diam + 10.0;
  // The slope is convex in t: ternary search finds its minimiser.
  for (int it = 0; it < 300; ++it) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (slope(m1) < slope(m2))
      b = m2;
    else
      a = m1;
  }
  double lo = 0.5 * (a + b);
  if (slope(lo) > cap) return std::nan("");
  double step = diam + 1.0;
  double hi = lo + step;
  while (slope(hi) <= cap) {
    lo = hi;
    step *= 2.0;
    hi = lo + step;
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (slope(mid) <= cap ? lo : hi) = mid;
  }
  return lo;
}

double planar_cone_bound(const Point& p, const Point& q, const Point& r, double tq, double tr) {
  const Point rq = r - q;
  const Point pq = p - q;
  const double len2 = rq.squaredNorm();
  const double len = std::sqrt(len2);
  const double cross = pq(0) * rq(1) - pq(1) * rq(0);
  const double w = std::abs(cross) / len;
  return tq + (tr - tq) / len2 * pq.dot(rq) + std::sqrt(len2 - (tr - tq) * (tr - tq)) / len * w;
}

}  // namespace tentpitch::testing
