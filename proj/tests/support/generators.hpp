#pragma once

#include "tentpitch/ground_mesh.hpp"

#include <array>
#include <random>
#include <vector>

namespace tentpitch::testing {

using Rng = std::mt19937_64;
using Triangle = std::array<Index, 3>;

struct PlanarMesh {
  std::vector<std::array<double, 2>> points;
  std::vector<Triangle> triangles;
};

/// Sweep-line triangulation: points sorted by x, each new point fanned to the
/// hull edges it sees. Produces many obtuse slivers.
PlanarMesh sweep_triangulation(std::vector<std::array<double, 2>> points);

/// Lawson edge flips until every interior edge is locally Delaunay.
void delaunay_flip(PlanarMesh& mesh);

/// n uniform random points in [0, w] x [0, h].
std::vector<std::array<double, 2>> random_points(Rng& rng, int n, double w = 1.0, double h = 1.0);

/// Splits `count` random triangles by a point near the midpoint of their
/// longest edge so that the new triangle there has a largest angle of
/// `max_angle_deg`. Returns the number of splits made.
int force_obtuse(PlanarMesh& mesh, Rng& rng, int count, double max_angle_deg);

/// Largest interior angle over all triangles, in degrees.
double max_angle_deg(const PlanarMesh& mesh);

/// Fine jittered grid (spacing `fine`) on [0, 2] x [0, 2] next to a coarse one
/// (spacing `coarse`) on [2, 2 + width] x [0, 2], Delaunay triangulated.
PlanarMesh two_scale_mesh(Rng& rng, double fine, double coarse, double width);

GroundMesh to_ground(const PlanarMesh& mesh, std::vector<double> speeds = {});

/// Random 1D mesh of n segments with jittered spacing.
GroundMesh random_path(Rng& rng, int segments);

/// Kuhn subdivision of an nx x ny x nz box into 6 tetrahedra per cube, with
/// interior and boundary vertices jittered by `jitter` times the spacing.
GroundMesh kuhn_box(Rng& rng, int nx, int ny, int nz, double jitter);

/// One random tetrahedron with reasonable shape.
GroundMesh random_tetrahedron(Rng& rng);

}  // namespace tentpitch::testing
