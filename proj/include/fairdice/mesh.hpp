// Triangle-mesh generators for every die family (prisms, sharpened prisms,
// bipyramids, cylinders, carved spheres) and bit-exact STL/OBJ export for
// 3D printing. All generated meshes are watertight, outward-oriented and
// have Euler characteristic 2.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fairdice/geometry.hpp"
#include "fairdice/sphere_design.hpp"

namespace fairdice::mesh {

struct TriangleMesh {
    std::vector<Vec3> vertices;                  // mm
    std::vector<std::array<int, 3>> triangles;   // outward (CCW from outside)
};

// Every directed edge must be matched by its reverse exactly once. When
// bad_edges is non-null the violating undirected edges are reported there.
bool is_watertight(const TriangleMesh& mesh,
                   std::vector<std::pair<int, int>>* bad_edges = nullptr);

int euler_characteristic(const TriangleMesh& mesh);  // V - E + F

// Divergence-theorem volume; positive for outward-oriented closed meshes.
double signed_volume(const TriangleMesh& mesh);

// Volume centroid of the enclosed solid.
Vec3 volume_centroid(const TriangleMesh& mesh);

double min_triangle_area(const TriangleMesh& mesh);

// Throws unless the mesh is watertight with Euler characteristic 2, positive
// signed volume, and no triangle of area <= 1e-12.
void validate(const TriangleMesh& mesh);

void scale(TriangleMesh& mesh, double factor);

// n-prism inscribed in a circle of radius `circumradius`; flat end caps are
// fan-triangulated from the first ring vertex. With sharpened ends each cap
// becomes an n-fan to an apex `tip_height` above the end plane.
TriangleMesh generate_prism(int sides, double height, double circumradius,
                            bool sharpened_ends = false, double tip_height = 0.0);

// n-gonal bipyramid: ring of n vertices in the base plane, apexes at
// +/- apex_height; all 2n faces congruent.
TriangleMesh generate_bipyramid(int sides, double apex_height, double circumradius);

// Discretized cylinder; end caps fan from a center vertex. segments >= 16.
TriangleMesh generate_cylinder(double radius, double height, int segments);

// Unit-radius sphere (subdivided icosahedron, `resolution` subdivision
// levels) with each cap region flattened onto its face plane.
TriangleMesh generate_carved_sphere(const sphere_design::CarvedDieSpec& spec, int resolution);

// Binary STL: 80-byte header, little-endian uint32 triangle count, then per
// triangle 12 little-endian float32 (normal + 3 vertices) and a zero uint16
// attribute. Refuses non-watertight meshes.
std::vector<std::uint8_t> export_stl(const TriangleMesh& mesh);

// ASCII OBJ with `v`/`f` lines, 1-based indices.
std::string export_obj(const TriangleMesh& mesh);

}  // namespace fairdice::mesh
