// Sphere-model die designer: centroidal Voronoi layouts of n points on the
// unit sphere (Lloyd iteration over the spherical Voronoi diagram, built by
// convex-hull duality) and the cap-carving step that flattens each generator
// neighborhood into an equal-area face without moving the center of gravity.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairdice/geometry.hpp"

namespace fairdice::sphere_design {

// Convex spherical polygon: unit vertices in CCW order seen from outside the
// sphere, consecutive vertices joined by minor great-circle arcs.
using SphericalPolygon = std::vector<Vec3>;

struct SphericalLayout {
    std::vector<Vec3> points;                 // generators, unit vectors
    std::vector<SphericalPolygon> regions;    // Voronoi region of each generator
    std::vector<double> areas;                // steradians, sums to 4*pi
    std::vector<Vec3> centroids;              // normalized surface centroids
};

// Voronoi diagram of n >= 2 distinct unit vectors. For n >= 4 the regions are
// read off the convex hull (Delaunay duality, region vertices = hull-facet
// circumcenters); n = 2 and n = 3 are built directly from the bisector planes.
SphericalLayout spherical_voronoi(std::span<const Vec3> points);

// Spherical excess: sum of interior angles minus (k-2)*pi.
double region_area(const SphericalPolygon& region);

// Unnormalized surface integral of position over the region,
// computed as the boundary integral (1/2) * sum of arc_length * arc_axis.
Vec3 region_moment(const SphericalPolygon& region);

// Normalized surface centroid.
Vec3 region_centroid(const SphericalPolygon& region);

// True when x lies in the closed region (convex test against every edge arc).
bool region_contains(const SphericalPolygon& region, const Vec3& x);

struct CvtResult {
    SphericalLayout layout;
    bool converged = false;
    int iterations = 0;
    double area_spread = 0.0;            // max |area - mean| / mean
    double max_move = 0.0;               // last max generator movement (chord)
    std::vector<double> energy_history;  // CVT energy per iteration, non-increasing
};

// Jittered Fibonacci-lattice starting points; deterministic for a fixed seed.
std::vector<Vec3> fibonacci_points(int n, std::uint64_t seed);

// Lloyd iteration: replace every generator by its region centroid until the
// largest movement drops below tol or max_iter is reached. Non-convergence is
// reported through CvtResult::converged, not as an error.
CvtResult cvt_optimize(int n, std::uint64_t seed, double tol, int max_iter);
CvtResult cvt_optimize_from(std::vector<Vec3> initial_points, double tol, int max_iter);

struct CarvedDieSpec {
    SphericalLayout layout;
    double cap_angle = 0.0;                // angular cap radius theta, uniform
    std::vector<double> face_areas;        // flat disc areas pi*sin^2(theta)
    double centroid_displacement = 0.0;    // |center of gravity| after carving
};

// Removed-cap volume and axial first moment for a unit sphere.
double cap_volume(double cap_angle);        // (pi/3) * (2 - 3 cos t + cos^3 t)
double cap_first_moment(double cap_angle);  // (pi/4) * sin^4 t

// Choose the uniform cap angle so each flat face has area
// face_fraction * 4*pi / n, verify the caps stay disjoint, and report the
// carved solid's center-of-gravity displacement. Designs displacing the
// centroid by more than max_displacement (in sphere radii) are rejected.
CarvedDieSpec carve(const SphericalLayout& layout, double face_fraction,
                    double max_displacement = 0.01);

// Layout serialization: points (n x 3), areas, cap_angle,
// centroid_displacement, converged, iterations.
std::string layout_json(const CvtResult& cvt, const CarvedDieSpec& spec);

}  // namespace fairdice::sphere_design
