// Closed-form landing-probability models for coins, prisms and boxes,
// plus the fair-dimension solvers built on top of them.
//
// Two models are implemented:
//  - the dynamic model for a tossed thick coin,
//      P_D(t) = 1 - (2/pi) * acos(t / sqrt(1 + t^2)),
//    with the fair thickness t(n) = cot(pi/n) for an n-face die;
//  - the geometric model, which assigns each face the fraction of the
//    circumscribed sphere covered by its central projection from the centroid.
//
// All dimensions are normalized to circumradius 1 internally; physical units
// are converted at the CLI boundary.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairdice/geometry.hpp"

namespace fairdice::models {

struct CoinSpec {
    double radius = 1.0;
    double thickness = 0.0;  // same units as radius
};

struct PrismSpec {
    int sides = 3;
    double height = 0.0;
    double circumradius = 1.0;

    double inradius() const { return circumradius * std::cos(kPi / sides); }
};

struct BoxSpec {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
};

enum class Model { dynamic, geometric };

enum class SolidFamily { cylinder, prism };

struct FaceProbability {
    std::string label;
    double probability = 0.0;
};

// Per-face landing probabilities under one model. "heads"/"tails" label the
// two end faces of a coin or prism; side faces are labeled "side1", "side2", ...
struct FaceDistribution {
    Model model = Model::geometric;
    std::vector<FaceProbability> entries;

    double total() const;
    double end_face_total() const;   // heads + tails
    double side_face_total() const;  // everything else
    double probability(const std::string& label) const;
};

// A planar polygonal face of a solid, used by the geometric model.
using Polygon3 = std::vector<Vec3>;

struct LabeledFace {
    std::string label;
    Polygon3 polygon;
};

// P_D(t): probability that a tossed coin of thickness ratio t lands on edge.
double dynamic_edge_probability(double thickness_ratio);

// t(n) = cot(pi/n): coin thickness making an n-face die fair under the
// dynamic model, i.e. dynamic_edge_probability(t(n)) == (n-2)/n.
double fair_thickness_dynamic(int faces);

// Solid angle (steradians) subtended at `apex` by a planar simple polygon.
// Fan-triangulated from the first vertex; signed triangle terms are summed so
// the result is independent of the starting vertex, and the magnitude is
// independent of orientation.
double solid_angle_of_polygon(std::span<const Vec3> vertices, const Vec3& apex);

// Geometric (circumsphere-projection) face distributions.
FaceDistribution geometric_face_distribution(const CoinSpec& coin);
FaceDistribution geometric_face_distribution(const PrismSpec& prism);
FaceDistribution geometric_face_distribution(const BoxSpec& box);

// General form for any convex polyhedron given as labeled faces; probabilities
// are the per-face solid angles about `centroid`, normalized by 4*pi.
FaceDistribution geometric_face_distribution(std::span<const LabeledFace> faces,
                                             const Vec3& centroid);

// Dynamic-model distribution for a coin: side mass P_D(t), remainder split
// between heads and tails. The prism overload applies the same edge
// probability at t = height/circumradius and splits the side mass over the
// congruent side faces.
FaceDistribution dynamic_face_distribution(const CoinSpec& coin);
FaceDistribution dynamic_face_distribution(const PrismSpec& prism);

// Thickness (cylinder) or height (prism with faces-2 sides) at which the
// geometric side-landing probability equals (n-2)/n, circumradius 1.
// Solved by bracketed bisection on [0, 64]; for cylinders the result equals
// (n-2)/sqrt(n-1) analytically.
double fair_thickness_geometric(int faces, SolidFamily family);

// Face polygons (centered at the centroid) shared by the analytic geometric
// model and the Monte Carlo simulator.
std::vector<LabeledFace> prism_faces(const PrismSpec& prism);
std::vector<LabeledFace> box_faces(const BoxSpec& box);

void validate(const CoinSpec& coin);
void validate(const PrismSpec& prism);
void validate(const BoxSpec& box);

}  // namespace fairdice::models
