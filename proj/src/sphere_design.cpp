#include "fairdice/sphere_design.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace fairdice::sphere_design {

namespace {

constexpr double kDuplicateTol = 1e-9;    // chord distance treated as coincident generators
constexpr double kMergeTol = 1e-10;       // chord distance for merging Voronoi vertices

struct HullFacet {
    int a, b, c;
    Vec3 normal;    // unnormalized outward normal
    double offset;  // dot(normal, vertex)
    bool alive = true;
};

HullFacet make_facet(const std::vector<Vec3>& pts, int a, int b, int c) {
    HullFacet f{a, b, c, {}, 0.0};
    f.normal = cross(pts[b] - pts[a], pts[c] - pts[a]);
    f.offset = dot(f.normal, pts[a]);
    return f;
}

double signed_distance(const HullFacet& f, const Vec3& p) { return dot(f.normal, p) - f.offset; }

// Incremental convex hull of points on (or near) the unit sphere. Every input
// point must end up as a hull vertex; a point visible from no facet means a
// duplicate or contained generator and is reported as degenerate input.
std::vector<HullFacet> convex_hull(const std::vector<Vec3>& pts) {
    const int n = static_cast<int>(pts.size());

    // initial simplex: spread-out extremes
    int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
    double best = -1.0;
    for (int i = 1; i < n; ++i) {
        const double d = norm2(pts[i] - pts[i0]);
        if (d > best) best = d, i1 = i;
    }
    if (best < kDuplicateTol * kDuplicateTol)
        throw std::invalid_argument("spherical_voronoi: degenerate input (coincident points)");
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1) continue;
        const double d = norm2(cross(pts[i] - pts[i0], pts[i1] - pts[i0]));
        if (d > best) best = d, i2 = i;
    }
    if (i2 < 0 || best < 1e-20)
        throw std::invalid_argument("spherical_voronoi: degenerate input (collinear points)");
    const Vec3 plane_n = cross(pts[i1] - pts[i0], pts[i2] - pts[i0]);
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2) continue;
        const double d = std::abs(dot(plane_n, pts[i] - pts[i0]));
        if (d > best) best = d, i3 = i;
    }
    if (i3 < 0 || best < 1e-12)
        throw std::invalid_argument("spherical_voronoi: degenerate input (coplanar points)");

    if (dot(plane_n, pts[i3] - pts[i0]) > 0.0) std::swap(i1, i2);

    std::vector<HullFacet> facets;
    facets.push_back(make_facet(pts, i0, i1, i2));
    facets.push_back(make_facet(pts, i0, i2, i3));
    facets.push_back(make_facet(pts, i0, i3, i1));
    facets.push_back(make_facet(pts, i1, i3, i2));

    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;

        std::vector<int> visible;
        for (int fi = 0; fi < static_cast<int>(facets.size()); ++fi) {
            const HullFacet& f = facets[fi];
            if (!f.alive) continue;
            if (signed_distance(f, pts[p]) > 1e-12 * norm(f.normal)) visible.push_back(fi);
        }
        if (visible.empty())
            throw std::invalid_argument(
                "spherical_voronoi: degenerate input (duplicate or contained point)");

        // horizon = directed edges of the visible region whose reverse is not visible
        std::map<std::pair<int, int>, int> edge_count;
        for (int fi : visible) {
            const HullFacet& f = facets[fi];
            edge_count[{f.a, f.b}]++;
            edge_count[{f.b, f.c}]++;
            edge_count[{f.c, f.a}]++;
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& [edge, cnt] : edge_count)
            if (!edge_count.count({edge.second, edge.first})) horizon.push_back(edge);

        for (int fi : visible) facets[fi].alive = false;
        for (const auto& [u, v] : horizon) facets.push_back(make_facet(pts, u, v, p));
    }

    std::vector<HullFacet> alive;
    for (HullFacet& f : facets)
        if (f.alive) alive.push_back(f);

    // manifold check: every directed edge exactly once
    std::map<std::pair<int, int>, int> edges;
    for (const HullFacet& f : alive) {
        edges[{f.a, f.b}]++;
        edges[{f.b, f.c}]++;
        edges[{f.c, f.a}]++;
    }
    for (const auto& [edge, cnt] : edges)
        if (cnt != 1 || !edges.count({edge.second, edge.first}))
            throw std::runtime_error("spherical_voronoi: convex hull construction failed");

    return alive;
}

void check_distinct(std::span<const Vec3> pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (norm(pts[i] - pts[j]) < kDuplicateTol)
                throw std::invalid_argument(
                    "spherical_voronoi: degenerate input (coincident points)");
}

void finish_layout(SphericalLayout& layout) {
    layout.areas.resize(layout.regions.size());
    layout.centroids.resize(layout.regions.size());
    for (std::size_t i = 0; i < layout.regions.size(); ++i) {
        layout.areas[i] = region_area(layout.regions[i]);
        layout.centroids[i] = region_centroid(layout.regions[i]);
    }
}

SphericalLayout voronoi_two_points(const Vec3& p0, const Vec3& p1) {
    const Vec3 u = normalized(p0 - p1);
    Vec3 e1 = cross(u, Vec3{1, 0, 0});
    if (norm2(e1) < 1e-12) e1 = cross(u, Vec3{0, 1, 0});
    e1 = normalized(e1);
    const Vec3 e2 = cross(u, e1);

    SphericalLayout layout;
    layout.points = {p0, p1};
    layout.regions = {{e1, e2, -e1, -e2}, {e1, -e2, -e1, e2}};
    finish_layout(layout);
    return layout;
}

SphericalLayout voronoi_three_points(const std::vector<Vec3>& p) {
    // all three bisector planes share the line through +/-u
    const Vec3 u = normalized(cross(p[1] - p[0], p[2] - p[0]));

    SphericalLayout layout;
    layout.points = p;
    for (int i = 0; i < 3; ++i) {
        const Vec3& a = p[i];
        const Vec3& b = p[(i + 1) % 3];
        const Vec3& c = p[(i + 2) % 3];
        // quarter-arc midpoints of the two bounding bisectors, inside cell i
        Vec3 mb = normalized(cross(u, a - b));
        if (dot(mb, a - c) < 0.0) mb = -mb;
        Vec3 mc = normalized(cross(u, a - c));
        if (dot(mc, a - b) < 0.0) mc = -mc;

        SphericalPolygon cell;
        if (triple(u, mb, a) > 0.0)
            cell = {u, mb, -u, mc};
        else
            cell = {u, mc, -u, mb};
        layout.regions.push_back(std::move(cell));
    }
    finish_layout(layout);
    return layout;
}

}  // namespace

SphericalLayout spherical_voronoi(std::span<const Vec3> points) {
    if (points.size() < 2)
        throw std::domain_error("spherical_voronoi: need at least 2 generators");

    std::vector<Vec3> pts(points.begin(), points.end());
    for (Vec3& v : pts) v = normalized(v);

    if (pts.size() == 2) {
        check_distinct(pts);
        return voronoi_two_points(pts[0], pts[1]);
    }
    if (pts.size() == 3) {
        check_distinct(pts);
        return voronoi_three_points(pts);
    }

    const std::vector<HullFacet> facets = convex_hull(pts);

    // hull-facet circumcenters are the Voronoi vertices; this requires the
    // origin strictly inside the hull
    std::vector<Vec3> circumcenters(facets.size());
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
        const double scale = norm(facets[fi].normal);
        if (facets[fi].offset <= 1e-9 * scale)
            throw std::invalid_argument(
                "spherical_voronoi: degenerate input (generators within a hemisphere)");
        circumcenters[fi] = facets[fi].normal / scale;
    }

    // directed edge (u,v) -> facet whose boundary traverses u->v
    std::map<std::pair<int, int>, int> edge_facet;
    std::vector<int> facet_of_vertex(pts.size(), -1);
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
        const HullFacet& f = facets[fi];
        edge_facet[{f.a, f.b}] = static_cast<int>(fi);
        edge_facet[{f.b, f.c}] = static_cast<int>(fi);
        edge_facet[{f.c, f.a}] = static_cast<int>(fi);
        facet_of_vertex[f.a] = facet_of_vertex[f.b] = facet_of_vertex[f.c] =
            static_cast<int>(fi);
    }

    SphericalLayout layout;
    layout.points = pts;
    layout.regions.resize(pts.size());

    for (int v = 0; v < static_cast<int>(pts.size()); ++v) {
        if (facet_of_vertex[v] < 0)
            throw std::invalid_argument(
                "spherical_voronoi: degenerate input (generator not on hull)");

        // walk incident facets CCW: from facet (v,a,b), the next facet around v
        // shares the directed edge v->b (b is v's cyclic predecessor here)
        SphericalPolygon cell;
        const int start = facet_of_vertex[v];
        int current = start;
        do {
            cell.push_back(circumcenters[current]);
            const HullFacet& f = facets[current];
            int pred;
            if (f.a == v)
                pred = f.c;
            else if (f.b == v)
                pred = f.a;
            else
                pred = f.b;
            const auto it = edge_facet.find({v, pred});
            if (it == edge_facet.end())
                throw std::runtime_error("spherical_voronoi: broken facet adjacency");
            current = it->second;
        } while (current != start);

        // merge coincident circumcenters from coplanar facets
        SphericalPolygon merged;
        for (const Vec3& c : cell)
            if (merged.empty() || norm(c - merged.back()) > kMergeTol) merged.push_back(c);
        while (merged.size() > 1 && norm(merged.front() - merged.back()) <= kMergeTol)
            merged.pop_back();
        if (merged.size() < 3)
            throw std::runtime_error("spherical_voronoi: degenerate Voronoi region");
        layout.regions[v] = std::move(merged);
    }

    finish_layout(layout);
    return layout;
}

double region_area(const SphericalPolygon& region) {
    const std::size_t k = region.size();
    if (k < 3) throw std::domain_error("region_area: region needs at least 3 vertices");

    double angle_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const Vec3& v = region[i];
        const Vec3& prev = region[(i + k - 1) % k];
        const Vec3& next = region[(i + 1) % k];
        const Vec3 tp = prev - v * dot(prev, v);
        const Vec3 tn = next - v * dot(next, v);
        if (norm2(tp) < 1e-24 || norm2(tn) < 1e-24)
            throw std::invalid_argument("region_area: degenerate edge arc");
        angle_sum += std::atan2(norm(cross(tp, tn)), dot(tp, tn));
    }
    return angle_sum - static_cast<double>(k - 2) * kPi;
}

Vec3 region_moment(const SphericalPolygon& region) {
    const std::size_t k = region.size();
    if (k < 3) throw std::domain_error("region_moment: region needs at least 3 vertices");

    Vec3 moment{};
    for (std::size_t i = 0; i < k; ++i) {
        const Vec3& a = region[i];
        const Vec3& b = region[(i + 1) % k];
        const Vec3 axis = cross(a, b);
        const double axis_norm = norm(axis);
        if (axis_norm < 1e-15) continue;  // zero-length arc
        const double arc = std::atan2(axis_norm, dot(a, b));
        moment += axis * (arc / axis_norm);
    }
    return moment * 0.5;
}

Vec3 region_centroid(const SphericalPolygon& region) {
    const Vec3 moment = region_moment(region);
    const double m = norm(moment);
    if (m < 1e-12)
        throw std::domain_error("region_centroid: region has zero mean vector");
    return moment / m;
}

bool region_contains(const SphericalPolygon& region, const Vec3& x) {
    const std::size_t k = region.size();
    for (std::size_t i = 0; i < k; ++i)
        if (triple(region[i], region[(i + 1) % k], x) < -1e-9) return false;
    return true;
}

std::vector<Vec3> fibonacci_points(int n, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("fibonacci_points: n must be positive");
    std::mt19937_64 rng(seed);
    const double jitter = 0.05 * std::sqrt(kFourPi / n);
    std::uniform_real_distribution<double> uni(-jitter, jitter);
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));

    std::vector<Vec3> pts(n);
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * i;
        Vec3 p{r * std::cos(phi), r * std::sin(phi), z};

        Vec3 t1 = cross(p, Vec3{0, 0, 1});
        if (norm2(t1) < 1e-12) t1 = cross(p, Vec3{1, 0, 0});
        t1 = normalized(t1);
        const Vec3 t2 = cross(p, t1);
        pts[i] = normalized(p + t1 * uni(rng) + t2 * uni(rng));
    }
    return pts;
}

CvtResult cvt_optimize(int n, std::uint64_t seed, double tol, int max_iter) {
    if (n < 2) throw std::domain_error("cvt_optimize: need at least 2 points");
    return cvt_optimize_from(fibonacci_points(n, seed), tol, max_iter);
}

CvtResult cvt_optimize_from(std::vector<Vec3> initial_points, double tol, int max_iter) {
    if (initial_points.size() < 2)
        throw std::domain_error("cvt_optimize: need at least 2 points");
    if (!(tol > 0.0)) throw std::domain_error("cvt_optimize: tolerance must be positive");
    if (max_iter < 1) throw std::domain_error("cvt_optimize: max_iter must be positive");

    std::vector<Vec3> points = std::move(initial_points);
    for (Vec3& p : points) p = normalized(p);
    const std::size_t n = points.size();

    CvtResult result;
    SphericalLayout layout = spherical_voronoi(points);

    const auto energy_of = [&](const std::vector<Vec3>& pts, const SphericalLayout& lay) {
        // chordal CVT energy: sum_i integral over V_i of |x - p_i|^2 dA
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            e += 2.0 * lay.areas[i] - 2.0 * dot(pts[i], region_moment(lay.regions[i]));
        return e;
    };

    for (int iter = 1; iter <= max_iter; ++iter) {
        result.energy_history.push_back(energy_of(points, layout));

        double max_move = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 target = layout.centroids[i];
            max_move = std::max(max_move, norm(target - points[i]));
            points[i] = target;
        }

        layout = spherical_voronoi(points);
        result.iterations = iter;
        result.max_move = max_move;
        if (max_move < tol) {
            result.converged = true;
            break;
        }
    }
    result.energy_history.push_back(energy_of(points, layout));

    const double mean_area = kFourPi / static_cast<double>(n);
    double spread = 0.0;
    for (double a : layout.areas) spread = std::max(spread, std::abs(a - mean_area) / mean_area);
    result.area_spread = spread;
    result.layout = std::move(layout);
    return result;
}

double cap_volume(double cap_angle) {
    const double c = std::cos(cap_angle);
    return (kPi / 3.0) * (2.0 - 3.0 * c + c * c * c);
}

double cap_first_moment(double cap_angle) {
    const double s = std::sin(cap_angle);
    return (kPi / 4.0) * s * s * s * s;
}

CarvedDieSpec carve(const SphericalLayout& layout, double face_fraction,
                    double max_displacement) {
    const std::size_t n = layout.points.size();
    if (n < 2) throw std::domain_error("carve: layout needs at least 2 faces");
    if (!(face_fraction > 0.0 && face_fraction < 1.0))
        throw std::domain_error("carve: face_fraction must lie in (0, 1)");

    // flat disc area pi*sin^2(theta) == face_fraction * 4*pi / n
    const double sin2 = 4.0 * face_fraction / static_cast<double>(n);
    if (sin2 >= 1.0)
        throw std::domain_error("carve: face_fraction too large for this face count");
    const double theta = std::asin(std::sqrt(sin2));

    double min_separation = kPi;
    std::size_t pi_idx = 0, pj_idx = 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double ang = angle_between(layout.points[i], layout.points[j]);
            if (ang < min_separation) {
                min_separation = ang;
                pi_idx = i;
                pj_idx = j;
            }
        }
    }
    if (2.0 * theta >= min_separation)
        throw std::runtime_error("carve: caps overlap between generators " +
                                 std::to_string(pi_idx) + " and " + std::to_string(pj_idx));

    CarvedDieSpec spec;
    spec.layout = layout;
    spec.cap_angle = theta;
    spec.face_areas.assign(n, kPi * sin2);

    Vec3 moment_sum{};
    for (const Vec3& p : layout.points) moment_sum += p;
    const double removed_volume = static_cast<double>(n) * cap_volume(theta);
    const double remaining = kFourPi / 3.0 - removed_volume;
    spec.centroid_displacement = norm(moment_sum) * cap_first_moment(theta) / remaining;

    if (spec.centroid_displacement > max_displacement)
        throw std::runtime_error("carve: centroid displacement " +
                                 std::to_string(spec.centroid_displacement) +
                                 " exceeds threshold " + std::to_string(max_displacement));
    return spec;
}

std::string layout_json(const CvtResult& cvt, const CarvedDieSpec& spec) {
    nlohmann::json j;
    auto points = nlohmann::json::array();
    for (const Vec3& p : spec.layout.points) points.push_back({p.x, p.y, p.z});
    j["points"] = std::move(points);
    j["areas"] = spec.layout.areas;
    j["cap_angle"] = spec.cap_angle;
    j["centroid_displacement"] = spec.centroid_displacement;
    j["converged"] = cvt.converged;
    j["iterations"] = cvt.iterations;
    return j.dump(2);
}

}  // namespace fairdice::sphere_design
