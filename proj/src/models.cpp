#include "fairdice/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace fairdice::models {

namespace {

bool finite(double v) { return std::isfinite(v); }

// Newell normal of a polygon; robust for nearly-degenerate vertex triples.
Vec3 newell_normal(std::span<const Vec3> v) {
    Vec3 n{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec3& p = v[i];
        const Vec3& q = v[(i + 1) % v.size()];
        n.x += (p.y - q.y) * (p.z + q.z);
        n.y += (p.z - q.z) * (p.x + q.x);
        n.z += (p.x - q.x) * (p.y + q.y);
    }
    return n;
}

double polygon_diameter(std::span<const Vec3> v) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) d2 = std::max(d2, norm2(v[i] - v[j]));
    return std::sqrt(d2);
}

int orientation2d(double ax, double ay, double bx, double by, double cx, double cy) {
    const double d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    if (d > 0) return 1;
    if (d < 0) return -1;
    return 0;
}

bool on_segment2d(double ax, double ay, double bx, double by, double px, double py) {
    return std::min(ax, bx) <= px && px <= std::max(ax, bx) && std::min(ay, by) <= py &&
           py <= std::max(ay, by);
}

bool segments_intersect2d(double ax, double ay, double bx, double by, double cx, double cy,
                          double dx, double dy) {
    const int o1 = orientation2d(ax, ay, bx, by, cx, cy);
    const int o2 = orientation2d(ax, ay, bx, by, dx, dy);
    const int o3 = orientation2d(cx, cy, dx, dy, ax, ay);
    const int o4 = orientation2d(cx, cy, dx, dy, bx, by);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment2d(ax, ay, bx, by, cx, cy)) return true;
    if (o2 == 0 && on_segment2d(ax, ay, bx, by, dx, dy)) return true;
    if (o3 == 0 && on_segment2d(cx, cy, dx, dy, ax, ay)) return true;
    if (o4 == 0 && on_segment2d(cx, cy, dx, dy, bx, by)) return true;
    return false;
}

// Reject self-intersecting polygons; vertices are projected onto the polygon
// plane and non-adjacent edges are pairwise tested.
void require_simple(std::span<const Vec3> v, const Vec3& unit_normal) {
    const std::size_t k = v.size();
    if (k <= 3) return;
    Vec3 u = cross(unit_normal, Vec3{1, 0, 0});
    if (norm2(u) < 1e-12) u = cross(unit_normal, Vec3{0, 1, 0});
    u = normalized(u);
    const Vec3 w = cross(unit_normal, u);

    std::vector<std::pair<double, double>> pts(k);
    for (std::size_t i = 0; i < k; ++i) pts[i] = {dot(v[i], u), dot(v[i], w)};

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const std::size_t i1 = (i + 1) % k;
            const std::size_t j1 = (j + 1) % k;
            // skip edges sharing a vertex
            if (i == j || i1 == j || j1 == i) continue;
            if (segments_intersect2d(pts[i].first, pts[i].second, pts[i1].first, pts[i1].second,
                                     pts[j].first, pts[j].second, pts[j1].first, pts[j1].second))
                throw std::invalid_argument("solid_angle_of_polygon: self-intersecting polygon");
        }
    }
}

// Van Oosterom-Strackee signed solid angle of the triangle (a, b, c) seen
// from the origin; a, b, c are unit vectors.
double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double numerator = triple(a, b, c);
    const double denominator = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    return 2.0 * std::atan2(numerator, denominator);
}

FaceDistribution distribution_from_faces(std::span<const LabeledFace> faces, const Vec3& centroid,
                                         Model model) {
    FaceDistribution dist;
    dist.model = model;
    dist.entries.reserve(faces.size());
    for (const LabeledFace& face : faces) {
        const double omega = solid_angle_of_polygon(face.polygon, centroid);
        dist.entries.push_back({face.label, omega / kFourPi});
    }
    return dist;
}

double bisect_side_probability(double target, const std::function<double(double)>& side_prob) {
    double lo = 0.0;
    double hi = 64.0;
    if (side_prob(hi) < target)
        throw std::runtime_error("fair_thickness_geometric: no root in bracket [0, 64]");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (side_prob(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void validate(const CoinSpec& coin) {
    if (!finite(coin.radius) || coin.radius <= 0.0)
        throw std::domain_error("coin radius must be positive and finite");
    if (!finite(coin.thickness) || coin.thickness < 0.0)
        throw std::domain_error("coin thickness must be nonnegative and finite");
}

void validate(const PrismSpec& prism) {
    if (prism.sides < 3) throw std::domain_error("prism must have at least 3 sides");
    if (!finite(prism.height) || prism.height < 0.0)
        throw std::domain_error("prism height must be nonnegative and finite");
    if (!finite(prism.circumradius) || prism.circumradius <= 0.0)
        throw std::domain_error("prism circumradius must be positive and finite");
}

void validate(const BoxSpec& box) {
    if (!finite(box.a) || !finite(box.b) || !finite(box.c) || box.a <= 0.0 || box.b <= 0.0 ||
        box.c <= 0.0)
        throw std::domain_error("box edge lengths must be positive and finite");
}

double FaceDistribution::total() const {
    double s = 0.0;
    for (const FaceProbability& e : entries) s += e.probability;
    return s;
}

double FaceDistribution::end_face_total() const {
    return probability("heads") + probability("tails");
}

double FaceDistribution::side_face_total() const {
    double s = 0.0;
    for (const FaceProbability& e : entries)
        if (e.label != "heads" && e.label != "tails") s += e.probability;
    return s;
}

double FaceDistribution::probability(const std::string& label) const {
    for (const FaceProbability& e : entries)
        if (e.label == label) return e.probability;
    return 0.0;
}

double dynamic_edge_probability(double thickness_ratio) {
    if (!finite(thickness_ratio) || thickness_ratio < 0.0)
        throw std::domain_error("thickness ratio must be nonnegative and finite");
    const double t = thickness_ratio;
    return 1.0 - (2.0 / kPi) * std::acos(t / std::sqrt(1.0 + t * t));
}

double fair_thickness_dynamic(int faces) {
    if (faces < 3) throw std::domain_error("fair die needs at least 3 faces");
    const double a = kPi / faces;
    return std::abs(std::cos(a) / std::sin(a));
}

double solid_angle_of_polygon(std::span<const Vec3> vertices, const Vec3& apex) {
    if (vertices.size() < 3)
        throw std::domain_error("solid_angle_of_polygon: polygon needs at least 3 vertices");

    const Vec3 raw_normal = newell_normal(vertices);
    const double diameter = polygon_diameter(vertices);
    if (norm(raw_normal) < 1e-14 * diameter * diameter)
        throw std::invalid_argument("solid_angle_of_polygon: degenerate polygon");
    const Vec3 n = normalized(raw_normal);

    // coplanarity of the vertex set
    const double offset = dot(n, vertices[0]);
    for (const Vec3& v : vertices)
        if (std::abs(dot(n, v) - offset) > 1e-9 * std::max(1.0, diameter))
            throw std::invalid_argument("solid_angle_of_polygon: vertices are not coplanar");

    const double apex_distance = std::abs(dot(n, apex) - offset);
    if (apex_distance < 1e-12 * std::max(1.0, diameter))
        throw std::domain_error("solid_angle_of_polygon: apex lies on the polygon plane");

    require_simple(vertices, n);

    std::vector<Vec3> dirs(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) dirs[i] = normalized(vertices[i] - apex);

    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < vertices.size(); ++i)
        sum += triangle_solid_angle(dirs[0], dirs[i], dirs[i + 1]);
    return std::abs(sum);
}

FaceDistribution geometric_face_distribution(const CoinSpec& coin) {
    validate(coin);
    const double r = coin.radius;
    const double t = coin.thickness;
    // exact band fraction of the circumscribed sphere
    const double side = t / std::sqrt(4.0 * r * r + t * t);
    const double end = 0.5 * (1.0 - side);
    FaceDistribution dist;
    dist.model = Model::geometric;
    dist.entries = {{"heads", end}, {"tails", end}, {"side", side}};
    return dist;
}

FaceDistribution geometric_face_distribution(const PrismSpec& prism) {
    validate(prism);
    if (prism.height == 0.0) {
        // flat polygon limit: never lands on a side
        FaceDistribution dist;
        dist.model = Model::geometric;
        dist.entries = {{"heads", 0.5}, {"tails", 0.5}};
        for (int i = 0; i < prism.sides; ++i)
            dist.entries.push_back({"side" + std::to_string(i + 1), 0.0});
        return dist;
    }
    const std::vector<LabeledFace> faces = prism_faces(prism);
    return distribution_from_faces(faces, Vec3{}, Model::geometric);
}

FaceDistribution geometric_face_distribution(const BoxSpec& box) {
    validate(box);
    const std::vector<LabeledFace> faces = box_faces(box);
    return distribution_from_faces(faces, Vec3{}, Model::geometric);
}

FaceDistribution geometric_face_distribution(std::span<const LabeledFace> faces,
                                             const Vec3& centroid) {
    return distribution_from_faces(faces, centroid, Model::geometric);
}

FaceDistribution dynamic_face_distribution(const CoinSpec& coin) {
    validate(coin);
    const double p = dynamic_edge_probability(coin.thickness / coin.radius);
    FaceDistribution dist;
    dist.model = Model::dynamic;
    dist.entries = {{"heads", 0.5 * (1.0 - p)}, {"tails", 0.5 * (1.0 - p)}, {"side", p}};
    return dist;
}

FaceDistribution dynamic_face_distribution(const PrismSpec& prism) {
    validate(prism);
    const double p = dynamic_edge_probability(prism.height / prism.circumradius);
    FaceDistribution dist;
    dist.model = Model::dynamic;
    dist.entries = {{"heads", 0.5 * (1.0 - p)}, {"tails", 0.5 * (1.0 - p)}};
    for (int i = 0; i < prism.sides; ++i)
        dist.entries.push_back({"side" + std::to_string(i + 1), p / prism.sides});
    return dist;
}

double fair_thickness_geometric(int faces, SolidFamily family) {
    if (faces < 3) throw std::domain_error("fair die needs at least 3 faces");
    const double target = static_cast<double>(faces - 2) / faces;

    if (family == SolidFamily::cylinder) {
        return bisect_side_probability(target, [](double t) {
            return geometric_face_distribution(CoinSpec{1.0, t}).side_face_total();
        });
    }

    const int sides = faces - 2;
    if (sides < 3) throw std::domain_error("prism fair die needs at least 5 faces");
    return bisect_side_probability(target, [sides](double h) {
        return geometric_face_distribution(PrismSpec{sides, h, 1.0}).side_face_total();
    });
}

std::vector<LabeledFace> prism_faces(const PrismSpec& prism) {
    validate(prism);
    if (prism.height <= 0.0)
        throw std::domain_error("prism_faces: height must be positive");
    const int k = prism.sides;
    const double R = prism.circumradius;
    const double hz = 0.5 * prism.height;

    std::vector<Vec3> top(k), bottom(k);
    for (int j = 0; j < k; ++j) {
        const double phi = 2.0 * kPi * j / k;
        top[j] = {R * std::cos(phi), R * std::sin(phi), hz};
        bottom[j] = {R * std::cos(phi), R * std::sin(phi), -hz};
    }

    std::vector<LabeledFace> faces;
    faces.reserve(k + 2);
    faces.push_back({"heads", top});
    Polygon3 bottom_ccw(bottom.rbegin(), bottom.rend());  // CCW seen from below
    faces.push_back({"tails", std::move(bottom_ccw)});
    for (int j = 0; j < k; ++j) {
        const int j1 = (j + 1) % k;
        faces.push_back({"side" + std::to_string(j + 1),
                         Polygon3{bottom[j], bottom[j1], top[j1], top[j]}});
    }
    return faces;
}

std::vector<LabeledFace> box_faces(const BoxSpec& box) {
    validate(box);
    const double x = 0.5 * box.a;
    const double y = 0.5 * box.b;
    const double z = 0.5 * box.c;
    return {
        {"x+", {{x, -y, -z}, {x, y, -z}, {x, y, z}, {x, -y, z}}},
        {"x-", {{-x, -y, -z}, {-x, -y, z}, {-x, y, z}, {-x, y, -z}}},
        {"y+", {{-x, y, -z}, {-x, y, z}, {x, y, z}, {x, y, -z}}},
        {"y-", {{-x, -y, -z}, {x, -y, -z}, {x, -y, z}, {-x, -y, z}}},
        {"z+", {{-x, -y, z}, {x, -y, z}, {x, y, z}, {-x, y, z}}},
        {"z-", {{-x, -y, -z}, {-x, y, -z}, {x, y, -z}, {x, -y, -z}}},
    };
}

}  // namespace fairdice::models
