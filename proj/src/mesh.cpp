#include "fairdice/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace fairdice::mesh {

namespace {

void append_ring(TriangleMesh& m, int sides, double radius, double z) {
    for (int j = 0; j < sides; ++j) {
        const double phi = 2.0 * kPi * j / sides;
        m.vertices.push_back({radius * std::cos(phi), radius * std::sin(phi), z});
    }
}

void tri(TriangleMesh& m, int a, int b, int c) { m.triangles.push_back({a, b, c}); }

double triangle_area(const TriangleMesh& m, const std::array<int, 3>& t) {
    return 0.5 * norm(cross(m.vertices[t[1]] - m.vertices[t[0]],
                            m.vertices[t[2]] - m.vertices[t[0]]));
}

void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f32le(std::vector<std::uint8_t>& out, double v) {
    put_u32le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

}  // namespace

bool is_watertight(const TriangleMesh& mesh, std::vector<std::pair<int, int>>* bad_edges) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& t : mesh.triangles) {
        directed[{t[0], t[1]}]++;
        directed[{t[1], t[2]}]++;
        directed[{t[2], t[0]}]++;
    }
    std::set<std::pair<int, int>> bad;
    for (const auto& [edge, count] : directed) {
        const auto rev = directed.find({edge.second, edge.first});
        if (count != 1 || rev == directed.end() || rev->second != 1)
            bad.insert(std::minmax(edge.first, edge.second));
    }
    if (bad_edges) bad_edges->assign(bad.begin(), bad.end());
    return bad.empty();
}

int euler_characteristic(const TriangleMesh& mesh) {
    std::set<std::pair<int, int>> undirected;
    for (const auto& t : mesh.triangles) {
        undirected.insert(std::minmax(t[0], t[1]));
        undirected.insert(std::minmax(t[1], t[2]));
        undirected.insert(std::minmax(t[2], t[0]));
    }
    return static_cast<int>(mesh.vertices.size()) - static_cast<int>(undirected.size()) +
           static_cast<int>(mesh.triangles.size());
}

double signed_volume(const TriangleMesh& mesh) {
    double v = 0.0;
    for (const auto& t : mesh.triangles)
        v += triple(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    return v / 6.0;
}

Vec3 volume_centroid(const TriangleMesh& mesh) {
    Vec3 moment{};
    double volume = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        const double v = triple(a, b, c) / 6.0;  // signed tet volume with apex at origin
        volume += v;
        moment += (a + b + c) * (v / 4.0);
    }
    if (std::abs(volume) < 1e-300)
        throw std::domain_error("volume_centroid: mesh encloses no volume");
    return moment / volume;
}

double min_triangle_area(const TriangleMesh& mesh) {
    double amin = std::numeric_limits<double>::infinity();
    for (const auto& t : mesh.triangles) amin = std::min(amin, triangle_area(mesh, t));
    return amin;
}

void validate(const TriangleMesh& mesh) {
    std::vector<std::pair<int, int>> bad;
    if (!is_watertight(mesh, &bad)) {
        std::string msg = "mesh is not watertight; offending edges:";
        for (const auto& [a, b] : bad)
            msg += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
        throw std::runtime_error(msg);
    }
    if (euler_characteristic(mesh) != 2)
        throw std::runtime_error("mesh Euler characteristic is not 2");
    if (signed_volume(mesh) <= 0.0)
        throw std::runtime_error("mesh has non-positive signed volume");
    if (min_triangle_area(mesh) <= 1e-12)
        throw std::runtime_error("mesh contains a degenerate triangle");
}

void scale(TriangleMesh& mesh, double factor) {
    for (Vec3& v : mesh.vertices) v = v * factor;
}

TriangleMesh generate_prism(int sides, double height, double circumradius, bool sharpened_ends,
                            double tip_height) {
    if (sides < 3) throw std::domain_error("generate_prism: sides must be >= 3");
    if (!(height > 0.0) || !(circumradius > 0.0))
        throw std::domain_error("generate_prism: dimensions must be positive");
    if (tip_height < 0.0) throw std::domain_error("generate_prism: tip height must be >= 0");

    const bool sharpened = sharpened_ends && tip_height > 0.0;
    const int k = sides;
    const double hz = 0.5 * height;

    TriangleMesh m;
    append_ring(m, k, circumradius, -hz);  // bottom: 0..k-1
    append_ring(m, k, circumradius, hz);   // top: k..2k-1

    for (int j = 0; j < k; ++j) {
        const int j1 = (j + 1) % k;
        tri(m, j, j1, k + j1);
        tri(m, j, k + j1, k + j);
    }

    if (sharpened) {
        const int apex_top = static_cast<int>(m.vertices.size());
        m.vertices.push_back({0.0, 0.0, hz + tip_height});
        const int apex_bottom = static_cast<int>(m.vertices.size());
        m.vertices.push_back({0.0, 0.0, -hz - tip_height});
        for (int j = 0; j < k; ++j) {
            const int j1 = (j + 1) % k;
            tri(m, k + j, k + j1, apex_top);
            tri(m, j1, j, apex_bottom);
        }
    } else {
        for (int j = 1; j + 1 < k; ++j) {
            tri(m, k, k + j, k + j + 1);  // top cap, fan from first ring vertex
            tri(m, 0, j + 1, j);          // bottom cap, reversed
        }
    }
    return m;
}

TriangleMesh generate_bipyramid(int sides, double apex_height, double circumradius) {
    if (sides < 3) throw std::domain_error("generate_bipyramid: sides must be >= 3");
    if (!(apex_height > 0.0) || !(circumradius > 0.0))
        throw std::domain_error("generate_bipyramid: dimensions must be positive");

    TriangleMesh m;
    append_ring(m, sides, circumradius, 0.0);
    const int apex_top = sides;
    const int apex_bottom = sides + 1;
    m.vertices.push_back({0.0, 0.0, apex_height});
    m.vertices.push_back({0.0, 0.0, -apex_height});

    for (int j = 0; j < sides; ++j) {
        const int j1 = (j + 1) % sides;
        tri(m, j, j1, apex_top);
        tri(m, j1, j, apex_bottom);
    }
    return m;
}

TriangleMesh generate_cylinder(double radius, double height, int segments) {
    if (segments < 16)
        throw std::invalid_argument("generate_cylinder: segments must be >= 16");
    if (!(radius > 0.0) || !(height > 0.0))
        throw std::domain_error("generate_cylinder: dimensions must be positive");

    const double hz = 0.5 * height;
    TriangleMesh m;
    append_ring(m, segments, radius, -hz);
    append_ring(m, segments, radius, hz);
    const int center_bottom = static_cast<int>(m.vertices.size());
    m.vertices.push_back({0.0, 0.0, -hz});
    const int center_top = static_cast<int>(m.vertices.size());
    m.vertices.push_back({0.0, 0.0, hz});

    for (int j = 0; j < segments; ++j) {
        const int j1 = (j + 1) % segments;
        tri(m, j, j1, segments + j1);
        tri(m, j, segments + j1, segments + j);
        tri(m, segments + j, segments + j1, center_top);
        tri(m, j1, j, center_bottom);
    }
    return m;
}

TriangleMesh generate_carved_sphere(const sphere_design::CarvedDieSpec& spec, int resolution) {
    if (resolution < 0 || resolution > 8)
        throw std::invalid_argument("generate_carved_sphere: resolution must be in [0, 8]");
    const auto& generators = spec.layout.points;
    for (std::size_t i = 0; i < generators.size(); ++i)
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (angle_between(generators[i], generators[j]) <= 2.0 * spec.cap_angle)
                throw std::runtime_error("generate_carved_sphere: caps overlap between "
                                         "generators " + std::to_string(i) + " and " +
                                         std::to_string(j));

    // icosahedron
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& v : verts) v = normalized(v);
    std::vector<std::array<int, 3>> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},
        {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
        {3, 2, 6},  {3, 6, 8},  {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10},
        {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < resolution; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        const auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            const auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int idx = static_cast<int>(verts.size());
            verts.push_back(normalized(verts[a] + verts[b]));
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(tris.size() * 4);
        for (const auto& tr : tris) {
            const int ab = mid(tr[0], tr[1]);
            const int bc = mid(tr[1], tr[2]);
            const int ca = mid(tr[2], tr[0]);
            next.push_back({tr[0], ab, ca});
            next.push_back({tr[1], bc, ab});
            next.push_back({tr[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }

    // flatten cap regions: pull every vertex inside a cap onto the face plane
    const double cos_theta = std::cos(spec.cap_angle);
    for (Vec3& v : verts) {
        double best_dot = -2.0;
        for (const Vec3& p : spec.layout.points) best_dot = std::max(best_dot, dot(v, p));
        if (best_dot > cos_theta) v = v * (cos_theta / best_dot);
    }

    TriangleMesh m;
    m.vertices = std::move(verts);
    m.triangles = std::move(tris);
    return m;
}

std::vector<std::uint8_t> export_stl(const TriangleMesh& mesh) {
    std::vector<std::pair<int, int>> bad;
    if (!is_watertight(mesh, &bad)) {
        std::string msg = "export_stl: mesh is not watertight; offending edges:";
        for (const auto& [a, b] : bad)
            msg += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
        throw std::runtime_error(msg);
    }

    std::vector<std::uint8_t> out;
    out.reserve(84 + 50 * mesh.triangles.size());

    std::uint8_t header[80] = {};
    const char tag[] = "fairdice binary STL";
    std::copy(tag, tag + sizeof(tag) - 1, header);
    out.insert(out.end(), header, header + 80);
    put_u32le(out, static_cast<std::uint32_t>(mesh.triangles.size()));

    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        const Vec3 n = normalized(cross(b - a, c - a));
        for (const Vec3& v : {n, a, b, c}) {
            put_f32le(out, v.x);
            put_f32le(out, v.y);
            put_f32le(out, v.z);
        }
        put_u16le(out, 0);
    }
    return out;
}

std::string export_obj(const TriangleMesh& mesh) {
    std::string out;
    char line[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(line, sizeof(line), "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
        out += line;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(line, sizeof(line), "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += line;
    }
    return out;
}

}  // namespace fairdice::mesh
