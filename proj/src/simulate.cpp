#include "fairdice/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace fairdice::simulate {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr int kDrawsPerTrial = 8;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// face plane of a convex solid centered on its centroid
struct FacePlane {
    std::string label;
    Vec3 unit_normal;
    double offset;  // dot(unit_normal, x) == offset on the face, offset > 0
};

std::vector<FacePlane> face_planes(const std::vector<models::LabeledFace>& faces) {
    std::vector<FacePlane> planes;
    planes.reserve(faces.size());
    for (const models::LabeledFace& f : faces) {
        const Vec3 n = normalized(cross(f.polygon[1] - f.polygon[0],
                                        f.polygon[2] - f.polygon[0]));
        const double d = dot(n, f.polygon[0]);
        planes.push_back({f.label, d > 0.0 ? n : -n, std::abs(d)});
    }
    return planes;
}

// first face plane crossed by the ray from the centroid along dir
const std::string& hit_face(const std::vector<FacePlane>& planes, const Vec3& dir) {
    const FacePlane* best = nullptr;
    double best_t = 0.0;
    for (const FacePlane& f : planes) {
        const double cosine = dot(f.unit_normal, dir);
        if (cosine <= 0.0) continue;
        const double t = f.offset / cosine;
        if (!best || t < best_t) {
            best = &f;
            best_t = t;
        }
    }
    if (!best) throw std::logic_error("hit_face: direction exits no face plane");
    return best->label;
}

void check_trials(long trials) {
    if (trials < 1) throw std::domain_error("simulate: trials must be >= 1");
}

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t bits = mix64(seed + (index + 1) * kGolden);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

Vec3 unit_direction(std::uint64_t seed, std::uint64_t trial) {
    const std::uint64_t base = trial * kDrawsPerTrial;
    const double u1 = uniform01(seed, base + 0);
    const double u2 = uniform01(seed, base + 1);
    const double u3 = uniform01(seed, base + 2);
    const double u4 = uniform01(seed, base + 3);

    const double r1 = std::sqrt(-2.0 * std::log(u1));
    const double r2 = std::sqrt(-2.0 * std::log(u3));
    const Vec3 g{r1 * std::cos(2.0 * kPi * u2), r1 * std::sin(2.0 * kPi * u2),
                 r2 * std::cos(2.0 * kPi * u4)};
    const double n = norm(g);
    if (n < 1e-12) return {0.0, 0.0, 1.0};
    return g / n;
}

SimulationResult simulate_geometric(const models::CoinSpec& coin, long trials,
                                    std::uint64_t seed) {
    models::validate(coin);
    check_trials(trials);

    // cap boundary: |d_z| above this hits an end face
    const double band = coin.thickness /
                        std::sqrt(4.0 * coin.radius * coin.radius +
                                  coin.thickness * coin.thickness);

    SimulationResult result{trials, {{"heads", 0}, {"tails", 0}, {"side", 0}}, seed,
                            models::Model::geometric};
    for (long i = 0; i < trials; ++i) {
        const Vec3 d = unit_direction(seed, static_cast<std::uint64_t>(i));
        if (d.z > band)
            result.face_counts["heads"]++;
        else if (d.z < -band)
            result.face_counts["tails"]++;
        else
            result.face_counts["side"]++;
    }
    return result;
}

SimulationResult simulate_geometric(const models::PrismSpec& prism, long trials,
                                    std::uint64_t seed) {
    models::validate(prism);
    check_trials(trials);
    if (prism.height <= 0.0)
        throw std::domain_error("simulate_geometric: prism height must be positive");

    const std::vector<FacePlane> planes = face_planes(models::prism_faces(prism));
    SimulationResult result{trials, {}, seed, models::Model::geometric};
    for (const FacePlane& f : planes) result.face_counts[f.label] = 0;
    for (long i = 0; i < trials; ++i)
        result.face_counts[hit_face(planes, unit_direction(seed, static_cast<std::uint64_t>(i)))]++;
    return result;
}

SimulationResult simulate_geometric(const models::BoxSpec& box, long trials,
                                    std::uint64_t seed) {
    models::validate(box);
    check_trials(trials);

    const std::vector<FacePlane> planes = face_planes(models::box_faces(box));
    SimulationResult result{trials, {}, seed, models::Model::geometric};
    for (const FacePlane& f : planes) result.face_counts[f.label] = 0;
    for (long i = 0; i < trials; ++i)
        result.face_counts[hit_face(planes, unit_direction(seed, static_cast<std::uint64_t>(i)))]++;
    return result;
}

SimulationResult simulate_dynamic(double thickness_ratio, long trials, std::uint64_t seed) {
    check_trials(trials);
    if (!std::isfinite(thickness_ratio) || thickness_ratio < 0.0)
        throw std::domain_error("simulate_dynamic: thickness ratio must be nonnegative");
    // P(theta < atan t) over theta ~ U(0, pi/2) equals (2/pi) atan t = P_D(t)
    const double edge_limit = std::atan(thickness_ratio);

    SimulationResult result{trials, {{"heads", 0}, {"tails", 0}, {"side", 0}}, seed,
                            models::Model::dynamic};
    for (long i = 0; i < trials; ++i) {
        const std::uint64_t base = static_cast<std::uint64_t>(i) * kDrawsPerTrial;
        const double theta = uniform01(seed, base + 0) * kPi / 2.0;
        if (theta < edge_limit) {
            result.face_counts["side"]++;
        } else if (uniform01(seed, base + 1) < 0.5) {
            result.face_counts["heads"]++;
        } else {
            result.face_counts["tails"]++;
        }
    }
    return result;
}

calibration::TossDataset synthesize_dataset(models::Model model, models::SolidFamily family,
                                            const std::vector<double>& heights_mm,
                                            double radius_mm, long trials_per_height,
                                            std::uint64_t seed, int prism_sides) {
    if (heights_mm.empty())
        throw std::domain_error("synthesize_dataset: need at least one height");
    if (!(radius_mm > 0.0))
        throw std::domain_error("synthesize_dataset: radius must be positive");
    check_trials(trials_per_height);
    if (model == models::Model::geometric && family == models::SolidFamily::prism &&
        prism_sides < 3)
        throw std::domain_error("synthesize_dataset: prism family needs prism_sides >= 3");

    calibration::TossDataset dataset;
    dataset.reserve(heights_mm.size());
    for (std::size_t h = 0; h < heights_mm.size(); ++h) {
        const double t = heights_mm[h] / radius_mm;
        const std::uint64_t sub_seed = mix64(seed + (h + 1) * kGolden);

        SimulationResult result;
        if (model == models::Model::dynamic) {
            result = simulate_dynamic(t, trials_per_height, sub_seed);
        } else if (family == models::SolidFamily::cylinder) {
            result = simulate_geometric(models::CoinSpec{1.0, t}, trials_per_height, sub_seed);
        } else {
            result = simulate_geometric(models::PrismSpec{prism_sides, t, 1.0},
                                        trials_per_height, sub_seed);
        }
        dataset.push_back({heights_mm[h],
                           result.face_counts.at("heads") + result.face_counts.at("tails"),
                           trials_per_height});
    }
    return dataset;
}

std::string result_json(const SimulationResult& result) {
    nlohmann::json j;
    j["model"] = result.model == models::Model::dynamic ? "dynamic" : "geometric";
    j["seed"] = result.seed;
    j["trials"] = result.trials;
    j["face_counts"] = result.face_counts;
    return j.dump(2);
}

}  // namespace fairdice::simulate
