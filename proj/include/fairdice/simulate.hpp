// Seeded Monte Carlo oracles for both probability models and a synthetic
// dataset generator for the calibration pipeline. Trials draw from
// counter-based splitmix64 streams, so results are reproducible for a fixed
// seed regardless of evaluation order.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairdice/calibration.hpp"
#include "fairdice/geometry.hpp"
#include "fairdice/models.hpp"

namespace fairdice::simulate {

struct SimulationResult {
    long trials = 0;
    std::map<std::string, long> face_counts;  // sums to trials
    std::uint64_t seed = 0;
    models::Model model = models::Model::geometric;
};

// splitmix64 output for a global draw counter; the stream for trial i uses
// indices [i*8, i*8+8), so trials are independent and order-free.
double uniform01(std::uint64_t seed, std::uint64_t index);

// Uniform direction via normalized Box-Muller Gaussians (4 uniforms).
Vec3 unit_direction(std::uint64_t seed, std::uint64_t trial);

// Geometric model: sample a uniform direction on the circumscribed sphere and
// score the face whose central projection contains it.
SimulationResult simulate_geometric(const models::CoinSpec& coin, long trials,
                                    std::uint64_t seed);
SimulationResult simulate_geometric(const models::PrismSpec& prism, long trials,
                                    std::uint64_t seed);
SimulationResult simulate_geometric(const models::BoxSpec& box, long trials,
                                    std::uint64_t seed);

// Dynamic model: draw theta uniform on (0, pi/2), score "side" iff
// theta < arctan(t); heads/tails split the remainder evenly.
SimulationResult simulate_dynamic(double thickness_ratio, long trials, std::uint64_t seed);

// One TossRecord per height: the solid is simulated at normalized thickness
// height/radius_mm and its end-face landings are counted.
calibration::TossDataset synthesize_dataset(models::Model model, models::SolidFamily family,
                                            const std::vector<double>& heights_mm,
                                            double radius_mm, long trials_per_height,
                                            std::uint64_t seed, int prism_sides = 0);

std::string result_json(const SimulationResult& result);

}  // namespace fairdice::simulate
