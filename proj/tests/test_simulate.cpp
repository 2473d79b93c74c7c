#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fairdice/simulate.hpp"
#include "oracles.hpp"

using namespace fairdice;
using namespace fairdice::models;
using namespace fairdice::simulate;

namespace {

double frequency(const SimulationResult& r, const std::string& label) {
    return static_cast<double>(r.face_counts.at(label)) / static_cast<double>(r.trials);
}

long end_faces(const SimulationResult& r) {
    return r.face_counts.at("heads") + r.face_counts.at("tails");
}

}  // namespace

TEST_CASE("uniform01 stream is deterministic and in range") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const double u = uniform01(42, i);
        CHECK(u == uniform01(42, i));
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
    CHECK(uniform01(42, 0) != uniform01(43, 0));
}

TEST_CASE("direction sampler uniformity") {
    const long n = 1000000;
    Vec3 sum{};
    long octant[8] = {};
    for (long i = 0; i < n; ++i) {
        const Vec3 d = unit_direction(7, static_cast<std::uint64_t>(i));
        CHECK(std::abs(norm(d) - 1.0) < 1e-12);
        sum += d;
        octant[(d.x > 0 ? 1 : 0) | (d.y > 0 ? 2 : 0) | (d.z > 0 ? 4 : 0)]++;
    }
    CHECK(norm(sum / static_cast<double>(n)) < 0.005);

    const double expected = n / 8.0;
    const double sigma = std::sqrt(n * (1.0 / 8.0) * (7.0 / 8.0));
    for (long count : octant) CHECK(std::abs(count - expected) < 4.0 * sigma);
}

TEST_CASE("dynamic simulation") {
    SUBCASE("zero thickness never lands on edge") {
        const auto r = simulate_dynamic(0.0, 20000, 5);
        CHECK(r.face_counts.at("side") == 0);
        CHECK(end_faces(r) == r.trials);
    }

    SUBCASE("t = 1 lands on edge half the time") {
        const auto r = simulate_dynamic(1.0, 1000000, 11);
        const double sigma = oracles::binomial_sigma(0.5, r.trials);
        CHECK(std::abs(frequency(r, "side") - 0.5) < 3.0 * sigma);
    }

    SUBCASE("t = 4.057 lands on edge 11/13 of the time") {
        const auto r = simulate_dynamic(4.057, 1000000, 13);
        const double p = 11.0 / 13.0;
        CHECK(std::abs(frequency(r, "side") - p) <
              3.0 * oracles::binomial_sigma(p, r.trials) + 5e-4);
    }

    SUBCASE("heads and tails split the remainder evenly") {
        const auto r = simulate_dynamic(1.0, 1000000, 23);
        const double sigma = oracles::binomial_sigma(0.25, r.trials);
        CHECK(std::abs(frequency(r, "heads") - 0.25) < 4.0 * sigma);
        CHECK(std::abs(frequency(r, "tails") - 0.25) < 4.0 * sigma);
    }

    CHECK_THROWS_AS(simulate_dynamic(-1.0, 10, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_dynamic(1.0, 0, 1), std::domain_error);
}

TEST_CASE("geometric simulation agrees with the analytic model") {
    SUBCASE("unit cube") {
        const auto r = simulate_geometric(BoxSpec{1, 1, 1}, 1000000, 3);
        const double sigma = oracles::binomial_sigma(1.0 / 6.0, r.trials);
        for (const auto& [label, count] : r.face_counts)
            CHECK(std::abs(static_cast<double>(count) / r.trials - 1.0 / 6.0) < 3.0 * sigma);
    }

    SUBCASE("Mosteller coin") {
        const auto r = simulate_geometric(CoinSpec{1.0, 0.7071067811865475}, 1000000, 9);
        const double sigma = oracles::binomial_sigma(1.0 / 3.0, r.trials);
        CHECK(std::abs(frequency(r, "side") - 1.0 / 3.0) < 3.0 * sigma);
    }

    SUBCASE("pentagonal prism, per-face agreement at 4 sigma") {
        const PrismSpec prism{5, 1.2, 1.0};
        const auto analytic = geometric_face_distribution(prism);
        const auto r = simulate_geometric(prism, 1000000, 17);
        for (const auto& e : analytic.entries) {
            const double sigma = oracles::binomial_sigma(e.probability, r.trials);
            CHECK(std::abs(frequency(r, e.label) - e.probability) < 4.0 * sigma);
        }
    }

    SUBCASE("counts sum to trials") {
        const auto r = simulate_geometric(PrismSpec{11, 2.0, 1.0}, 50000, 2);
        long sum = 0;
        for (const auto& [label, count] : r.face_counts) sum += count;
        CHECK(sum == r.trials);
    }
}

TEST_CASE("fixed seeds reproduce identical results") {
    const auto a = simulate_geometric(PrismSpec{7, 1.6, 1.0}, 200000, 99);
    const auto b = simulate_geometric(PrismSpec{7, 1.6, 1.0}, 200000, 99);
    CHECK(a.face_counts == b.face_counts);

    const auto c = simulate_dynamic(2.4, 200000, 99);
    const auto d = simulate_dynamic(2.4, 200000, 99);
    CHECK(c.face_counts == d.face_counts);

    const auto e = simulate_dynamic(2.4, 200000, 100);
    CHECK(c.face_counts != e.face_counts);
}

TEST_CASE("estimation error shrinks as trials grow 100x") {
    const double p = 0.5;  // t = 1 dynamic edge probability
    double err_small = 0.0, err_large = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto small = simulate_dynamic(1.0, 1000, seed);
        const auto large = simulate_dynamic(1.0, 100000, seed);
        err_small += std::abs(frequency(small, "side") - p);
        err_large += std::abs(frequency(large, "side") - p);
    }
    CHECK(err_large < err_small);
}

TEST_CASE("synthetic datasets") {
    SUBCASE("shape: one record per height, all totals equal") {
        std::vector<double> heights;
        for (int h = 20; h <= 29; ++h) heights.push_back(h);
        const auto d = synthesize_dataset(Model::geometric, SolidFamily::cylinder, heights,
                                          10.0, 500, 7);
        REQUIRE(d.size() == 10);
        for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK(d[i].height_mm == heights[i]);
            CHECK(d[i].total == 500);
            CHECK(d[i].heads_tails >= 0);
            CHECK(d[i].heads_tails <= 500);
        }
    }

    SUBCASE("round-trips through the calibration CSV parser") {
        const auto d = synthesize_dataset(Model::dynamic, SolidFamily::cylinder,
                                          {20, 25, 30}, 10.0, 200, 3);
        const auto back = calibration::parse_toss_csv(calibration::dataset_csv(d));
        REQUIRE(back.size() == d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            CHECK(back[i].heads_tails == d[i].heads_tails);
    }

    SUBCASE("a flat generator fits a slope near zero") {
        // constant thickness across labeled heights: counts carry no trend
        const double t = 1.0;
        calibration::TossDataset d;
        for (int i = 0; i < 10; ++i) {
            const auto r = simulate_dynamic(t, 500, 1000 + i);
            d.push_back({20.0 + i, end_faces(r), 500});
        }
        const auto fit = calibration::fit_linear(d);

        double sxx = 0.0;
        for (const auto& rec : d) {
            const double dx = rec.height_mm - 24.5;
            sxx += dx * dx;
        }
        const double se_slope =
            std::sqrt(fit.residual_sum_squares / (d.size() - 2) / sxx);
        CHECK(std::abs(fit.slope) < 3.0 * se_slope);
    }

    SUBCASE("recovers the analytic fair height within 3 standard errors") {
        // cylinder, 13 faces: fair t = 11/sqrt(12), radius 10mm
        const double fair_t = fair_thickness_geometric(13, SolidFamily::cylinder);
        const double fair_h = fair_t * 10.0;

        std::vector<double> heights;
        for (int i = -3; i <= 3; ++i) heights.push_back(fair_h + 1.5 * i);
        const auto d = synthesize_dataset(Model::geometric, SolidFamily::cylinder, heights,
                                          10.0, 4000, 2024);
        const auto fit = calibration::fit_linear(d);
        const auto recovered = calibration::fair_height(fit, 13, 4000);

        double sxx = 0.0, mean_h = 0.0;
        for (double h : heights) mean_h += h / heights.size();
        for (double h : heights) sxx += (h - mean_h) * (h - mean_h);
        const double s = std::sqrt(fit.residual_sum_squares / (heights.size() - 2));
        const double se_pred =
            s * std::sqrt(1.0 / heights.size() +
                          (recovered.height_mm - mean_h) * (recovered.height_mm - mean_h) /
                              sxx);
        const double se_height = se_pred / std::abs(fit.slope);
        CHECK(std::abs(recovered.height_mm - fair_h) < 3.0 * se_height);
    }

    CHECK_THROWS_AS(
        synthesize_dataset(Model::geometric, SolidFamily::cylinder, {}, 10.0, 100, 1),
        std::domain_error);
    CHECK_THROWS_AS(synthesize_dataset(Model::geometric, SolidFamily::prism, {20.0}, 10.0,
                                       100, 1, 0),
                    std::domain_error);
}

TEST_CASE("result JSON carries the advertised fields") {
    const auto r = simulate_dynamic(1.0, 100, 5);
    const std::string json = result_json(r);
    for (const char* key : {"\"model\"", "\"seed\"", "\"trials\"", "\"face_counts\""})
        CHECK(json.find(key) != std::string::npos);
}
