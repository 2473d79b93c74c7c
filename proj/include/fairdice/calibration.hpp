// Toss-experiment calibration: CSV ingestion, ordinary least squares on
// head/tail counts versus height, fair-height solving, inscribed-circle
// height scaling, and a normal-approximation fairness test.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fairdice::calibration {

struct TossRecord {
    double height_mm = 0.0;
    long heads_tails = 0;  // end-face landings
    long total = 0;        // tosses performed
};

using TossDataset = std::vector<TossRecord>;

// CSV with header `height_mm,heads_tails,total`. Duplicate heights are kept
// as separate records; malformed rows are reported with their line number.
TossDataset parse_toss_csv(std::string_view text);

std::string dataset_csv(const TossDataset& dataset);

struct LinearFit {
    double slope = 0.0;      // count per mm
    double intercept = 0.0;  // count
    double residual_sum_squares = 0.0;
    double height_min = 0.0;  // fitted data range, for extrapolation warnings
    double height_max = 0.0;
};

// Ordinary least squares of heads_tails against height_mm (raw counts).
LinearFit fit_linear(const TossDataset& dataset);

// total * 2 / n: end-face count a fair n-face die would produce.
double expected_count(int faces, long total);

struct FairHeight {
    double height_mm = 0.0;
    bool extrapolated = false;  // outside the fitted height range
};

// Height at which the fitted line crosses expected_count(faces, total).
FairHeight fair_height(const LinearFit& fit, int faces, long total);

// Aspect-ratio similarity: the end-face probability depends on height/radius
// only, so a radius_ratio-scaled die is fair at radius_ratio times the height.
double scale_height(double height_mm, double radius_ratio);

struct FairnessReport {
    double expected = 0.0;
    double z = 0.0;
    double p_value = 0.0;       // two-sided, normal approximation
    bool inconsistent = false;  // p_value < 0.05
};

// Binomial z-test of `observed` end-face landings against p = 2/n.
FairnessReport fairness_test(long observed, long total, int faces);

// Report JSON: {a, b, rss, fair_height_mm, expected_count, warnings[]}.
std::string report_json(const LinearFit& fit, const FairHeight& result, double expected,
                        const std::vector<std::string>& warnings);

}  // namespace fairdice::calibration
