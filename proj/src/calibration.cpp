#include "fairdice/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace fairdice::calibration {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

double parse_double(const std::string& s, int line_no, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty())
        throw std::invalid_argument("line " + std::to_string(line_no) + ": malformed " + what +
                                    " '" + s + "'");
    return v;
}

long parse_count(const std::string& s, int line_no, const char* what) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty())
        throw std::invalid_argument("line " + std::to_string(line_no) + ": malformed " + what +
                                    " '" + s + "'");
    return v;
}

}  // namespace

TossDataset parse_toss_csv(std::string_view text) {
    TossDataset dataset;
    int line_no = 0;
    bool header_seen = false;

    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::string_view raw =
            text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (!header_seen) {
            const auto fields = split_fields(line);
            if (fields.size() != 3 || fields[0] != "height_mm" || fields[1] != "heads_tails" ||
                fields[2] != "total")
                throw std::invalid_argument(
                    "line 1: expected header 'height_mm,heads_tails,total'");
            header_seen = true;
            continue;
        }

        const auto fields = split_fields(line);
        if (fields.size() != 3)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected 3 comma-separated fields");
        TossRecord rec;
        rec.height_mm = parse_double(fields[0], line_no, "height");
        rec.heads_tails = parse_count(fields[1], line_no, "heads_tails");
        rec.total = parse_count(fields[2], line_no, "total");

        if (!(rec.height_mm > 0.0))
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": height must be positive");
        if (rec.total <= 0)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": total must be positive");
        if (rec.heads_tails < 0 || rec.heads_tails > rec.total)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": heads_tails must lie in [0, total]");
        dataset.push_back(rec);
    }

    if (!header_seen) throw std::invalid_argument("empty input: missing CSV header");
    if (dataset.empty()) throw std::invalid_argument("empty dataset: no toss records");
    return dataset;
}

std::string dataset_csv(const TossDataset& dataset) {
    std::string out = "height_mm,heads_tails,total\n";
    char line[96];
    for (const TossRecord& r : dataset) {
        std::snprintf(line, sizeof(line), "%.9g,%ld,%ld\n", r.height_mm, r.heads_tails, r.total);
        out += line;
    }
    return out;
}

LinearFit fit_linear(const TossDataset& dataset) {
    std::set<double> heights;
    for (const TossRecord& r : dataset) heights.insert(r.height_mm);
    if (heights.size() < 2)
        throw std::domain_error("fit_linear: need at least 2 distinct heights");

    const double n = static_cast<double>(dataset.size());
    double sx = 0.0, sy = 0.0;
    for (const TossRecord& r : dataset) {
        sx += r.height_mm;
        sy += static_cast<double>(r.heads_tails);
    }
    const double mx = sx / n;
    const double my = sy / n;

    double sxx = 0.0, sxy = 0.0;
    for (const TossRecord& r : dataset) {
        const double dx = r.height_mm - mx;
        sxx += dx * dx;
        sxy += dx * (static_cast<double>(r.heads_tails) - my);
    }

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.height_min = *heights.begin();
    fit.height_max = *heights.rbegin();
    for (const TossRecord& r : dataset) {
        const double res = static_cast<double>(r.heads_tails) -
                           (fit.slope * r.height_mm + fit.intercept);
        fit.residual_sum_squares += res * res;
    }
    return fit;
}

double expected_count(int faces, long total) {
    if (faces < 3) throw std::domain_error("expected_count: need at least 3 faces");
    if (total <= 0) throw std::domain_error("expected_count: total must be positive");
    return static_cast<double>(total) * 2.0 / static_cast<double>(faces);
}

FairHeight fair_height(const LinearFit& fit, int faces, long total) {
    if (fit.slope == 0.0)
        throw std::domain_error("fair_height: zero slope, no height solves the fit");
    FairHeight result;
    result.height_mm = (expected_count(faces, total) - fit.intercept) / fit.slope;
    result.extrapolated =
        result.height_mm < fit.height_min || result.height_mm > fit.height_max;
    return result;
}

double scale_height(double height_mm, double radius_ratio) {
    if (!(radius_ratio > 0.0))
        throw std::domain_error("scale_height: radius ratio must be positive");
    return height_mm * radius_ratio;
}

FairnessReport fairness_test(long observed, long total, int faces) {
    if (total <= 0) throw std::domain_error("fairness_test: total must be positive");
    if (faces < 3) throw std::domain_error("fairness_test: need at least 3 faces");

    const double p = 2.0 / static_cast<double>(faces);
    const double mean = static_cast<double>(total) * p;
    const double sigma = std::sqrt(static_cast<double>(total) * p * (1.0 - p));

    FairnessReport report;
    report.expected = mean;
    report.z = (static_cast<double>(observed) - mean) / sigma;
    report.p_value = std::erfc(std::abs(report.z) / std::sqrt(2.0));
    report.inconsistent = report.p_value < 0.05;
    return report;
}

std::string report_json(const LinearFit& fit, const FairHeight& result, double expected,
                        const std::vector<std::string>& warnings) {
    nlohmann::json j;
    j["a"] = fit.slope;
    j["b"] = fit.intercept;
    j["rss"] = fit.residual_sum_squares;
    j["fair_height_mm"] = result.height_mm;
    j["expected_count"] = expected;
    j["warnings"] = warnings;
    return j.dump(2);
}

}  // namespace fairdice::calibration
