// fairdice command-line tool: fair-die design, probability evaluation,
// mesh export, calibration and Monte Carlo simulation.
//
// JSON (or mesh bytes) goes to stdout or --out; diagnostics go to stderr.
// Exit codes: 0 success, 1 domain/validation error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairdice/calibration.hpp"
#include "fairdice/mesh.hpp"
#include "fairdice/models.hpp"
#include "fairdice/simulate.hpp"
#include "fairdice/sphere_design.hpp"

namespace {

using nlohmann::json;
using namespace fairdice;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void emit_bytes(const std::vector<std::uint8_t>& bytes, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(bytes.data(), 1, bytes.size(), stdout);
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json distribution_json(const models::FaceDistribution& dist) {
    json entries = json::array();
    for (const auto& e : dist.entries)
        entries.push_back({{"face", e.label}, {"probability", e.probability}});
    return {{"model", dist.model == models::Model::dynamic ? "dynamic" : "geometric"},
            {"entries", std::move(entries)},
            {"end_face_total", dist.end_face_total()},
            {"side_face_total", dist.side_face_total()}};
}

struct ThicknessArgs {
    int faces = 0;
    std::string model;
    std::string family = "cylinder";
    double radius_mm = 10.0;
    std::string out;
};

int run_thickness(const ThicknessArgs& a) {
    double ratio;
    if (a.model == "dynamic") {
        ratio = models::fair_thickness_dynamic(a.faces);
    } else {
        const auto family = a.family == "prism" ? models::SolidFamily::prism
                                                : models::SolidFamily::cylinder;
        ratio = models::fair_thickness_geometric(a.faces, family);
    }
    json j{{"faces", a.faces},
           {"model", a.model},
           {"family", a.family},
           {"thickness_ratio", ratio},
           {"radius_mm", a.radius_mm},
           {"height_mm", ratio * a.radius_mm}};
    emit(j.dump(2), a.out);
    return 0;
}

struct ProbArgs {
    std::string shape;
    std::string model;
    double height_mm = 0.0;
    double radius_mm = 10.0;
    int sides = 0;
    std::vector<double> dims;
    std::string out;
};

int run_prob(const ProbArgs& a) {
    models::FaceDistribution dist;
    if (a.shape == "cylinder") {
        const models::CoinSpec coin{1.0, a.height_mm / a.radius_mm};
        dist = a.model == "dynamic" ? models::dynamic_face_distribution(coin)
                                    : models::geometric_face_distribution(coin);
    } else if (a.shape == "prism") {
        if (a.sides < 3) throw std::domain_error("prob: prism needs --sides >= 3");
        const models::PrismSpec prism{a.sides, a.height_mm / a.radius_mm, 1.0};
        dist = a.model == "dynamic" ? models::dynamic_face_distribution(prism)
                                    : models::geometric_face_distribution(prism);
    } else {
        if (a.dims.size() != 3) throw std::domain_error("prob: box needs --dims a,b,c");
        if (a.model == "dynamic")
            throw std::domain_error("prob: the dynamic model does not apply to boxes");
        dist = models::geometric_face_distribution(models::BoxSpec{a.dims[0], a.dims[1],
                                                                   a.dims[2]});
    }
    json j = distribution_json(dist);
    j["shape"] = a.shape;
    emit(j.dump(2), a.out);
    return 0;
}

struct DesignSphereArgs {
    int faces = 0;
    std::uint64_t seed = 1;
    double tol = 1e-7;
    int max_iter = 20000;
    double face_fraction = 0.2;
    double max_displacement = 0.01;
    std::string out;
};

int run_design_sphere(const DesignSphereArgs& a) {
    const auto cvt = sphere_design::cvt_optimize(a.faces, a.seed, a.tol, a.max_iter);
    const auto spec = sphere_design::carve(cvt.layout, a.face_fraction, a.max_displacement);
    emit(sphere_design::layout_json(cvt, spec), a.out);
    return 0;
}

struct MeshArgs {
    std::string shape;
    std::string format = "stl";
    std::string out;
    int sides = 6;
    double height_mm = 20.0;
    double radius_mm = 10.0;
    double apex_height_mm = 10.0;
    double tip_height_mm = 5.0;
    int segments = 64;
    int resolution = 5;
    int faces = 13;
    std::uint64_t seed = 1;
    double tol = 1e-7;
    int max_iter = 20000;
    double face_fraction = 0.2;
};

int run_mesh(const MeshArgs& a) {
    mesh::TriangleMesh m;
    if (a.shape == "prism") {
        m = mesh::generate_prism(a.sides, a.height_mm, a.radius_mm);
    } else if (a.shape == "sharpened-prism") {
        m = mesh::generate_prism(a.sides, a.height_mm, a.radius_mm, true, a.tip_height_mm);
    } else if (a.shape == "bipyramid") {
        m = mesh::generate_bipyramid(a.sides, a.apex_height_mm, a.radius_mm);
    } else if (a.shape == "cylinder") {
        m = mesh::generate_cylinder(a.radius_mm, a.height_mm, a.segments);
    } else {
        const auto cvt = sphere_design::cvt_optimize(a.faces, a.seed, a.tol, a.max_iter);
        const auto spec = sphere_design::carve(cvt.layout, a.face_fraction);
        m = mesh::generate_carved_sphere(spec, a.resolution);
        mesh::scale(m, a.radius_mm);
    }
    mesh::validate(m);
    if (a.format == "obj")
        emit(mesh::export_obj(m), a.out);
    else
        emit_bytes(mesh::export_stl(m), a.out);
    return 0;
}

struct CalibrateArgs {
    std::string input;
    int faces = 0;
    long total = 0;
    double scale_ratio = 1.0;
    std::string out;
};

int run_calibrate(const CalibrateArgs& a) {
    const auto dataset = calibration::parse_toss_csv(read_file(a.input));
    const auto fit = calibration::fit_linear(dataset);
    const auto fair = calibration::fair_height(fit, a.faces, a.total);
    const double expected = calibration::expected_count(a.faces, a.total);

    std::vector<std::string> warnings;
    if (fair.extrapolated)
        warnings.push_back("fair height lies outside the fitted height range [" +
                           std::to_string(fit.height_min) + ", " +
                           std::to_string(fit.height_max) + "] (extrapolation)");

    json j = json::parse(calibration::report_json(fit, fair, expected, warnings));
    j["scale_ratio"] = a.scale_ratio;
    j["scaled_height_mm"] = calibration::scale_height(fair.height_mm, a.scale_ratio);
    emit(j.dump(2), a.out);
    return 0;
}

struct SimulateArgs {
    std::string model;
    std::string shape = "cylinder";
    std::string family = "cylinder";
    long trials = 100000;
    std::uint64_t seed = 1;
    double height_mm = 20.0;
    double radius_mm = 10.0;
    int sides = 0;
    std::vector<double> dims;
    std::vector<double> heights;
    std::string out;
};

int run_simulate(const SimulateArgs& a) {
    if (!a.heights.empty()) {
        const auto family = a.family == "prism" ? models::SolidFamily::prism
                                                : models::SolidFamily::cylinder;
        const auto model = a.model == "dynamic" ? models::Model::dynamic
                                                : models::Model::geometric;
        const auto dataset = simulate::synthesize_dataset(model, family, a.heights,
                                                          a.radius_mm, a.trials, a.seed,
                                                          a.sides);
        emit(calibration::dataset_csv(dataset), a.out);
        return 0;
    }

    simulate::SimulationResult result;
    if (a.model == "dynamic") {
        result = simulate::simulate_dynamic(a.height_mm / a.radius_mm, a.trials, a.seed);
    } else if (a.shape == "cylinder") {
        result = simulate::simulate_geometric(models::CoinSpec{1.0, a.height_mm / a.radius_mm},
                                              a.trials, a.seed);
    } else if (a.shape == "prism") {
        if (a.sides < 3) throw std::domain_error("simulate: prism needs --sides >= 3");
        result = simulate::simulate_geometric(
            models::PrismSpec{a.sides, a.height_mm / a.radius_mm, 1.0}, a.trials, a.seed);
    } else {
        if (a.dims.size() != 3) throw std::domain_error("simulate: box needs --dims a,b,c");
        result = simulate::simulate_geometric(models::BoxSpec{a.dims[0], a.dims[1], a.dims[2]},
                                              a.trials, a.seed);
    }
    emit(simulate::result_json(result), a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairdice: design toolkit for fair dice"};
    app.require_subcommand(1);

    ThicknessArgs th;
    auto* thickness = app.add_subcommand(
        "thickness", "Fair thickness/height for an n-face coin or prism die");
    thickness->add_option("--faces", th.faces, "number of faces")->required();
    thickness->add_option("--model", th.model, "probability model")
        ->required()
        ->check(CLI::IsMember({"dynamic", "geometric"}));
    thickness->add_option("--family", th.family, "solid family (geometric model)")
        ->check(CLI::IsMember({"cylinder", "prism"}));
    thickness->add_option("--radius-mm", th.radius_mm, "physical circumradius in mm");
    thickness->add_option("--out", th.out, "output file (default stdout)");

    ProbArgs pr;
    auto* prob = app.add_subcommand("prob", "Face-landing distribution of a solid");
    prob->add_option("--shape", pr.shape, "solid shape")
        ->required()
        ->check(CLI::IsMember({"cylinder", "prism", "box"}));
    prob->add_option("--model", pr.model, "probability model")
        ->required()
        ->check(CLI::IsMember({"dynamic", "geometric"}));
    prob->add_option("--height-mm", pr.height_mm, "height in mm");
    prob->add_option("--radius-mm", pr.radius_mm, "circumradius in mm");
    prob->add_option("--sides", pr.sides, "prism side count");
    prob->add_option("--dims", pr.dims, "box edge lengths a,b,c")->delimiter(',');
    prob->add_option("--out", pr.out, "output file (default stdout)");

    DesignSphereArgs ds;
    auto* design = app.add_subcommand("design-sphere",
                                      "Equal-area centroidal Voronoi sphere die layout");
    design->add_option("--faces", ds.faces, "number of faces")->required();
    design->add_option("--seed", ds.seed, "RNG seed");
    design->add_option("--tol", ds.tol, "Lloyd convergence tolerance");
    design->add_option("--max-iter", ds.max_iter, "Lloyd iteration cap");
    design->add_option("--face-fraction", ds.face_fraction,
                       "flat-face share of the per-face sphere area");
    design->add_option("--max-displacement", ds.max_displacement,
                       "maximum tolerated centroid displacement (radii)");
    design->add_option("--out", ds.out, "output file (default stdout)");

    MeshArgs me;
    auto* meshcmd = app.add_subcommand("mesh", "Generate a printable die mesh");
    meshcmd->add_option("--shape", me.shape, "die shape")
        ->required()
        ->check(CLI::IsMember(
            {"prism", "bipyramid", "cylinder", "sharpened-prism", "carved-sphere"}));
    meshcmd->add_option("--format", me.format, "output format")
        ->check(CLI::IsMember({"stl", "obj"}));
    meshcmd->add_option("--sides", me.sides, "polygon side count");
    meshcmd->add_option("--height-mm", me.height_mm, "height in mm");
    meshcmd->add_option("--radius-mm", me.radius_mm, "circumradius in mm");
    meshcmd->add_option("--apex-height-mm", me.apex_height_mm, "bipyramid apex height in mm");
    meshcmd->add_option("--tip-height-mm", me.tip_height_mm, "sharpened tip height in mm");
    meshcmd->add_option("--segments", me.segments, "cylinder segments");
    meshcmd->add_option("--resolution", me.resolution, "carved-sphere subdivision level");
    meshcmd->add_option("--faces", me.faces, "carved-sphere face count");
    meshcmd->add_option("--seed", me.seed, "carved-sphere RNG seed");
    meshcmd->add_option("--tol", me.tol, "carved-sphere Lloyd tolerance");
    meshcmd->add_option("--max-iter", me.max_iter, "carved-sphere Lloyd iteration cap");
    meshcmd->add_option("--face-fraction", me.face_fraction, "carved-sphere face fraction");
    meshcmd->add_option("--out", me.out, "output file (default stdout)");

    CalibrateArgs ca;
    auto* calibrate = app.add_subcommand("calibrate",
                                         "Fit toss data and solve for the fair height");
    calibrate->add_option("--input", ca.input, "toss CSV file")->required();
    calibrate->add_option("--faces", ca.faces, "number of faces")->required();
    calibrate->add_option("--total", ca.total, "tosses per record")->required();
    calibrate->add_option("--scale-ratio", ca.scale_ratio,
                          "inscribed-circle radius ratio for height scaling");
    calibrate->add_option("--out", ca.out, "output file (default stdout)");

    SimulateArgs si;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo toss simulation");
    simulate->add_option("--model", si.model, "probability model")
        ->required()
        ->check(CLI::IsMember({"dynamic", "geometric"}));
    simulate->add_option("--shape", si.shape, "solid shape")
        ->check(CLI::IsMember({"cylinder", "prism", "box"}));
    simulate->add_option("--family", si.family, "solid family for --heights datasets")
        ->check(CLI::IsMember({"cylinder", "prism"}));
    simulate->add_option("--trials", si.trials, "trials (per height when --heights given)");
    simulate->add_option("--seed", si.seed, "RNG seed");
    simulate->add_option("--height-mm", si.height_mm, "height in mm");
    simulate->add_option("--radius-mm", si.radius_mm, "circumradius in mm");
    simulate->add_option("--sides", si.sides, "prism side count");
    simulate->add_option("--dims", si.dims, "box edge lengths a,b,c")->delimiter(',');
    simulate->add_option("--heights", si.heights, "emit a toss CSV over these heights (mm)")
        ->delimiter(',');
    simulate->add_option("--out", si.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (thickness->parsed()) return run_thickness(th);
        if (prob->parsed()) return run_prob(pr);
        if (design->parsed()) return run_design_sphere(ds);
        if (meshcmd->parsed()) return run_mesh(me);
        if (calibrate->parsed()) return run_calibrate(ca);
        if (simulate->parsed()) return run_simulate(si);
    } catch (const std::exception& e) {
        std::cerr << "fairdice: error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
