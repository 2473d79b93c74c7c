#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fairdice/models.hpp"

using nlohmann::json;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

CommandResult run_cli(const std::string& args) {
    const std::string cmd = std::string(FAIRDICE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/") + name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

const char* kCylinderCsv =
    "height_mm,heads_tails,total\n"
    "20,92,500\n21,73,500\n22,67,500\n23,72,500\n24,50,500\n"
    "25,52,500\n26,53,500\n27,49,500\n28,38,500\n29,38,500\n";

std::set<std::string> top_level_keys(const json& j) {
    std::set<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
    return keys;
}

}  // namespace

TEST_CASE("thickness subcommand") {
    const auto r = run_cli("thickness --faces 13 --model dynamic");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(std::abs(j["thickness_ratio"].get<double>() - 4.057) < 5e-4);
    CHECK(j["faces"] == 13);

    // serialized with full round-trip precision
    CHECK(j["thickness_ratio"].get<double>() ==
          fairdice::models::fair_thickness_dynamic(13));

    SUBCASE("geometric family") {
        const auto g = run_cli("thickness --faces 3 --model geometric --family cylinder");
        REQUIRE(g.exit_code == 0);
        CHECK(std::abs(json::parse(g.output)["thickness_ratio"].get<double>() -
                       1.0 / std::sqrt(2.0)) < 1e-9);
    }

    SUBCASE("domain errors exit 1") {
        CHECK(run_cli("thickness --faces 2 --model dynamic").exit_code == 1);
    }

    SUBCASE("usage errors exit 2, help exits 0") {
        CHECK(run_cli("thickness --faces 13").exit_code == 2);  // missing --model
        CHECK(run_cli("thickness --faces 13 --model dynamic --bogus 1").exit_code == 2);
        CHECK(run_cli("nonsense").exit_code == 2);
        CHECK(run_cli("--help").exit_code == 0);
    }

    SUBCASE("schema is stable across runs") {
        const auto a = run_cli("thickness --faces 5 --model dynamic");
        const auto b = run_cli("thickness --faces 9 --model geometric --family prism");
        CHECK(top_level_keys(json::parse(a.output)) == top_level_keys(json::parse(b.output)));
    }
}

TEST_CASE("prob subcommand") {
    const auto r = run_cli(
        "prob --shape cylinder --model geometric --height-mm 7.0710678 --radius-mm 10");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(std::abs(j["side_face_total"].get<double>() - 1.0 / 3.0) < 1e-6);

    const auto box = run_cli("prob --shape box --model geometric --dims 1,1,1");
    REQUIRE(box.exit_code == 0);
    CHECK(json::parse(box.output)["entries"].size() == 6);

    CHECK(run_cli("prob --shape box --model dynamic --dims 1,1,1").exit_code == 1);
    CHECK(run_cli("prob --shape prism --model geometric --height-mm 10").exit_code == 1);
}

TEST_CASE("design-sphere subcommand") {
    const auto r = run_cli("design-sphere --faces 6 --seed 2 --tol 1e-9 --max-iter 5000");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    REQUIRE(j["points"].size() == 6);
    REQUIRE(j["points"][0].size() == 3);
    CHECK(j["converged"].get<bool>());
    for (const auto& a : j["areas"])
        CHECK(std::abs(a.get<double>() - 2.0 * fairdice::kPi / 3.0) < 1e-4);
    CHECK(j["centroid_displacement"].get<double>() < 1e-6);
    CHECK(j["cap_angle"].get<double>() > 0.0);

    SUBCASE("reproducible byte-for-byte for a fixed seed") {
        const auto a = run_cli("design-sphere --faces 9 --seed 4");
        const auto b = run_cli("design-sphere --faces 9 --seed 4");
        CHECK(a.output == b.output);
    }
}

TEST_CASE("mesh subcommand") {
    SUBCASE("binary STL to a file") {
        const std::string path = "/tmp/fairdice_test_bipyramid.stl";
        const auto r = run_cli("mesh --shape bipyramid --sides 3 --apex-height-mm 12 "
                               "--radius-mm 10 --format stl --out " + path);
        REQUIRE(r.exit_code == 0);
        std::ifstream f(path, std::ios::binary | std::ios::ate);
        REQUIRE(f.good());
        CHECK(f.tellg() == 84 + 6 * 50);  // 6 triangles
        std::remove(path.c_str());
    }

    SUBCASE("OBJ to stdout") {
        const auto r = run_cli("mesh --shape prism --sides 6 --height-mm 20 "
                               "--radius-mm 10 --format obj");
        REQUIRE(r.exit_code == 0);
        CHECK(r.output.substr(0, 2) == "v ");
        int vcount = 0;
        std::istringstream in(r.output);
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("v ", 0) == 0) ++vcount;
        CHECK(vcount == 12);
    }

    SUBCASE("carved sphere honors radius") {
        const std::string path = "/tmp/fairdice_test_carved.stl";
        const auto r = run_cli("mesh --shape carved-sphere --faces 6 --seed 1 "
                               "--resolution 3 --radius-mm 10 --format stl --out " + path);
        REQUIRE(r.exit_code == 0);
        std::ifstream f(path, std::ios::binary | std::ios::ate);
        REQUIRE(f.good());
        CHECK(f.tellg() > 84);
        std::remove(path.c_str());
    }

    CHECK(run_cli("mesh --shape cylinder --segments 8 --height-mm 10").exit_code == 1);
}

TEST_CASE("calibrate subcommand") {
    const std::string path = write_temp("fairdice_table4_cyl.csv", kCylinderCsv);
    const auto r = run_cli("calibrate --input " + path + " --faces 13 --total 500");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(std::abs(j["fair_height_mm"].get<double>() - 21.011) < 0.005);
    CHECK(std::abs(j["a"].get<double>() - (-5.30909)) < 0.001);
    CHECK(std::abs(j["b"].get<double>() - 188.473) < 0.01);
    CHECK(std::abs(j["expected_count"].get<double>() - 76.92) < 0.005);

    SUBCASE("inscribed-circle scaling") {
        const auto s = run_cli("calibrate --input " + path +
                               " --faces 13 --total 500 --scale-ratio 0.9595");
        REQUIRE(s.exit_code == 0);
        CHECK(std::abs(json::parse(s.output)["scaled_height_mm"].get<double>() - 20.160) <
              0.005);
    }

    SUBCASE("bad input exits 1") {
        const std::string bad = write_temp("fairdice_bad.csv",
                                           "height_mm,heads_tails,total\n20,501,500\n");
        CHECK(run_cli("calibrate --input " + bad + " --faces 13 --total 500").exit_code == 1);
        CHECK(run_cli("calibrate --input /nonexistent.csv --faces 13 --total 500")
                  .exit_code == 1);
    }
    std::remove(path.c_str());
}

TEST_CASE("simulate subcommand") {
    const auto r = run_cli("simulate --model dynamic --height-mm 10 --radius-mm 10 "
                           "--trials 100000 --seed 7");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.output);
    CHECK(j["trials"] == 100000);
    const double side = j["face_counts"]["side"].get<double>() / 100000.0;
    CHECK(std::abs(side - 0.5) < 0.01);

    SUBCASE("byte-for-byte reproducible") {
        const auto a = run_cli("simulate --model geometric --shape prism --sides 5 "
                               "--height-mm 12 --trials 20000 --seed 3");
        const auto b = run_cli("simulate --model geometric --shape prism --sides 5 "
                               "--height-mm 12 --trials 20000 --seed 3");
        CHECK(a.output == b.output);
        CHECK(!a.output.empty());
    }

    SUBCASE("geometric box simulation") {
        const auto b = run_cli("simulate --model geometric --shape box --dims 1,1,1 "
                               "--trials 60000 --seed 9");
        REQUIRE(b.exit_code == 0);
        const json jb = json::parse(b.output);
        REQUIRE(jb["face_counts"].size() == 6);
        for (const auto& [label, count] : jb["face_counts"].items())
            CHECK(std::abs(count.get<double>() / 60000.0 - 1.0 / 6.0) < 0.01);
    }

    SUBCASE("emits a parseable toss CSV over heights") {
        const auto c = run_cli("simulate --model geometric --family cylinder "
                               "--heights 20,22,24 --trials 200 --seed 5");
        REQUIRE(c.exit_code == 0);
        CHECK(c.output.rfind("height_mm,heads_tails,total", 0) == 0);
        int lines = 0;
        std::istringstream in(c.output);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) ++lines;
        CHECK(lines == 4);  // header + 3 records
    }
}
