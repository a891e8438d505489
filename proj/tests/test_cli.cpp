#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "rkhs_embed/dynamics.hpp"

namespace fs = std::filesystem;
using rkhs_embed::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "rkhs-embed");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const char* env = std::getenv("RKHS_TEST_TMP");
    const fs::path dir = fs::path(env ? env : fs::temp_directory_path().string()) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << body;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string& header) {
    std::ifstream in(p);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("print defaults") {
    const auto r = cli({"--print-defaults"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["gamma"] == rkhs_embed::kDefaultGain);
    CHECK(j["N_list"].size() == 9);
}

TEST_CASE("usage errors") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"simulate", "--bogus"}).code == 2);
    CHECK(cli({"simulate", "--config", "/nonexistent.json"}).code == 2);
}

TEST_CASE("simulate with the default config") {
    const auto dir = scratch("simulate_default");
    const auto r = cli({"simulate", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "trajectory.csv"));
    REQUIRE(fs::exists(dir / "summary.json"));
    const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(s["N"] == 100);
    CHECK(s["phi_drift"].get<double>() <= 1e-6);
    CHECK(s["gamma"] == rkhs_embed::kDefaultGain);
}

TEST_CASE("simulate with gamma = 0 keeps the coefficients") {
    const auto dir = scratch("simulate_gamma0");
    const auto cfg = write_config(dir, R"({"gamma": 0, "T": 2, "N": 10})");
    CHECK(cli({"simulate", "--config", cfg, "--out", dir.string()}).code == 0);
    const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(s["aT"] == s["a0"]);
    CHECK(s["a_change"] == 0.0);
}

TEST_CASE("malformed config keys are named") {
    const auto dir = scratch("bad_key");
    const auto r = cli({"simulate", "--config", write_config(dir, R"({"gamm": 1})"), "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("gamm") != std::string::npos);
    const auto syntax = cli({"trace", "--config", write_config(dir, "{\"T\": 1,,}")});
    CHECK(syntax.code == 2);
    CHECK(syntax.err.find("line") != std::string::npos);
}

TEST_CASE("trace writes an on-level polyline") {
    const auto dir = scratch("trace");
    const auto r = cli({"trace", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("L=") != std::string::npos);
    CHECK(r.out.find("closure_gap=") != std::string::npos);
    std::string header;
    const auto rows = read_csv(dir / "polyline.csv", header);
    CHECK(header == "s,x1,x2,phi");
    CHECK(rows.size() >= 4000);
    for (const auto& row : rows)
        CHECK(std::abs(rkhs_embed::first_integral(Eigen::Vector2d(row[1], row[2])) + 0.1) <= 1e-6);
}

TEST_CASE("trace at the equilibrium level fails as a numerical error") {
    const auto dir = scratch("trace_eq");
    const auto r = cli({"trace", "--config", write_config(dir, R"({"level": -0.5})"), "--out", dir.string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("equilibrium") != std::string::npos);
}

TEST_CASE("rates with a single N reports a fit error") {
    const auto dir = scratch("rates_single");
    const auto cfg = write_config(dir, R"({"N_list": [100], "N_ref": 0, "T": 1})");
    const auto r = cli({"rates", "--config", cfg, "--out", dir.string()});
    CHECK(r.code == 3);
    CHECK(r.out.find("need at least 3 points") != std::string::npos);
    CHECK(fs::exists(dir / "rates.csv"));
}

TEST_CASE("rates reruns are byte-identical") {
    const auto a = scratch("rates_a"), b = scratch("rates_b");
    const std::string body = R"({"N_list": [10, 20, 40], "fit_window": [10, 40], "N_ref": 160, "T": 2})";
    const auto ra = cli({"rates", "--config", write_config(a, body), "--out", a.string()});
    const auto rb = cli({"rates", "--config", write_config(b, body), "--out", b.string()});
    CHECK(ra.code == 0);
    CHECK(rb.code == 0);
    CHECK(slurp(a / "rates.csv") == slurp(b / "rates.csv"));
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    const auto rep = nlohmann::json::parse(slurp(a / "report.json"));
    CHECK(rep["records"].size() == 6);
    CHECK(rep["bounds"]["1.5"] == -1.0);
    CHECK(rep["bounds"]["2.5"] == -2.0);
    CHECK(rep["config"]["N_ref"] == 160);
    std::string header;
    read_csv(a / "rates.csv", header);
    CHECK(header == "N,nu,h,sup_err,l2_err,h1_err");
}

TEST_CASE("contour") {
    SUBCASE("two by two grid") {
        const auto dir = scratch("contour_small");
        const auto cfg = write_config(dir, R"({"grid_n": 2, "T": 1})");
        CHECK(cli({"contour", "--config", cfg, "--out", dir.string()}).code == 0);
        std::string header;
        const auto rows = read_csv(dir / "contour.csv", header);
        CHECK(header == "x1,x2,err");
        CHECK(rows.size() == 4);
    }
    SUBCASE("estimate forced to the truth gives a zero grid") {
        const auto dir = scratch("contour_truth");
        const auto cfg = write_config(dir, R"({"grid_n": 15, "contour_force_truth": true})");
        CHECK(cli({"contour", "--config", cfg, "--out", dir.string()}).code == 0);
        std::string header;
        for (const auto& row : read_csv(dir / "contour.csv", header)) CHECK(row[2] == 0.0);
    }
}
