// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "ssrf/cli.hpp"
#include "ssrf/spectral.hpp"

using namespace ssrf;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ssrf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(cell);
        if (!line.empty() && line.back() == ',') row.emplace_back();
        rows.push_back(row);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ssrf_cli_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("axis grids") {
    const auto g = cli::AxisGrid::parse("0:6:4", "r-grid");
    CHECK(g.values() == std::vector<double>{0.0, 2.0, 4.0, 6.0});
    const auto lg = cli::AxisGrid::parse("1:100:3:log", "r-grid");
    CHECK(lg.values()[1] == doctest::Approx(10.0));
    CHECK(lg.values()[2] == 100.0);
    CHECK(cli::AxisGrid::parse("2:2:1", "k").values() == std::vector<double>{2.0});
    CHECK_THROWS(cli::AxisGrid::parse("0:6", "r-grid"));
    CHECK_THROWS(cli::AxisGrid::parse("0:6:0", "r-grid"));
    CHECK_THROWS(cli::AxisGrid::parse("6:0:3", "r-grid"));
    CHECK_THROWS(cli::AxisGrid::parse("0:1:3:log", "r-grid"));
    CHECK_THROWS(cli::AxisGrid::parse("a:1:3", "r-grid"));
}

TEST_CASE("eval tabulates the reference covariance") {
    const auto r = run({"eval", "--r-grid", "0:18:10", "--tau-grid", "0:6:10"});
    REQUIRE(r.code == cli::kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 101);
    CHECK(rows[0] == std::vector<std::string>{"r", "tau", "value", "method", "est_error"});
    CHECK(rows[1][0] == "0");
    CHECK(rows[1][1] == "0");
    CHECK(std::stod(rows[1][2]) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rows[1][3] == "closed_d1");
    // row-major: r outer, tau inner
    CHECK(std::stod(rows[2][1]) == doctest::Approx(6.0 / 9.0));
    CHECK(std::stod(rows[11][0]) == doctest::Approx(2.0));
}

TEST_CASE("eval csv values round-trip") {
    const auto r = run({"eval", "--r-grid", "3:3:1", "--tau-grid", "0:0:1"});
    REQUIRE(r.code == cli::kOk);
    const auto rows = csv(r.out);
    const double v = std::stod(rows[1][2]);
    CHECK(v == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-14));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    CHECK(rows[1][2] == buf);
}

TEST_CASE("eval auto dispatch and json output") {
    auto r = run({"eval", "--d", "3", "--r-grid", "1:1:1", "--tau-grid", "0.5:0.5:1"});
    REQUIRE(r.code == cli::kOk);
    CHECK(csv(r.out)[1][3] == "spectral_quadrature");
    CHECK_FALSE(csv(r.out)[1][4].empty());

    r = run({"eval", "--mu", "0.5", "--r-grid", "1:1:1", "--tau-grid", "0.5:0.5:1"});
    REQUIRE(r.code == cli::kOk);
    CHECK(csv(r.out)[1][3] == "spectral_quadrature");

    r = run({"eval", "--r-grid", "0:1:2", "--tau-grid", "0:0:1", "--format", "json"});
    REQUIRE(r.code == cli::kOk);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 2);
    CHECK(j[0]["value"].get<double>() == doctest::Approx(0.5));
    CHECK(j[0]["method"] == "closed_d1");
    CHECK(j[0]["est_error"].is_null());
}

TEST_CASE("eval errors map to exit codes") {
    auto r = run({"eval", "--d", "3", "--method", "closed_d3", "--r-grid", "0:1:2", "--tau-grid", "0:0:1"});
    CHECK(r.code == cli::kSingular);
    CHECK(r.err.find("variance") != std::string::npos);

    r = run({"eval", "--d", "3", "--method", "closed_d1"});
    CHECK(r.code == cli::kInvalid);
    CHECK(r.err.find("requires d = 1") != std::string::npos);

    CHECK(run({"eval", "--eta1", "-3", "--mu", "1"}).code == cli::kInvalid);
    CHECK(run({"eval", "--xi", "0"}).code == cli::kInvalid);
    CHECK(run({"eval", "--method", "bogus"}).code == cli::kInvalid);
    CHECK(run({"eval", "--r-grid", "1:0:3"}).code == cli::kInvalid);
    CHECK(run({"eval", "--format", "xml"}).code == cli::kInvalid);
    CHECK(run({}).code == cli::kInvalid);
    CHECK(run({"frobnicate"}).code == cli::kInvalid);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("noise flags are mutually exclusive") {
    CHECK(run({"eval", "--noise-d", "1", "--dtilde", "1"}).code == cli::kInvalid);
    // D = 2 xi eta0 D~ = 6 reproduces the default table
    const auto a = run({"eval", "--noise-d", "6", "--r-grid", "0:3:3", "--tau-grid", "0:2:3"});
    const auto b = run({"eval", "--r-grid", "0:3:3", "--tau-grid", "0:2:3"});
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out == b.out);
    const auto c = run({"eval", "--dtilde", "2", "--r-grid", "0:3:3", "--tau-grid", "0:2:3"});
    CHECK(c.out != b.out);
}

TEST_CASE("config file with flag overrides") {
    TempDir tmp;
    const auto conf = tmp.path / "run.conf";
    std::ofstream(conf) << "d=1\neta1=2\nxi=3\nr-grid=0:3:2\ntau-grid=0:0:1\n";
    const auto from_file = run({"eval", "--config", conf.string()});
    REQUIRE(from_file.code == cli::kOk);
    const auto explicit_flags = run({"eval", "--eta1", "2", "--r-grid", "0:3:2", "--tau-grid", "0:0:1"});
    CHECK(from_file.out == explicit_flags.out);

    const auto overridden = run({"eval", "--config", conf.string(), "--eta1", "1"});
    const auto reference = run({"eval", "--r-grid", "0:3:2", "--tau-grid", "0:0:1"});
    CHECK(overridden.out == reference.out);

    CHECK(run({"eval", "--config", (tmp.path / "missing.conf").string()}).code == cli::kInvalid);
}

TEST_CASE("out writes the table to a file") {
    TempDir tmp;
    const auto path = tmp.path / "table.csv";
    const auto r = run({"eval", "--r-grid", "0:1:2", "--tau-grid", "0:0:1", "--out", path.string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.empty());
    CHECK(slurp(path) == run({"eval", "--r-grid", "0:1:2", "--tau-grid", "0:0:1"}).out);
}

TEST_CASE("spectrum table") {
    // eta1 = eta0 = 1, xi = 3, D = 0.5, mu = 1
    const auto r = run({"spectrum", "--mu", "1", "--noise-d", "0.5", "--k-grid", "0:1:11", "--omega-grid",
                        "-0.05:0.05:21"});
    REQUIRE(r.code == cli::kOk);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 1 + 11 * 21);
    CHECK(rows[0] == std::vector<std::string>{"k", "omega", "S"});
    double best = -1.0, best_k = -1.0, best_w = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double s = std::stod(rows[i][2]);
        if (s > best) best = s, best_k = std::stod(rows[i][0]), best_w = std::stod(rows[i][1]);
    }
    CHECK(best_k == 0.0);
    CHECK(best_w == doctest::Approx(0.0).epsilon(1e-12));
    for (int ik = 0; ik < 11; ++ik)
        for (int iw = 0; iw < 21; ++iw)
            CHECK(rows[1 + ik * 21 + iw][2] == rows[1 + ik * 21 + (20 - iw)][2]);
}

TEST_CASE("spectrum omega sums recover the static density") {
    const auto p = ModelParams::from_dtilde(1, 1.0, 1.0, 3.0, 0.0, 1.0);
    const int count = 200001;
    const double wmax = 2000.0;
    const auto r = run({"spectrum", "--k-grid", "0:1:3", "--omega-grid",
                        "-2000:2000:" + std::to_string(count)});
    REQUIRE(r.code == cli::kOk);
    const auto rows = csv(r.out);
    const double dw = 2.0 * wmax / (count - 1);
    for (int ik = 0; ik < 3; ++ik) {
        double sum = 0.0;
        for (int iw = 0; iw < count; ++iw) sum += std::stod(rows[1 + ik * count + iw][2]);
        const double k = std::stod(rows[1 + ik * count][0]);
        CHECK(sum * dw / (2.0 * M_PI) == doctest::Approx(spd_static(p, k)).epsilon(1e-3));
    }
}

TEST_CASE("simulate writes identical files for a fixed seed") {
    TempDir tmp;
    const auto path = tmp.path / "f.sstf";
    std::vector<std::string> args = {"simulate", "--n", "256", "--t-end", "1", "--seed", "7", "--out",
                                     path.string()};
    const auto a = run(args);
    REQUIRE(a.code == cli::kOk);
    const auto bin = slurp(path), side = slurp(path.string() + ".json"), summary = slurp(path.string() + ".summary.json");
    CHECK(bin.size() == 8 + 4 + 4 + 8 + 8 + 40 + 8 + 8 * 5 + 8 * 5 * 256);
    args.push_back("--threads");
    args.push_back("3");
    const auto b = run(args);
    REQUIRE(b.code == cli::kOk);
    CHECK(slurp(path) == bin);
    CHECK(slurp(path.string() + ".json") == side);
    CHECK(slurp(path.string() + ".summary.json") == summary);
    CHECK(a.out == b.out);

    const auto j = nlohmann::json::parse(summary);
    for (const char* key : {"sample_variance", "analytic_variance_grid", "analytic_variance_continuum",
                            "constraints_time_mean", "constraints_expected", "imag_residue", "warnings"})
        CHECK(j.contains(key));
    CHECK(j["analytic_variance_continuum"].get<double>() == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::abs(j["sample_variance"].get<double>() - 0.5) < 0.1);
}

TEST_CASE("simulate warns about the grid cutoff in d=2 and needs --out") {
    TempDir tmp;
    const auto path = tmp.path / "f2.sstf";
    const auto r = run({"simulate", "--d", "2", "--n", "16", "--t-end", "0", "--out", path.string()});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.err.find("grid cutoff") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(path.string() + ".summary.json"));
    CHECK(j["analytic_variance_continuum"].is_null());

    CHECK(run({"simulate", "--n", "256"}).code == cli::kInvalid);
    CHECK(run({"simulate", "--n", "100", "--out", path.string()}).code == cli::kInvalid);
    CHECK(run({"simulate", "--dt", "-1", "--out", path.string()}).code == cli::kInvalid);
}

TEST_CASE("verify detects a corrupted tolerance") {
    const auto r = run({"verify", "--only", "closed_d1_vs_quadrature", "--check-tol", "d1_rel=1e-15"});
    CHECK(r.code == cli::kVerifyFailed);
    const auto j = nlohmann::json::parse(r.out);
    CHECK_FALSE(j["passed"].get<bool>());
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0]["measured"].get<double>() > 1e-15);

    const auto ok = run({"verify", "--only", "closed_d1_vs_quadrature,limit_recovery"});
    CHECK(ok.code == cli::kOk);
    CHECK(nlohmann::json::parse(ok.out)["checks"].size() == 2);
}

TEST_CASE("verify oscillation with a curvature-dominated model") {
    const auto r = run({"verify", "--eta1", "-1", "--mu", "1", "--only", "oscillation"});
    CHECK(r.code == cli::kOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["checks"][0]["passed"].get<bool>());
    CHECK(j["checks"][0]["measured"].get<double>() < 0.0);
}

TEST_CASE("verify rejects unknown checks and tolerance keys") {
    CHECK(run({"verify", "--only", "nope"}).code == cli::kInvalid);
    CHECK(run({"verify", "--check-tol", "nope=1"}).code == cli::kInvalid);
    CHECK(run({"verify", "--check-tol", "d1_rel"}).code == cli::kInvalid);
}
