#include "cli.hpp"

#include "subharm/io.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace subharm;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    static fs::path dir() {
        static const fs::path d = [] {
            const fs::path p = fs::temp_directory_path() / "subharm_test_cli";
            fs::create_directories(p);
            return p;
        }();
        return d;
    }
    static std::string at(const std::string& name) { return (dir() / name).string(); }

    static std::string profile() {
        static const std::string path = [] {
            const std::string p = at("p03/profile.json");
            EXPECT_EQ(cli::run({"profile", "--model", "rgl", "--param", "q=0.3", "--modes", "8", "--out", p}), 0);
            return p;
        }();
        return path;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

}  // namespace

TEST_F(Cli, ProfileWritesFileAndManifest) {
    const Json doc = read_json(profile());
    EXPECT_EQ(doc["kind"], "profile");
    EXPECT_LT(doc["residual"].get<double>(), 1e-10);
    const Json manifest = read_json(dir() / "p03" / "manifest.json");
    EXPECT_EQ(manifest["command"], "profile");
    EXPECT_EQ(manifest["outputs"][0]["fnv1a"], file_digest(profile()));
}

TEST_F(Cli, ReRunIsByteIdentical) {
    const std::string a = at("rerun_a/profile.json"), b = at("rerun_b/profile.json");
    for (const auto& out : {a, b})
        ASSERT_EQ(cli::run({"profile", "--model", "rgl", "--param", "q=0.25", "--modes", "8", "--out", out}), 0);
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(cli::run({}), cli::exit_usage);
    EXPECT_EQ(cli::run({"profile", "--param", "q=0.3"}), cli::exit_usage);
    EXPECT_EQ(cli::run({"profile", "--model", "rgl", "--param", "q"}), cli::exit_usage);
    EXPECT_EQ(cli::run({"spectrum", "--profile", profile(), "--scan", "0"}), cli::exit_usage);
    EXPECT_EQ(cli::run({"gap", "--profile", profile(), "--N", "0"}), cli::exit_usage);
    EXPECT_EQ(cli::run({"sum-bounds", "--d", "0"}), cli::exit_usage);
    EXPECT_EQ(cli::run({"simulate", "--extract", "sideways"}), cli::exit_usage);
}

TEST_F(Cli, ValidationErrors) {
    EXPECT_EQ(cli::run({"profile", "--model", "rgl", "--param", "q=1.5"}), cli::exit_validation);
    EXPECT_EQ(cli::run({"linear-decay", "--profile", profile(), "--N", "16", "--tmax", "5", "--out-dir", at("ld")}),
              cli::exit_validation);
    const std::string config = at("typo.json");
    std::ofstream(config) << R"({"N": 4, "dt_max": 1})";
    EXPECT_EQ(cli::run({"simulate", "--profile", profile(), "--config", config, "--out-dir", at("typo")}),
              cli::exit_validation);
}

TEST_F(Cli, IoErrors) {
    EXPECT_EQ(cli::run({"spectrum", "--profile", at("missing.json")}), cli::exit_io);
    const std::string broken = at("broken.json");
    std::ofstream(broken) << "{ not json";
    EXPECT_EQ(cli::run({"gap", "--profile", broken}), cli::exit_io);
}

TEST_F(Cli, SolverFailure) {
    EXPECT_EQ(cli::run({"profile", "--model", "brusselator", "--modes", "8", "--max-iter", "1", "--out", at("br.json")}),
              cli::exit_solver);
}

TEST_F(Cli, GapTable) {
    ASSERT_EQ(cli::run({"gap", "--profile", profile(), "--N", "1,2,4", "--out-dir", at("gap")}), 0);
    const Json doc = read_json(dir() / "gap" / "gap.json");
    ASSERT_EQ(doc["reports"].size(), 3u);
    double previous = INFINITY;
    for (const auto& r : doc["reports"]) {
        EXPECT_LE(r["delta_N"].get<double>(), previous);
        previous = r["delta_N"].get<double>();
    }
}

TEST_F(Cli, ZeroPerturbationGivesZeroTrace) {
    const std::string config = at("zero.json");
    std::ofstream(config) << R"({"N": 4, "dt": 0.05, "t_max": 5, "scheme": "etdrk4-bloch",
                                 "perturbation": {"amplitude": 0.0}})";
    ASSERT_EQ(cli::run({"simulate", "--profile", profile(), "--config", config, "--out-dir", at("zero")}), 0);
    const Json report = read_json(dir() / "zero" / "report.json");
    EXPECT_EQ(report["trace_sup"], 0.0);
    ASSERT_EQ(report["checks"].size(), 1u);
    EXPECT_TRUE(report["checks"][0]["pass"].get<bool>());
    EXPECT_TRUE(fs::exists(dir() / "zero" / "snapshots" / "u_00000.bin"));
    const Json manifest = read_json(dir() / "zero" / "manifest.json");
    EXPECT_EQ(manifest["steps"], 100);
    EXPECT_EQ(manifest["inputs"].size(), 2u);
}
