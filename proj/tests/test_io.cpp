#include "subharm/errors.hpp"
#include "subharm/io.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <random>
#include <string_view>

using namespace subharm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "subharm_test_io";
    fs::create_directories(dir);
    return dir / name;
}

std::uint64_t hash_text(std::string_view s) {
    return fnv1a({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Io, ProfileRoundTripIsBitExact) {
    WaveProfile p = analytic_rgl_profile(0.3, 8);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& c : p.coeffs)
        for (int l = 0; l < c.size(); ++l) c(l) += cplx{u(rng), u(rng)} * 1e-3 / 3.0;
    p.k = 1.0 / 3.0;
    const fs::path path = scratch("profile.json");
    save_profile(p, path);
    const WaveProfile q = load_profile(path);
    EXPECT_EQ(q.model.id(), p.model.id());
    EXPECT_EQ(q.model.params(), p.model.params());
    EXPECT_EQ(q.m_f, p.m_f);
    EXPECT_TRUE(same_bits(q.k, p.k));
    EXPECT_TRUE(same_bits(q.c, p.c));
    ASSERT_EQ(q.coeffs.size(), p.coeffs.size());
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
        for (int l = 0; l < p.coeffs[i].size(); ++l) {
            EXPECT_TRUE(same_bits(q.coeffs[i](l).real(), p.coeffs[i](l).real()));
            EXPECT_TRUE(same_bits(q.coeffs[i](l).imag(), p.coeffs[i](l).imag()));
        }
}

TEST(Io, MalformedProfileIsRejected) {
    Json doc = profile_to_json(analytic_rgl_profile(0.3, 4));
    doc["coeffs"][0]["re"].erase(0);
    EXPECT_THROW(profile_from_json(doc), ArgumentError);
    doc = profile_to_json(analytic_rgl_profile(0.3, 4));
    doc.erase("k");
    EXPECT_THROW(profile_from_json(doc), ArgumentError);
    EXPECT_THROW(load_profile(scratch("does_not_exist.json")), IOError);
}

TEST(Io, SnapshotRoundTrip) {
    Eigen::MatrixXd vals(3 * 5, 2);
    for (int i = 0; i < vals.rows(); ++i) {
        vals(i, 0) = std::sin(0.3 * i) / 7.0;
        vals(i, 1) = std::exp(-0.1 * i);
    }
    const GridFunction g = GridFunction::from_real(3, 5, vals);
    const fs::path path = scratch("snap.bin");
    write_snapshot(path, g, 2.5);
    EXPECT_EQ(fs::file_size(path), 3 * 8 + 8 + vals.size() * 8u);
    const Snapshot s = read_snapshot(path);
    EXPECT_EQ(s.u.N, 3);
    EXPECT_EQ(s.u.m_x, 5);
    EXPECT_EQ(s.t, 2.5);
    EXPECT_EQ(s.u.real(), vals);

    fs::resize_file(path, fs::file_size(path) - 8);
    EXPECT_THROW(read_snapshot(path), IOError);
}

TEST(Io, CsvKeepsSeventeenDigits) {
    const double third = 1.0 / 3.0;
    EXPECT_EQ(format_double(third), "0.33333333333333331");
    EXPECT_EQ(std::stod(format_double(third)), third);
    const fs::path path = scratch("table.csv");
    write_csv(path, {"t", "y"}, {{0.0, 0.1}, {third, 2.0}});
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# schema 1");
    std::getline(in, line);
    EXPECT_EQ(line, "t,y");
    std::getline(in, line);
    EXPECT_EQ(line, "0,0.33333333333333331");
    std::getline(in, line);
    EXPECT_EQ(line, "0.10000000000000001,2");
    EXPECT_THROW(write_csv(path, {"t"}, {{0.0}, {1.0}}), ArgumentError);
    EXPECT_THROW(write_csv(path, {"t", "y"}, {{0.0}, {1.0, 2.0}}), ArgumentError);
}

TEST(Io, FnvKnownVectors) {
    EXPECT_EQ(hash_text(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(hash_text("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(hash_text("foobar"), 0x85944171f73967e8ULL);
    const fs::path path = scratch("digest.txt");
    std::ofstream(path) << "foobar";
    EXPECT_EQ(file_digest(path), "85944171f73967e8");
}

TEST(Io, ConfigRoundTripAndUnknownKeys) {
    SimulationConfig c;
    c.N = 8;
    c.dt = 0.025;
    c.scheme = Scheme::ETDRK4Bloch;
    c.extraction = ExtractionMode::Both;
    c.perturbation.shape = "localized";
    c.perturbation.seed = 42;
    c.chi.t1 = 2.0;
    const SimulationConfig d = config_from_json(config_to_json(c));
    EXPECT_EQ(d.N, 8);
    EXPECT_EQ(d.dt, 0.025);
    EXPECT_EQ(d.scheme, Scheme::ETDRK4Bloch);
    EXPECT_EQ(d.extraction, ExtractionMode::Both);
    EXPECT_EQ(d.perturbation.shape, "localized");
    EXPECT_EQ(d.perturbation.seed, 42u);
    EXPECT_EQ(d.chi.t1, 2.0);
    EXPECT_EQ(config_to_json(d), config_to_json(c));

    EXPECT_THROW(config_from_json(Json{{"N", 8}, {"typo", 1}}), ArgumentError);
    EXPECT_THROW(config_from_json(Json{{"perturbation", {{"sead", 1}}}}), ArgumentError);
    EXPECT_THROW(config_from_json(Json{{"N", "eight"}}), ArgumentError);
    EXPECT_EQ(config_from_json(Json{{"N", 4}}).dt, SimulationConfig{}.dt);
}

TEST(Io, ManifestListsDigests) {
    const fs::path dir = scratch("run");
    fs::create_directories(dir);
    const fs::path out = dir / "out.txt";
    std::ofstream(out) << "a";
    RunManifest m;
    m.command = "test";
    m.config = Json{{"N", 4}};
    m.tool_version = "0";
    m.outputs = {out};
    m.steps = 3;
    write_manifest(m, dir);
    const Json doc = read_json(dir / "manifest.json");
    EXPECT_EQ(doc["schema"], schema_version);
    EXPECT_EQ(doc["outputs"][0]["fnv1a"], "af63dc4c8601ec8c");
    EXPECT_EQ(doc["steps"], 3);
}
