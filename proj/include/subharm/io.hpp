#pragma once

#include "subharm/evolve.hpp"
#include "subharm/linear_decay.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace subharm {

using Json = nlohmann::json;

/// Version stamped into every JSON document, CSV comment line and manifest.
inline constexpr int schema_version = 1;

Json profile_to_json(const WaveProfile& profile);
WaveProfile profile_from_json(const Json& doc);
/// Doubles are written with 17 significant digits, so save/load round-trips bit for bit.
void save_profile(const WaveProfile& profile, const std::filesystem::path& path);
WaveProfile load_profile(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);
void write_json(const Json& doc, const std::filesystem::path& path);

/// Shortest-safe text form of a double (%.17g).
std::string format_double(double x);

/// Columns of equal length; the first line is "# schema N", then the header.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Binary layout: int64 N, int64 m_x, int64 n, float64 t, then the real parts of the
/// N m_x by n values in row-major order, all little-endian host order.
void write_snapshot(const std::filesystem::path& path, const GridFunction& u, double t);
struct Snapshot {
    GridFunction u;
    double t = 0.0;
};
Snapshot read_snapshot(const std::filesystem::path& path);

std::uint64_t fnv1a(std::span<const unsigned char> bytes);
/// 16 hex digits of the FNV-1a hash of the file contents.
std::string file_digest(const std::filesystem::path& path);

struct RunManifest {
    std::string command;
    Json config;
    std::string tool_version;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::filesystem::path> outputs;
    double wall_seconds = 0.0;
    long steps = 0;
};

/// Writes dir/manifest.json with digests of every input and output.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

Json to_json(const DecayFit& fit);
Json to_json(const StabilityReport& report);
Json to_json(const SubharmonicGapReport& report, bool with_spectrum = false);
Json to_json(const SumBoundTable& table);
Json to_json(const CrossoverProbe& probe);
Json to_json(const ExperimentReport& report);
Json to_json(const LinearDecayStudy& study);

Json config_to_json(const SimulationConfig& config);
/// Overrides the fields present in doc; unknown keys raise ArgumentError.
SimulationConfig config_from_json(const Json& doc, SimulationConfig base = {});

}  // namespace subharm
