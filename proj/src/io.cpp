#include "subharm/io.hpp"

#include "subharm/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

namespace subharm {

namespace fs = std::filesystem;

namespace {

// JSON has no infinity or NaN; null stands for both
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class T>
void take(const Json& doc, const char* key, T& out) {
    if (auto it = doc.find(key); it != doc.end()) out = it->get<T>();
}

void check_keys(const Json& doc, const std::set<std::string>& allowed, const std::string& where) {
    if (!doc.is_object()) throw ArgumentError(where + " must be an object");
    for (const auto& [key, value] : doc.items())
        if (!allowed.count(key)) throw ArgumentError("unknown key '" + key + "' in " + where);
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

Json profile_to_json(const WaveProfile& p) {
    Json coeffs = Json::array();
    for (const auto& comp : p.coeffs) {
        Json re = Json::array(), im = Json::array();
        for (int l = 0; l < comp.size(); ++l) {
            re.push_back(comp(l).real());
            im.push_back(comp(l).imag());
        }
        coeffs.push_back({{"re", re}, {"im", im}});
    }
    return {{"schema", schema_version},
            {"kind", "profile"},
            {"model", p.model.id()},
            {"params", p.model.params()},
            {"k", p.k},
            {"c", p.c},
            {"m_f", p.m_f},
            {"residual", p.residual_norm},
            {"coeffs", coeffs}};
}

WaveProfile profile_from_json(const Json& doc) {
    try {
        if (doc.at("kind") != "profile") throw ArgumentError("document is not a profile");
        const ReactionModel model = ReactionModel::from_id(doc.at("model").get<std::string>(),
                                                           doc.at("params").get<ParamMap>());
        WaveProfile p{model, 0.0, 0.0, 0, {}, 0.0};
        p.k = doc.at("k").get<double>();
        p.c = doc.at("c").get<double>();
        p.m_f = doc.at("m_f").get<int>();
        p.residual_norm = doc.value("residual", 0.0);
        const Json& coeffs = doc.at("coeffs");
        if (int(coeffs.size()) != model.n()) throw ArgumentError("profile has the wrong number of components");
        for (const Json& comp : coeffs) {
            const auto re = comp.at("re").get<std::vector<double>>();
            const auto im = comp.at("im").get<std::vector<double>>();
            if (int(re.size()) != p.modes() || im.size() != re.size())
                throw ArgumentError("profile coefficient vectors must have 2 m_f + 1 entries");
            Eigen::VectorXcd v(re.size());
            for (std::size_t l = 0; l < re.size(); ++l) v(l) = {re[l], im[l]};
            p.coeffs.push_back(v);
        }
        return p;
    } catch (const Json::exception& e) {
        throw ArgumentError(std::string("malformed profile document: ") + e.what());
    }
}

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw IOError(path.string() + ": " + e.what());
    }
}

void write_json(const Json& doc, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

void save_profile(const WaveProfile& profile, const fs::path& path) { write_json(profile_to_json(profile), path); }

WaveProfile load_profile(const fs::path& path) {
    try {
        return profile_from_json(read_json(path));
    } catch (const ArgumentError& e) {
        throw IOError(path.string() + ": " + e.what());
    }
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw ArgumentError("CSV header and columns differ in count");
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ArgumentError("CSV columns differ in length");
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path.string());
    out << "# schema " << schema_version << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << format_double(columns[i][r]);
        out << '\n';
    }
}

void write_snapshot(const fs::path& path, const GridFunction& u, double t) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot write " + path.string());
    const std::int64_t head[3] = {u.N, u.m_x, u.n()};
    out.write(reinterpret_cast<const char*>(head), sizeof head);
    out.write(reinterpret_cast<const char*>(&t), sizeof t);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> values = u.real();
    out.write(reinterpret_cast<const char*>(values.data()), std::streamsize(values.size() * sizeof(double)));
}

Snapshot read_snapshot(const fs::path& path) {
    const auto bytes = read_bytes(path);
    constexpr std::size_t head_size = 3 * sizeof(std::int64_t) + sizeof(double);
    if (bytes.size() < head_size) throw IOError(path.string() + ": truncated snapshot header");
    std::int64_t head[3];
    double t;
    std::memcpy(head, bytes.data(), sizeof head);
    std::memcpy(&t, bytes.data() + sizeof head, sizeof t);
    const std::int64_t N = head[0], m_x = head[1], n = head[2];
    if (N < 1 || m_x < 1 || n < 1 || N * m_x * n * std::int64_t(sizeof(double)) + std::int64_t(head_size) != std::int64_t(bytes.size()))
        throw IOError(path.string() + ": snapshot size does not match its header");
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> values(N * m_x, n);
    std::memcpy(values.data(), bytes.data() + head_size, values.size() * sizeof(double));
    return {GridFunction::from_real(int(N), int(m_x), values), t};
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_digest(const fs::path& path) {
    const auto bytes = read_bytes(path);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

void write_manifest(const RunManifest& m, const fs::path& dir) {
    Json inputs = Json::array(), outputs = Json::array();
    for (const auto& p : m.inputs) inputs.push_back({{"path", p.string()}, {"fnv1a", file_digest(p)}});
    for (const auto& p : m.outputs) outputs.push_back({{"path", p.string()}, {"fnv1a", file_digest(p)}});
    const Json doc = {{"schema", schema_version},
                      {"kind", "manifest"},
                      {"command", m.command},
                      {"tool_version", m.tool_version},
                      {"config", m.config},
                      {"inputs", inputs},
                      {"outputs", outputs},
                      {"wall_seconds", m.wall_seconds},
                      {"steps", m.steps}};
    write_json(doc, dir / "manifest.json");
}

Json to_json(const DecayFit& f) {
    return {{"exponent", number(f.exponent)},
            {"constant", number(f.constant)},
            {"claimed_exponent", f.claimed_exponent},
            {"envelope_constant", number(f.envelope_constant)},
            {"t_lo", f.t_lo},
            {"t_hi", f.t_hi},
            {"samples", f.samples},
            {"super_polynomial", f.super_polynomial}};
}

Json to_json(const StabilityReport& r) {
    Json delta0 = Json::array();
    for (const auto& [xi, d] : r.delta_0) delta0.push_back({xi, number(d)});
    return {{"schema", schema_version},
            {"kind", "stability"},
            {"verdict", r.verdict},
            {"spectral_ok", r.spectral_ok},
            {"quadratic_ok", r.quadratic_ok},
            {"simple_zero_ok", r.simple_zero_ok},
            {"theta", number(r.theta)},
            {"xi_1", number(r.xi_1)},
            {"delta_1", number(r.delta_1)},
            {"gap_at_zero", number(r.gap_at_zero)},
            {"zero_simplicity", number(r.zero_simplicity)},
            {"zero_angle", number(r.zero_angle)},
            {"delta_0", delta0},
            {"details", r.details},
            {"bloch_modes", r.options.m},
            {"scan", r.options.scan}};
}

Json to_json(const SubharmonicGapReport& r, bool with_spectrum) {
    Json doc = {{"N", r.N}, {"delta_N", number(r.delta_N)}, {"attaining_xi", r.attaining_xi}};
    if (with_spectrum) {
        Json s = Json::array();
        for (const auto& e : r.spectrum)
            s.push_back({{"xi", e.xi}, {"re", e.value.real()}, {"im", e.value.imag()}, {"critical", e.critical}});
        doc["spectrum"] = s;
    }
    return doc;
}

Json to_json(const SumBoundTable& t) {
    Json cmin = Json::array();
    for (const auto& [N, c] : t.c_min) cmin.push_back({{"N", N}, {"c_min", number(c)}});
    return {{"c_min", cmin},
            {"c_global", number(t.c_global)},
            {"c_continuum", number(t.c_continuum)},
            {"ratio", number(t.c_global / t.c_continuum)}};
}

Json to_json(const CrossoverProbe& p) {
    return {{"N", p.N},
            {"r", p.r},
            {"degenerate", p.degenerate},
            {"t_star", number(p.t_star)},
            {"late_rate", number(p.late_rate)},
            {"expected_rate", number(p.expected_rate)},
            {"t_max", p.t_max}};
}

Json to_json(const ExperimentReport& r) {
    Json doc = {{"schema", schema_version},
                {"kind", "experiment"},
                {"E0", r.E0},
                {"delta_N", r.delta_N},
                {"xi_1", r.xi_1},
                {"verdict", r.verdict},
                {"steps", r.steps},
                {"zeta_10", number(r.zeta_10)},
                {"zeta_max", number(r.zeta_max)},
                {"gamma_linear", r.gamma_linear},
                {"damping_constant_half_gap", number(r.damping_constant_half_gap)},
                {"extraction_gap", number(r.extraction_gap)},
                {"trace_sup", number(r.trace_sup)},
                {"notes", r.notes}};
    if (r.composite_fit) doc["composite_fit"] = to_json(*r.composite_fit);
    if (r.gradient_fit) doc["gradient_fit"] = to_json(*r.gradient_fit);
    if (r.phase) {
        doc["phase"] = {{"gamma_inf", r.phase->gamma_inf},
                        {"gamma_t_fit", to_json(r.phase->gamma_t_fit)},
                        {"gamma_gap_fit", to_json(r.phase->gamma_gap_fit)},
                        {"sigma_inf", r.phase->sigma_inf},
                        {"sigma_gap", r.phase->sigma_gap}};
    }
    if (r.crossover) {
        doc["crossover"] = {{"t_cross", r.crossover->t_cross},
                            {"late_rate", r.crossover->late_rate},
                            {"power_fit", to_json(r.crossover->power_fit)}};
    }
    if (r.damping) {
        Json consts = Json::array();
        for (double c : r.damping->constant) consts.push_back(number(c));
        doc["damping"] = {{"theta", r.damping->theta},
                          {"constant", consts},
                          {"best_theta", r.damping->best_theta},
                          {"best_constant", number(r.damping->best_constant)},
                          {"violations", r.damping->violations}};
    }
    Json checks = Json::array();
    for (const auto& c : experiment_checks(r))
        checks.push_back({{"name", c.name}, {"value", number(c.value)}, {"bound", c.bound}, {"pass", c.pass}});
    doc["checks"] = checks;
    return doc;
}

Json to_json(const LinearDecayStudy& s) {
    return {{"N", s.N},
            {"l", s.l},
            {"m", s.m},
            {"sp", to_json(s.fit_sp)},
            {"sp_x", to_json(s.fit_sp_x)},
            {"sp_t", to_json(s.fit_sp_t)},
            {"custom", to_json(s.fit_custom)},
            {"stilde", to_json(s.fit_stilde)}};
}

Json config_to_json(const SimulationConfig& c) {
    const auto& p = c.perturbation;
    return {{"N", c.N},
            {"m_x", c.m_x},
            {"dt", c.dt},
            {"t_max", c.t_max},
            {"scheme", scheme_name(c.scheme)},
            {"K", c.K},
            {"epsilon", c.epsilon},
            {"snapshot", {{"stride", c.snapshot_stride}, {"uniform_until", c.snapshot_uniform_until}, {"growth", c.snapshot_growth}}},
            {"perturbation",
             {{"shape", p.shape},
              {"amplitude", p.amplitude},
              {"seed", p.seed},
              {"harmonics", p.harmonics},
              {"width", p.width},
              {"center", p.center},
              {"normalization", p.normalization}}},
            {"extraction",
             {{"mode", extraction_name(c.extraction)},
              {"cutoff", c.cutoff_xi1},
              {"chi", {{"t0", c.chi.t0}, {"t1", c.chi.t1}}},
              {"tol", c.duhamel_tol},
              {"max_iter", c.duhamel_max_iter}}},
            {"stability", {{"modes", c.stability_modes}, {"scan", c.stability_scan}}}};
}

SimulationConfig config_from_json(const Json& doc, SimulationConfig c) {
    try {
        check_keys(doc,
                   {"schema", "model", "params", "modes", "profile", "output_dir", "N", "m_x", "dt", "t_max", "scheme",
                    "K", "epsilon", "snapshot", "perturbation", "extraction", "stability"},
                   "config");
        take(doc, "N", c.N);
        take(doc, "m_x", c.m_x);
        take(doc, "dt", c.dt);
        take(doc, "t_max", c.t_max);
        take(doc, "K", c.K);
        take(doc, "epsilon", c.epsilon);
        if (doc.contains("scheme")) c.scheme = parse_scheme(doc["scheme"].get<std::string>());
        if (doc.contains("snapshot")) {
            const Json& s = doc["snapshot"];
            check_keys(s, {"stride", "uniform_until", "growth"}, "snapshot");
            take(s, "stride", c.snapshot_stride);
            take(s, "uniform_until", c.snapshot_uniform_until);
            take(s, "growth", c.snapshot_growth);
        }
        if (doc.contains("perturbation")) {
            const Json& s = doc["perturbation"];
            check_keys(s, {"shape", "amplitude", "seed", "harmonics", "width", "center", "normalization"}, "perturbation");
            auto& p = c.perturbation;
            take(s, "shape", p.shape);
            take(s, "amplitude", p.amplitude);
            take(s, "seed", p.seed);
            take(s, "harmonics", p.harmonics);
            take(s, "width", p.width);
            take(s, "center", p.center);
            take(s, "normalization", p.normalization);
        }
        if (doc.contains("extraction")) {
            const Json& s = doc["extraction"];
            check_keys(s, {"mode", "cutoff", "chi", "tol", "max_iter"}, "extraction");
            if (s.contains("mode")) c.extraction = parse_extraction(s["mode"].get<std::string>());
            take(s, "cutoff", c.cutoff_xi1);
            take(s, "tol", c.duhamel_tol);
            take(s, "max_iter", c.duhamel_max_iter);
            if (s.contains("chi")) {
                check_keys(s["chi"], {"t0", "t1"}, "extraction.chi");
                take(s["chi"], "t0", c.chi.t0);
                take(s["chi"], "t1", c.chi.t1);
            }
        }
        if (doc.contains("stability")) {
            const Json& s = doc["stability"];
            check_keys(s, {"modes", "scan"}, "stability");
            take(s, "modes", c.stability_modes);
            take(s, "scan", c.stability_scan);
        }
    } catch (const Json::exception& e) {
        throw ArgumentError(std::string("malformed config: ") + e.what());
    }
    return c;
}

}  // namespace subharm
