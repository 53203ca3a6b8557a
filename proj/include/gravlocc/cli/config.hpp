#pragma once

// Run configuration: one JSON document (comments allowed).

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gravlocc/config.hpp"
#include "gravlocc/experiment.hpp"
#include "gravlocc/geometry.hpp"

namespace gravlocc::cli {

using nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OscillatorRecord {
    std::array<double, 3> center{};
    std::array<double, 3> axis{};
    double mass = 0.0;
    std::optional<double> omega;
    friend bool operator==(const OscillatorRecord&, const OscillatorRecord&) = default;
};

struct GeometryConfig {
    enum class Kind { Pair, Line, Pairs, Oscillators, Coupling, File };
    Kind kind = Kind::Pair;
    // presets
    int n = 0;            // line
    int count = 0;        // pairs
    double d = 0.0;       // m
    double m = 0.0;       // kg
    double omega = 0.0;   // rad/s (Hz if frequency_is_hz)
    double spacing = 0.0; // pairs: distance between pair axes, m
    bool frequency_is_hz = false;
    // inline oscillators
    std::vector<OscillatorRecord> oscillators;
    std::optional<double> frequency;
    // inline coupling matrix
    std::vector<std::vector<double>> coupling;
    std::optional<double> gamma;
    // file holding {"oscillators": [...], "frequency": ...}
    std::string file;
    friend bool operator==(const GeometryConfig&, const GeometryConfig&) = default;
};

struct TimeGrid {
    enum class Unit { Seconds, GammaT };
    enum class Scale { Linear, Log };
    Unit unit = Unit::Seconds;
    Scale scale = Scale::Linear;
    double min = 0.0;
    double max = 0.0;
    int steps = 1;
    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

    std::vector<double> points() const {
        std::vector<double> out;
        for (int i = 0; i < steps; ++i) {
            const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
            out.push_back(scale == Scale::Linear ? min + f * (max - min)
                                                 : std::exp(std::log(min) + f * (std::log(max) - std::log(min))));
        }
        if (steps > 1) out.back() = max;
        return out;
    }
};

struct ExperimentConfig {
    enum class Kind { Oscillators, Pendulum };
    Kind kind = Kind::Oscillators;
    ExperimentParams params;
    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct OutputConfig {
    std::string path;          // empty: stdout
    std::string format = "csv";  // csv | table
    int precision = 17;
    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

inline constexpr std::uint64_t default_seed = 20240611;

struct RunConfig {
    std::optional<GeometryConfig> geometry;
    std::optional<double> lambda;
    std::optional<TimeGrid> time;
    std::string subset_policy = "auto";
    std::uint64_t seed = default_seed;
    double margin = 0.1;
    std::optional<ExperimentConfig> experiment;
    OutputConfig output;
    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

template <typename T>
std::optional<T> optional(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return required<T>(j, key, where);
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

inline std::array<double, 3> vec3(const json& j, const char* key, const std::string& where) {
    const auto v = required<std::vector<double>>(j, key, where);
    if (v.size() != 3) throw ConfigError(where + "." + key + ": expected 3 components");
    return {v[0], v[1], v[2]};
}

// Field table for ExperimentParams: JSON key <-> member.
struct ParamField {
    const char* key;
    std::optional<double> ExperimentParams::*member;
};
inline const std::vector<ParamField>& param_fields() {
    using P = ExperimentParams;
    static const std::vector<ParamField> f = {
        {"n", &P::n},           {"m", &P::m},
        {"d", &P::d},           {"R", &P::R},
        {"omega", &P::omega},   {"delta_omega", &P::delta_omega},
        {"lambda", &P::lambda}, {"t", &P::t},
        {"target_fidelity", &P::target_fidelity},
        {"epsilon", &P::epsilon}, {"rho", &P::rho},
        {"mu", &P::mu},         {"delta_t", &P::delta_t},
        {"P2", &P::P2},         {"delta", &P::delta},
        {"P", &P::P},           {"T_env", &P::T_env},
        {"alpha_amp", &P::alpha_amp}, {"chi", &P::chi},
        {"B", &P::B},           {"dBdx", &P::dBdx},
        {"E", &P::E},           {"dEdx", &P::dEdx},
        {"a", &P::a},           {"omega_I", &P::omega_I},
        {"tau", &P::tau},       {"Q", &P::Q},
        {"T_th", &P::T_th},     {"d_s", &P::d_s},
        {"P_circ", &P::P_circ}, {"omega_L", &P::omega_L},
        {"L_cav", &P::L_cav},   {"kappa", &P::kappa},
    };
    return f;
}

inline std::vector<OscillatorRecord> parse_oscillators(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
    std::vector<OscillatorRecord> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        reject_unknown(j[i], {"center", "axis", "mass", "omega"}, w);
        out.push_back({vec3(j[i], "center", w), vec3(j[i], "axis", w), required<double>(j[i], "mass", w),
                       optional<double>(j[i], "omega", w)});
    }
    return out;
}

inline json emit_oscillators(const std::vector<OscillatorRecord>& osc) {
    json arr = json::array();
    for (const auto& o : osc) {
        json r = {{"center", o.center}, {"axis", o.axis}, {"mass", o.mass}};
        if (o.omega) r["omega"] = *o.omega;
        arr.push_back(r);
    }
    return arr;
}

}  // namespace detail

inline GeometryConfig parse_geometry(const json& j) {
    const std::string w = "geometry";
    detail::reject_unknown(j, {"preset", "n", "count", "d", "m", "omega", "spacing", "frequency_is_hz", "oscillators",
                               "frequency", "coupling", "gamma", "file"},
                           w);
    const int sources = int(j.contains("preset")) + int(j.contains("oscillators")) + int(j.contains("coupling")) +
                        int(j.contains("file"));
    if (sources != 1) throw ConfigError("geometry: exactly one of preset, oscillators, coupling, file is required");
    GeometryConfig g;
    g.frequency_is_hz = detail::optional<bool>(j, "frequency_is_hz", w).value_or(false);
    if (j.contains("preset")) {
        const auto preset = detail::required<std::string>(j, "preset", w);
        g.d = detail::required<double>(j, "d", w);
        g.m = detail::required<double>(j, "m", w);
        g.omega = detail::required<double>(j, "omega", w);
        if (!(g.d > 0.0 && g.m > 0.0 && g.omega > 0.0)) throw ConfigError("geometry: d, m, omega must be positive");
        if (preset == "pair") {
            g.kind = GeometryConfig::Kind::Pair;
        } else if (preset == "line") {
            g.kind = GeometryConfig::Kind::Line;
            g.n = detail::required<int>(j, "n", w);
            if (g.n < 2) throw ConfigError("geometry: line needs n >= 2");
        } else if (preset == "pairs") {
            g.kind = GeometryConfig::Kind::Pairs;
            g.count = detail::required<int>(j, "count", w);
            g.spacing = detail::optional<double>(j, "spacing", w).value_or(1e3 * g.d);
            if (g.count < 1 || !(g.spacing > 0.0)) throw ConfigError("geometry: pairs needs count >= 1, spacing > 0");
        } else {
            throw ConfigError("geometry: unknown preset '" + preset + "'");
        }
    } else if (j.contains("oscillators")) {
        g.kind = GeometryConfig::Kind::Oscillators;
        g.oscillators = detail::parse_oscillators(j.at("oscillators"), "geometry.oscillators");
        g.frequency = detail::optional<double>(j, "frequency", w);
    } else if (j.contains("coupling")) {
        g.kind = GeometryConfig::Kind::Coupling;
        g.coupling = detail::required<std::vector<std::vector<double>>>(j, "coupling", w);
        g.gamma = detail::optional<double>(j, "gamma", w);
        if (g.coupling.empty()) throw ConfigError("geometry.coupling: empty matrix");
        for (const auto& row : g.coupling)
            if (row.size() != g.coupling.size()) throw ConfigError("geometry.coupling: matrix is not square");
    } else {
        g.kind = GeometryConfig::Kind::File;
        g.file = detail::required<std::string>(j, "file", w);
    }
    return g;
}

inline json emit_geometry(const GeometryConfig& g) {
    json j;
    switch (g.kind) {
        case GeometryConfig::Kind::Pair:
        case GeometryConfig::Kind::Line:
        case GeometryConfig::Kind::Pairs:
            j["preset"] = g.kind == GeometryConfig::Kind::Pair ? "pair" : g.kind == GeometryConfig::Kind::Line ? "line" : "pairs";
            j["d"] = g.d;
            j["m"] = g.m;
            j["omega"] = g.omega;
            if (g.kind == GeometryConfig::Kind::Line) j["n"] = g.n;
            if (g.kind == GeometryConfig::Kind::Pairs) {
                j["count"] = g.count;
                j["spacing"] = g.spacing;
            }
            break;
        case GeometryConfig::Kind::Oscillators:
            j["oscillators"] = detail::emit_oscillators(g.oscillators);
            if (g.frequency) j["frequency"] = *g.frequency;
            break;
        case GeometryConfig::Kind::Coupling:
            j["coupling"] = g.coupling;
            if (g.gamma) j["gamma"] = *g.gamma;
            break;
        case GeometryConfig::Kind::File: j["file"] = g.file; break;
    }
    if (g.frequency_is_hz) j["frequency_is_hz"] = true;
    return j;
}

inline TimeGrid parse_time(const json& j) {
    const std::string w = "time";
    detail::reject_unknown(j, {"unit", "min", "max", "steps", "scale"}, w);
    TimeGrid t;
    const auto unit = detail::optional<std::string>(j, "unit", w).value_or("seconds");
    if (unit == "seconds") t.unit = TimeGrid::Unit::Seconds;
    else if (unit == "gamma_t") t.unit = TimeGrid::Unit::GammaT;
    else throw ConfigError("time.unit: expected 'seconds' or 'gamma_t'");
    const auto scale = detail::optional<std::string>(j, "scale", w).value_or("linear");
    if (scale == "linear") t.scale = TimeGrid::Scale::Linear;
    else if (scale == "log") t.scale = TimeGrid::Scale::Log;
    else throw ConfigError("time.scale: expected 'linear' or 'log'");
    t.min = detail::required<double>(j, "min", w);
    t.max = detail::optional<double>(j, "max", w).value_or(t.min);
    t.steps = detail::optional<int>(j, "steps", w).value_or(1);
    if (!(t.min >= 0.0) || !(t.max >= t.min) || t.steps < 1) throw ConfigError("time: need 0 <= min <= max, steps >= 1");
    if (t.steps == 1 && t.max != t.min) throw ConfigError("time: a single step needs min == max");
    if (t.scale == TimeGrid::Scale::Log && !(t.min > 0.0)) throw ConfigError("time: log scale needs min > 0");
    return t;
}

inline json emit_time(const TimeGrid& t) {
    return {{"unit", t.unit == TimeGrid::Unit::Seconds ? "seconds" : "gamma_t"},
            {"scale", t.scale == TimeGrid::Scale::Linear ? "linear" : "log"},
            {"min", t.min},
            {"max", t.max},
            {"steps", t.steps}};
}

inline ExperimentConfig parse_experiment(const json& j) {
    const std::string w = "experiment";
    if (!j.is_object()) throw ConfigError("experiment: expected an object");
    ExperimentConfig e;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "kind") {
            const auto kind = it.value().get<std::string>();
            if (kind == "oscillators") e.kind = ExperimentConfig::Kind::Oscillators;
            else if (kind == "pendulum") e.kind = ExperimentConfig::Kind::Pendulum;
            else throw ConfigError("experiment.kind: expected 'oscillators' or 'pendulum'");
            continue;
        }
        if (key == "omega_is_hz") {
            e.params.omega_is_hz = detail::required<bool>(j, "omega_is_hz", w);
            continue;
        }
        bool found = false;
        for (const auto& f : detail::param_fields())
            if (key == f.key) {
                e.params.*f.member = detail::required<double>(j, f.key, w);
                found = true;
            }
        if (!found) throw ConfigError("experiment: unknown key '" + key + "'");
    }
    return e;
}

inline json emit_experiment(const ExperimentConfig& e) {
    json j;
    j["kind"] = e.kind == ExperimentConfig::Kind::Oscillators ? "oscillators" : "pendulum";
    if (e.params.omega_is_hz) j["omega_is_hz"] = true;
    for (const auto& f : detail::param_fields())
        if (e.params.*f.member) j[f.key] = *(e.params.*f.member);
    return j;
}

inline RunConfig parse_config(const json& j) {
    detail::reject_unknown(j, {"geometry", "ensemble", "time", "subset_policy", "seed", "margin", "experiment", "output"},
                           "config");
    RunConfig c;
    if (j.contains("geometry")) c.geometry = parse_geometry(j.at("geometry"));
    if (j.contains("ensemble")) {
        detail::reject_unknown(j.at("ensemble"), {"lambda"}, "ensemble");
        c.lambda = detail::required<double>(j.at("ensemble"), "lambda", "ensemble");
        if (!(*c.lambda >= 0.0)) throw ConfigError("ensemble.lambda must be >= 0");
    }
    if (j.contains("time")) c.time = parse_time(j.at("time"));
    c.subset_policy = detail::optional<std::string>(j, "subset_policy", "config").value_or("auto");
    c.seed = detail::optional<std::uint64_t>(j, "seed", "config").value_or(default_seed);
    c.margin = detail::optional<double>(j, "margin", "config").value_or(0.1);
    if (!(c.margin > 0.0 && c.margin <= 1.0)) throw ConfigError("margin must lie in (0, 1]");
    if (j.contains("experiment")) c.experiment = parse_experiment(j.at("experiment"));
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::reject_unknown(o, {"path", "format", "precision"}, "output");
        c.output.path = detail::optional<std::string>(o, "path", "output").value_or("");
        c.output.format = detail::optional<std::string>(o, "format", "output").value_or("csv");
        c.output.precision = detail::optional<int>(o, "precision", "output").value_or(17);
        if (c.output.format != "csv" && c.output.format != "table")
            throw ConfigError("output.format: expected 'csv' or 'table'");
        if (c.output.precision < 1 || c.output.precision > 17) throw ConfigError("output.precision must be in 1..17");
    }
    return c;
}

inline json emit_config(const RunConfig& c) {
    json j;
    if (c.geometry) j["geometry"] = emit_geometry(*c.geometry);
    if (c.lambda) j["ensemble"] = {{"lambda", *c.lambda}};
    if (c.time) j["time"] = emit_time(*c.time);
    j["subset_policy"] = c.subset_policy;
    j["seed"] = c.seed;
    j["margin"] = c.margin;
    if (c.experiment) j["experiment"] = emit_experiment(*c.experiment);
    j["output"] = {{"path", c.output.path}, {"format", c.output.format}, {"precision", c.output.precision}};
    return j;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RunConfig load_config(const std::string& path) {
    return parse_config(parse_json_text(read_file(path), path));
}

// Resolves the geometry section into an array, or nullopt for an inline
// coupling matrix. Relative file paths resolve against base_dir.
inline std::optional<OscillatorArray> build_array(const GeometryConfig& g, const std::string& base_dir = "") {
    const double hz = g.frequency_is_hz ? 2.0 * std::numbers::pi : 1.0;
    auto from_records = [&](const std::vector<OscillatorRecord>& recs, std::optional<double> f) {
        std::vector<Oscillator> osc;
        for (const auto& r : recs) {
            std::optional<double> w;
            if (r.omega) w = *r.omega * hz;
            osc.push_back({Vec3(r.center[0], r.center[1], r.center[2]), Vec3(r.axis[0], r.axis[1], r.axis[2]), r.mass, w});
        }
        if (f) f = *f * hz;
        return OscillatorArray(std::move(osc), f);
    };
    switch (g.kind) {
        case GeometryConfig::Kind::Pair: return aligned_pair(g.d, g.m, g.omega * hz);
        case GeometryConfig::Kind::Line: return aligned_line(g.n, g.d, g.m, g.omega * hz);
        case GeometryConfig::Kind::Pairs: return disjoint_pairs(g.count, g.d, g.m, g.omega * hz, g.spacing);
        case GeometryConfig::Kind::Oscillators: return from_records(g.oscillators, g.frequency);
        case GeometryConfig::Kind::Coupling: return std::nullopt;
        case GeometryConfig::Kind::File: {
            const std::string path = (!base_dir.empty() && !g.file.empty() && g.file[0] != '/') ? base_dir + "/" + g.file : g.file;
            const json j = parse_json_text(read_file(path), path);
            detail::reject_unknown(j, {"oscillators", "frequency"}, path);
            return from_records(detail::parse_oscillators(j.at("oscillators"), path + ".oscillators"),
                                detail::optional<double>(j, "frequency", path));
        }
    }
    return std::nullopt;
}

inline CouplingMatrix build_coupling(const GeometryConfig& g, const std::string& base_dir = "") {
    if (g.kind == GeometryConfig::Kind::Coupling) {
        const int n = static_cast<int>(g.coupling.size());
        RMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) m(i, k) = g.coupling[i][k];
        return coupling_from_matrix(m, g.gamma);
    }
    return build_coupling_matrix(*build_array(g, base_dir));
}

}  // namespace gravlocc::cli
