// Copyright 2026 The gdl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// config_io.hpp - run configuration (JSON), reports and manifests
//
// Every field has a default; unknown keys are rejected with their path.
// Numeric payloads go to report.json and series CSV files; the timestamp and
// wall time live only in manifest.json.

#pragma once

#include <sodium.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gdl/experiments.hpp"

namespace gdl {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

struct RunConfig {
    struct System {
        std::string preset = "random_hermitian";
        int n_qubits = 1;
        SystemParams params{1.0, 0.0, 1.0, 0.5, 0.5};
        unsigned long long seed = 3;
        std::string couplings = "random:2";
    } system;
    double beta = 1.0;
    double sigma = 2.0;
    double alpha = 0.05;
    std::vector<double> alphas{0.02, 0.04, 0.08, 0.16};
    struct Bath {
        std::string variant = "frequency_sampled";
        std::string channel_source = "lindblad_composed";
    } bath;
    struct Time {
        std::string law = "mu";
        double T0 = 0.0;  // 0: smallest admissible value for alpha_min
        double T = 0.0;   // fixed law; 0: use T0
        double alpha_min = 0.02;
        int n_T_nodes = 16;
    } time;
    struct Quadrature {
        std::string rule = "composite_legendre";
        int n_omega_nodes = 12;
        double width_stds = 8.5;
        int steps_per_unit_time = 64;
        std::string integrator = "midpoint";
        std::string tau_method = "closed_form";
        double tau_max_sigmas = 16.0;
        double tau_tol = 1e-12;
    } quadrature;
    struct Experiment {
        double eps = 1e-3;
        std::vector<double> sigmas{2.0, 4.0, 8.0, 16.0};
        double h_min = 0.005, h_max = 2.0, h_ratio = 1.25;
        int contraction_dirs = 50;
        unsigned long long probe_seed = 7;
    } experiment;
};

namespace detail {

class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        const json& v = j_.at(key);
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw ConfigError("expected a number");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) throw ConfigError("expected an integer");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw ConfigError("expected a string");
            }
            out = v.get<T>();
        } catch (const std::exception& e) {
            throw ConfigError(sub(key) + ": " + e.what());
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(sub(it.key()) + ": unknown key");
    }

    std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string where() const { return path_.empty() ? "<root>" : path_; }
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) throw ConfigError(path + ": " + what);
}

} // namespace detail

inline void validate(const RunConfig& c) {
    using detail::require;
    require(c.system.n_qubits >= 1, "system.n_qubits", "must be at least 1");
    require(c.system.preset == "single_qubit_z" || c.system.preset == "tfim_chain" || c.system.preset == "random_hermitian",
            "system.preset", "unknown preset");
    require(c.beta > 0.0, "beta", "must be positive");
    require(c.sigma > 0.0, "sigma", "must be positive");
    require(c.alpha >= 0.0, "alpha", "must be nonnegative");
    for (double a : c.alphas) require(a > 0.0, "alphas", "entries must be positive");
    require(c.bath.variant == "frequency_sampled" || c.bath.variant == "gaussian_field", "bath.variant",
            "must be frequency_sampled or gaussian_field");
    require(c.bath.channel_source == "exact_bath" || c.bath.channel_source == "lindblad_composed",
            "bath.channel_source", "must be exact_bath or lindblad_composed");
    require(c.time.law == "mu" || c.time.law == "fixed", "time.law", "must be mu or fixed");
    require(c.time.T0 >= 0.0, "time.T0", "must be nonnegative");
    require(c.time.T >= 0.0, "time.T", "must be nonnegative");
    require(c.time.alpha_min > 0.0, "time.alpha_min", "must be positive");
    require(c.time.n_T_nodes >= 3, "time.n_T_nodes", "must be at least 3");
    require(c.quadrature.rule == "composite_legendre" || c.quadrature.rule == "gauss_hermite", "quadrature.rule",
            "must be composite_legendre or gauss_hermite");
    require(c.quadrature.n_omega_nodes >= 3, "quadrature.n_omega_nodes", "must be at least 3");
    require(c.quadrature.width_stds > 0.0, "quadrature.width_stds", "must be positive");
    require(c.quadrature.steps_per_unit_time >= 1, "quadrature.steps_per_unit_time", "must be positive");
    require(c.quadrature.integrator == "midpoint" || c.quadrature.integrator == "magnus4", "quadrature.integrator",
            "must be midpoint or magnus4");
    require(c.quadrature.tau_method == "closed_form" || c.quadrature.tau_method == "adaptive",
            "quadrature.tau_method", "must be closed_form or adaptive");
    require(c.quadrature.tau_max_sigmas > 0.0, "quadrature.tau_max_sigmas", "must be positive");
    require(c.quadrature.tau_tol > 0.0, "quadrature.tau_tol", "must be positive");
    require(c.experiment.eps > 0.0, "experiment.eps", "must be positive");
    for (double s : c.experiment.sigmas) require(s > 0.0, "experiment.sigmas", "entries must be positive");
    require(c.experiment.h_min > 0.0 && c.experiment.h_max >= c.experiment.h_min, "experiment.h_min",
            "need 0 < h_min <= h_max");
    require(c.experiment.h_ratio > 1.0, "experiment.h_ratio", "must exceed 1");
    require(c.experiment.contraction_dirs >= 1, "experiment.contraction_dirs", "must be positive");
}

inline RunConfig config_from_json(const json& j) {
    RunConfig c;
    detail::ObjectReader root(j, "");
    if (const json* s = root.child("system")) {
        detail::ObjectReader r(*s, "system");
        r.get("preset", c.system.preset);
        r.get("n_qubits", c.system.n_qubits);
        r.get("seed", c.system.seed);
        r.get("couplings", c.system.couplings);
        if (const json* p = r.child("params")) {
            detail::ObjectReader q(*p, "system.params");
            q.get("hz", c.system.params.hz);
            q.get("hx", c.system.params.hx);
            q.get("J", c.system.params.J);
            q.get("g", c.system.params.g);
            q.get("scale", c.system.params.scale);
            q.finish();
        }
        r.finish();
    }
    root.get("beta", c.beta);
    root.get("sigma", c.sigma);
    root.get("alpha", c.alpha);
    root.get("alphas", c.alphas);
    if (const json* b = root.child("bath")) {
        detail::ObjectReader r(*b, "bath");
        r.get("variant", c.bath.variant);
        r.get("channel_source", c.bath.channel_source);
        r.finish();
    }
    if (const json* t = root.child("time")) {
        detail::ObjectReader r(*t, "time");
        r.get("law", c.time.law);
        r.get("T0", c.time.T0);
        r.get("T", c.time.T);
        r.get("alpha_min", c.time.alpha_min);
        r.get("n_T_nodes", c.time.n_T_nodes);
        r.finish();
    }
    if (const json* q = root.child("quadrature")) {
        detail::ObjectReader r(*q, "quadrature");
        r.get("rule", c.quadrature.rule);
        r.get("n_omega_nodes", c.quadrature.n_omega_nodes);
        r.get("width_stds", c.quadrature.width_stds);
        r.get("steps_per_unit_time", c.quadrature.steps_per_unit_time);
        r.get("integrator", c.quadrature.integrator);
        r.get("tau_method", c.quadrature.tau_method);
        r.get("tau_max_sigmas", c.quadrature.tau_max_sigmas);
        r.get("tau_tol", c.quadrature.tau_tol);
        r.finish();
    }
    if (const json* e = root.child("experiment")) {
        detail::ObjectReader r(*e, "experiment");
        r.get("eps", c.experiment.eps);
        r.get("sigmas", c.experiment.sigmas);
        r.get("h_min", c.experiment.h_min);
        r.get("h_max", c.experiment.h_max);
        r.get("h_ratio", c.experiment.h_ratio);
        r.get("contraction_dirs", c.experiment.contraction_dirs);
        r.get("probe_seed", c.experiment.probe_seed);
        r.finish();
    }
    root.finish();
    validate(c);
    return c;
}

inline json config_to_json(const RunConfig& c) {
    const auto& p = c.system.params;
    return json{
        {"system",
         {{"preset", c.system.preset},
          {"n_qubits", c.system.n_qubits},
          {"params", {{"hz", p.hz}, {"hx", p.hx}, {"J", p.J}, {"g", p.g}, {"scale", p.scale}}},
          {"seed", c.system.seed},
          {"couplings", c.system.couplings}}},
        {"beta", c.beta},
        {"sigma", c.sigma},
        {"alpha", c.alpha},
        {"alphas", c.alphas},
        {"bath", {{"variant", c.bath.variant}, {"channel_source", c.bath.channel_source}}},
        {"time",
         {{"law", c.time.law},
          {"T0", c.time.T0},
          {"T", c.time.T},
          {"alpha_min", c.time.alpha_min},
          {"n_T_nodes", c.time.n_T_nodes}}},
        {"quadrature",
         {{"rule", c.quadrature.rule},
          {"n_omega_nodes", c.quadrature.n_omega_nodes},
          {"width_stds", c.quadrature.width_stds},
          {"steps_per_unit_time", c.quadrature.steps_per_unit_time},
          {"integrator", c.quadrature.integrator},
          {"tau_method", c.quadrature.tau_method},
          {"tau_max_sigmas", c.quadrature.tau_max_sigmas},
          {"tau_tol", c.quadrature.tau_tol}}},
        {"experiment",
         {{"eps", c.experiment.eps},
          {"sigmas", c.experiment.sigmas},
          {"h_min", c.experiment.h_min},
          {"h_max", c.experiment.h_max},
          {"h_ratio", c.experiment.h_ratio},
          {"contraction_dirs", c.experiment.contraction_dirs},
          {"probe_seed", c.experiment.probe_seed}}}};
}

inline RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file.string() + ": cannot open config");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Derived settings

inline double resolved_T0(const RunConfig& c) {
    return c.time.T0 > 0.0 ? c.time.T0 : assumption_T0(c.sigma, c.beta, c.time.alpha_min);
}

inline TimeLaw resolved_law(const RunConfig& c) {
    const double t0 = resolved_T0(c);
    if (c.time.law == "fixed") return TimeLaw::fixed(c.time.T > 0.0 ? c.time.T : t0);
    return TimeLaw::random_mu(t0);
}

inline GeneratorQuad generator_quad(const RunConfig& c) {
    GeneratorQuad q;
    q.omega.rule = c.quadrature.rule;
    q.omega.n_nodes = c.quadrature.n_omega_nodes;
    q.omega.width_stds = c.quadrature.width_stds;
    q.tau.method = c.quadrature.tau_method;
    q.tau.tau_max_sigmas = c.quadrature.tau_max_sigmas;
    q.tau.tol = c.quadrature.tau_tol;
    return q;
}

inline BathConfig bath_config(const RunConfig& c) {
    return {parse_bath_variant(c.bath.variant), c.beta, c.sigma};
}

inline ChannelConfig channel_config(const RunConfig& c) {
    ChannelConfig cc;
    cc.alpha = c.alpha;
    cc.law = resolved_law(c);
    cc.omega = generator_quad(c).omega;
    cc.n_T_nodes = c.time.n_T_nodes;
    cc.steps_per_unit_time = c.quadrature.steps_per_unit_time;
    cc.integrator = parse_integrator(c.quadrature.integrator);
    return cc;
}

inline SystemModel system_from_config(const RunConfig& c) {
    return build_system(c.system.preset, c.system.n_qubits, c.system.params, c.system.seed, c.system.couplings);
}

// ---------------------------------------------------------------------------
// Reports

struct RunReport {
    std::string command;
    RunConfig config;
    json results = json::object();
    std::vector<ScanReport> scans;
    double wall_time_s = 0.0;
};

inline json matrix_to_json(const Mat& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array(), ri = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

inline json scan_to_json(const ScanReport& s) {
    json j{{"name", s.name}, {"axis", s.axis}, {"grid", s.grid}, {"values", s.values},
           {"slope_defined", s.slope_defined}};
    j["slope"] = s.slope_defined ? json(s.fit.slope) : json(nullptr);
    j["fit_slope"] = std::isfinite(s.fit.slope) ? json(s.fit.slope) : json(nullptr);
    j["fit_residual"] = std::isfinite(s.fit.residual) ? json(s.fit.residual) : json(nullptr);
    return j;
}

inline std::string sha256_hex(const std::string& data) {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
    unsigned char out[crypto_hash_sha256_BYTES];
    crypto_hash_sha256(out, reinterpret_cast<const unsigned char*>(data.data()), data.size());
    char hex[2 * crypto_hash_sha256_BYTES + 1];
    sodium_bin2hex(hex, sizeof hex, out, sizeof out);
    return hex;
}

inline std::string config_hash(const RunConfig& c) { return sha256_hex(config_to_json(c).dump()); }

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string versions_string() {
    std::ostringstream os;
    os << "gdl " << kVersion << "; eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
       << EIGEN_MINOR_VERSION << "; nlohmann_json " << NLOHMANN_JSON_VERSION_MAJOR << "."
       << NLOHMANN_JSON_VERSION_MINOR << "." << NLOHMANN_JSON_VERSION_PATCH;
    return os.str();
}

inline json report_payload(const RunReport& r) {
    json scans = json::array();
    for (const auto& s : r.scans) scans.push_back(scan_to_json(s));
    return {{"command", r.command},
            {"config", config_to_json(r.config)},
            {"config_hash", config_hash(r.config)},
            {"versions", versions_string()},
            {"results", r.results},
            {"scans", scans}};
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error(p.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(p.string() + ": write failed");
}

// report.json, series CSV per scan, manifest.json. Returns the files written.
inline std::vector<std::filesystem::path> write_report(const RunReport& r, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> files;
    files.push_back(dir / "report.json");
    write_text(files.back(), report_payload(r).dump(2) + "\n");
    for (const auto& s : r.scans) {
        files.push_back(dir / (r.scans.size() == 1 ? std::string("series.csv") : "series_" + s.name + ".csv"));
        std::string csv = "axis,value\n";
        for (std::size_t i = 0; i < s.grid.size(); ++i)
            csv += format_double(s.grid[i]) + "," + format_double(s.values[i]) + "\n";
        write_text(files.back(), csv);
    }
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    const json manifest{{"command", r.command},
                        {"config_hash", config_hash(r.config)},
                        {"versions", versions_string()},
                        {"threads", worker_count()},
                        {"timestamp", stamp},
                        {"wall_time_s", r.wall_time_s}};
    files.push_back(dir / "manifest.json");
    write_text(files.back(), manifest.dump(2) + "\n");
    return files;
}

} // namespace gdl
