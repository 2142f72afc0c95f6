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

// cli.hpp - subcommands behind the gdl executable
//
// Exit codes: 0 success, 2 validation failure, 3 numeric-contract failure.
// Errors are reported on stderr as one JSON object.

#pragma once

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gdl/config_io.hpp"

namespace gdl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

struct Check {
    std::string name;
    double value;
    double limit;
    bool upper = true;  // value <= limit, else value >= limit
    bool ok() const { return upper ? value <= limit : value >= limit; }
};

struct CommandResult {
    RunReport report;
    std::vector<Check> checks;
    bool ok() const {
        for (const auto& c : checks)
            if (!c.ok()) return false;
        return true;
    }
};

namespace cmd {

inline json checks_json(const std::vector<Check>& cs) {
    json j = json::array();
    for (const auto& c : cs)
        j.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"relation", c.upper ? "<=" : ">="},
                     {"ok", c.ok()}});
    return j;
}

inline CommandResult verify(const RunConfig& c) {
    CommandResult out;
    const SystemModel s = system_from_config(c);
    const GeneratorParts g = assemble_generator(s, c.beta, c.sigma, generator_quad(c));
    const DensityMatrix rho = gibbs_state(s, c.beta);
    const GapReport gr = spectral_gap(g.L_KMS, rho);
    const double t0 = resolved_T0(c);
    const CorrectionOperators co = correction_E(g.H_Lamb, s, c.beta, t0, c.alpha);
    const double res_mu = max_abs(delta_residual(co.E, g.H_Lamb, s, c.beta, TimeLaw::random_mu(t0)));
    const double res_fixed = max_abs(delta_residual(co.E, g.H_Lamb, s, c.beta, TimeLaw::fixed(t0)));
    out.checks = {{"kms_defect", kms_defect(g.transition, rho), 1e-8},
                  {"stationarity", trace_norm(apply_superop(g.L_KMS, rho.matrix())), 1e-10},
                  {"gamma_identity", gamma_g_defect(c.beta, c.sigma), 1e-12},
                  {"cancellation_mu", res_mu, 1e-8}};
    auto& r = out.report.results;
    r["checks"] = checks_json(out.checks);
    r["gap"] = gr.gap;
    r["lamb_defect"] = lamb_defect(g.H_Lamb, rho);
    r["lamb_commutator_trace_norm"] = trace_norm(g.H_Lamb * rho.matrix() - rho.matrix() * g.H_Lamb);
    r["T0"] = t0;
    r["cancellation_fixed_T"] = res_fixed;
    r["correction_trace_norm"] = trace_norm(co.E);
    return out;
}

inline CommandResult build_generator(const RunConfig& c) {
    CommandResult out;
    const SystemModel s = system_from_config(c);
    const GeneratorParts g = assemble_generator(s, c.beta, c.sigma, generator_quad(c));
    const DensityMatrix rho = gibbs_state(s, c.beta);
    const GapReport gr = spectral_gap(g.L_KMS, rho);
    auto& r = out.report.results;
    r["gap"] = gr.gap;
    r["kms_eigenvalues"] = gr.eigenvalues;
    r["lamb_defect"] = lamb_defect(g.H_Lamb, rho);
    r["kms_defect"] = kms_defect(g.transition, rho);
    r["H"] = matrix_to_json(s.H);
    r["H_coh"] = matrix_to_json(g.H_coh);
    r["H_Lamb"] = matrix_to_json(g.H_Lamb);
    r["G_D"] = matrix_to_json(g.G_D);
    r["M_D"] = matrix_to_json(g.M_D);
    r["L_full"] = matrix_to_json(g.L_full.matrix());
    r["L_KMS"] = matrix_to_json(g.L_KMS.matrix());
    return out;
}

inline SuperOperator channel_for(const RunConfig& c, const SystemModel& s, const GeneratorParts& g,
                                 ChannelStats* stats = nullptr) {
    const ChannelConfig cc = channel_config(c);
    if (parse_channel_source(c.bath.channel_source) == ChannelSource::exact_bath)
        return channel_superop(s, bath_config(c), cc, stats);
    return composed_channel(s, g.L_full, cc.alpha, cc.law);
}

inline CommandResult fixed_point_cmd(const RunConfig& c) {
    CommandResult out;
    if (!(c.alpha > 0.0)) throw ParameterError("fixed-point needs alpha > 0");
    const SystemModel s = system_from_config(c);
    const GeneratorParts g = assemble_generator(s, c.beta, c.sigma, generator_quad(c));
    const DensityMatrix rho = gibbs_state(s, c.beta);
    ChannelStats st;
    const SuperOperator ch = channel_for(c, s, g, &st);
    const FixedPointResult fp = fixed_point(ch);
    const CorrectionOperators co = correction_E(g.H_Lamb, s, c.beta, resolved_T0(c), c.alpha);
    auto& r = out.report.results;
    r["state"] = matrix_to_json(fp.state.matrix());
    r["residual"] = fp.residual;
    r["method"] = fp.method;
    r["bias"] = trace_norm(fp.state.matrix() - rho.matrix());
    r["rho_star_step_defect"] = trace_norm(apply_superop(ch, co.rho_star) - co.rho_star);
    r["rho_star_distance"] = trace_norm(co.rho_star - rho.matrix());
    r["fixed_point_to_rho_star"] = trace_norm(fp.state.matrix() - co.rho_star);
    if (parse_channel_source(c.bath.channel_source) == ChannelSource::exact_bath) {
        r["choi_min_eigenvalue"] = st.choi_min;
        r["trace_defect"] = st.trace_defect;
    }
    return out;
}

inline CommandResult scan_bias(const RunConfig& c) {
    CommandResult out;
    const SystemModel s = system_from_config(c);
    out.report.scans.push_back(
        bias_scan(s, bath_config(c), channel_config(c), c.alphas, parse_channel_source(c.bath.channel_source)));
    out.report.results["T0"] = resolved_T0(c);
    return out;
}

inline CommandResult scan_sigma(const RunConfig& c) {
    CommandResult out;
    const SystemModel s = system_from_config(c);
    const auto oq = generator_quad(c).omega;
    out.report.scans.push_back(sigma_scan(s, c.beta, c.experiment.sigmas, oq));
    out.report.scans.push_back(lamb_envelope_scan(s, c.beta, c.experiment.sigmas, c.experiment.h_min,
                                                  c.experiment.h_max, c.experiment.h_ratio, oq));
    return out;
}

inline CommandResult scan_step_error(const RunConfig& c) {
    CommandResult out;
    const SystemModel s = system_from_config(c);
    out.report.scans.push_back(step_error_scan(s, bath_config(c), channel_config(c), c.alphas));
    out.report.results["T"] = channel_config(c).law.lower();
    return out;
}

inline CommandResult mixing(const RunConfig& c) {
    CommandResult out;
    if (!(c.alpha > 0.0)) throw ParameterError("mixing needs alpha > 0");
    const SystemModel s = system_from_config(c);
    const GeneratorParts g = assemble_generator(s, c.beta, c.sigma, generator_quad(c));
    const DensityMatrix rho = gibbs_state(s, c.beta);
    const GapReport gr = spectral_gap(g.L_KMS, rho);
    const SuperOperator ch = channel_for(c, s, g);
    const FixedPointResult fp = fixed_point(ch);
    const long long k = mixing_estimate(ch, c.experiment.eps, fp.state);
    const double bound = mixing_time_bound(gr.gap, c.alpha, c.experiment.eps, rho);
    const double contr = measured_contraction(ch, rho, c.experiment.contraction_dirs, c.experiment.probe_seed);
    const double dl = lamb_defect(g.H_Lamb, rho);
    auto& r = out.report.results;
    r["gap"] = gr.gap;
    r["lamb_defect"] = dl;
    r["mixing_time"] = k;
    r["mixing_time_bound"] = bound;
    r["contraction"] = contr;
    r["contraction_limit"] = std::exp(-gr.gap * c.alpha * c.alpha / 2.0);
    r["lamb_defect_within_half_gap"] = dl <= gr.gap / 2.0;
    return out;
}

inline CommandResult report_cmd(const RunConfig& c) {
    CommandResult out;
    CommandResult v = verify(c), f = fixed_point_cmd(c), m = mixing(c);
    out.checks = v.checks;
    out.report.results = {{"verify", v.report.results}, {"fixed_point", f.report.results}, {"mixing", m.report.results}};
    return out;
}

inline void print_summary(const CommandResult& res) {
    for (const auto& ck : res.checks)
        std::printf("%-24s %-24s %s %-10.3g %s\n", ck.name.c_str(), format_double(ck.value).c_str(),
                    ck.upper ? "<=" : ">=", ck.limit, ck.ok() ? "ok" : "FAIL");
    for (const auto& sc : res.report.scans) {
        std::printf("scan %s (%s):\n", sc.name.c_str(), sc.axis.c_str());
        for (std::size_t i = 0; i < sc.grid.size(); ++i)
            std::printf("  %-24s %s\n", format_double(sc.grid[i]).c_str(), format_double(sc.values[i]).c_str());
        if (sc.slope_defined)
            std::printf("  slope %s (residual %s)\n", format_double(sc.fit.slope).c_str(),
                        format_double(sc.fit.residual).c_str());
        else
            std::printf("  slope undefined\n");
    }
}

} // namespace cmd

inline void emit_error(const std::string& kind, const std::string& family, const std::string& what, int code) {
    const json j{{"error", {{"kind", kind}, {"family", family}, {"message", what}, {"exit_code", code}}}};
    std::cerr << j.dump() << "\n";
}

inline int run_cli(int argc, char** argv) {
    CLI::App app{"gdl: repeated-interaction thermal state preparation toolkit"};
    app.require_subcommand(1);
    std::string config_path, out_dir = "gdl_out";
    const std::map<std::string, std::string> subs{
        {"verify", "check detailed balance, stationarity and the cancellation identity"},
        {"build-generator", "assemble the Lindbladian and its parts"},
        {"fixed-point", "fixed point of the one-step channel"},
        {"scan-bias", "fixed-point bias against alpha"},
        {"scan-sigma", "Lamb defect against sigma"},
        {"scan-step-error", "one-step channel error against alpha"},
        {"mixing", "measured mixing time and contraction"},
        {"report", "verify, fixed-point and mixing in one report"}};
    std::vector<CLI::App*> apps;
    for (const auto& [name, desc] : subs) {
        CLI::App* a = app.add_subcommand(name, desc);
        a->add_option("--config,-c", config_path, "JSON config file (defaults when omitted)");
        a->add_option("--out,-o", out_dir, "output directory");
        apps.push_back(a);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("argument", "validation", e.what(), kExitValidation);
        return kExitValidation;
    }
    std::string name;
    for (CLI::App* a : apps)
        if (a->parsed()) name = a->get_name();

    const auto t_start = std::chrono::steady_clock::now();
    try {
        const RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
        validate(c);
        CommandResult res;
        if (name == "verify") res = cmd::verify(c);
        else if (name == "build-generator") res = cmd::build_generator(c);
        else if (name == "fixed-point") res = cmd::fixed_point_cmd(c);
        else if (name == "scan-bias") res = cmd::scan_bias(c);
        else if (name == "scan-sigma") res = cmd::scan_sigma(c);
        else if (name == "scan-step-error") res = cmd::scan_step_error(c);
        else if (name == "mixing") res = cmd::mixing(c);
        else res = cmd::report_cmd(c);
        res.report.command = name;
        res.report.config = c;
        if (!res.checks.empty()) res.report.results["checks"] = cmd::checks_json(res.checks);
        res.report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        write_report(res.report, out_dir);
        cmd::print_summary(res);
        if (!res.ok()) {
            emit_error("contract", "numeric", "one or more checks failed", kExitNumeric);
            return kExitNumeric;
        }
        return kExitOk;
    } catch (const Error& e) {
        const bool val = e.family() == ErrorFamily::validation;
        const int code = val ? kExitValidation : kExitNumeric;
        emit_error(e.kind(), val ? "validation" : "numeric", e.what(), code);
        return code;
    } catch (const json::exception& e) {
        emit_error("config", "validation", e.what(), kExitValidation);
        return kExitValidation;
    } catch (const std::exception& e) {
        emit_error("runtime", "numeric", e.what(), kExitNumeric);
        return kExitNumeric;
    }
}

} // namespace gdl
