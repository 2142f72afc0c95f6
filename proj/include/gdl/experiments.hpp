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

// experiments.hpp - fixed points, scaling scans, mixing measurements, fits

#pragma once

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gdl/bath_channel.hpp"
#include "gdl/kms_analysis.hpp"

namespace gdl {

// ---------------------------------------------------------------------------
// Log-log regression

struct SlopeFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();  // rms in log space
};

inline SlopeFit slope_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw StructuralError("slope_fit: size mismatch");
    if (xs.size() < 4) throw ParameterError("slope_fit needs at least 4 points");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("slope_fit needs positive data");
        mx += std::log(xs[i]) / n;
        my += std::log(ys[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0)) throw DomainError("slope_fit needs distinct abscissae");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = std::log(ys[i]) - (f.intercept + f.slope * std::log(xs[i]));
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

struct ScanReport {
    std::string name;
    std::string axis;
    std::vector<double> grid;
    std::vector<double> values;
    SlopeFit fit;
    bool slope_defined = false;

    void finalize() {
        slope_defined = false;
        fit = {};
        if (grid.size() < 4) return;
        for (double v : values)
            if (!(v > 0.0)) return;
        fit = slope_fit(grid, values);
        slope_defined = fit.residual < 0.1;
    }
};

// ---------------------------------------------------------------------------
// Fixed points

struct FixedPointResult {
    DensityMatrix state;
    double residual = 0.0;
    std::string method;
    int multiplicity = 1;
};

inline constexpr double kUnitMultiplicityTol = 1e-8;

inline FixedPointResult fixed_point(const SuperOperator& s, double tol = 1e-9) {
    const int d = s.dim();
    if (trace_preservation_defect(s) > 1e-8) throw ParameterError("fixed_point needs a trace-preserving map");
    Eigen::ComplexEigenSolver<Mat> es(s.matrix());
    if (es.info() != Eigen::Success) throw ContractError("eigensolver failed");
    int best = -1, mult = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double dist = std::abs(es.eigenvalues()(i) - 1.0);
        if (dist < kUnitMultiplicityTol) ++mult;
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(i);
        }
    }
    if (mult > 1)
        throw NonPrimitiveError("eigenvalue 1 has multiplicity " + std::to_string(mult) + "; fixed point not unique");
    Mat rho = unvec(es.eigenvectors().col(best), d);
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-14) throw ContractError("fixed eigenvector has vanishing trace");
    rho = hermitize(rho / tr);
    rho /= rho.trace().real();
    FixedPointResult out{DensityMatrix(rho), 0.0, "dense_eigensolve", std::max(mult, 1)};
    out.residual = trace_norm(apply_superop(s, rho) - rho);
    if (out.residual > tol)
        throw ContractError("fixed point residual " + std::to_string(out.residual) + " exceeds tolerance");
    return out;
}

// Power-iteration oracle.
inline Mat fixed_point_power(const SuperOperator& s, int max_iter = 1000000, double tol = 1e-13) {
    const int d = s.dim();
    Mat rho = Mat::Identity(d, d) / double(d);
    for (int it = 0; it < max_iter; ++it) {
        Mat next = apply_superop(s, rho);
        const double diff = trace_norm(next - rho);
        rho = next;
        if (diff < tol) break;
    }
    return hermitize(rho);
}

// ---------------------------------------------------------------------------
// Composed channel E_T[U_S(T) o exp(alpha^2 L) o U_S(T)]

inline SuperOperator composed_channel(const SystemModel& s, const SuperOperator& L, double alpha, const TimeLaw& law) {
    const int d = s.dim();
    Mat k = liouville_to_eig(s, Mat((alpha * alpha * L.matrix()).exp()));
    const RVec phi = liouville_phases(s);
    for (Eigen::Index b = 0; b < k.cols(); ++b)
        for (Eigen::Index a = 0; a < k.rows(); ++a) k(a, b) *= phase_average(law, phi(a) + phi(b));
    return SuperOperator(d, liouville_from_eig(s, k));
}

// Extremal probe states: Hermitized matrix units, d^2 of them.
inline std::vector<Mat> probe_states(int d) {
    std::vector<Mat> out;
    for (int j = 0; j < d; ++j) out.push_back(matrix_unit(d, j, j));
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            CVec v = CVec::Zero(d), w = CVec::Zero(d);
            v(j) = w(j) = 1.0 / std::sqrt(2.0);
            v(k) = 1.0 / std::sqrt(2.0);
            w(k) = I_unit / std::sqrt(2.0);
            out.push_back(v * v.adjoint());
            out.push_back(w * w.adjoint());
        }
    return out;
}

// max over pure probes of || (S1 - S2)(rho) ||_1
inline double channel_distance(const SuperOperator& s1, const SuperOperator& s2) {
    const SuperOperator diff = s1 - s2;
    double m = 0.0;
    for (const Mat& p : probe_states(s1.dim())) m = std::max(m, trace_norm(apply_superop(diff, p)));
    return m;
}

// ---------------------------------------------------------------------------
// Scans

enum class ChannelSource { exact_bath, lindblad_composed };

inline ChannelSource parse_channel_source(const std::string& s) {
    if (s == "exact_bath") return ChannelSource::exact_bath;
    if (s == "lindblad_composed") return ChannelSource::lindblad_composed;
    throw ParameterError("unknown channel source '" + s + "'");
}

inline SuperOperator make_channel(const SystemModel& s, const BathConfig& bath, const ChannelConfig& cfg,
                                  ChannelSource src, const GeneratorParts* gen = nullptr) {
    if (src == ChannelSource::exact_bath) return channel_superop(s, bath, cfg);
    if (gen) return composed_channel(s, gen->L_full, cfg.alpha, cfg.law);
    const GeneratorParts g = assemble_generator(s, bath.beta, bath.sigma, {cfg.omega, {}});
    return composed_channel(s, g.L_full, cfg.alpha, cfg.law);
}

inline ScanReport bias_scan(const SystemModel& s, const BathConfig& bath, const ChannelConfig& base,
                            const std::vector<double>& alphas, ChannelSource src) {
    ScanReport r{"bias", "alpha", {}, {}, {}, false};
    const DensityMatrix rho_b = gibbs_state(s, bath.beta);
    GeneratorParts gen;
    if (src == ChannelSource::lindblad_composed) gen = assemble_generator(s, bath.beta, bath.sigma, {base.omega, {}});
    for (double a : alphas) {
        if (!(a > 0.0)) throw ParameterError("bias_scan: alpha = 0 gives a non-primitive channel");
        ChannelConfig c = base;
        c.alpha = a;
        const SuperOperator ch = make_channel(s, bath, c, src, src == ChannelSource::lindblad_composed ? &gen : nullptr);
        const FixedPointResult fp = fixed_point(ch);
        r.grid.push_back(a);
        r.values.push_back(trace_norm(fp.state.matrix() - rho_b.matrix()));
    }
    r.finalize();
    return r;
}

// One-step distance between the exact channel and U_S(T) o exp(alpha^2 L) o U_S(T)
// at the deterministic time T = base.law.lower().
inline ScanReport step_error_scan(const SystemModel& s, const BathConfig& bath, const ChannelConfig& base,
                                  const std::vector<double>& alphas) {
    ScanReport r{"step_error", "alpha", {}, {}, {}, false};
    const GeneratorParts gen = assemble_generator(s, bath.beta, bath.sigma, {base.omega, {}});
    ChannelConfig c = base;
    c.law = TimeLaw::fixed(base.law.lower());
    for (double a : alphas) {
        c.alpha = a;
        const SuperOperator ex = channel_superop(s, bath, c);
        const SuperOperator cm = composed_channel(s, gen.L_full, a, c.law);
        r.grid.push_back(a);
        r.values.push_back(channel_distance(ex, cm));
    }
    r.finalize();
    return r;
}

// delta_Lamb of a fixed instance against sigma.
inline ScanReport sigma_scan(const SystemModel& s, double beta, const std::vector<double>& sigmas,
                             const OmegaQuadSpec& oq = {}) {
    ScanReport r{"lamb_defect", "sigma", {}, {}, {}, false};
    const DensityMatrix rho = gibbs_state(s, beta);
    for (double sg : sigmas) {
        const GeneratorParts g = assemble_generator(s, beta, sg, {oq, {}});
        r.grid.push_back(sg);
        r.values.push_back(lamb_defect(g.H_Lamb, rho));
    }
    r.finalize();
    return r;
}

// Worst case of delta_Lamb over the family h H / |H| with h on a geometric grid;
// uniform bounds in sigma concern this envelope rather than one fixed gap.
inline ScanReport lamb_envelope_scan(const SystemModel& s, double beta, const std::vector<double>& sigmas,
                                     double h_min = 0.005, double h_max = 2.0, double ratio = 1.25,
                                     const OmegaQuadSpec& oq = {}) {
    if (!(h_min > 0.0) || !(h_max >= h_min) || !(ratio > 1.0)) throw ParameterError("bad envelope grid");
    ScanReport r{"lamb_envelope", "sigma", sigmas, std::vector<double>(sigmas.size(), 0.0), {}, false};
    const double hn = op_norm(s.H);
    if (!(hn > 0.0)) throw DomainError("envelope scan needs a nonzero Hamiltonian");
    std::vector<double> hs;
    for (double h = h_min; h <= h_max * (1.0 + 1e-12); h *= ratio) hs.push_back(h);
    std::vector<std::vector<double>> vals(hs.size());
    parallel_for(hs.size(), [&](std::size_t i) {
        const SystemModel sh = make_system(Mat(s.H * (hs[i] / hn)), s.couplings, s.n_qubits);
        const DensityMatrix rho = gibbs_state(sh, beta);
        for (double sg : sigmas) {
            const GeneratorParts g = assemble_generator(sh, beta, sg, {oq, {}});
            vals[i].push_back(lamb_defect(g.H_Lamb, rho));
        }
    });
    for (const auto& v : vals)
        for (std::size_t k = 0; k < sigmas.size(); ++k) r.values[k] = std::max(r.values[k], v[k]);
    r.finalize();
    return r;
}

// ---------------------------------------------------------------------------
// Mixing

inline constexpr long long kMixingCap = 10000000;

inline double probe_distance(const Mat& power, const std::vector<Mat>& probes, const Mat& rho_fix, int d) {
    double m = 0.0;
    for (const Mat& p : probes) m = std::max(m, trace_norm(unvec(power * vec(p), d) - rho_fix));
    return m;
}

// Smallest k with max_probe ||S^k(rho0) - rho_fix||_1 <= eps. Distances are
// nonincreasing in k for CPTP S, so binary lifting over S^(2^m) is exact.
inline long long mixing_estimate(const SuperOperator& s, double eps, const DensityMatrix& rho_fix,
                                 long long cap = kMixingCap) {
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
    if (eps >= 2.0) return 0;
    const int d = s.dim();
    const auto probes = probe_states(d);
    const Mat id = Mat::Identity(d * d, d * d);
    if (probe_distance(id, probes, rho_fix.matrix(), d) <= eps) return 0;
    std::vector<Mat> pw{s.matrix()};
    while (probe_distance(pw.back(), probes, rho_fix.matrix(), d) > eps) {
        if ((1LL << pw.size()) > 2 * cap) throw TimeoutError("mixing time exceeds cap");
        pw.push_back(pw.back() * pw.back());
    }
    // largest k with distance > eps, built from the top bit down
    Mat cur = id;
    long long k = 0;
    for (int m = static_cast<int>(pw.size()) - 1; m >= 0; --m) {
        const Mat cand = pw[m] * cur;
        if (probe_distance(cand, probes, rho_fix.matrix(), d) > eps) {
            cur = cand;
            k += 1LL << m;
        }
    }
    if (k + 1 > cap) throw TimeoutError("mixing time exceeds cap");
    return k + 1;
}

// Largest ratio d_beta(S(X)) / d_beta(X) over random traceless Hermitian X.
inline double measured_contraction(const SuperOperator& s, const DensityMatrix& rho, int n_dirs, std::uint64_t seed) {
    const int d = s.dim();
    std::mt19937_64 rng(seed);
    const Mat zero = Mat::Zero(d, d);
    double worst = 0.0;
    for (int i = 0; i < n_dirs; ++i) {
        Mat x = random_hermitian(d, rng);
        x -= (x.trace().real() / d) * Mat::Identity(d, d);
        const double den = d_beta_distance(x, zero, rho);
        if (den == 0.0) continue;
        worst = std::max(worst, d_beta_distance(apply_superop(s, x), zero, rho) / den);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Assumption-level defaults

// T0 = 2 sigma sqrt(log(1 / (alpha^2 beta log sigma))), the smallest admissible mean scale.
inline double assumption_T0(double sigma, double beta, double alpha) {
    if (!(sigma > 1.0)) throw DomainError("T0 rule needs sigma > 1");
    const double arg = 1.0 / (alpha * alpha * beta * std::log(sigma));
    if (!(arg > 1.0)) throw DomainError("T0 rule needs alpha^2 beta log(sigma) < 1");
    return 2.0 * sigma * std::sqrt(std::log(arg));
}

} // namespace gdl
