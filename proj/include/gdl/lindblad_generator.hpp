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

// lindblad_generator.hpp - weak-coupling Lindbladian and its KMS split
//
//   L = -i[H_coh, .] + T' - 1/2 {M_D, .}
//     = -i[H_Lamb, .] + L_KMS,   L_KMS = -i[G_D, .] + T' - 1/2 {M_D, .}
//
// with G_D = (i/2) sum_nu tanh(beta nu / 4) (M_D)_nu and H_Lamb = H_coh - G_D.

#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <gsl/gsl_sf_dawson.h>

#include "gdl/envelope.hpp"
#include "gdl/model.hpp"
#include "gdl/parallel.hpp"
#include "gdl/quadrature.hpp"

namespace gdl {

// ---------------------------------------------------------------------------
// Spectral densities

struct SpectralDensities {
    double beta = 1.0, sigma = 2.0;
    double sigma_beta = 0.0;  // 2 - beta^2 / (4 sigma^2)
    double beta_tilde = 0.0;  // 2 beta / sigma_beta
    double mean = 0.0;        // -1/beta
    double var = 0.0;         // sigma_beta / beta^2

    double g(double w) const {
        const double z = w - mean;
        return std::exp(-z * z / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
    }
    double gamma(double w) const {
        const double x = beta_tilde * w;
        const double num = g(w) + g(-w);
        if (x > 0.0) {
            const double e = std::exp(-x);
            return num * e / (1.0 + e);
        }
        return num / (1.0 + std::exp(x));
    }
    double std_dev() const { return std::sqrt(var); }
};

inline SpectralDensities spectral_densities(double beta, double sigma) {
    if (!(beta > 0.0) || !(sigma > 0.0)) throw ParameterError("beta and sigma must be positive");
    SpectralDensities sd;
    sd.beta = beta;
    sd.sigma = sigma;
    sd.sigma_beta = 2.0 - beta * beta / (4.0 * sigma * sigma);
    if (!(sd.sigma_beta > 0.0)) throw ParameterError("sigma_beta = 2 - beta^2/(4 sigma^2) must be positive");
    sd.beta_tilde = 2.0 * beta / sd.sigma_beta;
    sd.mean = -1.0 / beta;
    sd.var = sd.sigma_beta / (beta * beta);
    for (int i = 0; i <= 100; ++i) {
        const double w = sd.mean + (i - 50) * 0.12 * sd.std_dev();
        const double g = sd.g(w);
        if (std::abs(sd.gamma(w) - g) > 1e-12 * std::max(1.0, g))
            throw ContractError("gamma = g identity failed at construction");
    }
    return sd;
}

// ---------------------------------------------------------------------------
// Frequency quadrature against g

// max |gamma - g| on a 101-point grid spanning mean +- 8 std
inline double gamma_g_defect(double beta, double sigma) {
    const SpectralDensities sd = spectral_densities(beta, sigma);
    double m = 0.0;
    const double span = 8.0 * sd.std_dev();
    for (int i = 0; i <= 100; ++i) {
        const double w = sd.mean - span + 2.0 * span * i / 100.0;
        m = std::max(m, std::abs(sd.gamma(w) - sd.g(w)));
    }
    return m;
}

struct OmegaQuadSpec {
    std::string rule = "composite_legendre";  // or "gauss_hermite"
    int n_nodes = 12;          // per panel (composite) or total (Hermite)
    double width_stds = 8.5;   // half-width of the integration range in g standard deviations
    double panel_scale = 1.0;  // panel width = panel_scale * min(std(g), 1/sigma)
};

// Nodes and weights with the density g folded into the weights.
inline QuadRule omega_rule(const SpectralDensities& sd, const OmegaQuadSpec& q) {
    if (q.n_nodes < 3) throw ParameterError("n_omega_nodes must be at least 3");
    QuadRule out;
    if (q.rule == "gauss_hermite") {
        const QuadRule gh = gauss_hermite(q.n_nodes);
        for (std::size_t i = 0; i < gh.size(); ++i) {
            out.nodes.push_back(sd.mean + std::sqrt(2.0 * sd.var) * gh.nodes[i]);
            out.weights.push_back(gh.weights[i] / std::sqrt(std::numbers::pi));
        }
        return out;
    }
    if (q.rule != "composite_legendre") throw ParameterError("unknown omega rule '" + q.rule + "'");
    const double s = sd.std_dev();
    const double width = q.panel_scale * std::min(s, 1.0 / sd.sigma);
    const QuadRule base = composite_legendre_width(sd.mean - q.width_stds * s, sd.mean + q.width_stds * s, width, q.n_nodes);
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.nodes.push_back(base.nodes[i]);
        out.weights.push_back(base.weights[i] * sd.g(base.nodes[i]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Jump operators and half-plane correlation operators (eigenbasis kernels)

// V(w)_jk = A_jk fhat(lambda_j - lambda_k - w), A given in the eigenbasis.
inline Mat jump_operator_eig(const Mat& a_eig, const RVec& lambda, double omega, double sigma) {
    const Eigen::Index d = lambda.size();
    Mat v(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index j = 0; j < d; ++j)
            v(j, k) = a_eig(j, k) * envelope_f_hat(lambda(j) - lambda(k) - omega, sigma);
    return v;
}

inline Mat jump_operator(const Mat& a, double omega, const SystemModel& s, double sigma) {
    return s.from_eig(jump_operator_eig(s.to_eig(a), s.eigenvalues, omega, sigma));
}

struct TauQuadSpec {
    std::string method = "closed_form";  // or "adaptive"
    double tau_max_sigmas = 16.0;        // adaptive only
    double tol = 1e-12;                  // adaptive only
};

// J(kappa) = int_0^inf exp(-tau^2 / (8 sigma^2)) exp(i kappa tau) dtau
//          = sqrt(2 pi) sigma exp(-2 sigma^2 kappa^2) + 2 i sqrt(2) sigma Dawson(sqrt(2) sigma kappa)
// The adaptive branch integrates the same function on [0, tau_max].
inline cplx half_line_kernel(double kappa, double sigma, const TauQuadSpec& tq) {
    if (tq.method == "closed_form") {
        const double re = std::sqrt(2.0 * std::numbers::pi) * sigma * std::exp(-2.0 * sigma * sigma * kappa * kappa);
        const double im = 2.0 * std::numbers::sqrt2 * sigma * gsl_sf_dawson(std::numbers::sqrt2 * sigma * kappa);
        return {re, im};
    }
    if (tq.method != "adaptive") throw ParameterError("unknown tau method '" + tq.method + "'");
    const double c = 1.0 / (8.0 * sigma * sigma);
    auto f = [&](double tau) { return std::exp(-c * tau * tau) * std::exp(I_unit * (kappa * tau)); };
    return integrate_adaptive(f, 0.0, tq.tau_max_sigmas * sigma, tq.tol);
}

// Kernel table for one frequency: K(m)_jk = exp(-(l_j - l_k)^2 s^2 / 2) J(l_m - (l_j + l_k)/2 - w).
// J depends on kappa only, so repeated kappa values share one quadrature.
struct CorrelationKernel {
    std::vector<Mat> per_m;  // d matrices, indexed by m
};

inline CorrelationKernel correlation_kernel(const RVec& lambda, double omega, double sigma, const TauQuadSpec& tq) {
    const Eigen::Index d = lambda.size();
    std::map<double, cplx> cache;
    CorrelationKernel k;
    k.per_m.assign(d, Mat(d, d));
    for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index c = 0; c < d; ++c)
            for (Eigen::Index r = 0; r < d; ++r) {
                const double dl = lambda(r) - lambda(c);
                const double kappa = lambda(m) - 0.5 * (lambda(r) + lambda(c)) - omega;
                auto it = cache.find(kappa);
                if (it == cache.end()) it = cache.emplace(kappa, half_line_kernel(kappa, sigma, tq)).first;
                k.per_m[m](r, c) = std::exp(-dl * dl * sigma * sigma / 2.0) * it->second;
            }
    return k;
}

// G_A(w)_jk = sum_m (A^dag)_jm A_mk K(m)_jk
inline Mat g_correlation_eig(const Mat& a_eig, const CorrelationKernel& ker) {
    const Eigen::Index d = a_eig.rows();
    const Mat ad = a_eig.adjoint();
    Mat out = Mat::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) out += (ad.col(m) * a_eig.row(m)).cwiseProduct(ker.per_m[m]);
    return out;
}

inline Mat g_correlation_eig(const Mat& a_eig, const RVec& lambda, double omega, double sigma,
                             const TauQuadSpec& tq = {}) {
    return g_correlation_eig(a_eig, correlation_kernel(lambda, omega, sigma, tq));
}

inline Mat g_correlation(const Mat& a, double omega, const SystemModel& s, double sigma, const TauQuadSpec& tq = {}) {
    return s.from_eig(g_correlation_eig(s.to_eig(a), s.eigenvalues, omega, sigma, tq));
}

// Im X = (X - X^dag) / (2i)
inline Mat herm_imag(const Mat& x) { return (x - x.adjoint()) / (2.0 * I_unit); }

// Bath occupation of the lower level for H_E = -w Z / 2 at inverse temperature beta_tilde.
inline double lower_occupation(double beta_tilde, double w) {
    const double x = -beta_tilde * w;
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

// H_LS,A(w) = -Im(p1 G_{A^dag}(w) + p0 G_A(-w)), eigenbasis; kernels at +w and -w.
inline Mat lamb_shift_density_eig(const Mat& a_eig, double omega, double beta_tilde, const CorrelationKernel& k_plus,
                                  const CorrelationKernel& k_minus) {
    const double p0 = lower_occupation(beta_tilde, omega);
    const double p1 = 1.0 - p0;
    return -herm_imag(p1 * g_correlation_eig(a_eig.adjoint(), k_plus) + p0 * g_correlation_eig(a_eig, k_minus));
}

// ---------------------------------------------------------------------------
// Coupling bookkeeping: +A and -A produce identical quadratic terms.

struct WeightedCoupling {
    Mat a;
    double weight;
};

inline std::vector<WeightedCoupling> distinct_couplings(const std::vector<Mat>& set) {
    std::vector<WeightedCoupling> out;
    const double w = 1.0 / static_cast<double>(set.size());
    for (const auto& a : set) {
        bool merged = false;
        for (auto& o : out)
            if (max_abs(o.a + a) <= 1e-14 || max_abs(o.a - a) <= 1e-14) {
                o.weight += w;
                merged = true;
                break;
            }
        if (!merged) out.push_back({a, w});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tanh-Bohr transform and KMS defect

inline Mat tanh_bohr_transform(const Mat& x, const SystemModel& s, double beta) {
    std::vector<double> reps;
    const Eigen::MatrixXi lab = bohr_labels(s.eigenvalues, s.gap_tol, reps);
    Mat xe = s.to_eig(x);
    for (int k = 0; k < s.dim(); ++k)
        for (int l = 0; l < s.dim(); ++l) xe(l, k) *= 0.5 * I_unit * std::tanh(beta * reps[lab(l, k)] / 4.0);
    return hermitize(s.from_eig(xe));
}

inline double kms_defect(const SuperOperator& t, const DensityMatrix& rho) {
    const Mat s = op_power(rho, 0.5);
    const Mat gamma = conj_superop(s, s).matrix();
    const Mat d = gamma * t.matrix().adjoint() - t.matrix() * gamma;
    return max_abs(d);
}

// ---------------------------------------------------------------------------
// Assembly

struct GeneratorQuad {
    OmegaQuadSpec omega;
    TauQuadSpec tau;
};

struct GeneratorParts {
    SuperOperator L_full;
    Mat H_coh;
    SuperOperator transition;
    Mat M_D;
    Mat G_D;
    Mat H_Lamb;
    SuperOperator L_KMS;
};

inline GeneratorParts assemble_generator(const SystemModel& s, double beta, double sigma, const GeneratorQuad& q = {}) {
    const SpectralDensities sd = spectral_densities(beta, sigma);
    const QuadRule rule = omega_rule(sd, q.omega);
    const auto cps = distinct_couplings(s.couplings);
    const int d = s.dim();

    std::vector<Mat> a_eig;
    for (const auto& c : cps) a_eig.push_back(s.to_eig(c.a));
    const std::size_t nc = cps.size();

    // per-node contributions, reduced in (node, coupling) order afterwards
    std::vector<Mat> jumps(rule.size() * nc), lamb(rule.size() * nc);
    parallel_for(rule.size(), [&](std::size_t i) {
        const double w = rule.nodes[i];
        const CorrelationKernel kp = correlation_kernel(s.eigenvalues, w, sigma, q.tau);
        const CorrelationKernel km = correlation_kernel(s.eigenvalues, -w, sigma, q.tau);
        for (std::size_t c = 0; c < nc; ++c) {
            jumps[i * nc + c] = jump_operator_eig(a_eig[c], s.eigenvalues, w, sigma);
            lamb[i * nc + c] = lamb_shift_density_eig(a_eig[c], w, sd.beta_tilde, kp, km);
        }
    });

    Mat trans_e = Mat::Zero(d * d, d * d);
    Mat m_e = Mat::Zero(d, d), h_e = Mat::Zero(d, d);
    for (std::size_t n = 0; n < jumps.size(); ++n) {
        const double wt = cps[n % nc].weight * rule.weights[n / nc];
        const Mat& v = jumps[n];
        trans_e += wt * kron(v.conjugate(), v);
        m_e += wt * v.adjoint() * v;
        h_e += wt * lamb[n];
    }
    // back to the computational basis: vec(U X U^dag) = kron(conj U, U) vec X
    const Mat& u = s.eigenvectors;
    const Mat pu = kron(u.conjugate(), u);

    GeneratorParts g;
    g.transition = SuperOperator(d, pu * trans_e * pu.adjoint());
    g.M_D = hermitize(s.from_eig(m_e));
    g.H_coh = hermitize(s.from_eig(h_e));
    g.G_D = tanh_bohr_transform(g.M_D, s, beta);
    g.H_Lamb = g.H_coh - g.G_D;
    const SuperOperator damp = anticommutator_superop(g.M_D).scaled(-0.5);
    g.L_KMS = hamiltonian_superop(g.G_D) + g.transition + damp;
    g.L_full = hamiltonian_superop(g.H_coh) + g.transition + damp;
    return g;
}

} // namespace gdl
