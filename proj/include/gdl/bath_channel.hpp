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

// bath_channel.hpp - exact repeated-interaction channel with a two-level bath
//
// Joint evolution under H + H_E + alpha f(t) (A (x) B + A^dag (x) B^dag) on the
// window [-T, T], B = |1><0|. Propagation happens in the interaction picture
// of H + H_E, so
//
//   U(T, -T) = exp(-i H0 T) U_I(T, 0) U_I(-T, 0)^dag exp(-i H0 T)
//
// and the channel factorizes as U_S(T) o C_I(T) o U_S(T). For T beyond the
// envelope cutoff C_I no longer changes. Everything below works in the
// eigenbasis of H; joint operators are stored as 2x2 arrays of d x d blocks
// indexed (bath out, bath in).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gdl/envelope.hpp"
#include "gdl/lindblad_generator.hpp"
#include "gdl/model.hpp"
#include "gdl/parallel.hpp"
#include "gdl/time_randomization.hpp"

namespace gdl {

enum class BathVariant { frequency_sampled, gaussian_field };

inline BathVariant parse_bath_variant(const std::string& s) {
    if (s == "frequency_sampled") return BathVariant::frequency_sampled;
    if (s == "gaussian_field") return BathVariant::gaussian_field;
    throw ParameterError("unknown bath variant '" + s + "'");
}

struct BathConfig {
    BathVariant variant = BathVariant::frequency_sampled;
    double beta = 1.0;
    double sigma = 2.0;  // envelope width in the frequency-sampled convention for both variants
};

enum class Integrator { midpoint, magnus4 };

inline Integrator parse_integrator(const std::string& s) {
    if (s == "midpoint") return Integrator::midpoint;
    if (s == "magnus4") return Integrator::magnus4;
    throw ParameterError("unknown integrator '" + s + "'");
}

struct ChannelConfig {
    double alpha = 0.05;
    TimeLaw law = TimeLaw::random_mu(10.0);
    OmegaQuadSpec omega;
    int n_T_nodes = 16;  // Gauss-Legendre nodes per T panel
    int steps_per_unit_time = 64;
    Integrator integrator = Integrator::midpoint;
};

// One bath sample: coupling (eigenbasis), bath frequency w (or field h) and
// the bath level populations.
struct BathSample {
    Mat a_eig;
    double omega = 0.0;
    double p0 = 1.0, p1 = 0.0;
};

// Bath state for Setup 1 at frequency w: exp(-beta_tilde H_E) / Z with H_E = -w Z / 2.
inline std::array<double, 2> bath_populations(double beta_tilde, double w) {
    const double p0 = lower_occupation(beta_tilde, w);
    return {p0, 1.0 - p0};
}

using JointBlocks = std::array<Mat, 4>;  // [b_out * 2 + b_in]

inline JointBlocks joint_identity(int d) {
    const Mat id = Mat::Identity(d, d), z = Mat::Zero(d, d);
    return {id, z, z, id};
}

inline JointBlocks block_mul(const JointBlocks& x, const JointBlocks& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

inline JointBlocks block_adjoint(const JointBlocks& x) {
    return {x[0].adjoint(), x[2].adjoint(), x[1].adjoint(), x[3].adjoint()};
}

// system (x) bath ordering, index 2 s + b
inline Mat blocks_to_joint(const JointBlocks& x) {
    const auto d = x[0].rows();
    Mat u(2 * d, 2 * d);
    for (int bo = 0; bo < 2; ++bo)
        for (int bi = 0; bi < 2; ++bi)
            for (Eigen::Index s = 0; s < d; ++s)
                for (Eigen::Index t = 0; t < d; ++t) u(2 * s + bo, 2 * t + bi) = x[bo * 2 + bi](s, t);
    return u;
}

class InteractionPropagator {
public:
    InteractionPropagator(const RVec& lambda, const BathSample& smp, double alpha, double sigma, Integrator integ)
        : lambda_(lambda), a_(smp.a_eig), omega_(smp.omega), alpha_(alpha), sigma_(sigma), integ_(integ) {}

    // Y(t) = alpha f(t) A_I(t) exp(i w t): the b = 0 -> 1 block of H_I(t).
    Mat coupling_block(double t) const {
        const Eigen::Index d = lambda_.size();
        const double amp = alpha_ * envelope_f(t, sigma_);
        Mat y(d, d);
        for (Eigen::Index k = 0; k < d; ++k)
            for (Eigen::Index j = 0; j < d; ++j)
                y(j, k) = amp * a_(j, k) * std::exp(I_unit * ((lambda_(j) - lambda_(k) + omega_) * t));
        return y;
    }

    // Step from t to t + h (h may be negative).
    JointBlocks step(double t, double h) const {
        if (integ_ == Integrator::midpoint) return offdiag_exp(h * coupling_block(t + 0.5 * h));
        const double c = std::sqrt(3.0) / 6.0;
        const Mat y1 = coupling_block(t + (0.5 - c) * h), y2 = coupling_block(t + (0.5 + c) * h);
        // M = h/2 (H1 + H2) - i sqrt(3)/12 h^2 [H2, H1]
        const double k = std::sqrt(3.0) / 12.0 * h * h;
        const Mat d0 = -I_unit * k * (y2.adjoint() * y1 - y1.adjoint() * y2);
        const Mat d1 = -I_unit * k * (y2 * y1.adjoint() - y1 * y2.adjoint());
        const Mat x = 0.5 * h * (y1 + y2);
        const auto d = x.rows();
        Mat m(2 * d, 2 * d);
        m << d0, x.adjoint(), x, d1;
        const HermEig e = herm_eig(m);
        const Mat u = e.vectors * (-I_unit * e.values.cast<cplx>()).array().exp().matrix().asDiagonal() * e.vectors.adjoint();
        return {u.topLeftCorner(d, d), u.topRightCorner(d, d), u.bottomLeftCorner(d, d), u.bottomRightCorner(d, d)};
    }

    // exp(-i [[0, X^dag], [X, 0]]) in closed form from the eigensystem of X^dag X.
    static JointBlocks offdiag_exp(const Mat& x) {
        const auto d = x.rows();
        const HermEig e = herm_eig(x.adjoint() * x);
        CVec cs(d), sn(d), cm(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            const double s = std::sqrt(std::max(e.values(i), 0.0));
            if (s < 1e-4) {
                const double s2 = s * s;
                cs(i) = 1.0 - s2 / 2.0 + s2 * s2 / 24.0;
                sn(i) = 1.0 - s2 / 6.0 + s2 * s2 / 120.0;
                cm(i) = -0.5 + s2 / 24.0 - s2 * s2 / 720.0;
            } else {
                cs(i) = std::cos(s);
                sn(i) = std::sin(s) / s;
                cm(i) = (std::cos(s) - 1.0) / (s * s);
            }
        }
        const Mat& w = e.vectors;
        const Mat c1 = w * cs.asDiagonal() * w.adjoint();
        const Mat s1 = w * sn.asDiagonal() * w.adjoint();
        const Mat c2 = Mat::Identity(d, d) + x * w * cm.asDiagonal() * w.adjoint() * x.adjoint();
        return {c1, -I_unit * s1 * x.adjoint(), -I_unit * x * s1, c2};
    }

    // Propagate from 0 through the sorted |targets| in the direction of sgn,
    // recording U_I(sgn * target, 0).
    std::vector<JointBlocks> sweep(const std::vector<double>& targets, double sgn, int steps_per_unit) const {
        std::vector<JointBlocks> out;
        JointBlocks u = joint_identity(static_cast<int>(lambda_.size()));
        double t = 0.0;
        for (double tgt : targets) {
            const double span = tgt - t;
            const int n = std::max(0, static_cast<int>(std::ceil(span * steps_per_unit - 1e-9)));
            const double h = n > 0 ? span / n : 0.0;
            for (int i = 0; i < n; ++i) {
                u = block_mul(step(sgn * (t + i * h), sgn * h), u);
            }
            t = tgt;
            out.push_back(u);
        }
        return out;
    }

private:
    RVec lambda_;
    Mat a_;
    double omega_, alpha_, sigma_;
    Integrator integ_;
};

// Superoperator of rho -> sum_b p_b sum_b' U_{b'b} rho U_{b'b}^dag (eigen-Liouville basis).
inline Mat reduced_superop(const JointBlocks& u, double p0, double p1) {
    const auto d = u[0].rows();
    Mat s = Mat::Zero(d * d, d * d);
    const double p[2] = {p0, p1};
    for (int bi = 0; bi < 2; ++bi) {
        if (p[bi] == 0.0) continue;
        for (int bo = 0; bo < 2; ++bo) {
            const Mat& k = u[bo * 2 + bi];
            s += p[bi] * kron(k.conjugate(), k);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Single-sample API (lab frame, computational basis)

// Lab-frame propagator on [-T, T] in system (x) bath ordering.
inline Mat joint_propagator(const SystemModel& s, const BathConfig& bath, const Mat& a, double omega, double alpha,
                            double T, int steps_per_unit_time, Integrator integ = Integrator::midpoint) {
    if (!(T > 0.0)) throw ParameterError("T must be positive");
    const int d = s.dim();
    BathSample smp{s.to_eig(a), omega, 1.0, 0.0};
    InteractionPropagator prop(s.eigenvalues, smp, alpha, bath.sigma, integ);
    const double te = std::min(T, envelope_cutoff(bath.sigma));
    const JointBlocks uf = prop.sweep({te}, 1.0, steps_per_unit_time).back();
    const JointBlocks ub = prop.sweep({te}, -1.0, steps_per_unit_time).back();
    const Mat ui = blocks_to_joint(block_mul(uf, block_adjoint(ub)));
    // free factor exp(-i H0 T), H0 = H (x) 1 + 1 (x) H_E with H_E = -w Z / 2
    CVec ph(2 * d);
    for (int j = 0; j < d; ++j) {
        ph(2 * j) = std::exp(-I_unit * (s.eigenvalues(j) - 0.5 * omega) * T);
        ph(2 * j + 1) = std::exp(-I_unit * (s.eigenvalues(j) + 0.5 * omega) * T);
    }
    const Mat u_lab_eig = ph.asDiagonal() * ui * ph.asDiagonal();
    const Mat big_u = kron(s.eigenvectors, Mat::Identity(2, 2));
    const Mat u = big_u * u_lab_eig * big_u.adjoint();
    if (max_abs(u.adjoint() * u - Mat::Identity(2 * d, 2 * d)) > 1e-10)
        throw IntegrationError("joint propagator lost unitarity; increase steps_per_unit_time");
    return u;
}

// Tr_E[U (rho (x) rho_E) U^dag] for one sample.
inline Mat channel_single(const Mat& rho, const SystemModel& s, const BathConfig& bath, const Mat& a, double omega,
                          double alpha, double T, int steps_per_unit_time, Integrator integ = Integrator::midpoint) {
    const Mat u = joint_propagator(s, bath, a, omega, alpha, T, steps_per_unit_time, integ);
    Mat rho_e = Mat::Zero(2, 2);
    if (bath.variant == BathVariant::frequency_sampled) {
        const SpectralDensities sd = spectral_densities(bath.beta, bath.sigma);
        const auto p = bath_populations(sd.beta_tilde, omega);
        rho_e(0, 0) = p[0];
        rho_e(1, 1) = p[1];
    } else {
        rho_e(0, 0) = 1.0;
    }
    return hermitize(partial_trace_bath(u * kron(rho, rho_e) * u.adjoint()));
}

// ---------------------------------------------------------------------------
// Averaged channel

struct ChannelStats {
    double choi_min = 0.0;
    double trace_defect = 0.0;
    std::size_t samples = 0;
    std::size_t t_nodes = 0;
};

// Liouville-space change of basis: vec(U X U^dag) = kron(conj U, U) vec X.
inline Mat liouville_from_eig(const SystemModel& s, const Mat& sup_eig) {
    const Mat pu = kron(s.eigenvectors.conjugate(), s.eigenvectors);
    return pu * sup_eig * pu.adjoint();
}

inline Mat liouville_to_eig(const SystemModel& s, const Mat& sup) {
    const Mat pu = kron(s.eigenvectors.conjugate(), s.eigenvectors);
    return pu.adjoint() * sup * pu;
}

// Bohr phase of Liouville index a = j + d k: lambda_j - lambda_k.
inline RVec liouville_phases(const SystemModel& s) {
    const int d = s.dim();
    RVec phi(d * d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) phi(j + d * k) = s.eigenvalues(j) - s.eigenvalues(k);
    return phi;
}

inline std::vector<BathSample> bath_samples(const SystemModel& s, const BathConfig& bath, const OmegaQuadSpec& oq,
                                            std::vector<double>& weights) {
    const SpectralDensities sd = spectral_densities(bath.beta, bath.sigma);
    const QuadRule rule = omega_rule(sd, oq);
    const auto cps = distinct_couplings(s.couplings);
    std::vector<BathSample> out;
    weights.clear();
    for (const auto& c : cps) {
        const Mat ae = s.to_eig(c.a);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            BathSample smp;
            smp.a_eig = ae;
            if (bath.variant == BathVariant::frequency_sampled) {
                smp.omega = rule.nodes[i];
                const auto p = bath_populations(sd.beta_tilde, smp.omega);
                smp.p0 = p[0];
                smp.p1 = p[1];
            } else {
                // field h ~ N(1/beta, sigma_beta / beta^2), the mirror image of g
                smp.omega = -rule.nodes[i];
                smp.p0 = 1.0;
                smp.p1 = 0.0;
            }
            out.push_back(smp);
            weights.push_back(c.weight * rule.weights[i]);
        }
    }
    return out;
}

inline SuperOperator channel_superop(const SystemModel& s, const BathConfig& bath, const ChannelConfig& cfg,
                                     ChannelStats* stats = nullptr) {
    if (!(cfg.alpha >= 0.0)) throw ParameterError("alpha must be nonnegative");
    if (cfg.n_T_nodes < 3) throw ParameterError("n_T_nodes must be at least 3");
    if (cfg.steps_per_unit_time < 1) throw ParameterError("steps_per_unit_time must be positive");
    const int d = s.dim();
    const int d2 = d * d;
    const double tc = envelope_cutoff(bath.sigma);
    const RVec phi = liouville_phases(s);
    const double max_freq = 2.0 * std::max(s.spectral_range(), 1.0 / bath.sigma);

    // T nodes inside [lower, tc] carry their own C_I(T); the rest uses C_I(tc).
    QuadRule tq;
    const TimeLaw& law = cfg.law;
    if (law.kind == TimeLaw::Kind::mu && law.T0 < tc)
        tq = mu_quadrature(law.T0, 0.0, tc / law.T0 - 1.0, max_freq, cfg.n_T_nodes);
    if (law.kind == TimeLaw::Kind::fixed && law.T < tc) tq = {{law.T}, {1.0}};
    std::vector<double> targets = tq.nodes;
    const bool need_tail = !(law.kind == TimeLaw::Kind::fixed && law.T < tc);
    if (need_tail) targets.push_back(tc);

    std::vector<double> wts;
    const std::vector<BathSample> samples = bath_samples(s, bath, cfg.omega, wts);

    // fixed chunking keeps the reduction order independent of the thread count
    const std::size_t n_chunks = std::min<std::size_t>(64, samples.size());
    std::vector<std::vector<Mat>> acc(n_chunks);
    parallel_for(n_chunks, [&](std::size_t c) {
        std::vector<Mat> local(targets.size(), Mat::Zero(d2, d2));
        for (std::size_t n = c; n < samples.size(); n += n_chunks) {
            const BathSample& smp = samples[n];
            InteractionPropagator prop(s.eigenvalues, smp, cfg.alpha, bath.sigma, cfg.integrator);
            const auto fw = prop.sweep(targets, 1.0, cfg.steps_per_unit_time);
            const auto bw = prop.sweep(targets, -1.0, cfg.steps_per_unit_time);
            for (std::size_t q = 0; q < targets.size(); ++q)
                local[q] += wts[n] * reduced_superop(block_mul(fw[q], block_adjoint(bw[q])), smp.p0, smp.p1);
        }
        acc[c] = std::move(local);
    });
    std::vector<Mat> kq(targets.size(), Mat::Zero(d2, d2));
    for (std::size_t c = 0; c < n_chunks; ++c)
        for (std::size_t q = 0; q < targets.size(); ++q) kq[q] += acc[c][q];

    // wrap with U_S(T) on both sides and average over T
    Mat total = Mat::Zero(d2, d2);
    for (std::size_t q = 0; q < tq.size(); ++q) {
        const double t = tq.nodes[q];
        const CVec ph = (-I_unit * t * phi.cast<cplx>()).array().exp();
        total += tq.weights[q] * (ph.asDiagonal() * kq[q] * ph.asDiagonal());
    }
    if (need_tail) {
        const Mat& kinf = kq.back();
        for (int b = 0; b < d2; ++b)
            for (int a = 0; a < d2; ++a) total(a, b) += kinf(a, b) * tail_phase_average(law, phi(a) + phi(b), tc);
    }
    SuperOperator out(d, liouville_from_eig(s, total));
    const double cmin = choi_min_eigenvalue(out);
    const double tdef = trace_preservation_defect(out);
    if (stats) *stats = {cmin, tdef, samples.size(), tq.size()};
    if (cmin < -1e-8) throw ResolutionError("averaged channel violates complete positivity beyond -1e-8; refine quadrature");
    if (tdef > 1e-10) throw ResolutionError("averaged channel is not trace preserving within 1e-10; refine quadrature");
    return out;
}

} // namespace gdl
