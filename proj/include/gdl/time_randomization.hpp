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

// time_randomization.hpp - random interaction time law mu, the signed
// measure nu, the correction operator E and the cancellation residual
//
// Fourier convention: fhat(w) = int f(t) exp(i w t) dt.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "gdl/model.hpp"
#include "gdl/parallel.hpp"
#include "gdl/quadrature.hpp"

namespace gdl {

// mu(t) = mu0(t/T0)/T0 with mu0(t) = (t-1)^3 exp(-(t-1))/6 on t >= 1.
struct TimeDistribution {
    double T0 = 1.0;

    explicit TimeDistribution(double t0 = 1.0) : T0(t0) {
        if (!(t0 > 0.0)) throw ParameterError("T0 must be positive");
    }
    double pdf(double t) const {
        const double s = t / T0 - 1.0;
        return s < 0.0 ? 0.0 : s * s * s * std::exp(-s) / (6.0 * T0);
    }
    double mean() const { return 5.0 * T0; }
};

namespace detail {

inline cplx cexpm1(cplx z) {
    if (std::abs(z) < 1e-3) {
        cplx term = z, sum = z;
        for (int k = 2; k < 10; ++k) {
            term *= z / static_cast<double>(k);
            sum += term;
        }
        return sum;
    }
    return std::exp(z) - 1.0;
}

inline cplx clog1p(cplx z) {
    if (std::abs(z) < 1e-3) {
        cplx pw = z, sum = 0.0;
        for (int k = 1; k < 10; ++k) {
            sum += (k % 2 ? 1.0 : -1.0) * pw / static_cast<double>(k);
            pw *= z;
        }
        return sum;
    }
    return std::log(1.0 + z);
}

// log mu0hat(w) = i w - 4 log(1 - i w)
inline cplx log_mu0_hat(double w) { return I_unit * w - 4.0 * clog1p(-I_unit * w); }

} // namespace detail

inline cplx mu0_hat(double w) { return std::exp(I_unit * w) / std::pow(1.0 - I_unit * w, 4); }

inline cplx mu_hat(double omega, double T0) { return mu0_hat(T0 * omega); }

inline cplx nu0_hat(double w) {
    if (w == 0.0) return I_unit / 10.0;
    const cplx denom = -detail::cexpm1(detail::log_mu0_hat(2.0 * w));
    return w * mu0_hat(w) / denom;
}

inline cplx nu_hat(double omega, double T0) { return nu0_hat(T0 * omega) / T0; }

// ---------------------------------------------------------------------------
// Laws for the interaction time T.

struct TimeLaw {
    enum class Kind { fixed, mu };
    Kind kind = Kind::mu;
    double T = 1.0;   // fixed
    double T0 = 1.0;  // mu

    static TimeLaw fixed(double t) { return {Kind::fixed, t, t}; }
    static TimeLaw random_mu(double t0) { return {Kind::mu, 5.0 * t0, t0}; }
    double lower() const { return kind == Kind::fixed ? T : T0; }
};

// E[exp(-i Omega T)]
inline cplx phase_average(const TimeLaw& law, double Omega) {
    if (law.kind == TimeLaw::Kind::fixed) return std::exp(-I_unit * Omega * law.T);
    return mu_hat(-Omega, law.T0);
}

// E[exp(-i Omega T) 1{T >= c}] in closed form.
inline cplx tail_phase_average(const TimeLaw& law, double Omega, double c) {
    if (law.kind == TimeLaw::Kind::fixed)
        return law.T >= c ? std::exp(-I_unit * Omega * law.T) : cplx(0.0);
    const double a = std::max(0.0, c / law.T0 - 1.0);
    const cplx p = 1.0 + I_unit * Omega * law.T0;
    // int_a^inf s^3 exp(-p s) ds
    const cplx ip = 1.0 / p;
    const cplx poly = a * a * a * ip + 3.0 * a * a * ip * ip + 6.0 * a * ip * ip * ip + 6.0 * ip * ip * ip * ip;
    return std::exp(-I_unit * Omega * law.T0) * std::exp(-p * a) * poly / 6.0;
}

// Quadrature for E_mu[h(T) 1{T in [T0 (1+s_lo), T0 (1+s_hi)]}] in the
// variable s = T/T0 - 1; weights include the density. Panels are narrow
// enough that exp(i max_freq T) turns by at most pi per panel.
inline QuadRule mu_quadrature(double T0, double s_lo, double s_hi, double max_freq, int per_panel = 16) {
    double width = 1.0;
    if (max_freq > 0.0) width = std::min(width, std::numbers::pi / (max_freq * T0));
    QuadRule base = composite_legendre_width(s_lo, s_hi, width, per_panel);
    QuadRule out;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double s = base.nodes[i];
        out.nodes.push_back(T0 * (1.0 + s));
        out.weights.push_back(base.weights[i] * s * s * s * std::exp(-s) / 6.0);
    }
    return out;
}

// Full-support rule; s is truncated at 80 where the remaining mass is ~1e-29.
inline QuadRule time_law_quadrature(const TimeLaw& law, double max_freq, int per_panel = 16) {
    if (law.kind == TimeLaw::Kind::fixed) return {{law.T}, {1.0}};
    return mu_quadrature(law.T0, 0.0, 80.0, max_freq, per_panel);
}

// ---------------------------------------------------------------------------
// The signed measure nu on a time grid. nu is i times a real density.

struct NuGridSpec {
    double half_width = 64.0;  // in units of T0
    double dt = 0.01;          // in units of T0
    double omega_max = 100.0;  // in units of 1/T0
    double domega = 0.01;      // in units of 1/T0
};

struct SignedMeasure {
    std::vector<double> grid;
    std::vector<cplx> density;
    double L1 = 0.0;
    cplx total() const {
        cplx s = 0.0;
        const double h = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
        for (const auto& v : density) s += v;
        return s * h;
    }
};

namespace detail {

// mu0'(t) for the unit-scale law
inline double mu0_prime(double t) {
    const double s = t - 1.0;
    return s <= 0.0 ? 0.0 : (3.0 * s * s - s * s * s) * std::exp(-s) / 6.0;
}

} // namespace detail

// Inverts nu0hat = i FT[mu0'] + R with R(w) = w mu0hat(w) mu0hat(2w) / (1 - mu0hat(2w)).
// R decays like |w|^-7, so the trapezoid sum over [-omega_max, omega_max]
// carries no visible truncation ripple; the first part is exact.
inline SignedMeasure nu_time_grid(double T0, const NuGridSpec& spec = {}) {
    if (!(T0 > 0.0)) throw ParameterError("T0 must be positive");
    if (spec.half_width < 40.0) throw ParameterError("nu grid must cover at least 40 T0");
    const int nt = static_cast<int>(std::llround(2.0 * spec.half_width / spec.dt)) + 1;
    const int nw = static_cast<int>(std::llround(spec.omega_max / spec.domega));
    std::vector<cplx> rhat(nw + 1);
    for (int m = 0; m <= nw; ++m) {
        const double w = m * spec.domega;
        rhat[m] = nu0_hat(w) - w * mu0_hat(w);
    }
    std::vector<double> t0(nt);
    std::vector<cplx> dens(nt);
    parallel_for(nt, [&](std::size_t i) {
        const double t = -spec.half_width + static_cast<double>(i) * spec.dt;
        // R(-w) = -conj R(w), so the symmetric sum is i (Im R(0) + 2 Im of the half sum)
        const cplx step = std::exp(-I_unit * spec.domega * t);
        cplx ph = 1.0, acc = 0.0;
        for (int m = 1; m <= nw; ++m) {
            if (m % 512 == 0) ph = std::exp(-I_unit * (m * spec.domega) * t);
            else ph *= step;
            const double wt = (m == nw) ? 0.5 : 1.0;
            acc += wt * rhat[m] * ph;
        }
        const double im = (rhat[0].imag() + 2.0 * acc.imag()) * spec.domega / (2.0 * std::numbers::pi);
        t0[i] = t;
        dens[i] = I_unit * (im + detail::mu0_prime(t));
    });
    SignedMeasure out;
    out.grid.resize(nt);
    out.density.resize(nt);
    double l1 = 0.0, tail = 0.0;
    for (int i = 0; i < nt; ++i) {
        out.grid[i] = T0 * t0[i];
        out.density[i] = dens[i] / (T0 * T0);  // nu(t) = nu0(t / T0) / T0^2
        l1 += std::abs(dens[i]);
        if (std::abs(t0[i]) > 0.9 * spec.half_width) tail += std::abs(dens[i]);
    }
    out.L1 = l1 * spec.dt / T0;
    if (tail > 1e-6 * l1) throw ResolutionError("nu grid truncates more than 1e-6 of its mass");
    return out;
}

// ---------------------------------------------------------------------------
// Correction operators

struct CorrectionOperators {
    Mat Y;          // anti-Hermitian, traceless
    Mat E;          // Hermitian, traceless
    Mat rho_star;   // rho_beta + alpha^2 E
};

inline Mat correction_Y(const Mat& h_lamb, const SystemModel& s, double beta) {
    const int d = s.dim();
    const RVec p = gibbs_populations(s, beta);
    const Mat he = s.to_eig(h_lamb);
    Mat y = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            if (j == k) continue;
            const double dl = s.eigenvalues(j) - s.eigenvalues(k);
            if (std::abs(dl) < s.gap_tol)
                y(j, k) = I_unit * beta * he(j, k) * 0.5 * (p(j) + p(k));
            else
                y(j, k) = -I_unit * he(j, k) * (p(j) - p(k)) / dl;
        }
    return y;  // eigenbasis
}

// E_jk = nuhat(lambda_k - lambda_j) Y_jk in the eigenbasis.
inline CorrectionOperators correction_E(const Mat& h_lamb, const SystemModel& s, double beta, double T0,
                                        double alpha) {
    const int d = s.dim();
    const Mat y = correction_Y(h_lamb, s, beta);
    Mat e = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            if (j == k) continue;
            double w = s.eigenvalues(k) - s.eigenvalues(j);
            if (std::abs(w) < s.gap_tol) w = 0.0;
            e(j, k) = nu_hat(w, T0) * y(j, k);
        }
    CorrectionOperators out;
    out.Y = s.from_eig(y);
    out.E = hermitize(s.from_eig(e));
    out.rho_star = hermitize(gibbs_state(s, beta).matrix() + alpha * alpha * out.E);
    return out;
}

// E_T[U(2T) E U(2T)^dag - E + U(T)(-i[H_lamb, rho_beta])U(T)^dag] by
// quadrature over the law; U(T) = exp(-iHT).
inline Mat delta_residual(const Mat& E, const Mat& h_lamb, const SystemModel& s, double beta, const TimeLaw& law,
                          int per_panel = 16) {
    const int d = s.dim();
    const Mat rho = gibbs_state(s, beta).matrix();
    const Mat src = s.to_eig(-I_unit * (h_lamb * rho - rho * h_lamb));
    const Mat ee = s.to_eig(E);
    const double max_freq = 2.0 * std::max(s.spectral_range(), 1e-12);
    const QuadRule q = time_law_quadrature(law, max_freq, per_panel);
    Mat out = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            const double phi = s.eigenvalues(j) - s.eigenvalues(k);
            cplx a1 = 0.0, a2 = 0.0, wsum = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                a2 += q.weights[i] * std::exp(-I_unit * 2.0 * phi * q.nodes[i]);
                a1 += q.weights[i] * std::exp(-I_unit * phi * q.nodes[i]);
                wsum += q.weights[i];
            }
            out(j, k) = (a2 - wsum) * ee(j, k) + a1 * src(j, k);
        }
    return s.from_eig(out);
}

} // namespace gdl
