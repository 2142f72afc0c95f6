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

#include <catch_amalgamated.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include "gdl/lindblad_generator.hpp"

using namespace gdl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemModel random_instance(int n, unsigned long long seed, double scale = 0.5) {
    SystemParams p;
    p.scale = scale;
    return build_system("random_hermitian", n, p, seed, "random:2");
}

// int_{t > t'} f(t') exp(i a t') f(t) exp(i b t) by a cumulative trapezoid
cplx ordered_integral(double a, double b, double sigma) {
    const double L = 14.0 * sigma, dt = sigma / 400.0;
    const int n = static_cast<int>(2.0 * L / dt);
    cplx inner = 0.0, out = 0.0;
    cplx prev = envelope_f(-L, sigma) * std::exp(-I_unit * a * L);
    for (int i = 1; i <= n; ++i) {
        const double t = -L + i * dt;
        const cplx cur = envelope_f(t, sigma) * std::exp(I_unit * a * t);
        inner += 0.5 * dt * (prev + cur);
        prev = cur;
        out += (i == n ? 0.5 : 1.0) * dt * envelope_f(t, sigma) * std::exp(I_unit * b * t) * inner;
    }
    return out;
}

} // namespace

TEST_CASE("filter identity gamma = g on a 101-point grid", "[lindblad]") {
    for (double sigma : {2.0, 4.0}) {
        const SpectralDensities sd = spectral_densities(1.0, sigma);
        double m = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double w = sd.mean - 8.0 * sd.std_dev() + 16.0 * sd.std_dev() * i / 100.0;
            m = std::max(m, std::abs(sd.gamma(w) - sd.g(w)));
        }
        CHECK(m <= 1e-12);
        CHECK_THAT(sd.sigma_beta, WithinAbs(2.0 - 1.0 / (4.0 * sigma * sigma), 1e-15));
    }
    CHECK_THROWS(spectral_densities(1.0, 0.3));  // sigma_beta < 0
}

TEST_CASE("envelope transform normalization", "[lindblad]") {
    // |fhat|^2 integrates to 2 pi int f^2 = 2 pi
    const double sigma = 1.7;
    double acc = 0.0;
    const int n = 20000;
    const double L = 10.0 / sigma, h = 2.0 * L / n;
    for (int i = 0; i <= n; ++i) {
        const double u = -L + i * h;
        acc += (i == 0 || i == n ? 0.5 : 1.0) * std::pow(envelope_f_hat(u, sigma), 2);
    }
    CHECK_THAT(acc * h, WithinRel(2.0 * std::numbers::pi, 1e-12));
    CHECK(envelope_f(envelope_cutoff(sigma), sigma) / envelope_f(0.0, sigma) <= 1.0001e-17);
}

TEST_CASE("half-line kernel: closed form against adaptive quadrature", "[lindblad]") {
    TauQuadSpec ad;
    ad.method = "adaptive";
    for (double kappa : {-1.3, -0.2, 0.0, 0.05, 0.9}) {
        const cplx a = half_line_kernel(kappa, 2.0, {});
        const cplx b = half_line_kernel(kappa, 2.0, ad);
        CHECK(std::abs(a - b) < 1e-10);
    }
    CHECK_THROWS_AS(half_line_kernel(0.1, 1.0, {"simpson", 16.0, 1e-12}), ParameterError);
}

TEST_CASE("correlation operator against a direct time-ordered integral", "[lindblad]") {
    const SystemModel s = random_instance(1, 5, 0.8);
    std::mt19937_64 rng(3);
    const Mat a = random_matrix(2, rng);
    const double w = 0.3, sigma = 1.5;
    const Mat ae = s.to_eig(a);
    const RVec& l = s.eigenvalues;
    const Mat g = g_correlation_eig(ae, l, w, sigma, {});
    // G_A(w) = int_{t > t'} f(t) f(t') exp(-i w (t - t')) A^dag(t') A(t)
    Mat ref = Mat::Zero(2, 2);
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            for (int m = 0; m < 2; ++m)
                ref(j, k) += ae.adjoint()(j, m) * ae(m, k) * ordered_integral(l(j) - l(m) + w, l(m) - l(k) - w, sigma);
    CHECK(max_abs(g - ref) < 1e-5 * max_abs(ref));
}

TEST_CASE("G + G^dag = V^dag V", "[lindblad]") {
    const SystemModel s = random_instance(2, 7);
    std::mt19937_64 rng(4);
    const Mat a = random_matrix(4, rng);
    for (double w : {-1.0, 0.0, 0.4}) {
        const Mat g = g_correlation(a, w, s, 2.0);
        const Mat v = jump_operator(a, w, s, 2.0);
        CHECK(max_abs(g + g.adjoint() - v.adjoint() * v) < 1e-12 * max_abs(v.adjoint() * v));
    }
}

TEST_CASE("exact detailed balance of the transition part and stationarity", "[lindblad]") {
    for (int n : {1, 2})
        for (double sigma : {2.0, 4.0}) {
            const SystemModel s = random_instance(n, 3);
            const GeneratorParts g = assemble_generator(s, 1.0, sigma);
            const DensityMatrix rho = gibbs_state(s, 1.0);
            CHECK(kms_defect(g.transition, rho) <= 1e-8);
            CHECK(trace_norm(apply_superop(g.L_KMS, rho.matrix())) <= 1e-10);
            // L_full = -i[H_Lamb, .] + L_KMS
            CHECK(max_abs(g.L_full.matrix() - hamiltonian_superop(g.H_Lamb).matrix() - g.L_KMS.matrix()) < 1e-13);
            CHECK(trace_preservation_defect(SuperOperator::identity(s.dim()) + g.L_full) < 1e-13);
            CHECK(choi_min_eigenvalue(SuperOperator(s.dim(), Mat(g.L_full.matrix().exp()))) > -1e-12);
        }
}

TEST_CASE("the same holds for a structured Hamiltonian with Pauli couplings", "[lindblad]") {
    const SystemModel s = build_system("tfim_chain", 2, {}, 0, "XZ");
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const DensityMatrix rho = gibbs_state(s, 1.0);
    CHECK(kms_defect(g.transition, rho) <= 1e-8);
    CHECK(trace_norm(apply_superop(g.L_KMS, rho.matrix())) <= 1e-10);
}

TEST_CASE("tanh-Bohr transform entrywise", "[lindblad]") {
    const SystemModel s = random_instance(2, 11);
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const Mat me = s.to_eig(g.M_D);
    Mat ge(4, 4);
    for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 4; ++k)
            ge(l, k) = 0.5 * I_unit * std::tanh((s.eigenvalues(l) - s.eigenvalues(k)) / 4.0) * me(l, k);
    CHECK(max_abs(s.to_eig(g.G_D) - ge) < 1e-14);
    CHECK(is_hermitian(g.G_D));
}

TEST_CASE("frequency quadrature is converged", "[lindblad]") {
    const SystemModel s = random_instance(1, 3);
    const GeneratorParts a = assemble_generator(s, 1.0, 2.0);
    GeneratorQuad fine;
    fine.omega.n_nodes = 20;
    fine.omega.width_stds = 10.0;
    const GeneratorParts b = assemble_generator(s, 1.0, 2.0, fine);
    CHECK(max_abs(a.L_full.matrix() - b.L_full.matrix()) < 1e-12);
    // a global Hermite rule approaches the same answer, slowly: the integrand
    // carries fhat^2 factors of width ~ 1/sigma
    auto gh_error = [&](int n) {
        GeneratorQuad gh;
        gh.omega.rule = "gauss_hermite";
        gh.omega.n_nodes = n;
        return max_abs(a.L_full.matrix() - assemble_generator(s, 1.0, 2.0, gh).L_full.matrix());
    };
    const double e40 = gh_error(40), e120 = gh_error(120);
    CHECK(e120 < e40);
    CHECK(e120 < 1e-3);
}

TEST_CASE("sign pairs of couplings are merged", "[lindblad]") {
    const auto d = distinct_couplings({pauli('X'), Mat(-pauli('X')), pauli('Z')});
    REQUIRE(d.size() == 2);
    CHECK_THAT(d[0].weight, WithinAbs(2.0 / 3.0, 1e-15));
}
