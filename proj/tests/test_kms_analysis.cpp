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

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "gdl/kms_analysis.hpp"
#include "gdl/lindblad_generator.hpp"

using namespace gdl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemModel reference_system() {
    SystemParams p;
    p.scale = 0.5;
    return build_system("random_hermitian", 1, p, 3, "random:2");
}

// <X, Y> = Tr(X^dag rho^{-1/2} Y rho^{-1/2})
cplx weighted(const Mat& x, const Mat& y, const Mat& rm) { return (x.adjoint() * rm * y * rm).trace(); }

std::vector<Mat> traceless_basis(int d) {
    std::vector<Mat> b;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            if (j != k) b.push_back(matrix_unit(d, j, k));
    for (int j = 0; j + 1 < d; ++j) b.push_back(matrix_unit(d, j, j) - matrix_unit(d, j + 1, j + 1));
    return b;
}

} // namespace

TEST_CASE("mixing-time bound arithmetic", "[kms]") {
    Mat r = Mat::Zero(2, 2);
    r(0, 0) = 0.75;
    r(1, 1) = 0.25;
    const DensityMatrix rho(r);
    CHECK_THAT(mixing_time_bound(0.5, 0.1, 1e-3, rho), WithinRel(200.0 * std::log(4000.0), 1e-12));
    CHECK_THAT(mixing_time_bound(0.5, 0.1, 200.0 * 0.02, rho), WithinAbs(0.0, 1e-15));
    CHECK(mixing_time_bound(0.5, 0.1, 4.0, rho) == 0.0);
    CHECK_THROWS_AS(mixing_time_bound(0.0, 0.1, 1e-3, rho), ParameterError);
}

TEST_CASE("spectral gap equals the variational infimum", "[kms]") {
    for (int n : {1, 2}) {
        SystemParams p;
        p.scale = 0.5;
        const SystemModel s = build_system("random_hermitian", n, p, 3, "random:2");
        const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
        const DensityMatrix rho = gibbs_state(s, 1.0);
        const GapReport gr = spectral_gap(g.L_KMS, rho);
        REQUIRE(gr.primitive());
        const int d = s.dim();
        const Mat rm = op_power(rho, -0.5);
        const auto basis = traceless_basis(d);
        const auto nb = basis.size();
        Mat q(nb, nb), gm(nb, nb);
        for (std::size_t a = 0; a < nb; ++a)
            for (std::size_t b = 0; b < nb; ++b) {
                q(a, b) = -weighted(basis[a], apply_superop(g.L_KMS, basis[b]), rm);
                gm(a, b) = weighted(basis[a], basis[b], rm);
            }
        const Mat qs = hermitize(q);
        Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(qs, hermitize(gm));
        CHECK_THAT(ges.eigenvalues()(0), WithinAbs(gr.gap, 1e-10));
        // random trial operators never go below the gap
        std::mt19937_64 rng(42);
        double best = 1e300;
        for (int t = 0; t < 500; ++t) {
            Mat x = random_matrix(d, rng);
            x -= (x.trace() / double(d)) * Mat::Identity(d, d);
            const double r = -weighted(x, apply_superop(g.L_KMS, x), rm).real() / weighted(x, x, rm).real();
            best = std::min(best, r);
        }
        CHECK(best >= gr.gap - 1e-10);
        // the minimizer attains it
        CVec v = ges.eigenvectors().col(0);
        Mat xm = Mat::Zero(d, d);
        for (std::size_t a = 0; a < nb; ++a) xm += v(a) * basis[a];
        const double rm_val = -weighted(xm, apply_superop(g.L_KMS, xm), rm).real() / weighted(xm, xm, rm).real();
        CHECK_THAT(rm_val, WithinAbs(gr.gap, 1e-6));
    }
}

TEST_CASE("similarity transform of a KMS generator is self-adjoint", "[kms]") {
    const SystemModel s = reference_system();
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const DensityMatrix rho = gibbs_state(s, 1.0);
    const SimilaritySplit sp = similarity_transform(g.L_KMS, rho);
    CHECK(max_abs(sp.anti.matrix()) < 1e-12);
    // the full generator is not, because of the Lamb shift
    CHECK(max_abs(similarity_transform(g.L_full, rho).anti.matrix()) > 1e-4);
    CHECK_THROWS_AS(spectral_gap(g.L_full, rho), ContractError);
}

TEST_CASE("non-primitive generator is reported", "[kms]") {
    SystemParams p;
    const SystemModel s = build_system("single_qubit_z", 1, p, 0, "Z");  // couplings commute with H
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const GapReport gr = spectral_gap(g.L_KMS, gibbs_state(s, 1.0));
    CHECK_FALSE(gr.primitive());
}

TEST_CASE("Lamb defect", "[kms]") {
    const SystemModel s = reference_system();
    const DensityMatrix rho = gibbs_state(s, 1.0);
    CHECK(lamb_defect(s.H, rho) < 1e-14);  // commutes with rho
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const double dl = lamb_defect(g.H_Lamb, rho);
    CHECK(dl > 1e-3);
    // eigenbasis form: |H'_jk| |(p_j/p_k)^{-1/4} - (p_j/p_k)^{1/4}| for one off-diagonal pair
    const Mat he = s.to_eig(g.H_Lamb);
    const RVec pop = gibbs_populations(s, 1.0);
    const double r = std::pow(pop(0) / pop(1), 0.25);
    CHECK_THAT(dl, WithinRel(std::abs(he(0, 1)) * std::abs(1.0 / r - r), 1e-10));
}

TEST_CASE("perturbed contraction in the d_beta metric", "[kms]") {
    const SystemModel s = reference_system();
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const DensityMatrix rho = gibbs_state(s, 1.0);
    const double gap = spectral_gap(g.L_KMS, rho).gap;
    REQUIRE(lamb_defect(g.H_Lamb, rho) <= gap / 2.0);
    std::mt19937_64 rng(9);
    const Mat zero = Mat::Zero(2, 2);
    for (double t : {0.01, 0.5, 2.0}) {
        const SuperOperator e(2, Mat((t * g.L_full.matrix()).exp()));
        for (int i = 0; i < 50; ++i) {
            Mat x = random_hermitian(2, rng);
            x -= (x.trace().real() / 2.0) * Mat::Identity(2, 2);
            const double ratio = d_beta_distance(apply_superop(e, x), zero, rho) / d_beta_distance(x, zero, rho);
            CHECK(ratio <= std::exp(-gap * t / 2.0) * (1.0 + 1e-6));
        }
    }
}
