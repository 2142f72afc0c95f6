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

#include "gdl/experiments.hpp"

using namespace gdl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemModel reference_system() {
    SystemParams p;
    p.scale = 0.5;
    return build_system("random_hermitian", 1, p, 3, "random:2");
}

// rho -> c rho + (1 - c) tr(rho) sigma
SuperOperator depolarizing(const Mat& sigma, double c) {
    const int d = static_cast<int>(sigma.rows());
    return superop_from_map([&](const Mat& x) { return Mat(c * x + (1.0 - c) * x.trace() * sigma); }, d);
}

// Kraus channel from a random isometry into d * k.
SuperOperator random_cptp(int d, int k, std::mt19937_64& rng) {
    const Mat u = random_unitary(d * k, rng);
    SuperOperator s = SuperOperator::zero(d);
    for (int j = 0; j < k; ++j) {
        const Mat kj = u.block(j * d, 0, d, d);
        s = s + conj_superop(kj, kj.adjoint());
    }
    return s;
}

} // namespace

TEST_CASE("log-log slope fit", "[experiments]") {
    const std::vector<double> x{0.02, 0.04, 0.08, 0.16};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    const SlopeFit f = slope_fit(x, y);
    CHECK_THAT(f.slope, WithinAbs(2.0, 1e-12));
    CHECK_THAT(std::exp(f.intercept), WithinRel(3.0, 1e-12));
    CHECK(f.residual < 1e-12);

    CHECK_THAT(slope_fit(x, {5, 5, 5, 5}).slope, WithinAbs(0.0, 1e-12));

    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 0.01);
    std::vector<double> yn;
    for (double v : x) yn.push_back(v * v * std::exp(n(rng)));
    CHECK_THAT(slope_fit(x, yn).slope, WithinAbs(2.0, 0.05));

    CHECK_THROWS_AS(slope_fit({1, 2, 3}, {1, 2, 3}), ParameterError);
    CHECK_THROWS_AS(slope_fit(x, {1, 0, 1, 1}), DomainError);
    CHECK_THROWS_AS(slope_fit({1, 1, 1, 1}, {1, 2, 3, 4}), DomainError);

    ScanReport r{"t", "alpha", x, y, {}, false};
    r.finalize();
    CHECK(r.slope_defined);
    r.values = {1.0, 100.0, 1.0, 100.0};
    r.finalize();
    CHECK_FALSE(r.slope_defined);
}

TEST_CASE("fixed point of the KMS semigroup is the Gibbs state", "[experiments]") {
    const SystemModel s = reference_system();
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const SuperOperator ch(s.dim(), Mat(g.L_KMS.matrix().exp()));
    const FixedPointResult fp = fixed_point(ch);
    CHECK(trace_norm(fp.state.matrix() - gibbs_state(s, 1.0).matrix()) < 1e-9);
    CHECK(fp.residual < 1e-12);
    CHECK(fp.multiplicity == 1);
}

TEST_CASE("fixed point against power iteration", "[experiments]") {
    std::mt19937_64 rng(5);
    for (int d : {2, 4}) {
        const SuperOperator s = random_cptp(d, 2, rng);
        const FixedPointResult fp = fixed_point(s);
        CHECK(trace_norm(fp.state.matrix() - fixed_point_power(s)) < 1e-10);
        CHECK(herm_eig(fp.state.matrix()).values.minCoeff() > -1e-12);
    }
}

TEST_CASE("non-unique fixed points are rejected", "[experiments]") {
    std::mt19937_64 rng(6);
    const Mat u = random_unitary(2, rng);
    CHECK_THROWS_AS(fixed_point(conj_superop(u, u.adjoint())), NonPrimitiveError);
    CHECK_THROWS_AS(fixed_point(SuperOperator::identity(2)), NonPrimitiveError);
    CHECK_THROWS_AS(fixed_point(SuperOperator::zero(2)), ParameterError);
}

TEST_CASE("composed channel against direct matrix products", "[experiments]") {
    const SystemModel s = reference_system();
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const double alpha = 0.3, T = 7.3;
    const Mat u = (-I_unit * T * s.H).exp();
    const SuperOperator us = conj_superop(u, u.adjoint());
    const SuperOperator ref = us * SuperOperator(2, Mat((alpha * alpha * g.L_full.matrix()).exp())) * us;
    CHECK(max_abs(composed_channel(s, g.L_full, alpha, TimeLaw::fixed(T)).matrix() - ref.matrix()) < 1e-13);
}

TEST_CASE("composed KMS channel is exactly Gibbs preserving; full one is biased at second order", "[experiments]") {
    const SystemModel s = reference_system();
    const GeneratorParts g = assemble_generator(s, 1.0, 2.0);
    const TimeLaw law = TimeLaw::random_mu(assumption_T0(2.0, 1.0, 0.02));
    const Mat rb = gibbs_state(s, 1.0).matrix();
    CHECK(trace_norm(fixed_point(composed_channel(s, g.L_KMS, 0.1, law)).state.matrix() - rb) < 1e-10);
    std::vector<double> al{0.02, 0.04, 0.08, 0.16}, bias;
    for (double a : al) bias.push_back(trace_norm(fixed_point(composed_channel(s, g.L_full, a, law)).state.matrix() - rb));
    CHECK_THAT(slope_fit(al, bias).slope, WithinAbs(2.0, 0.05));
}

TEST_CASE("mixing estimate against a geometric oracle", "[experiments]") {
    std::mt19937_64 rng(7);
    const Mat sigma = random_density(2, rng);
    const double c = 0.9;
    const SuperOperator s = depolarizing(sigma, c);
    double d0 = 0.0;
    for (const Mat& p : probe_states(2)) d0 = std::max(d0, trace_norm(p - sigma));
    for (double eps : {0.5, 1e-3, 1e-8}) {
        long long k = 0;
        while (std::pow(c, static_cast<double>(k)) * d0 > eps) ++k;
        CHECK(mixing_estimate(s, eps, DensityMatrix(sigma)) == k);
    }
    CHECK(mixing_estimate(s, 2.0, DensityMatrix(sigma)) == 0);
    CHECK_THROWS_AS(mixing_estimate(depolarizing(sigma, 1.0 - 1e-9), 1e-6, DensityMatrix(sigma), 1000), TimeoutError);
    CHECK_THROWS_AS(mixing_estimate(s, 0.0, DensityMatrix(sigma)), ParameterError);
}

TEST_CASE("measured contraction of a depolarizing map", "[experiments]") {
    std::mt19937_64 rng(8);
    const Mat sigma = random_density(3, rng);
    CHECK_THAT(measured_contraction(depolarizing(sigma, 0.37), DensityMatrix(sigma), 20, 1), WithinRel(0.37, 1e-10));
}

TEST_CASE("assumption-level T0", "[experiments]") {
    CHECK_THAT(assumption_T0(2.0, 1.0, 0.02), WithinAbs(11.4477, 1e-4));
    CHECK_THROWS_AS(assumption_T0(1.0, 1.0, 0.02), DomainError);
    CHECK_THROWS_AS(assumption_T0(2.0, 1.0, 1.5), DomainError);
}

TEST_CASE("scan shapes", "[experiments]") {
    const SystemModel s = reference_system();
    const ScanReport sg = sigma_scan(s, 1.0, {2, 4, 8, 16});
    REQUIRE(sg.values.size() == 4);
    CHECK(std::is_sorted(sg.grid.begin(), sg.grid.end()));
    const ScanReport env = lamb_envelope_scan(s, 1.0, {2, 4, 8, 16});
    const ScanReport one = lamb_envelope_scan(s, 1.0, {2, 4, 8, 16}, 0.5, 0.5);
    for (std::size_t i = 0; i < 4; ++i) CHECK_THAT(one.values[i], WithinRel(sg.values[i], 1e-9) || WithinAbs(sg.values[i], 1e-15));
    CHECK(env.slope_defined);
    CHECK_THAT(env.fit.slope, WithinAbs(-1.0, 0.1));
    CHECK_THROWS_AS(bias_scan(s, {}, {}, {0.0}, ChannelSource::lindblad_composed), ParameterError);
}
