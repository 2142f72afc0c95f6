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

#include "gdl/model.hpp"

using namespace gdl;
using Catch::Matchers::WithinAbs;

TEST_CASE("Pauli algebra and qubit ordering", "[model]") {
    CHECK(max_abs(pauli('X') * pauli('Y') - I_unit * pauli('Z')) < 1e-15);
    CHECK(max_abs(pauli_on('Z', 0, 2) - kron(pauli('Z'), pauli('I'))) == 0.0);
    CHECK(max_abs(pauli_on('X', 1, 2) - kron(pauli('I'), pauli('X'))) == 0.0);
    CHECK_THROWS_AS(pauli('Q'), ParameterError);
}

TEST_CASE("Gibbs state of a single spin in a field", "[model]") {
    SystemParams p;
    p.hz = 0.7;
    const SystemModel s = build_system("single_qubit_z", 1, p, 0, "X");
    const double beta = 1.3;
    const double z = std::exp(-beta * 0.7) + std::exp(beta * 0.7);
    const Mat rho = gibbs_state(s, beta).matrix();
    CHECK_THAT(rho(0, 0).real(), WithinAbs(std::exp(-beta * 0.7) / z, 1e-15));
    CHECK_THAT(rho(1, 1).real(), WithinAbs(std::exp(beta * 0.7) / z, 1e-15));
    // matrix exponential oracle on a random instance
    SystemParams q;
    q.scale = 1.7;
    const SystemModel r = build_system("random_hermitian", 2, q, 9, "XZ");
    Mat e = (-beta * r.H).exp();
    e /= e.trace();
    CHECK(max_abs(gibbs_state(r, beta).matrix() - e) < 1e-14);
    CHECK_THAT(op_norm(r.H), WithinAbs(1.7, 1e-12));
}

TEST_CASE("transverse-field Ising chain", "[model]") {
    const Mat h = tfim_hamiltonian(2, 1.0, 0.5);
    const Mat ref = -kron(pauli('Z'), pauli('Z')) - 0.5 * (kron(pauli('X'), pauli('I')) + kron(pauli('I'), pauli('X')));
    CHECK(max_abs(h - ref) < 1e-15);
}

TEST_CASE("coupling sets", "[model]") {
    const auto c = make_couplings(2, "XZ", 0);
    CHECK(c.size() == 8);  // X, Z on each qubit, with both signs
    const auto r = make_couplings(1, "random:2", 5);
    CHECK(r.size() == 4);  // closed under adjoint via +/- pairs
    for (const Mat& a : r) CHECK_THAT(op_norm(a), WithinAbs(1.0, 1e-12));
    CHECK(max_abs(r[0] + r[1]) < 1e-15);
    CHECK_THROWS(make_couplings(1, "random:0", 1));
}

TEST_CASE("capacity and structural checks", "[model]") {
    CHECK_THROWS_AS(build_system("tfim_chain", 7, {}, 0), CapacityError);
    CHECK_THROWS_AS(build_system("nope", 1, {}, 0), ParameterError);
    Mat nh = Mat::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(make_system(nh, {pauli('X')}, 1), StructuralError);
}

TEST_CASE("Bohr decomposition reproduces Heisenberg evolution", "[model]") {
    SystemParams p;
    const SystemModel s = build_system("random_hermitian", 2, p, 4, "XYZ");
    std::mt19937_64 rng(8);
    const Mat m = random_matrix(4, rng);
    const BohrDecomposition b = bohr_project(s, m, s.gap_tol);
    Mat sum = Mat::Zero(4, 4);
    for (const Mat& blk : b.blocks) sum += blk;
    CHECK(max_abs(sum - m) < 1e-13);
    const double t = 0.83;
    Mat evolved = Mat::Zero(4, 4);
    for (std::size_t i = 0; i < b.blocks.size(); ++i)
        evolved += std::exp(I_unit * (b.frequencies[i] * t)) * b.blocks[i];
    const Mat direct = (I_unit * t * s.H).exp() * m * (-I_unit * t * s.H).exp();
    CHECK(max_abs(evolved - direct) < 1e-12);
    CHECK(max_abs(heisenberg(m, s, t) - direct) < 1e-12);
}

TEST_CASE("degenerate spectra merge Bohr frequencies", "[model]") {
    SystemParams p;
    p.hz = 1.0;
    const SystemModel s = build_system("single_qubit_z", 2, p, 0, "X");  // levels -2, 0, 0, 2
    const BohrDecomposition b = bohr_project(s, pauli_on('X', 0, 2), s.gap_tol);
    CHECK(b.frequencies.size() == 5);  // -4 -2 0 2 4
}
