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

// model.hpp - spin Hamiltonians, Gibbs states, Bohr decompositions

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gdl/operator_core.hpp"

namespace gdl {

inline Mat pauli(char p) {
    Mat m = Mat::Zero(2, 2);
    switch (p) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, -I_unit, I_unit, 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw ParameterError(std::string("unknown Pauli label ") + p);
    }
    return m;
}

// Pauli p on qubit j of n; qubit 0 is the most significant tensor factor.
inline Mat pauli_on(char p, int j, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int q = 0; q < n; ++q) out = kron(out, q == j ? pauli(p) : pauli('I'));
    return out;
}

struct SystemModel {
    int n_qubits = 0;
    Mat H;
    RVec eigenvalues;      // ascending
    Mat eigenvectors;      // H = U diag(lambda) U^dag
    std::vector<Mat> couplings;
    double gap_tol = 1e-9;

    int dim() const { return static_cast<int>(H.rows()); }
    Mat to_eig(const Mat& x) const { return eigenvectors.adjoint() * x * eigenvectors; }
    Mat from_eig(const Mat& x) const { return eigenvectors * x * eigenvectors.adjoint(); }
    double spectral_range() const { return eigenvalues.maxCoeff() - eigenvalues.minCoeff(); }
};

inline constexpr int kMaxQubits = 6;

inline double default_gap_tol(const RVec& lambda) {
    const double range = lambda.size() ? lambda.maxCoeff() - lambda.minCoeff() : 0.0;
    return 1e-9 * (range > 0.0 ? range : 1.0);
}

// Pauli couplings are +-P_j for each letter in `letters` (subset of "XYZ"), each
// normalized to unit operator norm.
inline std::vector<Mat> pauli_couplings(int n, const std::string& letters) {
    if (letters.empty()) throw ParameterError("coupling set must not be empty");
    std::vector<Mat> out;
    for (int j = 0; j < n; ++j)
        for (char c : letters) {
            const char p = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (p != 'X' && p != 'Y' && p != 'Z') throw ParameterError("coupling letters must be from XYZ");
            const Mat a = pauli_on(p, j, n);
            out.push_back(a);
            out.push_back(-a);
        }
    return out;
}

// "random:K" draws K Hermitian operators (seeded), each entering as +-A.
inline std::vector<Mat> make_couplings(int n, const std::string& spec, unsigned long long seed) {
    if (spec.rfind("random:", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(spec.substr(7));
        } catch (...) {
            throw ParameterError("bad coupling spec '" + spec + "'");
        }
        if (k < 1) throw ParameterError("random coupling count must be positive");
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        std::vector<Mat> out;
        for (int i = 0; i < k; ++i) {
            Mat a = random_hermitian(1 << n, rng);
            a /= op_norm(a);
            out.push_back(a);
            out.push_back(-a);
        }
        return out;
    }
    return pauli_couplings(n, spec);
}

inline SystemModel make_system(const Mat& h, std::vector<Mat> couplings, int n_qubits) {
    if (!is_hermitian(h)) throw StructuralError("Hamiltonian is not Hermitian");
    SystemModel s;
    s.n_qubits = n_qubits;
    s.H = hermitize(h);
    const HermEig e = herm_eig(s.H);
    s.eigenvalues = e.values;
    s.eigenvectors = e.vectors;
    for (auto& a : couplings) {
        if (a.rows() != h.rows() || a.cols() != h.cols()) throw StructuralError("coupling dimension mismatch");
        const double nrm = op_norm(a);
        if (nrm <= 0.0) throw ParameterError("zero coupling operator");
        a /= nrm;
    }
    // the set must be closed under adjoint
    for (const auto& a : couplings) {
        bool found = false;
        for (const auto& b : couplings)
            if (max_abs(a.adjoint() - b) <= 1e-12) { found = true; break; }
        if (!found) throw StructuralError("coupling set is not closed under adjoint");
    }
    s.couplings = std::move(couplings);
    s.gap_tol = default_gap_tol(s.eigenvalues);
    return s;
}

struct SystemParams {
    double hz = 1.0, hx = 0.0;     // single_qubit_z: sum_j hz Z_j + hx X_j
    double J = 1.0, g = 0.5;       // tfim_chain: -J sum Z_j Z_{j+1} - g sum X_j
    double scale = 1.0;            // random_hermitian: operator norm
};

inline Mat tfim_hamiltonian(int n, double J, double g) {
    const int d = 1 << n;
    Mat h = Mat::Zero(d, d);
    for (int j = 0; j + 1 < n; ++j) h -= J * pauli_on('Z', j, n) * pauli_on('Z', j + 1, n);
    for (int j = 0; j < n; ++j) h -= g * pauli_on('X', j, n);
    return h;
}

inline SystemModel build_system(const std::string& preset, int n_qubits, const SystemParams& p,
                                unsigned long long seed, const std::string& couplings = "XYZ") {
    if (n_qubits < 1) throw ParameterError("n_qubits must be at least 1");
    if (n_qubits > kMaxQubits) throw CapacityError("n_qubits exceeds the desk-scale cap of 6");
    const int d = 1 << n_qubits;
    Mat h;
    if (preset == "single_qubit_z") {
        h = Mat::Zero(d, d);
        for (int j = 0; j < n_qubits; ++j) h += p.hz * pauli_on('Z', j, n_qubits) + p.hx * pauli_on('X', j, n_qubits);
    } else if (preset == "tfim_chain") {
        h = tfim_hamiltonian(n_qubits, p.J, p.g);
    } else if (preset == "random_hermitian") {
        std::mt19937_64 rng(seed);
        h = random_hermitian(d, rng);
        h *= p.scale / op_norm(h);
    } else {
        throw ParameterError("unknown preset '" + preset + "'");
    }
    return make_system(h, make_couplings(n_qubits, couplings, seed), n_qubits);
}

// ---------------------------------------------------------------------------

inline DensityMatrix gibbs_state(const Mat& h, double beta) {
    if (!std::isfinite(beta)) throw ParameterError("beta must be finite");
    const HermEig e = herm_eig(h);
    const double lo = e.values.minCoeff();
    RVec w = (-beta * (e.values.array() - lo)).exp();
    w /= w.sum();
    return DensityMatrix(hermitize(e.vectors * w.asDiagonal() * e.vectors.adjoint()));
}

inline DensityMatrix gibbs_state(const SystemModel& s, double beta) {
    const double lo = s.eigenvalues.minCoeff();
    RVec w = (-beta * (s.eigenvalues.array() - lo)).exp();
    w /= w.sum();
    return DensityMatrix(hermitize(s.from_eig(w.asDiagonal().toDenseMatrix().cast<cplx>())));
}

// Gibbs populations in the eigenbasis.
inline RVec gibbs_populations(const SystemModel& s, double beta) {
    const double lo = s.eigenvalues.minCoeff();
    RVec w = (-beta * (s.eigenvalues.array() - lo)).exp();
    return w / w.sum();
}

// ---------------------------------------------------------------------------
// Bohr decomposition: block nu collects eigenbasis entries (l, k) with
// lambda_l - lambda_k = nu, so exp(iHt) M_nu exp(-iHt) = exp(i nu t) M_nu.

struct BohrDecomposition {
    std::vector<double> frequencies;   // sorted cluster representatives
    std::vector<Mat> blocks;           // computational basis
    Eigen::MatrixXi labels;            // eigenbasis entry -> cluster index
};

inline Eigen::MatrixXi bohr_labels(const RVec& lambda, double gap_tol, std::vector<double>& reps) {
    if (!(gap_tol > 0.0)) throw ParameterError("gap_tol must be positive");
    const Eigen::Index d = lambda.size();
    std::vector<std::pair<double, Eigen::Index>> nu;
    nu.reserve(d * d);
    for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index l = 0; l < d; ++l) nu.push_back({lambda(l) - lambda(k), l + d * k});
    std::stable_sort(nu.begin(), nu.end(), [](auto& a, auto& b) { return a.first < b.first; });
    Eigen::MatrixXi labels(d, d);
    reps.clear();
    std::size_t start = 0;
    for (std::size_t i = 1; i <= nu.size(); ++i) {
        if (i == nu.size() || nu[i].first - nu[i - 1].first >= gap_tol) {
            double sum = 0.0;
            for (std::size_t j = start; j < i; ++j) {
                sum += nu[j].first;
                labels(nu[j].second % d, nu[j].second / d) = static_cast<int>(reps.size());
            }
            reps.push_back(sum / static_cast<double>(i - start));
            start = i;
        }
    }
    return labels;
}

inline BohrDecomposition bohr_project(const SystemModel& s, const Mat& m, double gap_tol) {
    BohrDecomposition out;
    out.labels = bohr_labels(s.eigenvalues, gap_tol, out.frequencies);
    const Mat me = s.to_eig(m);
    const int d = s.dim();
    for (std::size_t c = 0; c < out.frequencies.size(); ++c) {
        Mat blk = Mat::Zero(d, d);
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
                if (out.labels(l, k) == static_cast<int>(c)) blk(l, k) = me(l, k);
        out.blocks.push_back(s.from_eig(blk));
    }
    return out;
}

inline BohrDecomposition bohr_project(const Mat& h, const Mat& m, double gap_tol) {
    return bohr_project(make_system(h, {}, 0), m, gap_tol);
}

// A(t) = exp(iHt) A exp(-iHt)
inline Mat heisenberg(const Mat& a, const SystemModel& s, double t) {
    const CVec ph = (I_unit * t * s.eigenvalues.cast<cplx>()).array().exp();
    Mat ae = s.to_eig(a);
    ae = ph.asDiagonal() * ae * ph.conjugate().asDiagonal();
    return s.from_eig(ae);
}

} // namespace gdl
