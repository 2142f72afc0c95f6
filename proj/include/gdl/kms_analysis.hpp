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

// kms_analysis.hpp - similarity transform K = rho^{-1/4} L(rho^{1/4} . rho^{1/4}) rho^{-1/4},
// spectral gap, Gibbs-commutation defect, d_beta metric, mixing bound

#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "gdl/lindblad_generator.hpp"
#include "gdl/operator_core.hpp"

namespace gdl {

struct SimilaritySplit {
    SuperOperator K, herm, anti;
};

inline SimilaritySplit similarity_transform(const SuperOperator& L, const DensityMatrix& rho) {
    if (L.dim() != rho.dim()) throw StructuralError("similarity_transform dimension mismatch");
    const Mat rm = op_power(rho, -0.25), rp = op_power(rho, 0.25);
    const SuperOperator k = conj_superop(rm, rm) * L * conj_superop(rp, rp);
    SimilaritySplit out;
    out.K = k;
    out.herm = SuperOperator(k.dim(), 0.5 * (k.matrix() + k.matrix().adjoint()));
    out.anti = SuperOperator(k.dim(), 0.5 * (k.matrix() - k.matrix().adjoint()));
    return out;
}

struct GapReport {
    double gap = 0.0;
    std::vector<double> eigenvalues;  // of -herm on the complement of sqrt(rho), ascending
    int kernel_dim = 1;               // including sqrt(rho)
    bool primitive() const { return kernel_dim == 1; }
};

inline constexpr double kGapThreshold = 1e-9;

// Orthonormal basis of the complement of a unit vector v.
inline Mat orthogonal_complement(const CVec& v) {
    const Eigen::Index n = v.size();
    Mat m(n, n);
    m.col(0) = v.normalized();
    m.rightCols(n - 1) = Mat::Identity(n, n - 1);
    Eigen::HouseholderQR<Mat> qr(m);
    const Mat q = qr.householderQ() * Mat::Identity(n, n);
    return q.rightCols(n - 1);
}

inline GapReport spectral_gap(const SuperOperator& L_kms, const DensityMatrix& rho) {
    const double defect = kms_defect(L_kms, rho);
    const double scale = std::max(1.0, max_abs(L_kms.matrix()));
    if (defect > 1e-6 * scale) {
        std::ostringstream os;
        os << "generator is not KMS detailed balanced (defect " << defect << ")";
        throw ContractError(os.str());
    }
    const SimilaritySplit sp = similarity_transform(L_kms, rho);
    const Mat q = orthogonal_complement(vec(op_power(rho, 0.5)));
    const Mat h = -(q.adjoint() * sp.herm.matrix() * q);
    const RVec ev = herm_eig(h).values;
    GapReport r;
    r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    r.gap = 0.0;
    for (double e : r.eigenvalues) {
        if (e <= kGapThreshold) ++r.kernel_dim;
        else if (r.gap == 0.0) r.gap = e;
    }
    return r;
}

// ||rho^{-1/4} H rho^{1/4} - rho^{1/4} H rho^{-1/4}||
inline double lamb_defect(const Mat& h_lamb, const DensityMatrix& rho) {
    const Mat rm = op_power(rho, -0.25), rp = op_power(rho, 0.25);
    return op_norm(rm * h_lamb * rp - rp * h_lamb * rm);
}

// ||rho^{-1/4} (r1 - r2) rho^{-1/4}||_2
inline double d_beta_distance(const Mat& r1, const Mat& r2, const DensityMatrix& rho) {
    const Mat rm = op_power(rho, -0.25);
    return hs_norm(rm * (r1 - r2) * rm);
}

inline double mixing_time_bound(double gap, double alpha, double eps, const DensityMatrix& rho) {
    if (!(gap > 0.0) || !(alpha > 0.0) || !(eps > 0.0)) throw ParameterError("gap, alpha, eps must be positive");
    const double inv_sqrt_norm = 1.0 / std::sqrt(herm_eig(rho.matrix()).values.minCoeff());
    if (!(eps < 2.0 * inv_sqrt_norm)) return 0.0;
    return std::log(2.0 * inv_sqrt_norm / eps) / (gap * alpha * alpha);
}

// The 2^N exp(beta ||H||) style bound on ||rho^{-1/2}||, reported for comparison.
inline double inverse_sqrt_norm_bound(int d, double beta, double h_norm) {
    return std::sqrt(static_cast<double>(d) * std::exp(2.0 * beta * h_norm));
}

} // namespace gdl
