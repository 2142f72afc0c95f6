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

// operator_core.hpp - dense operator algebra and column-stacked superoperators
//
// Vectorization convention (used everywhere): vec stacks columns, so the
// conjugation X -> A X B is the matrix kron(B^T, A).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "gdl/errors.hpp"

namespace gdl {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

inline double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Mat& m, double rtol = 1e-12) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(max_abs(m), 1e-300);
    return max_abs(m - m.adjoint()) <= rtol * scale;
}

inline Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

struct HermEig {
    RVec values;  // ascending
    Mat vectors;  // columns are eigenvectors
};

inline HermEig herm_eig(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m));
    if (es.info() != Eigen::Success) throw ContractError("Hermitian eigensolve failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

// ---------------------------------------------------------------------------
// Checked operator types

class HermitianOperator {
public:
    HermitianOperator() = default;
    explicit HermitianOperator(Mat m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() == 0)
            throw StructuralError("HermitianOperator needs a non-empty square matrix");
        if (!is_hermitian(m_)) throw StructuralError("matrix is not Hermitian within 1e-12");
    }
    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& matrix() const { return m_; }
    operator const Mat&() const { return m_; }

private:
    Mat m_;
};

class DensityMatrix {
public:
    DensityMatrix() = default;
    explicit DensityMatrix(Mat m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() == 0)
            throw StructuralError("DensityMatrix needs a non-empty square matrix");
        if (!is_hermitian(m_)) throw StructuralError("density matrix is not Hermitian");
        const double tr = m_.trace().real();
        if (std::abs(tr - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "density matrix trace " << tr << " differs from 1";
            throw StructuralError(os.str());
        }
        const double lo = herm_eig(m_).values.minCoeff();
        if (lo < -1e-12) {
            std::ostringstream os;
            os << "density matrix has negative eigenvalue " << lo;
            throw StructuralError(os.str());
        }
        m_ = hermitize(m_);
    }
    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& matrix() const { return m_; }
    operator const Mat&() const { return m_; }

private:
    Mat m_;
};

class SuperOperator {
public:
    SuperOperator() = default;
    SuperOperator(int d, Mat m) : d_(d), m_(std::move(m)) {
        if (d <= 0 || m_.rows() != d * d || m_.cols() != d * d)
            throw StructuralError("superoperator matrix must be d^2 x d^2");
    }
    static SuperOperator identity(int d) { return {d, Mat::Identity(d * d, d * d)}; }
    static SuperOperator zero(int d) { return {d, Mat::Zero(d * d, d * d)}; }
    int dim() const { return d_; }
    const Mat& matrix() const { return m_; }
    SuperOperator operator*(const SuperOperator& o) const {
        check_same(o);
        return {d_, m_ * o.m_};
    }
    SuperOperator operator+(const SuperOperator& o) const {
        check_same(o);
        return {d_, m_ + o.m_};
    }
    SuperOperator operator-(const SuperOperator& o) const {
        check_same(o);
        return {d_, m_ - o.m_};
    }
    SuperOperator scaled(cplx c) const { return {d_, c * m_}; }
    SuperOperator adjoint() const { return {d_, m_.adjoint()}; }

private:
    void check_same(const SuperOperator& o) const {
        if (o.d_ != d_) throw StructuralError("superoperator dimension mismatch");
    }
    int d_ = 0;
    Mat m_;
};

// ---------------------------------------------------------------------------
// Vectorization

inline CVec vec(const Mat& x) { return Eigen::Map<const CVec>(x.data(), x.size()); }

inline Mat unvec(const CVec& v, int d) {
    if (v.size() != static_cast<Eigen::Index>(d) * d) throw StructuralError("unvec size mismatch");
    return Eigen::Map<const Mat>(v.data(), d, d);
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// X -> A X B
inline SuperOperator conj_superop(const Mat& a, const Mat& b) {
    return {static_cast<int>(a.rows()), kron(b.transpose(), a)};
}

inline SuperOperator left_mult(const Mat& a) {
    const auto d = a.rows();
    return {static_cast<int>(d), kron(Mat::Identity(d, d), a)};
}

inline SuperOperator right_mult(const Mat& b) {
    const auto d = b.rows();
    return {static_cast<int>(d), kron(b.transpose(), Mat::Identity(d, d))};
}

// X -> -i [H, X]
inline SuperOperator hamiltonian_superop(const Mat& h) {
    return (left_mult(h) - right_mult(h)).scaled(-I_unit);
}

// X -> {M, X}
inline SuperOperator anticommutator_superop(const Mat& m) { return left_mult(m) + right_mult(m); }

// X -> V X V^dag - 1/2 {V^dag V, X}
inline SuperOperator dissipator_superop(const Mat& v) {
    const Mat vdv = v.adjoint() * v;
    return conj_superop(v, v.adjoint()) - anticommutator_superop(vdv).scaled(0.5);
}

inline Mat apply_superop(const SuperOperator& s, const Mat& x) {
    if (x.rows() != s.dim() || x.cols() != s.dim())
        throw StructuralError("operator dimension does not match superoperator");
    return unvec(s.matrix() * vec(x), s.dim());
}

inline Mat matrix_unit(int d, int j, int k) {
    Mat e = Mat::Zero(d, d);
    e(j, k) = 1.0;
    return e;
}

inline Mat random_matrix(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Mat m(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) m(i, j) = cplx(n01(rng), n01(rng));
    return m;
}

// Builds the matrix of a linear map column by column; linearity is spot
// checked on a few random pairs.
inline SuperOperator superop_from_map(const std::function<Mat(const Mat&)>& action, int d,
                                      int n_checks = 4, unsigned long long seed = 0x5eed) {
    if (d <= 0) throw StructuralError("dimension must be positive");
    Mat m(d * d, d * d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            const Mat y = action(matrix_unit(d, j, k));
            if (y.rows() != d || y.cols() != d) throw StructuralError("map changes dimension");
            m.col(j + d * k) = vec(y);
        }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int t = 0; t < n_checks; ++t) {
        const Mat x = random_matrix(d, rng), y = random_matrix(d, rng);
        const cplx a(n01(rng), n01(rng)), b(n01(rng), n01(rng));
        const Mat lhs = action(a * x + b * y);
        const Mat rhs = a * action(x) + b * action(y);
        if (max_abs(lhs - rhs) > 1e-10 * std::max(1.0, max_abs(rhs)))
            throw ContractError("map failed the linearity spot check");
    }
    return {d, m};
}

// ---------------------------------------------------------------------------
// Norms

inline RVec singular_values(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues();
}

inline double trace_norm(const Mat& m) {
    if (is_hermitian(m, 1e-13)) return herm_eig(m).values.cwiseAbs().sum();
    return singular_values(m).sum();
}

inline double op_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

inline double hs_norm(const Mat& m) { return m.norm(); }

inline double trace_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
    if (r1.dim() != r2.dim()) throw StructuralError("trace_distance dimension mismatch");
    return 0.5 * trace_norm(r1.matrix() - r2.matrix());
}

// ---------------------------------------------------------------------------
// Fractional powers and the KMS inner product

inline constexpr double kEigenFloorRel = 1e-13;

inline Mat op_power(const Mat& rho, double p) {
    const HermEig e = herm_eig(rho);
    const double top = e.values.maxCoeff();
    if (top <= 0.0) throw SingularityError("operator has no positive eigenvalue");
    const double floor = kEigenFloorRel * top;
    RVec w(e.values.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        double l = e.values(i);
        if (p < 0.0 && l < floor) {
            std::ostringstream os;
            os << "eigenvalue " << l << " below floor " << floor << " for power " << p;
            throw SingularityError(os.str());
        }
        if (l < -1e-12 * top) {
            std::ostringstream os;
            os << "operator is not PSD: eigenvalue " << l;
            throw DomainError(os.str());
        }
        l = std::max(l, 0.0);
        w(i) = (p == 0.0) ? 1.0 : std::pow(l, p);
    }
    return e.vectors * w.asDiagonal() * e.vectors.adjoint();
}

inline Mat op_power(const DensityMatrix& rho, double p) { return op_power(rho.matrix(), p); }

inline cplx kms_inner(const Mat& a, const Mat& b, const DensityMatrix& rho) {
    if (a.rows() != rho.dim() || b.rows() != rho.dim())
        throw StructuralError("kms_inner dimension mismatch");
    // refuse singular states even though only the square root is needed
    op_power(rho, -0.5);
    const Mat s = op_power(rho, 0.5);
    return (a.adjoint() * s * b * s).trace();
}

// Minimum eigenvalue of the Choi matrix sum_{jk} E_jk (x) S(E_jk).
inline double choi_min_eigenvalue(const SuperOperator& s) {
    const int d = s.dim();
    Mat choi = Mat::Zero(d * d, d * d);
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j) {
            const Mat out = unvec(s.matrix().col(j + d * k), d);
            choi.block(j * d, k * d, d, d) = out;
        }
    return herm_eig(choi).values.minCoeff();
}

// Largest deviation of vec(I)^dag S from vec(I)^dag.
inline double trace_preservation_defect(const SuperOperator& s) {
    const int d = s.dim();
    const CVec id = vec(Mat::Identity(d, d));
    return (id.adjoint() * s.matrix() - id.adjoint()).cwiseAbs().maxCoeff();
}

// Trace out a trailing two-level factor.
inline Mat partial_trace_bath(const Mat& joint) {
    if (joint.rows() != joint.cols() || joint.rows() % 2 != 0 || joint.rows() == 0)
        throw StructuralError("partial_trace_bath needs an even square matrix");
    const Eigen::Index d = joint.rows() / 2;
    Mat out = Mat::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s)
        for (Eigen::Index t = 0; t < d; ++t)
            out(s, t) = joint(2 * s, 2 * t) + joint(2 * s + 1, 2 * t + 1);
    return out;
}

// ---------------------------------------------------------------------------
// Random instances (tests and probes)

inline Mat random_hermitian(int d, std::mt19937_64& rng) { return hermitize(random_matrix(d, rng)); }

inline Mat random_density(int d, std::mt19937_64& rng) {
    const Mat g = random_matrix(d, rng);
    Mat r = g * g.adjoint();
    return hermitize(r / r.trace().real());
}

inline Mat random_unitary(int d, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Mat> qr(random_matrix(d, rng));
    return qr.householderQ() * Mat::Identity(d, d);
}

} // namespace gdl
