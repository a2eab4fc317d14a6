// SPDX-License-Identifier: Apache-2.0
//
// bianm: gridless one-bit channel estimation via binary atomic norm minimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BIANM_TENSOR_ATOMS_HPP_
#define BIANM_TENSOR_ATOMS_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "bianm/error.hpp"

namespace bianm {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Array geometry: m receive antennas (ULA) by n OFDM subcarriers.
///
/// Vectorized objects of length m*n are laid out column-major, so the
/// (antenna a, subcarrier b) element sits at index a + m*b.
struct Dims {
    int m = 1;
    int n = 1;

    Dims() = default;
    Dims(int m_, int n_) : m(m_), n(n_) {
        if (m < 1 || n < 1) {
            throw InvalidArgument("Dims: m and n must be positive, got m=" + std::to_string(m) +
                                  " n=" + std::to_string(n));
        }
    }

    [[nodiscard]] int size() const { return m * n; }
    [[nodiscard]] int index(int a, int b) const { return a + m * b; }

    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Square complex matrix equal to its own conjugate transpose.
///
/// Every construction symmetrizes through (Z + Z^H)/2 so that floating-point
/// drift never reaches the eigensolver.
class HermitianMatrix {
 public:
    HermitianMatrix() = default;

    explicit HermitianMatrix(const CMatrix& z) {
        if (z.rows() != z.cols()) {
            throw InvalidArgument("HermitianMatrix: matrix is not square");
        }
        entries_ = 0.5 * (z + z.adjoint());
    }

    static HermitianMatrix identity(int order) {
        return HermitianMatrix(CMatrix::Identity(order, order));
    }

    static HermitianMatrix zero(int order) {
        return HermitianMatrix(CMatrix::Zero(order, order));
    }

    [[nodiscard]] int order() const { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] const CMatrix& entries() const { return entries_; }
    [[nodiscard]] Complex operator()(int i, int j) const { return entries_(i, j); }

    [[nodiscard]] RVector eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(entries_, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }

 private:
    CMatrix entries_;
};

/// Free parameters of a two-level Hermitian Toeplitz matrix.
///
/// Coefficient t[k, l] is the common value of every entry whose antenna-index
/// difference is k and subcarrier-index difference is l. Only the half set
/// {l >= 1, |k| < m} U {l = 0, 0 <= k < m} is stored; the mirrored diagonals
/// carry conjugates. That is (2m-1)n - (m-1) complex coefficients with t[0,0]
/// held real.
class ToeplitzGenerator {
 public:
    ToeplitzGenerator() = default;

    explicit ToeplitzGenerator(Dims dims)
        : dims_(dims), coeffs_(coefficient_count(dims), Complex(0.0, 0.0)) {}

    ToeplitzGenerator(Dims dims, std::vector<Complex> coeffs) : dims_(dims), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != coefficient_count(dims)) {
            throw InvalidArgument("ToeplitzGenerator: expected " + std::to_string(coefficient_count(dims)) +
                                  " coefficients, got " + std::to_string(coeffs_.size()));
        }
        coeffs_[0].imag(0.0);
    }

    /// t[0,0] = scale, everything else zero; induces scale * I.
    static ToeplitzGenerator identity(Dims dims, double scale = 1.0) {
        ToeplitzGenerator g(dims);
        g.coeffs_[0] = scale;
        return g;
    }

    static std::size_t coefficient_count(Dims dims) {
        return static_cast<std::size_t>((2 * dims.m - 1) * dims.n - (dims.m - 1));
    }

    /// True when (k, l) belongs to the stored half set.
    [[nodiscard]] bool stored(int k, int l) const {
        if (l < 0 || l >= dims_.n || k <= -dims_.m || k >= dims_.m) return false;
        return l > 0 || k >= 0;
    }

    [[nodiscard]] std::size_t index(int k, int l) const {
        if (!stored(k, l)) {
            throw InvalidArgument("ToeplitzGenerator: (" + std::to_string(k) + ", " + std::to_string(l) +
                                  ") is not a stored diagonal");
        }
        if (l == 0) return static_cast<std::size_t>(k);
        return static_cast<std::size_t>(dims_.m + (l - 1) * (2 * dims_.m - 1) + (k + dims_.m - 1));
    }

    [[nodiscard]] Complex get(int k, int l) const { return coeffs_[index(k, l)]; }

    void set(int k, int l, Complex v) {
        if (k == 0 && l == 0) v.imag(0.0);
        coeffs_[index(k, l)] = v;
    }

    /// Value on any diagonal (k, l), mirrored half included.
    [[nodiscard]] Complex value(int k, int l) const {
        if (stored(k, l)) return coeffs_[index(k, l)];
        return std::conj(coeffs_[index(-k, -l)]);
    }

    /// Number of matrix entries lying on diagonal (k, l).
    [[nodiscard]] int diagonal_length(int k, int l) const {
        return (dims_.m - std::abs(k)) * (dims_.n - std::abs(l));
    }

    /// Multiplicity of a stored coefficient in the real inner product: the main
    /// diagonal appears once, every other diagonal twice (itself and its mirror).
    [[nodiscard]] static double weight(int k, int l) { return (k == 0 && l == 0) ? 1.0 : 2.0; }

    /// Calls f(k, l, idx) for each stored coefficient in storage order.
    template <typename F>
    void for_each_coefficient(F&& f) const {
        for (int l = 0; l < dims_.n; ++l) {
            for (int k = (l == 0 ? 0 : -(dims_.m - 1)); k < dims_.m; ++k) {
                f(k, l, index(k, l));
            }
        }
    }

    [[nodiscard]] Dims dims() const { return dims_; }
    [[nodiscard]] const std::vector<Complex>& coefficients() const { return coeffs_; }
    [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
    [[nodiscard]] Complex operator[](std::size_t i) const { return coeffs_[i]; }
    Complex& operator[](std::size_t i) { return coeffs_[i]; }

    friend ToeplitzGenerator operator+(ToeplitzGenerator a, const ToeplitzGenerator& b) {
        check_same(a, b);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_[i];
        return a;
    }

    friend ToeplitzGenerator operator*(double s, ToeplitzGenerator a) {
        for (auto& c : a.coeffs_) c *= s;
        return a;
    }

    /// <a, b> = sum weight(k,l) * Re(conj(a[k,l]) * b[k,l]), the inner product under
    /// which toeplitz_adjoint is the adjoint of toeplitz_from_generator.
    friend double inner(const ToeplitzGenerator& a, const ToeplitzGenerator& b) {
        check_same(a, b);
        double acc = 0.0;
        a.for_each_coefficient([&](int k, int l, std::size_t i) {
            acc += weight(k, l) * std::real(std::conj(a.coeffs_[i]) * b.coeffs_[i]);
        });
        return acc;
    }

 private:
    static void check_same(const ToeplitzGenerator& a, const ToeplitzGenerator& b) {
        if (!(a.dims_ == b.dims_)) throw InvalidArgument("ToeplitzGenerator: dimension mismatch");
    }

    Dims dims_;
    std::vector<Complex> coeffs_;
};

/// A two-dimensional complex exponential conj(a_N(tau)) (x) a_M(theta).
struct Atom2D {
    double theta = 0.0;
    double tau = 0.0;
    CVector vector;
};

/// a_K(beta) with entries exp(-j 2 pi beta k), k = 0..K-1.
inline CVector exponential_sequence(double beta, int length) {
    CVector a(length);
    for (int k = 0; k < length; ++k) {
        a(k) = std::polar(1.0, -2.0 * std::numbers::pi * beta * k);
    }
    return a;
}

inline void check_normalized_frequency(double f, const char* name) {
    if (!(f >= 0.0 && f < 1.0)) {
        throw InvalidArgument(std::string(name) + " must lie in [0, 1), got " + std::to_string(f));
    }
}

/// Entry (a, b) is exp(-j 2 pi theta a) * exp(+j 2 pi tau b); the delay factor
/// is conjugated so that the atom equals vec(a_M(theta) a_N(tau)^H).
inline Atom2D build_atom(double theta, double tau, Dims dims) {
    check_normalized_frequency(theta, "theta");
    check_normalized_frequency(tau, "tau");
    Atom2D atom{theta, tau, CVector(dims.size())};
    for (int b = 0; b < dims.n; ++b) {
        for (int a = 0; a < dims.m; ++a) {
            atom.vector(dims.index(a, b)) = std::polar(1.0, 2.0 * std::numbers::pi * (tau * b - theta * a));
        }
    }
    return atom;
}

/// T[(m1,n1),(m2,n2)] = t[m1-m2, n1-n2] on the stored half, conjugate mirror
/// elsewhere. Block (n1, n2) is the m x m Toeplitz matrix of slice l = n1-n2.
inline HermitianMatrix toeplitz_from_generator(const ToeplitzGenerator& gen) {
    const Dims d = gen.dims();
    CMatrix t(d.size(), d.size());
    for (int n2 = 0; n2 < d.n; ++n2) {
        for (int m2 = 0; m2 < d.m; ++m2) {
            const int col = d.index(m2, n2);
            for (int n1 = 0; n1 < d.n; ++n1) {
                for (int m1 = 0; m1 < d.m; ++m1) {
                    t(d.index(m1, n1), col) = gen.value(m1 - m2, n1 - n2);
                }
            }
        }
    }
    return HermitianMatrix(t);
}

/// Sums the entries of z along each stored two-level diagonal. For Hermitian z
/// this is the adjoint of toeplitz_from_generator under inner().
inline ToeplitzGenerator toeplitz_adjoint(const HermitianMatrix& z, Dims dims) {
    if (z.order() != dims.size()) {
        throw InvalidArgument("toeplitz_adjoint: matrix order " + std::to_string(z.order()) +
                              " does not match m*n = " + std::to_string(dims.size()));
    }
    ToeplitzGenerator out(dims);
    const CMatrix& e = z.entries();
    for (int n2 = 0; n2 < dims.n; ++n2) {
        for (int m2 = 0; m2 < dims.m; ++m2) {
            const int col = dims.index(m2, n2);
            for (int n1 = n2; n1 < dims.n; ++n1) {
                for (int m1 = 0; m1 < dims.m; ++m1) {
                    const int k = m1 - m2;
                    const int l = n1 - n2;
                    if (l == 0 && k < 0) continue;
                    out[out.index(k, l)] += e(dims.index(m1, n1), col);
                }
            }
        }
    }
    out[0].imag(0.0);
    return out;
}

/// Per-diagonal average: the generator whose Toeplitz matrix is the Frobenius
/// projection of z onto two-level Toeplitz structure.
inline ToeplitzGenerator toeplitz_average(const HermitianMatrix& z, Dims dims) {
    ToeplitzGenerator g = toeplitz_adjoint(z, dims);
    g.for_each_coefficient([&](int k, int l, std::size_t i) { g[i] /= g.diagonal_length(k, l); });
    return g;
}

/// Frobenius projection onto the PSD cone. Negative eigenvalues are clamped to
/// exactly zero.
inline HermitianMatrix psd_project(const HermitianMatrix& z) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(z.entries());
    if (es.info() != Eigen::Success) {
        throw NumericalError("psd_project: Hermitian eigendecomposition failed");
    }
    const RVector& lambda = es.eigenvalues();
    const CMatrix& v = es.eigenvectors();
    // Eigenvalues are ascending; keep the tail that is strictly positive.
    int first = 0;
    while (first < lambda.size() && lambda(first) <= 0.0) ++first;
    const int keep = static_cast<int>(lambda.size()) - first;
    if (keep == 0) return HermitianMatrix::zero(z.order());
    const auto vk = v.rightCols(keep);
    const CMatrix scaled = vk * lambda.tail(keep).cwiseSqrt().asDiagonal();
    return HermitianMatrix(scaled * scaled.adjoint());
}

/// (a + ridge I)^{-1} via Cholesky. Throws IllConditionedReweight when the
/// shifted matrix is not positive definite.
inline HermitianMatrix hermitian_solve(const HermitianMatrix& a, double ridge) {
    if (!(ridge >= 0.0)) throw InvalidArgument("hermitian_solve: ridge must be nonnegative");
    const int n = a.order();
    CMatrix shifted = a.entries();
    shifted.diagonal().array() += ridge;
    Eigen::LLT<CMatrix> llt(shifted);
    if (llt.info() != Eigen::Success) {
        throw IllConditionedReweight("hermitian_solve: matrix plus ridge is not positive definite");
    }
    return HermitianMatrix(llt.solve(CMatrix::Identity(n, n)));
}

}  // namespace bianm

#endif  // BIANM_TENSOR_ATOMS_HPP_
