#pragma once

// Test-only reference routines. They deliberately avoid the library's
// factorization and SVD code so they can serve as independent checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "kcca/kernels.hpp"

namespace kcca::testing {

inline Matrix random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                            double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(gen);
    return m;
}

/// Random SPD matrix B B^T + shift I.
inline Matrix random_spd(std::mt19937_64& gen, Eigen::Index n, double shift = 0.1) {
    const Matrix b = random_matrix(gen, n, n);
    Matrix a = b * b.transpose();
    a.diagonal().array() += shift;
    return 0.5 * (a + a.transpose());
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns the
/// eigenvalues in descending order.
inline Vector jacobi_eigenvalues(Matrix a) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off <= 1e-30 * std::max(1.0, a.squaredNorm())) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Vector ev = a.diagonal();
    std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
    return ev;
}

/// Eigenvalues of [[0, M], [M^T, 0]] w = lambda [[L, 0], [0, N]] w, by
/// block-Cholesky whitening (Eigen's LLT) and Jacobi rotations. Descending.
inline Vector brute_force_paired_eigenvalues(const Matrix& M, const Matrix& L, const Matrix& N) {
    const Eigen::Index p = L.rows(), q = N.rows();
    Matrix big_a = Matrix::Zero(p + q, p + q);
    big_a.topRightCorner(p, q) = M;
    big_a.bottomLeftCorner(q, p) = M.transpose();
    Matrix big_b = Matrix::Zero(p + q, p + q);
    big_b.topLeftCorner(p, p) = L;
    big_b.bottomRightCorner(q, q) = N;

    const Eigen::LLT<Matrix> llt(big_b);
    const Matrix lower = llt.matrixL();
    const Matrix tmp = lower.triangularView<Eigen::Lower>().solve(big_a);
    Matrix whitened = lower.triangularView<Eigen::Lower>().solve(tmp.transpose()).transpose();
    whitened = 0.5 * (whitened + whitened.transpose());
    return jacobi_eigenvalues(whitened);
}

/// (1/N) A^T J B with J materialized and products written out as loops.
inline Matrix explicit_centered_product(const Matrix& A, const Matrix& B) {
    const Eigen::Index n = A.rows();
    const Matrix J = centering_matrix(n);
    Matrix jb = Matrix::Zero(n, B.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index c = 0; c < B.cols(); ++c) jb(i, c) += J(i, k) * B(k, c);
    Matrix out = Matrix::Zero(A.cols(), B.cols());
    for (Eigen::Index r = 0; r < A.cols(); ++r)
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index c = 0; c < B.cols(); ++c) out(r, c) += A(k, r) * jb(k, c);
    return out / static_cast<double>(n);
}

/// Pearson correlation computed in long double.
inline double pearson(const Vector& a, const Vector& b) {
    long double ma = 0, mb = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) ma += a(i), mb += b(i);
    ma /= a.size();
    mb /= b.size();
    long double sab = 0, saa = 0, sbb = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const long double da = a(i) - ma, db = b(i) - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return static_cast<double>(sab / std::sqrt(saa * sbb));
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace kcca::testing
