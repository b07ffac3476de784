#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "kcca/errors.hpp"
#include "kcca/matrix.hpp"

namespace kcca {

/// Lower-triangular factor C with C * C^T = A + jitter * I.
struct CholeskyFactor {
    Matrix lower;
    double jitter = 0.0;

    Eigen::Index dim() const noexcept { return lower.rows(); }
};

struct SvdResult {
    Matrix U;  // m x r, orthonormal columns
    Vector s;  // r values, descending
    Matrix V;  // n x r, orthonormal columns
};

/// Solution of the coupled problem M b = lambda L a, M^T a = lambda N b.
/// Column k of `alphas`/`betas` is normalized so a^T L a = b^T N b = 1.
struct PairedEigSolution {
    Matrix alphas;
    Matrix betas;
    Vector lambdas;
    double jitter_l = 0.0;  // absolute diagonal shift actually applied to L
    double jitter_n = 0.0;  // ... and to N
};

inline CholeskyFactor cholesky(const Matrix& A, double jitter = 0.0) {
    if (A.rows() != A.cols())
        throw InputError("cholesky: matrix must be square, got " + std::to_string(A.rows()) + "x" +
                         std::to_string(A.cols()));
    if (!(jitter >= 0.0)) throw InputError("cholesky: jitter must be >= 0");

    const Eigen::Index n = A.rows();
    Matrix C = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = A(j, j) + jitter;
        for (Eigen::Index k = 0; k < j; ++k) d -= C(j, k) * C(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) throw NotPositiveDefiniteError(static_cast<std::size_t>(j), d);
        const double cjj = std::sqrt(d);
        C(j, j) = cjj;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double v = A(i, j);
            for (Eigen::Index k = 0; k < j; ++k) v -= C(i, k) * C(j, k);
            C(i, j) = v / cjj;
        }
    }
    return {std::move(C), jitter};
}

/// Forward substitution: returns X with lower * X = B.
inline Matrix solve_lower_triangular(const CholeskyFactor& f, const Matrix& B) {
    const Matrix& C = f.lower;
    const Eigen::Index n = C.rows();
    if (B.rows() != n) throw InputError("solve_lower_triangular: row count mismatch");
    Matrix X = B;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (C(i, i) == 0.0) throw std::logic_error("solve_lower_triangular: zero diagonal");
            double v = X(i, c);
            for (Eigen::Index k = 0; k < i; ++k) v -= C(i, k) * X(k, c);
            X(i, c) = v / C(i, i);
        }
    }
    return X;
}

/// Back substitution: returns X with lower^T * X = B.
inline Matrix solve_lower_transpose(const CholeskyFactor& f, const Matrix& B) {
    const Matrix& C = f.lower;
    const Eigen::Index n = C.rows();
    if (B.rows() != n) throw InputError("solve_lower_transpose: row count mismatch");
    Matrix X = B;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            if (C(i, i) == 0.0) throw std::logic_error("solve_lower_transpose: zero diagonal");
            double v = X(i, c);
            for (Eigen::Index k = i + 1; k < n; ++k) v -= C(k, i) * X(k, c);
            X(i, c) = v / C(i, i);
        }
    }
    return X;
}

namespace detail {

// Makes the largest-magnitude entry of every U column positive (first index
// wins ties) and flips the matching V column with it.
inline void fix_signs(Matrix& U, Matrix& V) {
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index i = 0; i < U.rows(); ++i) {
            const double a = std::abs(U(i, j));
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (U(best, j) < 0.0) {
            U.col(j) = -U.col(j);
            V.col(j) = -V.col(j);
        }
    }
}

// Replaces the flagged columns of Q with unit vectors orthogonal to every
// other column. Each one starts from the standard basis vector with the largest
// component outside the current span and is orthogonalized twice.
inline void complete_orthonormal(Matrix& Q, const std::vector<bool>& needs) {
    const Eigen::Index m = Q.rows();
    std::vector<bool> filled(needs.size());
    for (std::size_t j = 0; j < needs.size(); ++j) filled[j] = !needs[j];

    for (Eigen::Index j = 0; j < Q.cols(); ++j) {
        if (filled[static_cast<std::size_t>(j)]) continue;
        Vector outside = Vector::Ones(m);
        for (Eigen::Index k = 0; k < Q.cols(); ++k)
            if (filled[static_cast<std::size_t>(k)]) outside -= Q.col(k).cwiseAbs2();
        Eigen::Index pick = 0;
        for (Eigen::Index i = 1; i < m; ++i)
            if (outside(i) > outside(pick)) pick = i;

        Vector v = Vector::Unit(m, pick);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < Q.cols(); ++k)
                if (filled[static_cast<std::size_t>(k)]) v -= Q.col(k).dot(v) * Q.col(k);
        Q.col(j) = v / v.norm();
        filled[static_cast<std::size_t>(j)] = true;
    }
}

// One-sided (Hestenes) Jacobi on the columns of a tall matrix.
inline SvdResult jacobi_svd_tall(const Matrix& A) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    Matrix W = A;
    Matrix V = Matrix::Identity(n, n);
    constexpr double tol = 4.0 * std::numeric_limits<double>::epsilon();
    constexpr int max_sweeps = 80;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double alpha = W.col(p).squaredNorm();
                const double beta = W.col(q).squaredNorm();
                const double gamma = W.col(p).dot(W.col(q));
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (Eigen::Index i = 0; i < m; ++i) {
                    const double wp = W(i, p);
                    const double wq = W(i, q);
                    W(i, p) = c * wp - s * wq;
                    W(i, q) = s * wp + c * wq;
                }
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double vp = V(i, p);
                    const double vq = V(i, q);
                    V(i, p) = c * vp - s * vq;
                    V(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    Vector norms(n);
    for (Eigen::Index j = 0; j < n; ++j) norms(j) = W.col(j).norm();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return norms(a) > norms(b); });

    SvdResult out{Matrix(m, n), Vector(n), Matrix(n, n)};
    const double smax = n > 0 ? norms(order.front()) : 0.0;
    const double negligible = smax * static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon();
    std::vector<bool> needs(static_cast<std::size_t>(n), false);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index j = order[static_cast<std::size_t>(k)];
        out.s(k) = norms(j);
        out.V.col(k) = V.col(j);
        if (norms(j) > negligible && norms(j) > 0.0) {
            out.U.col(k) = W.col(j) / norms(j);
        } else {
            out.U.col(k).setZero();
            needs[static_cast<std::size_t>(k)] = true;
        }
    }
    complete_orthonormal(out.U, needs);
    return out;
}

}  // namespace detail

/// Thin SVD A = U diag(s) V^T with r = min(rows, cols) components.
///
/// Singular values are sorted descending with equal values kept in their
/// original column order. Within each left singular vector, the entry of
/// largest magnitude is positive; the right vector follows its sign. The
/// output is therefore a deterministic function of A.
inline SvdResult svd(const Matrix& A) {
    if (!A.allFinite()) throw InputError("svd: input contains non-finite entries");
    SvdResult out;
    if (A.rows() >= A.cols()) {
        out = detail::jacobi_svd_tall(A);
    } else {
        SvdResult t = detail::jacobi_svd_tall(A.transpose());
        out = SvdResult{std::move(t.V), std::move(t.s), std::move(t.U)};
    }
    detail::fix_signs(out.U, out.V);
    return out;
}

namespace detail {

inline CholeskyFactor factor_regularized(const Matrix& A, double relative_jitter, const char* name) {
    try {
        return cholesky(A, 0.0);
    } catch (const NotPositiveDefiniteError&) {
        const double mean_diag = A.diagonal().mean();
        const double jitter = relative_jitter * (mean_diag > 0.0 ? mean_diag : 1.0);
        try {
            if (jitter > 0.0) return cholesky(A, jitter);
        } catch (const NotPositiveDefiniteError& e) {
            throw SingularRegularizationError(std::string(name) + " is singular even with jitter " +
                                              std::to_string(jitter) + " (pivot " + std::to_string(e.pivot()) +
                                              "); increase the regularization eta or the jitter");
        }
        throw SingularRegularizationError(std::string(name) +
                                          " is not positive definite and jitter is 0; "
                                          "increase the regularization eta or set a positive jitter");
    }
}

}  // namespace detail

inline PairedEigSolution solve_paired_eig_factored(const Matrix& M, const CholeskyFactor& fl,
                                                   const CholeskyFactor& fn, Eigen::Index d);

/**
 * Solves M b = lambda L a and M^T a = lambda N b for the top d pairs.
 *
 * L = C_L C_L^T and N = C_N C_N^T are factored, the whitened cross matrix
 * G = C_L^{-1} M C_N^{-T} is decomposed by `svd`, and the singular pairs are
 * mapped back with a = C_L^{-T} u, b = C_N^{-T} v. The singular values are the
 * lambdas, so both equations share one eigenvalue.
 *
 * If a factorization fails, it is retried once with a diagonal shift of
 * `relative_jitter` times the mean diagonal of that matrix.
 */
inline PairedEigSolution solve_paired_eig(const Matrix& M, const Matrix& L, const Matrix& N, Eigen::Index d,
                                          double relative_jitter = 1e-9) {
    if (L.rows() != L.cols() || N.rows() != N.cols())
        throw InputError("solve_paired_eig: L and N must be square");
    if (M.rows() != L.rows() || M.cols() != N.rows())
        throw InputError("solve_paired_eig: M is " + std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                         " but L is " + std::to_string(L.rows()) + "x" + std::to_string(L.cols()) + " and N is " +
                         std::to_string(N.rows()) + "x" + std::to_string(N.cols()));
    if (d < 1 || d > std::min(M.rows(), M.cols()))
        throw InputError("solve_paired_eig: component count " + std::to_string(d) + " out of range [1, " +
                         std::to_string(std::min(M.rows(), M.cols())) + "]");
    if (!(relative_jitter >= 0.0)) throw InputError("solve_paired_eig: jitter must be >= 0");

    return solve_paired_eig_factored(M, detail::factor_regularized(L, relative_jitter, "L"),
                                     detail::factor_regularized(N, relative_jitter, "N"), d);
}

/// Same as `solve_paired_eig` for callers that already hold the factors.
inline PairedEigSolution solve_paired_eig_factored(const Matrix& M, const CholeskyFactor& fl,
                                                   const CholeskyFactor& fn, Eigen::Index d) {
    if (M.rows() != fl.dim() || M.cols() != fn.dim())
        throw InputError("solve_paired_eig: factor sizes do not match M");
    if (d < 1 || d > std::min(M.rows(), M.cols()))
        throw InputError("solve_paired_eig: component count out of range");

    const Matrix left = solve_lower_triangular(fl, M);
    const Matrix G = solve_lower_triangular(fn, left.transpose()).transpose();
    const SvdResult dec = svd(G);

    PairedEigSolution out;
    out.alphas = solve_lower_transpose(fl, dec.U.leftCols(d));
    out.betas = solve_lower_transpose(fn, dec.V.leftCols(d));
    out.lambdas = dec.s.head(d);
    out.jitter_l = fl.jitter;
    out.jitter_n = fn.jitter;
    return out;
}

}  // namespace kcca
