#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kcca/dataset.hpp"
#include "kcca/errors.hpp"
#include "kcca/kernels.hpp"
#include "kcca/linalg.hpp"

namespace kcca {

/// Penalty added to the self-covariance blocks.
///  - rkhs:    eta * K    (squared RKHS norm of the feature direction)
///  - dual_l2: eta * I    (squared norm of the dual coefficients)
enum class Regularizer { rkhs, dual_l2 };

inline const char* to_string(Regularizer r) { return r == Regularizer::rkhs ? "rkhs" : "dual_l2"; }

inline Regularizer parse_regularizer(std::string_view s) {
    if (s == "rkhs") return Regularizer::rkhs;
    if (s == "dual_l2" || s == "dual-l2") return Regularizer::dual_l2;
    throw InputError("unknown regularizer '" + std::string(s) + "' (expected rkhs or dual-l2)");
}

struct KccaConfig {
    KernelSpec kernel_x = KernelSpec::gaussian(1.0);
    KernelSpec kernel_y = KernelSpec::gaussian(1.0);
    double eta1 = 1.0;
    double eta2 = 1.0;
    Regularizer regularizer = Regularizer::rkhs;
    Eigen::Index components = 2;
    double jitter = 1e-9;  // relative to the mean diagonal; used only if plain factoring fails

    void validate() const {
        if (!(eta1 >= 0.0) || !(eta2 >= 0.0) || !std::isfinite(eta1) || !std::isfinite(eta2))
            throw InputError("eta1 and eta2 must be finite and >= 0");
        if (regularizer == Regularizer::rkhs && (eta1 == 0.0 || eta2 == 0.0))
            throw InputError("rkhs regularization requires eta1 > 0 and eta2 > 0");
        if (components < 1) throw InputError("components must be >= 1");
        if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw InputError("jitter must be finite and >= 0");
    }
};

struct KccaModel {
    Matrix train_x;
    Matrix train_y;
    KccaConfig config;
    Matrix alphas;   // N x d
    Matrix betas;    // N x d
    Vector lambdas;  // d, descending

    Eigen::Index components() const noexcept { return lambdas.size(); }
};

struct LinearCcaModel {
    RowVector mean_x;
    RowVector mean_y;
    Matrix A;      // n_x x d
    Matrix B;      // n_y x d
    Vector rhos;   // canonical correlations in [0, 1]
    double ridge = 0.0;

    Eigen::Index components() const noexcept { return rhos.size(); }
};

enum class Split { train, test };

inline const char* to_string(Split s) { return s == Split::train ? "train" : "test"; }

/// Entry (j, k) is the Pearson correlation of u-component j with v-component k.
struct CorrelationTable {
    Matrix values;
    Split split = Split::train;
};

struct MlnBlocks {
    Matrix M;
    Matrix L;
    Matrix N;
};

namespace detail {

inline void mirror_upper(Matrix& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = j + 1; i < A.rows(); ++i) A(i, j) = A(j, i);
}

}  // namespace detail

/**
 * Coupled blocks of the regularized kernel CCA objective:
 *
 *   M = (1/N) Kx^T J Ky
 *   L = (1/N) Kx^T J Kx + eta1 R_x
 *   N = (1/N) Ky^T J Ky + eta2 R_y
 *
 * with R = K (rkhs) or R = I (dual_l2). J is idempotent, so Kx^T J Ky is
 * evaluated as (J Kx)^T (J Ky) with column centering in place of J.
 */
inline MlnBlocks build_mln(const Matrix& Kx, const Matrix& Ky, const KccaConfig& config) {
    if (Kx.rows() != Kx.cols() || Ky.rows() != Ky.cols())
        throw InputError("build_mln: Gram matrices must be square");
    if (Kx.rows() != Ky.rows())
        throw InputError("build_mln: Gram sizes differ (" + std::to_string(Kx.rows()) + " vs " +
                         std::to_string(Ky.rows()) + ")");
    const Eigen::Index n = Kx.rows();
    const double inv_n = 1.0 / static_cast<double>(n);

    const Matrix cx = center_columns(Kx);
    const Matrix cy = center_columns(Ky);

    MlnBlocks out;
    out.M = inv_n * (cx.transpose() * cy);
    out.L = inv_n * (cx.transpose() * cx);
    out.N = inv_n * (cy.transpose() * cy);
    if (config.regularizer == Regularizer::rkhs) {
        out.L += config.eta1 * Kx;
        out.N += config.eta2 * Ky;
    } else {
        out.L.diagonal().array() += config.eta1;
        out.N.diagonal().array() += config.eta2;
    }
    detail::mirror_upper(out.L);
    detail::mirror_upper(out.N);
    return out;
}

inline KccaModel fit_kcca(const PairedDataset& data, const KccaConfig& config) {
    data.validate();
    config.validate();
    const Eigen::Index n = data.size();
    if (n < 2) throw InputError("fit_kcca: need at least 2 samples, got " + std::to_string(n));
    if (config.components > n)
        throw InputError("fit_kcca: components " + std::to_string(config.components) + " exceeds sample count " +
                         std::to_string(n));

    const Matrix Kx = gram_matrix(config.kernel_x, data.x);
    const Matrix Ky = gram_matrix(config.kernel_y, data.y);
    const MlnBlocks blocks = build_mln(Kx, Ky, config);
    PairedEigSolution sol = solve_paired_eig(blocks.M, blocks.L, blocks.N, config.components, config.jitter);

    return KccaModel{data.x, data.y, config, std::move(sol.alphas), std::move(sol.betas), std::move(sol.lambdas)};
}

/// Canonical features u_k(p) = sum_i alpha_ik k_x(x_i, p) (or v with beta and
/// k_y). Features are not centered.
inline Matrix project(const KccaModel& model, Side side, const Matrix& points) {
    const Matrix& train = side == Side::x ? model.train_x : model.train_y;
    if (points.cols() != train.cols())
        throw InputError(std::string("project: side ") + to_string(side) + " expects dimension " +
                         std::to_string(train.cols()) + ", got " + std::to_string(points.cols()));
    const KernelSpec& spec = side == Side::x ? model.config.kernel_x : model.config.kernel_y;
    const Matrix& coef = side == Side::x ? model.alphas : model.betas;
    return cross_gram(spec, points, train) * coef;
}

inline Matrix project_linear(const LinearCcaModel& model, Side side, const Matrix& points) {
    const RowVector& mean = side == Side::x ? model.mean_x : model.mean_y;
    if (points.cols() != mean.size())
        throw InputError(std::string("project_linear: side ") + to_string(side) + " expects dimension " +
                         std::to_string(mean.size()) + ", got " + std::to_string(points.cols()));
    const Matrix& W = side == Side::x ? model.A : model.B;
    return (points.rowwise() - mean) * W;
}

/// Split-local Pearson correlations between the columns of u and of v.
/// Throws DegenerateFeatureError on a (numerically) constant column.
inline CorrelationTable correlation_table(const Matrix& u, const Matrix& v, Split split = Split::train) {
    if (u.rows() != v.rows()) throw InputError("correlation_table: u and v row counts differ");
    if (u.rows() < 2) throw InputError("correlation_table: need at least 2 rows");

    auto centered = [](const Matrix& f, char name) {
        Matrix c = f.rowwise() - f.colwise().mean();
        Vector norms(f.cols());
        for (Eigen::Index j = 0; j < f.cols(); ++j) {
            const double scale = f.col(j).cwiseAbs().maxCoeff();
            const double ss = c.col(j).squaredNorm();
            const double rms = std::sqrt(ss / static_cast<double>(f.rows()));
            if (!(ss > 0.0) || rms <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
                throw DegenerateFeatureError(std::string("feature column ") + name + std::to_string(j + 1) +
                                             " has zero variance; correlation undefined");
            norms(j) = std::sqrt(ss);
        }
        return std::pair{std::move(c), std::move(norms)};
    };
    const auto [cu, nu] = centered(u, 'u');
    const auto [cv, nv] = centered(v, 'v');

    CorrelationTable table{Matrix(u.cols(), v.cols()), split};
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (Eigen::Index k = 0; k < v.cols(); ++k) {
            double r = cu.col(j).dot(cv.col(k)) / (nu(j) * nv(k));
            if (std::abs(r) > 1.0) {
                if (std::abs(r) - 1.0 > 1e-12)
                    throw NumericalError("correlation_table: |r| exceeds 1 by " + std::to_string(std::abs(r) - 1.0));
                r = std::copysign(1.0, r);
            }
            table.values(j, k) = r;
        }
    }
    return table;
}

/**
 * Linear CCA: whitens the (ridge-shifted) covariance blocks by Cholesky and
 * takes the SVD of the whitened cross-covariance. Covariances use 1/N, so each
 * training projection has unit variance when ridge = 0.
 */
inline LinearCcaModel fit_linear_cca(const PairedDataset& data, Eigen::Index d, double ridge = 0.0) {
    data.validate();
    const Eigen::Index n = data.size();
    if (n < 2) throw InputError("fit_linear_cca: need at least 2 samples, got " + std::to_string(n));
    if (d < 1 || d > std::min(data.x.cols(), data.y.cols()))
        throw InputError("fit_linear_cca: components " + std::to_string(d) + " out of range [1, " +
                         std::to_string(std::min(data.x.cols(), data.y.cols())) + "]");
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InputError("fit_linear_cca: ridge must be >= 0");

    LinearCcaModel model;
    model.ridge = ridge;
    model.mean_x = data.x.colwise().mean();
    model.mean_y = data.y.colwise().mean();
    const Matrix xc = data.x.rowwise() - model.mean_x;
    const Matrix yc = data.y.rowwise() - model.mean_y;
    const double inv_n = 1.0 / static_cast<double>(n);

    Matrix cxx = inv_n * (xc.transpose() * xc);
    Matrix cyy = inv_n * (yc.transpose() * yc);
    const Matrix cxy = inv_n * (xc.transpose() * yc);
    cxx.diagonal().array() += ridge;
    cyy.diagonal().array() += ridge;
    detail::mirror_upper(cxx);
    detail::mirror_upper(cyy);

    auto factor = [&](const Matrix& c, const char* which) {
        try {
            return cholesky(c);
        } catch (const NotPositiveDefiniteError& e) {
            throw NotPositiveDefiniteError(e.pivot(), c(static_cast<Eigen::Index>(e.pivot()),
                                                        static_cast<Eigen::Index>(e.pivot())),
                                           std::string(which) + " covariance is rank deficient; use a positive ridge");
        }
    };
    const CholeskyFactor fx = factor(cxx, "x");
    const CholeskyFactor fy = factor(cyy, "y");
    PairedEigSolution sol = solve_paired_eig_factored(cxy, fx, fy, d);

    model.A = std::move(sol.alphas);
    model.B = std::move(sol.betas);
    model.rhos = sol.lambdas.cwiseMin(1.0).cwiseMax(0.0);
    return model;
}

}  // namespace kcca
