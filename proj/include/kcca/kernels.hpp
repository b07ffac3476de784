#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "kcca/errors.hpp"
#include "kcca/matrix.hpp"

namespace kcca {

enum class KernelKind { gaussian, linear, polynomial };

/**
 * Declarative kernel choice.
 *
 * The Gaussian kernel is k(a, b) = exp(-|a - b|^2 / (2 sigma^2)). Note the
 * factor 2 in the denominator: some libraries parameterize with sigma^2 or
 * with gamma = 1 / (2 sigma^2), so widths are not interchangeable.
 *
 * The polynomial kernel is k(a, b) = (a.b + offset)^degree.
 */
class KernelSpec {
public:
    static KernelSpec gaussian(double sigma) {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw InputError("gaussian kernel requires sigma > 0, got " + format_double(sigma));
        return KernelSpec(KernelKind::gaussian, sigma, 0, 0.0);
    }

    static KernelSpec linear() { return KernelSpec(KernelKind::linear, 0.0, 0, 0.0); }

    static KernelSpec polynomial(int degree = 2, double offset = 1.0) {
        if (degree < 1)
            throw InputError("polynomial kernel requires degree >= 1, got " + std::to_string(degree));
        if (!(offset >= 0.0) || !std::isfinite(offset))
            throw InputError("polynomial kernel requires offset >= 0, got " + format_double(offset));
        return KernelSpec(KernelKind::polynomial, 0.0, degree, offset);
    }

    /// Parses `gaussian:sigma=<float>`, `linear` or `poly:degree=<int>,offset=<float>`.
    /// Polynomial parameters may be omitted and default to degree=2, offset=1.
    static KernelSpec parse(std::string_view text);

    KernelKind kind() const noexcept { return kind_; }
    double sigma() const noexcept { return sigma_; }
    int degree() const noexcept { return degree_; }
    double offset() const noexcept { return offset_; }

    /// Canonical text form; `parse(to_string())` reproduces the spec exactly.
    std::string to_string() const {
        switch (kind_) {
        case KernelKind::gaussian:
            return "gaussian:sigma=" + format_double(sigma_);
        case KernelKind::linear:
            return "linear";
        case KernelKind::polynomial:
            return "poly:degree=" + std::to_string(degree_) + ",offset=" + format_double(offset_);
        }
        return {};
    }

    template <typename A, typename B>
    double operator()(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) const {
        switch (kind_) {
        case KernelKind::gaussian: {
            double sq = 0.0;
            for (Eigen::Index i = 0; i < a.size(); ++i) {
                const double d = a(i) - b(i);
                sq += d * d;
            }
            return std::exp(-sq / (2.0 * sigma_ * sigma_));
        }
        case KernelKind::linear:
            return dot(a, b);
        case KernelKind::polynomial:
            return std::pow(dot(a, b) + offset_, degree_);
        }
        return 0.0;
    }

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

    static std::string format_double(double v) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

private:
    KernelSpec(KernelKind kind, double sigma, int degree, double offset)
        : kind_(kind), sigma_(sigma), degree_(degree), offset_(offset) {}

    // Plain summation in index order; Eigen's vectorized dot may reassociate.
    template <typename A, typename B>
    static double dot(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
        return s;
    }

    KernelKind kind_;
    double sigma_;
    int degree_;
    double offset_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view token, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
        throw InputError("kernel spec: invalid number in token '" + std::string(token) + "'");
    return out;
}

}  // namespace detail

inline KernelSpec KernelSpec::parse(std::string_view text) {
    using detail::trim;
    text = trim(text);
    const auto colon = text.find(':');
    const std::string_view name = trim(text.substr(0, colon));
    const std::string_view params = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    double sigma = 0.0;
    bool have_sigma = false;
    int degree = 2;
    double offset = 1.0;

    if (name != "gaussian" && name != "linear" && name != "poly")
        throw InputError("kernel spec: unknown kernel '" + std::string(name) + "'");
    if (colon != std::string_view::npos && trim(params).empty())
        throw InputError("kernel spec: empty parameter list after '" + std::string(name) + ":'");

    std::string_view rest = params;
    while (colon != std::string_view::npos && !rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view token = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);

        const auto eq = token.find('=');
        if (eq == std::string_view::npos)
            throw InputError("kernel spec: expected key=value, got '" + std::string(token) + "'");
        const std::string_view key = trim(token.substr(0, eq));
        const std::string_view value = trim(token.substr(eq + 1));

        if (name == "gaussian" && key == "sigma") {
            sigma = detail::parse_number<double>(token, value);
            have_sigma = true;
        } else if (name == "poly" && key == "degree") {
            degree = detail::parse_number<int>(token, value);
        } else if (name == "poly" && key == "offset") {
            offset = detail::parse_number<double>(token, value);
        } else {
            throw InputError("kernel spec: unexpected parameter '" + std::string(token) + "' for kernel '" +
                             std::string(name) + "'");
        }
    }

    if (name == "gaussian") {
        if (!have_sigma) throw InputError("kernel spec: 'gaussian' requires sigma=<float>");
        return gaussian(sigma);
    }
    if (name == "linear") return linear();
    return polynomial(degree, offset);
}

inline double kernel_eval(const KernelSpec& spec, const Vector& x1, const Vector& x2) {
    if (x1.size() != x2.size())
        throw InputError("kernel_eval: dimension mismatch (" + std::to_string(x1.size()) + " vs " +
                         std::to_string(x2.size()) + ")");
    return spec(x1, x2);
}

/// N x N Gram matrix over the rows of X. Only i <= j is evaluated; the lower
/// triangle is a mirror, so the result is exactly symmetric.
inline Matrix gram_matrix(const KernelSpec& spec, const Matrix& X) {
    const Eigen::Index n = X.rows();
    if (n < 1) throw InputError("gram_matrix: need at least one sample");
    Matrix K(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            const double k = spec(X.row(i), X.row(j));
            K(i, j) = k;
            K(j, i) = k;
        }
    }
    return K;
}

/// Rectangular kernel matrix: entry (i, j) = k(A_i, B_j).
inline Matrix cross_gram(const KernelSpec& spec, const Matrix& A, const Matrix& B) {
    if (A.cols() != B.cols())
        throw InputError("cross_gram: dimension mismatch (" + std::to_string(A.cols()) + " vs " +
                         std::to_string(B.cols()) + ")");
    Matrix K(A.rows(), B.rows());
    for (Eigen::Index j = 0; j < B.rows(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i) K(i, j) = spec(A.row(i), B.row(j));
    return K;
}

/// Explicit J = I - (1/n) 1 1^T.
inline Matrix centering_matrix(Eigen::Index n) {
    if (n < 1) throw InputError("centering_matrix: n must be >= 1");
    Matrix J = Matrix::Constant(n, n, -1.0 / static_cast<double>(n));
    J.diagonal().array() += 1.0;
    return J;
}

/// Computes J * K without forming J: subtracts each column's mean.
inline Matrix center_columns(const Matrix& K) {
    const RowVector means = K.colwise().mean();
    return K.rowwise() - means;
}

}  // namespace kcca
