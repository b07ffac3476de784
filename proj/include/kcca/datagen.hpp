#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kcca/dataset.hpp"
#include "kcca/errors.hpp"

namespace kcca {

/**
 * Reproducible random stream.
 *
 * Engine: std::mt19937_64 (its output sequence is fixed by the C++ standard).
 * The engine seed is derived from a user seed and a stream id with two rounds
 * of SplitMix64, so streams with different ids are independent.
 * Uniform doubles take the top 53 bits of one engine output. Normal variates
 * use the Marsaglia polar method, caching the second value of each pair.
 * The standard distributions are avoided because their algorithms are
 * implementation-defined.
 */
class Rng {
public:
    static constexpr const char* algorithm = "mt19937_64+splitmix64/polar-normal v1";

    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(derive_seed(seed, stream)) {}

    static std::uint64_t splitmix64(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
        return splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL));
    }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n), by rejection so every value is equally likely.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw InputError("uniform_index: n must be positive");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        if (has_spare_) {
            has_spare_ = false;
            return mean + stddev * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return mean + stddev * (u * f);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class Scenario { sim1, sim2 };

struct SimSpec {
    Scenario scenario = Scenario::sim1;
    Eigen::Index n_train = 40;
    Eigen::Index n_test = 100;
    double noise_std = 0.05;
    std::uint64_t seed = 0;

    static SimSpec sim1_default(std::uint64_t seed) { return {Scenario::sim1, 40, 100, 0.05, seed}; }
    static SimSpec sim2_default(std::uint64_t seed) { return {Scenario::sim2, 10, 100, 0.05, seed}; }

    void validate() const {
        if (n_train < 1) throw InputError("simulation needs n_train >= 1");
        if (n_test < 1) throw InputError("simulation needs n_test >= 1");
        if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
            throw InputError("simulation noise_std must be finite and >= 0");
    }
};

struct Sim1Data {
    PairedDataset train;
    PairedDataset test;
    Vector train_theta;
    Vector test_theta;
};

struct Sim2Data {
    PairedDataset train;  // one row per class center, labels 0..n_train-1
    PairedDataset test;   // labels hold the class of each sample
};

namespace detail {
inline constexpr std::uint64_t train_stream = 1;
inline constexpr std::uint64_t test_stream = 2;

inline void sim1_fill(Rng& rng, Eigen::Index n, double noise, PairedDataset& out, Vector& theta) {
    out.x.resize(n, 2);
    out.y.resize(n, 2);
    theta.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = rng.uniform(-std::numbers::pi, std::numbers::pi);
        theta(i) = t;
        const double scale = std::exp(t / 4.0);
        out.x(i, 0) = t + rng.normal(0.0, noise);
        out.x(i, 1) = std::sin(3.0 * t) + rng.normal(0.0, noise);
        out.y(i, 0) = scale * std::cos(2.0 * t) + rng.normal(0.0, noise);
        out.y(i, 1) = scale * std::sin(2.0 * t) + rng.normal(0.0, noise);
    }
}
}  // namespace detail

/// Noise-free first-scenario sample for a given angle:
/// x = (t, sin 3t), y = e^{t/4} (cos 2t, sin 2t).
inline std::pair<Vector, Vector> sim1_curve(double theta) {
    Vector x(2), y(2);
    x << theta, std::sin(3.0 * theta);
    const double scale = std::exp(theta / 4.0);
    y << scale * std::cos(2.0 * theta), scale * std::sin(2.0 * theta);
    return {x, y};
}

/// Angles uniform on [-pi, pi] mapped through `sim1_curve`, plus independent
/// Gaussian noise on each coordinate.
inline Sim1Data gen_sim1(const SimSpec& spec) {
    spec.validate();
    if (spec.scenario != Scenario::sim1) throw InputError("gen_sim1: spec scenario is not sim1");
    Sim1Data out;
    Rng train_rng(spec.seed, detail::train_stream);
    Rng test_rng(spec.seed, detail::test_stream);
    detail::sim1_fill(train_rng, spec.n_train, spec.noise_std, out.train, out.train_theta);
    detail::sim1_fill(test_rng, spec.n_test, spec.noise_std, out.test, out.test_theta);
    return out;
}

/// Class centers: x- and y-centers uniform on [0,1]^2, drawn independently and
/// paired by draw order. Test samples pick a class uniformly and perturb both
/// centers with Gaussian noise.
inline Sim2Data gen_sim2(const SimSpec& spec) {
    spec.validate();
    if (spec.scenario != Scenario::sim2) throw InputError("gen_sim2: spec scenario is not sim2");
    const Eigen::Index k = spec.n_train;
    Sim2Data out;

    Rng train_rng(spec.seed, detail::train_stream);
    out.train.x.resize(k, 2);
    out.train.y.resize(k, 2);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index c = 0; c < 2; ++c) out.train.x(i, c) = train_rng.uniform01();
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index c = 0; c < 2; ++c) out.train.y(i, c) = train_rng.uniform01();
    std::vector<int> centers(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) centers[static_cast<std::size_t>(i)] = static_cast<int>(i);
    out.train.labels = std::move(centers);

    Rng test_rng(spec.seed, detail::test_stream);
    const Eigen::Index n = spec.n_test;
    out.test.x.resize(n, 2);
    out.test.y.resize(n, 2);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto cls = static_cast<Eigen::Index>(test_rng.uniform_index(static_cast<std::uint64_t>(k)));
        labels[static_cast<std::size_t>(i)] = static_cast<int>(cls);
        for (Eigen::Index c = 0; c < 2; ++c)
            out.test.x(i, c) = out.train.x(cls, c) + test_rng.normal(0.0, spec.noise_std);
        for (Eigen::Index c = 0; c < 2; ++c)
            out.test.y(i, c) = out.train.y(cls, c) + test_rng.normal(0.0, spec.noise_std);
    }
    out.test.labels = std::move(labels);
    return out;
}

/// 1-based rank of each entry in increasing order (ties by index).
inline std::vector<int> increasing_rank(const Vector& v) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return v(a) < v(b); });
    std::vector<int> rank(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[static_cast<std::size_t>(order[r])] = static_cast<int>(r) + 1;
    return rank;
}

}  // namespace kcca
