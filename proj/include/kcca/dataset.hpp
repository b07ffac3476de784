#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kcca/errors.hpp"
#include "kcca/matrix.hpp"

namespace kcca {

/// N aligned samples (x_i, y_i), one per row, with optional integer labels.
struct PairedDataset {
    Matrix x;
    Matrix y;
    std::optional<std::vector<int>> labels;

    Eigen::Index size() const noexcept { return x.rows(); }

    void validate() const {
        if (x.rows() != y.rows())
            throw InputError("dataset: x has " + std::to_string(x.rows()) + " rows but y has " +
                             std::to_string(y.rows()));
        if (labels && static_cast<Eigen::Index>(labels->size()) != x.rows())
            throw InputError("dataset: " + std::to_string(labels->size()) + " labels for " +
                             std::to_string(x.rows()) + " rows");
    }
};

enum class Side { x, y };

inline const char* to_string(Side s) { return s == Side::x ? "x" : "y"; }

}  // namespace kcca
