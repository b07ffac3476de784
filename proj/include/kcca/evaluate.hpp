#pragma once

#include <type_traits>
#include <variant>

#include "kcca/cca.hpp"
#include "kcca/serialization.hpp"

namespace kcca {

/// Canonical features of `points` on one side, for either model kind.
inline Matrix project_any(const AnyModel& model, Side side, const Matrix& points) {
    return std::visit(
        [&](const auto& m) -> Matrix {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, KccaModel>)
                return project(m, side, points);
            else
                return project_linear(m, side, points);
        },
        model);
}

/// Projects both splits and correlates u against v within each split.
inline EvalReport evaluate(const AnyModel& model, const PairedDataset& train, const PairedDataset& test) {
    train.validate();
    test.validate();
    EvalReport r;
    if (const auto* k = std::get_if<KccaModel>(&model)) {
        r.method = "kcca";
        r.model_echo = config_to_json(k->config);
        r.lambdas = k->lambdas;
    } else {
        const auto& l = std::get<LinearCcaModel>(model);
        r.method = "linear";
        r.model_echo = Json{{"ridge", l.ridge}, {"components", l.components()}};
        r.lambdas = l.rhos;
    }
    r.train = correlation_table(project_any(model, Side::x, train.x), project_any(model, Side::y, train.y),
                                Split::train);
    r.test = correlation_table(project_any(model, Side::x, test.x), project_any(model, Side::y, test.y),
                               Split::test);
    r.n_train = train.size();
    r.n_test = test.size();
    return r;
}

}  // namespace kcca
