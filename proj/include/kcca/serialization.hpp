#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "json.hpp"

#include "kcca/cca.hpp"
#include "kcca/csv.hpp"
#include "kcca/errors.hpp"

namespace kcca {

using Json = nlohmann::json;

inline constexpr const char* model_schema = "kcca-model/1";
inline constexpr const char* report_schema = "kcca-report/1";

/// A fitted model of either kind, as stored in a model file.
using AnyModel = std::variant<KccaModel, LinearCcaModel>;

namespace detail {

// Matrices are stored row-major as arrays of rows.
inline Json to_json_matrix(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json_vector(const Eigen::Ref<const Vector>& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline Matrix matrix_from_json(const Json& j, const char* field) {
    if (!j.is_array()) throw FormatError(std::string("model: field '") + field + "' must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& row = j.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw FormatError(std::string("model: ragged rows in field '") + field + "'");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

inline Vector vector_from_json(const Json& j, const char* field) {
    if (!j.is_array()) throw FormatError(std::string("model: field '") + field + "' must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

}  // namespace detail

inline Json config_to_json(const KccaConfig& c) {
    return Json{{"kernel_x", c.kernel_x.to_string()},
                {"kernel_y", c.kernel_y.to_string()},
                {"eta1", c.eta1},
                {"eta2", c.eta2},
                {"regularizer", to_string(c.regularizer)},
                {"components", c.components},
                {"jitter", c.jitter}};
}

inline KccaConfig config_from_json(const Json& j) {
    KccaConfig c;
    c.kernel_x = KernelSpec::parse(j.at("kernel_x").get<std::string>());
    c.kernel_y = KernelSpec::parse(j.at("kernel_y").get<std::string>());
    c.eta1 = j.at("eta1").get<double>();
    c.eta2 = j.at("eta2").get<double>();
    c.regularizer = parse_regularizer(j.at("regularizer").get<std::string>());
    c.components = j.at("components").get<Eigen::Index>();
    c.jitter = j.at("jitter").get<double>();
    return c;
}

inline Json model_to_json(const KccaModel& m) {
    return Json{{"schema", model_schema},
                {"method", "kcca"},
                {"config", config_to_json(m.config)},
                {"train_x", detail::to_json_matrix(m.train_x)},
                {"train_y", detail::to_json_matrix(m.train_y)},
                {"alphas", detail::to_json_matrix(m.alphas)},
                {"betas", detail::to_json_matrix(m.betas)},
                {"lambdas", detail::to_json_vector(m.lambdas)}};
}

inline Json model_to_json(const LinearCcaModel& m) {
    return Json{{"schema", model_schema},
                {"method", "linear"},
                {"ridge", m.ridge},
                {"mean_x", detail::to_json_vector(m.mean_x.transpose())},
                {"mean_y", detail::to_json_vector(m.mean_y.transpose())},
                {"A", detail::to_json_matrix(m.A)},
                {"B", detail::to_json_matrix(m.B)},
                {"rhos", detail::to_json_vector(m.rhos)}};
}

inline Json model_to_json(const AnyModel& m) {
    return std::visit([](const auto& v) { return model_to_json(v); }, m);
}

inline AnyModel model_from_json(const Json& j) {
    try {
        const auto schema = j.at("schema").get<std::string>();
        if (schema != model_schema)
            throw FormatError("model: unsupported schema '" + schema + "' (expected " + model_schema + ")");
        const auto method = j.at("method").get<std::string>();
        if (method == "kcca") {
            KccaModel m;
            m.config = config_from_json(j.at("config"));
            m.train_x = detail::matrix_from_json(j.at("train_x"), "train_x");
            m.train_y = detail::matrix_from_json(j.at("train_y"), "train_y");
            m.alphas = detail::matrix_from_json(j.at("alphas"), "alphas");
            m.betas = detail::matrix_from_json(j.at("betas"), "betas");
            m.lambdas = detail::vector_from_json(j.at("lambdas"), "lambdas");
            const auto n = m.train_x.rows();
            const auto d = m.lambdas.size();
            if (m.train_y.rows() != n || m.alphas.rows() != n || m.betas.rows() != n || m.alphas.cols() != d ||
                m.betas.cols() != d)
                throw FormatError("model: inconsistent array shapes");
            return m;
        }
        if (method == "linear") {
            LinearCcaModel m;
            m.ridge = j.at("ridge").get<double>();
            m.mean_x = detail::vector_from_json(j.at("mean_x"), "mean_x").transpose();
            m.mean_y = detail::vector_from_json(j.at("mean_y"), "mean_y").transpose();
            m.A = detail::matrix_from_json(j.at("A"), "A");
            m.B = detail::matrix_from_json(j.at("B"), "B");
            m.rhos = detail::vector_from_json(j.at("rhos"), "rhos");
            const auto d = m.rhos.size();
            if (m.A.rows() != m.mean_x.size() || m.B.rows() != m.mean_y.size() || m.A.cols() != d || m.B.cols() != d)
                throw FormatError("model: inconsistent array shapes");
            return m;
        }
        throw FormatError("model: unknown method '" + method + "'");
    } catch (const Json::exception& e) {
        throw FormatError(std::string("model: ") + e.what());
    }
}

inline void save_model(const std::string& path, const AnyModel& m) {
    write_file(path, [&](std::ostream& out) { out << model_to_json(m).dump(1) << '\n'; });
}

inline AnyModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return model_from_json(j);
}

/// Train and test evaluation of one fitted model.
struct EvalReport {
    Json model_echo;  // config (kcca) or ridge (linear)
    std::string method;
    Vector lambdas;  // lambdas for kcca, rhos for linear
    CorrelationTable train;
    CorrelationTable test;
    Eigen::Index n_train = 0;
    Eigen::Index n_test = 0;
};

inline Json report_to_json(const EvalReport& r) {
    auto split = [](const CorrelationTable& t, Eigen::Index n) {
        return Json{{"n", n},
                    {"table", detail::to_json_matrix(t.values)},
                    {"pearson", detail::to_json_vector(t.values.diagonal())}};
    };
    return Json{{"schema", report_schema},
                {"method", r.method},
                {"config", r.model_echo},
                {"lambdas", detail::to_json_vector(r.lambdas)},
                {"train", split(r.train, r.n_train)},
                {"test", split(r.test, r.n_test)}};
}

/// Text table with `train (test)` in every cell, values to two decimals.
inline std::string render_bracket_table(const CorrelationTable& train, const CorrelationTable& test) {
    auto cell = [](double v) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "    ";
    for (Eigen::Index k = 0; k < train.values.cols(); ++k) {
        char head[32];
        std::snprintf(head, sizeof head, " %-14s", ("v" + std::to_string(k + 1)).c_str());
        out << head;
    }
    out << '\n';
    for (Eigen::Index j = 0; j < train.values.rows(); ++j) {
        const std::string lead = "u" + std::to_string(j + 1);
        out << lead << std::string(lead.size() < 4 ? 4 - lead.size() : 1, ' ');
        for (Eigen::Index k = 0; k < train.values.cols(); ++k) {
            const std::string txt = cell(train.values(j, k)) + " (" + cell(test.values(j, k)) + ")";
            char buf[40];
            std::snprintf(buf, sizeof buf, " %-14s", txt.c_str());
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace kcca
