// kcca: simulate datasets, fit linear or kernel CCA, evaluate and transform.
//
// Exit codes: 0 success, 2 I/O, 3 numerical/domain, 64 usage.
// Every failure prints one line `error[<class>]: <message>` to stderr.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "kcca/kcca.hpp"

namespace {

constexpr int exit_io = 2;
constexpr int exit_domain = 3;
constexpr int exit_usage = 64;

struct SimulateArgs {
    std::string scenario = "sim1";
    long long train = 0;
    long long test = 0;
    std::uint64_t seed = 0;
    double noise = 0.05;
    std::string out_train;
    std::string out_test;
};

struct FitArgs {
    std::string data;
    std::string method = "kcca";
    std::string kernel_x = "gaussian:sigma=1.0";
    std::string kernel_y = "gaussian:sigma=1.0";
    double eta = 1.0;
    std::optional<double> eta1;
    std::optional<double> eta2;
    std::string reg = "rkhs";
    long long components = 2;
    double ridge = 0.0;
    double jitter = 1e-9;
    std::string model;
};

struct EvalArgs {
    std::string model;
    std::string train;
    std::string test;
    std::string report;
    std::string plot_dir;
};

struct TransformArgs {
    std::string model;
    std::string data;
    std::string side = "x";
    std::string out;
};

int run_simulate(const SimulateArgs& a) {
    kcca::SimSpec spec;
    spec.scenario = a.scenario == "sim1" ? kcca::Scenario::sim1 : kcca::Scenario::sim2;
    spec.n_train = a.train;
    spec.n_test = a.test;
    spec.noise_std = a.noise;
    spec.seed = a.seed;

    kcca::PairedDataset train, test;
    if (spec.scenario == kcca::Scenario::sim1) {
        auto sim = kcca::gen_sim1(spec);
        // Sample numbering follows increasing theta within each split.
        sim.train.labels = kcca::increasing_rank(sim.train_theta);
        sim.test.labels = kcca::increasing_rank(sim.test_theta);
        train = std::move(sim.train);
        test = std::move(sim.test);
    } else {
        auto sim = kcca::gen_sim2(spec);
        train = std::move(sim.train);
        test = std::move(sim.test);
    }
    kcca::write_dataset(a.out_train, train);
    kcca::write_dataset(a.out_test, test);
    std::cout << "simulate: scenario=" << a.scenario << " seed=" << a.seed << " train_rows=" << train.size()
              << " test_rows=" << test.size() << '\n';
    return 0;
}

int run_fit(const FitArgs& a) {
    const kcca::PairedDataset data = kcca::read_dataset(a.data);
    kcca::AnyModel model;
    if (a.method == "linear") {
        auto m = kcca::fit_linear_cca(data, a.components, a.ridge);
        std::cout << "rhos:";
        for (Eigen::Index k = 0; k < m.rhos.size(); ++k) std::cout << ' ' << kcca::format_decimal(m.rhos(k));
        std::cout << '\n';
        model = std::move(m);
    } else {
        kcca::KccaConfig config;
        config.kernel_x = kcca::KernelSpec::parse(a.kernel_x);
        config.kernel_y = kcca::KernelSpec::parse(a.kernel_y);
        config.eta1 = a.eta1.value_or(a.eta);
        config.eta2 = a.eta2.value_or(a.eta);
        config.regularizer = kcca::parse_regularizer(a.reg);
        config.components = a.components;
        config.jitter = a.jitter;
        auto m = kcca::fit_kcca(data, config);
        std::cout << "lambdas:";
        for (Eigen::Index k = 0; k < m.lambdas.size(); ++k) std::cout << ' ' << kcca::format_decimal(m.lambdas(k));
        std::cout << '\n';
        model = std::move(m);
    }
    kcca::save_model(a.model, model);
    return 0;
}

void write_plot_data(const std::string& dir, const kcca::AnyModel& model, const kcca::PairedDataset& train,
                     const kcca::PairedDataset& test) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw kcca::IoError("cannot create plot directory '" + dir + "': " + ec.message());

    struct SplitFeatures {
        const char* name;
        const kcca::PairedDataset* data;
        kcca::Matrix u, v;
    };
    SplitFeatures splits[] = {
        {"train", &train, kcca::project_any(model, kcca::Side::x, train.x),
         kcca::project_any(model, kcca::Side::y, train.y)},
        {"test", &test, kcca::project_any(model, kcca::Side::x, test.x),
         kcca::project_any(model, kcca::Side::y, test.y)},
    };
    const bool with_order = train.labels.has_value() && test.labels.has_value();
    const Eigen::Index d = splits[0].u.cols();
    for (Eigen::Index k = 0; k < d; ++k) {
        const std::string path = (std::filesystem::path(dir) / ("component_" + std::to_string(k + 1) + ".csv")).string();
        kcca::write_file(path, [&](std::ostream& out) {
            out << "u,v,split" << (with_order ? ",order" : "") << '\n';
            for (const auto& s : splits) {
                for (Eigen::Index i = 0; i < s.u.rows(); ++i) {
                    out << kcca::format_decimal(s.u(i, k)) << ',' << kcca::format_decimal(s.v(i, k)) << ','
                        << s.name;
                    if (with_order) out << ',' << (*s.data->labels)[static_cast<std::size_t>(i)];
                    out << '\n';
                }
            }
        });
    }
}

int run_eval(const EvalArgs& a) {
    const kcca::AnyModel model = kcca::load_model(a.model);
    const kcca::PairedDataset train = kcca::read_dataset(a.train);
    const kcca::PairedDataset test = kcca::read_dataset(a.test);
    const kcca::EvalReport report = kcca::evaluate(model, train, test);

    std::cout << "method: " << report.method << '\n' << "correlations: train (test)\n"
              << kcca::render_bracket_table(report.train, report.test);
    if (!a.report.empty())
        kcca::write_file(a.report, [&](std::ostream& out) { out << kcca::report_to_json(report).dump(2) << '\n'; });
    if (!a.plot_dir.empty()) write_plot_data(a.plot_dir, model, train, test);
    return 0;
}

int run_transform(const TransformArgs& a) {
    const kcca::AnyModel model = kcca::load_model(a.model);
    const kcca::PairedDataset data = kcca::read_dataset(a.data);
    const kcca::Side side = a.side == "x" ? kcca::Side::x : kcca::Side::y;
    const kcca::Matrix feats = kcca::project_any(model, side, side == kcca::Side::x ? data.x : data.y);
    kcca::write_file(a.out, [&](std::ostream& out) { kcca::write_features(out, feats, side == kcca::Side::x ? 'u' : 'v'); });
    std::cout << "transform: rows=" << feats.rows() << " components=" << feats.cols() << '\n';
    return 0;
}

int fail(const char* category, const std::string& message, int code) {
    std::cerr << "error[" << category << "]: " << message << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear and kernel canonical correlation analysis"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic train/test dataset pair");
    simulate->add_option("--scenario", sim.scenario, "sim1 or sim2")->required()->check(CLI::IsMember({"sim1", "sim2"}));
    simulate->add_option("--train", sim.train, "Training rows (sim2: class count)")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--test", sim.test, "Test rows")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Random seed")->required();
    simulate->add_option("--noise", sim.noise, "Gaussian noise standard deviation")->check(CLI::NonNegativeNumber);
    simulate->add_option("--out-train", sim.out_train, "Training CSV path")->required();
    simulate->add_option("--out-test", sim.out_test, "Test CSV path")->required();

    FitArgs fit;
    auto* fitcmd = app.add_subcommand("fit", "Fit a model to a training CSV");
    fitcmd->add_option("--data", fit.data, "Training CSV")->required();
    fitcmd->add_option("--method", fit.method, "kcca or linear")->check(CLI::IsMember({"kcca", "linear"}));
    fitcmd->add_option("--kernel-x", fit.kernel_x, "Kernel for x, e.g. gaussian:sigma=1.0");
    fitcmd->add_option("--kernel-y", fit.kernel_y, "Kernel for y");
    fitcmd->add_option("--eta", fit.eta, "Sets both eta1 and eta2")->check(CLI::NonNegativeNumber);
    fitcmd->add_option("--eta1", fit.eta1, "Regularization for x")->check(CLI::NonNegativeNumber);
    fitcmd->add_option("--eta2", fit.eta2, "Regularization for y")->check(CLI::NonNegativeNumber);
    fitcmd->add_option("--reg", fit.reg, "rkhs or dual-l2")->check(CLI::IsMember({"rkhs", "dual-l2", "dual_l2"}));
    fitcmd->add_option("--components", fit.components, "Number of components")->check(CLI::PositiveNumber);
    fitcmd->add_option("--ridge", fit.ridge, "Covariance ridge (linear)")->check(CLI::NonNegativeNumber);
    fitcmd->add_option("--jitter", fit.jitter, "Relative diagonal jitter on factorization retry")
        ->check(CLI::NonNegativeNumber);
    fitcmd->add_option("--model", fit.model, "Output model JSON")->required();

    EvalArgs ev;
    auto* evalcmd = app.add_subcommand("eval", "Correlation tables on train and test splits");
    evalcmd->add_option("--model", ev.model, "Model JSON")->required();
    evalcmd->add_option("--train", ev.train, "Training CSV")->required();
    evalcmd->add_option("--test", ev.test, "Test CSV")->required();
    evalcmd->add_option("--report", ev.report, "Report JSON output");
    evalcmd->add_option("--plot-dir", ev.plot_dir, "Directory for per-component scatter CSVs");

    TransformArgs tr;
    auto* transform = app.add_subcommand("transform", "Project one side of a dataset to canonical features");
    transform->add_option("--model", tr.model, "Model JSON")->required();
    transform->add_option("--data", tr.data, "Dataset CSV")->required();
    transform->add_option("--side", tr.side, "x or y")->check(CLI::IsMember({"x", "y"}));
    transform->add_option("--out", tr.out, "Feature CSV output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), exit_usage);
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*fitcmd) return run_fit(fit);
        if (*evalcmd) return run_eval(ev);
        if (*transform) return run_transform(tr);
    } catch (const kcca::IoError& e) {
        return fail(e.category(), e.what(), exit_io);
    } catch (const kcca::FormatError& e) {
        return fail(e.category(), e.what(), exit_usage);
    } catch (const kcca::Error& e) {
        return fail(e.category(), e.what(), exit_domain);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), exit_domain);
    }
    return exit_usage;
}
