#include <filesystem>
#include <random>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "kcca/kcca.hpp"
#include "oracles.hpp"

using namespace kcca;

namespace {

PairedDataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in, "mem");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const FormatError& e) {
        return e.what();
    }
    return "<no error>";
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("kcca_io_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Csv, ParsesHeaderAndLabels) {
    const PairedDataset d = parse("x1,x2,y1,label\n1,2,3,0\n4,5,6,1\n");
    EXPECT_EQ(d.x.rows(), 2);
    EXPECT_EQ(d.x.cols(), 2);
    EXPECT_EQ(d.y.cols(), 1);
    EXPECT_EQ(d.x(1, 1), 5.0);
    EXPECT_EQ(d.y(1, 0), 6.0);
    EXPECT_EQ(*d.labels, (std::vector<int>{0, 1}));
}

TEST(Csv, RoundTripIsExact) {
    std::mt19937_64 gen(99);
    PairedDataset d;
    d.x = kcca::testing::random_matrix(gen, 25, 3, -1e3, 1e3);
    d.y = kcca::testing::random_matrix(gen, 25, 2, -1e-6, 1e-6);
    d.y(0, 0) = 0.1;
    d.y(1, 1) = -0.0;
    d.x(2, 0) = 5e-324;
    std::ostringstream out;
    write_dataset(out, d);
    const PairedDataset back = parse(out.str());
    EXPECT_EQ(back.x, d.x);
    EXPECT_EQ(back.y, d.y);
    EXPECT_FALSE(back.labels.has_value());
}

TEST(Csv, FormatErrors) {
    EXPECT_NE(error_of("").find("empty"), std::string::npos);
    EXPECT_NE(error_of("x1,y1\n").find("no data rows"), std::string::npos);
    EXPECT_NE(error_of("x1,z1\n1,2\n").find("'z1'"), std::string::npos);
    EXPECT_NE(error_of("x2,y1\n1,2\n").find("header"), std::string::npos);
    EXPECT_NE(error_of("x1,y1\n1,2,3\n").find("mem:2"), std::string::npos);
    EXPECT_NE(error_of("x1,y1\n1,abc\n").find("abc"), std::string::npos);
    EXPECT_NE(error_of("x1,y1,label\n1,2,1.5\n").find("label"), std::string::npos);
}

TEST(Csv, MissingFileIsIoError) {
    EXPECT_THROW(read_dataset("/nonexistent/dir/data.csv"), IoError);
    EXPECT_THROW(write_dataset("/nonexistent/dir/data.csv", parse("x1,y1\n1,2\n")), IoError);
}

TEST(ModelJson, KccaRoundTripProjectsIdentically) {
    const Sim1Data sim = gen_sim1(SimSpec::sim1_default(4));
    KccaConfig c;
    c.kernel_x = c.kernel_y = KernelSpec::gaussian(1.0);
    const KccaModel m = fit_kcca(sim.train, c);
    const auto path = temp_path("kcca.json");
    save_model(path.string(), m);
    const AnyModel back = load_model(path.string());
    std::filesystem::remove(path);
    ASSERT_TRUE(std::holds_alternative<KccaModel>(back));
    const auto& k = std::get<KccaModel>(back);
    EXPECT_EQ(k.config.kernel_x, m.config.kernel_x);
    EXPECT_EQ(k.alphas, m.alphas);
    EXPECT_EQ(k.lambdas, m.lambdas);
    EXPECT_EQ(project(k, Side::x, sim.test.x), project(m, Side::x, sim.test.x));
    EXPECT_EQ(project(k, Side::y, sim.test.y), project(m, Side::y, sim.test.y));
}

TEST(ModelJson, LinearRoundTripProjectsIdentically) {
    const Sim1Data sim = gen_sim1(SimSpec::sim1_default(4));
    const LinearCcaModel m = fit_linear_cca(sim.train, 2, 1e-3);
    const AnyModel back = model_from_json(Json::parse(model_to_json(m).dump()));
    ASSERT_TRUE(std::holds_alternative<LinearCcaModel>(back));
    const auto& l = std::get<LinearCcaModel>(back);
    EXPECT_EQ(l.ridge, m.ridge);
    EXPECT_EQ(project_linear(l, Side::x, sim.test.x), project_linear(m, Side::x, sim.test.x));
    EXPECT_EQ(project_linear(l, Side::y, sim.test.y), project_linear(m, Side::y, sim.test.y));
}

TEST(ModelJson, RejectsBadDocuments) {
    EXPECT_THROW(model_from_json(Json{{"schema", "other/9"}, {"method", "kcca"}}), FormatError);
    EXPECT_THROW(model_from_json(Json{{"schema", model_schema}, {"method", "pca"}}), FormatError);
    EXPECT_THROW(model_from_json(Json{{"schema", model_schema}, {"method", "linear"}}), FormatError);
    Json bad = model_to_json(fit_linear_cca(gen_sim1(SimSpec::sim1_default(1)).train, 2));
    bad["A"][0].push_back(1.0);
    EXPECT_THROW(model_from_json(bad), FormatError);
    EXPECT_THROW(load_model("/nonexistent/model.json"), IoError);
}

TEST(Report, SchemaFields) {
    const Sim2Data sim = gen_sim2(SimSpec::sim2_default(2));
    KccaConfig c;
    c.kernel_x = c.kernel_y = KernelSpec::gaussian(0.1);
    c.eta1 = c.eta2 = 0.1;
    const EvalReport r = evaluate(AnyModel{fit_kcca(sim.train, c)}, sim.train, sim.test);
    const Json j = report_to_json(r);
    EXPECT_EQ(j.at("schema"), report_schema);
    EXPECT_EQ(j.at("method"), "kcca");
    EXPECT_EQ(j.at("config").at("kernel_x"), "gaussian:sigma=0.1");
    EXPECT_EQ(j.at("lambdas").size(), 2u);
    EXPECT_EQ(j.at("train").at("n"), 10);
    EXPECT_EQ(j.at("test").at("n"), 100);
    EXPECT_EQ(j.at("test").at("table").size(), 2u);
    EXPECT_EQ(j.at("test").at("pearson").at(1).get<double>(), r.test.values(1, 1));
}

TEST(Report, BracketTable) {
    CorrelationTable train{Matrix::Identity(2, 2), Split::train}, test{Matrix::Identity(2, 2), Split::test};
    train.values(0, 0) = 0.981;
    test.values(0, 0) = 0.949;
    test.values(1, 0) = -0.004;
    const std::string t = render_bracket_table(train, test);
    EXPECT_NE(t.find("0.98 (0.95)"), std::string::npos) << t;
    EXPECT_NE(t.find("0.00 (-0.00)"), std::string::npos) << t;
    EXPECT_NE(t.find("u2"), std::string::npos);
}
