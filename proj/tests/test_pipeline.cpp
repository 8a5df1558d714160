#include "ceda/pipeline.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace ceda;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ceda_pipeline_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CEDA_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Csv, ToyInput) {
    std::istringstream in("Y,V1\n0.5,0\n-1.25,1\n3,1\n");
    const auto ds = read_csv(in);
    EXPECT_EQ(ds.width(), 2u);
    EXPECT_EQ(ds.rows(), 3u);
    EXPECT_EQ(ds.column("Y").reals()[1], -1.25);
}

TEST(Csv, UnparsableCellNamesRowAndColumn) {
    std::string text = "Y,X1,X2\n";
    for (int r = 1; r <= 20; ++r) text += "1," + std::to_string(r) + "," + (r == 17 ? "abc" : "2.5") + "\n";
    std::istringstream in(text);
    try {
        read_csv(in);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("row 17"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column \"X2\""), std::string::npos) << msg;
    }
}

TEST(Csv, RaggedAndMissingColumns) {
    std::istringstream ragged("A,B\n1,2\n3\n");
    EXPECT_THROW(read_csv(ragged), DataError);
    std::istringstream ok("A,B\n1,2\n");
    const auto ds = read_csv(ok);
    EXPECT_THROW(ds.column("C"), ConfigError);
}

TEST(Csv, QuotedTextAndRoundTrip) {
    std::istringstream in("name,v\n\"a,b\",1.5\n\"say \"\"hi\"\"\",2\n");
    const auto ds = read_csv(in, {"name"});
    EXPECT_EQ(ds.column("name").texts()[0], "a,b");
    EXPECT_EQ(ds.column("name").texts()[1], "say \"hi\"");
    std::ostringstream out;
    write_csv(out, ds);
    std::istringstream back(out.str());
    const auto again = read_csv(back, {"name"});
    EXPECT_EQ(again.column("name").texts(), ds.column("name").texts());
    EXPECT_EQ(again.column("v").reals(), ds.column("v").reals());
}

TEST(Config, FlatSchemaAndErrors) {
    const auto j = nlohmann::json::parse(R"({
        "response": "Y", "covariates": ["X1", "X2"], "max_order": 2, "seed": 7,
        "categorize": {"default": {"method": "quantile", "k": 20}, "X2": {"method": "kmeans", "k": 5}},
        "r_int": 4.0, "cell_floor": 2.0})");
    const auto c = config_from_json(j);
    EXPECT_EQ(c.response, std::vector<std::string>{"Y"});
    EXPECT_EQ(c.default_directive.k, 20u);
    EXPECT_EQ(c.directive_for("X2").method, Method::kmeans);
    EXPECT_EQ(c.protocol.r_int, 4.0);
    EXPECT_EQ(c.protocol.cell_floor, 2.0);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"max_ordr": 2})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"max_order": "two"})")), ConfigError);

    RunConfig bad = c;
    bad.covariates.push_back("Y");
    EXPECT_THROW(validate_config(bad), ConfigError);
    bad = c;
    bad.protocol.max_order = 0;
    EXPECT_THROW(validate_config(bad), ConfigError);
}

TEST(Config, DigestTracksContent) {
    RunConfig a;
    a.response = {"Y"};
    RunConfig b = a;
    EXPECT_EQ(config_digest(a), config_digest(b));
    b.protocol.seed = 1;
    EXPECT_NE(config_digest(a), config_digest(b));
    b = a;
    b.protocol.threads = 8;  // scheduling does not change results
    EXPECT_EQ(config_digest(a), config_digest(b));
}

TEST(Pipeline, SimulateIngestMeasureMatchesInMemory) {
    const GeneratorSpec spec{ExampleId::ex1, 20000, {}, 3};
    const auto path = scratch("ex1.csv");
    write_file(path, run_simulate(spec));

    RunConfig cfg;
    cfg.input = path.string();
    cfg.response = {"Y"};
    cfg.directives["V1"] = {Method::categorical, 0};
    const auto from_file = ingest_csv(cfg);

    const auto mem = sample(spec);
    const auto& y = mem.column("Y").reals();
    const auto ys = apply_bins(y, quantile_bins(y, 10));
    std::vector<Label> v;
    for (double x : mem.column("V1").reals()) v.push_back(static_cast<Label>(x));
    const auto direct = measure(crosstab(CategoricalSeries(v, 2), ys));
    const auto via = measure(crosstab(from_file.data.covariates[0], from_file.data.response));
    EXPECT_EQ(direct.h_y, via.h_y);
    EXPECT_EQ(direct.h_y_given_a, via.h_y_given_a);
    EXPECT_EQ(direct.mutual_info, via.mutual_info);

    const auto tsv = run_measure(cfg, from_file.data);
    EXPECT_EQ(tsv.rfind("# config_digest=", 0), 0u);
    EXPECT_NE(tsv.find("(V1)\t2\t12\t20000\t"), std::string::npos) << tsv;
}

TEST(Pipeline, BinsReplayReproducesLabels) {
    const auto path = scratch("ex4_bins.csv");
    write_file(path, run_simulate({ExampleId::ex4, 2000, {}, 1}));
    RunConfig cfg;
    cfg.input = path.string();
    cfg.response = {"Y"};
    cfg.directives["X2"] = {Method::kmeans, 6};
    const auto ds = read_input(cfg);
    cfg = resolve_columns(cfg, ds);
    const auto schemes = nlohmann::json::parse(run_bins(cfg, ds));
    EXPECT_EQ(schemes["schemes"]["X2"]["method"], "kmeans");
    std::istringstream replay(run_bins(cfg, ds, &schemes));
    const auto labels = read_csv(replay);
    const auto ing = categorize_dataset(ds, cfg);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        ASSERT_EQ(labels.column("X1").reals()[i], ing.data.covariates[0][i]);
        ASSERT_EQ(labels.column("X2").reals()[i], ing.data.covariates[1][i]);
        ASSERT_EQ(labels.column("Y").reals()[i], ing.data.response[i]);
    }
}

TEST(Pipeline, MultiColumnResponseFusion) {
    const auto path = scratch("ex2.csv");
    write_file(path, run_simulate({ExampleId::ex2, 3000, {}, 1}));
    RunConfig cfg;
    cfg.input = path.string();
    cfg.response = {"Y1", "Y2", "Y3", "Y4"};
    cfg.covariates = {"V1"};
    cfg.directives["V1"] = {Method::categorical, 0};
    cfg.response_fusion = "kmeans";
    cfg.response_k = 22;
    const auto ing = ingest_csv(cfg);
    EXPECT_EQ(ing.data.response.cardinality(), 22u);
    EXPECT_EQ(ing.data.covariates[0].cardinality(), 2u);
}

TEST(Cli, SelectReportAndExitCodes) {
    const auto csv = scratch("ex4_cli.csv");
    ASSERT_EQ(run_cli("simulate --example ex4 --n 10000 --seed 1 --out " + csv.string()), 0);
    const auto ledger_a = scratch("ledger_a.tsv"), ledger_b = scratch("ledger_b.tsv");
    const auto report_a = scratch("report_a.json"), report_b = scratch("report_b.json");
    const std::string common = "select --input " + csv.string() +
                               " --response Y --max-order 2 --replicates 200 --seed 1 --bins 10";
    ASSERT_EQ(run_cli(common + " --out " + ledger_a.string() + " --report " + report_a.string()), 0);
    ASSERT_EQ(run_cli(common + " --threads 2 --out " + ledger_b.string() + " --report " + report_b.string()), 0);
    EXPECT_EQ(read_file(ledger_a), read_file(ledger_b));
    EXPECT_EQ(read_file(report_a), read_file(report_b));

    const auto report = nlohmann::json::parse(read_file(report_a));
    EXPECT_TRUE(report.contains("provenance"));
    std::vector<nlohmann::json> confirmed;
    for (const auto& c : report["confirmed"]) confirmed.push_back(c["subset"]);
    ASSERT_EQ(confirmed.size(), 2u);
    EXPECT_EQ(confirmed[0], nlohmann::json({"X1"}));
    EXPECT_EQ(confirmed[1], nlohmann::json({"X2", "X3"}));
    const auto ledger = read_file(ledger_a);
    EXPECT_NE(ledger.find("order\tsubset\tce\tce_drop\tsce_drop\tsce_star_drop\trows\tavg_cell\tc1_status"),
              std::string::npos);

    EXPECT_EQ(run_cli(common + " --max-order 0"), 3);
    EXPECT_EQ(run_cli("select --input " + csv.string() + " --response Nope"), 3);
    const auto broken = scratch("broken.csv");
    write_file(broken, "Y,X1\n1,2\n1,x\n");
    EXPECT_EQ(run_cli("measure --input " + broken.string() + " --response Y"), 2);
    EXPECT_EQ(run_cli("measure --input " + scratch("missing.csv").string() + " --response Y"), 2);
}

TEST(Cli, MeasureMatchesLibrary) {
    const auto csv = scratch("ex1_cli.csv");
    ASSERT_EQ(run_cli("simulate --example ex1 --n 20000 --seed 2 --out " + csv.string()), 0);
    const auto out = scratch("measure.json");
    const auto cfg_path = scratch("measure_config.json");
    write_file(cfg_path, R"({"response": "Y", "categorize": {"V1": {"method": "categorical"}}})");
    ASSERT_EQ(run_cli("measure --config " + cfg_path.string() + " --input " + csv.string() +
                      " --format json --out " + out.string()),
              0);
    const auto j = nlohmann::json::parse(read_file(out));
    const double mi = j["measures"][0]["mi"].get<double>();
    EXPECT_GT(mi, 0.09);
    EXPECT_LT(mi, 0.13);
}
