// ceda: categorical exploratory data analysis from the command line.
//
//   ceda simulate --example ex4 --n 10000 --seed 1 --out ex4.csv
//   ceda measure  --input ex4.csv --response Y --covariates X1,X2
//   ceda select   --input ex4.csv --response Y --max-order 2 --report report.json
//
// Exit status: 0 success, 2 data error, 3 configuration error.

#include "ceda/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

struct Options {
    std::string config_path;
    std::string input;
    std::vector<std::string> response;
    std::vector<std::string> covariates;
    std::optional<std::size_t> max_order;
    std::optional<std::size_t> replicates;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::size_t> bins;
    std::string out;
    std::optional<std::string> format;
    std::string report;
    std::string scheme;
    std::vector<std::string> subsets;
    std::vector<std::size_t> y_ladder;
    std::vector<std::size_t> x_ladder;
    // simulate
    std::string example = "ex1";
    std::size_t n = 1000;
    ceda::GeneratorParams params;
};

ceda::RunConfig load_config(const Options& o) {
    ceda::RunConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ceda::ConfigError("cannot open config \"" + o.config_path + "\"");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ceda::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = ceda::config_from_json(j);
    }
    if (!o.input.empty()) cfg.input = o.input;
    if (!o.response.empty()) cfg.response = o.response;
    if (!o.covariates.empty()) cfg.covariates = o.covariates;
    if (o.max_order) cfg.protocol.max_order = *o.max_order;
    if (o.replicates) cfg.protocol.replicates = *o.replicates;
    if (o.seed) cfg.protocol.seed = *o.seed;
    if (o.threads) cfg.protocol.threads = *o.threads;
    if (o.bins) cfg.default_directive.k = *o.bins;
    if (o.format) cfg.format = *o.format;
    if (!o.y_ladder.empty()) cfg.y_ladder = o.y_ladder;
    if (!o.x_ladder.empty()) cfg.x_ladder = o.x_ladder;
    for (const auto& s : o.subsets) {
        std::vector<std::string> names;
        std::string cur;
        for (char ch : s + "+") {
            if (ch == '+') {
                if (!cur.empty()) names.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        cfg.subsets.push_back(names);
    }
    ceda::validate_config(cfg);
    if (cfg.input.empty()) throw ceda::ConfigError("no input given (--input or config \"input\")");
    if (cfg.response.empty()) throw ceda::ConfigError("no response given (--response or config \"response\")");
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ceda::ConfigError("cannot write \"" + path + "\"");
    out << text;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration");
    cmd->add_option("--input", o.input, "input CSV with a header row");
    cmd->add_option("--response", o.response, "response column(s)")->delimiter(',');
    cmd->add_option("--covariates", o.covariates, "covariate columns (default: all others)")->delimiter(',');
    cmd->add_option("--replicates", o.replicates, "mimicry replicates B");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--threads", o.threads, "worker threads");
    cmd->add_option("--bins", o.bins, "default interior bin count K (1+K+1 scheme)");
    cmd->add_option("--out", o.out, "output file (default: stdout)");
    cmd->add_option("--format", o.format, "tsv or json");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Categorical exploratory data analysis"};
    app.require_subcommand(1);
    Options o;

    auto* simulate = app.add_subcommand("simulate", "write a simulated example dataset as CSV");
    simulate->add_option("--example", o.example, "ex1 ex2 ex2star ex3_rho ex3_halfsine ex3_fullsine ex4 ex5 ex6");
    simulate->add_option("--n", o.n, "sample size");
    simulate->add_option("--seed", o.seed, "seed");
    simulate->add_option("--rho", o.params.rho, "correlation for ex3_rho");
    simulate->add_option("--rho0", o.params.rho0, "ex2 correlation when V1 = 0");
    simulate->add_option("--rho1", o.params.rho1, "ex2 correlation when V1 = 1");
    simulate->add_option("--dim", o.params.dim, "ex2 response dimension");
    simulate->add_option("--setting", o.params.mixture_setting, "ex2star mixture setting (1 or 2)");
    simulate->add_option("--noise", o.params.noise, "noise scale");
    simulate->add_option("--out", o.out, "output file (default: stdout)");

    auto* bins = app.add_subcommand("bins", "emit categorization schemes, or replay one with --scheme");
    add_common(bins, o);
    bins->add_option("--scheme", o.scheme, "scheme JSON to replay");

    auto* measure = app.add_subcommand("measure", "entropy report per subset");
    add_common(measure, o);
    measure->add_option("--subsets", o.subsets, "subsets as X1+X2, comma separated")->delimiter(',');

    auto* null = app.add_subcommand("null", "mimicry band and C1 verdict per subset");
    add_common(null, o);
    null->add_option("--subsets", o.subsets, "subsets as X1+X2, comma separated")->delimiter(',');

    auto* grid = app.add_subcommand("grid", "mutual information over a grid of K-means ladders");
    add_common(grid, o);
    grid->add_option("--y-ladder", o.y_ladder, "response cluster counts")->delimiter(',');
    grid->add_option("--x-ladder", o.x_ladder, "covariate cluster counts")->delimiter(',');

    auto* select = app.add_subcommand("select", "subset ledger and major-factor report");
    add_common(select, o);
    select->add_option("--max-order", o.max_order, "largest subset size");
    select->add_option("--report", o.report, "write the report JSON here (default: after the ledger)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (simulate->parsed()) {
            ceda::GeneratorSpec spec;
            spec.example = ceda::parse_example(o.example);
            spec.n = o.n;
            spec.params = o.params;
            spec.seed = o.seed.value_or(0);
            emit(o.out, ceda::run_simulate(spec));
            return 0;
        }
        auto cfg = load_config(o);
        const auto ds = ceda::read_input(cfg);
        cfg = ceda::resolve_columns(cfg, ds);
        if (bins->parsed()) {
            if (o.scheme.empty()) {
                emit(o.out, ceda::run_bins(cfg, ds));
            } else {
                std::ifstream in(o.scheme);
                if (!in) throw ceda::ConfigError("cannot open scheme \"" + o.scheme + "\"");
                nlohmann::json j;
                try {
                    in >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw ceda::ConfigError(std::string("scheme is not valid JSON: ") + e.what());
                }
                emit(o.out, ceda::run_bins(cfg, ds, &j));
            }
        } else if (grid->parsed()) {
            emit(o.out, ceda::run_grid(cfg, ds));
        } else {
            const auto ing = ceda::categorize_dataset(ds, cfg);
            if (measure->parsed()) {
                emit(o.out, ceda::run_measure(cfg, ing.data));
            } else if (null->parsed()) {
                emit(o.out, ceda::run_null(cfg, ing.data));
            } else {
                std::cerr << "ceda: building ledger over " << ing.data.covariates.size() << " covariates\n";
                const auto res = ceda::run_select(cfg, ing.data);
                if (o.report.empty()) {
                    emit(o.out, res.ledger + res.report);
                } else {
                    emit(o.out, res.ledger);
                    emit(o.report, res.report);
                }
            }
        }
    } catch (const ceda::DataError& e) {
        std::cerr << "ceda: data error: " << e.what() << '\n';
        return 2;
    } catch (const ceda::ConfigError& e) {
        std::cerr << "ceda: config error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
