#pragma once

// Run configuration, CSV ingestion and the subcommand workflows behind the
// ceda command-line tool. Each run_* function returns the report text so the
// tool stays a thin argument parser.

#include "ceda/categorize.hpp"
#include "ceda/dataset.hpp"
#include "ceda/error.hpp"
#include "ceda/genlab.hpp"
#include "ceda/nullsim.hpp"
#include "ceda/protocol.hpp"
#include "ceda/tabulate.hpp"

#include <json.hpp>

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ceda {

enum class Method { quantile, kmeans, categorical };

inline std::string to_string(Method m) {
    switch (m) {
    case Method::quantile: return "quantile";
    case Method::kmeans: return "kmeans";
    case Method::categorical: return "categorical";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "quantile") return Method::quantile;
    if (s == "kmeans") return Method::kmeans;
    if (s == "categorical") return Method::categorical;
    throw ConfigError("unknown categorization method \"" + s + "\"");
}

struct Directive {
    Method method = Method::quantile;
    std::size_t k = 10;  // interior bins for quantile, clusters for kmeans
};

struct RunConfig {
    std::string input;
    std::vector<std::string> response;
    std::vector<std::string> covariates;
    Directive default_directive;
    std::map<std::string, Directive> directives;
    std::string response_fusion = "product";  // or "kmeans"
    std::size_t response_k = 0;               // clusters for kmeans fusion; 0 = largest response cardinality
    std::vector<std::string> noise_features;
    std::vector<std::vector<std::string>> subsets;  // measure / null targets; empty = every covariate alone
    std::vector<std::size_t> y_ladder{12, 22, 32, 102};
    std::vector<std::size_t> x_ladder{12, 22, 32, 102};
    std::string format = "tsv";
    ProtocolConfig protocol;

    Directive directive_for(const std::string& column) const {
        const auto it = directives.find(column);
        return it == directives.end() ? default_directive : it->second;
    }
};

inline nlohmann::json to_json(const Directive& d) { return {{"method", to_string(d.method)}, {"k", d.k}}; }

inline Directive directive_from_json(const nlohmann::json& j) {
    Directive d;
    if (j.contains("method")) d.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("k")) d.k = j.at("k").get<std::size_t>();
    return d;
}

/// Canonical JSON form of the configuration; keys are sorted, so equal
/// configurations serialize identically.
inline nlohmann::json config_json(const RunConfig& c) {
    nlohmann::json dirs = nlohmann::json::object();
    for (const auto& [name, d] : c.directives) dirs[name] = to_json(d);
    const auto& p = c.protocol;
    return {{"input", c.input},
            {"response", c.response},
            {"covariates", c.covariates},
            {"categorize", {{"default", to_json(c.default_directive)}, {"columns", dirs}}},
            {"response_fusion", c.response_fusion},
            {"response_k", c.response_k},
            {"noise_features", c.noise_features},
            {"subsets", c.subsets},
            {"y_ladder", c.y_ladder},
            {"x_ladder", c.x_ladder},
            {"format", c.format},
            {"max_order", p.max_order},
            {"replicates", p.replicates},
            {"reference_replicates", p.reference_replicates},
            {"pad_replicates", p.pad_replicates},
            {"seed", p.seed},
            {"cell_floor", p.cell_floor},
            {"cell_budget", p.cell_budget},
            {"r_int", p.r_int},
            {"eco_low", p.eco_low},
            {"interaction_min_sd", p.interaction_min_sd},
            {"min_relative_drop", p.min_relative_drop},
            {"fuse_clusters", p.fuse_clusters}};
}

/// Reads the flat JSON config schema; unknown keys are a ConfigError so typos
/// do not pass silently. `threads` is accepted but left out of the digest.
inline RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    auto& p = c.protocol;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "input") c.input = v.get<std::string>();
            else if (key == "response")
                c.response = v.is_string() ? std::vector<std::string>{v.get<std::string>()}
                                           : v.get<std::vector<std::string>>();
            else if (key == "covariates") c.covariates = v.get<std::vector<std::string>>();
            else if (key == "categorize") {
                for (const auto& [name, d] : v.items()) {
                    if (name == "default") c.default_directive = directive_from_json(d);
                    else if (name == "columns")
                        for (const auto& [col, dd] : d.items()) c.directives[col] = directive_from_json(dd);
                    else c.directives[name] = directive_from_json(d);
                }
            }
            else if (key == "response_fusion") c.response_fusion = v.get<std::string>();
            else if (key == "response_k") c.response_k = v.get<std::size_t>();
            else if (key == "noise_features") c.noise_features = v.get<std::vector<std::string>>();
            else if (key == "subsets") c.subsets = v.get<std::vector<std::vector<std::string>>>();
            else if (key == "y_ladder") c.y_ladder = v.get<std::vector<std::size_t>>();
            else if (key == "x_ladder") c.x_ladder = v.get<std::vector<std::size_t>>();
            else if (key == "format") c.format = v.get<std::string>();
            else if (key == "max_order") p.max_order = v.get<std::size_t>();
            else if (key == "replicates") p.replicates = v.get<std::size_t>();
            else if (key == "reference_replicates") p.reference_replicates = v.get<std::size_t>();
            else if (key == "pad_replicates") p.pad_replicates = v.get<std::size_t>();
            else if (key == "seed") p.seed = v.get<std::uint64_t>();
            else if (key == "threads") p.threads = v.get<unsigned>();
            else if (key == "cell_floor") p.cell_floor = v.get<double>();
            else if (key == "cell_budget") p.cell_budget = v.get<double>();
            else if (key == "r_int") p.r_int = v.get<double>();
            else if (key == "eco_low") p.eco_low = v.get<double>();
            else if (key == "interaction_min_sd") p.interaction_min_sd = v.get<double>();
            else if (key == "min_relative_drop") p.min_relative_drop = v.get<double>();
            else if (key == "fuse_clusters") p.fuse_clusters = v.get<std::size_t>();
            else throw ConfigError("unknown config key \"" + key + "\"");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return c;
}

/// FNV-1a 64 of the canonical config JSON.
inline std::string config_digest(const RunConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_json(c).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline nlohmann::json provenance(const RunConfig& c) {
    return {{"config_digest", config_digest(c)}, {"seed", c.protocol.seed}};
}

inline std::string provenance_line(const RunConfig& c) {
    return "# config_digest=" + config_digest(c) + " seed=" + std::to_string(c.protocol.seed) + "\n";
}

/// Checks the configuration on its own and against the input header.
inline void validate_config(const RunConfig& c, const Dataset* data = nullptr) {
    const auto& p = c.protocol;
    detail::require_config(p.max_order >= 1, "max_order must be at least 1");
    detail::require_config(c.format == "tsv" || c.format == "json", "format must be tsv or json");
    detail::require_config(c.response_fusion == "product" || c.response_fusion == "kmeans",
                           "response_fusion must be product or kmeans");
    detail::require_config(p.cell_floor >= 0.0, "cell_floor must be non-negative");
    detail::require_config(p.r_int > 0.0 && p.eco_low >= 0.0, "classification thresholds must be positive");
    std::set<std::string> resp(c.response.begin(), c.response.end());
    for (const auto& x : c.covariates)
        detail::require_config(!resp.count(x), "column \"" + x + "\" is both response and covariate");
    for (const auto& [name, d] : c.directives) {
        detail::require_config(d.k >= 1 || d.method == Method::categorical, "column \"" + name + "\" needs k >= 1");
    }
    if (!data) return;
    detail::require_config(!c.response.empty(), "no response column given");
    for (const auto& name : c.response) data->column(name);
    for (const auto& name : c.covariates) data->column(name);
    for (const auto& name : c.noise_features)
        detail::require_config(std::find(c.covariates.begin(), c.covariates.end(), name) != c.covariates.end(),
                               "noise feature \"" + name + "\" is not a covariate");
}

/// Fills in default covariates (every non-response column) and validates.
inline RunConfig resolve_columns(RunConfig c, const Dataset& data) {
    if (c.covariates.empty())
        for (const auto& name : data.names())
            if (std::find(c.response.begin(), c.response.end(), name) == c.response.end())
                c.covariates.push_back(name);
    validate_config(c, &data);
    return c;
}

namespace detail {

enum : std::uint64_t { kTagCategorize = 6, kTagResponse = 7 };

inline std::vector<std::string> cell_texts(const Column& col) {
    if (!col.numeric()) return col.texts();
    std::vector<std::string> out;
    for (double v : col.reals()) out.push_back(format_real(v));
    return out;
}

/// Categorical passthrough: one category per distinct value, numeric values
/// in numeric order, text in byte order.
inline CategoricalSeries categorical_levels(const Column& col, std::vector<std::string>& levels) {
    std::vector<Label> labels(col.size());
    if (col.numeric()) {
        std::vector<double> distinct(col.reals());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        levels.clear();
        for (double v : distinct) levels.push_back(format_real(v));
        for (std::size_t i = 0; i < col.size(); ++i)
            labels[i] = static_cast<Label>(
                std::lower_bound(distinct.begin(), distinct.end(), col.reals()[i]) - distinct.begin());
    } else {
        std::vector<std::string> distinct(col.texts());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        levels = distinct;
        for (std::size_t i = 0; i < col.size(); ++i)
            labels[i] = static_cast<Label>(
                std::lower_bound(distinct.begin(), distinct.end(), col.texts()[i]) - distinct.begin());
    }
    return CategoricalSeries(std::move(labels), levels.size(), levels);
}

inline const std::vector<double>& numeric_values(const Column& col) {
    if (!col.numeric()) throw DataError("column \"" + col.name + "\" is not numeric");
    return col.reals();
}

} // namespace detail

/// Categorizes one column by its directive; the fitted scheme goes to `scheme`.
inline CategoricalSeries categorize_column(const Column& col, const Directive& d, std::uint64_t seed,
                                           nlohmann::json& scheme) {
    switch (d.method) {
    case Method::quantile: {
        const auto& v = detail::numeric_values(col);
        const auto s = quantile_bins(v, d.k);
        scheme = s;
        return apply_bins(v, s);
    }
    case Method::kmeans: {
        const auto& v = detail::numeric_values(col);
        KMeansOptions opt;
        opt.seed = seed;
        opt.order_by_centroid = true;
        const auto m = kmeans_fit(PointMatrix(v.size(), 1, v), d.k, opt);
        scheme = m;
        return m.assignments;
    }
    case Method::categorical: {
        std::vector<std::string> levels;
        auto s = detail::categorical_levels(col, levels);
        scheme = {{"method", "categorical"}, {"levels", levels}};
        return s;
    }
    }
    throw ConfigError("unknown categorization method");
}

/// Re-applies a scheme emitted by categorize_column to new values.
inline CategoricalSeries replay_scheme(const Column& col, const nlohmann::json& scheme) {
    try {
        const auto method = parse_method(scheme.at("method").get<std::string>());
        if (method == Method::quantile) return apply_bins(detail::numeric_values(col), scheme.get<BinningScheme>());
        if (method == Method::kmeans) {
            const auto& v = detail::numeric_values(col);
            return kmeans_assign(kmeans_from_json(scheme), PointMatrix(v.size(), 1, v));
        }
        const auto levels = scheme.at("levels").get<std::vector<std::string>>();
        const auto texts = detail::cell_texts(col);
        std::vector<Label> labels(texts.size());
        for (std::size_t i = 0; i < texts.size(); ++i) {
            const auto it = std::find(levels.begin(), levels.end(), texts[i]);
            if (it == levels.end())
                throw DataError("unseen level \"" + texts[i] + "\" at row " + std::to_string(i + 1) + ", column \"" +
                                col.name + "\"");
            labels[i] = static_cast<Label>(it - levels.begin());
        }
        return CategoricalSeries(std::move(labels), levels.size(), levels);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed scheme: ") + e.what());
    }
}

struct Ingested {
    CategorizedData data;
    nlohmann::json schemes = nlohmann::json::object();  // column name -> fitted scheme
};

/// Categorizes response and covariates per the configuration. A multi-column
/// response is fused by the product of its categorized columns or by K-means
/// on the standardized raw columns.
inline Ingested categorize_dataset(const Dataset& ds, const RunConfig& cfg) {
    Ingested out;
    const auto cat_seed = derive_seed(cfg.protocol.seed, detail::kTagCategorize);
    const auto names = ds.names();
    auto column_seed = [&](const std::string& name) {
        return derive_seed(cat_seed, static_cast<std::uint64_t>(*ds.find(name)));
    };

    std::vector<CategoricalSeries> responses;
    for (const auto& name : cfg.response) {
        nlohmann::json scheme;
        responses.push_back(categorize_column(ds.column(name), cfg.directive_for(name), column_seed(name), scheme));
        out.schemes[name] = scheme;
    }
    if (responses.size() == 1) {
        out.data.response = std::move(responses.front());
    } else if (cfg.response_fusion == "product") {
        out.data.response = product_categories(std::span<const CategoricalSeries>(responses));
    } else {
        std::vector<std::vector<double>> cols;
        std::size_t k = cfg.response_k;
        for (std::size_t i = 0; i < cfg.response.size(); ++i) {
            cols.push_back(detail::numeric_values(ds.column(cfg.response[i])));
            if (cfg.response_k == 0) k = std::max(k, responses[i].cardinality());
        }
        KMeansOptions opt;
        opt.seed = derive_seed(cfg.protocol.seed, detail::kTagResponse);
        opt.standardize = true;
        opt.order_by_centroid = true;
        const auto m = kmeans_fit(PointMatrix::from_columns(cols), k, opt);
        out.schemes["response_fusion"] = m;
        out.data.response = m.assignments;
    }

    for (const auto& name : cfg.covariates) {
        const auto& col = ds.column(name);
        nlohmann::json scheme;
        out.data.covariates.push_back(categorize_column(col, cfg.directive_for(name), column_seed(name), scheme));
        out.schemes[name] = scheme;
        out.data.names.push_back(name);
        out.data.raw.push_back(col.numeric() ? col.reals() : std::vector<double>{});
    }
    return out;
}

/// Reads a CSV, keeping columns with a categorical directive as text.
inline Dataset read_input(const RunConfig& cfg) {
    std::ifstream in(cfg.input);
    if (!in) throw DataError("cannot open \"" + cfg.input + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::string header = text.substr(0, text.find('\n'));
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::vector<std::string> text_columns;
    for (const auto& name : detail::split_csv_line(header))
        if (cfg.directive_for(name).method == Method::categorical) text_columns.push_back(name);
    std::istringstream is(text);
    return read_csv(is, text_columns);
}

/// Reads and categorizes the configured input.
inline Ingested ingest_csv(RunConfig& cfg) {
    const auto ds = read_input(cfg);
    cfg = resolve_columns(cfg, ds);
    return categorize_dataset(ds, cfg);
}

namespace detail {

inline std::vector<Subset> resolve_subsets(const RunConfig& cfg, const CategorizedData& d) {
    std::vector<Subset> out;
    if (cfg.subsets.empty()) {
        for (std::size_t j = 0; j < d.covariates.size(); ++j) out.push_back({j});
        return out;
    }
    for (const auto& names : cfg.subsets) {
        require_config(!names.empty(), "empty subset");
        Subset s;
        for (const auto& n : names) {
            const auto it = std::find(d.names.begin(), d.names.end(), n);
            require_config(it != d.names.end(), "subset names unknown covariate \"" + n + "\"");
            s.push_back(static_cast<std::size_t>(it - d.names.begin()));
        }
        std::sort(s.begin(), s.end());
        require_config(std::adjacent_find(s.begin(), s.end()) == s.end(), "subset repeats a covariate");
        out.push_back(std::move(s));
    }
    return out;
}

inline std::string fmt(double x) { return format_fixed(x); }

inline nlohmann::json with_provenance(const RunConfig& cfg, nlohmann::json body) {
    body["provenance"] = provenance(cfg);
    return body;
}

} // namespace detail

/// One EntropyReport per requested subset (default: each covariate alone).
inline std::string run_measure(const RunConfig& cfg, const CategorizedData& d) {
    const auto subsets = detail::resolve_subsets(cfg, d);
    if (cfg.format == "json") {
        auto rows = nlohmann::json::array();
        for (const auto& s : subsets) {
            nlohmann::json j = measure(crosstab(detail::pick(d, s), d.response));
            j["subset"] = detail::names_of(s, d.names);
            rows.push_back(std::move(j));
        }
        return detail::with_provenance(cfg, {{"measures", rows}}).dump(2) + "\n";
    }
    std::string out = provenance_line(cfg) + "subset\trows\tcols\ttotal\th_y\th_y_given_a\tmi\n";
    for (const auto& s : subsets) {
        const auto r = measure(crosstab(detail::pick(d, s), d.response));
        out += subset_label(s, d.names) + '\t' + std::to_string(r.rows) + '\t' + std::to_string(r.cols) + '\t' +
               std::to_string(r.total) + '\t' + detail::fmt(r.h_y) + '\t' + detail::fmt(r.h_y_given_a) + '\t' +
               detail::fmt(r.mutual_info) + '\n';
    }
    return out;
}

/// Mimicry band of I[Y;A] and the C1 verdict per requested subset.
inline std::string run_null(const RunConfig& cfg, const CategorizedData& d) {
    const auto subsets = detail::resolve_subsets(cfg, d);
    NullOptions opt{cfg.protocol.replicates, cfg.protocol.seed, cfg.protocol.threads};
    std::vector<C1Verdict> verdicts;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const auto table = crosstab(detail::pick(d, subsets[i]), d.response);
        NullOptions o = opt;
        o.seed = derive_seed(opt.seed, i);
        verdicts.push_back(c1_test(mutual_information(table), null_band(table, Statistic::mutual_information, o)));
    }
    if (cfg.format == "json") {
        auto rows = nlohmann::json::array();
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            nlohmann::json j = verdicts[i];
            j["subset"] = detail::names_of(subsets[i], d.names);
            rows.push_back(std::move(j));
        }
        return detail::with_provenance(cfg, {{"bands", rows}}).dump(2) + "\n";
    }
    std::string out = provenance_line(cfg) + "subset\tmi\tB\tmean\tsd\tq025\tq975\tc1_status\texcess_sd\n";
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const auto& v = verdicts[i];
        out += subset_label(subsets[i], d.names) + '\t' + detail::fmt(v.observed) + '\t' +
               std::to_string(v.band.replicates) + '\t' + detail::fmt(v.band.mean) + '\t' + detail::fmt(v.band.sd) +
               '\t' + detail::fmt(v.band.q025) + '\t' + detail::fmt(v.band.q975) + '\t' + to_string(v.status) + '\t' +
               detail::fmt(v.excess_sd) + '\n';
    }
    return out;
}

struct SelectOutput {
    std::string ledger;  // TSV or JSON per cfg.format
    std::string report;  // always JSON
};

/// Full subset ledger plus the major-factor report.
inline SelectOutput run_select(const RunConfig& cfg, const CategorizedData& d) {
    ProtocolConfig p = cfg.protocol;
    p.noise_features.clear();
    for (const auto& name : cfg.noise_features) {
        const auto it = std::find(d.names.begin(), d.names.end(), name);
        detail::require_config(it != d.names.end(), "noise feature \"" + name + "\" is not a covariate");
        p.noise_features.push_back(static_cast<std::size_t>(it - d.names.begin()));
    }
    const auto ledger = build_ledger(d, p);
    const auto report = select_major_factors(ledger, d, p);
    SelectOutput out;
    out.report = detail::with_provenance(cfg, report_json(report, d.names)).dump(2) + "\n";
    if (cfg.format == "json")
        out.ledger = detail::with_provenance(cfg, ledger_json(ledger)).dump(2) + "\n";
    else
        out.ledger = provenance_line(cfg) + ledger_tsv(ledger);
    return out;
}

/// mi_grid over the configured ladders. The response axis clusters all
/// response columns jointly; the covariate axis clusters the covariates
/// jointly unless every covariate has a categorical directive, in which case
/// their product categories are used unchanged at every ladder step.
inline std::string run_grid(const RunConfig& cfg, const Dataset& ds) {
    auto column_matrix = [&](const std::vector<std::string>& names) {
        std::vector<std::vector<double>> cols;
        for (const auto& n : names) cols.push_back(detail::numeric_values(ds.column(n)));
        return PointMatrix::from_columns(cols);
    };
    const auto grid_seed = derive_seed(cfg.protocol.seed, detail::kTagGrid);
    const bool standardize = cfg.response.size() > 1;
    const auto ys = kmeans_ladder(column_matrix(cfg.response), cfg.y_ladder, derive_seed(grid_seed, 0), standardize);

    bool fixed = true;
    for (const auto& n : cfg.covariates) fixed = fixed && cfg.directive_for(n).method == Method::categorical;
    std::vector<GridLevel> xs;
    if (fixed) {
        std::vector<CategoricalSeries> parts;
        for (const auto& n : cfg.covariates) {
            nlohmann::json scheme;
            parts.push_back(categorize_column(ds.column(n), cfg.directive_for(n), 0, scheme));
        }
        auto x = parts.size() == 1 ? parts.front() : product_categories(std::span<const CategoricalSeries>(parts));
        xs.push_back({x.cardinality(), std::move(x)});
    } else {
        xs = kmeans_ladder(column_matrix(cfg.covariates), cfg.x_ladder, derive_seed(grid_seed, 1),
                           cfg.covariates.size() > 1);
    }
    const auto grid = mi_grid(ys, xs, NullOptions{cfg.protocol.replicates, grid_seed, cfg.protocol.threads});

    if (cfg.format == "json") {
        auto cells = nlohmann::json::array();
        for (const auto& c : grid) {
            nlohmann::json j = c.verdict;
            j["k_y"] = c.k_y;
            j["k_x"] = c.k_x;
            j["table"] = c.report;
            cells.push_back(std::move(j));
        }
        return detail::with_provenance(cfg, {{"grid", cells}}).dump(2) + "\n";
    }
    std::string out = provenance_line(cfg) + "k_y\tk_x\tmi\tq025\tq975\tc1_status\texcess_sd\n";
    for (const auto& c : grid)
        out += std::to_string(c.k_y) + '\t' + std::to_string(c.k_x) + '\t' + detail::fmt(c.report.mutual_info) + '\t' +
               detail::fmt(c.verdict.band.q025) + '\t' + detail::fmt(c.verdict.band.q975) + '\t' +
               to_string(c.verdict.status) + '\t' + detail::fmt(c.verdict.excess_sd) + '\n';
    return out;
}

/// Fitted categorization schemes for every configured column, or, with a
/// replay scheme, the categorized labels as CSV.
inline std::string run_bins(const RunConfig& cfg, const Dataset& ds, const nlohmann::json* replay = nullptr) {
    if (!replay) {
        const auto ing = categorize_dataset(ds, cfg);
        return detail::with_provenance(cfg, {{"schemes", ing.schemes}}).dump(2) + "\n";
    }
    Dataset labels;
    const auto& schemes = replay->contains("schemes") ? replay->at("schemes") : *replay;
    for (const auto& [name, scheme] : schemes.items()) {
        if (!ds.find(name)) continue;
        const auto s = replay_scheme(ds.column(name), scheme);
        std::vector<double> v(s.labels().begin(), s.labels().end());
        labels.add(name, std::move(v));
    }
    detail::require_config(labels.width() > 0, "replay scheme matches no input column");
    std::ostringstream os;
    write_csv(os, labels);
    return os.str();
}

/// Simulated dataset as CSV.
inline std::string run_simulate(const GeneratorSpec& spec) {
    std::ostringstream os;
    write_csv(os, sample(spec));
    return os.str();
}

} // namespace ceda
