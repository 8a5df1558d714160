#pragma once

// Mimicry null distributions on contingency tables and the [C1:confirmable]
// decision.
//
// A mimic keeps every response-column total and redistributes each column
// over the rows as Multinomial(n_.c, P_A), P_A being the observed row-margin
// proportions. The mimic is independent of Y by construction. Replicate i of
// a band uses Rng::stream(seed, i); bands are identical for any thread count.

#include "ceda/error.hpp"
#include "ceda/numeric.hpp"
#include "ceda/parallel.hpp"
#include "ceda/rng.hpp"
#include "ceda/tabulate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ceda {

enum class Statistic { mutual_information, conditional_entropy };

inline std::string to_string(Statistic s) {
    return s == Statistic::mutual_information ? "mutual_information" : "conditional_entropy";
}

struct NullBand {
    std::string statistic;
    std::size_t replicates = 0;
    double mean = 0.0;
    double sd = 0.0;
    double q025 = 0.0;
    double q975 = 0.0;
    std::vector<double> samples;  // kept when replicates <= 10000
};

inline constexpr std::size_t kMaxRetainedSamples = 10000;

/// Summarizes replicate values into a percentile band.
inline NullBand summarize_band(std::string statistic, std::vector<double> values) {
    detail::require_config(values.size() >= 2, "a null band needs at least 2 replicates");
    NullBand band;
    band.statistic = std::move(statistic);
    band.replicates = values.size();
    band.mean = mean(values);
    band.sd = sample_sd(values);
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    band.q025 = quantile_sorted(sorted, 0.025);
    band.q975 = quantile_sorted(sorted, 0.975);
    if (values.size() <= kMaxRetainedSamples) band.samples = std::move(values);
    return band;
}

inline void to_json(nlohmann::json& j, const NullBand& b) {
    j = nlohmann::json{{"stat", b.statistic}, {"B", b.replicates}, {"mean", b.mean},
                       {"sd", b.sd},          {"q025", b.q025},    {"q975", b.q975}};
}

namespace detail {

/// Multinomial(n, probs) by sequential conditional binomials, into `out`.
inline void multinomial(std::uint64_t n, std::span<const double> probs, Rng& rng,
                        std::span<std::uint64_t> out, std::size_t stride = 1) {
    double remaining_p = 1.0;
    for (std::size_t r = 0; r < probs.size(); ++r) {
        std::uint64_t x = 0;
        if (n > 0) {
            if (r + 1 == probs.size() || remaining_p <= probs[r]) {
                x = n;
            } else if (probs[r] > 0.0) {
                x = rng.binomial(n, std::min(1.0, probs[r] / remaining_p));
            }
        }
        out[r * stride] = x;
        n -= x;
        remaining_p -= probs[r];
    }
}

inline std::vector<double> row_proportions(const ContingencyTable& t) {
    std::vector<double> p(t.rows());
    const double total = static_cast<double>(t.total());
    for (std::size_t r = 0; r < t.rows(); ++r) p[r] = static_cast<double>(t.row_sums()[r]) / total;
    return p;
}

/// Column-wise mimic counts (may contain all-zero rows).
inline std::vector<std::uint64_t> mimic_counts(const ContingencyTable& t, std::span<const double> row_p,
                                               Rng& rng) {
    std::vector<std::uint64_t> counts(t.rows() * t.cols(), 0);
    for (std::size_t c = 0; c < t.cols(); ++c) {
        const std::uint64_t n = t.col_sums()[c];
        if (n == 0) continue;
        multinomial(n, row_p, rng, std::span(counts).subspan(c), t.cols());
    }
    return counts;
}

inline double evaluate(Statistic s, std::span<const std::uint64_t> counts, std::size_t cols) {
    const double ce = conditional_entropy_raw(counts, cols);
    if (s == Statistic::conditional_entropy) return ce;
    return clamp_mi(column_entropy_raw(counts, cols) - ce);
}

} // namespace detail

/// One mimicry of `table`: column totals preserved exactly, rows drawn from
/// the observed row-margin proportions. Rows left empty are dropped.
inline ContingencyTable mimic_table(const ContingencyTable& table, Rng& rng) {
    const auto row_p = detail::row_proportions(table);
    auto counts = detail::mimic_counts(table, row_p, rng);
    std::vector<ContingencyTable::RowKey> keys;
    std::vector<std::uint64_t> kept;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const auto first = counts.begin() + static_cast<std::ptrdiff_t>(r * table.cols());
        const auto last = first + static_cast<std::ptrdiff_t>(table.cols());
        if (std::all_of(first, last, [](auto n) { return n == 0; })) continue;
        keys.push_back(table.row_key(r));
        kept.insert(kept.end(), first, last);
    }
    return ContingencyTable(table.cols(), std::move(keys), std::move(kept));
}

struct NullOptions {
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Simulated null distribution of a statistic over independent mimics.
inline NullBand null_band(const ContingencyTable& table, Statistic statistic, const NullOptions& opt) {
    detail::require_config(opt.replicates >= 2, "a null band needs at least 2 replicates");
    const auto row_p = detail::row_proportions(table);
    std::vector<double> values(opt.replicates);
    parallel_for(opt.replicates, opt.threads, [&](std::size_t i) {
        Rng rng = Rng::stream(opt.seed, i);
        const auto counts = detail::mimic_counts(table, row_p, rng);
        values[i] = detail::evaluate(statistic, counts, table.cols());
    });
    return summarize_band(to_string(statistic), std::move(values));
}

enum class C1Status { confirmed, within_band, below_band };

inline std::string to_string(C1Status s) {
    switch (s) {
    case C1Status::confirmed: return "confirmed";
    case C1Status::below_band: return "below_band";
    default: return "within_band";
    }
}

struct C1Verdict {
    double observed = 0.0;
    NullBand band;
    C1Status status = C1Status::within_band;
    double excess_sd = 0.0;
};

/// confirmed iff observed > q975; below_band iff observed < q025.
inline C1Verdict c1_test(double observed, const NullBand& band) {
    detail::require_config(band.replicates >= 2 && band.q025 <= band.q975, "invalid null band");
    C1Verdict v;
    v.observed = observed;
    v.band = band;
    if (observed > band.q975)
        v.status = C1Status::confirmed;
    else if (observed < band.q025)
        v.status = C1Status::below_band;
    if (band.sd > 0.0) {
        v.excess_sd = (observed - band.mean) / band.sd;
    } else if (observed > band.mean) {
        v.excess_sd = std::numeric_limits<double>::infinity();
    } else if (observed < band.mean) {
        v.excess_sd = -std::numeric_limits<double>::infinity();
    }
    return v;
}

inline void to_json(nlohmann::json& j, const C1Verdict& v) {
    auto finite_or_string = [](double x) -> nlohmann::json {
        if (std::isfinite(x)) return x;
        return x > 0 ? "inf" : "-inf";
    };
    j = nlohmann::json{{"observed", v.observed}, {"band", v.band},
                       {"status", to_string(v.status)}, {"excess_sd", finite_or_string(v.excess_sd)}};
}

struct ColumnVerdict {
    std::size_t column = 0;
    double observed = 0.0;
    NullBand band;
    bool flagged = false;
    C1Status side = C1Status::within_band;  // confirmed = above band
};

/// Per response column: the observed row-label entropy against its band from
/// Multinomial(n_.c, P_A) draws. Flags columns strictly outside the band.
inline std::vector<ColumnVerdict> localize_differences(const ContingencyTable& table, const NullOptions& opt) {
    detail::require_config(opt.replicates >= 2, "a null band needs at least 2 replicates");
    const auto row_p = detail::row_proportions(table);
    const auto observed = per_column_row_entropy(table);
    std::vector<ColumnVerdict> out(table.cols());
    parallel_for(table.cols(), opt.threads, [&](std::size_t c) {
        const std::uint64_t n = table.col_sums()[c];
        std::vector<double> values(opt.replicates);
        std::vector<std::uint64_t> draw(table.rows());
        const double nd = static_cast<double>(n);
        for (std::size_t b = 0; b < opt.replicates; ++b) {
            Rng rng = Rng::stream(opt.seed, c * opt.replicates + b);
            detail::multinomial(n, row_p, rng, draw);
            double s = 0.0;
            for (auto x : draw) s += xlogx(x);
            values[b] = n == 0 ? 0.0 : std::max(0.0, std::log(nd) - s / nd);
        }
        ColumnVerdict v;
        v.column = c;
        v.observed = observed[c];
        v.band = summarize_band("column_row_entropy", std::move(values));
        // a column holding every record reproduces the row margin exactly
        if (n != table.total() && n > 0) {
            if (v.observed > v.band.q975) v.side = C1Status::confirmed;
            if (v.observed < v.band.q025) v.side = C1Status::below_band;
            v.flagged = v.side != C1Status::within_band;
        }
        out[c] = std::move(v);
    });
    return out;
}

/// Dimension-matched reference level H^(k)[Y]: the mean conditional entropy of
/// Y given k synthetic features independent of Y. Synthetic feature j is an
/// independent random permutation of templates[j % templates.size()], so it
/// carries exactly the marginal category structure of a real covariate.
/// k = 0 returns the margin entropy of Y.
inline double noise_padded_reference(std::span<const CategoricalSeries* const> templates, std::size_t k,
                                     const CategoricalSeries& response, const NullOptions& opt) {
    if (k == 0) {
        const auto counts = response.counts();
        return detail::column_entropy_raw(counts, counts.size());
    }
    detail::require_config(!templates.empty(), "noise reference needs template features");
    detail::require_config(opt.replicates >= 1, "noise reference needs at least 1 replicate");
    for (auto* t : templates) detail::require_data(t->size() == response.size(), "series lengths differ");

    std::vector<double> values(opt.replicates);
    parallel_for(opt.replicates, opt.threads, [&](std::size_t b) {
        Rng rng = Rng::stream(opt.seed, b);
        std::vector<CategoricalSeries> noise;
        noise.reserve(k);
        for (std::size_t j = 0; j < k; ++j) {
            const auto& src = *templates[j % templates.size()];
            std::vector<Label> labels(src.labels().begin(), src.labels().end());
            rng.shuffle(std::span<Label>(labels));
            noise.emplace_back(std::move(labels), src.cardinality());
        }
        values[b] = conditional_entropy(crosstab(std::span<const CategoricalSeries>(noise), response));
    });
    return mean(values);
}

} // namespace ceda
