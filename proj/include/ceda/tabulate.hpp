#pragma once

// Contingency tables C[A-vs-Y] and the Shannon measurements evaluated on them.
//
// Convention: covariate categories (one row per occupied hypercube of the
// covariate subset A) run down the rows, response categories across the
// columns. All entropies are in nats with 0 ln 0 = 0.

#include "ceda/error.hpp"
#include "ceda/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace ceda {

using Label = std::uint32_t;

/// Per-record category labels of one (possibly fused) variable.
class CategoricalSeries {
public:
    CategoricalSeries() = default;

    CategoricalSeries(std::vector<Label> labels, std::size_t cardinality,
                      std::vector<std::string> names = {})
        : labels_(std::move(labels)), cardinality_(cardinality), names_(std::move(names)) {
        detail::require_data(!labels_.empty(), "categorical series is empty");
        detail::require_data(cardinality_ >= 1, "categorical series needs at least one category");
        detail::require_data(names_.empty() || names_.size() == cardinality_,
                             "category names do not match cardinality");
        for (Label l : labels_)
            detail::require_data(l < cardinality_, "category label out of range");
    }

    /// Cardinality taken as max(label) + 1.
    static CategoricalSeries from_labels(std::vector<Label> labels) {
        detail::require_data(!labels.empty(), "categorical series is empty");
        const Label top = *std::max_element(labels.begin(), labels.end());
        return CategoricalSeries(std::move(labels), static_cast<std::size_t>(top) + 1);
    }

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t cardinality() const noexcept { return cardinality_; }
    std::span<const Label> labels() const noexcept { return labels_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    Label operator[](std::size_t i) const noexcept { return labels_[i]; }

    /// Occurrence count per category.
    std::vector<std::uint64_t> counts() const {
        std::vector<std::uint64_t> c(cardinality_, 0);
        for (Label l : labels_) ++c[l];
        return c;
    }

private:
    std::vector<Label> labels_;
    std::size_t cardinality_ = 0;
    std::vector<std::string> names_;
};

/// R x C count matrix. Rows are occupied covariate hypercubes only; columns
/// cover every response category, including empty ones.
class ContingencyTable {
public:
    using RowKey = std::vector<Label>;

    ContingencyTable(std::size_t cols, std::vector<RowKey> row_keys,
                     std::vector<std::uint64_t> counts)
        : cols_(cols), keys_(std::move(row_keys)), counts_(std::move(counts)) {
        detail::require_data(cols_ >= 1, "table needs at least one column");
        detail::require_data(!keys_.empty(), "table needs at least one row");
        detail::require_data(counts_.size() == keys_.size() * cols_, "table shape mismatch");
        row_sums_.assign(keys_.size(), 0);
        col_sums_.assign(cols_, 0);
        for (std::size_t r = 0; r < keys_.size(); ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                const std::uint64_t n = counts_[r * cols_ + c];
                row_sums_[r] += n;
                col_sums_[c] += n;
            }
            detail::require_data(row_sums_[r] > 0, "table contains an all-zero row");
            total_ += row_sums_[r];
        }
    }

    /// Builds from nested rows; all-zero rows are dropped, row keys are the
    /// original row indices.
    static ContingencyTable from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
        detail::require_data(!rows.empty(), "table needs at least one row");
        const std::size_t cols = rows.front().size();
        std::vector<RowKey> keys;
        std::vector<std::uint64_t> counts;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            detail::require_data(rows[r].size() == cols, "ragged table rows");
            bool any = false;
            for (auto n : rows[r]) any = any || n > 0;
            if (!any) continue;
            keys.push_back({static_cast<Label>(r)});
            counts.insert(counts.end(), rows[r].begin(), rows[r].end());
        }
        return ContingencyTable(cols, std::move(keys), std::move(counts));
    }

    std::size_t rows() const noexcept { return keys_.size(); }
    std::size_t cols() const noexcept { return cols_; }
    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t count(std::size_t r, std::size_t c) const noexcept { return counts_[r * cols_ + c]; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::span<const std::uint64_t> row(std::size_t r) const noexcept {
        return std::span<const std::uint64_t>(counts_).subspan(r * cols_, cols_);
    }
    std::span<const std::uint64_t> row_sums() const noexcept { return row_sums_; }
    std::span<const std::uint64_t> col_sums() const noexcept { return col_sums_; }
    const RowKey& row_key(std::size_t r) const noexcept { return keys_[r]; }
    const std::vector<RowKey>& row_keys() const noexcept { return keys_; }

    double avg_cell_count() const noexcept {
        return static_cast<double>(total_) / static_cast<double>(rows() * cols());
    }

private:
    std::size_t cols_ = 0;
    std::vector<RowKey> keys_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::uint64_t> row_sums_;
    std::vector<std::uint64_t> col_sums_;
    std::uint64_t total_ = 0;
};

namespace detail {

/// Occupied-cell coding of a covariate tuple per record.
struct RowCoding {
    std::vector<std::uint32_t> row_of_record;
    std::vector<ContingencyTable::RowKey> keys;
};

inline constexpr std::uint64_t kDenseCodeLimit = std::uint64_t{1} << 22;

inline RowCoding code_rows(std::span<const CategoricalSeries* const> series) {
    require_data(!series.empty(), "no covariate series given");
    const std::size_t n = series.front()->size();
    for (auto* s : series) require_data(s->size() == n, "series lengths differ");

    // Mixed radix, first series most significant: code order == tuple order.
    std::uint64_t radix_product = 1;
    bool fits = true;
    for (auto* s : series) {
        const std::uint64_t card = s->cardinality();
        if (radix_product > std::numeric_limits<std::uint64_t>::max() / card) {
            fits = false;
            break;
        }
        radix_product *= card;
    }

    RowCoding out;
    out.row_of_record.resize(n);

    auto decode = [&](std::uint64_t code) {
        ContingencyTable::RowKey key(series.size());
        for (std::size_t j = series.size(); j-- > 0;) {
            const std::uint64_t card = series[j]->cardinality();
            key[j] = static_cast<Label>(code % card);
            code /= card;
        }
        return key;
    };

    if (fits) {
        std::vector<std::uint64_t> codes(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t code = 0;
            for (auto* s : series) code = code * s->cardinality() + (*s)[i];
            codes[i] = code;
        }
        if (radix_product <= kDenseCodeLimit) {
            std::vector<std::uint32_t> slot(radix_product, 0);
            for (auto code : codes) slot[code] = 1;
            std::uint32_t next = 0;
            for (std::uint64_t code = 0; code < radix_product; ++code) {
                if (slot[code]) {
                    slot[code] = ++next;
                    out.keys.push_back(decode(code));
                }
            }
            for (std::size_t i = 0; i < n; ++i) out.row_of_record[i] = slot[codes[i]] - 1;
        } else {
            std::vector<std::uint64_t> uniq(codes);
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            out.keys.reserve(uniq.size());
            for (auto code : uniq) out.keys.push_back(decode(code));
            for (std::size_t i = 0; i < n; ++i)
                out.row_of_record[i] = static_cast<std::uint32_t>(
                    std::lower_bound(uniq.begin(), uniq.end(), codes[i]) - uniq.begin());
        }
        return out;
    }

    std::map<ContingencyTable::RowKey, std::uint32_t> index;
    std::vector<ContingencyTable::RowKey> record_keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        ContingencyTable::RowKey key(series.size());
        for (std::size_t j = 0; j < series.size(); ++j) key[j] = (*series[j])[i];
        index.emplace(key, 0);
        record_keys[i] = std::move(key);
    }
    std::uint32_t next = 0;
    for (auto& [key, slot] : index) {
        slot = next++;
        out.keys.push_back(key);
    }
    for (std::size_t i = 0; i < n; ++i) out.row_of_record[i] = index.at(record_keys[i]);
    return out;
}

inline ContingencyTable tabulate_coded(RowCoding coding, const CategoricalSeries& response) {
    require_data(coding.row_of_record.size() == response.size(), "series lengths differ");
    const std::size_t cols = response.cardinality();
    std::vector<std::uint64_t> counts(coding.keys.size() * cols, 0);
    for (std::size_t i = 0; i < response.size(); ++i)
        ++counts[std::size_t{coding.row_of_record[i]} * cols + response[i]];
    return ContingencyTable(cols, std::move(coding.keys), std::move(counts));
}

// Entropies on a raw row-major count block. Zero rows contribute nothing.

inline double column_entropy_raw(std::span<const std::uint64_t> counts, std::size_t cols) {
    std::vector<std::uint64_t> col(cols, 0);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        col[i % cols] += counts[i];
        total += counts[i];
    }
    if (total == 0) return 0.0;
    double s = 0.0;
    for (auto n : col) s += xlogx(n);
    const double t = static_cast<double>(total);
    return std::max(0.0, std::log(t) - s / t);
}

inline double conditional_entropy_raw(std::span<const std::uint64_t> counts, std::size_t cols) {
    double acc = 0.0;
    std::uint64_t total = 0;
    for (std::size_t off = 0; off < counts.size(); off += cols) {
        std::uint64_t row_sum = 0;
        double cells = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            row_sum += counts[off + c];
            cells += xlogx(counts[off + c]);
        }
        acc += xlogx(row_sum) - cells;
        total += row_sum;
    }
    if (total == 0) return 0.0;
    return std::max(0.0, acc / static_cast<double>(total));
}

inline double clamp_mi(double mi) noexcept { return (mi < 0.0 && mi > -1e-12) ? 0.0 : mi; }

} // namespace detail

inline ContingencyTable crosstab(std::span<const CategoricalSeries> covariates,
                                 const CategoricalSeries& response) {
    detail::require_data(!covariates.empty(), "crosstab needs at least one covariate");
    std::vector<const CategoricalSeries*> ptrs;
    for (const auto& s : covariates) ptrs.push_back(&s);
    return detail::tabulate_coded(detail::code_rows(ptrs), response);
}

inline ContingencyTable crosstab(std::span<const CategoricalSeries* const> covariates,
                                 const CategoricalSeries& response) {
    return detail::tabulate_coded(detail::code_rows(covariates), response);
}

inline ContingencyTable crosstab(const CategoricalSeries& covariate,
                                 const CategoricalSeries& response) {
    const CategoricalSeries* p = &covariate;
    return detail::tabulate_coded(detail::code_rows(std::span(&p, 1)), response);
}

/// H[Y] from the column margin.
inline double column_margin_entropy(const ContingencyTable& t) {
    double s = 0.0;
    for (auto n : t.col_sums()) s += xlogx(n);
    const double total = static_cast<double>(t.total());
    return std::max(0.0, std::log(total) - s / total);
}

/// H[A] from the row margin.
inline double row_margin_entropy(const ContingencyTable& t) {
    double s = 0.0;
    for (auto n : t.row_sums()) s += xlogx(n);
    const double total = static_cast<double>(t.total());
    return std::max(0.0, std::log(total) - s / total);
}

/// H[Y|A] = sum_r (n_r/N) H(row r).
inline double conditional_entropy(const ContingencyTable& t) {
    return detail::conditional_entropy_raw(t.counts(), t.cols());
}

/// I[Y;A] = H[Y] - H[Y|A], clamped at zero for rounding-level negatives.
inline double mutual_information(const ContingencyTable& t) {
    return detail::clamp_mi(column_margin_entropy(t) - conditional_entropy(t));
}

/// Entropy of the row-label mix inside each response column (index = column).
/// Empty columns report 0.
inline std::vector<double> per_column_row_entropy(const ContingencyTable& t) {
    std::vector<double> acc(t.cols(), 0.0);
    for (std::size_t r = 0; r < t.rows(); ++r)
        for (std::size_t c = 0; c < t.cols(); ++c) acc[c] += xlogx(t.count(r, c));
    std::vector<double> out(t.cols(), 0.0);
    for (std::size_t c = 0; c < t.cols(); ++c) {
        const std::uint64_t n = t.col_sums()[c];
        if (n == 0) continue;
        const double nd = static_cast<double>(n);
        out[c] = std::max(0.0, std::log(nd) - acc[c] / nd);
    }
    return out;
}

struct EntropyReport {
    double h_y = 0.0;
    double h_y_given_a = 0.0;
    double mutual_info = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t total = 0;
    double avg_cell_count = 0.0;
};

inline EntropyReport measure(const ContingencyTable& t) {
    EntropyReport r;
    r.h_y = column_margin_entropy(t);
    r.h_y_given_a = std::min(conditional_entropy(t), r.h_y);
    r.mutual_info = r.h_y - r.h_y_given_a;
    r.rows = t.rows();
    r.cols = t.cols();
    r.total = t.total();
    r.avg_cell_count = t.avg_cell_count();
    return r;
}

inline void to_json(nlohmann::json& j, const EntropyReport& r) {
    j = nlohmann::json{{"rows", r.rows},   {"cols", r.cols},
                       {"total", r.total}, {"h_y", r.h_y},
                       {"h_y_given_a", r.h_y_given_a}, {"mi", r.mutual_info}};
}

/// Tab-separated table: one column per row-key component, then one per
/// response category. Missing names default to a0.. and c0..
inline std::string to_tsv(const ContingencyTable& t, std::vector<std::string> key_names = {},
                          std::vector<std::string> col_names = {}) {
    const std::size_t key_width = t.row_key(0).size();
    for (std::size_t j = key_names.size(); j < key_width; ++j) key_names.push_back("a" + std::to_string(j));
    for (std::size_t c = col_names.size(); c < t.cols(); ++c) col_names.push_back("c" + std::to_string(c));
    std::ostringstream os;
    for (std::size_t j = 0; j < key_width; ++j) os << (j ? "\t" : "") << key_names[j];
    for (std::size_t c = 0; c < t.cols(); ++c) os << '\t' << col_names[c];
    os << '\n';
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const auto& key = t.row_key(r);
        for (std::size_t j = 0; j < key.size(); ++j) os << (j ? "\t" : "") << key[j];
        for (std::size_t c = 0; c < t.cols(); ++c) os << '\t' << t.count(r, c);
        os << '\n';
    }
    return os.str();
}

} // namespace ceda
