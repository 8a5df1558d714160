#pragma once

// Categorization of quantitative features: 1+K+1 quantile binning for scalar
// features, K-means (Lloyd iterations from k-means++ seeding) for scalar or
// multi-dimensional ones, and product categories for fusing already
// categorical series.

#include "ceda/error.hpp"
#include "ceda/numeric.hpp"
#include "ceda/parallel.hpp"
#include "ceda/rng.hpp"
#include "ceda/tabulate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace ceda {

/// 1+K+1 histogram: K equal-width bins over [F^-1(low_q), F^-1(high_q)] plus
/// two unbounded tails. Bins are right-closed: (-inf,e0], (e0,e1], ..., (eK,inf).
struct BinningScheme {
    std::vector<double> edges;
    double low_q = 0.05;
    double high_q = 0.95;
    std::size_t k_interior = 0;

    std::size_t bin_count() const noexcept { return edges.size() + 1; }
};

inline BinningScheme quantile_bins(std::span<const double> values, std::size_t k_interior,
                                   double low_q = 0.05, double high_q = 0.95) {
    detail::require_config(k_interior >= 1, "k_interior must be at least 1");
    detail::require_config(low_q > 0.0 && low_q < high_q && high_q < 1.0,
                           "quantile anchors must satisfy 0 < low_q < high_q < 1");
    detail::require_data(values.size() >= k_interior + 2, "too few values for the requested bins");
    for (double v : values) detail::require_data(std::isfinite(v), "non-finite value in feature");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = quantile_sorted(sorted, low_q);
    const double hi = quantile_sorted(sorted, high_q);
    detail::require_data(hi > lo, "degenerate feature");

    BinningScheme s;
    s.low_q = low_q;
    s.high_q = high_q;
    s.k_interior = k_interior;
    s.edges.resize(k_interior + 1);
    const double width = (hi - lo) / static_cast<double>(k_interior);
    for (std::size_t i = 0; i <= k_interior; ++i) s.edges[i] = lo + width * static_cast<double>(i);
    s.edges.back() = hi;
    // Tie collapse: rounding can only produce equal neighbours when the
    // interior range is at the resolution limit.
    s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
    detail::require_data(s.edges.size() >= 2, "degenerate feature");
    return s;
}

inline Label bin_of(double v, const BinningScheme& scheme) {
    detail::require_data(!std::isnan(v), "NaN value cannot be binned");
    // number of edges strictly below v
    return static_cast<Label>(std::lower_bound(scheme.edges.begin(), scheme.edges.end(), v) -
                              scheme.edges.begin());
}

inline CategoricalSeries apply_bins(std::span<const double> values, const BinningScheme& scheme) {
    detail::require_config(!scheme.edges.empty() &&
                               std::is_sorted(scheme.edges.begin(), scheme.edges.end()),
                           "invalid binning scheme");
    std::vector<Label> labels(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) labels[i] = bin_of(values[i], scheme);
    return CategoricalSeries(std::move(labels), scheme.bin_count());
}

inline void to_json(nlohmann::json& j, const BinningScheme& s) {
    j = nlohmann::json{{"method", "quantile"}, {"edges", s.edges}, {"low_q", s.low_q},
                       {"high_q", s.high_q}, {"k_interior", s.k_interior}};
}

inline void from_json(const nlohmann::json& j, BinningScheme& s) {
    j.at("edges").get_to(s.edges);
    s.low_q = j.value("low_q", 0.05);
    s.high_q = j.value("high_q", 0.95);
    s.k_interior = j.value("k_interior", s.edges.empty() ? 0 : s.edges.size() - 1);
}

/// Dense row-major N x d matrix of reals.
class PointMatrix {
public:
    PointMatrix() = default;
    PointMatrix(std::size_t rows, std::size_t dims, std::vector<double> data)
        : rows_(rows), dims_(dims), data_(std::move(data)) {
        detail::require_data(data_.size() == rows_ * dims_, "point matrix shape mismatch");
    }

    /// Column-wise construction: every column one feature.
    static PointMatrix from_columns(std::span<const std::vector<double>> columns) {
        detail::require_data(!columns.empty(), "no columns");
        const std::size_t n = columns.front().size();
        std::vector<double> data(n * columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            detail::require_data(columns[j].size() == n, "column lengths differ");
            for (std::size_t i = 0; i < n; ++i) data[i * columns.size() + j] = columns[j][i];
        }
        return PointMatrix(n, columns.size(), std::move(data));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t dims() const noexcept { return dims_; }
    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * dims_, dims_);
    }
    std::span<double> row(std::size_t i) noexcept { return std::span<double>(data_).subspan(i * dims_, dims_); }
    std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t dims_ = 0;
    std::vector<double> data_;
};

struct KMeansOptions {
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    double rel_tol = 1e-6;
    /// Scale every coordinate to unit sample variance before clustering.
    bool standardize = false;
    /// Relabel clusters in ascending lexicographic centroid order.
    bool order_by_centroid = false;
    unsigned threads = 1;
};

struct KMeansModel {
    PointMatrix centroids;  // in original coordinates
    CategoricalSeries assignments;
    double inertia = 0.0;   // in the (possibly standardized) fitting space
    std::size_t iterations_run = 0;
    std::vector<double> inertia_history;
    std::vector<double> scale;  // per-dimension divisor applied before fitting
    std::uint64_t seed = 0;
};

namespace detail {

inline double sq_dist(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

/// Nearest centroid; ties go to the lowest index.
inline std::pair<std::size_t, double> nearest(std::span<const double> p, const PointMatrix& centroids) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = sq_dist(p, centroids.row(c));
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return {best, best_d};
}

inline std::vector<std::size_t> kmeanspp_seeds(const PointMatrix& x, std::size_t k, Rng& rng) {
    const std::size_t n = x.rows();
    std::vector<std::size_t> chosen;
    std::vector<char> taken(n, 0);
    std::vector<double> mind(n, std::numeric_limits<double>::infinity());
    chosen.push_back(static_cast<std::size_t>(rng.below(n)));
    taken[chosen.back()] = 1;
    while (chosen.size() < k) {
        const auto last = x.row(chosen.back());
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mind[i] = std::min(mind[i], sq_dist(x.row(i), last));
            if (!taken[i]) total += mind[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            double u = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i] || mind[i] <= 0.0) continue;
                pick = i;
                u -= mind[i];
                if (u < 0.0) break;
            }
        }
        if (pick == n) {
            // every remaining point coincides with a chosen centre
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i)
                if (!taken[i]) free.push_back(i);
            pick = free[static_cast<std::size_t>(rng.below(free.size()))];
        }
        chosen.push_back(pick);
        taken[pick] = 1;
    }
    return chosen;
}

} // namespace detail

inline KMeansModel kmeans_fit(const PointMatrix& points, std::size_t k, const KMeansOptions& opt = {}) {
    const std::size_t n = points.rows();
    const std::size_t d = points.dims();
    detail::require_config(k >= 1, "k must be at least 1");
    detail::require_data(n >= 1 && d >= 1, "no points to cluster");
    detail::require_data(k <= n, "k exceeds the number of points");
    for (double v : points.data()) detail::require_data(std::isfinite(v), "non-finite coordinate");

    std::vector<double> scale(d, 1.0);
    PointMatrix x = points;
    if (opt.standardize) {
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = points.row(i)[j];
            const double sd = sample_sd(col);
            scale[j] = sd > 0.0 ? sd : 1.0;
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) x.row(i)[j] /= scale[j];
    }

    Rng rng(opt.seed);
    const auto seeds = detail::kmeanspp_seeds(x, k, rng);
    std::vector<double> cdata;
    cdata.reserve(k * d);
    for (auto s : seeds) cdata.insert(cdata.end(), x.row(s).begin(), x.row(s).end());
    PointMatrix centroids(k, d, std::move(cdata));

    std::vector<std::uint32_t> assign(n, 0);
    std::vector<double> dist(n, 0.0);
    auto assign_all = [&] {
        parallel_for(n, opt.threads, [&](std::size_t i) {
            const auto [c, dd] = detail::nearest(x.row(i), centroids);
            assign[i] = static_cast<std::uint32_t>(c);
            dist[i] = dd;
        });
        double s = 0.0;
        for (double v : dist) s += v;
        return s;
    };

    KMeansModel model;
    double inertia = assign_all();
    model.inertia_history.push_back(inertia);
    std::size_t iter = 0;
    while (iter < opt.max_iter) {
        ++iter;
        std::vector<double> sums(k * d, 0.0);
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++sizes[assign[i]];
            for (std::size_t j = 0; j < d; ++j) sums[assign[i] * d + j] += x.row(i)[j];
        }
        std::vector<char> moved_here(n, 0);
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) {
                for (std::size_t j = 0; j < d; ++j)
                    centroids.row(c)[j] = sums[c * d + j] / static_cast<double>(sizes[c]);
                continue;
            }
            // empty cluster: reseed at the point farthest from its centroid
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!moved_here[i] && sizes[assign[i]] > 1 && dist[i] > far_d) {
                    far_d = dist[i];
                    far = i;
                }
            }
            if (far == n) continue;
            moved_here[far] = 1;
            --sizes[assign[far]];
            std::copy(x.row(far).begin(), x.row(far).end(), centroids.row(c).begin());
        }
        const double prev = inertia;
        inertia = assign_all();
        model.inertia_history.push_back(inertia);
        if (prev <= 0.0 || (prev - inertia) / prev < opt.rel_tol) break;
    }

    std::vector<std::uint32_t> relabel(k);
    std::iota(relabel.begin(), relabel.end(), 0u);
    if (opt.order_by_centroid) {
        std::vector<std::uint32_t> order(k);
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto ra = centroids.row(a);
            const auto rb = centroids.row(b);
            return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
        });
        for (std::uint32_t pos = 0; pos < k; ++pos) relabel[order[pos]] = pos;
    }

    std::vector<double> out_centroids(k * d);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j) out_centroids[relabel[c] * d + j] = centroids.row(c)[j] * scale[j];
    std::vector<Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = relabel[assign[i]];

    model.centroids = PointMatrix(k, d, std::move(out_centroids));
    model.assignments = CategoricalSeries(std::move(labels), k);
    model.inertia = inertia;
    model.iterations_run = iter;
    model.scale = std::move(scale);
    model.seed = opt.seed;
    return model;
}

/// Labels new points with a fitted model (nearest centroid, lowest index on ties).
inline CategoricalSeries kmeans_assign(const KMeansModel& model, const PointMatrix& points) {
    detail::require_data(points.dims() == model.centroids.dims(), "dimension mismatch");
    PointMatrix scaled_centroids = model.centroids;
    for (std::size_t c = 0; c < scaled_centroids.rows(); ++c)
        for (std::size_t j = 0; j < scaled_centroids.dims(); ++j) scaled_centroids.row(c)[j] /= model.scale[j];
    std::vector<Label> labels(points.rows());
    std::vector<double> p(points.dims());
    for (std::size_t i = 0; i < points.rows(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) p[j] = points.row(i)[j] / model.scale[j];
        labels[i] = static_cast<Label>(detail::nearest(p, scaled_centroids).first);
    }
    return CategoricalSeries(std::move(labels), model.centroids.rows());
}

inline void to_json(nlohmann::json& j, const KMeansModel& m) {
    std::vector<std::vector<double>> cs;
    for (std::size_t c = 0; c < m.centroids.rows(); ++c)
        cs.emplace_back(m.centroids.row(c).begin(), m.centroids.row(c).end());
    j = nlohmann::json{{"method", "kmeans"}, {"centroids", cs}, {"scale", m.scale},
                       {"seed", m.seed},     {"inertia", m.inertia},
                       {"iterations", m.iterations_run}};
}

/// Centroids and scale only; assignments are not serialized.
inline KMeansModel kmeans_from_json(const nlohmann::json& j) {
    const auto cs = j.at("centroids").get<std::vector<std::vector<double>>>();
    detail::require_data(!cs.empty(), "kmeans model without centroids");
    const std::size_t d = cs.front().size();
    std::vector<double> data;
    for (const auto& c : cs) {
        detail::require_data(c.size() == d, "ragged centroids");
        data.insert(data.end(), c.begin(), c.end());
    }
    KMeansModel m;
    m.centroids = PointMatrix(cs.size(), d, std::move(data));
    m.scale = j.value("scale", std::vector<double>(d, 1.0));
    m.seed = j.value("seed", std::uint64_t{0});
    return m;
}

/// Fuses the columns of a multi-dimensional feature into one categorical
/// variable by K-means clustering.
inline CategoricalSeries fuse_features(const PointMatrix& matrix, std::size_t k, std::uint64_t seed,
                                       unsigned threads = 1, bool order_by_centroid = true) {
    KMeansOptions opt;
    opt.seed = seed;
    opt.threads = threads;
    opt.order_by_centroid = order_by_centroid;
    return kmeans_fit(matrix, k, opt).assignments;
}

/// One category per occupied tuple of the input series, numbered in
/// lexicographic tuple order.
inline CategoricalSeries product_categories(std::span<const CategoricalSeries* const> series) {
    detail::require_data(!series.empty(), "product of an empty series list");
    auto coding = detail::code_rows(series);
    std::vector<std::string> names;
    names.reserve(coding.keys.size());
    for (const auto& key : coding.keys) {
        std::string s;
        for (std::size_t j = 0; j < key.size(); ++j) {
            if (j) s += '|';
            s += series[j]->names().empty() ? std::to_string(key[j]) : series[j]->names()[key[j]];
        }
        names.push_back(std::move(s));
    }
    const std::size_t card = coding.keys.size();
    std::vector<Label> labels(coding.row_of_record.begin(), coding.row_of_record.end());
    return CategoricalSeries(std::move(labels), card, std::move(names));
}

inline CategoricalSeries product_categories(std::span<const CategoricalSeries> series) {
    std::vector<const CategoricalSeries*> ptrs;
    for (const auto& s : series) ptrs.push_back(&s);
    return product_categories(std::span<const CategoricalSeries* const>(ptrs));
}

} // namespace ceda
