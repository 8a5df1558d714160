#pragma once

// Subset ledger, pairwise classification and major-factor selection.
//
// Every covariate subset up to max_order is tabulated against the response.
// A subset's CE-drop is measured against H^(k)[Y], the conditional entropy of
// Y given k synthetic features independent of Y, so that drops of different
// orders are compared at matched table dimensions. The SCE*-drop of A = A' + f
// (A' the best proper subset) measures what f adds on top of A' against the
// same table scale: f is replaced by designated noise features, or by random
// permutations of itself, and the padded conditional entropy is the reference.

#include "ceda/categorize.hpp"
#include "ceda/error.hpp"
#include "ceda/nullsim.hpp"
#include "ceda/numeric.hpp"
#include "ceda/parallel.hpp"
#include "ceda/rng.hpp"
#include "ceda/tabulate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ceda {

using Subset = std::vector<std::size_t>;

/// Categorized covariates and response, plus the raw numeric covariate values
/// (used only for K-means fusing; an empty vector means "not numeric").
struct CategorizedData {
    std::vector<std::string> names;
    std::vector<CategoricalSeries> covariates;
    std::vector<std::vector<double>> raw;
    CategoricalSeries response;

    std::size_t size() const noexcept { return response.size(); }
};

struct ProtocolConfig {
    std::size_t max_order = 2;
    std::size_t replicates = 1000;          // mimicry band for C1 on each reliable subset
    std::size_t reference_replicates = 100; // H^(k) reference
    std::size_t pad_replicates = 100;       // SCE* padding and its band
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double cell_floor = 1.0;                // minimum N / (rows * cols) for claims
    double cell_budget = 1e8;               // product of cardinalities * cols above which a subset is skipped
    double r_int = 3.0;
    double eco_low = 0.5;
    double interaction_min_sd = 3.0;
    double min_relative_drop = 0.2;
    std::vector<std::size_t> noise_features;
    std::size_t fuse_clusters = 0;          // 0: largest covariate cardinality
};

inline std::vector<Subset> enumerate_subsets(std::size_t features, std::size_t max_order) {
    detail::require_config(max_order >= 1, "max_order must be at least 1");
    detail::require_config(max_order <= features, "max_order exceeds the number of features");
    std::vector<Subset> out;
    for (std::size_t k = 1; k <= max_order; ++k) {
        Subset s(k);
        std::iota(s.begin(), s.end(), std::size_t{0});
        for (;;) {
            out.push_back(s);
            std::size_t i = k;
            while (i > 0 && s[i - 1] == features - k + i - 1) --i;
            if (i == 0) break;
            ++s[i - 1];
            for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
        }
    }
    return out;
}

inline std::string subset_label(const Subset& s, const std::vector<std::string>& names) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += s[i] < names.size() ? names[s[i]] : std::to_string(s[i]);
    }
    return out + ")";
}

struct SubsetLedgerEntry {
    Subset subset;
    std::size_t order = 0;
    double ce = std::numeric_limits<double>::quiet_NaN();
    double mi = std::numeric_limits<double>::quiet_NaN();
    double reference = std::numeric_limits<double>::quiet_NaN();  // H^(k)[Y]
    double ce_drop = std::numeric_limits<double>::quiet_NaN();
    double sce_drop = std::numeric_limits<double>::quiet_NaN();
    double sce_star_drop = std::numeric_limits<double>::quiet_NaN();
    Subset best_proper;             // A', empty for singletons
    std::size_t added = 0;          // f
    bool synthetic_noise = false;   // SCE* padding by permutation rather than designated noise
    std::optional<C1Verdict> sce_star;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double avg_cell = 0.0;
    bool reliable = false;
    bool skipped = false;           // over the cell budget, never tabulated
    std::optional<C1Verdict> c1;
};

struct Ledger {
    std::vector<std::string> names;
    std::vector<double> reference;  // H^(k)[Y], k = 0..max_order
    std::vector<SubsetLedgerEntry> entries;  // by order, then ce

    const SubsetLedgerEntry* find(const Subset& s) const {
        for (const auto& e : entries)
            if (e.subset == s) return &e;
        return nullptr;
    }
};

namespace detail {

inline std::vector<const CategoricalSeries*> pick(const CategorizedData& d, const Subset& s) {
    std::vector<const CategoricalSeries*> out;
    for (auto j : s) out.push_back(&d.covariates[j]);
    return out;
}

inline double ce_of(std::span<const CategoricalSeries* const> series, const CategoricalSeries& y) {
    return conditional_entropy(crosstab(series, y));
}

inline void validate(const CategorizedData& d) {
    require_data(!d.covariates.empty(), "no covariates");
    require_data(d.names.size() == d.covariates.size(), "covariate names do not match covariates");
    require_data(d.raw.empty() || d.raw.size() == d.covariates.size(), "raw columns do not match covariates");
    for (const auto& c : d.covariates) require_data(c.size() == d.response.size(), "series lengths differ");
}

// Seed tags keep the random streams of different ledger stages apart.
enum : std::uint64_t { kTagReference = 1, kTagBand = 2, kTagPad = 3, kTagFuse = 4, kTagGrid = 5 };

inline std::uint64_t stage_seed(std::uint64_t master, std::uint64_t tag) { return derive_seed(master, tag); }

/// SCE* for entry e: f replaced by designated noise (mean over the pool) or
/// by random permutations of f. The band is built from the permutations.
inline void fill_sce_star(SubsetLedgerEntry& e, const CategorizedData& d, const ProtocolConfig& cfg,
                          std::uint64_t seed) {
    const auto& f = d.covariates[e.added];
    auto base = pick(d, e.best_proper);
    std::vector<double> h(cfg.pad_replicates);
    Rng rng(seed);
    for (std::size_t b = 0; b < cfg.pad_replicates; ++b) {
        std::vector<Label> labels(f.labels().begin(), f.labels().end());
        rng.shuffle(std::span<Label>(labels));
        CategoricalSeries noise(std::move(labels), f.cardinality());
        auto series = base;
        series.push_back(&noise);
        h[b] = ce_of(series, d.response);
    }
    std::vector<double> designated;
    for (auto g : cfg.noise_features) {
        if (std::find(e.subset.begin(), e.subset.end(), g) != e.subset.end()) continue;
        auto series = base;
        series.push_back(&d.covariates[g]);
        designated.push_back(ce_of(series, d.response));
    }
    e.synthetic_noise = designated.empty();
    const double reference = designated.empty() ? mean(h) : mean(designated);
    e.sce_star_drop = reference - e.ce;
    if (cfg.pad_replicates >= 2) {
        std::vector<double> s(h.size());
        for (std::size_t b = 0; b < h.size(); ++b) s[b] = reference - h[b];
        e.sce_star = c1_test(e.sce_star_drop, summarize_band("sce_star_drop", std::move(s)));
    }
}

} // namespace detail

/// Tabulates every subset up to cfg.max_order and fills the CE, SCE and SCE*
/// columns. Deterministic for a given cfg.seed whatever cfg.threads is.
inline Ledger build_ledger(const CategorizedData& data, const ProtocolConfig& cfg) {
    detail::validate(data);
    for (auto g : cfg.noise_features)
        detail::require_config(g < data.covariates.size(), "noise feature index out of range");
    const auto subsets = enumerate_subsets(data.covariates.size(), cfg.max_order);
    const double n = static_cast<double>(data.size());
    const std::size_t cols = data.response.cardinality();

    Ledger ledger;
    ledger.names = data.names;
    {
        std::vector<const CategoricalSeries*> templates;
        for (const auto& c : data.covariates) templates.push_back(&c);
        NullOptions ro{cfg.reference_replicates, detail::stage_seed(cfg.seed, detail::kTagReference), cfg.threads};
        for (std::size_t k = 0; k <= cfg.max_order; ++k)
            ledger.reference.push_back(noise_padded_reference(templates, k, data.response, ro));
    }

    std::vector<SubsetLedgerEntry> entries(subsets.size());
    const auto band_seed = detail::stage_seed(cfg.seed, detail::kTagBand);
    parallel_for(subsets.size(), cfg.threads, [&](std::size_t i) {
        auto& e = entries[i];
        e.subset = subsets[i];
        e.order = e.subset.size();
        e.cols = cols;
        e.reference = ledger.reference[e.order];
        double cells = static_cast<double>(cols);
        for (auto j : e.subset) cells *= static_cast<double>(data.covariates[j].cardinality());
        if (cells > cfg.cell_budget) {
            e.skipped = true;
            return;
        }
        const auto series = detail::pick(data, e.subset);
        const auto table = crosstab(series, data.response);
        const auto r = measure(table);
        e.ce = r.h_y_given_a;
        e.mi = r.mutual_info;
        e.ce_drop = e.reference - e.ce;
        e.rows = r.rows;
        e.avg_cell = n / (static_cast<double>(r.rows) * static_cast<double>(cols));
        e.reliable = e.avg_cell >= cfg.cell_floor;
        if (e.reliable && cfg.replicates >= 2) {
            NullOptions no{cfg.replicates, derive_seed(band_seed, i), 1};
            e.c1 = c1_test(e.mi, null_band(table, Statistic::mutual_information, no));
        }
    });

    std::map<Subset, std::size_t> index;
    for (std::size_t i = 0; i < entries.size(); ++i) index[entries[i].subset] = i;

    // SCE-drop and the best proper subset
    for (auto& e : entries) {
        if (e.skipped) continue;
        if (e.order == 1) {
            e.sce_drop = e.ce_drop;
            e.added = e.subset[0];
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t drop = 0; drop < e.order; ++drop) {
            Subset parent;
            for (std::size_t j = 0; j < e.order; ++j)
                if (j != drop) parent.push_back(e.subset[j]);
            const auto& p = entries[index.at(parent)];
            if (p.skipped) continue;
            if (p.ce < best) {
                best = p.ce;
                e.best_proper = parent;
                e.added = e.subset[drop];
            }
        }
        if (std::isfinite(best)) e.sce_drop = best - e.ce;
    }

    const auto pad_seed = detail::stage_seed(cfg.seed, detail::kTagPad);
    parallel_for(entries.size(), cfg.threads, [&](std::size_t i) {
        auto& e = entries[i];
        if (!e.reliable || (e.order > 1 && e.best_proper.empty())) return;
        detail::fill_sce_star(e, data, cfg, derive_seed(pad_seed, i));
    });

    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.order != b.order) return a.order < b.order;
        const double ca = a.skipped ? std::numeric_limits<double>::infinity() : a.ce;
        const double cb = b.skipped ? std::numeric_limits<double>::infinity() : b.ce;
        if (ca != cb) return ca < cb;
        return a.subset < b.subset;
    });
    ledger.entries = std::move(entries);
    return ledger;
}

enum class Relation { singleton, interaction, ecological, non_coexistent, no_joint_effect, undetermined };

inline std::string to_string(Relation r) {
    switch (r) {
    case Relation::singleton: return "singleton";
    case Relation::interaction: return "interaction";
    case Relation::ecological: return "ecological";
    case Relation::non_coexistent: return "non_coexistent";
    case Relation::no_joint_effect: return "no_joint_effect";
    case Relation::undetermined: return "undetermined (dimension)";
    }
    return "?";
}

struct Classification {
    Relation relation = Relation::undetermined;
    double successive_ratio = std::numeric_limits<double>::quiet_NaN();  // SCE*(A) / CE-drop(f)
    double joint_ratio = std::numeric_limits<double>::quiet_NaN();       // CE-drop(A) / sum of singleton drops
};

/// Classifies A = A' + f from the ledger. The successive ratio compares what f
/// adds on top of A' at matched dimension with what f achieves alone:
///   interaction     SCE* confirmed, at least interaction_min_sd above its band,
///                   and ratio >= r_int (f is far more informative given A');
///   no_joint_effect f alone is not C1 confirmed and there is no interaction;
///   ecological      ratio >= eco_low (f keeps most of its own effect);
///   non_coexistent  ratio < eco_low (A' already carries f's information).
/// Missing or dimension-unreliable tables give undetermined.
inline Classification classify_subset(const SubsetLedgerEntry& e, const Ledger& ledger, const ProtocolConfig& cfg) {
    Classification c;
    if (e.order == 1) {
        c.relation = Relation::singleton;
        return c;
    }
    if (!e.reliable || !e.sce_star || e.best_proper.empty()) return c;
    const auto* parent = ledger.find(e.best_proper);
    const auto* weak = ledger.find(Subset{e.added});
    if (!parent || !weak || !parent->reliable || !weak->reliable || !weak->c1) return c;

    double parts = 0.0;
    bool have_parts = true;
    for (auto j : e.subset) {
        const auto* s = ledger.find(Subset{j});
        if (!s || s->skipped) have_parts = false;
        else parts += s->ce_drop;
    }
    if (have_parts && parts > 0.0) c.joint_ratio = e.ce_drop / parts;

    c.successive_ratio = weak->ce_drop > 0.0 ? e.sce_star_drop / weak->ce_drop
                                             : std::numeric_limits<double>::infinity();
    const bool strong_excess = e.sce_star->status == C1Status::confirmed &&
                               e.sce_star->excess_sd >= cfg.interaction_min_sd;
    if (strong_excess && c.successive_ratio >= cfg.r_int)
        c.relation = Relation::interaction;
    else if (weak->c1->status != C1Status::confirmed)
        c.relation = Relation::no_joint_effect;
    else if (c.successive_ratio >= cfg.eco_low)
        c.relation = Relation::ecological;
    else
        c.relation = Relation::non_coexistent;
    return c;
}

struct ConfirmedFactor {
    Subset subset;
    std::size_t order = 0;
    std::string classification;  // "order-1 major factor" or "order-k major factor (interaction)"
};

struct Collection {
    std::vector<std::size_t> features;
    std::vector<Subset> units;
    double ce = std::numeric_limits<double>::quiet_NaN();  // ranking score H[Y | collection]
    std::string score_method;                              // "product" or "fused"
};

struct PairRelation {
    Subset pair;
    Classification classification;
};

struct ExcludedSubset {
    Subset subset;
    std::string reason;
};

struct MajorFactorReport {
    std::vector<ConfirmedFactor> confirmed;
    std::optional<Collection> chief;
    std::vector<Collection> alternatives;
    std::vector<Subset> interactions;
    std::vector<PairRelation> relations;
    std::vector<ExcludedSubset> excluded;
    std::vector<std::size_t> unreliable_orders;
};

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

/// Maximal cliques of a small compatibility graph (Bron-Kerbosch, no pivot).
inline void maximal_cliques(const std::vector<std::vector<bool>>& adj, std::vector<std::size_t> r,
                            std::vector<std::size_t> p, std::vector<std::size_t> x,
                            std::vector<std::vector<std::size_t>>& out) {
    if (p.empty() && x.empty()) {
        out.push_back(r);
        return;
    }
    while (!p.empty()) {
        const auto v = p.front();
        std::vector<std::size_t> r2 = r, p2, x2;
        r2.push_back(v);
        for (auto u : p)
            if (adj[v][u]) p2.push_back(u);
        for (auto u : x)
            if (adj[v][u]) x2.push_back(u);
        maximal_cliques(adj, r2, p2, x2, out);
        p.erase(p.begin());
        x.push_back(v);
    }
}

inline void score_collection(Collection& c, const CategorizedData& data, const ProtocolConfig& cfg,
                             bool product, std::uint64_t seed) {
    if (product) {
        const auto series = pick(data, c.features);
        c.ce = ce_of(series, data.response);
        c.score_method = "product";
        return;
    }
    std::vector<std::vector<double>> cols;
    for (auto j : c.features) {
        if (!data.raw.empty() && !data.raw[j].empty()) {
            cols.push_back(data.raw[j]);
        } else {
            const auto labels = data.covariates[j].labels();
            cols.emplace_back(labels.begin(), labels.end());
        }
    }
    std::size_t k = cfg.fuse_clusters;
    if (k == 0)
        for (const auto& s : data.covariates) k = std::max(k, s.cardinality());
    KMeansOptions opt;
    opt.seed = seed;
    opt.standardize = true;
    opt.order_by_centroid = true;
    opt.threads = cfg.threads;
    const auto fused = kmeans_fit(PointMatrix::from_columns(cols), std::min(k, data.size()), opt).assignments;
    c.ce = conditional_entropy(crosstab(fused, data.response));
    c.score_method = "fused";
}

} // namespace detail

/// Assembles major factors from the ledger:
///  1. order-1 candidates: reliable, C1 confirmed, CE-drop at least
///     min_relative_drop times the largest singleton drop;
///  2. higher-order subsets classified as interactions, C1 confirmed and
///     reliable, become order-k factors;
///  3. candidates and confirmed subsets sharing a feature merge into groups;
///  4. two groups conflict when any cross pair of their features was
///     classified non-coexistent;
///  5. maximal conflict-free sets of groups are the collections, ranked by
///     H[Y | collection] (product table when every collection's table passes
///     the cell floor, else the K-means fused feature); the lowest is chief.
inline MajorFactorReport select_major_factors(const Ledger& ledger, const CategorizedData& data,
                                              const ProtocolConfig& cfg) {
    MajorFactorReport rep;
    const std::size_t p = data.covariates.size();

    std::map<std::size_t, std::pair<std::size_t, std::size_t>> per_order;  // order -> (reliable, total)
    for (const auto& e : ledger.entries) {
        auto& po = per_order[e.order];
        po.second++;
        if (e.reliable) po.first++;
    }
    for (const auto& [k, po] : per_order)
        if (po.first == 0) rep.unreliable_orders.push_back(k);

    double max_drop = 0.0;
    for (const auto& e : ledger.entries)
        if (e.order == 1 && e.reliable) max_drop = std::max(max_drop, e.ce_drop);

    std::vector<bool> candidate(p, false);
    for (const auto& e : ledger.entries) {
        if (e.order != 1) continue;
        std::string reason;
        if (e.skipped || !e.reliable) reason = "dimension-unreliable";
        else if (!e.c1 || e.c1->status != C1Status::confirmed) reason = "C1 not confirmed";
        else if (e.ce_drop < cfg.min_relative_drop * max_drop) reason = "CE-drop below relative threshold";
        if (reason.empty())
            candidate[e.subset[0]] = true;
        else
            rep.excluded.push_back({e.subset, reason});
    }

    std::vector<Subset> units;
    for (std::size_t j = 0; j < p; ++j)
        if (candidate[j]) units.push_back({j});
    for (const auto& e : ledger.entries)
        if (e.order == 1 && candidate[e.subset[0]])
            rep.confirmed.push_back({e.subset, 1, "order-1 major factor"});

    std::map<std::pair<std::size_t, std::size_t>, Relation> pair_relation;
    for (const auto& e : ledger.entries) {
        if (e.order < 2) continue;
        const auto c = classify_subset(e, ledger, cfg);
        if (e.order == 2) {
            rep.relations.push_back({e.subset, c});
            pair_relation[{e.subset[0], e.subset[1]}] = c.relation;
        }
        if (c.relation != Relation::interaction) continue;
        rep.interactions.push_back(e.subset);
        if (e.c1 && e.c1->status == C1Status::confirmed) {
            units.push_back(e.subset);
            rep.confirmed.push_back({e.subset, e.order, "order-" + std::to_string(e.order) +
                                                            " major factor (interaction)"});
        }
    }
    std::sort(rep.relations.begin(), rep.relations.end(),
              [](const auto& a, const auto& b) { return a.pair < b.pair; });
    if (units.empty()) return rep;

    detail::UnionFind uf(p);
    std::vector<bool> used(p, false);
    for (const auto& u : units)
        for (auto j : u) {
            used[j] = true;
            uf.unite(u[0], j);
        }
    std::map<std::size_t, std::size_t> group_of_root;
    std::vector<std::vector<std::size_t>> group_features;
    for (std::size_t j = 0; j < p; ++j) {
        if (!used[j]) continue;
        const auto r = uf.find(j);
        if (!group_of_root.count(r)) {
            group_of_root[r] = group_features.size();
            group_features.emplace_back();
        }
        group_features[group_of_root[r]].push_back(j);
    }
    const std::size_t g = group_features.size();
    std::vector<std::vector<bool>> compatible(g, std::vector<bool>(g, true));
    for (std::size_t a = 0; a < g; ++a)
        for (std::size_t b = 0; b < g; ++b) {
            if (a == b) {
                compatible[a][b] = false;
                continue;
            }
            for (auto i : group_features[a])
                for (auto j : group_features[b]) {
                    const auto it = pair_relation.find({std::min(i, j), std::max(i, j)});
                    if (it != pair_relation.end() && it->second == Relation::non_coexistent) compatible[a][b] = false;
                }
        }
    std::vector<std::size_t> all(g);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> cliques;
    detail::maximal_cliques(compatible, {}, all, {}, cliques);

    std::vector<Collection> collections;
    for (const auto& cl : cliques) {
        Collection c;
        for (auto gi : cl) c.features.insert(c.features.end(), group_features[gi].begin(), group_features[gi].end());
        std::sort(c.features.begin(), c.features.end());
        for (const auto& u : units)
            if (std::includes(c.features.begin(), c.features.end(), u.begin(), u.end())) c.units.push_back(u);
        collections.push_back(std::move(c));
    }

    bool product = true;
    for (const auto& c : collections) {
        const auto table = crosstab(detail::pick(data, c.features), data.response);
        const double avg = static_cast<double>(data.size()) /
                           (static_cast<double>(table.rows()) * static_cast<double>(table.cols()));
        if (avg < cfg.cell_floor) product = false;
    }
    const auto fuse_seed = detail::stage_seed(cfg.seed, detail::kTagFuse);
    for (std::size_t i = 0; i < collections.size(); ++i)
        detail::score_collection(collections[i], data, cfg, product, derive_seed(fuse_seed, i));
    std::sort(collections.begin(), collections.end(), [](const auto& a, const auto& b) {
        if (a.ce != b.ce) return a.ce < b.ce;
        return a.features < b.features;
    });
    rep.chief = collections.front();
    rep.alternatives.assign(collections.begin() + 1, collections.end());
    return rep;
}

struct GridLevel {
    std::size_t k = 0;
    CategoricalSeries series;
};

/// K-means categorizations of one axis for every k on the ladder.
inline std::vector<GridLevel> kmeans_ladder(const PointMatrix& points, const std::vector<std::size_t>& ladder,
                                            std::uint64_t seed, bool standardize = false) {
    detail::require_config(!ladder.empty(), "ladder is empty");
    std::vector<GridLevel> out;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        KMeansOptions opt;
        opt.seed = derive_seed(seed, i);
        opt.standardize = standardize;
        opt.order_by_centroid = true;
        out.push_back({ladder[i], kmeans_fit(points, ladder[i], opt).assignments});
    }
    return out;
}

struct GridCell {
    std::size_t k_y = 0;
    std::size_t k_x = 0;
    EntropyReport report;
    C1Verdict verdict;
};

/// I[Y;X] with its mimicry band for every pair of response and covariate
/// categorizations. Cell (i, j) draws its band from derive_seed(opt.seed, i * nx + j).
inline std::vector<GridCell> mi_grid(const std::vector<GridLevel>& y_levels, const std::vector<GridLevel>& x_levels,
                                     const NullOptions& opt) {
    detail::require_config(!y_levels.empty() && !x_levels.empty(), "grid ladders are empty");
    std::vector<GridCell> out(y_levels.size() * x_levels.size());
    parallel_for(out.size(), opt.threads, [&](std::size_t c) {
        const auto i = c / x_levels.size();
        const auto j = c % x_levels.size();
        const auto table = crosstab(x_levels[j].series, y_levels[i].series);
        GridCell cell;
        cell.k_y = y_levels[i].k;
        cell.k_x = x_levels[j].k;
        cell.report = measure(table);
        NullOptions inner{opt.replicates, derive_seed(opt.seed, c), 1};
        cell.verdict = c1_test(cell.report.mutual_info, null_band(table, Statistic::mutual_information, inner));
        out[c] = std::move(cell);
    });
    return out;
}

inline std::vector<GridCell> mi_grid(const PointMatrix& y, const PointMatrix& x, const std::vector<std::size_t>& y_ladder,
                                     const std::vector<std::size_t>& x_ladder, const NullOptions& opt) {
    const auto grid_seed = detail::stage_seed(opt.seed, detail::kTagGrid);
    const auto ys = kmeans_ladder(y, y_ladder, derive_seed(grid_seed, 0));
    const auto xs = kmeans_ladder(x, x_ladder, derive_seed(grid_seed, 1));
    return mi_grid(ys, xs, opt);
}

namespace detail {

inline nlohmann::json number_or_null(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return nullptr;
    return x > 0 ? "inf" : "-inf";
}

inline std::string c1_status_of(const SubsetLedgerEntry& e) {
    if (e.skipped) return "skipped";
    if (!e.reliable) return "unreliable";
    if (!e.c1) return "untested";
    return to_string(e.c1->status);
}

inline nlohmann::json names_of(const Subset& s, const std::vector<std::string>& names) {
    auto j = nlohmann::json::array();
    for (auto i : s) j.push_back(names[i]);
    return j;
}

} // namespace detail

/// Ledger table: order, subset, ce, ce_drop, sce_drop, sce_star_drop, rows, avg_cell, c1_status.
inline std::string ledger_tsv(const Ledger& ledger) {
    auto num = [](double x) { return std::isnan(x) ? std::string("NA") : detail::format_fixed(x); };
    std::string out = "order\tsubset\tce\tce_drop\tsce_drop\tsce_star_drop\trows\tavg_cell\tc1_status\n";
    for (const auto& e : ledger.entries) {
        out += std::to_string(e.order) + '\t' + subset_label(e.subset, ledger.names) + '\t' + num(e.ce) + '\t' +
               num(e.ce_drop) + '\t' + num(e.sce_drop) + '\t' + num(e.sce_star_drop) + '\t' +
               std::to_string(e.rows) + '\t' + num(e.avg_cell) + '\t' + detail::c1_status_of(e) + '\n';
    }
    return out;
}

inline nlohmann::json ledger_json(const Ledger& ledger) {
    auto entries = nlohmann::json::array();
    for (const auto& e : ledger.entries) {
        nlohmann::json j{{"order", e.order},
                         {"subset", detail::names_of(e.subset, ledger.names)},
                         {"ce", detail::number_or_null(e.ce)},
                         {"mi", detail::number_or_null(e.mi)},
                         {"reference", detail::number_or_null(e.reference)},
                         {"ce_drop", detail::number_or_null(e.ce_drop)},
                         {"sce_drop", detail::number_or_null(e.sce_drop)},
                         {"sce_star_drop", detail::number_or_null(e.sce_star_drop)},
                         {"synthetic_noise", e.synthetic_noise},
                         {"rows", e.rows},
                         {"cols", e.cols},
                         {"avg_cell", e.avg_cell},
                         {"reliable", e.reliable},
                         {"skipped", e.skipped},
                         {"c1_status", detail::c1_status_of(e)}};
        if (e.c1) j["c1"] = *e.c1;
        if (e.sce_star) j["sce_star"] = *e.sce_star;
        entries.push_back(std::move(j));
    }
    return nlohmann::json{{"reference", ledger.reference}, {"entries", std::move(entries)}};
}

inline nlohmann::json report_json(const MajorFactorReport& rep, const std::vector<std::string>& names) {
    auto collection = [&](const Collection& c) {
        auto units = nlohmann::json::array();
        for (const auto& u : c.units) units.push_back(detail::names_of(u, names));
        return nlohmann::json{{"features", detail::names_of(c.features, names)},
                              {"units", std::move(units)},
                              {"ce", detail::number_or_null(c.ce)},
                              {"score", c.score_method}};
    };
    nlohmann::json j;
    j["chief"] = rep.chief ? collection(*rep.chief) : nlohmann::json(nullptr);
    j["alternatives"] = nlohmann::json::array();
    for (const auto& c : rep.alternatives) j["alternatives"].push_back(collection(c));
    j["interactions"] = nlohmann::json::array();
    for (const auto& s : rep.interactions) j["interactions"].push_back(detail::names_of(s, names));
    j["confirmed"] = nlohmann::json::array();
    for (const auto& f : rep.confirmed)
        j["confirmed"].push_back(
            {{"subset", detail::names_of(f.subset, names)}, {"order", f.order}, {"classification", f.classification}});
    j["relations"] = nlohmann::json::array();
    for (const auto& r : rep.relations)
        j["relations"].push_back({{"pair", detail::names_of(r.pair, names)},
                                  {"relation", to_string(r.classification.relation)},
                                  {"successive_ratio", detail::number_or_null(r.classification.successive_ratio)},
                                  {"joint_ratio", detail::number_or_null(r.classification.joint_ratio)}});
    j["excluded"] = nlohmann::json::array();
    for (const auto& x : rep.excluded)
        j["excluded"].push_back({{"subset", detail::names_of(x.subset, names)}, {"reason", x.reason}});
    j["unreliable_orders"] = rep.unreliable_orders;
    return j;
}

} // namespace ceda
