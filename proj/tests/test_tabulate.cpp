#include "ceda/genlab.hpp"
#include "ceda/categorize.hpp"
#include "ceda/rng.hpp"
#include "ceda/tabulate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace ceda;

namespace {

// Plug-in entropy of a multiset of keys, straight from the definition.
template <class Key>
double plugin_entropy(const std::vector<Key>& keys) {
    std::map<Key, double> freq;
    for (const auto& k : keys) freq[k] += 1.0;
    const double n = static_cast<double>(keys.size());
    double h = 0.0;
    for (const auto& [k, c] : freq) h -= c / n * std::log(c / n);
    return h;
}

CategoricalSeries random_series(Rng& rng, std::size_t n, std::size_t card) {
    std::vector<Label> v(n);
    for (auto& x : v) x = static_cast<Label>(rng.below(card));
    return CategoricalSeries(std::move(v), card);
}

} // namespace

TEST(Tabulate, IndependentUniformCellsHaveZeroMutualInformation) {
    // every (a, y) combination exactly once
    std::vector<Label> a, y;
    for (Label i = 0; i < 3; ++i)
        for (Label j = 0; j < 4; ++j) {
            a.push_back(i);
            y.push_back(j);
        }
    const auto t = crosstab(CategoricalSeries(a, 3), CategoricalSeries(y, 4));
    EXPECT_NEAR(column_margin_entropy(t), std::log(4.0), 1e-12);
    EXPECT_NEAR(conditional_entropy(t), std::log(4.0), 1e-12);
    EXPECT_EQ(mutual_information(t), 0.0);
}

TEST(Tabulate, IdentityCovariateRemovesAllEntropy) {
    std::vector<Label> y{0, 1, 2, 2, 1, 0, 0};
    const auto t = crosstab(CategoricalSeries(y, 3), CategoricalSeries(y, 3));
    EXPECT_NEAR(conditional_entropy(t), 0.0, 1e-15);
    EXPECT_NEAR(mutual_information(t), column_margin_entropy(t), 1e-15);
}

TEST(Tabulate, EmptyResponseColumnsKeptRowsDropped) {
    const auto t = crosstab(CategoricalSeries({0, 0, 3}, 5), CategoricalSeries({1, 1, 1}, 4));
    EXPECT_EQ(t.rows(), 2u);
    EXPECT_EQ(t.cols(), 4u);
    EXPECT_EQ(t.total(), 3u);
    EXPECT_EQ(t.count(0, 1), 2u);
    EXPECT_EQ(t.count(1, 1), 1u);
    EXPECT_EQ(t.row_key(1), (ContingencyTable::RowKey{3}));
}

TEST(Tabulate, RejectsBadSeries) {
    EXPECT_THROW(CategoricalSeries({}, 2), DataError);
    EXPECT_THROW(CategoricalSeries({0, 2}, 2), DataError);
    EXPECT_THROW(crosstab(CategoricalSeries({0, 1}, 2), CategoricalSeries({0, 1, 1}, 2)), DataError);
}

TEST(Tabulate, JointEntropyOracle) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 200 + rng.below(800);
        const auto a1 = random_series(rng, n, 2 + rng.below(5));
        const auto a2 = random_series(rng, n, 2 + rng.below(5));
        // response correlated with a1
        std::vector<Label> yl(n);
        for (std::size_t i = 0; i < n; ++i) yl[i] = static_cast<Label>((a1[i] + rng.below(3)) % 6);
        const CategoricalSeries y(yl, 6);

        std::vector<std::pair<Label, Label>> ak;
        std::vector<std::tuple<Label, Label, Label>> aky;
        for (std::size_t i = 0; i < n; ++i) {
            ak.emplace_back(a1[i], a2[i]);
            aky.emplace_back(a1[i], a2[i], y[i]);
        }
        const double ce_oracle = plugin_entropy(aky) - plugin_entropy(ak);
        const double hy_oracle = plugin_entropy(std::vector<Label>(yl));

        const std::vector<CategoricalSeries> cov{a1, a2};
        const auto t = crosstab(std::span<const CategoricalSeries>(cov), y);
        EXPECT_NEAR(conditional_entropy(t), ce_oracle, 1e-10);
        EXPECT_NEAR(mutual_information(t), hy_oracle - ce_oracle, 1e-10);
        EXPECT_NEAR(row_margin_entropy(t), plugin_entropy(ak), 1e-10);

        // joint representation: crosstab of the product feature is the same table
        const auto fused = product_categories(std::span<const CategoricalSeries>(cov));
        EXPECT_NEAR(conditional_entropy(crosstab(fused, y)), conditional_entropy(t), 1e-10);
    }
}

TEST(Tabulate, RefinementNeverIncreasesConditionalEntropy) {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 20 + rng.below(300);
        const auto a = random_series(rng, n, 1 + rng.below(6));
        const auto b = random_series(rng, n, 1 + rng.below(6));
        const auto y = random_series(rng, n, 1 + rng.below(6));
        const std::vector<CategoricalSeries> ab{a, b};
        const double coarse = conditional_entropy(crosstab(a, y));
        const double fine = conditional_entropy(crosstab(std::span<const CategoricalSeries>(ab), y));
        ASSERT_LE(fine, coarse + 1e-12);
        ASSERT_GE(mutual_information(crosstab(a, y)), 0.0);
    }
}

TEST(Tabulate, MergingRowsNeverIncreasesMutualInformation) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 100 + rng.below(400);
        const std::size_t card = 2 + rng.below(8);
        const auto a = random_series(rng, n, card);
        const auto y = random_series(rng, n, 3);
        std::vector<Label> merged(a.labels().begin(), a.labels().end());
        for (auto& l : merged) l /= 2;
        const double fine = mutual_information(crosstab(a, y));
        const double coarse = mutual_information(crosstab(CategoricalSeries(merged, (card + 1) / 2), y));
        ASSERT_LE(coarse, fine + 1e-12);
    }
}

TEST(Tabulate, MutualInformationIsSymmetric) {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_series(rng, 500, 4);
        std::vector<Label> yl(500);
        for (std::size_t i = 0; i < 500; ++i) yl[i] = static_cast<Label>(rng.uniform() < 0.6 ? a[i] : rng.below(5));
        const CategoricalSeries y(yl, 5);
        EXPECT_NEAR(mutual_information(crosstab(a, y)), mutual_information(crosstab(y, a)), 1e-10);
    }
}

TEST(Tabulate, LargeKeySpaceFallsBackToSortedCoding) {
    // 5 features of cardinality 40 exceed the dense code limit
    Rng rng(3);
    std::vector<CategoricalSeries> cov;
    for (int j = 0; j < 5; ++j) cov.push_back(random_series(rng, 3000, 40));
    const auto y = random_series(rng, 3000, 3);
    const auto t = crosstab(std::span<const CategoricalSeries>(cov), y);
    EXPECT_EQ(t.total(), 3000u);
    EXPECT_TRUE(std::is_sorted(t.row_keys().begin(), t.row_keys().end()));
    // nearly every record its own row: CE close to zero
    EXPECT_LT(conditional_entropy(t), 0.01);
}

TEST(Tabulate, ExampleOneRecount) {
    // Y binned 1+10+1 against the binary V1: the table holds N records, every
    // response column sums to its bin count and each V1 row to N/2.
    const auto ds = sample({ExampleId::ex1, 20000, {}, 1});
    const auto& yv = ds.column("Y").reals();
    const auto y = apply_bins(yv, quantile_bins(yv, 10));
    std::vector<Label> v;
    for (double x : ds.column("V1").reals()) v.push_back(static_cast<Label>(x));
    const auto t = crosstab(CategoricalSeries(v, 2), y);
    EXPECT_EQ(t.rows(), 2u);
    EXPECT_EQ(t.cols(), 12u);
    EXPECT_EQ(t.row_sums()[0], 10000u);
    EXPECT_EQ(t.row_sums()[1], 10000u);
    const auto counts = y.counts();
    for (std::size_t c = 0; c < 12; ++c) EXPECT_EQ(t.col_sums()[c], counts[c]);
    // tail bins hold about 5% each
    EXPECT_NEAR(static_cast<double>(counts.front()) / 20000.0, 0.05, 0.001);
    const auto r = measure(t);
    EXPECT_NEAR(r.mutual_info, 0.107, 0.01);
    EXPECT_NEAR(r.avg_cell_count, 20000.0 / 24.0, 1e-9);
}

TEST(Tabulate, TsvListsEveryCell) {
    const auto t = crosstab(CategoricalSeries({0, 1, 1}, 2), CategoricalSeries({0, 0, 1}, 2));
    EXPECT_EQ(to_tsv(t, {"V1"}, {"y0", "y1"}), "V1\ty0\ty1\n0\t1\t0\n1\t1\t1\n");
}
