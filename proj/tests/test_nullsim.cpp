#include "ceda/categorize.hpp"
#include "ceda/genlab.hpp"
#include "ceda/nullsim.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ceda;

namespace {

ContingencyTable example_table() {
    // 3 rows x 4 columns, clearly dependent
    return ContingencyTable::from_rows({{30, 5, 5, 0}, {5, 20, 10, 5}, {0, 5, 15, 40}});
}

CategoricalSeries random_series(Rng& rng, std::size_t n, std::size_t card) {
    std::vector<Label> v(n);
    for (auto& x : v) x = static_cast<Label>(rng.below(card));
    return CategoricalSeries(std::move(v), card);
}

} // namespace

TEST(Rng, StreamsAreReproducibleAndDistinct) {
    auto a = Rng::stream(5, 0);
    auto b = Rng::stream(5, 0);
    auto c = Rng::stream(5, 1);
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
}

TEST(Rng, BinomialMomentsBothRegimes) {
    Rng rng(17);
    for (auto [n, p] : {std::pair<std::uint64_t, double>{20, 0.3}, {5000, 0.4}, {100000, 0.001}}) {
        const int m = 20000;
        double s = 0, s2 = 0;
        for (int i = 0; i < m; ++i) {
            const double x = static_cast<double>(rng.binomial(n, p));
            s += x;
            s2 += x * x;
        }
        const double mu = static_cast<double>(n) * p;
        const double var = mu * (1 - p);
        const double mean_hat = s / m;
        EXPECT_NEAR(mean_hat, mu, 4 * std::sqrt(var / m));
        EXPECT_NEAR(s2 / m - mean_hat * mean_hat, var, 0.05 * var);
    }
}

TEST(Mimic, PreservesColumnTotalsExactly) {
    const auto t = example_table();
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto m = mimic_table(t, rng);
        ASSERT_EQ(m.total(), t.total());
        ASSERT_EQ(m.cols(), t.cols());
        for (std::size_t c = 0; c < t.cols(); ++c) ASSERT_EQ(m.col_sums()[c], t.col_sums()[c]);
    }
}

TEST(Mimic, CellMeansWithinThreeSdOfMultinomialExpectation) {
    const auto t = example_table();
    const int draws = 5000;
    std::vector<double> sum(t.rows() * t.cols(), 0.0);
    Rng rng(2);
    const auto p = detail::row_proportions(t);
    for (int i = 0; i < draws; ++i) {
        const auto counts = detail::mimic_counts(t, p, rng);
        for (std::size_t k = 0; k < counts.size(); ++k) sum[k] += static_cast<double>(counts[k]);
    }
    for (std::size_t r = 0; r < t.rows(); ++r)
        for (std::size_t c = 0; c < t.cols(); ++c) {
            const double n = static_cast<double>(t.col_sums()[c]);
            const double expect = n * p[r];
            const double sd = std::sqrt(n * p[r] * (1 - p[r]) / draws);
            EXPECT_NEAR(sum[r * t.cols() + c] / draws, expect, 3 * sd + 1e-12) << "cell " << r << "," << c;
        }
}

TEST(NullBand, IdenticalAcrossThreadCounts) {
    const auto t = example_table();
    const auto one = null_band(t, Statistic::mutual_information, {500, 42, 1});
    const auto two = null_band(t, Statistic::mutual_information, {500, 42, 2});
    const auto eight = null_band(t, Statistic::mutual_information, {500, 42, 8});
    EXPECT_EQ(one.samples, two.samples);
    EXPECT_EQ(one.samples, eight.samples);
    EXPECT_EQ(one.q975, eight.q975);
    const auto other = null_band(t, Statistic::mutual_information, {500, 43, 1});
    EXPECT_NE(one.samples, other.samples);
}

TEST(NullBand, ConditionalEntropyBandSitsNearMarginEntropy) {
    const auto t = example_table();
    const auto b = null_band(t, Statistic::conditional_entropy, {400, 3, 1});
    EXPECT_LT(b.q975, column_margin_entropy(t) + 1e-12);
    EXPECT_GT(b.q025, conditional_entropy(t));
}

TEST(NullBand, ChiSquareOracleForBinaryCovariate) {
    // Under independence 2 N I is asymptotically chi-square with
    // (R-1)(C-1) degrees of freedom; for R = 2, C = 12 the 97.5% point is 21.920.
    const auto ds = sample({ExampleId::ex1, 20000, {}, 4});
    const auto& yv = ds.column("Y").reals();
    const auto y = apply_bins(yv, quantile_bins(yv, 10));
    std::vector<Label> v;
    for (double x : ds.column("V1").reals()) v.push_back(static_cast<Label>(x));
    const auto t = crosstab(CategoricalSeries(v, 2), y);
    const auto band = null_band(t, Statistic::mutual_information, {2000, 9, 1});
    const double two_n = 40000.0;
    EXPECT_NEAR(band.mean * two_n, 11.0, 0.6);
    EXPECT_NEAR(band.q975 * two_n, 21.920, 1.5);
    EXPECT_NEAR(band.q025 * two_n, 3.816, 0.6);
    const auto verdict = c1_test(mutual_information(t), band);
    EXPECT_EQ(verdict.status, C1Status::confirmed);
}

TEST(C1, BoundaryIsStrict) {
    NullBand b;
    b.replicates = 100;
    b.mean = 1.0;
    b.sd = 0.5;
    b.q025 = 0.2;
    b.q975 = 2.0;
    EXPECT_EQ(c1_test(2.0, b).status, C1Status::within_band);
    EXPECT_EQ(c1_test(std::nextafter(2.0, 3.0), b).status, C1Status::confirmed);
    EXPECT_EQ(c1_test(0.1, b).status, C1Status::below_band);
    EXPECT_DOUBLE_EQ(c1_test(2.0, b).excess_sd, 2.0);
    b.sd = 0.0;
    b.q025 = b.q975 = b.mean;
    EXPECT_TRUE(std::isinf(c1_test(1.5, b).excess_sd));
}

TEST(C1, FalseConfirmationRateUnderIndependence) {
    Rng rng(77);
    int confirmed = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto a = random_series(rng, 600, 4);
        const auto y = random_series(rng, 600, 5);
        const auto table = crosstab(a, y);
        const auto band = null_band(table, Statistic::mutual_information, {1000, 1000u + t, 1});
        confirmed += c1_test(mutual_information(table), band).status == C1Status::confirmed;
    }
    EXPECT_LE(static_cast<double>(confirmed) / trials, 0.07);
}

TEST(Localize, FlagsAboutFivePercentUnderIdenticalPopulations) {
    Rng rng(12);
    int flagged = 0, total = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = random_series(rng, 3000, 3);
        const auto y = random_series(rng, 3000, 10);
        const auto verdicts = localize_differences(crosstab(a, y), {400, 500u + rep, 1});
        for (const auto& v : verdicts) {
            flagged += v.flagged;
            ++total;
        }
    }
    const double rate = static_cast<double>(flagged) / total;
    EXPECT_GT(rate, 0.01);
    EXPECT_LT(rate, 0.12);
}

TEST(Localize, FlagsShiftedColumns) {
    // column 0 holds only row 0 records: its row entropy is far below the band
    const auto t = ContingencyTable::from_rows({{100, 50, 50}, {0, 50, 50}, {0, 50, 50}});
    const auto v = localize_differences(t, {500, 1, 1});
    EXPECT_TRUE(v[0].flagged);
    EXPECT_EQ(v[0].side, C1Status::below_band);
}

TEST(NoiseReference, NonIncreasingInDimension) {
    Rng rng(5);
    const auto a = random_series(rng, 2000, 12);
    const auto b = random_series(rng, 2000, 12);
    const auto y = random_series(rng, 2000, 12);
    std::vector<const CategoricalSeries*> templates{&a, &b};
    double prev = 1e9;
    for (std::size_t k = 0; k <= 3; ++k) {
        const double h = noise_padded_reference(templates, k, y, {50, 3, 1});
        EXPECT_LE(h, prev + 1e-12);
        prev = h;
    }
    EXPECT_NEAR(noise_padded_reference(templates, 0, y, {50, 3, 1}), column_margin_entropy(crosstab(a, y)), 1e-12);
}
