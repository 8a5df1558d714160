#include "ceda/genlab.hpp"
#include "ceda/numeric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ceda;

namespace {

double corr(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

double cov(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
}

} // namespace

TEST(GaussianEntropy, ClosedForms) {
    const double c = 0.5 * (1.0 + std::log(2.0 * std::numbers::pi));
    EXPECT_NEAR(gaussian_entropy(SymMatrix::compound_symmetry(1, 0.0)), c, 1e-12);
    // det of compound symmetry: (1 - rho)^(d-1) (1 + (d-1) rho)
    for (double rho : {0.5, 0.7}) {
        const double det = std::pow(1 - rho, 3) * (1 + 3 * rho);
        EXPECT_NEAR(gaussian_entropy(SymMatrix::compound_symmetry(4, rho)), 0.5 * std::log(det) + 4 * c, 1e-12);
    }
    EXPECT_NEAR(gaussian_entropy(SymMatrix::compound_symmetry(4, 0.5)), 5.0942, 5e-4);
    EXPECT_NEAR(gaussian_entropy(SymMatrix::compound_symmetry(4, 0.7)), 4.4355, 5e-4);
}

TEST(GaussianEntropy, RejectsNonPositiveDefinite) {
    EXPECT_THROW(cholesky(SymMatrix::compound_symmetry(3, -0.6)), DataError);
    EXPECT_THROW(cholesky(SymMatrix{2, {1, 2, 2, 1}}), DataError);
}

TEST(Cholesky, ReconstructsMatrix) {
    const auto s = SymMatrix::compound_symmetry(5, 0.3, 2.0);
    const auto l = cholesky(s);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            double v = 0;
            for (std::size_t k = 0; k < 5; ++k) v += l(i, k) * l(j, k);
            EXPECT_NEAR(v, s(i, j), 1e-12);
        }
}

TEST(TheoreticalEx1, MatchesIndependentQuadrature) {
    // reference values from scipy.integrate.quad on -f ln f
    const auto t = theoretical_ex1(1.0);
    EXPECT_NEAR(t.h_y, 1.5303600, 1e-6);
    EXPECT_NEAR(t.h_y_given_v, 1.4189385, 1e-6);
    EXPECT_NEAR(t.mutual_info, 0.1114215, 1e-6);
    // limits: no gap gives zero information, a huge gap gives ln 2
    EXPECT_NEAR(theoretical_ex1(0.0).mutual_info, 0.0, 1e-9);
    EXPECT_NEAR(theoretical_ex1(40.0).mutual_info, std::log(2.0), 1e-6);
}

TEST(Generators, DeterministicForSeed) {
    for (auto id : {ExampleId::ex1, ExampleId::ex2, ExampleId::ex2star, ExampleId::ex3_rho, ExampleId::ex3_halfsine,
                    ExampleId::ex3_fullsine, ExampleId::ex4, ExampleId::ex5, ExampleId::ex6}) {
        const auto a = sample({id, 300, {}, 8});
        const auto b = sample({id, 300, {}, 8});
        const auto c = sample({id, 300, {}, 9});
        ASSERT_EQ(a.names(), b.names());
        EXPECT_EQ(a.columns().front().reals(), b.columns().front().reals()) << to_string(id);
        EXPECT_NE(a.columns().front().reals(), c.columns().front().reals()) << to_string(id);
        EXPECT_EQ(a.rows(), 300u);
    }
}

TEST(Generators, Ex1GroupMeans) {
    const auto ds = sample({ExampleId::ex1, 40000, {}, 1});
    const auto& y = ds.column("Y").reals();
    std::vector<double> lo(y.begin(), y.begin() + 20000), hi(y.begin() + 20000, y.end());
    EXPECT_NEAR(mean(lo), 0.0, 0.03);
    EXPECT_NEAR(mean(hi), 1.0, 0.03);
    EXPECT_NEAR(sample_sd(hi), 1.0, 0.02);
}

TEST(Generators, Ex2Correlations) {
    const auto ds = sample({ExampleId::ex2, 40000, {}, 2});
    std::vector<double> a0, b0, a1, b1;
    const auto& v = ds.column("V1").reals();
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        auto& a = v[i] == 0 ? a0 : a1;
        auto& b = v[i] == 0 ? b0 : b1;
        a.push_back(ds.column("Y1").reals()[i]);
        b.push_back(ds.column("Y4").reals()[i]);
    }
    EXPECT_NEAR(corr(a0, b0), 0.5, 0.02);
    EXPECT_NEAR(corr(a1, b1), 0.7, 0.02);
}

TEST(Generators, Ex2StarMatchedMoments) {
    for (int setting : {1, 2}) {
        GeneratorSpec spec{ExampleId::ex2star, 80000, {}, 3};
        spec.params.mixture_setting = setting;
        const auto ds = sample(spec);
        std::vector<double> y1a, y2a, y1b, y2b;
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            const bool second = ds.column("V1").reals()[i] == 1.0;
            (second ? y1b : y1a).push_back(ds.column("Y1").reals()[i]);
            (second ? y2b : y2a).push_back(ds.column("Y2").reals()[i]);
        }
        EXPECT_NEAR(mean(y1a), mean(y1b), 0.03);
        EXPECT_NEAR(mean(y2a), mean(y2b), 0.03);
        EXPECT_NEAR(cov(y1a, y1a), cov(y1b, y1b), 0.05);
        EXPECT_NEAR(cov(y1a, y2a), cov(y1b, y2b), 0.05);
    }
}

TEST(Generators, Ex3Shapes) {
    GeneratorSpec spec{ExampleId::ex3_rho, 40000, {}, 4};
    spec.params.rho = 0.5;
    auto ds = sample(spec);
    EXPECT_NEAR(corr(ds.column("Y").reals(), ds.column("X").reals()), 0.5, 0.02);
    ds = sample({ExampleId::ex3_fullsine, 40000, {}, 4});
    EXPECT_NEAR(corr(ds.column("Y").reals(), ds.column("X").reals()), 0.0, 0.02);
    ds = sample({ExampleId::ex3_halfsine, 40000, {}, 4});
    EXPECT_NEAR(mean(ds.column("Y").reals()), 2.0 / std::numbers::pi, 0.01);
}

TEST(Generators, Ex4Formula) {
    const auto ds = sample({ExampleId::ex4, 5000, {}, 5});
    const auto& y = ds.column("Y").reals();
    std::vector<double> resid(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        resid[i] = y[i] - ds.column("X1").reals()[i] -
                   std::sin(2 * std::numbers::pi * (ds.column("X2").reals()[i] + ds.column("X3").reals()[i]));
    EXPECT_NEAR(mean(resid), 0.0, 0.01);
    EXPECT_NEAR(sample_sd(resid), 0.1, 0.005);
}

TEST(Generators, Ex6CovarianceOracle) {
    const std::size_t n = 200000;
    const auto ds = sample({ExampleId::ex6, n, {}, 6});
    // theoretical covariance of X1..X10
    SymMatrix s{10, std::vector<double>(100)};
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) s(i, j) = i == j ? 1.0 : 0.2;
    for (std::size_t i = 0; i < 10; ++i) {
        if (i == 5) continue;
        const double with_sum = i < 5 ? 1.0 + 4 * 0.2 : 5 * 0.2;
        s(5, i) = s(i, 5) = with_sum / 3.0;
    }
    s(5, 5) = (5.0 + 20 * 0.2 + 0.01) / 9.0;
    double frob = 0;
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) {
            const double d = cov(ds.column("X" + std::to_string(i + 1)).reals(),
                                 ds.column("X" + std::to_string(j + 1)).reals()) - s(i, j);
            frob += d * d;
        }
    EXPECT_LT(std::sqrt(frob), 0.05);
}

TEST(Generators, ParameterValidation) {
    GeneratorSpec spec{ExampleId::ex2, 100, {}, 1};
    spec.params.rho0 = 1.0;
    EXPECT_THROW(sample(spec), ConfigError);
    spec = {ExampleId::ex2star, 100, {}, 1};
    spec.params.mixture_setting = 3;
    EXPECT_THROW(sample(spec), ConfigError);
    EXPECT_THROW(sample({ExampleId::ex1, 0, {}, 1}), ConfigError);
    EXPECT_THROW(parse_example("ex7"), ConfigError);
}
