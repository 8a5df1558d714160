#pragma once

// Seeded generators for the simulated Re-Co dynamics used throughout the test
// suites, plus the analytic Gaussian entropy oracles.
//
//   ex1           Y ~ N(0,1) for V1 = 0 and N(gap,1) for V1 = 1, N/2 each.
//   ex2           m-dim N(0, S(rho0)) for V1 = 0 and N(0, S(rho1)) for V1 = 1,
//                 S(r) the compound-symmetry correlation matrix.
//   ex2star       V1 = 0: equal-weight mixture of N(mu_a, I) and N(mu_b, I);
//                 V1 = 1: the normal with the mixture's mean and covariance,
//                 mean (mu_a+mu_b)/2, covariance I + d d'/4 with d = mu_a - mu_b.
//                 Setting 1: mu = (0.5,0.5), (-0.5,0.5). Setting 2: (-1,-1), (1,1).
//   ex3_rho       (Y, X) bivariate normal, unit variances, correlation rho.
//   ex3_halfsine  X ~ U(0,1), Y = sin(pi X) + noise Z.
//   ex3_fullsine  X ~ U(0,1), Y = sin(2 pi X - pi/2) + noise Z (one full period,
//                 symmetric about X = 1/2 so corr(Y, X) = 0).
//   ex4           X1..X4 iid U(0,1), Y = X1 + sin(2 pi (X2 + X3)) + noise Z.
//   ex5           X1..X4 iid U(0,1), Y = X1 + sin(2 pi (X2 + X3 + X4)) + noise Z.
//   ex6           (X1..X5, X7..X10) ~ N(0, S), S unit diagonal with 0.2 off it;
//                 X6 = (X1 + .. + X5 + Z'/10) / 3; Y = X1 + X2 + X3 + noise Z.
//
// Z, Z' are independent standard normals; `noise` defaults to 0.1.

#include "ceda/dataset.hpp"
#include "ceda/error.hpp"
#include "ceda/rng.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ceda {

enum class ExampleId { ex1, ex2, ex2star, ex3_rho, ex3_halfsine, ex3_fullsine, ex4, ex5, ex6 };

inline std::string to_string(ExampleId id) {
    switch (id) {
    case ExampleId::ex1: return "ex1";
    case ExampleId::ex2: return "ex2";
    case ExampleId::ex2star: return "ex2star";
    case ExampleId::ex3_rho: return "ex3_rho";
    case ExampleId::ex3_halfsine: return "ex3_halfsine";
    case ExampleId::ex3_fullsine: return "ex3_fullsine";
    case ExampleId::ex4: return "ex4";
    case ExampleId::ex5: return "ex5";
    case ExampleId::ex6: return "ex6";
    }
    return "?";
}

inline ExampleId parse_example(std::string_view s) {
    for (auto id : {ExampleId::ex1, ExampleId::ex2, ExampleId::ex2star, ExampleId::ex3_rho,
                    ExampleId::ex3_halfsine, ExampleId::ex3_fullsine, ExampleId::ex4, ExampleId::ex5,
                    ExampleId::ex6})
        if (to_string(id) == s) return id;
    throw ConfigError("unknown example \"" + std::string(s) + "\"");
}

struct GeneratorParams {
    double rho0 = 0.5;
    double rho1 = 0.7;
    double rho = 0.5;
    std::size_t dim = 4;        // ex2 response dimension
    int mixture_setting = 1;    // ex2star
    double noise = 0.1;
    double mean_gap = 1.0;      // ex1
};

struct GeneratorSpec {
    ExampleId example = ExampleId::ex1;
    std::size_t n = 1000;
    GeneratorParams params;
    std::uint64_t seed = 0;
};

/// Row-major d x d symmetric matrix.
struct SymMatrix {
    std::size_t dim = 0;
    std::vector<double> a;

    double operator()(std::size_t i, std::size_t j) const noexcept { return a[i * dim + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return a[i * dim + j]; }

    static SymMatrix compound_symmetry(std::size_t d, double rho, double var = 1.0) {
        SymMatrix m{d, std::vector<double>(d * d, rho * var)};
        for (std::size_t i = 0; i < d; ++i) m(i, i) = var;
        return m;
    }
};

/// Lower-triangular L with L L' = S. Throws DataError if S is not positive definite.
inline SymMatrix cholesky(const SymMatrix& s) {
    const std::size_t d = s.dim;
    detail::require_data(s.a.size() == d * d && d >= 1, "covariance shape mismatch");
    SymMatrix l{d, std::vector<double>(d * d, 0.0)};
    for (std::size_t j = 0; j < d; ++j) {
        double diag = s(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        detail::require_data(diag > 0.0, "covariance matrix is not positive definite");
        l(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = s(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / l(j, j);
        }
    }
    return l;
}

/// Differential entropy of N(mu, cov) in nats: ln det(cov)/2 + d(1 + ln 2 pi)/2.
inline double gaussian_entropy(const SymMatrix& cov) {
    const auto l = cholesky(cov);
    double log_det = 0.0;
    for (std::size_t i = 0; i < cov.dim; ++i) log_det += 2.0 * std::log(l(i, i));
    const double d = static_cast<double>(cov.dim);
    return 0.5 * log_det + 0.5 * d * (1.0 + std::log(2.0 * std::numbers::pi));
}

struct TheoreticalEx1 {
    double h_y = 0.0;
    double h_y_given_v = 0.0;
    double mutual_info = 0.0;
};

/// Entropies of the equal-weight mixture N(0,1), N(gap,1): H[Y] by composite
/// Simpson quadrature of -f ln f, H[Y|V1] by the Gaussian formula.
inline TheoreticalEx1 theoretical_ex1(double gap = 1.0) {
    const double lo = std::min(0.0, gap) - 14.0;
    const double hi = std::max(0.0, gap) + 14.0;
    const std::size_t intervals = 200000;
    const double h = (hi - lo) / static_cast<double>(intervals);
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi);
    auto integrand = [&](double y) {
        const double a = std::log(0.5) + log_norm - 0.5 * y * y;
        const double b = std::log(0.5) + log_norm - 0.5 * (y - gap) * (y - gap);
        const double m = std::max(a, b);
        const double log_f = m + std::log(std::exp(a - m) + std::exp(b - m));
        return -std::exp(log_f) * log_f;
    };
    double s = integrand(lo) + integrand(hi);
    for (std::size_t i = 1; i < intervals; ++i)
        s += (i % 2 ? 4.0 : 2.0) * integrand(lo + h * static_cast<double>(i));
    TheoreticalEx1 t;
    t.h_y = s * h / 3.0;
    t.h_y_given_v = 0.5 * (1.0 + std::log(2.0 * std::numbers::pi));
    t.mutual_info = t.h_y - t.h_y_given_v;
    return t;
}

namespace detail {

inline void mvn_draw(const SymMatrix& chol, Rng& rng, std::span<double> out) {
    std::vector<double> z(chol.dim);
    for (auto& v : z) v = rng.normal();
    for (std::size_t i = 0; i < chol.dim; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += chol(i, k) * z[k];
        out[i] = s;
    }
}

inline void require_corr(double r, const char* what) {
    require_config(r > -1.0 && r < 1.0, std::string(what) + " must lie in (-1, 1)");
}

} // namespace detail

/// Draws one dataset. The response column comes first ("Y", or "Y1".."Ym").
inline Dataset sample(const GeneratorSpec& spec) {
    detail::require_config(spec.n >= 1, "sample size must be at least 1");
    const auto& p = spec.params;
    const std::size_t n = spec.n;
    Rng rng(spec.seed);
    Dataset ds;
    constexpr double pi = std::numbers::pi;

    switch (spec.example) {
    case ExampleId::ex1: {
        std::vector<double> y(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            const bool second = i >= n / 2;
            v[i] = second ? 1.0 : 0.0;
            y[i] = rng.normal() + (second ? p.mean_gap : 0.0);
        }
        ds.add("Y", std::move(y));
        ds.add("V1", std::move(v));
        break;
    }
    case ExampleId::ex2: {
        detail::require_corr(p.rho0, "rho0");
        detail::require_corr(p.rho1, "rho1");
        detail::require_config(p.dim >= 1, "dim must be at least 1");
        const auto l0 = cholesky(SymMatrix::compound_symmetry(p.dim, p.rho0));
        const auto l1 = cholesky(SymMatrix::compound_symmetry(p.dim, p.rho1));
        std::vector<std::vector<double>> ys(p.dim, std::vector<double>(n));
        std::vector<double> v(n), draw(p.dim);
        for (std::size_t i = 0; i < n; ++i) {
            const bool second = i >= n / 2;
            v[i] = second ? 1.0 : 0.0;
            detail::mvn_draw(second ? l1 : l0, rng, draw);
            for (std::size_t j = 0; j < p.dim; ++j) ys[j][i] = draw[j];
        }
        for (std::size_t j = 0; j < p.dim; ++j) ds.add("Y" + std::to_string(j + 1), std::move(ys[j]));
        ds.add("V1", std::move(v));
        break;
    }
    case ExampleId::ex2star: {
        detail::require_config(p.mixture_setting == 1 || p.mixture_setting == 2, "mixture_setting must be 1 or 2");
        const double ma[2] = {p.mixture_setting == 1 ? 0.5 : -1.0, p.mixture_setting == 1 ? 0.5 : -1.0};
        const double mb[2] = {p.mixture_setting == 1 ? -0.5 : 1.0, p.mixture_setting == 1 ? 0.5 : 1.0};
        const double d0 = ma[0] - mb[0], d1 = ma[1] - mb[1];
        SymMatrix cov{2, {1.0 + d0 * d0 / 4, d0 * d1 / 4, d0 * d1 / 4, 1.0 + d1 * d1 / 4}};
        const auto lm = cholesky(cov);
        const double centre[2] = {(ma[0] + mb[0]) / 2, (ma[1] + mb[1]) / 2};
        std::vector<double> y1(n), y2(n), v(n), draw(2);
        for (std::size_t i = 0; i < n; ++i) {
            const bool second = i >= n / 2;
            v[i] = second ? 1.0 : 0.0;
            if (!second) {
                const double* mu = rng.uniform() < 0.5 ? ma : mb;
                y1[i] = mu[0] + rng.normal();
                y2[i] = mu[1] + rng.normal();
            } else {
                detail::mvn_draw(lm, rng, draw);
                y1[i] = centre[0] + draw[0];
                y2[i] = centre[1] + draw[1];
            }
        }
        ds.add("Y1", std::move(y1));
        ds.add("Y2", std::move(y2));
        ds.add("V1", std::move(v));
        break;
    }
    case ExampleId::ex3_rho: {
        detail::require_corr(p.rho, "rho");
        std::vector<double> y(n), x(n);
        const double c = std::sqrt(1.0 - p.rho * p.rho);
        for (std::size_t i = 0; i < n; ++i) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            y[i] = z1;
            x[i] = p.rho * z1 + c * z2;
        }
        ds.add("Y", std::move(y));
        ds.add("X", std::move(x));
        break;
    }
    case ExampleId::ex3_halfsine:
    case ExampleId::ex3_fullsine: {
        const bool full = spec.example == ExampleId::ex3_fullsine;
        std::vector<double> y(n), x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.uniform();
            const double f = full ? std::sin(2.0 * pi * x[i] - pi / 2.0) : std::sin(pi * x[i]);
            y[i] = f + p.noise * rng.normal();
        }
        ds.add("Y", std::move(y));
        ds.add("X", std::move(x));
        break;
    }
    case ExampleId::ex4:
    case ExampleId::ex5: {
        std::vector<std::vector<double>> xs(4, std::vector<double>(n));
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& col : xs) col[i] = rng.uniform();
            double inner = xs[1][i] + xs[2][i];
            if (spec.example == ExampleId::ex5) inner += xs[3][i];
            y[i] = xs[0][i] + std::sin(2.0 * pi * inner) + p.noise * rng.normal();
        }
        ds.add("Y", std::move(y));
        for (std::size_t j = 0; j < 4; ++j) ds.add("X" + std::to_string(j + 1), std::move(xs[j]));
        break;
    }
    case ExampleId::ex6: {
        const auto l = cholesky(SymMatrix::compound_symmetry(9, 0.2));
        std::vector<std::vector<double>> xs(10, std::vector<double>(n));
        std::vector<double> y(n), draw(9);
        static constexpr std::size_t slot[9] = {0, 1, 2, 3, 4, 6, 7, 8, 9};
        for (std::size_t i = 0; i < n; ++i) {
            detail::mvn_draw(l, rng, draw);
            for (std::size_t k = 0; k < 9; ++k) xs[slot[k]][i] = draw[k];
            const double s5 = draw[0] + draw[1] + draw[2] + draw[3] + draw[4];
            xs[5][i] = (s5 + rng.normal() / 10.0) / 3.0;
            y[i] = draw[0] + draw[1] + draw[2] + p.noise * rng.normal();
        }
        ds.add("Y", std::move(y));
        for (std::size_t j = 0; j < 10; ++j) ds.add("X" + std::to_string(j + 1), std::move(xs[j]));
        break;
    }
    }
    return ds;
}

} // namespace ceda
