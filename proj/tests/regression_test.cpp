#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <unistd.h>

#include "garfield/regression.hpp"
#include "test_support.hpp"

using namespace garfield;
using garfield::testing::gr_values;
using garfield::testing::x_1_to_12;

namespace {

/// Closed-form simple regression: slope = Sxy / Sxx.
std::pair<double, double> simple_regression_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    long double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const long double slope = sxy / sxx;
    return {static_cast<double>(slope), static_cast<double>(my - slope * mx)};
}

AnalysisConfig default_config() { return AnalysisConfig{}; }

}  // namespace

TEST(YearIndex, OriginsAndSingleYear) {
    std::vector<int> years;
    for (int y = 2009; y <= 2020; ++y) years.push_back(y);
    EXPECT_EQ(year_index(years, 1), x_1_to_12());
    const auto zero = year_index(years, 0);
    EXPECT_EQ(zero.front(), 0.0);
    EXPECT_EQ(zero.back(), 11.0);
    const std::vector<int> one{2015};
    EXPECT_EQ(year_index(one, 1), std::vector<double>{1.0});

    const auto s = garfield::testing::precomputed_series("X", 2009, gr_values("DSJ"));
    EXPECT_EQ(year_index(s, default_config()), x_1_to_12());
}

TEST(FitLinear, ExactLine) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double xi : x) y.push_back(2 * xi + 1);
    const auto fit = fit_linear(x, y);
    EXPECT_NEAR(fit.coefficients[0], 2.0, 1e-12);
    EXPECT_NEAR(fit.coefficients[1], 1.0, 1e-12);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_EQ(fit.family.kind, FamilyKind::linear);
}

TEST(FitLinear, JessRowMatchesPublishedFitAndOracle) {
    const auto x = x_1_to_12();
    const auto y = gr_values("JESS");
    const auto fit = fit_linear(x, y);
    EXPECT_NEAR(fit.coefficients[0], -1.584, 0.01);
    EXPECT_NEAR(fit.coefficients[1], 19.691, 0.01);
    EXPECT_NEAR(fit.r_squared, 0.973, 0.01);
    const auto [slope, intercept] = simple_regression_oracle(x, y);
    EXPECT_NEAR(fit.coefficients[0], slope, 1e-12);
    EXPECT_NEAR(fit.coefficients[1], intercept, 1e-11);
}

TEST(FitPolynomial, IjemsQuarticMatchesPublishedCoefficients) {
    const auto fit = fit_polynomial(x_1_to_12(), gr_values("IJEMS"), 4);
    const std::array<double, 5> printed{-0.007, 0.216, -2.198, 7.642, 2.500};
    ASSERT_EQ(fit.coefficients.size(), 5u);
    for (std::size_t k = 0; k < 5; ++k)
        EXPECT_NEAR(fit.coefficients[k], printed[k], 0.05 * std::abs(printed[k])) << k;
    EXPECT_NEAR(fit.r_squared, 0.934, 0.01);

    // numpy.polyfit(X, Y, 4) on the same data.
    const std::array<double, 5> numpy{-7.2312062937062152e-03, 2.1609735172235114e-01, -2.1973598970474084e+00,
                                      7.6378663234914210e+00, 2.5067171717170402e+00};
    for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(fit.coefficients[k], numpy[k], 1e-9);
    EXPECT_NEAR(fit.r_squared, 0.9338858096334659, 1e-12);
}

TEST(FitPolynomial, ErrorsOnDuplicateXAndTooFewPoints) {
    const std::vector<double> dup{1, 1, 1, 1};
    const std::vector<double> y{1, 2, 3, 4};
    EXPECT_THROW((void)fit_linear(dup, y), FitError);
    const std::vector<double> x3{1, 2, 3};
    const std::vector<double> y3{1, 4, 9};
    EXPECT_THROW((void)fit_polynomial(x3, y3, 2), FitError);
    EXPECT_THROW((void)fit_polynomial(x3, y3, 0), FitError);
    const std::vector<double> constant{5, 5, 5, 5};
    EXPECT_THROW((void)fit_linear(y, constant), FitError);
}

TEST(FitLogarithmic, ExactAndPublished) {
    const auto x = x_1_to_12();
    std::vector<double> y;
    for (double xi : x) y.push_back(3 * std::log(xi) + 2);
    const auto exact = fit_logarithmic(x, y);
    EXPECT_NEAR(exact.coefficients[0], 3.0, 1e-12);
    EXPECT_NEAR(exact.coefficients[1], 2.0, 1e-12);
    EXPECT_NEAR(exact.r_squared, 1.0, 1e-12);

    const auto dsj = fit_logarithmic(x, gr_values("DSJ"));
    EXPECT_NEAR(dsj.coefficients[0], -5.332, 0.01 * 5.332);
    EXPECT_NEAR(dsj.coefficients[1], 15.635, 0.01 * 15.635);
    EXPECT_NEAR(dsj.r_squared, 0.953, 0.01);
    EXPECT_NEAR(dsj.coefficients[0], -5.333063949442444, 1e-11);
    EXPECT_NEAR(dsj.r_squared, 0.9525037699734528, 1e-12);

    const auto jsir = fit_logarithmic(x, gr_values("JSIR"));
    EXPECT_NEAR(jsir.coefficients[0], -7.096, 0.01 * 7.096);
    EXPECT_NEAR(jsir.coefficients[1], 18.849, 0.01 * 18.849);
    EXPECT_GT(jsir.r_squared, 0.95);

    const std::vector<double> bad{0, 1, 2};
    EXPECT_THROW((void)fit_logarithmic(bad, std::vector<double>{1, 2, 3}), FitError);
}

TEST(FitExponential, ExactPublishedAndHalving) {
    const auto x = x_1_to_12();
    std::vector<double> y;
    for (double xi : x) y.push_back(5 * std::exp(0.3 * xi));
    const auto exact = fit_exponential(x, y);
    EXPECT_NEAR(exact.coefficients[0], 5.0, 1e-11);
    EXPECT_NEAR(exact.coefficients[1], 0.3, 1e-12);
    EXPECT_NEAR(exact.r_squared, 1.0, 1e-12);
    EXPECT_EQ(exact.r_squared_space, R2Space::log);

    const auto jmp_y = gr_values("JMP");
    const auto jmp = fit_exponential(x, jmp_y);
    EXPECT_NEAR(jmp.coefficients[0], 21.38, 0.01 * 21.38);
    EXPECT_NEAR(jmp.r_squared, 0.873, 0.01);
    // Log-linear oracle: slope of ln Y on X.
    std::vector<double> ly;
    for (double v : jmp_y) ly.push_back(std::log(v));
    const auto [slope, intercept] = simple_regression_oracle(x, ly);
    EXPECT_NEAR(jmp.coefficients[1], slope, 1e-12);
    EXPECT_NEAR(jmp.coefficients[0], std::exp(intercept), 1e-10);
    EXPECT_NEAR(jmp.coefficients[1], -0.2050585739778298, 1e-12);
    EXPECT_LT(jmp.r_squared_original, jmp.r_squared + 0.2);

    std::vector<double> half = jmp_y;
    for (double& v : half) v /= 2;
    const auto halved = fit_exponential(x, half);
    EXPECT_NEAR(halved.coefficients[0], jmp.coefficients[0] / 2, 1e-10);
    EXPECT_NEAR(halved.coefficients[1], jmp.coefficients[1], 1e-12);

    const std::vector<double> nonpos{1, 0, 2};
    EXPECT_THROW((void)fit_exponential(std::vector<double>{1, 2, 3}, nonpos), FitError);
}

TEST(SelectBestFit, IrregularJournals) {
    const auto x = x_1_to_12();
    for (const char* j : {"JAA", "PJP", "PINSA", "PNASI"}) {
        const auto v = select_best_fit(x, gr_values(j), default_config());
        EXPECT_TRUE(v.irregular) << j;
        EXPECT_LT(v.best_r_squared(), 0.85) << j;
    }
    // numpy brute force over all families: JAA best 0.448275 (exponential).
    const auto jaa = select_best_fit(x, gr_values("JAA"), default_config());
    EXPECT_NEAR(jaa.best_r_squared(), 0.448275, 1e-6);
    EXPECT_EQ(jaa.best->family, ModelFamily::exponential());
}

TEST(SelectBestFit, ExactCubicSelectsCubic) {
    const auto x = x_1_to_12();
    std::vector<double> y;
    for (double xi : x) y.push_back(0.5 * xi * xi * xi - 2 * xi * xi + xi - 4);
    const auto v = select_best_fit(x, y, default_config());
    ASSERT_TRUE(v.best);
    EXPECT_EQ(v.best->family, ModelFamily::polynomial(3));
    EXPECT_NEAR(v.best->r_squared, 1.0, 1e-12);
    EXPECT_FALSE(v.irregular);
}

TEST(SelectBestFit, DsjPicksQuarticOverLogarithmic) {
    // Max-R^2 selection prefers the quartic (0.9716); the logarithmic fit
    // is the best family with two coefficients.
    const auto v = select_best_fit(x_1_to_12(), gr_values("DSJ"), default_config());
    ASSERT_TRUE(v.best);
    EXPECT_EQ(v.best->family, ModelFamily::polynomial(4));
    EXPECT_NEAR(v.best->r_squared, 0.971592, 1e-6);
    const FitResult* log_fit = nullptr;
    for (const auto& c : v.candidates)
        if (c.family == ModelFamily::logarithmic()) log_fit = &c;
    ASSERT_NE(log_fit, nullptr);
    for (const auto& c : v.candidates)
        if (c.family.coefficient_count() <= 2) {
            EXPECT_LE(c.r_squared, log_fit->r_squared);
        }
}

TEST(SelectBestFit, RejectedFamiliesShrinkCandidateSet) {
    std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
    std::vector<double> y{0, 1, 4, 9, 16, 25, 36};
    const auto v = select_best_fit(x, y, default_config());
    ASSERT_EQ(v.rejected.size(), 1u);
    EXPECT_EQ(v.rejected[0].family, ModelFamily::exponential());
    EXPECT_EQ(v.best->family, ModelFamily::polynomial(2));

    EXPECT_THROW((void)select_best_fit(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}, default_config()),
                 FitError);
    const std::vector<double> constant(7, 2.0);
    EXPECT_THROW((void)select_best_fit(x, constant, default_config()), FitError);
}

TEST(SelectBestFit, TiesGoToFewerCoefficients) {
    // An exact line is fitted exactly by every polynomial degree.
    const auto x = x_1_to_12();
    std::vector<double> y;
    for (double xi : x) y.push_back(3 - 0.5 * xi);
    const auto v = select_best_fit(x, y, default_config());
    EXPECT_EQ(v.best->family, ModelFamily::linear());
}

// ---------------------------------------------------------------------------
// Properties.

TEST(RegressionProperties, NestedPolynomialR2IsMonotone) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = x_1_to_12();
        std::vector<double> y;
        for (double xi : x) y.push_back(10 - 0.6 * xi + noise(rng));
        double prev = fit_polynomial(x, y, 1).r_squared;
        for (int d = 2; d <= 6; ++d) {
            const double cur = fit_polynomial(x, y, d).r_squared;
            EXPECT_GE(cur, prev - 1e-12) << "degree " << d;
            EXPECT_LE(cur, 1.0 + 1e-12);
            EXPECT_GE(cur, -1e-12);
            prev = cur;
        }
    }
}

TEST(RegressionProperties, ExactRecoveryOfEveryFamily) {
    std::mt19937_64 rng(2021);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const auto x = x_1_to_12();
    for (int trial = 0; trial < 40; ++trial) {
        for (const auto& family : candidate_families(4)) {
            std::vector<double> c(family.coefficient_count());
            for (double& v : c) v = coef(rng);
            if (family.kind == FamilyKind::exponential) {
                c[0] = std::abs(c[0]) + 0.5;
                c[1] *= 0.2;
            }
            std::vector<double> y;
            for (double xi : x) y.push_back(evaluate(family, c, xi));
            const auto fit = fit_family(family, x, y);
            ASSERT_EQ(fit.coefficients.size(), c.size());
            for (std::size_t k = 0; k < c.size(); ++k)
                EXPECT_NEAR(fit.coefficients[k], c[k], 1e-9) << family.name() << " k=" << k;
            EXPECT_NEAR(fit.r_squared, 1.0, 1e-12) << family.name();
        }
    }
}

TEST(RegressionProperties, ResidualsOrthogonalToDesignColumns) {
    const auto x = x_1_to_12();
    for (const auto& row : garfield::testing::fixture_gr) {
        const std::vector<double> y(row.gr.begin(), row.gr.end());
        for (const auto& family : candidate_families(4)) {
            const auto fit = fit_family(family, x, y);
            // Design columns in fitting space.
            std::vector<std::vector<double>> cols;
            if (family.kind == FamilyKind::logarithmic) {
                std::vector<double> lx;
                for (double xi : x) lx.push_back(std::log(xi));
                cols = {lx, std::vector<double>(12, 1.0)};
            } else {
                const int d = family.kind == FamilyKind::polynomial ? family.degree : 1;
                for (int p = d; p >= 0; --p) {
                    std::vector<double> col;
                    for (double xi : x) col.push_back(std::pow(xi, p));
                    cols.push_back(col);
                }
            }
            double res_norm = 0;
            for (double r : fit.residuals) res_norm += r * r;
            res_norm = std::sqrt(res_norm);
            for (const auto& col : cols) {
                double dot = 0, col_norm = 0;
                for (std::size_t i = 0; i < 12; ++i) {
                    dot += col[i] * fit.residuals[i];
                    col_norm += col[i] * col[i];
                }
                EXPECT_LE(std::abs(dot), 1e-8 * std::sqrt(col_norm) * std::max(res_norm, 1e-300))
                    << row.journal << " " << family.name();
            }
        }
    }
}

TEST(RegressionProperties, PredictionsReproduceStoredR2AndAreDeterministic) {
    const auto x = x_1_to_12();
    for (const auto& row : garfield::testing::fixture_gr) {
        const std::vector<double> y(row.gr.begin(), row.gr.end());
        for (const auto& family : candidate_families(4)) {
            const auto fit = fit_family(family, x, y);
            std::vector<double> pred;
            for (double xi : x) pred.push_back(evaluate(fit, xi));
            EXPECT_NEAR(r_squared(y, pred), fit.r_squared_original, 1e-12);
            if (family.kind == FamilyKind::exponential) {
                std::vector<double> ly, lp;
                for (std::size_t i = 0; i < 12; ++i) {
                    ly.push_back(std::log(y[i]));
                    lp.push_back(std::log(fit.coefficients[0]) + fit.coefficients[1] * x[i]);
                }
                EXPECT_NEAR(r_squared(ly, lp), fit.r_squared, 1e-12);
            } else {
                EXPECT_EQ(fit.r_squared, fit.r_squared_original);
            }
            const auto again = fit_family(family, x, y);
            EXPECT_EQ(std::memcmp(again.coefficients.data(), fit.coefficients.data(),
                                  sizeof(double) * fit.coefficients.size()),
                      0);
            EXPECT_EQ(again.r_squared, fit.r_squared);
        }
    }
}

TEST(ModelFamily, NamesAndEquations) {
    EXPECT_EQ(ModelFamily::polynomial(3).equation(), "Y = a(X)^3 + b(X)^2 + c(X) + d");
    EXPECT_EQ(ModelFamily::polynomial(4).name(), "Polynomial (degree 4)");
    EXPECT_EQ(ModelFamily::exponential().equation(), "Y = a*exp(bX)");
    EXPECT_EQ(ModelFamily::polynomial(4).coefficient_count(), 5u);
}
