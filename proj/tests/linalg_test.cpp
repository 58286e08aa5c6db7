#include <gtest/gtest.h>

#include <random>

#include "garfield/linalg.hpp"

using garfield::linalg::least_squares;
using garfield::linalg::Matrix;
using garfield::linalg::RankDeficient;

namespace {

/// Normal equations solved by Gaussian elimination in long double; a
/// separate route from the Householder factorization.
std::vector<double> normal_equations(const Matrix& a, const std::vector<double>& b) {
    const std::size_t n = a.cols();
    std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t r = 0; r < a.rows(); ++r) m[i][j] += static_cast<long double>(a(r, i)) * a(r, j);
        for (std::size_t r = 0; r < a.rows(); ++r) m[i][n] += static_cast<long double>(a(r, i)) * b[r];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(m[i][k]) > std::fabs(m[piv][k])) piv = i;
        std::swap(m[k], m[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const long double f = m[i][k] / m[k][k];
            for (std::size_t j = k; j <= n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        long double s = m[k][n];
        for (std::size_t j = k + 1; j < n; ++j) s -= m[k][j] * x[j];
        x[k] = static_cast<double>(s / m[k][k]);
    }
    return x;
}

}  // namespace

TEST(LeastSquares, SquareSystemSolvedExactly) {
    Matrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 3;
    const auto x = least_squares(a, {5, 10});
    EXPECT_NEAR(x[0], 1.0, 1e-14);
    EXPECT_NEAR(x[1], 3.0, 1e-14);
}

TEST(LeastSquares, OverdeterminedMatchesNormalEquations) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> d(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 6 + trial % 10;
        const std::size_t n = 1 + trial % 5;
        Matrix a(m, n);
        std::vector<double> b(m);
        for (std::size_t r = 0; r < m; ++r) {
            b[r] = d(rng);
            for (std::size_t c = 0; c < n; ++c) a(r, c) = d(rng);
        }
        const auto qr = least_squares(a, b);
        const auto ne = normal_equations(a, b);
        for (std::size_t c = 0; c < n; ++c) EXPECT_NEAR(qr[c], ne[c], 1e-10);
    }
}

TEST(LeastSquares, RejectsSingularAndMisshapenInput) {
    Matrix dup(3, 2);
    for (std::size_t r = 0; r < 3; ++r) {
        dup(r, 0) = 2.0;
        dup(r, 1) = 1.0;
    }
    EXPECT_THROW((void)least_squares(dup, {1, 2, 3}), RankDeficient);

    Matrix zero(3, 1);
    EXPECT_THROW((void)least_squares(zero, {1, 2, 3}), RankDeficient);

    Matrix wide(1, 2);
    wide(0, 0) = 1;
    wide(0, 1) = 2;
    EXPECT_THROW((void)least_squares(wide, {1}), std::invalid_argument);
    EXPECT_THROW((void)least_squares(Matrix(3, 1), {1, 2}), std::invalid_argument);
}
