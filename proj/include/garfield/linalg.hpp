#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace garfield::linalg {

/// Dense column-major matrix, sized for small regression designs.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    [[nodiscard]] std::span<double> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    [[nodiscard]] std::span<const double> column(std::size_t c) const {
        return {data_.data() + c * rows_, rows_};
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

class RankDeficient : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Relative pivot size below which a column counts as linearly dependent.
inline constexpr double rank_tolerance = 1e-10;

/// Minimizes ||A x - b||_2 by Householder QR. Columns are scaled to unit
/// norm before factorization and the solution is unscaled afterwards.
/// Throws RankDeficient for a singular design, std::invalid_argument for
/// shape mismatches or rows < cols.
[[nodiscard]] inline std::vector<double> least_squares(Matrix a, std::vector<double> b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) throw std::invalid_argument("least_squares: rhs size mismatch");
    if (m < n) throw std::invalid_argument("least_squares: fewer rows than unknowns");

    std::vector<double> scale(n, 1.0);
    for (std::size_t c = 0; c < n; ++c) {
        double norm = 0.0;
        for (double v : a.column(c)) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw RankDeficient("least_squares: zero column in design");
        scale[c] = norm;
        for (double& v : a.column(c)) v /= norm;
    }

    std::vector<double> diag(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm <= rank_tolerance) throw RankDeficient("least_squares: rank-deficient design");

        const double alpha = a(k, k) > 0.0 ? -norm : norm;
        a(k, k) -= alpha;  // a(k.., k) now holds the Householder vector v
        double vtv = 0.0;
        for (std::size_t i = k; i < m; ++i) vtv += a(i, k) * a(i, k);

        auto reflect = [&](auto&& get) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += a(i, k) * get(i);
            const double f = 2.0 * dot / vtv;
            for (std::size_t i = k; i < m; ++i) get(i) -= f * a(i, k);
        };
        for (std::size_t c = k + 1; c < n; ++c) reflect([&](std::size_t i) -> double& { return a(i, c); });
        reflect([&](std::size_t i) -> double& { return b[i]; });

        diag[k] = alpha;
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t c = k + 1; c < n; ++c) s -= a(k, c) * x[c];
        x[k] = s / diag[k];
    }
    for (std::size_t c = 0; c < n; ++c) x[c] /= scale[c];
    return x;
}

}  // namespace garfield::linalg
