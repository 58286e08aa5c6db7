#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "garfield/core.hpp"
#include "garfield/linalg.hpp"

namespace garfield {

enum class FamilyKind { linear, logarithmic, polynomial, exponential };

/// A trend-model family. Coefficient order:
///   linear       Y = a X + b         (slope, intercept)
///   logarithmic  Y = a ln(X) + b     (a, b)
///   polynomial   Y = sum c_j X^j     (descending powers, degree..0)
///   exponential  Y = a exp(b X)      (a, b)
struct ModelFamily {
    FamilyKind kind = FamilyKind::linear;
    int degree = 1;

    [[nodiscard]] static ModelFamily linear() { return {FamilyKind::linear, 1}; }
    [[nodiscard]] static ModelFamily logarithmic() { return {FamilyKind::logarithmic, 1}; }
    [[nodiscard]] static ModelFamily polynomial(int d) { return {FamilyKind::polynomial, d}; }
    [[nodiscard]] static ModelFamily exponential() { return {FamilyKind::exponential, 1}; }

    [[nodiscard]] std::size_t coefficient_count() const {
        return kind == FamilyKind::polynomial ? static_cast<std::size_t>(degree) + 1 : 2;
    }

    [[nodiscard]] std::string name() const {
        switch (kind) {
            case FamilyKind::linear: return "Linear";
            case FamilyKind::logarithmic: return "Logarithmic";
            case FamilyKind::exponential: return "Exponential";
            case FamilyKind::polynomial: break;
        }
        if (degree == 2) return "Polynomial (quadratic)";
        if (degree == 3) return "Polynomial (cubic)";
        return "Polynomial (degree " + std::to_string(degree) + ")";
    }

    [[nodiscard]] std::string equation() const {
        switch (kind) {
            case FamilyKind::linear: return "Y = a(X) + b";
            case FamilyKind::logarithmic: return "Y = a*ln(X) + b";
            case FamilyKind::exponential: return "Y = a*exp(bX)";
            case FamilyKind::polynomial: break;
        }
        std::string eq = "Y =";
        for (int p = degree; p >= 0; --p) {
            eq += p == degree ? " " : " + ";
            eq += static_cast<char>('a' + (degree - p));
            if (p > 1) eq += "(X)^" + std::to_string(p);
            if (p == 1) eq += "(X)";
        }
        return eq;
    }

    friend bool operator==(const ModelFamily&, const ModelFamily&) = default;
};

enum class R2Space { original, log };

inline std::string_view to_string(R2Space s) { return s == R2Space::original ? "original" : "log"; }

struct FitResult {
    ModelFamily family;
    std::vector<double> coefficients;
    double r_squared = 0.0;
    R2Space r_squared_space = R2Space::original;
    /// Original-space R^2; equals r_squared except for the exponential family.
    double r_squared_original = 0.0;
    /// Residuals in fitting space (log space for the exponential family).
    std::vector<double> residuals;
};

class FitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// X_i = origin + (year_i - first_year).
[[nodiscard]] inline std::vector<double> year_index(std::span<const int> years, int origin) {
    std::vector<double> x;
    x.reserve(years.size());
    if (years.empty()) return x;
    const int first = years.front();
    for (int y : years) x.push_back(static_cast<double>(origin + (y - first)));
    return x;
}

/// Year index over a journal's full window, so undefined years keep their slot.
[[nodiscard]] inline std::vector<double> year_index(const JournalSeries& series,
                                                    const AnalysisConfig& config) {
    std::vector<int> years;
    for (const auto& o : series.observations) years.push_back(o.year);
    return year_index(std::span<const int>(years), config.year_index_origin);
}

/// X values for an indicator series, measured from its journal's first year.
[[nodiscard]] inline std::vector<double> year_index(const IndicatorSeries& series, int first_year,
                                                    int origin) {
    std::vector<double> x;
    for (const auto& v : series.values) x.push_back(static_cast<double>(origin + (v.year - first_year)));
    return x;
}

[[nodiscard]] inline double evaluate(const ModelFamily& family, std::span<const double> coefficients,
                                     double x) {
    switch (family.kind) {
        case FamilyKind::linear: return coefficients[0] * x + coefficients[1];
        case FamilyKind::logarithmic: return coefficients[0] * std::log(x) + coefficients[1];
        case FamilyKind::exponential: return coefficients[0] * std::exp(coefficients[1] * x);
        case FamilyKind::polynomial: break;
    }
    double y = 0.0;
    for (double c : coefficients) y = y * x + c;
    return y;
}

[[nodiscard]] inline double evaluate(const FitResult& fit, double x) {
    return evaluate(fit.family, fit.coefficients, x);
}

/// 1 - SS_res / SS_tot.
[[nodiscard]] inline double r_squared(std::span<const double> observed, std::span<const double> predicted) {
    const double mean =
        std::accumulate(observed.begin(), observed.end(), 0.0) / static_cast<double>(observed.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
        ss_tot += (observed[i] - mean) * (observed[i] - mean);
    }
    if (ss_tot == 0.0) throw FitError("R^2 undefined for a constant response");
    return 1.0 - ss_res / ss_tot;
}

namespace detail {

/// Least squares of y on the polynomial basis of t (descending powers
/// through the constant column). Returns (coefficients, residuals).
inline std::pair<std::vector<double>, std::vector<double>> poly_lsq(std::span<const double> t,
                                                                    std::span<const double> y,
                                                                    int degree) {
    const std::size_t n = t.size();
    const std::size_t p = static_cast<std::size_t>(degree) + 1;
    if (y.size() != n) throw FitError("X and Y lengths differ");
    if (n <= p) throw FitError("need more than " + std::to_string(p) + " points for " +
                               std::to_string(p) + " coefficients");
    linalg::Matrix design(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        double power = 1.0;
        for (std::size_t j = p; j-- > 0;) {
            design(i, j) = power;
            power *= t[i];
        }
    }
    std::vector<double> coef;
    try {
        coef = linalg::least_squares(design, std::vector<double>(y.begin(), y.end()));
    } catch (const linalg::RankDeficient& e) {
        throw FitError(std::string("rank-deficient design (duplicate X?): ") + e.what());
    }
    std::vector<double> residuals(n);
    for (std::size_t i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (double c : coef) fitted = fitted * t[i] + c;
        residuals[i] = y[i] - fitted;
    }
    return {std::move(coef), std::move(residuals)};
}

inline std::vector<double> predictions(const FitResult& fit, std::span<const double> x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double xi : x) out.push_back(evaluate(fit, xi));
    return out;
}

}  // namespace detail

[[nodiscard]] inline FitResult fit_polynomial(std::span<const double> x, std::span<const double> y,
                                              int degree) {
    if (degree < 1) throw FitError("polynomial degree must be >= 1");
    auto [coef, res] = detail::poly_lsq(x, y, degree);
    FitResult fit{degree == 1 ? ModelFamily::linear() : ModelFamily::polynomial(degree),
                  std::move(coef), 0.0, R2Space::original, 0.0, std::move(res)};
    fit.r_squared = r_squared(y, detail::predictions(fit, x));
    fit.r_squared_original = fit.r_squared;
    return fit;
}

[[nodiscard]] inline FitResult fit_linear(std::span<const double> x, std::span<const double> y) {
    return fit_polynomial(x, y, 1);
}

[[nodiscard]] inline FitResult fit_logarithmic(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx;
    lx.reserve(x.size());
    for (double xi : x) {
        if (!(xi > 0.0)) throw FitError("logarithmic fit needs X > 0");
        lx.push_back(std::log(xi));
    }
    auto [coef, res] = detail::poly_lsq(lx, y, 1);
    FitResult fit{ModelFamily::logarithmic(), std::move(coef), 0.0, R2Space::original, 0.0,
                  std::move(res)};
    fit.r_squared = r_squared(y, detail::predictions(fit, x));
    fit.r_squared_original = fit.r_squared;
    return fit;
}

/// Log-linearized fit: ln Y = ln a + b X. R^2 is reported in log space.
[[nodiscard]] inline FitResult fit_exponential(std::span<const double> x, std::span<const double> y) {
    std::vector<double> ly;
    ly.reserve(y.size());
    for (double yi : y) {
        if (!(yi > 0.0)) throw FitError("exponential fit needs Y > 0");
        ly.push_back(std::log(yi));
    }
    auto [coef, res] = detail::poly_lsq(x, ly, 1);
    std::vector<double> log_fitted(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) log_fitted[i] = coef[0] * x[i] + coef[1];

    FitResult fit{ModelFamily::exponential(), {std::exp(coef[1]), coef[0]}, 0.0, R2Space::log, 0.0,
                  std::move(res)};
    fit.r_squared = r_squared(ly, log_fitted);
    fit.r_squared_original = r_squared(y, detail::predictions(fit, x));
    return fit;
}

[[nodiscard]] inline FitResult fit_family(const ModelFamily& family, std::span<const double> x,
                                          std::span<const double> y) {
    switch (family.kind) {
        case FamilyKind::linear: return fit_linear(x, y);
        case FamilyKind::logarithmic: return fit_logarithmic(x, y);
        case FamilyKind::exponential: return fit_exponential(x, y);
        case FamilyKind::polynomial: break;
    }
    return fit_polynomial(x, y, family.degree);
}

/// Absolute R^2 difference treated as a tie during selection.
inline constexpr double r_squared_tie_tolerance = 1e-12;

struct RejectedFamily {
    ModelFamily family;
    std::string reason;
};

struct BestFitVerdict {
    /// Highest-R^2 candidate, present whenever any family could be fitted.
    std::optional<FitResult> best;
    bool irregular = false;
    std::vector<FitResult> candidates;
    std::vector<RejectedFamily> rejected;

    [[nodiscard]] double best_r_squared() const { return best ? best->r_squared : 0.0; }
};

[[nodiscard]] inline std::vector<ModelFamily> candidate_families(int max_poly_degree) {
    std::vector<ModelFamily> out{ModelFamily::linear(), ModelFamily::logarithmic(),
                                 ModelFamily::exponential()};
    for (int d = 2; d <= max_poly_degree; ++d) out.push_back(ModelFamily::polynomial(d));
    return out;
}

/// Fits every eligible family, keeps the highest R^2 (fewest coefficients
/// on ties) and declares the series irregular below config.fit_threshold.
[[nodiscard]] inline BestFitVerdict select_best_fit(std::span<const double> x, std::span<const double> y,
                                                    const AnalysisConfig& config) {
    config.check();
    if (x.size() < static_cast<std::size_t>(config.max_poly_degree) + 2)
        throw FitError("best-fit selection needs at least " +
                       std::to_string(config.max_poly_degree + 2) + " points");

    BestFitVerdict verdict;
    for (const auto& family : candidate_families(config.max_poly_degree)) {
        try {
            verdict.candidates.push_back(fit_family(family, x, y));
        } catch (const FitError& e) {
            verdict.rejected.push_back({family, e.what()});
        }
    }
    if (verdict.candidates.empty()) throw FitError("no model family could be fitted");

    const FitResult* best = nullptr;
    for (const auto& c : verdict.candidates) {
        if (best == nullptr) {
            best = &c;
            continue;
        }
        const double diff = c.r_squared - best->r_squared;
        if (diff > r_squared_tie_tolerance ||
            (std::abs(diff) <= r_squared_tie_tolerance &&
             c.family.coefficient_count() < best->family.coefficient_count()))
            best = &c;
    }
    verdict.best = *best;
    verdict.irregular = best->r_squared < config.fit_threshold;
    return verdict;
}

}  // namespace garfield
