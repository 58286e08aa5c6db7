#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "garfield/core.hpp"

namespace garfield {

enum class SkewClass { positive, negative, symmetric, unavailable };
enum class KurtClass { platykurtic, leptokurtic, mesokurtic, unavailable };

inline std::string_view to_string(SkewClass c) {
    switch (c) {
        case SkewClass::positive: return "positive";
        case SkewClass::negative: return "negative";
        case SkewClass::symmetric: return "symmetric";
        case SkewClass::unavailable: break;
    }
    return "unavailable";
}

inline std::string_view to_string(KurtClass c) {
    switch (c) {
        case KurtClass::platykurtic: return "platykurtic";
        case KurtClass::leptokurtic: return "leptokurtic";
        case KurtClass::mesokurtic: return "mesokurtic";
        case KurtClass::unavailable: break;
    }
    return "unavailable";
}

/// The seven descriptive statistics of one series. Skewness needs n >= 3,
/// kurtosis n >= 4, and both need a nonzero standard deviation; cv needs a
/// nonzero mean.
struct StatSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;
    double range = 0.0;
    std::optional<double> cv;
    std::optional<double> skewness;
    std::optional<double> kurtosis;
    SkewClass skew_class = SkewClass::unavailable;
    KurtClass kurt_class = KurtClass::unavailable;
};

/// Threshold the excess kurtosis is compared against.
[[nodiscard]] constexpr double kurtosis_threshold(KurtosisMode mode) {
    return mode == KurtosisMode::paper_compat ? 3.0 : 0.0;
}

[[nodiscard]] inline StatSummary summarize(std::span<const double> values,
                                           KurtosisMode mode = KurtosisMode::paper_compat) {
    if (values.size() < 2) throw std::invalid_argument("summarize needs at least two values");

    StatSummary s;
    s.n = values.size();
    const double n = static_cast<double>(s.n);

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    const std::size_t mid = s.n / 2;
    s.median = s.n % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
    s.range = sorted.back() - sorted.front();

    double ss = 0.0;
    for (double x : sorted) ss += (x - s.mean) * (x - s.mean);
    s.std_dev = std::sqrt(ss / (n - 1.0));

    if (s.mean != 0.0) s.cv = s.std_dev / s.mean;

    if (s.std_dev > 0.0) {
        double m3 = 0.0;
        double m4 = 0.0;
        for (double x : sorted) {
            const double z = (x - s.mean) / s.std_dev;
            m3 += z * z * z;
            m4 += z * z * z * z;
        }
        if (s.n >= 3) s.skewness = n / ((n - 1.0) * (n - 2.0)) * m3;
        if (s.n >= 4)
            s.kurtosis = n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0)) * m4 -
                         3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
    }

    if (s.skewness) {
        s.skew_class = *s.skewness > 0.0   ? SkewClass::positive
                       : *s.skewness < 0.0 ? SkewClass::negative
                                           : SkewClass::symmetric;
    } else if (s.std_dev == 0.0) {
        s.skew_class = SkewClass::symmetric;
    }

    if (s.kurtosis) {
        const double t = kurtosis_threshold(mode);
        s.kurt_class = *s.kurtosis > t   ? KurtClass::leptokurtic
                       : *s.kurtosis < t ? KurtClass::platykurtic
                                         : KurtClass::mesokurtic;
    }
    return s;
}

[[nodiscard]] inline StatSummary summarize(const IndicatorSeries& series,
                                           KurtosisMode mode = KurtosisMode::paper_compat) {
    const auto values = series.plain_values();
    return summarize(std::span<const double>(values), mode);
}

// ---------------------------------------------------------------------------
// Cross-journal extremal summaries.

enum class Statistic { mean, median, std_dev, range, cv, skewness, kurtosis };

inline constexpr std::array<Statistic, 7> all_statistics{
    Statistic::mean, Statistic::median,   Statistic::std_dev, Statistic::range,
    Statistic::cv,   Statistic::skewness, Statistic::kurtosis};

inline std::string_view to_string(Statistic s) {
    switch (s) {
        case Statistic::mean: return "Mean";
        case Statistic::median: return "Median";
        case Statistic::std_dev: return "Standard Deviation";
        case Statistic::range: return "Range";
        case Statistic::cv: return "Coefficient of Variation";
        case Statistic::skewness: return "Skewness";
        case Statistic::kurtosis: return "Kurtosis";
    }
    return "?";
}

[[nodiscard]] inline std::optional<double> statistic_value(const StatSummary& s, Statistic which) {
    switch (which) {
        case Statistic::mean: return s.mean;
        case Statistic::median: return s.median;
        case Statistic::std_dev: return s.std_dev;
        case Statistic::range: return s.range;
        case Statistic::cv: return s.cv;
        case Statistic::skewness: return s.skewness;
        case Statistic::kurtosis: return s.kurtosis;
    }
    return std::nullopt;
}

struct ValueHolder {
    std::string journal_id;
    int year = 0;
};

/// One extreme value and every (journal, year) that attains it.
struct Extreme {
    double value = 0.0;
    std::vector<ValueHolder> holders;
};

struct IndicatorExtremes {
    Indicator indicator = Indicator::GR;
    Extreme highest;
    Extreme lowest;
    double range = 0.0;
};

struct StatisticExtremes {
    Statistic statistic = Statistic::mean;
    Extreme highest;  // holders carry year 0
    Extreme lowest;
};

struct ExtremalReport {
    std::vector<IndicatorExtremes> indicators;
    // Indexed in all_statistics order, one vector per indicator.
    std::map<Indicator, std::vector<StatisticExtremes>> statistics;
};

/// Relative tolerance under which two scanned values count as tied.
inline constexpr double extremal_tie_tolerance = 1e-9;

namespace detail {

inline bool tied(double a, double b) {
    return std::abs(a - b) <= extremal_tie_tolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Candidate {
    std::string journal_id;
    int year;
    double value;
};

/// Highest and lowest of the candidates with ties gathered in journal-id
/// then year order.
inline std::pair<Extreme, Extreme> scan(std::vector<Candidate> candidates) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.journal_id != b.journal_id ? a.journal_id < b.journal_id : a.year < b.year;
    });
    Extreme hi;
    Extreme lo;
    bool first = true;
    for (const auto& c : candidates) {
        if (first) {
            hi = {c.value, {{c.journal_id, c.year}}};
            lo = hi;
            first = false;
            continue;
        }
        if (tied(c.value, hi.value)) {
            hi.holders.push_back({c.journal_id, c.year});
        } else if (c.value > hi.value) {
            hi = {c.value, {{c.journal_id, c.year}}};
        }
        if (tied(c.value, lo.value)) {
            lo.holders.push_back({c.journal_id, c.year});
        } else if (c.value < lo.value) {
            lo = {c.value, {{c.journal_id, c.year}}};
        }
    }
    return {hi, lo};
}

}  // namespace detail

struct SummarizedSeries {
    IndicatorSeries series;
    StatSummary summary;
};

/// Scans every (journal, year, value) triple per indicator and every
/// per-journal statistic for the corpus highest and lowest.
[[nodiscard]] inline ExtremalReport extremal_summary(
    const std::map<Indicator, std::vector<SummarizedSeries>>& corpus) {
    bool any = false;
    for (const auto& [indicator, rows] : corpus) any = any || !rows.empty();
    if (!any) throw std::invalid_argument("extremal summary needs at least one journal");

    ExtremalReport report;
    for (const auto& [indicator, rows] : corpus) {
        if (rows.empty()) continue;

        std::vector<detail::Candidate> cells;
        for (const auto& row : rows)
            for (const auto& v : row.series.values)
                cells.push_back({row.series.journal_id, v.year, v.value});
        if (!cells.empty()) {
            auto [hi, lo] = detail::scan(std::move(cells));
            const double range = hi.value - lo.value;
            report.indicators.push_back({indicator, std::move(hi), std::move(lo), range});
        }

        auto& stats = report.statistics[indicator];
        for (Statistic which : all_statistics) {
            std::vector<detail::Candidate> per_journal;
            for (const auto& row : rows)
                if (auto v = statistic_value(row.summary, which))
                    per_journal.push_back({row.series.journal_id, 0, *v});
            StatisticExtremes ex{which, {}, {}};
            if (!per_journal.empty()) std::tie(ex.highest, ex.lowest) = detail::scan(per_journal);
            stats.push_back(std::move(ex));
        }
    }
    return report;
}

}  // namespace garfield
