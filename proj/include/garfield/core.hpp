#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace garfield {

/// How a journal's yearly data arrived: raw Scopus-style counts or an
/// already computed yearly Garfield Ratio.
enum class SeriesMode { raw_counts, precomputed_gr };

inline std::string_view to_string(SeriesMode mode) {
    return mode == SeriesMode::raw_counts ? "raw-counts" : "precomputed-gr";
}

inline SeriesMode parse_series_mode(std::string_view text) {
    if (text == "raw-counts") return SeriesMode::raw_counts;
    if (text == "precomputed-gr") return SeriesMode::precomputed_gr;
    throw std::invalid_argument("unknown schema '" + std::string(text) +
                                "' (expected raw-counts or precomputed-gr)");
}

struct YearObservation {
    int year = 0;
    std::optional<std::int64_t> cited_papers;
    std::optional<std::int64_t> total_citations;
    std::optional<double> gr_value;

    [[nodiscard]] bool has_counts() const { return cited_papers && total_citations; }

    friend bool operator==(const YearObservation&, const YearObservation&) = default;
};

/// Window totals carried alongside a precomputed-gr series so the
/// consolidated ratio can still be formed.
struct AttachedTotals {
    std::int64_t sum_cited_papers = 0;
    std::int64_t sum_total_citations = 0;

    friend bool operator==(const AttachedTotals&, const AttachedTotals&) = default;
};

struct JournalSeries {
    std::string journal_id;
    std::string journal_name;
    std::vector<YearObservation> observations;
    SeriesMode mode = SeriesMode::raw_counts;
    std::optional<AttachedTotals> totals;

    [[nodiscard]] int first_year() const { return observations.front().year; }
    [[nodiscard]] int last_year() const { return observations.back().year; }

    friend bool operator==(const JournalSeries&, const JournalSeries&) = default;
};

enum class KurtosisMode {
    paper_compat,  // excess kurtosis compared against 3
    standard       // excess kurtosis compared against 0
};

inline std::string_view to_string(KurtosisMode mode) {
    return mode == KurtosisMode::paper_compat ? "paper-compat" : "standard";
}

inline KurtosisMode parse_kurtosis_mode(std::string_view text) {
    if (text == "paper-compat") return KurtosisMode::paper_compat;
    if (text == "standard") return KurtosisMode::standard;
    throw std::invalid_argument("unknown kurtosis mode '" + std::string(text) + "'");
}

struct AnalysisConfig {
    int reference_year = 2021;
    double fit_threshold = 0.85;
    int max_poly_degree = 4;
    int year_index_origin = 1;
    KurtosisMode kurtosis_mode = KurtosisMode::paper_compat;

    /// Throws std::invalid_argument when a field is outside its domain.
    void check() const {
        if (!(fit_threshold >= 0.0 && fit_threshold <= 1.0))
            throw std::invalid_argument("fit threshold must lie in [0, 1]");
        if (max_poly_degree < 1) throw std::invalid_argument("max polynomial degree must be >= 1");
    }

    /// Every observation year must have age reference_year - year >= 1.
    void check_against(const JournalSeries& series) const {
        if (!series.observations.empty() && reference_year <= series.last_year())
            throw std::invalid_argument("reference year " + std::to_string(reference_year) +
                                        " gives age < 1 for " + series.journal_id + " year " +
                                        std::to_string(series.last_year()));
    }
};

enum class Indicator { GR, GRM, GRN, FC, FTC };

inline std::string_view to_string(Indicator indicator) {
    switch (indicator) {
        case Indicator::GR: return "GR";
        case Indicator::GRM: return "GRM";
        case Indicator::GRN: return "GRN";
        case Indicator::FC: return "FC";
        case Indicator::FTC: return "FTC";
    }
    return "?";
}

struct YearValue {
    int year = 0;
    double value = 0.0;

    friend bool operator==(const YearValue&, const YearValue&) = default;
};

struct IndicatorSeries {
    std::string journal_id;
    Indicator indicator = Indicator::GR;
    std::vector<YearValue> values;
    std::vector<int> undefined_years;

    [[nodiscard]] std::vector<double> plain_values() const {
        std::vector<double> out;
        out.reserve(values.size());
        for (const auto& v : values) out.push_back(v.value);
        return out;
    }

    [[nodiscard]] std::vector<int> years() const {
        std::vector<int> out;
        out.reserve(values.size());
        for (const auto& v : values) out.push_back(v.year);
        return out;
    }

    [[nodiscard]] std::optional<double> at(int year) const {
        auto it = std::find_if(values.begin(), values.end(),
                               [year](const YearValue& v) { return v.year == year; });
        if (it == values.end()) return std::nullopt;
        return it->value;
    }
};

struct ValidationIssue {
    std::optional<int> year;
    std::string field;
    std::string message;

    [[nodiscard]] std::string describe() const {
        std::string out = message;
        if (!field.empty()) out += " [" + field + "]";
        return out;
    }
};

class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string journal, std::vector<ValidationIssue> issues)
        : std::runtime_error(summarize(journal, issues)),
          journal_(std::move(journal)),
          issues_(std::move(issues)) {}

    [[nodiscard]] const std::string& journal() const { return journal_; }
    [[nodiscard]] const std::vector<ValidationIssue>& issues() const { return issues_; }

private:
    static std::string summarize(const std::string& journal,
                                 const std::vector<ValidationIssue>& issues) {
        std::string out = journal + ": " + std::to_string(issues.size()) + " validation error(s)";
        for (const auto& issue : issues) out += "; " + issue.describe();
        return out;
    }

    std::string journal_;
    std::vector<ValidationIssue> issues_;
};

/// Checks every YearObservation/JournalSeries invariant and returns all
/// violations found. An empty result means the series is valid.
[[nodiscard]] inline std::vector<ValidationIssue> validate_series(const JournalSeries& series) {
    std::vector<ValidationIssue> issues;
    auto report = [&](std::optional<int> year, std::string field, std::string message) {
        issues.push_back({year, std::move(field), std::move(message)});
    };

    if (series.observations.empty()) {
        report(std::nullopt, "observations", "empty series");
        return issues;
    }

    const auto& obs = series.observations;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto& o = obs[i];
        const int y = o.year;

        if (i > 0) {
            const int prev = obs[i - 1].year;
            if (y == prev) {
                report(y, "year", "duplicate year " + std::to_string(y));
            } else if (y < prev) {
                report(y, "year", "year " + std::to_string(y) + " out of order after " +
                                      std::to_string(prev));
            } else if (y != prev + 1) {
                report(y, "year", "gap in window between " + std::to_string(prev) + " and " +
                                      std::to_string(y));
            }
        }

        if (o.cited_papers && *o.cited_papers < 0)
            report(y, "cited_papers", "negative count in year " + std::to_string(y));
        if (o.total_citations && *o.total_citations < 0)
            report(y, "total_citations", "negative count in year " + std::to_string(y));
        if (o.cited_papers.has_value() != o.total_citations.has_value())
            report(y, o.cited_papers ? "total_citations" : "cited_papers",
                   "incomplete count pair in year " + std::to_string(y));

        if (o.has_counts() && *o.cited_papers >= 0 && *o.total_citations >= 0) {
            if (*o.cited_papers == 0 && *o.total_citations > 0)
                report(y, "total_citations",
                       "citations without cited papers in year " + std::to_string(y));
            if (*o.cited_papers > 0 && *o.total_citations < *o.cited_papers)
                report(y, "total_citations",
                       "fewer citations than cited papers in year " + std::to_string(y));
        }

        if (o.gr_value && !(std::isfinite(*o.gr_value) && *o.gr_value >= 0.0))
            report(y, "gr", "ratio must be finite and nonnegative in year " + std::to_string(y));

        if (!o.has_counts() && !o.gr_value)
            report(y, "observation", "no counts or ratio in year " + std::to_string(y));
        if (series.mode == SeriesMode::raw_counts && !o.has_counts() && o.gr_value)
            report(y, "cited_papers", "raw-counts series lacks counts in year " +
                                          std::to_string(y));
        if (series.mode == SeriesMode::precomputed_gr && !o.gr_value && o.has_counts())
            report(y, "gr", "precomputed-gr series lacks ratio in year " + std::to_string(y));
    }

    if (series.totals) {
        const auto& t = *series.totals;
        if (t.sum_cited_papers < 0 || t.sum_total_citations < 0)
            report(std::nullopt, "totals", "negative consolidated total");
        else if (t.sum_cited_papers == 0 && t.sum_total_citations > 0)
            report(std::nullopt, "totals", "citations without cited papers in totals");
        else if (t.sum_cited_papers > 0 && t.sum_total_citations < t.sum_cited_papers)
            report(std::nullopt, "totals", "fewer citations than cited papers in totals");
    }

    return issues;
}

/// Returns the series unchanged if valid, otherwise throws ValidationError.
[[nodiscard]] inline JournalSeries validated(JournalSeries series) {
    auto issues = validate_series(series);
    if (!issues.empty()) throw ValidationError(series.journal_id, std::move(issues));
    return series;
}

}  // namespace garfield
