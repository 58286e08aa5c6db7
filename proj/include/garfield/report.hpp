#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "garfield/core.hpp"
#include "garfield/indicators.hpp"
#include "garfield/regression.hpp"
#include "garfield/statsum.hpp"
#include "garfield/version.hpp"

namespace garfield {

struct CgrRow {
    std::string journal_id;
    std::string journal_name;
    ConsolidatedTotals totals;
};

struct IndicatorRow {
    IndicatorSeries series;
    std::optional<StatSummary> summary;  // absent when fewer than two defined values
};

struct IndicatorTable {
    Indicator indicator = Indicator::GR;
    std::vector<int> years;  // corpus-wide window, column order
    std::vector<IndicatorRow> rows;
};

struct BestFitRow {
    std::string journal_id;
    int first_year = 0;
    IndicatorSeries series;
    std::optional<BestFitVerdict> verdict;
    std::string error;  // why no verdict could be formed
};

struct ReportMetadata {
    AnalysisConfig config;
    std::string tool_version;
    std::string input_digest;
    std::size_t journal_count = 0;
};

struct AnalysisReport {
    std::vector<CgrRow> cgr_table;
    std::vector<IndicatorTable> indicator_tables;  // GR, GRM, GRN
    std::vector<BestFitRow> bestfit_table;
    std::optional<ExtremalReport> extremal;
    ReportMetadata metadata;

    [[nodiscard]] const IndicatorTable* table(Indicator indicator) const {
        for (const auto& t : indicator_tables)
            if (t.indicator == indicator) return &t;
        return nullptr;
    }
};

namespace detail {

inline bool has_consolidated(const JournalSeries& s) {
    return s.mode == SeriesMode::raw_counts || s.totals.has_value();
}

inline IndicatorRow make_row(IndicatorSeries series, KurtosisMode mode) {
    IndicatorRow row{std::move(series), std::nullopt};
    if (row.series.values.size() >= 2) row.summary = summarize(row.series, mode);
    return row;
}

}  // namespace detail

/// Assembles every table for a validated corpus. Journals appear in
/// journal-id order; the CGR table is sorted by descending CGR.
[[nodiscard]] inline AnalysisReport build_report(std::vector<JournalSeries> corpus,
                                                 const AnalysisConfig& config,
                                                 std::string input_digest = {}) {
    config.check();
    std::sort(corpus.begin(), corpus.end(),
              [](const JournalSeries& a, const JournalSeries& b) { return a.journal_id < b.journal_id; });

    AnalysisReport report;
    report.metadata = {config, std::string(version), std::move(input_digest), corpus.size()};

    std::vector<int> years;
    for (const auto& s : corpus) {
        if (s.observations.empty()) continue;
        if (years.empty()) {
            for (int y = s.first_year(); y <= s.last_year(); ++y) years.push_back(y);
            continue;
        }
        const int lo = std::min(years.front(), s.first_year());
        const int hi = std::max(years.back(), s.last_year());
        years.clear();
        for (int y = lo; y <= hi; ++y) years.push_back(y);
    }

    IndicatorTable gr{Indicator::GR, years, {}};
    IndicatorTable grm{Indicator::GRM, years, {}};
    IndicatorTable grn{Indicator::GRN, years, {}};

    for (const auto& s : corpus) {
        auto gr_series = gr_yearly(s);
        if (detail::has_consolidated(s)) {
            report.cgr_table.push_back({s.journal_id, s.journal_name, consolidated(s)});
            grm.rows.push_back(detail::make_row(grm_yearly(s), config.kurtosis_mode));
        }
        grn.rows.push_back(detail::make_row(grn_yearly(s, config), config.kurtosis_mode));

        BestFitRow fit{s.journal_id, s.first_year(), gr_series, std::nullopt, {}};
        try {
            const auto x = year_index(gr_series, s.first_year(), config.year_index_origin);
            const auto y = gr_series.plain_values();
            fit.verdict = select_best_fit(x, y, config);
        } catch (const FitError& e) {
            fit.error = e.what();
        }
        report.bestfit_table.push_back(std::move(fit));
        gr.rows.push_back(detail::make_row(std::move(gr_series), config.kurtosis_mode));
    }

    std::stable_sort(report.cgr_table.begin(), report.cgr_table.end(),
                     [](const CgrRow& a, const CgrRow& b) {
                         if (a.totals.cgr != b.totals.cgr) return a.totals.cgr > b.totals.cgr;
                         return a.journal_id < b.journal_id;
                     });

    report.indicator_tables = {std::move(gr), std::move(grm), std::move(grn)};

    std::map<Indicator, std::vector<SummarizedSeries>> summarized;
    for (const auto& t : report.indicator_tables) {
        auto& bucket = summarized[t.indicator];
        for (const auto& row : t.rows)
            if (row.summary) bucket.push_back({row.series, *row.summary});
    }
    bool any = false;
    for (const auto& [k, v] : summarized) any = any || !v.empty();
    if (any) report.extremal = extremal_summary(summarized);

    return report;
}

}  // namespace garfield
