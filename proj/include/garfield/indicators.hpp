#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "garfield/core.hpp"

namespace garfield {

struct ConsolidatedTotals {
    std::int64_t sum_cited_papers = 0;
    std::int64_t sum_total_citations = 0;
    double cgr = 0.0;
};

namespace detail {

inline void require_nonempty(const JournalSeries& series) {
    if (series.observations.empty())
        throw std::invalid_argument(series.journal_id + ": empty series");
}

inline void require_raw(const JournalSeries& series, std::string_view what) {
    if (series.mode != SeriesMode::raw_counts)
        throw std::invalid_argument(series.journal_id + ": " + std::string(what) +
                                    " needs raw counts");
}

}  // namespace detail

/// Yearly GR = TC / CP. Years with CP = 0 are listed as undefined. A
/// precomputed series passes its stored ratios through.
[[nodiscard]] inline IndicatorSeries gr_yearly(const JournalSeries& series) {
    detail::require_nonempty(series);
    IndicatorSeries out{series.journal_id, Indicator::GR, {}, {}};
    for (const auto& o : series.observations) {
        if (series.mode == SeriesMode::precomputed_gr) {
            out.values.push_back({o.year, o.gr_value.value_or(0.0)});
            continue;
        }
        if (*o.cited_papers == 0) {
            out.undefined_years.push_back(o.year);
            continue;
        }
        out.values.push_back({o.year, static_cast<double>(*o.total_citations) /
                                          static_cast<double>(*o.cited_papers)});
    }
    return out;
}

[[nodiscard]] inline ConsolidatedTotals consolidated(const JournalSeries& series) {
    detail::require_nonempty(series);
    ConsolidatedTotals t;
    if (series.mode == SeriesMode::raw_counts) {
        for (const auto& o : series.observations) {
            t.sum_cited_papers += *o.cited_papers;
            t.sum_total_citations += *o.total_citations;
        }
    } else {
        if (!series.totals)
            throw std::invalid_argument(series.journal_id +
                                        ": consolidated totals missing for precomputed series");
        t.sum_cited_papers = series.totals->sum_cited_papers;
        t.sum_total_citations = series.totals->sum_total_citations;
    }
    if (t.sum_cited_papers == 0)
        throw std::invalid_argument(series.journal_id + ": no cited papers in window");
    t.cgr = static_cast<double>(t.sum_total_citations) / static_cast<double>(t.sum_cited_papers);
    return t;
}

namespace detail {

template <typename Count>
IndicatorSeries fractional(const JournalSeries& series, Indicator indicator, Count count) {
    require_nonempty(series);
    require_raw(series, to_string(indicator));
    std::int64_t total = 0;
    for (const auto& o : series.observations) total += count(o);
    if (total == 0)
        throw std::invalid_argument(series.journal_id + ": zero denominator for " +
                                    std::string(to_string(indicator)));
    IndicatorSeries out{series.journal_id, indicator, {}, {}};
    for (const auto& o : series.observations)
        out.values.push_back(
            {o.year, static_cast<double>(count(o)) / static_cast<double>(total)});
    return out;
}

}  // namespace detail

/// FC_Y = CP_Y / sum(CP).
[[nodiscard]] inline IndicatorSeries fractional_cited(const JournalSeries& series) {
    return detail::fractional(series, Indicator::FC,
                              [](const YearObservation& o) { return *o.cited_papers; });
}

/// FTC_Y = TC_Y / sum(TC).
[[nodiscard]] inline IndicatorSeries fractional_citations(const JournalSeries& series) {
    return detail::fractional(series, Indicator::FTC,
                              [](const YearObservation& o) { return *o.total_citations; });
}

/// GRM_Y = FTC_Y / FC_Y for raw counts; GR_Y / CGR for precomputed series.
[[nodiscard]] inline IndicatorSeries grm_yearly(const JournalSeries& series) {
    detail::require_nonempty(series);
    IndicatorSeries out{series.journal_id, Indicator::GRM, {}, {}};

    if (series.mode == SeriesMode::precomputed_gr) {
        const double cgr = consolidated(series).cgr;
        for (const auto& v : gr_yearly(series).values) out.values.push_back({v.year, v.value / cgr});
        return out;
    }

    const auto fc = fractional_cited(series);
    const auto ftc = fractional_citations(series);
    for (std::size_t i = 0; i < fc.values.size(); ++i) {
        if (fc.values[i].value == 0.0) {
            out.undefined_years.push_back(fc.values[i].year);
            continue;
        }
        out.values.push_back({fc.values[i].year, ftc.values[i].value / fc.values[i].value});
    }
    return out;
}

/// GRN_Y = GR_Y / A with age A = reference_year - Y.
[[nodiscard]] inline IndicatorSeries grn_yearly(const JournalSeries& series,
                                                const AnalysisConfig& config) {
    detail::require_nonempty(series);
    config.check_against(series);
    auto gr = gr_yearly(series);
    IndicatorSeries out{series.journal_id, Indicator::GRN, {}, gr.undefined_years};
    for (const auto& v : gr.values)
        out.values.push_back({v.year, v.value / static_cast<double>(config.reference_year - v.year)});
    return out;
}

}  // namespace garfield
