#pragma once

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "garfield/core.hpp"
#include "garfield/regression.hpp"
#include "garfield/report.hpp"

namespace garfield::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Load or parse failure carrying every diagnostic found.
class CorpusError : public std::runtime_error {
public:
    explicit CorpusError(std::vector<std::string> diagnostics)
        : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

    [[nodiscard]] const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    static std::string join(const std::vector<std::string>& lines) {
        std::string out;
        for (const auto& l : lines) out += (out.empty() ? "" : "\n") + l;
        return out;
    }
    std::vector<std::string> diagnostics_;
};

struct CorpusFile {
    fs::path path;
    SeriesMode schema = SeriesMode::raw_counts;
    std::vector<JournalSeries> journals;
    std::vector<std::string> warnings;
    std::string digest;  // FNV-1a 64 over every input file read
};

// ---------------------------------------------------------------------------
// CSV primitives

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Splits one CSV record; double quotes group and "" escapes a quote.
inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cells.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else {
            cells.back() += c;
        }
    }
    for (auto& cell : cells) cell = std::string(trim(cell));
    return cells;
}

inline std::string csv_escape(std::string_view cell) {
    if (cell.find_first_of(",\"\n") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct Line {
    std::size_t number;
    std::vector<std::string> cells;
};

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError({"cannot open " + path.string()});
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void fnv1a(std::uint64_t& h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
}

/// Non-blank records of a CSV document, numbered from 1 (the header).
inline std::vector<Line> records(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++number;
        if (trim(raw).empty()) continue;
        out.push_back({number, split_csv(raw)});
    }
    return out;
}

inline void check_header(const std::vector<Line>& lines, const std::vector<std::string>& expected,
                         const fs::path& path, std::vector<std::string>& errors) {
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& c : v) s += (s.empty() ? "" : ",") + c;
        return s;
    };
    if (lines.empty()) {
        errors.push_back(path.string() + ": missing header row (expected " + join(expected) + ")");
        return;
    }
    if (lines.front().cells != expected)
        errors.push_back(path.string() + ":" + std::to_string(lines.front().number) +
                         ": expected columns " + join(expected) + ", got " +
                         join(lines.front().cells));
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<double> parse_real(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::string tmp(s);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace detail

inline const std::vector<std::string>& columns_for(SeriesMode schema) {
    static const std::vector<std::string> raw{"journal", "year", "cited_papers", "total_citations"};
    static const std::vector<std::string> pre{"journal", "year", "gr"};
    return schema == SeriesMode::raw_counts ? raw : pre;
}

inline const std::vector<std::string>& totals_columns() {
    static const std::vector<std::string> cols{"journal", "sum_cited_papers", "sum_total_citations"};
    return cols;
}

/// Parses and validates a corpus CSV. Rows may appear in any order; each
/// journal becomes one JournalSeries sorted by year. Every problem found is
/// reported in one CorpusError, with line numbers.
[[nodiscard]] inline CorpusFile load_corpus(const fs::path& path, SeriesMode schema,
                                            const std::optional<fs::path>& totals_path = std::nullopt) {
    CorpusFile corpus{path, schema, {}, {}, {}};
    std::vector<std::string> errors;
    std::uint64_t digest = 0xcbf29ce484222325ULL;

    const std::string text = detail::read_file(path);
    detail::fnv1a(digest, text);
    const auto lines = detail::records(text);
    const auto& columns = columns_for(schema);
    detail::check_header(lines, columns, path, errors);
    if (!errors.empty()) throw CorpusError(errors);

    struct Pending {
        JournalSeries series;
        std::map<int, std::size_t> line_of_year;
    };
    std::map<std::string, Pending> journals;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& [number, cells] = lines[i];
        const std::string where = path.string() + ":" + std::to_string(number);
        if (cells.size() != columns.size()) {
            errors.push_back(where + ": expected " + std::to_string(columns.size()) + " cells, got " +
                             std::to_string(cells.size()));
            continue;
        }
        bool ok = true;
        auto bad = [&](std::size_t col) {
            errors.push_back(where + ", column '" + columns[col] + "': non-numeric value '" +
                             cells[col] + "'");
            ok = false;
        };
        if (cells[0].empty()) {
            errors.push_back(where + ", column 'journal': empty journal code");
            continue;
        }
        YearObservation obs;
        if (auto y = detail::parse_int<int>(cells[1])) obs.year = *y; else bad(1);
        if (schema == SeriesMode::raw_counts) {
            if (auto v = detail::parse_int<std::int64_t>(cells[2])) obs.cited_papers = *v; else bad(2);
            if (auto v = detail::parse_int<std::int64_t>(cells[3])) obs.total_citations = *v; else bad(3);
        } else {
            if (auto v = detail::parse_real(cells[2])) obs.gr_value = *v; else bad(2);
        }
        if (!ok) continue;

        auto& pending = journals[cells[0]];
        if (pending.series.journal_id.empty()) {
            pending.series.journal_id = cells[0];
            pending.series.journal_name = cells[0];
            pending.series.mode = schema;
        }
        pending.line_of_year[obs.year] = number;
        pending.series.observations.push_back(obs);
    }

    if (lines.size() <= 1) corpus.warnings.push_back(path.string() + ": no data rows");

    if (totals_path) {
        if (schema == SeriesMode::raw_counts) {
            corpus.warnings.push_back(totals_path->string() + ": totals ignored for raw-counts schema");
        } else {
            const std::string ttext = detail::read_file(*totals_path);
            detail::fnv1a(digest, ttext);
            const auto tlines = detail::records(ttext);
            detail::check_header(tlines, totals_columns(), *totals_path, errors);
            std::map<std::string, std::size_t> seen;
            for (std::size_t i = 1; i < tlines.size() && !tlines.empty(); ++i) {
                const auto& [number, cells] = tlines[i];
                const std::string where = totals_path->string() + ":" + std::to_string(number);
                if (cells.size() != 3) {
                    errors.push_back(where + ": expected 3 cells, got " + std::to_string(cells.size()));
                    continue;
                }
                auto cp = detail::parse_int<std::int64_t>(cells[1]);
                auto tc = detail::parse_int<std::int64_t>(cells[2]);
                if (!cp) errors.push_back(where + ", column 'sum_cited_papers': non-numeric value '" + cells[1] + "'");
                if (!tc) errors.push_back(where + ", column 'sum_total_citations': non-numeric value '" + cells[2] + "'");
                if (!cp || !tc) continue;
                if (auto [it, fresh] = seen.emplace(cells[0], number); !fresh) {
                    errors.push_back(where + ": duplicate totals for " + cells[0] + " (first on line " +
                                     std::to_string(it->second) + ")");
                    continue;
                }
                auto j = journals.find(cells[0]);
                if (j == journals.end()) {
                    corpus.warnings.push_back(where + ": totals for unknown journal " + cells[0]);
                    continue;
                }
                j->second.series.totals = AttachedTotals{*cp, *tc};
            }
        }
    }

    for (auto& [id, pending] : journals) {
        auto& obs = pending.series.observations;
        std::stable_sort(obs.begin(), obs.end(),
                         [](const YearObservation& a, const YearObservation& b) { return a.year < b.year; });
        for (const auto& issue : validate_series(pending.series)) {
            std::string where = path.string();
            if (issue.year) {
                // Last line seen for the year, so duplicates point at the repeat.
                auto it = pending.line_of_year.find(*issue.year);
                if (it != pending.line_of_year.end()) where += ":" + std::to_string(it->second);
            }
            errors.push_back(where + ": " + id + ": " + issue.describe());
        }
        if (schema == SeriesMode::precomputed_gr && !pending.series.totals && totals_path)
            corpus.warnings.push_back(id + ": no consolidated totals; CGR and GRM unavailable");
        corpus.journals.push_back(std::move(pending.series));
    }

    if (!errors.empty()) throw CorpusError(errors);
    corpus.digest = fmt::format("{:016x}", digest);
    return corpus;
}

// ---------------------------------------------------------------------------
// Corpus and configuration as JSON

[[nodiscard]] inline json corpus_to_json(const std::vector<JournalSeries>& journals) {
    json out = json::array();
    for (const auto& s : journals) {
        json j;
        j["journal_id"] = s.journal_id;
        j["journal_name"] = s.journal_name;
        j["mode"] = to_string(s.mode);
        if (s.totals)
            j["totals"] = {{"sum_cited_papers", s.totals->sum_cited_papers},
                           {"sum_total_citations", s.totals->sum_total_citations}};
        json obs = json::array();
        for (const auto& o : s.observations) {
            json row{{"year", o.year}};
            if (o.cited_papers) row["cited_papers"] = *o.cited_papers;
            if (o.total_citations) row["total_citations"] = *o.total_citations;
            if (o.gr_value) row["gr"] = *o.gr_value;
            obs.push_back(std::move(row));
        }
        j["observations"] = std::move(obs);
        out.push_back(std::move(j));
    }
    return out;
}

[[nodiscard]] inline std::vector<JournalSeries> corpus_from_json(const json& doc) {
    std::vector<JournalSeries> out;
    for (const auto& j : doc) {
        JournalSeries s;
        s.journal_id = j.at("journal_id").get<std::string>();
        s.journal_name = j.value("journal_name", s.journal_id);
        s.mode = parse_series_mode(j.at("mode").get<std::string>());
        if (j.contains("totals"))
            s.totals = AttachedTotals{j["totals"].at("sum_cited_papers").get<std::int64_t>(),
                                      j["totals"].at("sum_total_citations").get<std::int64_t>()};
        for (const auto& row : j.at("observations")) {
            YearObservation o;
            o.year = row.at("year").get<int>();
            if (row.contains("cited_papers")) o.cited_papers = row["cited_papers"].get<std::int64_t>();
            if (row.contains("total_citations")) o.total_citations = row["total_citations"].get<std::int64_t>();
            if (row.contains("gr")) o.gr_value = row["gr"].get<double>();
            s.observations.push_back(o);
        }
        out.push_back(validated(std::move(s)));
    }
    return out;
}

[[nodiscard]] inline json config_to_json(const AnalysisConfig& c) {
    return {{"reference_year", c.reference_year},
            {"fit_threshold", c.fit_threshold},
            {"max_poly_degree", c.max_poly_degree},
            {"year_index_origin", c.year_index_origin},
            {"kurtosis_mode", to_string(c.kurtosis_mode)}};
}

/// Reads an AnalysisConfig from JSON; absent keys keep their defaults and
/// unknown keys are an error.
[[nodiscard]] inline AnalysisConfig load_config(const fs::path& path) {
    json doc;
    try {
        doc = json::parse(detail::read_file(path));
    } catch (const json::parse_error& e) {
        throw CorpusError({path.string() + ": " + e.what()});
    }
    if (!doc.is_object()) throw CorpusError({path.string() + ": config must be a JSON object"});
    AnalysisConfig c;
    for (const auto& [key, value] : doc.items()) {
        if (key == "reference_year") c.reference_year = value.get<int>();
        else if (key == "fit_threshold") c.fit_threshold = value.get<double>();
        else if (key == "max_poly_degree") c.max_poly_degree = value.get<int>();
        else if (key == "year_index_origin") c.year_index_origin = value.get<int>();
        else if (key == "kurtosis_mode") c.kurtosis_mode = parse_kurtosis_mode(value.get<std::string>());
        else throw CorpusError({path.string() + ": unknown config key '" + key + "'"});
    }
    c.check();
    return c;
}

// ---------------------------------------------------------------------------
// Report tables

enum class OutputFormat { csv, markdown, json };

inline OutputFormat parse_output_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "markdown" || text == "md") return OutputFormat::markdown;
    if (text == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

inline std::string_view extension(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv: return ".csv";
        case OutputFormat::markdown: return ".md";
        case OutputFormat::json: return ".json";
    }
    return "";
}

/// Two decimals, halves rounded away from zero.
[[nodiscard]] inline std::string format_2dp(double v) {
    double r = std::round(v * 100.0) / 100.0;
    if (r == 0.0) r = 0.0;  // no "-0.00"
    return fmt::format("{:.2f}", r);
}

[[nodiscard]] inline std::string format_2dp(const std::optional<double>& v) {
    return v ? format_2dp(*v) : std::string("---");
}

/// Three decimals, used for fit coefficients.
[[nodiscard]] inline std::string format_3dp(double v) {
    double r = std::round(v * 1000.0) / 1000.0;
    if (r == 0.0) r = 0.0;
    return fmt::format("{:.3f}", r);
}

enum class TableId { cgr, gr, grm, grn, bestfit, extremal_values, extremal_statistics };

struct TableSelection {
    std::vector<TableId> tables;
    bool with_statistics = true;  // only affects the GR/GRM/GRN tables

    [[nodiscard]] static TableSelection all() {
        return {{TableId::cgr, TableId::gr, TableId::grm, TableId::grn, TableId::bestfit,
                 TableId::extremal_values, TableId::extremal_statistics},
                true};
    }
};

inline std::string_view file_stem(TableId id) {
    switch (id) {
        case TableId::cgr: return "table1_cgr";
        case TableId::gr: return "table2_gr";
        case TableId::grm: return "table3_grm";
        case TableId::grn: return "table4_grn";
        case TableId::bestfit: return "table2a_bestfit";
        case TableId::extremal_values: return "table5_extremal_values";
        case TableId::extremal_statistics: return "table6_extremal_statistics";
    }
    return "table";
}

/// Rendered text of one table plus the file stem it is written under.
struct RenderedTable {
    TableId id;
    std::string stem;
    std::string content;
};

namespace detail {

struct TextTable {
    std::string title;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::string render_text(const TextTable& t, OutputFormat format) {
    std::string out;
    if (format == OutputFormat::csv) {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                out += (i ? "," : "") + csv_escape(cells[i]);
            out += '\n';
        };
        line(t.header);
        for (const auto& r : t.rows) line(r);
        return out;
    }
    auto line = [&](const std::vector<std::string>& cells) {
        out += '|';
        for (const auto& c : cells) out += ' ' + c + " |";
        out += '\n';
    };
    out += "### " + t.title + "\n\n";
    line(t.header);
    std::vector<std::string> rule(t.header.size(), "---");
    line(rule);
    for (const auto& r : t.rows) line(r);
    return out;
}

inline std::string indicator_title(Indicator i) {
    switch (i) {
        case Indicator::GR: return "Yearwise variation of Garfield Ratio (GR)_Y";
        case Indicator::GRM: return "Yearwise variation of Modified Garfield Ratio (GRM)_Y";
        case Indicator::GRN: return "Yearwise variation of Time-Normalised Garfield Ratio (GRN)_Y";
        default: return std::string(to_string(i));
    }
}

inline std::string holders_text(const Extreme& e) {
    std::string out;
    for (const auto& h : e.holders) out += (out.empty() ? "" : " & ") + h.journal_id;
    return out;
}

inline std::string holder_years_text(const Extreme& e) {
    std::string out;
    for (const auto& h : e.holders) out += (out.empty() ? "" : " & ") + std::to_string(h.year);
    return out;
}

inline std::size_t coefficient_columns(const AnalysisReport& r) {
    return std::max<std::size_t>(5, static_cast<std::size_t>(r.metadata.config.max_poly_degree) + 1);
}

inline TextTable text_cgr(const AnalysisReport& r) {
    TextTable t{"The Consolidated Garfield Ratios (CGR)",
                {"Journal", "Total cited papers [sum(CP)_Y]", "Total citations [sum(TC)_Y]",
                 "CGR = [sum(TC)_Y / sum(CP)_Y]"},
                {}};
    for (const auto& row : r.cgr_table)
        t.rows.push_back({row.journal_id, std::to_string(row.totals.sum_cited_papers),
                          std::to_string(row.totals.sum_total_citations), format_2dp(row.totals.cgr)});
    return t;
}

inline TextTable text_indicator(const IndicatorTable& table, bool with_statistics) {
    TextTable t{indicator_title(table.indicator), {"Journal"}, {}};
    for (int y : table.years) t.header.push_back(std::to_string(y));
    if (with_statistics)
        for (Statistic s : all_statistics) t.header.emplace_back(to_string(s));
    for (const auto& row : table.rows) {
        std::vector<std::string> cells{row.series.journal_id};
        for (int y : table.years) cells.push_back(format_2dp(row.series.at(y)));
        if (with_statistics)
            for (Statistic s : all_statistics)
                cells.push_back(row.summary ? format_2dp(statistic_value(*row.summary, s)) : "---");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

inline TextTable text_bestfit(const AnalysisReport& r) {
    const std::size_t ncoef = coefficient_columns(r);
    TextTable t{"Best-fit functions representing the yearwise variations of Garfield Ratio (GR)_Y",
                {"Journal", "Best-Fit Function", "Best-Fit Equation"},
                {}};
    for (std::size_t k = 0; k < ncoef; ++k) t.header.push_back(std::string(1, static_cast<char>('a' + k)));
    t.header.insert(t.header.end(), {"R²", "R² Space", "Best Candidate R²"});

    for (const auto& row : r.bestfit_table) {
        std::vector<std::string> cells{row.journal_id};
        const auto& v = row.verdict;
        if (!v || v->irregular) {
            cells.push_back(v ? "Irregular & no befitting equation" : "Not fitted: " + row.error);
            cells.push_back("---");
            for (std::size_t k = 0; k < ncoef + 2; ++k) cells.push_back("---");
        } else {
            const auto& fit = *v->best;
            cells.push_back(fit.family.name());
            cells.push_back(fit.family.equation());
            for (std::size_t k = 0; k < ncoef; ++k)
                cells.push_back(k < fit.coefficients.size() ? format_3dp(fit.coefficients[k]) : "---");
            cells.push_back(format_3dp(fit.r_squared));
            cells.emplace_back(to_string(fit.r_squared_space));
        }
        cells.push_back(v ? format_3dp(v->best_r_squared()) : "---");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

inline TextTable text_extremal_values(const AnalysisReport& r) {
    TextTable t{"Extremal values and Ranges of different Garfield Ratios",
                {"Indicator", "Highest Journal", "Highest Year", "Highest Value", "Lowest Journal",
                 "Lowest Year", "Lowest Value", "Range"},
                {}};
    if (!r.extremal) return t;
    for (const auto& ex : r.extremal->indicators)
        t.rows.push_back({std::string(to_string(ex.indicator)), holders_text(ex.highest),
                          holder_years_text(ex.highest), format_2dp(ex.highest.value),
                          holders_text(ex.lowest), holder_years_text(ex.lowest),
                          format_2dp(ex.lowest.value), format_2dp(ex.range)});
    return t;
}

inline TextTable text_extremal_statistics(const AnalysisReport& r) {
    TextTable t{"Extremal values of the statistical parameters of different Garfield Ratios",
                {"Indicator"},
                {}};
    for (Statistic s : all_statistics) {
        t.header.push_back(std::string(to_string(s)) + " HV");
        t.header.push_back(std::string(to_string(s)) + " LV");
    }
    if (!r.extremal) return t;
    for (const auto& [indicator, stats] : r.extremal->statistics) {
        std::vector<std::string> cells{std::string(to_string(indicator))};
        for (const auto& s : stats) {
            for (const Extreme* e : {&s.highest, &s.lowest})
                cells.push_back(e->holders.empty() ? "---"
                                                   : holders_text(*e) + " (" + format_2dp(e->value) + ")");
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

// JSON renderings carry full precision.

inline json j_opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json j_summary(const StatSummary& s) {
    return {{"n", s.n},
            {"mean", s.mean},
            {"median", s.median},
            {"std_dev", s.std_dev},
            {"range", s.range},
            {"cv", j_opt(s.cv)},
            {"skewness", j_opt(s.skewness)},
            {"kurtosis", j_opt(s.kurtosis)},
            {"skew_class", to_string(s.skew_class)},
            {"kurt_class", to_string(s.kurt_class)}};
}

inline json j_fit(const FitResult& f) {
    return {{"family", f.family.name()},
            {"equation", f.family.equation()},
            {"coefficients", f.coefficients},
            {"r_squared", f.r_squared},
            {"r_squared_space", to_string(f.r_squared_space)},
            {"r_squared_original", f.r_squared_original},
            {"residuals", f.residuals}};
}

inline json j_extreme(const Extreme& e, bool with_year) {
    json holders = json::array();
    for (const auto& h : e.holders) {
        json item{{"journal", h.journal_id}};
        if (with_year) item["year"] = h.year;
        holders.push_back(std::move(item));
    }
    return {{"value", e.value}, {"holders", std::move(holders)}};
}

inline json json_table(const AnalysisReport& r, TableId id, bool with_statistics) {
    json doc{{"table", file_stem(id)}, {"metadata", {{"tool_version", r.metadata.tool_version},
                                                      {"input_digest", r.metadata.input_digest},
                                                      {"journal_count", r.metadata.journal_count},
                                                      {"config", config_to_json(r.metadata.config)}}}};
    json rows = json::array();
    switch (id) {
        case TableId::cgr:
            for (const auto& row : r.cgr_table)
                rows.push_back({{"journal", row.journal_id},
                                {"sum_cited_papers", row.totals.sum_cited_papers},
                                {"sum_total_citations", row.totals.sum_total_citations},
                                {"cgr", row.totals.cgr}});
            break;
        case TableId::gr:
        case TableId::grm:
        case TableId::grn: {
            const Indicator ind = id == TableId::gr ? Indicator::GR : id == TableId::grm ? Indicator::GRM : Indicator::GRN;
            const auto* table = r.table(ind);
            doc["indicator"] = to_string(ind);
            doc["years"] = table ? table->years : std::vector<int>{};
            if (!table) break;
            for (const auto& row : table->rows) {
                json values = json::array();
                for (const auto& v : row.series.values) values.push_back({{"year", v.year}, {"value", v.value}});
                json item{{"journal", row.series.journal_id},
                          {"values", std::move(values)},
                          {"undefined_years", row.series.undefined_years}};
                if (with_statistics) item["statistics"] = row.summary ? j_summary(*row.summary) : json(nullptr);
                rows.push_back(std::move(item));
            }
            break;
        }
        case TableId::bestfit:
            for (const auto& row : r.bestfit_table) {
                json item{{"journal", row.journal_id}, {"first_year", row.first_year}};
                if (!row.verdict) {
                    item["error"] = row.error;
                } else {
                    item["irregular"] = row.verdict->irregular;
                    item["best"] = j_fit(*row.verdict->best);
                    json cands = json::array();
                    for (const auto& c : row.verdict->candidates) cands.push_back(j_fit(c));
                    item["candidates"] = std::move(cands);
                    json rej = json::array();
                    for (const auto& c : row.verdict->rejected) rej.push_back({{"family", c.family.name()}, {"reason", c.reason}});
                    item["rejected"] = std::move(rej);
                }
                rows.push_back(std::move(item));
            }
            break;
        case TableId::extremal_values:
            if (r.extremal)
                for (const auto& ex : r.extremal->indicators)
                    rows.push_back({{"indicator", to_string(ex.indicator)},
                                    {"highest", j_extreme(ex.highest, true)},
                                    {"lowest", j_extreme(ex.lowest, true)},
                                    {"range", ex.range}});
            break;
        case TableId::extremal_statistics:
            if (r.extremal)
                for (const auto& [indicator, stats] : r.extremal->statistics) {
                    json per{{"indicator", to_string(indicator)}};
                    for (const auto& s : stats)
                        per[std::string(to_string(s.statistic))] = {{"highest", j_extreme(s.highest, false)},
                                                                    {"lowest", j_extreme(s.lowest, false)}};
                    rows.push_back(std::move(per));
                }
            break;
    }
    doc["rows"] = std::move(rows);
    return doc;
}

}  // namespace detail

[[nodiscard]] inline std::vector<RenderedTable> render_report(const AnalysisReport& report, OutputFormat format,
                                                              const TableSelection& selection = TableSelection::all()) {
    std::vector<RenderedTable> out;
    for (TableId id : selection.tables) {
        std::string content;
        if (format == OutputFormat::json) {
            content = detail::json_table(report, id, selection.with_statistics).dump(2) + "\n";
        } else {
            detail::TextTable t;
            switch (id) {
                case TableId::cgr: t = detail::text_cgr(report); break;
                case TableId::gr: t = detail::text_indicator(*report.table(Indicator::GR), selection.with_statistics); break;
                case TableId::grm: t = detail::text_indicator(*report.table(Indicator::GRM), selection.with_statistics); break;
                case TableId::grn: t = detail::text_indicator(*report.table(Indicator::GRN), selection.with_statistics); break;
                case TableId::bestfit: t = detail::text_bestfit(report); break;
                case TableId::extremal_values: t = detail::text_extremal_values(report); break;
                case TableId::extremal_statistics: t = detail::text_extremal_statistics(report); break;
            }
            content = detail::render_text(t, format);
        }
        out.push_back({id, std::string(file_stem(id)), std::move(content)});
    }
    return out;
}

inline void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

/// Writes one file per selected table into `directory` and returns the paths.
inline std::vector<fs::path> emit_report(const AnalysisReport& report, OutputFormat format, const fs::path& directory,
                                         const TableSelection& selection = TableSelection::all()) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw std::runtime_error("cannot create " + directory.string() + ": " + ec.message());
    std::vector<fs::path> written;
    for (const auto& table : render_report(report, format, selection)) {
        auto path = directory / (table.stem + std::string(extension(format)));
        write_file(path, table.content);
        written.push_back(std::move(path));
    }
    return written;
}

// ---------------------------------------------------------------------------
// Plot data

/// Grid points per unit of X in the densified block.
inline constexpr int plot_density = 10;

/// `x,year,observed,fitted` at the training points, then a blank line and a
/// second block on a grid ten times denser (observed left empty).
[[nodiscard]] inline std::string render_plot_data(const IndicatorSeries& series, int first_year, int origin,
                                                  const FitResult& fit) {
    const auto x = year_index(series, first_year, origin);
    std::string out = "x,year,observed,fitted\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out += fmt::format("{},{},{},{}\n", x[i], series.values[i].year, series.values[i].value, evaluate(fit, x[i]));
    if (x.size() < 2) return out;

    out += "\nx,year,observed,fitted\n";
    const double lo = x.front();
    const double hi = x.back();
    const int steps = static_cast<int>(std::lround((hi - lo) * plot_density));
    for (int k = 0; k <= steps; ++k) {
        const double xi = lo + (hi - lo) * k / steps;
        const double year = static_cast<double>(first_year) + (xi - origin);
        out += fmt::format("{},{},,{}\n", xi, year, evaluate(fit, xi));
    }
    return out;
}

inline void emit_plot_data(const IndicatorSeries& series, int first_year, int origin, const FitResult& fit,
                           const fs::path& path) {
    write_file(path, render_plot_data(series, first_year, origin, fit));
}

/// Plot data for a best-fit row; irregular or unfitted rows have no curve.
[[nodiscard]] inline std::string render_plot_data(const BestFitRow& row, int origin) {
    if (!row.verdict || row.verdict->irregular)
        throw std::invalid_argument(row.journal_id + ": no best-fit model");
    return render_plot_data(row.series, row.first_year, origin, *row.verdict->best);
}

inline void emit_plot_data(const BestFitRow& row, int origin, const fs::path& path) {
    write_file(path, render_plot_data(row, origin));
}

}  // namespace garfield::io
