// garfield: Garfield Ratio indicators, statistics and trend fits for
// journal-year citation data.
//
//   garfield validate   --input FILE [--schema S] [--totals FILE]
//   garfield indicators --input FILE ... [--output-dir DIR] [--format F]
//   garfield stats      ...
//   garfield fit        ...
//   garfield report     ...
//
// Exit status: 0 success, 1 data or validation failure, 2 usage error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "garfield/core.hpp"
#include "garfield/io.hpp"
#include "garfield/report.hpp"
#include "garfield/version.hpp"

namespace fs = std::filesystem;
using namespace garfield;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_data = 1;
constexpr int exit_usage = 2;

struct Invocation {
    std::string input;
    std::string schema = "precomputed-gr";
    std::string totals;
    std::string config_file;
    std::string output_dir;
    std::string format = "markdown";
    int reference_year = 2021;
    double fit_threshold = 0.85;
    int max_poly_degree = 4;
    int year_origin = 1;
    std::string kurtosis_mode = "paper-compat";
};

struct Flags {
    CLI::Option* reference_year = nullptr;
    CLI::Option* fit_threshold = nullptr;
    CLI::Option* max_poly_degree = nullptr;
    CLI::Option* year_origin = nullptr;
    CLI::Option* kurtosis_mode = nullptr;
};

void add_common(CLI::App& cmd, Invocation& inv, Flags& flags, bool outputs) {
    cmd.add_option("-i,--input", inv.input, "Corpus CSV file")->required()->check(CLI::ExistingFile);
    cmd.add_option("--schema", inv.schema, "raw-counts | precomputed-gr")
        ->check(CLI::IsMember({"raw-counts", "precomputed-gr"}))
        ->capture_default_str();
    cmd.add_option("--totals", inv.totals, "Consolidated totals CSV (precomputed-gr schema)")
        ->check(CLI::ExistingFile);
    if (!outputs) return;
    cmd.add_option("--config", inv.config_file, "JSON analysis config; flags override it")
        ->check(CLI::ExistingFile);
    flags.reference_year =
        cmd.add_option("--reference-year", inv.reference_year, "Year ages are measured from")->capture_default_str();
    flags.fit_threshold = cmd.add_option("--fit-threshold", inv.fit_threshold, "Minimum R² for a best fit")
                              ->check(CLI::Range(0.0, 1.0))
                              ->capture_default_str();
    flags.max_poly_degree = cmd.add_option("--max-poly-degree", inv.max_poly_degree, "Highest polynomial degree tried")
                                ->check(CLI::PositiveNumber)
                                ->capture_default_str();
    flags.year_origin =
        cmd.add_option("--year-origin", inv.year_origin, "X value of the first year")->capture_default_str();
    flags.kurtosis_mode = cmd.add_option("--kurtosis-mode", inv.kurtosis_mode, "paper-compat | standard")
                              ->check(CLI::IsMember({"paper-compat", "standard"}))
                              ->capture_default_str();
    cmd.add_option("-o,--output-dir", inv.output_dir, "Write one file per table here instead of stdout");
    cmd.add_option("--format", inv.format, "markdown | csv | json")
        ->check(CLI::IsMember({"markdown", "md", "csv", "json"}))
        ->capture_default_str();
}

AnalysisConfig resolve_config(const Invocation& inv, const Flags& flags) {
    AnalysisConfig c = inv.config_file.empty() ? AnalysisConfig{} : io::load_config(inv.config_file);
    auto given = [&](CLI::Option* o) { return inv.config_file.empty() || o->count() > 0; };
    if (given(flags.reference_year)) c.reference_year = inv.reference_year;
    if (given(flags.fit_threshold)) c.fit_threshold = inv.fit_threshold;
    if (given(flags.max_poly_degree)) c.max_poly_degree = inv.max_poly_degree;
    if (given(flags.year_origin)) c.year_index_origin = inv.year_origin;
    if (given(flags.kurtosis_mode)) c.kurtosis_mode = parse_kurtosis_mode(inv.kurtosis_mode);
    c.check();
    return c;
}

io::CorpusFile load(const Invocation& inv) {
    std::optional<fs::path> totals;
    if (!inv.totals.empty()) totals = inv.totals;
    auto corpus = io::load_corpus(inv.input, parse_series_mode(inv.schema), totals);
    for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << '\n';
    return corpus;
}

int run_validate(const Invocation& inv) {
    io::CorpusFile corpus;
    try {
        corpus = load(inv);
    } catch (const io::CorpusError& e) {
        for (const auto& d : e.diagnostics()) std::cout << "FAIL " << d << '\n';
        std::cout << "validation failed: " << e.diagnostics().size() << " error(s)\n";
        return exit_data;
    }
    for (const auto& s : corpus.journals)
        std::cout << fmt::format("{}: OK ({} years, {}-{})\n", s.journal_id, s.observations.size(),
                                 s.first_year(), s.last_year());
    std::cout << corpus.journals.size() << " journals OK\n";
    return exit_ok;
}

void write_tables(const std::vector<io::RenderedTable>& tables, io::OutputFormat format,
                  const std::string& output_dir) {
    if (!output_dir.empty()) {
        fs::create_directories(output_dir);
        for (const auto& t : tables)
            io::write_file(fs::path(output_dir) / (t.stem + std::string(io::extension(format))), t.content);
        return;
    }
    if (format == io::OutputFormat::json) {
        io::json all = io::json::object();
        for (const auto& t : tables) all[t.stem] = io::json::parse(t.content);
        std::cout << all.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < tables.size(); ++i) std::cout << (i ? "\n" : "") << tables[i].content;
}

void write_plots(const AnalysisReport& report, const std::string& output_dir) {
    if (output_dir.empty()) return;
    for (const auto& row : report.bestfit_table) {
        if (!row.verdict || row.verdict->irregular) continue;
        io::emit_plot_data(row, report.metadata.config.year_index_origin,
                           fs::path(output_dir) / ("plot_" + row.journal_id + ".csv"));
    }
}

int run_analysis(const std::string& subcommand, const Invocation& inv, const AnalysisConfig& config) {
    auto corpus = load(inv);
    try {
        for (const auto& s : corpus.journals) config.check_against(s);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    const auto report = build_report(corpus.journals, config, corpus.digest);
    const auto format = io::parse_output_format(inv.format);

    using io::TableId;
    io::TableSelection selection;
    if (subcommand == "indicators") {
        selection = {{TableId::cgr, TableId::gr, TableId::grm, TableId::grn}, false};
    } else if (subcommand == "stats") {
        selection = {{TableId::gr, TableId::grm, TableId::grn, TableId::extremal_values,
                      TableId::extremal_statistics},
                     true};
    } else if (subcommand == "fit") {
        selection = {{TableId::bestfit}, true};
    } else {
        selection = io::TableSelection::all();
    }

    write_tables(io::render_report(report, format, selection), format, inv.output_dir);
    if (subcommand == "fit" || subcommand == "report") write_plots(report, inv.output_dir);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Garfield Ratio indicators, descriptive statistics and best-fit trends"};
    app.set_version_flag("--version", std::string(garfield::version));
    app.require_subcommand(1);

    Invocation inv;
    Flags flags;
    auto* validate = app.add_subcommand("validate", "Check a corpus file and report per-journal results");
    add_common(*validate, inv, flags, false);

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {{"indicators", "Emit CGR and the GR/GRM/GRN tables"},
                        {"stats", "Emit GR/GRM/GRN tables with statistics and the extremal tables"},
                        {"fit", "Emit the best-fit table and plot data"},
                        {"report", "Emit every table"}};
    std::vector<std::pair<std::string, Flags>> sub_flags;
    sub_flags.reserve(std::size(subs));
    for (const auto& s : subs) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        sub_flags.emplace_back(s.name, Flags{});
        add_common(*cmd, inv, sub_flags.back().second, true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (validate->parsed()) return run_validate(inv);
        for (const auto& [name, f] : sub_flags) {
            if (!app.got_subcommand(name)) continue;
            AnalysisConfig config;
            try {
                config = resolve_config(inv, f);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return exit_usage;
            }
            return run_analysis(name, inv, config);
        }
    } catch (const io::CorpusError& e) {
        for (const auto& d : e.diagnostics()) std::cerr << "error: " << d << '\n';
        return exit_data;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_usage;
}
