#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "udc/mapdsl.hpp"

namespace udc::cli {

// ---------------------------------------------------------------------------
// Builtin maps.

/// Names: autonomous, ud-autonomous, qp1-sigma{0,1,2}, udp1-sigma{0,1,2}.
std::vector<std::string> builtin_names();
/// Map-file text of a builtin, or nullopt. `qp1-sigmaK`/`udp1-sigmaK` accept
/// any K >= 0.
std::optional<std::string> builtin_text(std::string_view name);
/// Parses every builtin; throws on the first failure.
void validate_builtins();

/// A loaded map: rational or tropical, never both.
struct LoadedMap {
    std::string source;
    std::optional<RationalMap> rational;
    std::optional<TropicalMap> tropical;

    /// The tropical map itself, or the ultradiscretization of the rational one.
    TropicalMap as_tropical() const;
};

/// Resolves a builtin name first, then a file path (relative paths against
/// `base_dir` when non-empty).
LoadedMap load_map(const std::string& source, const std::string& base_dir = "");

// ---------------------------------------------------------------------------
// Scenarios.

enum class Analysis { Orbit, ConfineDiscrete, ConfineUltra, Correspond, Lemma3 };

std::string to_string(Analysis a);
Analysis parse_analysis(std::string_view text);

enum class Format { Markdown, Csv };

struct Scenario {
    std::string map;
    Analysis analysis = Analysis::Orbit;
    std::string perturb;   // COORD@VALUE
    std::string free;      // COORD or COORD=GRID
    std::string samples;   // comma list
    std::size_t steps = 8;
    std::optional<std::string> depth;
    Format format = Format::Markdown;
    std::optional<long> sigma;
    std::optional<std::string> A, Q, T0;
    std::string init;   // NAME=VALUE list
    std::string lift;   // NAME=SERIES list
    std::string fixed;  // NAME=VALUE list
    std::string base_dir;
};

/// Flat `key = value` lines with `#` comments. Unknown or repeated keys throw
/// InvalidArgument.
Scenario parse_scenario(std::string_view text, const std::string& base_dir = "");

// ---------------------------------------------------------------------------
// Reports as tables.

struct TableRow {
    std::string step;
    std::string coordinate;
    std::string branch;
    std::string value;
    std::string flag;
};

struct Table {
    std::string title;
    std::vector<TableRow> rows;
    std::vector<std::string> notes;
    std::string verdict;
};

/// Markdown: one line per (step, coordinate) with one column per branch and
/// the flags gathered at the end; CSV: `step,coordinate,branch,value,flag`.
std::string emit_table(const Table& t, Format format);

struct RunResult {
    Table table;
    int exit_code = 0;  // 0 success/confined/equal, 1 not confined/divergence
};

/// Dispatches a scenario. Module errors propagate as udc::Error.
RunResult run_scenario(const Scenario& s);

/// Runs and renders; errors become exit code 2 with a message on `err`.
int run_and_print(const Scenario& s, std::string& out, std::string& err);

/// Splits `a=1, b=2` into ordered pairs.
std::vector<std::pair<std::string, std::string>> parse_assignments(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

}  // namespace udc::cli
