#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "e2oc/engines/evaluator.hpp"
#include "e2oc/moo/archive.hpp"

namespace e2oc::cli {

/// One evaluated combination inside a run directory:
/// <run>/online/entries.kv lists labels and the train/test split,
/// <run>/online/<dir>/record.kv holds the EvaluationRecord and
/// <run>/contexts/<instance>.kv the HV contexts.
struct ReportEntry {
    std::string label;
    std::filesystem::path run_dir;
    /// Directory holding record.kv and the per-run artifacts.
    std::filesystem::path dir;
    engines::EvaluationRecord record;
    std::map<std::string, std::string> set_of;  // instance -> train | test
};

/// Directory of a labelled entry: the label, with trailing primes written as ".chain<n>".
std::string entry_dir_name(const std::string& label);

/// Writes online/entries.kv for the given labels.
void write_entries(const std::filesystem::path& run_dir, const std::vector<std::string>& labels,
                   const std::vector<std::string>& train, const std::vector<std::string>& test);
void write_contexts(const std::filesystem::path& run_dir, const std::vector<engines::InstanceEntry>& instances);

/// Entries of one run directory. Throws ConfigError when it has none.
std::vector<ReportEntry> load_entries(const std::filesystem::path& run_dir);
std::map<std::string, moo::HvContext> load_contexts(const std::filesystem::path& run_dir);

struct StatRow {
    std::string entry;
    std::string scope;  // instance id, or train / test / all
    std::string set;
    int instances = 0;
    int runs = 0;
    double hv_mean = 0.0, hv_std = 0.0;
    double igd_mean = 0.0, igd_std = 0.0;
    std::optional<double> ri;
};

struct Report {
    std::vector<StatRow> sets;
    std::vector<StatRow> instances;
    std::string baseline;
};

/// Aggregates entries from several run directories. IGD uses, per instance,
/// the union of every compared entry's final fronts as reference front. RI
/// is taken on mean HV against the entry labelled `baseline` (matched exactly
/// or as "<run>/<label>"). Throws ConfigError when the runs disagree on an
/// instance's HV context.
Report build_report(const std::vector<std::filesystem::path>& run_dirs, const std::string& baseline,
                    const std::optional<std::filesystem::path>& out = std::nullopt);

/// table.tsv (per set) and instances.tsv; build_report with `out` also writes
/// trajectories.tsv, fronts.tsv and reference/<instance>.tsv.
void write_report_tables(const std::filesystem::path& out, const Report& r);
std::string format_set_table(const Report& r);

}  // namespace e2oc::cli
