#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gibbslab/harness/config.hpp"
#include "gibbslab/measures/gibbs.hpp"

namespace gibbslab {

inline constexpr int kCsvSchemaVersion = 1;

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CsvTable {
    std::string file;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    std::string text() const;
};

// {:.17g}, the only number format used in CSV output
std::string csv_number(double v);

struct ExperimentResult {
    std::string id;
    std::vector<CsvTable> tables;
    std::map<std::string, std::string> json_files;  // file name -> JSON text
    std::vector<Verdict> verdicts;
    std::map<std::string, double> summary;
    std::vector<std::string> warnings;
    std::vector<std::string> rng_streams;  // one line per seeded stream family
    std::optional<Ensemble> ensemble;      // `sample` only

    bool passed() const;
    const CsvTable* table(const std::string& file) const;
};

// Computes without touching the filesystem.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct RunArtifact {
    ExperimentConfig config;
    std::filesystem::path dir;
    std::vector<std::string> files;  // relative to dir, includes manifest.json and config.ini
    ExperimentResult result;
    double wall_seconds = 0.0;

    bool passed() const { return result.passed(); }
};

// Runs the experiment and writes config.ini, the CSV/JSON outputs and
// manifest.json into out_dir. On NumericalFailure a failure.json (and
// failure_state.csv when the solver left a state) is written before rethrowing.
RunArtifact run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// Plot scripts for the CSVs of an artifact, named <stem>_<config hash>.py and
// written into dir/plots. Returns their paths; none for an artifact without CSVs.
std::vector<std::filesystem::path> emit_plots(const RunArtifact& artifact);

// Per-index tail P(|X_j| > beta^{-1/q}(A + lambda)^{1/q}) <= exp(-gamma lambda)
// over an index set of size count lifts to the maximum with the threshold
// beta^{-1/q}(A + log(count)/gamma + lambda)^{1/q}.
struct TailParams {
    double A = 0.0;
    double beta = 1.0;
    double gamma = 1.0;
    double q = 1.0;
};

struct MaxTailBound {
    TailParams per_index;
    double count = 1.0;
    double shift = 0.0;  // log(count)/gamma
    double threshold(double lambda) const;
};

MaxTailBound max_tail_bound(const TailParams& per_index, double count);

}  // namespace gibbslab
