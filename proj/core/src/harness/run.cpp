#include <chrono>
#include <cmath>
#include <numbers>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "gibbslab/spectral/field_io.hpp"
#include "gibbslab/support/error.hpp"
#include "internal.hpp"

namespace gibbslab {

std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

void CsvTable::add(std::vector<std::string> row) {
    require(row.size() == columns.size(), "csv: row width does not match the header of " + file);
    rows.push_back(std::move(row));
}

std::string CsvTable::text() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
        out += "\n";
    }
    return out;
}

bool ExperimentResult::passed() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

const CsvTable* ExperimentResult::table(const std::string& file) const {
    for (const auto& t : tables)
        if (t.file == file) return &t;
    return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto& id = config.id();
    if (id == "sample") return harness::run_sample(config);
    if (id == "tails") return harness::run_tails(config);
    if (id == "moments") return harness::run_moments(config);
    if (id == "invariance") return harness::run_invariance(config);
    if (id == "gronwall") return harness::run_gronwall(config);
    if (id == "iterated") return harness::run_iterated(config);
    if (id == "coupling") return harness::run_coupling(config);
    if (id == "wasserstein") return harness::run_wasserstein(config);
    if (id == "convergence") return harness::run_convergence(config);
    throw ConfigError("unknown experiment id '" + id + "'");
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ConfigError("cannot open " + p.string() + " for writing");
    os << text;
    if (!os) throw ConfigError("write failed for " + p.string());
}

void write_failure(const std::filesystem::path& dir, const ExperimentConfig& config, const NumericalFailure& e) {
    nlohmann::json j = {{"experiment", config.id()}, {"seed", config.seed()}, {"error", e.what()}, {"step", e.step()}};
    if (const StateDump* d = e.dump()) {
        j["state_file"] = "failure_state.csv";
        j["state_L"] = d->L;
        j["state_t"] = d->t;
        const std::size_t M = d->values.size();
        std::string csv = "x,re,im\n";
        for (std::size_t k = 0; k < M; ++k) {
            double x = -std::numbers::pi * d->L + static_cast<double>(k) * 2.0 * std::numbers::pi * d->L / static_cast<double>(M);
            csv += fmt::format("{:.17g},{:.17g},{:.17g}\n", x, d->values[k].real(), d->values[k].imag());
        }
        write_text(dir / "failure_state.csv", csv);
    }
    write_text(dir / "failure.json", j.dump(2) + "\n");
}

}  // namespace

RunArtifact run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    RunArtifact a;
    a.config = config;
    a.dir = out_dir;
    write_text(out_dir / "config.ini", config.serialize());
    a.files.push_back("config.ini");
    const auto t0 = std::chrono::steady_clock::now();
    try {
        a.result = run_experiment(config);
    } catch (const NumericalFailure& e) {
        write_failure(out_dir, config, e);
        throw;
    }
    a.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (const auto& t : a.result.tables) {
        write_text(out_dir / t.file, t.text());
        a.files.push_back(t.file);
    }
    for (const auto& [name, text] : a.result.json_files) {
        write_text(out_dir / name, text + "\n");
        a.files.push_back(name);
    }
    if (a.result.ensemble) {
        save_ensemble(out_dir / "ensemble", *a.result.ensemble);
        a.files.push_back("ensemble/fields.bin");
        a.files.push_back("ensemble/index.json");
    }

    nlohmann::json m;
    m["experiment"] = config.id();
    m["config"] = config.serialize();
    m["config_hash"] = config.hash();
    m["csv_schema_version"] = kCsvSchemaVersion;
    m["field_format_version"] = kFieldFormatVersion;
    m["files"] = a.files;
    nlohmann::json schemas = nlohmann::json::object();
    for (const auto& t : a.result.tables) schemas[t.file] = t.columns;
    m["csv_columns"] = schemas;
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : a.result.verdicts) verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    m["verdicts"] = verdicts;
    m["passed"] = a.result.passed();
    m["summary"] = a.result.summary;
    m["warnings"] = a.result.warnings;
    m["rng"] = {{"seed", config.seed()},
                {"scheme", "splitmix64 counter derivation (seed, stream, index) into mt19937_64"},
                {"streams", a.result.rng_streams}};
    m["wall_clock_seconds"] = a.wall_seconds;
    write_text(out_dir / "manifest.json", m.dump(2) + "\n");
    a.files.push_back("manifest.json");
    return a;
}

double MaxTailBound::threshold(double lambda) const {
    const double inner = per_index.A + shift + lambda;
    require(inner >= 0.0, "max_tail_bound: A + log|J|/gamma + lambda must be non-negative");
    return std::pow(per_index.beta, -1.0 / per_index.q) * std::pow(inner, 1.0 / per_index.q);
}

MaxTailBound max_tail_bound(const TailParams& t, double count) {
    require(t.A >= 0 && t.beta > 0 && t.gamma > 0 && t.q > 0, "max_tail_bound: parameters must be positive");
    require(count >= 1, "max_tail_bound: the index set must be non-empty");
    return {t, count, std::log(count) / t.gamma};
}

}  // namespace gibbslab
