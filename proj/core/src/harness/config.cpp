#include "gibbslab/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// experiment -> section -> allowed keys
using Schema = std::map<std::string, std::set<std::string>>;

// thinning and burn_in count proposals for pcn and time units for langevin
const std::set<std::string> kSampler = {"method", "n", "dt", "burn_in", "thinning", "chains", "step",
                                        "taming", "potential_strength"};
const std::set<std::string> kModel = {"p", "L", "M", "modes_per_unit"};
const std::set<std::string> kRun = {"workers"};
const std::set<std::string> kCoupledNls = {"dt", "burn_in", "nls_dt", "trace_dt", "runs", "pilot_runs", "window"};

const std::map<std::string, Schema>& schemas() {
    static const std::map<std::string, Schema> s = {
        {"sample", {{"model", kModel}, {"sampler", kSampler}, {"run", kRun}}},
        {"tails", {{"model", kModel}, {"sampler", kSampler}, {"tails", {"R", "levels", "gamma_max", "gamma_min"}}, {"run", kRun}}},
        {"moments", {{"model", {"p", "L", "modes_per_unit"}}, {"sampler", kSampler}, {"moments", {"beta_factor", "max_se"}}, {"run", kRun}}},
        {"invariance", {{"model", kModel}, {"sampler", kSampler}, {"nls", {"dt", "T", "padding", "split"}}, {"run", kRun}}},
        {"gronwall", {{"model", {"p", "L", "modes_per_unit"}}, {"coupled", kCoupledNls},
                      {"gronwall", {"T", "R", "delta", "min_fraction"}}, {"run", kRun}}},
        {"iterated", {{"model", {"p", "L", "modes_per_unit"}}, {"coupled", kCoupledNls},
                      {"iterated", {"T", "R", "J", "tau0", "min_fraction"}}, {"run", kRun}}},
        {"coupling", {{"model", {"p", "modes_per_unit"}}, {"coupled", {"dt", "burn_in", "K", "L", "pairs", "pilot_pairs", "record_dt"}},
                      {"coupling", {"eta", "alpha", "beta", "kappa", "theta"}}, {"run", kRun}}},
        {"wasserstein", {{"model", {"p", "modes_per_unit"}}, {"coupled", {"dt", "burn_in", "K", "L", "pairs", "record_dt"}},
                         {"wasserstein", {"theta"}}, {"run", kRun}}},
        {"convergence", {{"model", {"p", "modes_per_unit"}}, {"coupled", {"dt", "burn_in", "L", "runs", "nls_dt"}},
                         {"convergence", {"T", "alpha", "window", "snapshot_dt"}}, {"run", kRun}}},
    };
    return s;
}

template <class T>
T parse_number(const std::string& v, const std::string& where) {
    T out{};
    auto s = trim(v);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError(fmt::format("config: {} = '{}' is not a number", where, v));
    return out;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids = {"sample", "tails", "moments", "invariance", "gronwall",
                                                 "iterated", "coupling", "wasserstein", "convergence"};
    return ids;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig c;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    bool have_id = false;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(fmt::format("config line {}: malformed section header", lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(fmt::format("config line {}: empty section name", lineno));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("config line {}: expected key = value", lineno));
        if (section.empty()) throw ConfigError(fmt::format("config line {}: key outside any section", lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", lineno));
        if (section == "experiment") {
            if (key == "id") {
                c.id_ = val;
                have_id = true;
            } else if (key == "seed") {
                c.seed_ = parse_number<std::uint64_t>(val, "experiment.seed");
            } else {
                throw ConfigError(fmt::format("config line {}: unknown key experiment.{}", lineno, key));
            }
            continue;
        }
        if (c.sections_[section].count(key)) throw ConfigError(fmt::format("config line {}: duplicate key {}.{}", lineno, section, key));
        c.sections_[section][key] = val;
    }
    if (!have_id) throw ConfigError("config: missing [experiment] id");
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
    std::string out = fmt::format("[experiment]\nid = {}\nseed = {}\n", id_, seed_);
    for (const auto& [name, sec] : sections_) {
        out += fmt::format("\n[{}]\n", name);
        for (const auto& [k, v] : sec) out += fmt::format("{} = {}\n", k, v);
    }
    return out;
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

void ExperimentConfig::set(const std::string& section, const std::string& key, std::string value) {
    sections_[section][key] = std::move(value);
}

std::string ExperimentConfig::get_string(const std::string& section, const std::string& key, const std::string& def) const {
    return has(section, key) ? sections_.at(section).at(key) : def;
}

double ExperimentConfig::get_double(const std::string& section, const std::string& key, double def) const {
    if (!has(section, key)) return def;
    return parse_number<double>(sections_.at(section).at(key), section + "." + key);
}

std::int64_t ExperimentConfig::get_int(const std::string& section, const std::string& key, std::int64_t def) const {
    if (!has(section, key)) return def;
    return parse_number<std::int64_t>(sections_.at(section).at(key), section + "." + key);
}

bool ExperimentConfig::get_bool(const std::string& section, const std::string& key, bool def) const {
    if (!has(section, key)) return def;
    const auto& v = sections_.at(section).at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(fmt::format("config: {}.{} = '{}' is not a boolean", section, key, v));
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& section, const std::string& key,
                                                  const std::vector<double>& def) const {
    if (!has(section, key)) return def;
    std::vector<double> out;
    std::stringstream ss(sections_.at(section).at(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(item, section + "." + key));
    if (out.empty()) throw ConfigError(fmt::format("config: {}.{} is an empty list", section, key));
    return out;
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

void ExperimentConfig::validate() const {
    auto it = schemas().find(id_);
    if (it == schemas().end()) throw ConfigError("config: unknown experiment id '" + id_ + "'");
    const Schema& schema = it->second;
    for (const auto& [name, sec] : sections_) {
        auto s = schema.find(name);
        if (s == schema.end()) throw ConfigError(fmt::format("config: section [{}] is not valid for experiment {}", name, id_));
        for (const auto& [k, v] : sec)
            if (!s->second.count(k)) throw ConfigError(fmt::format("config: unknown key {}.{} for experiment {}", name, k, id_));
    }
}

}  // namespace gibbslab
