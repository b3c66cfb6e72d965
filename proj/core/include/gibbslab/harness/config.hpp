#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gibbslab {

// Plain-text sectioned key=value configuration:
//
//   # comment
//   [experiment]
//   id = tails
//   seed = 42
//   [model]
//   p = 5
//   L = 40
//
// Lists are comma separated. Unknown sections or keys are rejected against
// the schema of the selected experiment.
class ExperimentConfig {
public:
    using Section = std::map<std::string, std::string>;

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::filesystem::path& path);
    std::string serialize() const;

    const std::string& id() const { return id_; }
    void set_id(std::string id) { id_ = std::move(id); }
    std::uint64_t seed() const { return seed_; }
    void set_seed(std::uint64_t s) { seed_ = s; }

    bool has(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, std::string value);

    std::string get_string(const std::string& section, const std::string& key, const std::string& def) const;
    double get_double(const std::string& section, const std::string& key, double def) const;
    std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t def) const;
    bool get_bool(const std::string& section, const std::string& key, bool def) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    const std::vector<double>& def) const;

    const std::map<std::string, Section>& sections() const { return sections_; }

    // 64-bit FNV-1a of the serialized text, as 16 hex digits
    std::string hash() const;

    // Checks every key against the schema of id().
    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;

private:
    std::string id_;
    std::uint64_t seed_ = 0;
    std::map<std::string, Section> sections_;
};

const std::vector<std::string>& experiment_ids();

}  // namespace gibbslab
