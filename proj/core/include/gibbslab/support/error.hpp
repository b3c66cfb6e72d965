#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gibbslab {

// Bad input: preconditions, malformed configs, incompatible grids.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that ran but produced something unusable (NaN, blow-up,
// quadrature disagreement, truncation beyond tolerance).
// Node values of the state a solver held when it gave up.
struct StateDump {
    double L = 0.0;
    double t = 0.0;
    std::vector<std::complex<double>> values;
};

class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, std::uint64_t step = 0, std::shared_ptr<const StateDump> dump = nullptr)
        : std::runtime_error(what), step_(step), dump_(std::move(dump)) {}
    std::uint64_t step() const noexcept { return step_; }
    const StateDump* dump() const noexcept { return dump_.get(); }

private:
    std::uint64_t step_;
    std::shared_ptr<const StateDump> dump_;
};

[[noreturn]] inline void fail_config(const std::string& msg) { throw ConfigError(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

}  // namespace gibbslab
