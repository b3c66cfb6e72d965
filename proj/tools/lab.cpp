// lab <experiment> --config <path> [--strict] [--seed N] [--out DIR]
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gibbslab/harness/harness.hpp"
#include "gibbslab/support/error.hpp"

namespace {
enum Exit { kPass = 0, kVerdict = 1, kConfig = 2, kNumerical = 3 };
}

int main(int argc, char** argv) {
    using namespace gibbslab;
    CLI::App app{"gibbslab experiment runner"};
    std::string experiment, config_path, out_dir;
    std::uint64_t seed = 0;
    bool strict = false, plots = false;
    app.add_option("experiment", experiment, "experiment id")->required()->check(CLI::IsMember(experiment_ids()));
    app.add_option("--config", config_path, "sectioned key = value config file");
    auto* seed_opt = app.add_option("--seed", seed, "override [experiment] seed");
    app.add_option("--out", out_dir, "output directory (default runs/<experiment>-<config hash>)");
    app.add_flag("--strict", strict, "exit 1 when any verdict fails");
    app.add_flag("--plots", plots, "also write plot scripts");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kConfig;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = ExperimentConfig::load(config_path);
            if (cfg.id() != experiment)
                throw ConfigError(fmt::format("config is for experiment '{}', not '{}'", cfg.id(), experiment));
        } else {
            cfg.set_id(experiment);
        }
        if (*seed_opt) cfg.set_seed(seed);
        cfg.validate();
        if (out_dir.empty()) out_dir = fmt::format("runs/{}-{}", experiment, cfg.hash().substr(0, 8));
        RunArtifact a = run(cfg, out_dir);
        if (plots) emit_plots(a);
        for (const auto& v : a.result.verdicts) std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << "\n";
        for (const auto& w : a.result.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << fmt::format("{} finished in {:.1f} s, outputs in {}\n", experiment, a.wall_seconds, a.dir.string());
        return strict && !a.passed() ? kVerdict : kPass;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
}
