#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "gibbslab/harness/harness.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto d = fs::temp_directory_path() / ("gibbslab_harness_" + name);
    fs::remove_all(d);
    return d;
}

const char* kTinySample = R"(
[experiment]
id = sample
seed = 7
[model]
p = 3
L = 2
M = 32
[sampler]
method = gff
n = 3
)";

// cheap enough for a unit test, still exercises the whole pair pipeline
const char* kTinyGronwall = R"(
[experiment]
id = gronwall
seed = 3
[model]
p = 3
L = 8, 4
modes_per_unit = 16
[coupled]
burn_in = 0.1
runs = 1
pilot_runs = 1
trace_dt = 0.05
[gronwall]
T = 0.1
R = 16, 32
)";

TEST(Config, RoundTrip) {
    auto c = ExperimentConfig::parse(kTinyGronwall);
    EXPECT_EQ(c.id(), "gronwall");
    EXPECT_EQ(c.seed(), 3u);
    EXPECT_EQ(c.get_doubles("gronwall", "R", {}), (std::vector<double>{16, 32}));
    auto d = ExperimentConfig::parse(c.serialize());
    EXPECT_EQ(c, d);
    EXPECT_EQ(c.hash(), d.hash());
    EXPECT_EQ(c.hash().size(), 16u);
    d.set_seed(4);
    EXPECT_NE(c.hash(), d.hash());
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, Rejections) {
    auto bad_key = ExperimentConfig::parse("[experiment]\nid = sample\n[model]\nbogus = 1\n");
    EXPECT_THROW(bad_key.validate(), ConfigError);
    auto bad_section = ExperimentConfig::parse("[experiment]\nid = sample\n[gronwall]\nT = 1\n");
    EXPECT_THROW(bad_section.validate(), ConfigError);
    EXPECT_THROW(ExperimentConfig::parse("[model]\np = 3\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::parse("[experiment]\nid = sample\n[model]\np = 3\np = 5\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::parse("[experiment]\nid = sample\nseed = x\n"), ConfigError);
    EXPECT_THROW(ExperimentConfig::parse("p = 3\n"), ConfigError);
    auto c = ExperimentConfig::parse("[experiment]\nid = sample\n[model]\np = three\n");
    EXPECT_THROW(c.get_double("model", "p", 0), ConfigError);
    EXPECT_THROW(ExperimentConfig::parse("[experiment]\nid = nope\n").validate(), ConfigError);
}

TEST(Run, RerunIsByteIdentical) {
    auto c = ExperimentConfig::parse(kTinyGronwall);
    auto a = run(c, scratch("rerun_a"));
    auto b = run(c, scratch("rerun_b"));
    ASSERT_EQ(a.files, b.files);
    std::size_t csvs = 0;
    for (const auto& f : a.files) {
        if (fs::path(f).extension() != ".csv") continue;
        ++csvs;
        EXPECT_EQ(slurp(a.dir / f), slurp(b.dir / f)) << f;
    }
    EXPECT_EQ(csvs, 2u);  // one mass trace per R
    EXPECT_EQ(slurp(a.dir / "config.ini"), c.serialize());
}

TEST(Run, EmptySampleWritesManifest) {
    auto c = ExperimentConfig::parse(kTinySample);
    c.set("sampler", "n", "0");
    auto a = run(c, scratch("empty"));
    ASSERT_TRUE(a.result.ensemble.has_value());
    EXPECT_TRUE(a.result.ensemble->members.empty());
    auto m = nlohmann::json::parse(slurp(a.dir / "manifest.json"));
    EXPECT_EQ(m["experiment"], "sample");
    EXPECT_TRUE(a.passed());
}

TEST(Plots, NoCsvNoScripts) {
    auto a = run(ExperimentConfig::parse(kTinySample), scratch("plots_none"));
    EXPECT_TRUE(emit_plots(a).empty());
    EXPECT_FALSE(fs::exists(a.dir / "plots"));
}

TEST(Plots, OneScriptPerTraceWithHashedNames) {
    auto c = ExperimentConfig::parse(kTinyGronwall);
    auto a = run(c, scratch("plots_gronwall"));
    auto scripts = emit_plots(a);
    const std::string h = c.hash().substr(0, 8);
    std::size_t traces = 0;
    for (const auto& s : scripts) {
        const std::string name = s.filename().string();
        EXPECT_NE(name.find(h), std::string::npos) << name;
        if (name.rfind("mass_trace_R", 0) == 0) ++traces;
    }
    EXPECT_EQ(traces, 2u);
    auto again = emit_plots(a);
    EXPECT_EQ(scripts, again);
}

TEST(MaxTail, ShiftArithmetic) {
    TailParams t{1.5, 0.3, 0.8, 2.0};
    auto one = max_tail_bound(t, 1);
    EXPECT_EQ(one.shift, 0.0);
    EXPECT_NEAR(one.threshold(2.0), std::pow(0.3, -0.5) * std::sqrt(3.5), 1e-14);
    auto a = max_tail_bound(t, 64), b = max_tail_bound(t, 128);
    EXPECT_NEAR(b.shift - a.shift, std::log(2.0) / 0.8, 1e-14);
    auto e = max_tail_bound({0.0, 1.0, 1.0, 1.0}, std::exp(1.0));
    EXPECT_NEAR(e.threshold(0.7), 1.7, 1e-14);
}

#ifdef GIBBSLAB_LAB_EXE
int lab(const std::string& args) {
    const std::string cmd = std::string(GIBBSLAB_LAB_EXE) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
    auto dir = scratch(name);
    fs::create_directories(dir);
    std::ofstream(dir / "config.ini") << text;
    return dir / "config.ini";
}

TEST(LabCli, ExitCodes) {
    auto ok = write_config("cli_ok", kTinySample);
    EXPECT_EQ(lab("sample --config " + ok.string() + " --out " + (ok.parent_path() / "out").string()), 0);

    // gff draws with a positive potential strength fail the "below" verdict at gamma_max < 0
    auto verdict = write_config("cli_verdict", R"(
[experiment]
id = tails
[model]
p = 5
L = 10
M = 256
[sampler]
method = gff
n = 200
[tails]
R = 2, 4, 8
gamma_max = -1
)");
    const std::string out = " --out " + (verdict.parent_path() / "out").string();
    EXPECT_EQ(lab("tails --config " + verdict.string() + out), 0);
    EXPECT_EQ(lab("tails --config " + verdict.string() + out + " --strict"), 1);

    auto bad = write_config("cli_bad", "[experiment]\nid = sample\n[model]\nbogus = 1\n");
    EXPECT_EQ(lab("sample --config " + bad.string()), 2);
    EXPECT_EQ(lab("tails --config " + ok.string()), 2);  // id mismatch

    auto blow = write_config("cli_blow", R"(
[experiment]
id = sample
[model]
p = 5
L = 1
M = 32
[sampler]
method = langevin
n = 2
chains = 1
dt = 0.5
burn_in = 20
taming = false
potential_strength = 1e6
)");
    const auto blow_out = blow.parent_path() / "out";
    EXPECT_EQ(lab("sample --config " + blow.string() + " --out " + blow_out.string()), 3);
    ASSERT_TRUE(fs::exists(blow_out / "failure.json"));
    auto j = nlohmann::json::parse(slurp(blow_out / "failure.json"));
    EXPECT_EQ(j["experiment"], "sample");
    EXPECT_GE(j["step"].get<std::size_t>(), 1u);
    if (j.contains("state_file")) EXPECT_TRUE(fs::exists(blow_out / "failure_state.csv"));
}
#endif

}  // namespace
}  // namespace gibbslab
