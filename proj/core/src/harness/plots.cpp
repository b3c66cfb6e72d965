#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "gibbslab/harness/harness.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

namespace {

constexpr const char* kPrelude = R"py(import csv
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

DATA = @DATA@
OUT = @OUT@

with open(DATA) as fh:
    rows = list(csv.DictReader(fh))

def col(name, subset=None):
    return [float(r[name]) for r in (rows if subset is None else subset)]

fig, ax = plt.subplots(figsize=(6, 4))
)py";

constexpr const char* kEpilogue = R"py(fig.tight_layout()
fig.savefig(OUT, dpi=150)
print(OUT)
)py";

std::string body_for(const std::string& stem) {
    if (stem == "tails")
        return R"py(import math
for q in sorted({r["q"] for r in rows}, key=float):
    sub = [r for r in rows if r["q"] == q]
    x = [math.log(math.log(v)) for v in col("R", sub)]
    y = [math.log(v) for v in col("quantile", sub)]
    ax.plot(x, y, "o-", label="q = " + q)
ax.set_xlabel("log log R")
ax.set_ylabel("log quantile of sup |phi|")
ax.legend()
)py";
    if (stem.rfind("mass_trace_R", 0) == 0)
        return R"py(for key in sorted({(r["p"], r["run"]) for r in rows}, key=lambda k: (float(k[0]), int(k[1]))):
    sub = [r for r in rows if (r["p"], r["run"]) == key]
    ax.semilogy(col("t", sub), col("M_R", sub), color="C0" if key[0] == rows[0]["p"] else "C1", alpha=0.15, lw=0.7)
    ax.semilogy(col("t", sub), col("envelope", sub), color="k", alpha=0.05, lw=0.7)
ax.set_xlabel("t")
ax.set_ylabel("M_R(w(t)) and envelope")
)py";
    if (stem == "wasserstein")
        return R"py(ax.errorbar(col("L"), col("W1"), yerr=[2 * s for s in col("stderr")], fmt="o-")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("L")
ax.set_ylabel("W1(mu_K, mu_L)")
)py";
    if (stem == "quality")
        return R"py(p = col("exceedance")
ax.errorbar(col("L"), p, yerr=[[a - b for a, b in zip(p, col("CI_low"))], [b - a for a, b in zip(p, col("CI_high"))]], fmt="o-")
ax.set_xscale("log")
ax.set_xlabel("L")
ax.set_ylabel("exceedance probability")
)py";
    if (stem == "coupled_runs")
        return R"py(for L in sorted({r["L"] for r in rows}, key=float):
    sub = [r for r in rows if r["L"] == L]
    ax.semilogy(col("t", sub), col("ce_distance", sub), label="L = " + L)
ax.set_xlabel("t")
ax.set_ylabel("mean CE distance")
ax.legend()
)py";
    if (stem == "moments")
        return R"py(ax.errorbar(col("L"), col("estimate"), yerr=[3 * s for s in col("stderr")], fmt="o")
ax.set_xlabel("L")
ax.set_ylabel("exponential moment")
)py";
    if (stem == "convergence")
        return R"py(ax.plot(col("L"), col("median"), "o-")
ax.fill_between(col("L"), col("q25"), col("q75"), alpha=0.3)
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("L")
ax.set_ylabel("sup_t |u_L - u_L/2|_C^alpha")
)py";
    if (stem == "invariance")
        return R"py(labels = [r["observable"] + " t=" + r["t"] for r in rows]
ax.bar(range(len(rows)), col("p_value"))
ax.axhline(0.01, color="r")
ax.set_xticks(range(len(rows)))
ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
ax.set_ylabel("KS p-value")
)py";
    if (stem == "legs")
        return R"py(for j in sorted({r["j"] for r in rows}, key=int):
    sub = [r for r in rows if r["j"] == j]
    ax.semilogy(col("run", sub), [m / b for m, b in zip(col("M_sup", sub), col("bound", sub))], ".", label="leg " + j)
ax.axhline(1.0, color="k")
ax.set_xlabel("run")
ax.set_ylabel("leg sup / bound")
ax.legend()
)py";
    return "";
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(const RunArtifact& a) {
    std::vector<std::filesystem::path> out;
    std::vector<std::string> csvs;
    for (const auto& f : a.files)
        if (std::filesystem::path(f).extension() == ".csv") csvs.push_back(f);
    if (csvs.empty()) {
        std::cerr << "warning: artifact in " << a.dir.string() << " has no CSV outputs; no plot scripts written\n";
        return out;
    }
    const std::string hash = a.config.hash().substr(0, 8);
    const auto plots = a.dir / "plots";
    for (const auto& f : csvs) {
        const auto data = std::filesystem::absolute(a.dir / f);
        if (!std::filesystem::exists(data)) throw ConfigError("emit_plots: missing CSV " + data.string());
        const std::string stem = std::filesystem::path(f).stem().string();
        std::string body = body_for(stem);
        if (body.empty()) continue;
        std::filesystem::create_directories(plots);
        const auto script = plots / fmt::format("{}_{}.py", stem, hash);
        const auto png = std::filesystem::absolute(plots / fmt::format("{}_{}.png", stem, hash));
        std::ofstream os(script);
        // python repr of a path: quote with single quotes, escape backslashes and quotes
        auto repr = [](const std::string& s) {
            std::string r = "'";
            for (char ch : s) {
                if (ch == '\\' || ch == '\'') r += '\\';
                r += ch;
            }
            return r + "'";
        };
        std::string prelude = kPrelude;
        prelude.replace(prelude.find("@DATA@"), 6, repr(data.string()));
        prelude.replace(prelude.find("@OUT@"), 5, repr(png.string()));
        os << prelude;
        os << body << kEpilogue;
        if (!os) throw ConfigError("emit_plots: cannot write " + script.string());
        out.push_back(script);
    }
    return out;
}

}  // namespace gibbslab
