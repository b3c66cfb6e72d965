#include "gibbslab/measures/gibbs.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gibbslab/measures/gff.hpp"
#include "gibbslab/spectral/field_io.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

void validate(const GibbsSpec& spec) {
    require(spec.p >= 1.0 && std::isfinite(spec.p), "Gibbs spec: p must be >= 1");
    require(spec.potential_strength >= 0.0, "Gibbs spec: potential strength must be >= 0");
}

double potential_energy(const TorusField& phi, double p) {
    const double q = p + 1.0;
    double s = 0;
    if (p == 3.0) {
        for (auto v : phi.values()) {
            double a = std::norm(v);
            s += a * a;
        }
    } else if (p == 5.0) {
        for (auto v : phi.values()) {
            double a = std::norm(v);
            s += a * a * a;
        }
    } else {
        for (auto v : phi.values()) s += std::pow(std::abs(v), q);
    }
    return phi.grid().dx() * s / q;
}

double log_gibbs_weight(const TorusField& phi, double p) {
    double e = potential_energy(phi, p);
    if (!std::isfinite(e)) throw NumericalFailure("log_gibbs_weight: potential overflow");
    return -e;
}

Ensemble sample_gibbs_pcn(const GibbsSpec& spec, const PcnOptions& opts, Rng& rng) {
    validate(spec);
    require(opts.step > 0.0 && opts.step <= 1.0, "pCN: step must lie in (0, 1]");
    require(opts.n_samples > 0, "pCN: need at least one sample");
    require(opts.thinning >= 1, "pCN: thinning must be >= 1");
    const auto& g = spec.grid;
    const double s = spec.potential_strength;
    const double keep = std::sqrt(1.0 - opts.step * opts.step);

    // work in coefficient space; the reference measure is Gaussian there too
    std::vector<cplx> c(g.M()), xi(g.M()), prop(g.M());
    sample_gff_coefficients(g, rng, c);
    TorusField cur = TorusField::from_coefficients(g, c);
    double phi_cur = s * potential_energy(cur, spec.p);
    TorusField trial(g);

    Ensemble out{spec, {}, {}};
    out.members.reserve(opts.n_samples);
    std::size_t accepted = 0, proposals = 0;
    const std::size_t total = opts.burn_in + opts.n_samples * opts.thinning;
    for (std::size_t it = 0; it < total; ++it) {
        sample_gff_coefficients(g, rng, xi);
        for (std::size_t j = 0; j < g.M(); ++j) prop[j] = keep * c[j] + opts.step * xi[j];
        from_coefficients(prop, trial.storage());
        double phi_new = s * potential_energy(trial, spec.p);
        if (!std::isfinite(phi_new)) throw NumericalFailure("pCN: non-finite potential", it);
        double u = rng.uniform();
        ++proposals;
        if (std::log(u) < phi_cur - phi_new) {
            std::swap(c, prop);
            std::swap(cur, trial);
            phi_cur = phi_new;
            ++accepted;
        }
        if (it >= opts.burn_in && (it - opts.burn_in + 1) % opts.thinning == 0) out.members.push_back(cur);
    }
    out.provenance.sampler = "pcn";
    out.provenance.seed = rng.seed();
    out.provenance.burn_in = static_cast<double>(opts.burn_in);
    out.provenance.thinning = static_cast<double>(opts.thinning);
    out.provenance.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(proposals);
    if (out.provenance.acceptance_rate < 0.05 || out.provenance.acceptance_rate > 0.95)
        out.provenance.warnings.push_back("pCN acceptance rate outside [0.05, 0.95]");
    return out;
}

void save_ensemble(const std::filesystem::path& dir, const Ensemble& e) {
    std::filesystem::create_directories(dir);
    std::vector<FieldRecord> recs;
    recs.reserve(e.members.size());
    for (std::size_t i = 0; i < e.members.size(); ++i) recs.push_back({static_cast<double>(i), e.members[i]});
    write_fields(dir / "fields.bin", e.spec.grid, recs);
    nlohmann::json j;
    j["spec"] = {{"L", e.spec.grid.L()},
                 {"M", e.spec.grid.M()},
                 {"p", e.spec.p},
                 {"potential_strength", e.spec.potential_strength}};
    j["seeds"] = {e.provenance.seed};
    j["provenance"] = {{"sampler", e.provenance.sampler},
                       {"burn_in", e.provenance.burn_in},
                       {"thinning", e.provenance.thinning},
                       {"acceptance_rate", e.provenance.acceptance_rate},
                       {"warnings", e.provenance.warnings}};
    j["members"] = e.members.size();
    j["fields"] = "fields.bin";
    std::ofstream(dir / "index.json") << j.dump(2) << "\n";
}

Ensemble load_ensemble(const std::filesystem::path& dir) {
    std::ifstream is(dir / "index.json");
    if (!is) throw ConfigError("load_ensemble: missing index.json in " + dir.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("load_ensemble: bad index: ") + ex.what());
    }
    auto recs = read_fields(dir / j.at("fields").get<std::string>());
    Ensemble e{GibbsSpec{TorusGrid(j["spec"]["L"].get<double>(), j["spec"]["M"].get<std::size_t>()),
                         j["spec"]["p"].get<double>(), j["spec"]["potential_strength"].get<double>()},
               {},
               {}};
    require(recs.empty() || recs.front().field.grid() == e.spec.grid, "load_ensemble: grid mismatch between index and fields");
    for (auto& r : recs) e.members.push_back(std::move(r.field));
    const auto& pv = j["provenance"];
    e.provenance.sampler = pv["sampler"].get<std::string>();
    e.provenance.seed = j["seeds"].at(0).get<std::uint64_t>();
    e.provenance.burn_in = pv["burn_in"].get<double>();
    e.provenance.thinning = pv["thinning"].get<double>();
    e.provenance.acceptance_rate = pv["acceptance_rate"].get<double>();
    e.provenance.warnings = pv["warnings"].get<std::vector<std::string>>();
    return e;
}

}  // namespace gibbslab
