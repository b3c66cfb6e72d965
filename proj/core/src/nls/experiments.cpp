#include "gibbslab/nls/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "gibbslab/measures/observables.hpp"
#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/parallel.hpp"

namespace gibbslab {

double InvarianceReport::min_p_value() const {
    double m = 1.0;
    for (const auto& r : rows) m = std::min(m, r.ks.p_value);
    return m;
}

InvarianceReport invariance_experiment(std::span<const TorusField> ensemble, const NlsConfig& cfg, double T,
                                       unsigned workers, bool split) {
    require(ensemble.size() >= (split ? 2u : 1u), "invariance_experiment: ensemble too small");
    require(T >= 0.0, "invariance_experiment: T must be non-negative");
    validate(cfg);
    const std::vector<Observable> obs = {obs_re_origin(), obs_abs_origin(), obs_lp_unit(kInfinity),
                                         obs_lp_unit(cfg.p + 1.0)};
    const std::size_t n = split ? ensemble.size() / 2 : ensemble.size();
    // values[time][observable][member]
    std::vector<std::vector<std::vector<double>>> values(3, std::vector<std::vector<double>>(obs.size(), std::vector<double>(n)));
    parallel_for(
        n,
        [&](std::size_t i) {
            TorusField u = ensemble[i];
            NlsSolver solver(u.grid(), cfg);
            const TorusField& ref = split ? ensemble[n + i] : u;
            for (std::size_t o = 0; o < obs.size(); ++o) values[0][o][i] = obs[o].eval(ref);
            solver.advance(u, T / 2.0);
            for (std::size_t o = 0; o < obs.size(); ++o) values[1][o][i] = obs[o].eval(u);
            solver.advance(u, T / 2.0);
            for (std::size_t o = 0; o < obs.size(); ++o) values[2][o][i] = obs[o].eval(u);
        },
        workers);
    InvarianceReport rep;
    const double times[] = {T / 2.0, T};
    for (int k = 1; k <= 2; ++k)
        for (std::size_t o = 0; o < obs.size(); ++o)
            rep.rows.push_back({obs[o].name, times[k - 1], stats::ks_two_sample(values[0][o], values[k][o])});
    return rep;
}

namespace {
double cx_norm(const TorusField& u, double beta) {
    const Interval I{-1.0, 1.0};
    if (beta == 0.0) return norm(u, SupNorm{I});
    return norm(u, HolderNorm{beta, I});
}
}  // namespace

double space_time_holder_norm(std::span<const TorusField> snaps, double snapshot_dt, double alpha, double beta) {
    require(!snaps.empty(), "space_time_holder_norm: no snapshots");
    double sup = 0;
    for (const auto& s : snaps) sup = std::max(sup, cx_norm(s, beta));
    if (alpha == 0.0) return sup;
    double q = 0;
    for (std::size_t i = 0; i < snaps.size(); ++i)
        for (std::size_t j = i + 1; j < snaps.size(); ++j) {
            double dt = static_cast<double>(j - i) * snapshot_dt;
            if (dt > 1.0 + 1e-12) break;
            q = std::max(q, cx_norm(snaps[j] - snaps[i], beta) / std::pow(dt, alpha));
        }
    return sup + q;
}

double HolderReport::spread_q99() const {
    double lo = kInfinity, hi = 0;
    for (const auto& r : rows) {
        lo = std::min(lo, r.q99);
        hi = std::max(hi, r.q99);
    }
    return hi / lo;
}

HolderReport holder_regularity_experiment(const std::map<double, std::vector<TorusField>>& ensembles, double alpha,
                                          double beta, double T, const NlsConfig& cfg, double snapshot_dt,
                                          unsigned workers) {
    require(ensembles.size() >= 3, "holder_regularity_experiment: need at least 3 values of L");
    require(alpha >= 0 && beta >= 0 && 2 * alpha + beta < 0.5,
            "holder_regularity_experiment: need 2 alpha + beta < 1/2");
    require(T > 0 && snapshot_dt > 0, "holder_regularity_experiment: T and snapshot spacing must be positive");
    HolderReport rep{alpha, beta, T, {}};
    const auto n_snap = static_cast<std::size_t>(std::llround(T / snapshot_dt));
    for (const auto& [L, members] : ensembles) {
        require(!members.empty(), "holder_regularity_experiment: empty ensemble");
        HolderRow row;
        row.L = L;
        row.values.resize(members.size());
        parallel_for(
            members.size(),
            [&](std::size_t i) {
                TorusField u = members[i];
                NlsSolver solver(u.grid(), cfg);
                std::vector<TorusField> snaps{u};
                for (std::size_t k = 0; k < n_snap; ++k) {
                    solver.advance(u, snapshot_dt);
                    snaps.push_back(u);
                }
                row.values[i] = space_time_holder_norm(snaps, snapshot_dt, alpha, beta);
            },
            workers);
        row.q50 = stats::quantile(row.values, 0.5);
        row.q90 = stats::quantile(row.values, 0.9);
        row.q99 = stats::quantile(row.values, 0.99);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace gibbslab
