#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gibbslab/nls/nls.hpp"
#include "gibbslab/support/stats.hpp"

namespace gibbslab {

struct InvarianceRow {
    std::string observable;
    double time = 0.0;
    stats::KsResult ks;
};

struct InvarianceReport {
    std::vector<InvarianceRow> rows;
    double min_p_value() const;
    bool passes(double alpha = 0.01) const { return min_p_value() > alpha; }
};

// Evolves members to T/2 and T and compares observables against t = 0.
// split: the first half is evolved and the second half is the t = 0
// reference, so the two KS samples are independent.
InvarianceReport invariance_experiment(std::span<const TorusField> ensemble, const NlsConfig& cfg, double T,
                                       unsigned workers = 1, bool split = false);

struct HolderRow {
    double L = 0.0;
    double q50 = 0.0, q90 = 0.0, q99 = 0.0;
    std::vector<double> values;
};

struct HolderReport {
    double alpha = 0.0, beta = 0.0, T = 0.0;
    std::vector<HolderRow> rows;
    // max/min ratio of the 99th percentile across L
    double spread_q99() const;
};

// |u|_{C_t^alpha C_x^beta([0,T] x [-1,1])} from snapshots every snapshot_dt.
double space_time_holder_norm(std::span<const TorusField> snapshots, double snapshot_dt, double alpha, double beta);

HolderReport holder_regularity_experiment(const std::map<double, std::vector<TorusField>>& ensembles,
                                          double alpha, double beta, double T, const NlsConfig& cfg,
                                          double snapshot_dt = 0.02, unsigned workers = 1);

}  // namespace gibbslab
