#include "gibbslab/nls/nls.hpp"

#include <cmath>

#include <fmt/format.h>

#include "gibbslab/support/error.hpp"

namespace gibbslab {

void validate(const NlsConfig& cfg) {
    require(cfg.p > 1.0 && std::isfinite(cfg.p), "nls: p must be > 1");
    require(cfg.dt > 0.0 && std::isfinite(cfg.dt), "nls: dt must be positive");
    require(cfg.padding >= 1, "nls: padding factor must be >= 1");
}

bool alias_free(const NlsConfig& cfg) {
    double r = std::round(cfg.p);
    bool odd_integer = std::abs(cfg.p - r) < 1e-12 && static_cast<long>(r) % 2 == 1;
    return odd_integer && static_cast<double>(cfg.padding) >= (cfg.p + 1.0) / 2.0;
}

namespace {

inline double power_p_minus_1(double a2, double p) {
    // |u|^{p-1} from |u|^2; 0^{p-1} = 0
    if (p == 3.0) return a2;
    if (p == 5.0) return a2 * a2;
    if (a2 == 0.0) return 0.0;
    return std::pow(a2, 0.5 * (p - 1.0));
}

// zero-pad coefficients from M to P modes (FFT index layout)
void pad_coefficients(std::span<const cplx> c, std::span<cplx> out) {
    const std::size_t M = c.size(), P = out.size();
    std::fill(out.begin(), out.end(), cplx{});
    for (std::size_t j = 0; j < M / 2; ++j) out[j] = c[j];
    for (std::size_t j = M / 2; j < M; ++j) out[P - M + j] = c[j];
}

void truncate_coefficients(std::span<const cplx> big, std::span<cplx> out) {
    const std::size_t M = out.size(), P = big.size();
    for (std::size_t j = 0; j < M / 2; ++j) out[j] = big[j];
    for (std::size_t j = M / 2; j < M; ++j) out[j] = big[P - M + j];
}

// Coefficient layout of the padded grid of period 2 pi L: nodes again start at
// -pi L, so the (-1)^k phase convention of to_coefficients carries over.
}  // namespace

NlsSolver::NlsSolver(const TorusGrid& grid, const NlsConfig& cfg) : grid_(grid), cfg_(cfg) {
    validate(cfg_);
    const std::size_t M = grid_.M();
    half_kinetic_.resize(M);
    for (std::size_t j = 0; j < M; ++j) {
        double n = grid_.frequency(j);
        double ph = -0.5 * cfg_.dt * n * n;
        half_kinetic_[j] = cplx(std::cos(ph), std::sin(ph));
    }
    hat_.resize(M);
    if (cfg_.padding > 1) {
        pad_hat_.resize(M * cfg_.padding);
        pad_vals_.resize(M * cfg_.padding);
    }
}

void NlsSolver::potential(TorusField& u) {
    const double a = cfg_.dt * cfg_.nonlinearity;
    if (a == 0.0) return;
    if (cfg_.padding == 1) {
        for (auto& v : u.storage()) {
            double ph = -a * power_p_minus_1(std::norm(v), cfg_.p);
            v *= cplx(std::cos(ph), std::sin(ph));
        }
        return;
    }
    // rotate on the padded grid, then project back to the resolved modes
    to_coefficients(u.values(), hat_);
    pad_coefficients(hat_, pad_hat_);
    from_coefficients(pad_hat_, pad_vals_);
    for (auto& v : pad_vals_) {
        double ph = -a * power_p_minus_1(std::norm(v), cfg_.p);
        v *= cplx(std::cos(ph), std::sin(ph));
    }
    to_coefficients(pad_vals_, pad_hat_);
    truncate_coefficients(pad_hat_, hat_);
    from_coefficients(hat_, u.storage());
}

void NlsSolver::step(TorusField& u) {
    require(u.grid() == grid_, "nls: field grid does not match solver");
    to_coefficients(u.values(), hat_);
    for (std::size_t j = 0; j < hat_.size(); ++j) hat_[j] *= half_kinetic_[j];
    from_coefficients(hat_, u.storage());
    potential(u);
    to_coefficients(u.values(), hat_);
    for (std::size_t j = 0; j < hat_.size(); ++j) hat_[j] *= half_kinetic_[j];
    from_coefficients(hat_, u.storage());
    if (!u.all_finite()) {
        auto dump = std::make_shared<StateDump>(StateDump{grid_.L(), 0.0, {u.values().begin(), u.values().end()}});
        throw NumericalFailure("nls: non-finite state", 0, dump);
    }
}

void NlsSolver::advance(TorusField& u, double duration) {
    require(duration >= 0.0, "nls: negative duration");
    auto n = static_cast<long>(std::llround(duration / cfg_.dt));
    for (long i = 0; i < n; ++i) step(u);
}

TorusField nls_step(const TorusField& u, const NlsConfig& cfg) {
    NlsSolver s(u.grid(), cfg);
    TorusField v = u;
    s.step(v);
    return v;
}

Conserved conserved(const TorusField& u, double p) {
    const auto& g = u.grid();
    auto c = u.coefficients();
    Conserved r;
    double kin = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        double n = g.frequency(j);
        kin += n * n * std::norm(c[j]);
    }
    r.kinetic = 0.5 * g.period() * kin;
    double m = 0, pot = 0;
    for (auto v : u.values()) {
        double a2 = std::norm(v);
        m += a2;
        pot += a2 * power_p_minus_1(a2, p);
    }
    r.mass = g.dx() * m;
    r.potential = g.dx() * pot / (p + 1.0);
    r.energy = r.kinetic + r.potential;
    return r;
}

double TrajectoryRecord::max_relative_mass_drift() const {
    double d = 0;
    for (double m : mass) d = std::max(d, std::abs(m - mass.front()) / std::abs(mass.front()));
    return d;
}

double TrajectoryRecord::max_relative_energy_drift() const {
    double d = 0;
    for (double e : energy) d = std::max(d, std::abs(e - energy.front()) / std::abs(energy.front()));
    return d;
}

TrajectoryRecord record_trajectory(const TorusField& u0, const NlsConfig& cfg, double T,
                                   std::size_t record_every, bool keep_snapshots) {
    require(record_every >= 1, "record_trajectory: record_every must be >= 1");
    NlsSolver solver(u0.grid(), cfg);
    TrajectoryRecord rec;
    TorusField u = u0;
    auto push = [&](double t) {
        auto c = conserved(u, cfg.p);
        rec.times.push_back(t);
        rec.mass.push_back(c.mass);
        rec.energy.push_back(c.energy);
        if (keep_snapshots) rec.snapshots.push_back(u);
    };
    push(0.0);
    auto n = static_cast<std::size_t>(std::llround(T / cfg.dt));
    for (std::size_t i = 1; i <= n; ++i) {
        solver.step(u);
        if (i % record_every == 0 || i == n) push(static_cast<double>(i) * cfg.dt);
    }
    return rec;
}

std::vector<cplx> padded_nonlinearity_coefficients(const TorusField& u, double p, std::size_t factor) {
    require(factor >= 1, "dealiased_nonlinearity: factor must be >= 1");
    const std::size_t M = u.size(), P = M * factor;
    std::vector<cplx> c(M), pc(P), pv(P);
    to_coefficients(u.values(), c);
    pad_coefficients(c, pc);
    from_coefficients(pc, pv);
    for (auto& v : pv) v *= power_p_minus_1(std::norm(v), p);
    to_coefficients(pv, pc);
    return pc;
}

TorusField dealiased_nonlinearity(const TorusField& u, double p, std::size_t factor) {
    auto pc = padded_nonlinearity_coefficients(u, p, factor);
    std::vector<cplx> c(u.size());
    truncate_coefficients(pc, c);
    return TorusField::from_coefficients(u.grid(), c);
}

}  // namespace gibbslab
