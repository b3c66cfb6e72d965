#include "gibbslab/langevin/langevin.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "gibbslab/measures/gff.hpp"
#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"
#include "gibbslab/support/parallel.hpp"

namespace gibbslab {

LangevinConfig default_langevin_config(const GibbsSpec& spec) {
    LangevinConfig c{spec};
    c.dt = 1e-3;
    c.taming = spec.p >= 5.0;
    return c;
}

void validate(const LangevinConfig& cfg) {
    validate(cfg.spec);
    require(cfg.dt > 0.0 && std::isfinite(cfg.dt), "langevin: dt must be positive");
    require(cfg.tilt_beta >= 0.0, "langevin: tilt must be non-negative");
    require(cfg.tilt_beta * (cfg.spec.p + 1.0) < 1.0, "langevin: tilt beta (p+1) must be < 1");
}

TorusField LangevinState::linear() const { return TorusField::from_coefficients(psi.grid(), lin_hat); }

LangevinState make_langevin_state(const TorusField& psi0) {
    LangevinState s{psi0, psi0.coefficients(), {}, 0.0, 0, 0};
    s.lin_hat.assign(s.psi_hat.size(), cplx(0.0));
    return s;
}

LangevinIntegrator::LangevinIntegrator(const LangevinConfig& cfg) : cfg_(cfg) {
    validate(cfg_);
    const std::size_t M = grid().M();
    work_.resize(M);
    drift_hat_.resize(M);
    noise_hat_.resize(M);
    noise_.resize(M);
    tilt_.resize(M);
    for (std::size_t j = 0; j < M; ++j)
        tilt_[j] = std::abs(grid().x(j)) <= 1.0 ? 1.0 - cfg_.tilt_beta * (cfg_.spec.p + 1.0) : 1.0;
    rebuild();
}

void LangevinIntegrator::set_dt(double dt) {
    require(dt > 0.0, "langevin: dt must be positive");
    cfg_.dt = dt;
    rebuild();
}

void LangevinIntegrator::rebuild() {
    const auto& g = grid();
    const std::size_t M = g.M();
    const double dt = cfg_.dt;
    decay_.resize(M);
    phi1_.resize(M);
    noise_scale_.resize(M);
    const double w = std::sqrt(dt / g.dx());
    for (std::size_t j = 0; j < M; ++j) {
        double n = g.frequency(j);
        double lam = 1.0 + n * n;
        decay_[j] = std::exp(-lam * dt);
        phi1_[j] = -std::expm1(-lam * dt) / lam;
        double ou = -std::expm1(-2.0 * lam * dt) / (2.0 * lam * dt);
        noise_scale_[j] = std::sqrt(2.0) * w * std::sqrt(ou);
    }
}

void LangevinIntegrator::step_with_noise(LangevinState& s, std::span<const cplx> xi) {
    const auto& g = grid();
    const std::size_t M = g.M();
    require(s.psi.grid() == g, "langevin: state grid does not match integrator");
    require(xi.size() == M, "langevin: noise size mismatch");
    const double p = cfg_.spec.p;
    const double str = cfg_.spec.potential_strength;
    const double dt = cfg_.dt;
    bool tamed = false;
    for (std::size_t j = 0; j < M; ++j) {
        cplx v = s.psi[j];
        double a2 = std::norm(v);
        double mag = p == 3.0 ? a2 : (p == 5.0 ? a2 * a2 : std::pow(a2, 0.5 * (p - 1.0)));
        cplx f = str * tilt_[j] * mag * v;
        if (cfg_.taming) {
            double af = std::abs(f);
            if (dt * af > 0.1) tamed = true;
            f /= 1.0 + dt * af;
        }
        work_[j] = f;
    }
    to_coefficients(work_, drift_hat_);
    to_coefficients(xi, noise_hat_);
    bool finite = true;
    for (std::size_t j = 0; j < M; ++j) {
        cplx dw = noise_scale_[j] * noise_hat_[j];
        // new coefficients go to drift_hat_ first so psi survives a blow-up
        drift_hat_[j] = decay_[j] * s.psi_hat[j] - phi1_[j] * drift_hat_[j] + dw;
        finite = finite && std::isfinite(drift_hat_[j].real()) && std::isfinite(drift_hat_[j].imag());
        s.lin_hat[j] = decay_[j] * s.lin_hat[j] + dw;
    }
    if (!finite) {
        auto dump = std::make_shared<StateDump>(StateDump{g.L(), s.t, {s.psi.values().begin(), s.psi.values().end()}});
        throw NumericalFailure(fmt::format("langevin: non-finite state at step {}", s.step + 1), s.step + 1, dump);
    }
    std::swap(s.psi_hat, drift_hat_);
    from_coefficients(s.psi_hat, s.psi.storage());
    ++s.step;
    s.t += dt;
    if (tamed) ++s.tamed_steps;
}

void LangevinIntegrator::step(LangevinState& s, Rng& rng) {
    rng.fill_complex_normal(noise_);
    step_with_noise(s, noise_);
}

void LangevinIntegrator::advance(LangevinState& s, double duration, Rng& rng) {
    auto n = static_cast<std::uint64_t>(std::llround(duration / cfg_.dt));
    for (std::uint64_t i = 0; i < n; ++i) step(s, rng);
}

LangevinState step_langevin(LangevinState state, const LangevinConfig& cfg, Rng& rng) {
    LangevinIntegrator integ(cfg);
    integ.step(state, rng);
    return state;
}

Ensemble run_to_equilibrium(const LangevinConfig& cfg, const EquilibriumOptions& opts, std::uint64_t seed) {
    validate(cfg);
    require(opts.burn_in >= 1.0, "run_to_equilibrium: burn-in must be >= 1 time unit");
    require(opts.n_samples > 0 && opts.n_chains > 0, "run_to_equilibrium: need samples and chains");
    require(opts.thinning > 0.0, "run_to_equilibrium: thinning must be positive");
    const std::size_t chains = std::min(opts.n_chains, opts.n_samples);
    const std::size_t per_chain = (opts.n_samples + chains - 1) / chains;
    std::vector<std::vector<TorusField>> results(chains);
    std::vector<std::vector<std::string>> warnings(chains);
    parallel_for(
        chains,
        [&](std::size_t c) {
            Rng rng(seed, c);
            LangevinIntegrator integ(cfg);
            LangevinState s = make_langevin_state(sample_gff(cfg.spec.grid, rng));
            double dt = cfg.dt;
            auto run_for = [&](double duration) {
                auto n = static_cast<std::uint64_t>(std::llround(duration / dt));
                std::uint64_t tamed0 = s.tamed_steps, step0 = s.step;
                for (std::uint64_t i = 0; i < n; ++i) {
                    integ.step(s, rng);
                    if (opts.adaptive_dt && cfg.taming && (s.step - step0) >= 1000) {
                        if (static_cast<double>(s.tamed_steps - tamed0) > 0.01 * static_cast<double>(s.step - step0)) {
                            dt *= 0.5;
                            integ.set_dt(dt);
                            n = i + 1 + 2 * (n - i - 1);
                            warnings[c].push_back(fmt::format("chain {}: taming active, dt halved to {:g}", c, dt));
                        }
                        tamed0 = s.tamed_steps;
                        step0 = s.step;
                    }
                }
            };
            run_for(opts.burn_in);
            results[c].reserve(per_chain);
            for (std::size_t k = 0; k < per_chain; ++k) {
                run_for(opts.thinning);
                results[c].push_back(s.psi);
            }
        },
        opts.workers);
    Ensemble e{cfg.spec, {}, {}};
    e.members.reserve(opts.n_samples);
    for (std::size_t k = 0; k < per_chain && e.members.size() < opts.n_samples; ++k)
        for (std::size_t c = 0; c < chains && e.members.size() < opts.n_samples; ++c)
            e.members.push_back(std::move(results[c][k]));
    e.provenance.sampler = "langevin";
    e.provenance.seed = seed;
    e.provenance.burn_in = opts.burn_in;
    e.provenance.thinning = opts.thinning;
    for (auto& w : warnings) e.provenance.warnings.insert(e.provenance.warnings.end(), w.begin(), w.end());
    return e;
}

HeatCheck heat_ce_bound_check(const TorusField& phi, double theta, double t) {
    require(theta > 0.0 && theta < 1.0 / std::sqrt(2.0), "heat check: theta must lie in (0, 1/sqrt 2)");
    require(t >= 0.0, "heat check: t must be non-negative");
    HeatCheck h;
    h.lhs = ce_theta(heat_flow(phi, t), theta);
    h.rhs = 2.0 * std::exp(theta * theta * t) * ce_theta(phi, theta);
    h.holds = h.lhs <= h.rhs;
    return h;
}

}  // namespace gibbslab
