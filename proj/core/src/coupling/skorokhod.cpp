#include "gibbslab/coupling/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "gibbslab/spectral/norms.hpp"
#include "gibbslab/support/error.hpp"

namespace gibbslab {

SkorokhodParams derive_params(const SkorokhodInputs& in, std::span<const TorusField> target) {
    require(in.eta > 0 && in.alpha > 0 && in.beta > 0 && in.kappa > 0 && in.theta > 0 && in.rate > 0,
            "derive_params: all inputs must be positive");
    require(in.kappa <= 1 && in.alpha <= 1, "derive_params: kappa and alpha must be <= 1");
    require(in.L >= in.L0, "derive_params: L below the configured floor");
    require(!target.empty(), "derive_params: empty target ensemble");
    SkorokhodParams s;
    s.in = in;
    s.R = std::pow(in.L, in.eta);
    s.K = static_cast<long>(std::ceil(s.R * std::pow(in.L, 2.0 * in.eta / in.alpha) - 1e-9));
    s.eps = std::exp(-in.rate * in.kappa * std::pow(in.L, in.beta) / 16.0);
    s.eps_tilde = s.eps;
    // a relative slack of 1e-6 lets eps_tilde sit exactly at the resolution 1/size
    if (s.eps_tilde * static_cast<double>(target.size()) < 1.0 - 1e-6)
        throw ConfigError(fmt::format("derive_params: eps_tilde = {:.3g} is below the ensemble resolution 1/{}; "
                                      "use a larger ensemble or smaller L",
                                      s.eps_tilde, target.size()));
    s.delta = s.R / static_cast<double>(s.K);
    for (long k = -s.K; k <= s.K; ++k) s.x.push_back(k == s.K ? s.R : (k == -s.K ? -s.R : k * s.delta));
    for (const auto& f : target)
        require(s.R <= f.grid().half_period(), "derive_params: grid [-R_L, R_L] leaves the torus");
    std::vector<double> maxima;
    maxima.reserve(target.size());
    for (const auto& f : target) {
        double m = 0;
        for (cplx v : evaluate_at(f, s.x)) m = std::max({m, std::abs(v.real()), std::abs(v.imag())});
        maxima.push_back(m);
    }
    s.M = stats::quantile(maxima, 1.0 - s.eps_tilde);
    require(s.M > 0, "derive_params: degenerate target ensemble");
    s.J = static_cast<long>(std::ceil(8.0 * std::pow(in.L, in.eta) * s.M));
    s.tau = s.M / static_cast<double>(s.J);
    return s;
}

std::size_t CellIndexHash::operator()(const CellIndex& c) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto v : c.j) h = splitmix64(h ^ static_cast<std::uint32_t>(v));
    return static_cast<std::size_t>(h);
}

std::optional<CellIndex> assign_cell(const TorusField& phi, const SkorokhodParams& s) {
    CellIndex c;
    c.j.reserve(2 * s.x.size());
    auto lattice = [&](double v) {
        auto j = static_cast<long>(std::floor(v / s.tau));
        return static_cast<std::int32_t>(std::clamp(j, -s.J, s.J));
    };
    for (cplx v : evaluate_at(phi, s.x)) {
        if (std::abs(v.real()) > s.M || std::abs(v.imag()) > s.M) return std::nullopt;
        c.j.push_back(lattice(v.real()));
        c.j.push_back(lattice(v.imag()));
    }
    return c;
}

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::GoodCell: return "good";
        case Branch::BadSet: return "bad";
        case Branch::Correction: return "correction";
        case Branch::Fallback: return "fallback";
    }
    return "?";
}

CouplingResult build_coupling(std::span<const TorusField> target, std::span<const TorusField> approx,
                              const SkorokhodParams& s, Rng& rng) {
    require(!target.empty() && !approx.empty(), "build_coupling: empty ensemble");
    auto resolves = [&](std::size_t n) { return static_cast<double>(n) * s.eps_tilde >= 1.0 - 1e-6; };
    require(resolves(target.size()) && resolves(approx.size()),
            "build_coupling: ensembles must have at least 1/eps_tilde members");
    using CellMap = std::unordered_map<CellIndex, std::vector<std::size_t>, CellIndexHash>;

    std::vector<std::optional<CellIndex>> tcell(target.size()), acell(approx.size());
    CellMap tmap;
    for (std::size_t i = 0; i < target.size(); ++i) {
        tcell[i] = assign_cell(target[i], s);
        if (tcell[i]) tmap[*tcell[i]].push_back(i);
    }
    // good cells: target mass >= eps_tilde
    CellMap good;  // good cell -> approx members
    const double nt = static_cast<double>(target.size());
    const double na = static_cast<double>(approx.size());
    std::unordered_map<CellIndex, double, CellIndexHash> tmass;
    for (auto& [c, mem] : tmap) {
        double m = static_cast<double>(mem.size()) / nt;
        if (m >= s.eps_tilde) {
            good.emplace(c, std::vector<std::size_t>{});
            tmass[c] = m;
        }
    }
    std::vector<std::size_t> abad;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        acell[i] = assign_cell(approx[i], s);
        auto it = acell[i] ? good.find(*acell[i]) : good.end();
        if (it != good.end())
            it->second.push_back(i);
        else
            abad.push_back(i);
    }
    double tbad_mass = 1.0;
    for (auto& [c, m] : tmass) tbad_mass -= m;

    // residual mixture nu_L, clipped at zero and renormalised
    struct Component {
        const std::vector<std::size_t>* members;
        double weight;
    };
    std::vector<Component> comps;
    CouplingResult res;
    res.good_cells = good.size();
    double total = 0;
    auto add = [&](const std::vector<std::size_t>* mem, double approx_mass, double target_mass) {
        double w = approx_mass - (1.0 - s.eps) * target_mass;
        if (w < 0) {
            res.clip_mass += -w;
            w = 0;
        }
        if (w > 0 && !mem->empty()) {
            comps.push_back({mem, w});
            total += w;
        }
    };
    // deterministic order over cells
    std::vector<const CellIndex*> keys;
    for (auto& [c, mem] : good) keys.push_back(&c);
    std::sort(keys.begin(), keys.end(), [](const CellIndex* a, const CellIndex* b) { return a->j < b->j; });
    for (const CellIndex* c : keys) add(&good[*c], static_cast<double>(good[*c].size()) / na, tmass[*c]);
    add(&abad, static_cast<double>(abad.size()) / na, tbad_mass);
    if (total <= 0) throw NumericalFailure("build_coupling: residual mixture has no mass");

    auto draw_residual = [&]() {
        double u = rng.uniform() * total;
        for (const auto& cp : comps) {
            if (u < cp.weight) return (*cp.members)[rng.below(cp.members->size())];
            u -= cp.weight;
        }
        const auto& last = *comps.back().members;
        return last[rng.below(last.size())];
    };

    res.pairs.reserve(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        CoupledPair pr;
        pr.target = i;
        pr.cell = tcell[i];
        double U = rng.uniform();
        auto it = tcell[i] ? good.find(*tcell[i]) : good.end();
        if (U > 1.0 - s.eps) {
            pr.branch = Branch::Correction;
            pr.approx = draw_residual();
        } else if (it != good.end()) {
            if (it->second.empty()) {
                ++res.fallbacks;
                pr.branch = Branch::Fallback;
                pr.approx = abad.empty() ? draw_residual() : abad[rng.below(abad.size())];
            } else {
                pr.branch = Branch::GoodCell;
                pr.approx = it->second[rng.below(it->second.size())];
            }
        } else {
            if (abad.empty()) {
                ++res.fallbacks;
                pr.branch = Branch::Fallback;
                pr.approx = draw_residual();
            } else {
                pr.branch = Branch::BadSet;
                pr.approx = abad[rng.below(abad.size())];
            }
        }
        res.pairs.push_back(std::move(pr));
    }
    return res;
}

double grid_distance(const TorusField& phi, const TorusField& psi, const SkorokhodParams& s) {
    auto a = evaluate_at(phi, s.x);
    auto b = evaluate_at(psi, s.x);
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

QualityEstimate coupling_quality(std::span<const TorusField> target, std::span<const TorusField> approx, double eta,
                                 double L) {
    require(!target.empty() && target.size() == approx.size(), "coupling_quality: need equally many paired fields");
    require(eta > 0 && L >= 1, "coupling_quality: eta > 0 and L >= 1 required");
    const double r = std::pow(L, eta);
    const double thr = std::pow(L, -eta);
    QualityEstimate q;
    q.L = L;
    q.total = target.size();
    for (std::size_t i = 0; i < target.size(); ++i) {
        const auto& g = target[i].grid();
        std::vector<double> xs;
        for (std::size_t j = 0; j < g.M(); ++j)
            if (std::abs(g.x(j)) <= r) xs.push_back(g.x(j));
        xs.push_back(-r);
        xs.push_back(r);
        auto a = evaluate_at(target[i], xs);
        auto b = evaluate_at(approx[i], xs);
        double d = 0;
        for (std::size_t k = 0; k < xs.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
        if (d > thr) ++q.exceed;
    }
    q.probability = static_cast<double>(q.exceed) / static_cast<double>(q.total);
    q.ci = stats::wilson_interval(q.exceed, q.total);
    return q;
}

}  // namespace gibbslab
