#include "cmat/lossmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cmat/adiabatic.hpp"
#include "cmat/errors.hpp"

namespace cmat {

LossPrediction beta(const CqedParams& p, double tau, double omega0) {
    if (!(tau > 0.0) || !(omega0 > 0.0))
        throw InvalidParameter("beta needs tau > 0 and omega0 > 0");
    const double area = tau * omega0 * omega0;
    LossPrediction lp;
    lp.beta_cavity = p.kappa() * area / (p.g() * p.g());
    lp.beta_spont = p.gamma() * 2.0 / area;
    lp.beta = lp.beta_cavity + lp.beta_spont;
    lp.p_pl = -std::expm1(-lp.beta);
    if (p.has_cooperativity())
        lp.upper_bound = success_upper_bound(p);
    return lp;
}

double success_upper_bound(const CqedParams& p) {
    return std::exp(-2.0 / std::sqrt(p.cooperativity()));
}

namespace {

double objective_value(const SimResult& r, Objective o) {
    return o == Objective::SuccessProbability ? r.success_probability : r.fidelity;
}

std::string probe_context(const CqedParams& p, double tau, double omega0) {
    std::ostringstream os;
    os.precision(17);
    os << " (probe g=" << p.g() << " kappa=" << p.kappa() << " gamma=" << p.gamma() << " tau=" << tau
       << " omega0=" << omega0 << ")";
    return os.str();
}

} // namespace

Omega0Optimum optimize_omega0(const CqedParams& p, double tau, Objective objective, const SimConfig& cfg,
                              const OptimizerOptions& opts) {
    if (opts.grid_points < 3)
        throw InvalidParameter("optimizer grid needs at least 3 points");
    if (!(opts.log10_max > opts.log10_min))
        throw InvalidParameter("optimizer search range is empty");
    if (!(tau > 0.0))
        throw InvalidParameter("tau must be positive");
    cfg.validate();

    // Results are cached by log10(Omega0/g) within this call only.
    std::map<double, SimResult> cache;
    std::size_t evaluations = 0;

    auto run = [&](double u) -> SimResult {
        const double omega0 = p.g() * std::pow(10.0, u);
        try {
            return evolve(p, PulseSchedule(omega0, tau, opts.halfwidth), cfg);
        } catch (const IntegrationFailure& e) {
            throw IntegrationFailure(e.what() + probe_context(p, tau, omega0), e.last_t);
        }
    };
    auto eval = [&](double u) -> const SimResult& {
        auto it = cache.find(u);
        if (it == cache.end()) {
            it = cache.emplace(u, run(u)).first;
            ++evaluations;
        }
        return it->second;
    };

    const std::size_t n = opts.grid_points;
    const double du = (opts.log10_max - opts.log10_min) / static_cast<double>(n - 1);
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = i + 1 == n ? opts.log10_max : opts.log10_min + du * static_cast<double>(i);

    std::vector<SimResult> probes(n);
    for_each_index(n, opts.execution, [&](std::size_t i) { probes[i] = run(grid[i]); });
    for (std::size_t i = 0; i < n; ++i)
        cache.emplace(grid[i], std::move(probes[i]));
    evaluations += n;

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (objective_value(cache.at(grid[i]), objective) > objective_value(cache.at(grid[best]), objective))
            best = i;

    double lo = grid[best == 0 ? 0 : best - 1];
    double hi = grid[std::min(n - 1, best + 1)];
    const double stop = std::log10(1.0 + opts.rel_tol);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double v1 = objective_value(eval(x1), objective);
    double v2 = objective_value(eval(x2), objective);
    while (hi - lo > stop) {
        if (v1 >= v2) {
            hi = x2;
            x2 = x1;
            v2 = v1;
            x1 = hi - phi * (hi - lo);
            v1 = objective_value(eval(x1), objective);
        } else {
            lo = x1;
            x1 = x2;
            v1 = v2;
            x2 = lo + phi * (hi - lo);
            v2 = objective_value(eval(x2), objective);
        }
    }

    // Best of everything evaluated; ties resolve to the smaller Omega0.
    double best_u = grid[best];
    double best_v = objective_value(cache.at(best_u), objective);
    for (const auto& [u, r] : cache) {
        const double v = objective_value(r, objective);
        if (v > best_v) {
            best_v = v;
            best_u = u;
        }
    }

    Omega0Optimum out;
    out.omega0 = p.g() * std::pow(10.0, best_u);
    out.value = best_v;
    out.result = cache.at(best_u);
    out.evaluations = evaluations;
    return out;
}

BalancingScan balancing_optimality_scan(const CqedParams& p, double tau, std::size_t n, double decades) {
    if (n < 3)
        throw InvalidParameter("balancing scan needs n >= 3");
    if (!(decades > 0.0))
        throw InvalidParameter("scan span must be positive");

    BalancingScan scan;
    scan.omega0_balanced = omega0_from_balancing(p, tau);
    scan.beta_min_exact = beta(p, tau, scan.omega0_balanced).beta;

    const double area_bal = tau * scan.omega0_balanced * scan.omega0_balanced;
    const double half = 0.5 * static_cast<double>(n - 1);
    scan.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) - half) / half * 0.5 * decades;
        const double omega0 = u == 0.0 ? scan.omega0_balanced : std::sqrt(area_bal * std::pow(10.0, u) / tau);
        scan.rows.push_back({omega0, beta(p, tau, omega0).beta});
    }
    scan.argmin = static_cast<std::size_t>(
        std::min_element(scan.rows.begin(), scan.rows.end(),
                         [](const BalancingRow& a, const BalancingRow& b) { return a.beta < b.beta; }) -
        scan.rows.begin());
    return scan;
}

} // namespace cmat
