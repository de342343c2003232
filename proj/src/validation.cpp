#include "cmat/validation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cmat/adiabatic.hpp"
#include "cmat/dynamics.hpp"
#include "cmat/eigensystem.hpp"
#include "cmat/lossmodel.hpp"

namespace cmat {

namespace {

class LogUniform {
public:
    LogUniform(double lo, double hi) : dist_(std::log(lo), std::log(hi)) {}
    double operator()(std::mt19937_64& rng) { return std::exp(dist_(rng)); }

private:
    std::uniform_real_distribution<double> dist_;
};

std::string describe(double worst, double bound) {
    std::ostringstream os;
    os.precision(3);
    os << "worst " << std::scientific << worst << " (bound " << bound << ")";
    return os.str();
}

CheckResult eigensystem_oracle(const ValidationOptions& o, std::mt19937_64& rng) {
    LogUniform rate(0.1, 10.0);
    const auto build = o.hamiltonian_builder ? o.hamiltonian_builder
                                             : std::function<Matrix5c(const Couplings&)>(
                                                   [](const Couplings& c) { return hamiltonian(c); });
    double worst = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < o.eigen_samples; ++k) {
        const Couplings c{rate(rng), rate(rng), rate(rng)};
        const auto rep = validate_against_numeric(build(c), c, 1e-10);
        worst = std::max({worst, rep.max_eigenvalue_error, rep.max_subspace_angle});
        ok = ok && rep.passed;
    }
    return {"eigensystem_vs_dense_diagonalization", ok, describe(worst, 1e-10)};
}

CheckResult eigenvalue_sum(const ValidationOptions& o, std::mt19937_64& rng) {
    LogUniform rate(0.01, 100.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < o.eigen_samples; ++k) {
        const Couplings c{rate(rng), rate(rng), rate(rng)};
        const auto w = eigenvalues(c);
        const double expect = 2.0 * c.g * c.g + c.omega1 * c.omega1 + c.omega2 * c.omega2;
        worst = std::max(worst, std::abs(w[1] * w[1] + w[3] * w[3] - expect) / expect);
    }
    return {"eigenvalue_square_sum_identity", worst < 1e-12, describe(worst, 1e-12)};
}

CheckResult probability_budget(const ValidationOptions& o, std::mt19937_64& rng) {
    LogUniform coupling(1.0, 30.0), decay(0.1, 5.0), ratio(0.05, 2.0), length(2.0, 20.0);
    SimConfig cfg;
    cfg.rel_tol = o.rel_tol;
    cfg.sample_count = 200;
    double worst = 0.0, worst_forms = 0.0;
    bool monotone = true;
    for (std::size_t k = 0; k < o.dynamics_samples; ++k) {
        const double g = coupling(rng);
        const CqedParams p(g, decay(rng), decay(rng));
        const double omega0 = ratio(rng) * g;
        const PulseSchedule s(omega0, length(rng) / omega0);
        const SimResult r = evolve(p, s, cfg);
        worst = std::max(worst, std::abs(r.budget_residual()));
        worst_forms = std::max(worst_forms, std::abs(r.success_probability - r.success_from_losses));
        monotone = monotone && norm_history_check(r);
    }
    const bool ok = worst < 1e-6 && monotone && worst_forms < 10.0 * o.rel_tol;
    return {"probability_budget_and_norm_decay", ok,
            describe(worst, 1e-6) + (monotone ? ", norms monotone" : ", norm rose") + ", P_s forms differ by " +
                describe(worst_forms, 10.0 * o.rel_tol)};
}

CheckResult am_gm_bound(std::mt19937_64& rng) {
    LogUniform rate(0.1, 100.0), time(1e-3, 100.0);
    double worst_gap = 0.0;
    bool ok = true;
    for (int k = 0; k < 1000; ++k) {
        const CqedParams p(rate(rng), rate(rng), rate(rng));
        const double bound = 2.0 / std::sqrt(p.cooperativity());
        const double b = beta(p, time(rng), rate(rng)).beta;
        if (b < bound * (1.0 - 1e-12))
            ok = false;
        worst_gap = std::min(worst_gap, b / bound - 1.0);
    }
    return {"loss_exponent_am_gm_bound", ok, describe(worst_gap, 0.0)};
}

CheckResult small_drive_limit() {
    const CqedParams p(1.0, 0.0, 0.0);
    const double r05 = tau0(p, 0.05) * 2.0 * 0.05;
    const double r01 = tau0(p, 0.01) * 2.0 * 0.01;
    const bool ok = std::abs(r05 - 1.0) <= 0.05 && std::abs(r01 - 1.0) <= 0.02;
    std::ostringstream os;
    os << "2 Omega0 tau0 = " << r05 << " at Omega0/g=0.05, " << r01 << " at 0.01";
    return {"tau0_small_drive_limit", ok, os.str()};
}

CheckResult tau0_tau_independence() {
    double worst = 0.0;
    for (double ratio : {0.1, 1.0, 5.0}) {
        const CqedParams p(2.0, 0.0, 0.0);
        const double omega0 = ratio * p.g();
        const auto peak = tau0_peak(p.g(), omega0);
        for (double tau : {1.0, 10.0}) {
            const double t_form = tau * adiabatic_coupling_ratio(peak.s * tau, p, PulseSchedule(omega0, tau));
            worst = std::max(worst, std::abs(t_form - peak.value) / peak.value);
        }
    }
    return {"tau0_independent_of_tau", worst < 1e-10, describe(worst, 1e-10)};
}

CheckResult reference_convergence(const ValidationOptions& o) {
    const CqedParams p = CqedParams::from_cooperativity(50.0, 200.0);
    const double tau = 2.0 * thresholds(p).tau_a;
    const PulseSchedule s(omega0_from_balancing(p, tau), tau);
    SimConfig a, b;
    a.rel_tol = o.rel_tol;
    b.rel_tol = 0.5 * o.rel_tol;
    a.sample_count = b.sample_count = 2;
    const double d = std::abs(evolve(p, s, a).success_probability - evolve(p, s, b).success_probability);
    return {"integrator_convergence_reference_run", d < 1e-7, describe(d, 1e-7)};
}

CheckResult unitarity(const ValidationOptions& o) {
    SimConfig cfg;
    cfg.rel_tol = o.rel_tol;
    const SimResult r = evolve(CqedParams(1.0, 0.0, 0.0), PulseSchedule(1.0, 10.0), cfg);
    const double d = std::abs(r.norm_final - 1.0);
    return {"dissipation_free_norm_conservation", d < 1e-9 && norm_history_check(r), describe(d, 1e-9)};
}

} // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::vector<CheckResult> out;
    auto guarded = [&](const char* name, auto&& check) {
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };
    guarded("eigensystem_vs_dense_diagonalization", [&] { return eigensystem_oracle(opts, rng); });
    guarded("eigenvalue_square_sum_identity", [&] { return eigenvalue_sum(opts, rng); });
    guarded("probability_budget_and_norm_decay", [&] { return probability_budget(opts, rng); });
    guarded("loss_exponent_am_gm_bound", [&] { return am_gm_bound(rng); });
    guarded("tau0_small_drive_limit", [&] { return small_drive_limit(); });
    guarded("tau0_independent_of_tau", [&] { return tau0_tau_independence(); });
    guarded("integrator_convergence_reference_run", [&] { return reference_convergence(opts); });
    guarded("dissipation_free_norm_conservation", [&] { return unitarity(opts); });
    return out;
}

} // namespace cmat
