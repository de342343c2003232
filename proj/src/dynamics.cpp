#include "cmat/dynamics.hpp"

#include <cmath>
#include <string>

#include "cmat/errors.hpp"
#include "cmat/ode.hpp"

namespace cmat {

namespace {

// Re psi (5), Im psi (5), I_a, I_cav.
using OdeState = Eigen::Matrix<double, 12, 1>;

Vector5c amplitudes(const OdeState& y) {
    Vector5c psi;
    for (Eigen::Index k = 0; k < 5; ++k)
        psi(k) = cplx(y(k), y(k + 5));
    return psi;
}

} // namespace

void SimConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw InvalidParameter("integrator tolerances must be positive");
    if (max_step && !(*max_step > 0.0))
        throw InvalidParameter("max_step must be positive");
    if (sample_count < 2)
        throw InvalidParameter("sample_count must be at least 2");
}

SimResult evolve(const CqedParams& p, const PulseSchedule& s, const SimConfig& cfg) {
    cfg.validate();
    const double kappa = p.kappa();
    const double gamma = p.gamma();

    auto rhs = [&](double t, const OdeState& y) {
        const Vector5c psi = amplitudes(y);
        // d psi/dt = -i H_eff psi
        const Vector5c dpsi = cplx(0.0, -1.0) * (effective_hamiltonian(couplings_at(t, p, s), kappa, gamma) * psi);
        OdeState dy;
        for (Eigen::Index k = 0; k < 5; ++k) {
            dy(k) = dpsi(k).real();
            dy(k + 5) = dpsi(k).imag();
        }
        dy(10) = 2.0 * gamma * (std::norm(psi(2)) + std::norm(psi(3)));
        dy(11) = 2.0 * kappa * std::norm(psi(4));
        return dy;
    };

    ode::Tolerances tol;
    tol.rel_tol = cfg.rel_tol;
    tol.abs_tol = cfg.abs_tol;
    tol.max_step = cfg.max_step.value_or(s.tau() / 100.0);

    const double t0 = s.start();
    const double t1 = s.end();
    const std::size_t n = cfg.sample_count;
    auto sample_time = [&](std::size_t k) {
        return k + 1 == n ? t1 : t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1);
    };

    SimResult r;
    r.samples.reserve(n);
    OdeState y = OdeState::Zero();
    y(static_cast<Eigen::Index>(index(Basis::UG0))) = 1.0;
    r.samples.push_back({t0, amplitudes(y), 1.0});

    std::size_t next = 1;
    auto on_step = [&](const ode::DenseStep<12>& d) {
        const double t_end = d.t0 + d.h;
        while (next < n && sample_time(next) <= t_end) {
            const double ts = sample_time(next);
            const OdeState ys = d(ts);
            const Vector5c a = amplitudes(ys);
            r.samples.push_back({ts, a, a.squaredNorm()});
            ++next;
        }
    };

    ode::Stats stats;
    y = ode::integrate<12>(rhs, y, t0, t1, tol, on_step, &stats);
    r.steps = stats.accepted;

    r.final_state.amps = amplitudes(y);
    if (!r.samples.empty() && r.samples.back().t == t1) {
        // The last sample is the endpoint; use the stepped value exactly.
        r.samples.back().amps = r.final_state.amps;
        r.samples.back().norm = r.final_state.squared_norm();
    }
    r.norm_final = r.final_state.squared_norm();
    r.i_a = y(10);
    r.i_cav = y(11);
    r.fidelity = r.norm_final > 0.0 ? std::norm(r.final_state[Basis::GU0]) / r.norm_final : 0.0;
    r.success_probability = r.norm_final * r.fidelity;
    r.success_from_losses = (1.0 - r.i_a - r.i_cav) * r.fidelity;
    return r;
}

double photon_loss_probability(const SimResult& r) {
    return 1.0 - r.norm_final;
}

bool norm_history_check(std::span<const TrajectorySample> samples, double slack) {
    for (std::size_t k = 1; k < samples.size(); ++k)
        if (samples[k].norm > samples[k - 1].norm + slack)
            return false;
    return true;
}

bool norm_history_check(const SimResult& r, double slack) {
    return norm_history_check(std::span<const TrajectorySample>(r.samples), slack);
}

} // namespace cmat
