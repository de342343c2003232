// dynamics.hpp: no-jump evolution under the effective non-Hermitian
// Hamiltonian, with in-line accumulation of the two loss channels.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cmat/model.hpp"

namespace cmat {

struct SimConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    std::optional<double> max_step;  // defaults to tau / 100
    std::size_t sample_count = 1000;

    void validate() const;
};

struct TrajectorySample {
    double t;
    Vector5c amps;
    double norm;
};

struct SimResult {
    StateVector final_state;     // un-normalized psi(T)
    double norm_final = 0.0;     // probability of no photon loss
    double fidelity = 0.0;       // |<Psi(T)|GU0>|^2 for the normalized state
    double success_probability = 0.0;  // norm_final * fidelity
    double success_from_losses = 0.0;  // (1 - i_a - i_cav) * fidelity
    double i_a = 0.0;            // 2 gamma int (|EG0|^2 + |GE0|^2) dt
    double i_cav = 0.0;          // 2 kappa int |GG1|^2 dt
    std::vector<TrajectorySample> samples;
    std::size_t steps = 0;

    /// norm_final + i_a + i_cav - 1.
    double budget_residual() const { return norm_final + i_a + i_cav - 1.0; }
};

/// Integrates i d|psi>/dt = H_eff(t)|psi> over the pulse window starting
/// from |u>1|g>2|0>c. Throws IntegrationFailure (with the last good t) on
/// step-size underflow, InvalidParameter on bad tolerances.
SimResult evolve(const CqedParams& p, const PulseSchedule& s, const SimConfig& cfg = {});

/// 1 - norm_final.
double photon_loss_probability(const SimResult& r);

/// True iff the sampled norm never rises by more than `slack` between samples.
bool norm_history_check(std::span<const TrajectorySample> samples, double slack = 1e-10);
bool norm_history_check(const SimResult& r, double slack = 1e-10);

} // namespace cmat
