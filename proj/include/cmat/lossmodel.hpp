// lossmodel.hpp: analytic photon-loss exponent, balancing optimum, and the
// simulation-driven Omega0 optimizer used by the sweeps.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cmat/dynamics.hpp"
#include "cmat/model.hpp"
#include "cmat/parallel.hpp"

namespace cmat {

struct LossPrediction {
    double beta = 0.0;
    double p_pl = 0.0;          // 1 - e^{-beta}
    double beta_cavity = 0.0;   // kappa tau O0^2 / g^2
    double beta_spont = 0.0;    // 2 gamma / (tau O0^2)
    std::optional<double> upper_bound;  // exp(-2/sqrt(C)) when C is defined
};

LossPrediction beta(const CqedParams& p, double tau, double omega0);

/// exp(-2/sqrt(C)).
double success_upper_bound(const CqedParams& p);

enum class Objective { SuccessProbability, Fidelity };

struct OptimizerOptions {
    double log10_min = -3.0;  // search over log10(Omega0 / g)
    double log10_max = 1.0;
    std::size_t grid_points = 41;
    double rel_tol = 1e-4;    // golden-section stop, relative in Omega0
    double halfwidth = PulseSchedule::default_halfwidth;
    Execution execution = Execution::Parallel;  // grid probes only
};

struct Omega0Optimum {
    double omega0 = 0.0;
    double value = 0.0;
    SimResult result;
    std::size_t evaluations = 0;
};

/// argmax over Omega0 of the objective computed by evolve(): a log grid,
/// then golden-section refinement around the best grid point. Failures at
/// a probe are rethrown as IntegrationFailure naming the probe parameters.
Omega0Optimum optimize_omega0(const CqedParams& p, double tau, Objective objective, const SimConfig& cfg = {},
                              const OptimizerOptions& opts = {});

struct BalancingRow {
    double omega0;
    double beta;
};

struct BalancingScan {
    std::vector<BalancingRow> rows;
    std::size_t argmin = 0;
    double omega0_balanced = 0.0;
    double beta_min_exact = 0.0;  // beta at omega0_balanced
};

/// beta over n log-spaced Omega0 spanning `decades` in tau O0^2, centred on
/// the balancing root. With odd n the centre row is the root itself.
BalancingScan balancing_optimality_scan(const CqedParams& p, double tau, std::size_t n, double decades = 2.0);

} // namespace cmat
