// adiabatic.hpp: adiabatic-condition functional, the time constant tau0,
// and the speed-limit thresholds that follow from photon-loss balancing.

#pragma once

#include <string_view>

#include "cmat/model.hpp"

namespace cmat {

struct AdiabaticFactors {
    double f_adi = 8.0;  // adiabaticity factor
    double f_cp = 0.5;   // cavity-population suppression factor, 0 < f_cp < 1

    void validate() const;
};

enum class Binding { AdiabaticLimited, CavitySuppressionLimited };

std::string_view to_string(Binding b);

struct SpeedLimitReport {
    double tau0 = 0.0;  // only filled by callers that have an omega0; 0 otherwise
    double tau_a = 0.0;
    double tau_c = 0.0;
    double kappa_star = 0.0;
    double g_star = 0.0;
    Binding binding = Binding::AdiabaticLimited;

    /// 1 / max(tau_a, tau_c).
    double max_speed() const;
};

/// Nonadiabatic coupling of the dark state to the w1 pair divided by the gap:
///   g O0^2 |A1 f1' f2 + B1 f1 f2'| / (sqrt(N0 N1) |w1|).
/// Throws SingularGap when w1 = 0.
double adiabatic_coupling_ratio(double t, const CqedParams& p, const PulseSchedule& s);

/// tau * adiabatic_coupling_ratio at t = s tau; independent of tau.
double tau0_integrand(double s, double g, double omega0);

/// Maximum of tau0_integrand over s in [-halfwidth, halfwidth]: 4001-point
/// scan, then golden-section refinement to 1e-10 in s.
double tau0(const CqedParams& p, double omega0, double halfwidth = PulseSchedule::default_halfwidth);

/// Location of the maximum found by tau0 (for diagnostics and tests).
struct Tau0Peak {
    double s;
    double value;
};
Tau0Peak tau0_peak(double g, double omega0, double halfwidth = PulseSchedule::default_halfwidth);

/// tau_a = F_adi^2/(8 gamma sqrt C), tau_c = 2 gamma sqrt C/(F_cp^2 g^2),
/// kappa* = 8 gamma/(F_adi F_cp)^2, g* = 4 gamma sqrt C/(F_adi F_cp).
SpeedLimitReport thresholds(const CqedParams& p, const AdiabaticFactors& f = {});

/// Positive root of tau O0^2 = g sqrt(2 gamma / kappa).
double omega0_from_balancing(const CqedParams& p, double tau);

} // namespace cmat
