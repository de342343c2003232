#include "cmat/adiabatic.hpp"

#include <cmath>
#include <string>

#include "cmat/eigensystem.hpp"
#include "cmat/errors.hpp"

namespace cmat {

namespace {

constexpr int scan_points = 4001;
constexpr double s_tolerance = 1e-10;

// g O0^2 |A1 f2^2 - B1 f1^2| f1 f2 / (|w1| sqrt(N0 N1)), i.e. the ratio with tau = 1.
double coupling_times_tau(const Couplings& c, double omega0, PulseFactors f) {
    const auto w = eigenvalues(c);
    const double w1 = w[1];
    if (!(w1 > 0.0))
        throw SingularGap("dark/bright gap w1 vanishes");
    const auto ab = coefficients_1(c, w1 * w1);
    const double n0 = c.dark_norm();
    const double n1 = branch_vector(c, w1, ab).squaredNorm();
    const double num = c.g * omega0 * omega0 * std::abs(ab.a * f.f2 * f.f2 - ab.b * f.f1 * f.f1) * f.f1 * f.f2;
    return num / (w1 * std::sqrt(n0 * n1));
}

} // namespace

void AdiabaticFactors::validate() const {
    if (!(f_adi > 0.0))
        throw InvalidParameter("f_adi must be positive");
    if (!(f_cp > 0.0 && f_cp < 1.0))
        throw InvalidParameter("f_cp must lie in (0, 1)");
}

std::string_view to_string(Binding b) {
    return b == Binding::AdiabaticLimited ? "AdiabaticLimited" : "CavitySuppressionLimited";
}

double SpeedLimitReport::max_speed() const {
    return 1.0 / std::max(tau_a, tau_c);
}

double adiabatic_coupling_ratio(double t, const CqedParams& p, const PulseSchedule& s) {
    const Couplings c = couplings_at(t, p, s);
    const auto w = eigenvalues(c);
    const double w1 = w[1];
    if (!(w1 > 0.0))
        throw SingularGap("dark/bright gap w1 vanishes at t = " + std::to_string(t));
    const auto ab = coefficients_1(c, w1 * w1);
    const auto f = pulse_f(t, s.tau());
    const auto fd = pulse_f_dot(t, s.tau());
    const double n1 = branch_vector(c, w1, ab).squaredNorm();
    const double num = p.g() * s.omega0() * s.omega0() * std::abs(ab.a * fd.f1 * f.f2 + ab.b * f.f1 * fd.f2);
    return num / (std::sqrt(c.dark_norm() * n1) * w1);
}

double tau0_integrand(double s, double g, double omega0) {
    const auto f = pulse_f(s, 1.0);
    const Couplings c{omega0 * f.f1, omega0 * f.f2, g};
    return coupling_times_tau(c, omega0, f);
}

Tau0Peak tau0_peak(double g, double omega0, double halfwidth) {
    if (!(g > 0.0) || !(omega0 > 0.0))
        throw InvalidParameter("tau0 needs g > 0 and omega0 > 0");
    if (!(halfwidth > 0.0))
        throw InvalidParameter("halfwidth must be positive");

    const double step = 2.0 * halfwidth / (scan_points - 1);
    int best = 0;
    double best_val = -1.0;
    for (int k = 0; k < scan_points; ++k) {
        const double v = tau0_integrand(-halfwidth + k * step, g, omega0);
        if (v > best_val) {
            best_val = v;
            best = k;
        }
    }

    double lo = -halfwidth + std::max(0, best - 1) * step;
    double hi = -halfwidth + std::min(scan_points - 1, best + 1) * step;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double v1 = tau0_integrand(x1, g, omega0);
    double v2 = tau0_integrand(x2, g, omega0);
    while (hi - lo > s_tolerance) {
        if (v1 >= v2) {
            hi = x2;
            x2 = x1;
            v2 = v1;
            x1 = hi - phi * (hi - lo);
            v1 = tau0_integrand(x1, g, omega0);
        } else {
            lo = x1;
            x1 = x2;
            v1 = v2;
            x2 = lo + phi * (hi - lo);
            v2 = tau0_integrand(x2, g, omega0);
        }
    }
    const double s_mid = 0.5 * (lo + hi);
    const double v_mid = tau0_integrand(s_mid, g, omega0);
    if (v_mid >= best_val)
        return {s_mid, v_mid};
    return {-halfwidth + best * step, best_val};
}

double tau0(const CqedParams& p, double omega0, double halfwidth) {
    return tau0_peak(p.g(), omega0, halfwidth).value;
}

SpeedLimitReport thresholds(const CqedParams& p, const AdiabaticFactors& f) {
    f.validate();
    const double c = p.cooperativity();
    const double gm = p.gamma();
    const double sqrt_c = std::sqrt(c);
    const double prod = f.f_adi * f.f_cp;

    SpeedLimitReport r;
    r.tau_a = f.f_adi * f.f_adi / (8.0 * gm * sqrt_c);
    r.tau_c = 2.0 * gm * sqrt_c / (f.f_cp * f.f_cp * p.g() * p.g());
    r.kappa_star = 8.0 * gm / (prod * prod);
    r.g_star = 4.0 * gm * sqrt_c / prod;
    r.binding = r.tau_a >= r.tau_c ? Binding::AdiabaticLimited : Binding::CavitySuppressionLimited;
    return r;
}

double omega0_from_balancing(const CqedParams& p, double tau) {
    if (!(tau > 0.0))
        throw InvalidParameter("tau must be positive");
    if (!p.has_cooperativity())
        throw UndefinedCooperativity("balancing condition needs kappa > 0 and gamma > 0");
    return std::sqrt(p.g() * std::sqrt(2.0 * p.gamma() / p.kappa()) / tau);
}

} // namespace cmat
