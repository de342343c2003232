#include "cmat/model.hpp"

#include <cmath>
#include <string>

#include "cmat/errors.hpp"

namespace cmat {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok)
        throw InvalidParameter(what);
}

} // namespace

CqedParams::CqedParams(double g, double kappa, double gamma)
    : g_(g), kappa_(kappa), gamma_(gamma) {
    require(std::isfinite(g) && g > 0.0, "g must be positive, got " + std::to_string(g));
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be non-negative, got " + std::to_string(kappa));
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be non-negative, got " + std::to_string(gamma));
}

double CqedParams::cooperativity() const {
    if (!has_cooperativity())
        throw UndefinedCooperativity("cooperativity needs kappa > 0 and gamma > 0");
    return g_ * g_ / (2.0 * kappa_ * gamma_);
}

CqedParams CqedParams::from_cooperativity(double g, double cooperativity, double gamma) {
    require(cooperativity > 0.0, "cooperativity must be positive");
    require(gamma > 0.0, "gamma must be positive to fix a cooperativity");
    return CqedParams(g, g * g / (2.0 * gamma * cooperativity), gamma);
}

PulseFactors pulse_f(double t, double tau) {
    require(tau > 0.0, "tau must be positive");
    require(std::isfinite(t), "t must be finite");
    const double s = t / tau;
    // e^{-|s|} never overflows; the dominant envelope is 1/d.
    const double x = std::exp(-std::abs(s));
    const double d = std::sqrt(1.0 + x * x);
    if (s >= 0.0)
        return {1.0 / d, x / d};
    return {x / d, 1.0 / d};
}

PulseFactors pulse_f_dot(double t, double tau) {
    const auto [f1, f2] = pulse_f(t, tau);
    return {f1 * f2 * f2 / tau, -f1 * f1 * f2 / tau};
}

PulseSchedule::PulseSchedule(double omega0, double tau, double halfwidth)
    : omega0_(omega0), tau_(tau), halfwidth_(halfwidth) {
    require(std::isfinite(omega0) && omega0 > 0.0, "omega0 must be positive, got " + std::to_string(omega0));
    require(std::isfinite(tau) && tau > 0.0, "tau must be positive, got " + std::to_string(tau));
    require(std::isfinite(halfwidth) && halfwidth > 0.0, "halfwidth must be positive, got " + std::to_string(halfwidth));
}

PulseFactors PulseSchedule::rabi(double t) const {
    const auto [f1, f2] = pulse_f(t, tau_);
    return {omega0_ * f1, omega0_ * f2};
}

double Couplings::dark_norm() const {
    const double g2 = g * g;
    const double o1 = omega1 * omega1;
    const double o2 = omega2 * omega2;
    return g2 * o1 + g2 * o2 + o1 * o2;
}

Couplings couplings_at(double t, const CqedParams& p, const PulseSchedule& s) {
    const auto [o1, o2] = s.rabi(t);
    return {o1, o2, p.g()};
}

StateVector StateVector::basis(Basis b) {
    StateVector v;
    v[b] = 1.0;
    return v;
}

Matrix5c hamiltonian(const Couplings& c) {
    const cplx i(0.0, 1.0);
    Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
    m(0, 2) = -c.omega1;
    m(1, 3) = -c.omega2;
    m(2, 0) = c.omega1;
    m(2, 4) = c.g;
    m(3, 1) = c.omega2;
    m(3, 4) = c.g;
    m(4, 2) = -c.g;
    m(4, 3) = -c.g;
    return i * m.cast<cplx>();
}

Matrix5c hamiltonian(double t, const CqedParams& p, const PulseSchedule& s) {
    return hamiltonian(couplings_at(t, p, s));
}

Matrix5c effective_hamiltonian(const Couplings& c, double kappa, double gamma) {
    Matrix5c h = hamiltonian(c);
    const cplx i(0.0, 1.0);
    h(2, 2) -= i * gamma;
    h(3, 3) -= i * gamma;
    h(4, 4) -= i * kappa;
    return h;
}

Matrix5c effective_hamiltonian(double t, const CqedParams& p, const PulseSchedule& s) {
    return effective_hamiltonian(couplings_at(t, p, s), p.kappa(), p.gamma());
}

StateVector darkstate(const Couplings& c) {
    const double n0 = c.dark_norm();
    if (!(n0 > 0.0))
        throw DegenerateState("dark state undefined: g^2 Omega1^2 + g^2 Omega2^2 + Omega1^2 Omega2^2 = 0");
    const double inv = 1.0 / std::sqrt(n0);
    StateVector d;
    d[Basis::UG0] = c.g * c.omega2 * inv;
    d[Basis::GU0] = c.g * c.omega1 * inv;
    d[Basis::GG1] = -c.omega1 * c.omega2 * inv;
    return d;
}

StateVector darkstate(double t, const CqedParams& p, const PulseSchedule& s) {
    return darkstate(couplings_at(t, p, s));
}

double cavity_population(const Couplings& c) {
    const double n0 = c.dark_norm();
    if (!(n0 > 0.0))
        throw DegenerateState("cavity population undefined: both pulses vanish");
    const double o1 = c.omega1 * c.omega1;
    const double o2 = c.omega2 * c.omega2;
    return o1 * o2 / n0;
}

double cavity_population(double t, const CqedParams& p, const PulseSchedule& s) {
    return cavity_population(couplings_at(t, p, s));
}

GammaUnits to_gamma_units(const CqedParams& raw) {
    if (!(raw.gamma() > 0.0))
        throw InvalidParameter("gamma-normalized units need gamma > 0");
    const double gm = raw.gamma();
    return {CqedParams(raw.g() / gm, raw.kappa() / gm, 1.0), gm};
}

} // namespace cmat
