// model.hpp: CQED parameters, pulse protocol, basis convention and the
// 5x5 Hamiltonians of the single-excitation subspace.

#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace cmat {

using cplx = std::complex<double>;
using Matrix5c = Eigen::Matrix<cplx, 5, 5>;
using Vector5c = Eigen::Matrix<cplx, 5, 1>;

/// Basis ordering used by every matrix and vector in the library:
/// |u>1|g>2|0>c, |g>1|u>2|0>c, |e>1|g>2|0>c, |g>1|e>2|0>c, |g>1|g>2|1>c.
enum class Basis : std::size_t { UG0 = 0, GU0 = 1, EG0 = 2, GE0 = 3, GG1 = 4 };

constexpr std::size_t index(Basis b) { return static_cast<std::size_t>(b); }

/// Cavity-QED rate triple. g > 0, kappa >= 0, gamma >= 0; kappa is the
/// cavity amplitude decay rate and gamma the atomic polarization decay rate.
class CqedParams {
public:
    CqedParams(double g, double kappa, double gamma);

    double g() const { return g_; }
    double kappa() const { return kappa_; }
    double gamma() const { return gamma_; }

    bool has_cooperativity() const { return kappa_ > 0.0 && gamma_ > 0.0; }
    /// C = g^2 / (2 kappa gamma). Throws UndefinedCooperativity if a decay rate is zero.
    double cooperativity() const;

    /// Parameters with kappa derived from a target cooperativity at gamma.
    static CqedParams from_cooperativity(double g, double cooperativity, double gamma = 1.0);

private:
    double g_;
    double kappa_;
    double gamma_;
};

struct PulseFactors {
    double f1;
    double f2;
};

/// Pulse envelopes f1 = e^{t/tau}/sqrt(e^{2t/tau}+1), f2 = 1/sqrt(e^{2t/tau}+1),
/// evaluated without overflow for any finite t/tau.
PulseFactors pulse_f(double t, double tau);

/// Time derivatives: f1' = f1 f2^2 / tau, f2' = -f1^2 f2 / tau.
PulseFactors pulse_f_dot(double t, double tau);

/// Counter-intuitive pulse pair Omega_i(t) = omega0 f_i(t), simulated on
/// t in [-halfwidth*tau, +halfwidth*tau].
class PulseSchedule {
public:
    static constexpr double default_halfwidth = 7.5;

    PulseSchedule(double omega0, double tau, double halfwidth = default_halfwidth);

    double omega0() const { return omega0_; }
    double tau() const { return tau_; }
    double halfwidth() const { return halfwidth_; }

    double start() const { return -halfwidth_ * tau_; }
    double end() const { return halfwidth_ * tau_; }
    double duration() const { return 2.0 * halfwidth_ * tau_; }

    /// (Omega_1(t), Omega_2(t)).
    PulseFactors rabi(double t) const;

private:
    double omega0_;
    double tau_;
    double halfwidth_;
};

/// Instantaneous couplings entering H(t). Kept separate from the pulse
/// protocol so idealized points (e.g. both pulses off) can be evaluated.
struct Couplings {
    double omega1;
    double omega2;
    double g;

    /// g^2 Omega1^2 + g^2 Omega2^2 + Omega1^2 Omega2^2.
    double dark_norm() const;
};

Couplings couplings_at(double t, const CqedParams& p, const PulseSchedule& s);

struct StateVector {
    Vector5c amps = Vector5c::Zero();

    cplx& operator[](Basis b) { return amps(static_cast<Eigen::Index>(index(b))); }
    cplx operator[](Basis b) const { return amps(static_cast<Eigen::Index>(index(b))); }
    double squared_norm() const { return amps.squaredNorm(); }

    static StateVector basis(Basis b);
};

/// H/hbar = i M with M the real antisymmetric generator of the subspace.
Matrix5c hamiltonian(const Couplings& c);
Matrix5c hamiltonian(double t, const CqedParams& p, const PulseSchedule& s);

/// H_eff/hbar = H/hbar - i diag(0, 0, gamma, gamma, kappa).
Matrix5c effective_hamiltonian(const Couplings& c, double kappa, double gamma);
Matrix5c effective_hamiltonian(double t, const CqedParams& p, const PulseSchedule& s);

/// Normalized zero-eigenvalue state (g Omega2, g Omega1, 0, 0, -Omega1 Omega2)/sqrt(N0).
/// Throws DegenerateState when N0 = 0.
StateVector darkstate(const Couplings& c);
StateVector darkstate(double t, const CqedParams& p, const PulseSchedule& s);

/// Photon population of the dark state, Omega1^2 Omega2^2 / N0.
double cavity_population(const Couplings& c);
double cavity_population(double t, const CqedParams& p, const PulseSchedule& s);

/// Absolute rates rescaled so that gamma = 1. Other rates are divided by
/// `gamma`, times multiplied by it. Requires raw gamma > 0.
struct GammaUnits {
    CqedParams params;
    double gamma;

    double rate(double raw) const { return raw / gamma; }
    double time(double raw) const { return raw * gamma; }
};
GammaUnits to_gamma_units(const CqedParams& raw);

} // namespace cmat
