// eigensystem.hpp: closed-form instantaneous eigenpairs of H(t) in the
// single-excitation subspace, plus a dense-diagonalization cross-check.

#pragma once

#include <array>
#include <string>

#include "cmat/model.hpp"

namespace cmat {

/// Branch order used for EigenSystem::omega and EigenSystem::vectors.
enum class Branch : std::size_t { Zero = 0, Plus1 = 1, Minus1 = 2, Plus2 = 3, Minus2 = 4 };

struct EigenSystem {
    std::array<double, 5> omega{};      // {0, +w1, -w1, +w2, -w2}
    std::array<Vector5c, 5> vectors{};  // unit norm, same order as omega
    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
    double n0 = 0.0, n1 = 0.0, n2 = 0.0;
    // Set when a branch came from numeric diagonalization (degeneracy guard).
    bool fallback_dark = false;
    bool fallback_1 = false;
    bool fallback_2 = false;

    double value(Branch b) const { return omega[static_cast<std::size_t>(b)]; }
    const Vector5c& vector(Branch b) const { return vectors[static_cast<std::size_t>(b)]; }
};

/// {0, +w1, -w1, +w2, -w2}. w2^2 = (S + D)/2 with S = 2g^2 + O1^2 + O2^2 and
/// D = sqrt(4g^4 + (O1^2 - O2^2)^2); w1^2 = N0 / w2^2, the same root without
/// the cancellation in (S - D)/2.
std::array<double, 5> eigenvalues(const Couplings& c);
std::array<double, 5> eigenvalues(double t, const CqedParams& p, const PulseSchedule& s);

/// (A1, B1) for the w1 pair, (A2, B2) for the w2 pair.
struct BranchCoefficients {
    double a;
    double b;
};
BranchCoefficients coefficients_1(const Couplings& c, double omega_sq);
BranchCoefficients coefficients_2(const Couplings& c, double omega_sq);

/// Unnormalized (A O1, B O2, i w A, i w B, g(A + B)).
Vector5c branch_vector(const Couplings& c, double omega, BranchCoefficients ab);

EigenSystem eigenvectors(const Couplings& c);
EigenSystem eigenvectors(double t, const CqedParams& p, const PulseSchedule& s);

/// Which coefficient pair to attach to which eigenvalue pair. `Swapped`
/// uses (A2, B2) for w1 and (A1, B1) for w2, which breaks down at O1 = O2.
enum class CoefficientChoice { Standard, Swapped };

struct NumericValidationReport {
    double max_eigenvalue_error = 0.0;
    double max_subspace_angle = 0.0;  // radians
    double max_residual = 0.0;        // max_k ||H phi_k - w_k phi_k||
    bool degenerate = false;          // |w1| and |w2| within tolerance
    bool breakdown = false;           // an analytic vector collapsed to zero
    bool decay_ignored = false;       // caller passed kappa/gamma > 0
    bool passed = false;
    std::string message;
};

/// Cross-checks the analytic eigensystem against dense Hermitian
/// diagonalization of `h`, matching eigenpairs by eigenvalue proximity.
/// Passes iff the eigenvalue error and the subspace angle are below `tol`
/// and every residual is below tol * max(1, ||h||). A |w1| ~ |w2| crossing
/// is reported as `degenerate` and skips the angle test.
NumericValidationReport validate_against_numeric(const Matrix5c& h, const Couplings& c, double tol,
                                                 CoefficientChoice choice = CoefficientChoice::Standard);
NumericValidationReport validate_against_numeric(double t, const CqedParams& p, const PulseSchedule& s,
                                                 double tol,
                                                 CoefficientChoice choice = CoefficientChoice::Standard);

} // namespace cmat
