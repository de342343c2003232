#include "cmat/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "cmat/errors.hpp"

namespace cmat {

namespace {

constexpr double guard_eps = 1e-10;

struct Spectrum {
    double w1_sq;
    double w2_sq;
};

Spectrum spectrum(const Couplings& c) {
    const double g2 = c.g * c.g;
    const double o1 = c.omega1 * c.omega1;
    const double o2 = c.omega2 * c.omega2;
    const double sum = 2.0 * g2 + o1 + o2;
    const double disc = std::sqrt(4.0 * g2 * g2 + (o1 - o2) * (o1 - o2));
    const double w2_sq = 0.5 * (sum + disc);
    const double w1_sq = w2_sq > 0.0 ? c.dark_norm() / w2_sq : 0.0;
    return {w1_sq, w2_sq};
}

// Largest-magnitude component made real positive.
Vector5c fix_phase(Vector5c v) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < v.size(); ++k)
        if (std::abs(v(k)) > std::abs(v(best)))
            best = k;
    const double mag = std::abs(v(best));
    if (mag > 0.0)
        v *= std::conj(v(best)) / mag;
    return v;
}

struct Dense {
    Eigen::Matrix<double, 5, 1> values;
    Matrix5c vectors;
};

Dense diagonalize(const Matrix5c& h) {
    Eigen::SelfAdjointEigenSolver<Matrix5c> es(h);
    return {es.eigenvalues(), es.eigenvectors()};
}

// Position of each branch in the ascending numeric spectrum
// {-w2, -w1, 0, +w1, +w2}.
constexpr std::array<Eigen::Index, 5> sorted_slot{2, 3, 1, 4, 0};

} // namespace

std::array<double, 5> eigenvalues(const Couplings& c) {
    const auto [w1_sq, w2_sq] = spectrum(c);
    const double w1 = std::sqrt(w1_sq);
    const double w2 = std::sqrt(w2_sq);
    return {0.0, w1, -w1, w2, -w2};
}

std::array<double, 5> eigenvalues(double t, const CqedParams& p, const PulseSchedule& s) {
    return eigenvalues(couplings_at(t, p, s));
}

BranchCoefficients coefficients_1(const Couplings& c, double omega_sq) {
    const double g2 = c.g * c.g;
    return {c.omega2 * c.omega2 - omega_sq + 2.0 * g2, -c.omega1 * c.omega1 + omega_sq - 2.0 * g2};
}

BranchCoefficients coefficients_2(const Couplings& c, double omega_sq) {
    return {c.omega2 * c.omega2 - omega_sq, c.omega1 * c.omega1 - omega_sq};
}

Vector5c branch_vector(const Couplings& c, double omega, BranchCoefficients ab) {
    const cplx i(0.0, 1.0);
    Vector5c v;
    v << ab.a * c.omega1, ab.b * c.omega2, i * omega * ab.a, i * omega * ab.b, c.g * (ab.a + ab.b);
    return v;
}

EigenSystem eigenvectors(const Couplings& c) {
    if (c.omega1 == 0.0 && c.omega2 == 0.0 && c.g == 0.0)
        throw DegenerateSpectrum("all couplings vanish; eigenbasis undefined");

    const double scale = c.omega1 * c.omega1 + c.omega2 * c.omega2 + c.g * c.g;
    const auto [w1_sq, w2_sq] = spectrum(c);
    const double w1 = std::sqrt(w1_sq);
    const double w2 = std::sqrt(w2_sq);

    EigenSystem sys;
    sys.omega = {0.0, w1, -w1, w2, -w2};

    std::optional<Dense> dense;
    auto numeric = [&](Branch b) -> Vector5c {
        if (!dense)
            dense = diagonalize(hamiltonian(c));
        return fix_phase(dense->vectors.col(sorted_slot[static_cast<std::size_t>(b)]));
    };

    sys.n0 = c.dark_norm();
    if (sys.n0 > guard_eps * scale * scale) {
        sys.vectors[0] = darkstate(c).amps;
    } else {
        sys.fallback_dark = true;
        sys.vectors[0] = numeric(Branch::Zero);
    }

    // A pair (A, B) can vanish on its own branch only at degenerate points;
    // the vector norm N ~ scale^3 is checked alongside.
    auto fill_pair = [&](BranchCoefficients ab, double w, Branch plus, Branch minus, double& n_out,
                         bool& fallback) {
        const Vector5c vp = branch_vector(c, w, ab);
        const Vector5c vm = branch_vector(c, -w, ab);
        n_out = vp.squaredNorm();
        const bool tiny_ab = std::abs(ab.a) + std::abs(ab.b) < guard_eps * scale;
        const bool tiny_n = !(n_out > guard_eps * guard_eps * scale * scale * scale);
        if (tiny_ab || tiny_n) {
            fallback = true;
            sys.vectors[static_cast<std::size_t>(plus)] = numeric(plus);
            sys.vectors[static_cast<std::size_t>(minus)] = numeric(minus);
            return;
        }
        const double inv = 1.0 / std::sqrt(n_out);
        sys.vectors[static_cast<std::size_t>(plus)] = fix_phase(vp * inv);
        sys.vectors[static_cast<std::size_t>(minus)] = fix_phase(vm * inv);
    };

    const auto ab1 = coefficients_1(c, w1_sq);
    const auto ab2 = coefficients_2(c, w2_sq);
    sys.a1 = ab1.a;
    sys.b1 = ab1.b;
    sys.a2 = ab2.a;
    sys.b2 = ab2.b;
    fill_pair(ab1, w1, Branch::Plus1, Branch::Minus1, sys.n1, sys.fallback_1);
    fill_pair(ab2, w2, Branch::Plus2, Branch::Minus2, sys.n2, sys.fallback_2);
    return sys;
}

EigenSystem eigenvectors(double t, const CqedParams& p, const PulseSchedule& s) {
    return eigenvectors(couplings_at(t, p, s));
}

NumericValidationReport validate_against_numeric(const Matrix5c& h, const Couplings& c, double tol,
                                                 CoefficientChoice choice) {
    if (!(tol > 0.0))
        throw InvalidParameter("validation tolerance must be positive");

    NumericValidationReport rep;
    const Dense dense = diagonalize(h);
    const double hnorm = std::max(std::abs(dense.values(0)), std::abs(dense.values(4)));

    std::array<double, 5> omega{};
    std::array<Vector5c, 5> vecs{};
    if (choice == CoefficientChoice::Standard) {
        const EigenSystem sys = eigenvectors(c);
        omega = sys.omega;
        vecs = sys.vectors;
    } else {
        const auto [w1_sq, w2_sq] = spectrum(c);
        const double w1 = std::sqrt(w1_sq);
        const double w2 = std::sqrt(w2_sq);
        omega = {0.0, w1, -w1, w2, -w2};
        vecs[0] = darkstate(c).amps;
        const auto wrong1 = coefficients_2(c, w1_sq);
        const auto wrong2 = coefficients_1(c, w2_sq);
        const double scale = c.omega1 * c.omega1 + c.omega2 * c.omega2 + c.g * c.g;
        const std::array<std::pair<double, BranchCoefficients>, 4> pairs{
            {{w1, wrong1}, {-w1, wrong1}, {w2, wrong2}, {-w2, wrong2}}};
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            Vector5c v = branch_vector(c, pairs[k].first, pairs[k].second);
            const double n = v.norm();
            if (!(n > guard_eps * scale * std::sqrt(scale))) {
                rep.breakdown = true;
                vecs[k + 1] = Vector5c::Zero();
            } else {
                vecs[k + 1] = v / n;
            }
        }
    }

    std::array<double, 5> sorted = omega;
    std::sort(sorted.begin(), sorted.end());
    for (Eigen::Index k = 0; k < 5; ++k)
        rep.max_eigenvalue_error =
            std::max(rep.max_eigenvalue_error, std::abs(sorted[static_cast<std::size_t>(k)] - dense.values(k)));

    rep.degenerate = std::abs(std::abs(omega[3]) - std::abs(omega[1])) < tol;

    const double cluster = std::max(tol, 1e-8 * std::max(1.0, hnorm));
    for (std::size_t k = 0; k < 5; ++k) {
        const Vector5c& a = vecs[k];
        if (a.squaredNorm() == 0.0)
            continue;
        rep.max_residual = std::max(rep.max_residual, (h * a - omega[k] * a).norm());
        Vector5c rest = a;
        for (Eigen::Index j = 0; j < 5; ++j) {
            if (std::abs(dense.values(j) - omega[k]) <= cluster) {
                const auto col = dense.vectors.col(j);
                rest -= col * col.dot(a);
            }
        }
        rep.max_subspace_angle = std::max(rep.max_subspace_angle, std::asin(std::min(1.0, rest.norm())));
    }

    const bool eig_ok = rep.max_eigenvalue_error < tol;
    const bool angle_ok = rep.degenerate || rep.max_subspace_angle < tol;
    const bool resid_ok = rep.max_residual < tol * std::max(1.0, hnorm);
    rep.passed = !rep.breakdown && eig_ok && angle_ok && resid_ok;

    if (rep.breakdown)
        rep.message = "coefficient formula cannot be applied on this branch: eigenvector vanishes";
    else if (rep.degenerate)
        rep.message = "|w1| and |w2| coincide within tolerance; eigenvector matching is ambiguous";
    else if (!rep.passed)
        rep.message = "analytic eigensystem disagrees with numeric diagonalization";
    else
        rep.message = "ok";
    return rep;
}

NumericValidationReport validate_against_numeric(double t, const CqedParams& p, const PulseSchedule& s,
                                                 double tol, CoefficientChoice choice) {
    const Couplings c = couplings_at(t, p, s);
    NumericValidationReport rep = validate_against_numeric(hamiltonian(c), c, tol, choice);
    rep.decay_ignored = p.kappa() > 0.0 || p.gamma() > 0.0;
    if (rep.decay_ignored && rep.message == "ok")
        rep.message = "ok (kappa/gamma ignored: Hermitian H only)";
    return rep;
}

} // namespace cmat
