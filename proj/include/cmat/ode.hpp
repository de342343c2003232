// ode.hpp: Dormand-Prince 5(4) with step-size control and the standard
// fourth-order continuous extension for dense output.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "cmat/errors.hpp"

namespace cmat::ode {

struct Tolerances {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 50'000'000;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

/// Continuous extension over one accepted step [t0, t0 + h].
template <int N>
class DenseStep {
public:
    using State = Eigen::Matrix<double, N, 1>;

    double t0 = 0.0;
    double h = 0.0;

    State operator()(double t) const {
        const double theta = (t - t0) / h;
        const double theta1 = 1.0 - theta;
        return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
    }

    State r1, r2, r3, r4, r5;
};

/// Integrates y' = rhs(t, y) from t0 to t1. After each accepted step,
/// `on_step(const DenseStep<N>&)` is called. Throws IntegrationFailure on
/// step-size underflow or when max_steps is exceeded.
template <int N, class Rhs, class OnStep>
Eigen::Matrix<double, N, 1> integrate(Rhs&& rhs, Eigen::Matrix<double, N, 1> y, double t0, double t1,
                                      const Tolerances& tol, OnStep&& on_step, Stats* stats = nullptr) {
    using State = Eigen::Matrix<double, N, 1>;

    // Dormand-Prince tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    Stats local;
    Stats& st = stats ? *stats : local;

    const double span = t1 - t0;
    if (!(span > 0.0))
        throw InvalidParameter("integration interval must have t1 > t0");

    auto err_norm = [&](const State& err, const State& ya, const State& yb) {
        const State sc = (tol.abs_tol + tol.rel_tol * ya.cwiseAbs().cwiseMax(yb.cwiseAbs()).array()).matrix();
        return std::sqrt((err.array() / sc.array()).square().mean());
    };

    State k1 = rhs(t0, y);
    ++st.rhs_calls;

    // Initial step (Hairer, Nørsett & Wanner II.4).
    double h;
    {
        const State sc = (tol.abs_tol + tol.rel_tol * y.cwiseAbs().array()).matrix();
        const double dn0 = std::sqrt((y.array() / sc.array()).square().mean());
        const double dn1 = std::sqrt((k1.array() / sc.array()).square().mean());
        double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
        h0 = std::min({h0, span, tol.max_step});
        const State y1 = y + h0 * k1;
        const State k = rhs(t0 + h0, y1);
        ++st.rhs_calls;
        const double dn2 = std::sqrt((((k - k1).array() / sc.array()).square().mean())) / h0;
        const double dmax = std::max(dn1, dn2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
        h = std::min({100.0 * h0, h1, span, tol.max_step});
    }

    double t = t0;
    bool last_rejected = false;
    DenseStep<N> dense;
    while (t < t1) {
        if (st.accepted + st.rejected >= tol.max_steps)
            throw IntegrationFailure("step budget exhausted", t);
        // Stretch the step slightly rather than leave a sliver before t1.
        const bool final_step = t + 1.01 * h >= t1;
        if (final_step)
            h = t1 - t;
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
            throw IntegrationFailure("step size underflow at t = " + std::to_string(t), t);

        const State k2 = rhs(t + c2 * h, y + h * (a21 * k1));
        const State k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const State k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const State k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const State k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const State y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const State k7 = rhs(t + h, y_new);
        st.rhs_calls += 6;

        const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = err_norm(err, y, y_new);
        if (!std::isfinite(en))
            throw IntegrationFailure("non-finite error estimate at t = " + std::to_string(t), t);

        if (en <= 1.0) {
            dense.t0 = t;
            dense.h = h;
            dense.r1 = y;
            dense.r2 = y_new - y;
            dense.r3 = h * k1 - dense.r2;
            dense.r4 = dense.r2 - h * k7 - dense.r3;
            dense.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

            t = final_step ? t1 : t + h;
            y = y_new;
            k1 = k7;
            ++st.accepted;
            on_step(static_cast<const DenseStep<N>&>(dense));

            double fac = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
            h = std::min(h * fac, tol.max_step);
            last_rejected = false;
        } else {
            ++st.rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            last_rejected = true;
        }
    }
    return y;
}

} // namespace cmat::ode
