#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmat/errors.hpp"
#include "cmat/ode.hpp"

using namespace cmat;
using Vec2 = Eigen::Matrix<double, 2, 1>;
using Vec1 = Eigen::Matrix<double, 1, 1>;

TEST_CASE("harmonic oscillator endpoint and dense output") {
    // y = (cos t, -sin t) solves y0' = y1, y1' = -y0.
    const auto rhs = [](double, const Vec2& y) { return Vec2(y(1), -y(0)); };
    ode::Tolerances tol;
    tol.rel_tol = 1e-10;
    tol.abs_tol = 1e-12;

    double worst_dense = 0.0;
    std::size_t steps = 0;
    double last_end = 0.0;
    bool contiguous = true;
    const auto on_step = [&](const ode::DenseStep<2>& d) {
        if (std::abs(d.t0 - last_end) > 1e-12)
            contiguous = false;
        last_end = d.t0 + d.h;
        ++steps;
        for (double th : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double t = d.t0 + th * d.h;
            const Vec2 y = d(t);
            worst_dense = std::max(worst_dense, std::max(std::abs(y(0) - std::cos(t)), std::abs(y(1) + std::sin(t))));
        }
    };
    ode::Stats st;
    const Vec2 y = ode::integrate<2>(rhs, Vec2(1.0, 0.0), 0.0, 20.0, tol, on_step, &st);
    CHECK(std::abs(y(0) - std::cos(20.0)) < 1e-8);
    CHECK(std::abs(y(1) + std::sin(20.0)) < 1e-8);
    CHECK(worst_dense < 1e-8);
    CHECK(contiguous);
    CHECK(last_end == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(st.accepted == steps);
    CHECK(st.rhs_calls > 6 * steps);
}

TEST_CASE("tighter tolerance converges") {
    const auto rhs = [](double t, const Vec1& y) { return Vec1(-2.0 * t * y(0)); };
    const double exact = std::exp(-9.0);
    double prev_err = 1.0;
    for (double rtol : {1e-4, 1e-7, 1e-10}) {
        ode::Tolerances tol;
        tol.rel_tol = rtol;
        tol.abs_tol = rtol * 1e-3;
        const Vec1 y = ode::integrate<1>(rhs, Vec1(1.0), 0.0, 3.0, tol, [](const auto&) {});
        const double err = std::abs(y(0) - exact);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-12);
}

TEST_CASE("max_step caps the step size") {
    const auto rhs = [](double, const Vec1&) { return Vec1(1.0); };
    ode::Tolerances tol;
    tol.max_step = 0.01;
    double biggest = 0.0;
    ode::integrate<1>(rhs, Vec1(0.0), 0.0, 1.0, tol, [&](const ode::DenseStep<1>& d) { biggest = std::max(biggest, d.h); });
    CHECK(biggest <= 0.01 + 1e-15);
}

TEST_CASE("finite-time blow-up is reported with the last good time") {
    // y' = y^2, y(0) = 1 diverges at t = 1.
    const auto rhs = [](double, const Vec1& y) { return Vec1(y(0) * y(0)); };
    ode::Tolerances tol;
    try {
        ode::integrate<1>(rhs, Vec1(1.0), 0.0, 2.0, tol, [](const auto&) {});
        FAIL("expected an integration failure");
    } catch (const IntegrationFailure& e) {
        CHECK(e.last_t < 1.0);
        CHECK(e.last_t > 0.99);
    }
}

TEST_CASE("step budget is enforced") {
    const auto rhs = [](double t, const Vec1&) { return Vec1(std::cos(50.0 * t)); };
    ode::Tolerances tol;
    tol.max_steps = 10;
    CHECK_THROWS_AS(ode::integrate<1>(rhs, Vec1(0.0), 0.0, 100.0, tol, [](const auto&) {}), IntegrationFailure);
}
