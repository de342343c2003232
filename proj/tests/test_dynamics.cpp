#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmat/adiabatic.hpp"
#include "cmat/dynamics.hpp"
#include "cmat/errors.hpp"
#include "cmat/lossmodel.hpp"
#include "test_util.hpp"

using namespace cmat;
using cmat::test::Rng;

TEST_CASE("lossless transfer with a long window is complete and unitary") {
    // g = Omega0, Omega0 T = 1000 with T = 15 tau.
    const CqedParams p(1.0, 0.0, 0.0);
    const double tau = 1000.0 / 15.0;
    const SimResult r = evolve(p, PulseSchedule(1.0, tau));
    CHECK(r.fidelity > 0.999);
    CHECK(std::abs(r.norm_final - 1.0) < 1e-9);
    CHECK(std::abs(photon_loss_probability(r)) < 1e-9);
    CHECK(r.i_a == 0.0);
    CHECK(r.i_cav == 0.0);
    CHECK(norm_history_check(r));
    for (const auto& s : r.samples)
        CHECK(std::abs(s.norm - 1.0) < 1e-9);
}

TEST_CASE("lossless norm drift shrinks with the tolerance") {
    // Many oscillation periods (Omega0 tau = g tau = 100) accumulate local error.
    const CqedParams p(100.0, 0.0, 0.0);
    const PulseSchedule s(100.0, 1.0);
    SimConfig loose;
    loose.sample_count = 2;
    SimConfig tight = loose;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-15;
    const double drift_loose = std::abs(evolve(p, s, loose).norm_final - 1.0);
    const double drift_tight = std::abs(evolve(p, s, tight).norm_final - 1.0);
    CHECK(drift_loose < 1e-6);
    CHECK(drift_tight < 1e-9);
    CHECK(drift_tight < drift_loose);
}

TEST_CASE("tau = 8 tau0 reaches 0.99 without dissipation") {
    for (double ratio : {0.1, 1.0, 10.0}) {
        const CqedParams p(1.0, 0.0, 0.0);
        const double omega0 = ratio;
        const double tau = 8.0 * tau0(p, omega0);
        CHECK(evolve(p, PulseSchedule(omega0, tau)).fidelity >= 0.99);
    }
}

TEST_CASE("balanced adiabatic point at C = 200 approaches the ceiling") {
    const CqedParams p = CqedParams::from_cooperativity(50.0, 200.0);
    const double tau = 2.0 * 0.5656854249492381;  // 2 tau_a at C = 200, F_adi = 8
    const double omega0 = omega0_from_balancing(p, tau);
    const SimResult r = evolve(p, PulseSchedule(omega0, tau));
    const double ceiling = success_upper_bound(p);
    CHECK(ceiling == doctest::Approx(0.868).epsilon(1e-3));
    CHECK(r.success_probability == doctest::Approx(ceiling).epsilon(0.10));
    CHECK(photon_loss_probability(r) == doctest::Approx(1.0 - ceiling).epsilon(0.02));
    CHECK(std::abs(photon_loss_probability(r) - (r.i_a + r.i_cav)) < 1e-6);
    CHECK(std::abs(r.success_probability - r.success_from_losses) < 10.0 * SimConfig{}.rel_tol);
    CHECK(norm_history_check(r));
}

TEST_CASE("probability budget on random dissipative runs") {
    Rng rng(31);
    for (int i = 0; i < 25; ++i) {
        const CqedParams p(rng.log_uniform(0.5, 50), rng.log_uniform(0.01, 10), rng.log_uniform(0.01, 10));
        const double omega0 = rng.log_uniform(0.05, 2.0) * p.g();
        const double tau = rng.log_uniform(0.05, 5.0);
        SimConfig cfg;
        cfg.sample_count = 200;
        const SimResult r = evolve(p, PulseSchedule(omega0, tau), cfg);
        CHECK(std::abs(r.budget_residual()) < 1e-6);
        CHECK(norm_history_check(r));
        CHECK(std::abs(r.success_probability - r.success_from_losses) < 10.0 * cfg.rel_tol);
        CHECK(r.success_probability >= 0.0);
        CHECK(r.success_probability <= 1.0);
    }
}

TEST_CASE("norm falls strictly while the photon is populated") {
    const CqedParams p(1.0, 2.0, 0.0);
    SimConfig cfg;
    cfg.sample_count = 400;
    const SimResult r = evolve(p, PulseSchedule(1.0, 3.0), cfg);
    CHECK(norm_history_check(r));
    int strict = 0;
    for (std::size_t k = 1; k < r.samples.size(); ++k)
        if (std::norm(r.samples[k - 1].amps(4)) > 1e-6) {
            CHECK(r.samples[k].norm < r.samples[k - 1].norm);
            ++strict;
        }
    CHECK(strict > 10);
}

TEST_CASE("norm history detector flags an uptick") {
    std::vector<TrajectorySample> s;
    for (double n : {1.0, 0.99, 0.98, 0.97})
        s.push_back({0.0, Vector5c::Zero(), n});
    CHECK(norm_history_check(s));
    s[2].norm = 0.995;
    CHECK_FALSE(norm_history_check(s));
    s[2].norm = 0.99 + 5e-11;
    CHECK(norm_history_check(s));
}

TEST_CASE("trajectory samples span the window") {
    const CqedParams p(1.0, 0.1, 0.1);
    const PulseSchedule s(0.7, 2.0);
    SimConfig cfg;
    cfg.sample_count = 17;
    const SimResult r = evolve(p, s, cfg);
    REQUIRE(r.samples.size() == 17);
    CHECK(r.samples.front().t == s.start());
    CHECK(r.samples.back().t == s.end());
    CHECK(r.samples.back().amps == r.final_state.amps);
    for (std::size_t k = 1; k < r.samples.size(); ++k)
        CHECK(r.samples[k].t > r.samples[k - 1].t);
}

TEST_CASE("dense samples do not depend on the sample count") {
    const CqedParams p(1.0, 0.2, 0.3);
    const PulseSchedule s(1.0, 1.0);
    SimConfig fine;
    fine.sample_count = 4;  // samples at -7.5, -2.5, 2.5, 7.5
    fine.rel_tol = 1e-11;
    fine.abs_tol = 1e-14;
    const SimResult a = evolve(p, s, fine);
    SimConfig coarse = fine;
    coarse.sample_count = 7;  // includes -2.5 and 2.5 as well
    const SimResult b = evolve(p, s, coarse);
    CHECK((a.samples[1].amps - b.samples[2].amps).norm() < 1e-8);
    CHECK((a.samples[2].amps - b.samples[4].amps).norm() < 1e-8);
}

TEST_CASE("halving rel_tol barely moves the reference result") {
    const CqedParams p = CqedParams::from_cooperativity(20.0, 200.0);
    const PulseSchedule s(omega0_from_balancing(p, 2.0), 2.0);
    SimConfig a;
    SimConfig b;
    b.rel_tol = a.rel_tol / 2.0;
    CHECK(std::abs(evolve(p, s, a).success_probability - evolve(p, s, b).success_probability) < 1e-7);
}

TEST_CASE("fidelity climbs towards 1 with tau / tau0") {
    const CqedParams p(1.0, 0.0, 0.0);
    const double t0 = tau0(p, 1.0);
    std::vector<double> fid;
    for (double m : {2.0, 4.0, 8.0, 16.0})
        fid.push_back(evolve(p, PulseSchedule(1.0, m * t0)).fidelity);
    for (std::size_t k = 1; k < fid.size(); ++k)
        CHECK(fid[k] > fid[k - 1] - 1e-3);
    CHECK(fid.back() > fid.front());
    CHECK(fid.back() > 0.999);
}

TEST_CASE("bad tolerances are rejected") {
    const CqedParams p(1.0, 0.0, 0.0);
    const PulseSchedule s(1.0, 1.0);
    SimConfig cfg;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(evolve(p, s, cfg), InvalidParameter);
    cfg = {};
    cfg.max_step = -1.0;
    CHECK_THROWS_AS(evolve(p, s, cfg), InvalidParameter);
    cfg = {};
    cfg.sample_count = 1;
    CHECK_THROWS_AS(evolve(p, s, cfg), InvalidParameter);
}

TEST_CASE("unreachable tolerance fails with the last good time") {
    const CqedParams p(1.0, 0.0, 0.0);
    const PulseSchedule s(1.0, 1.0);
    SimConfig cfg;
    cfg.rel_tol = 1e-30;
    cfg.abs_tol = 1e-300;
    try {
        evolve(p, s, cfg);
        FAIL("expected an integration failure");
    } catch (const IntegrationFailure& e) {
        CHECK(e.last_t >= s.start());
        CHECK(e.last_t < s.end());
    }
}
