#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cmat/errors.hpp"
#include "cmat/sweep.hpp"
#include "test_util.hpp"

using namespace cmat;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("cmat_test_sweep_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof a) == 0;
}

SweepSpec small_success_map() {
    SweepSpec s = SweepSpec::defaults(SweepMode::SuccessMap);
    s.x_axis = {"g", 10.0, 50.0, 2, AxisScale::Log};
    // Upper tau is 2 max(tau_a, tau_c) at g = 50, C = 200.
    s.y_axis = {"tau", 1e-3, 2.0 * 0.5656854249492381, 2, AxisScale::Log};
    return s;
}

SweepSpec tiny_dissipation_free_map() {
    SweepSpec s = SweepSpec::defaults(SweepMode::DissipationFreeMap);
    s.x_axis = {"omega0_tau", 0.1, 100.0, 4, AxisScale::Log};
    s.y_axis = {"g_tau", 0.1, 100.0, 4, AxisScale::Log};
    return s;
}

} // namespace

TEST_CASE("axis sampling and validation") {
    const Axis lg{"a", 1.0, 100.0, 3, AxisScale::Log};
    const auto v = lg.values();
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(v[2] == 100.0);
    const Axis lin{"b", 5.0, 20.0, 4, AxisScale::Linear};
    CHECK(lin.values() == std::vector<double>{5.0, 10.0, 15.0, 20.0});

    try {
        Axis{"c", 1.0, 2.0, 1, AxisScale::Log}.validate("sweep.x_axis");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.field_path == "sweep.x_axis.count");
    }
    CHECK_THROWS_AS(Axis({"d", 2.0, 1.0, 3, AxisScale::Linear}).validate("y"), ConfigError);
    CHECK_THROWS_AS(Axis({"e", 0.0, 1.0, 3, AxisScale::Log}).validate("y"), ConfigError);
}

TEST_CASE("mode defaults") {
    const SweepSpec s = SweepSpec::defaults(SweepMode::SuccessMap);
    CHECK(s.fixed_c == 200.0);
    CHECK(s.x_axis.min == 1.0);
    CHECK(s.x_axis.max == 300.0);
    CHECK(s.x_axis.count == 41);
    CHECK(s.y_axis.min == 1e-3);
    CHECK(s.y_axis.max == 10.0);
    CHECK(s.y_axis.count == 41);
    const SweepSpec t = SweepSpec::defaults(SweepMode::TruncationStudy);
    CHECK(t.x_axis.min == 5.0);
    CHECK(t.x_axis.max == 20.0);
    CHECK(t.omega0_T == 1000.0);
    for (auto m : {SweepMode::SuccessMap, SweepMode::FidelityMap, SweepMode::DissipationFreeMap,
                   SweepMode::TruncationStudy})
        CHECK(sweep_mode_from_string(to_string(m)) == m);
}

TEST_CASE("zero crossing interpolation") {
    CHECK(*zero_crossing({0.0, 1.0, 2.0}, {1.0, 0.5, -0.5}, AxisScale::Linear) == doctest::Approx(1.5));
    CHECK(*zero_crossing({1.0, 100.0}, {-1.0, 1.0}, AxisScale::Log) == doctest::Approx(10.0));
    CHECK_FALSE(zero_crossing({0.0, 1.0}, {1.0, 2.0}, AxisScale::Linear).has_value());
}

TEST_CASE("shortest round-trip formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(200.0) == "200");
    cmat::test::Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.log_uniform(1e-300, 1e300) * (i % 2 ? -1.0 : 1.0);
        CHECK(same_bits(std::strtod(format_double(v).c_str(), nullptr), v));
    }
}

TEST_CASE("success map at C = 200") {
    const SweepResult r = run_success_map(small_success_map());
    REQUIRE(r.nx == 2);
    REQUIRE(r.ny == 2);
    REQUIRE(r.failures() == 0);
    for (const auto& c : r.grid) {
        CHECK(c.success_probability >= 0.0);
        CHECK(c.success_probability <= 1.0);
        CHECK(c.fidelity <= 1.0);
        CHECK(std::abs(c.norm_final + c.i_a + c.i_cav - 1.0) < 1e-6);
    }
    // g = 50, tau = 2 max(tau_a, tau_c): within 1% of the ceiling.
    CHECK(r.at(1, 1).normalized_success >= 0.99);
    // tau far below both thresholds.
    CHECK(r.at(1, 0).normalized_success < 0.9);
    CHECK(r.at(0, 0).normalized_success < 0.9);

    // Below g* the cavity-suppression line lies above the adiabatic one; above g* the reverse.
    const Overlay* ta = r.overlay("tau_a_analytic");
    const Overlay* tc = r.overlay("tau_c_analytic");
    REQUIRE(ta);
    REQUIRE(tc);
    CHECK(tc->points[0].second > ta->points[0].second);
    CHECK(tc->points[1].second < ta->points[1].second);
    CHECK(r.overlay("tau_fadi_tau0"));
    CHECK(r.overlay("omega0_over_g_fcp"));
}

TEST_CASE("numeric and analytic cavity-suppression curves agree at g*/4") {
    SweepSpec s = SweepSpec::defaults(SweepMode::SuccessMap);
    const double g_star = std::sqrt(200.0);
    s.x_axis = {"g", g_star / 4.0, g_star / 2.0, 2, AxisScale::Log};
    s.y_axis = {"tau", 3.0, 30.0, 6, AxisScale::Log};
    s.optimizer.grid_points = 21;
    const SweepResult r = run_success_map(s);
    REQUIRE(r.failures() == 0);
    const Overlay* cp = r.overlay("omega0_over_g_fcp");
    const Overlay* tc = r.overlay("tau_c_analytic");
    REQUIRE(cp);
    REQUIRE(tc);
    REQUIRE_FALSE(cp->points.empty());
    REQUIRE(cp->points[0].first == r.grid[0].x);
    const double ratio = cp->points[0].second / tc->points[0].second;
    CHECK(ratio > 1.0 / 3.0);
    CHECK(ratio < 3.0);
}

TEST_CASE("dissipation-free map") {
    const SweepResult r = run_dissipation_free_map(tiny_dissipation_free_map());
    REQUIRE(r.failures() == 0);
    // Omega0 tau = g tau = 0.1 is far from adiabatic.
    CHECK(r.at(0, 0).fidelity < 0.9);
    // Both large: adiabatic.
    CHECK(r.at(3, 3).fidelity > 0.999);
    for (const auto& c : r.grid) {
        CHECK(std::abs(c.norm_final - 1.0) < 1e-6);
        CHECK(c.i_a == 0.0);
        CHECK(c.i_cav == 0.0);
    }
    const Overlay* adi = r.overlay("tau_fadi_tau0");
    REQUIRE(adi);
    CHECK_FALSE(adi->points.empty());
    CHECK(r.overlay("omega0_tau_2"));
    CHECK(r.overlay("g_tau_2"));
}

TEST_CASE("cells past the adiabatic contour reach 0.99") {
    // tau = 1 on this map, so 8 tau0 <= 1 marks the adiabatic side of the contour.
    SweepSpec s = SweepSpec::defaults(SweepMode::DissipationFreeMap);
    s.x_axis = {"omega0_tau", 1.0, 100.0, 5, AxisScale::Log};
    s.y_axis = {"g_tau", 1.0, 100.0, 5, AxisScale::Log};
    const SweepResult r = run_dissipation_free_map(s);
    int above = 0;
    for (const auto& c : r.grid)
        if (s.factors.f_adi * c.tau0 <= 1.0) {
            CHECK(c.fidelity >= 0.99);
            ++above;
        }
    CHECK(above >= 5);
}

TEST_CASE("truncation study") {
    SweepSpec s = SweepSpec::defaults(SweepMode::TruncationStudy);
    s.x_axis = {"T_over_tau", 5.0, 20.0, 4, AxisScale::Linear};
    const SweepResult r = run_truncation_study(s);
    REQUIRE(r.grid.size() == 4);
    const double f5 = r.grid[0].fidelity, f10 = r.grid[1].fidelity, f15 = r.grid[2].fidelity,
                 f20 = r.grid[3].fidelity;
    CHECK(f15 > 0.999);
    CHECK(std::abs(f15 - f20) < 1e-4);
    CHECK(f5 < f10);
    CHECK(f10 < f15);
}

TEST_CASE("failed cells are recorded and the sweep continues") {
    SweepSpec s = SweepSpec::defaults(SweepMode::DissipationFreeMap);
    s.x_axis = {"omega0_tau", 1.0, 2.0, 2, AxisScale::Log};
    s.y_axis = {"g_tau", 1.0, 2.0, 2, AxisScale::Log};
    s.cfg.rel_tol = 1e-30;
    s.cfg.abs_tol = 1e-300;
    const SweepResult r = run_dissipation_free_map(s);
    CHECK(r.failures() == 4);
    for (const auto& c : r.grid)
        CHECK_FALSE(c.error.empty());
}

TEST_CASE("serial and parallel sweeps give identical bytes") {
    SweepSpec s = small_success_map();
    s.optimizer.grid_points = 9;
    CHECK(to_csv(run_success_map(s, Execution::Serial)) == to_csv(run_success_map(s, Execution::Parallel)));
    const SweepSpec d = tiny_dissipation_free_map();
    CHECK(to_json_string(run_dissipation_free_map(d, Execution::Serial)) ==
          to_json_string(run_dissipation_free_map(d, Execution::Parallel)));
}

TEST_CASE("emit writes csv with sidecars and json that round-trips") {
    SweepSpec s = SweepSpec::defaults(SweepMode::DissipationFreeMap);
    s.x_axis = {"omega0_tau", 1.0, 10.0, 2, AxisScale::Log};
    s.y_axis = {"g_tau", 1.0, 10.0, 2, AxisScale::Log};
    const SweepResult r = run_dissipation_free_map(s);
    const fs::path dir = scratch_dir("emit");

    const fs::path csv = dir / "map.csv";
    emit(r, csv, OutputFormat::CSV);
    const std::string text = slurp(csv);
    std::istringstream lines(text);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "x,y,success_probability,fidelity,norm_final,i_a,i_cav,omega0_opt");
    int rows = 0;
    for (std::string l; std::getline(lines, l);)
        if (!l.empty())
            ++rows;
    CHECK(rows == 4);
    for (const auto& o : r.overlays) {
        const fs::path side = dir / ("map.csv.overlay-" + o.name + ".csv");
        REQUIRE(fs::exists(side));
        CHECK(slurp(side).rfind("x,y\n", 0) == 0);
    }
    const auto meta = nlohmann::json::parse(slurp(dir / "map.csv.meta.json"));
    CHECK(meta.contains("spec"));
    CHECK(meta["metadata"]["version"] == version_string);

    const fs::path js = dir / "map.json";
    emit(r, js, OutputFormat::JSON);
    const SweepResult back = sweep_result_from_json_string(slurp(js));
    REQUIRE(back.grid.size() == r.grid.size());
    CHECK(back.nx == r.nx);
    CHECK(back.ny == r.ny);
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
        CHECK(same_bits(back.grid[i].x, r.grid[i].x));
        CHECK(same_bits(back.grid[i].y, r.grid[i].y));
        CHECK(same_bits(back.grid[i].success_probability, r.grid[i].success_probability));
        CHECK(same_bits(back.grid[i].fidelity, r.grid[i].fidelity));
        CHECK(same_bits(back.grid[i].norm_final, r.grid[i].norm_final));
        CHECK(same_bits(back.grid[i].i_a, r.grid[i].i_a));
        CHECK(same_bits(back.grid[i].i_cav, r.grid[i].i_cav));
        CHECK(same_bits(back.grid[i].omega0_opt, r.grid[i].omega0_opt));
    }
    CHECK(to_json_string(back) == to_json_string(r));

    try {
        emit(r, dir / "missing" / "out.csv", OutputFormat::CSV);
        FAIL("expected an I/O error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
    fs::remove_all(dir);
}
