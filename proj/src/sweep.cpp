#include "cmat/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cmat/errors.hpp"

namespace cmat {

const char* const version_string = "cmat 0.1.0";

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void mark_failed(SweepCell& c, const std::string& what) {
    c.error = what;
    c.success_probability = c.fidelity = c.norm_final = nan;
    c.i_a = c.i_cav = c.normalized_success = nan;
}

void fill_from(SweepCell& c, const SimResult& r) {
    c.success_probability = r.success_probability;
    c.fidelity = r.fidelity;
    c.norm_final = r.norm_final;
    c.i_a = r.i_a;
    c.i_cav = r.i_cav;
}

SweepResult make_result(const SweepSpec& spec, std::size_t nx, std::size_t ny) {
    SweepResult res;
    res.spec = spec;
    res.nx = nx;
    res.ny = ny;
    res.grid.resize(nx * ny);
    res.version = version_string;
    return res;
}

// Runs `work` over all cells, recording per-cell failures in place.
template <class Work>
void run_cells(SweepResult& res, Execution exec, Work&& work) {
    for_each_index(res.grid.size(), exec, [&](std::size_t i) {
        SweepCell& cell = res.grid[i];
        try {
            work(cell, i % res.nx, i / res.nx);
        } catch (const std::exception& e) {
            mark_failed(cell, e.what());
        }
    });
}

double to_coord(double v, AxisScale s) {
    return s == AxisScale::Log ? std::log(v) : v;
}

double from_coord(double u, AxisScale s) {
    return s == AxisScale::Log ? std::exp(u) : u;
}

} // namespace

std::vector<double> Axis::values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (count == 1) {
            v[i] = min;
            break;
        }
        const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
        if (i + 1 == count)
            v[i] = max;
        else if (scale == AxisScale::Log)
            v[i] = min * std::pow(max / min, frac);
        else
            v[i] = min + (max - min) * frac;
    }
    return v;
}

void Axis::validate(const std::string& path) const {
    if (count < 2)
        throw ConfigError(path + ".count", "axis needs at least 2 points");
    if (!(min < max))
        throw ConfigError(path + ".min", "axis needs min < max");
    if (scale == AxisScale::Log && !(min > 0.0))
        throw ConfigError(path + ".min", "log axis needs min > 0");
}

std::string to_string(SweepMode m) {
    switch (m) {
    case SweepMode::SuccessMap: return "success_map";
    case SweepMode::FidelityMap: return "fidelity_map";
    case SweepMode::DissipationFreeMap: return "dissipation_free_map";
    case SweepMode::TruncationStudy: return "truncation_study";
    }
    return "unknown";
}

SweepMode sweep_mode_from_string(const std::string& s) {
    for (auto m : {SweepMode::SuccessMap, SweepMode::FidelityMap, SweepMode::DissipationFreeMap,
                   SweepMode::TruncationStudy})
        if (to_string(m) == s)
            return m;
    throw ConfigError("sweep.mode", "unknown sweep mode '" + s + "'");
}

void SweepSpec::validate() const {
    x_axis.validate("sweep.x_axis");
    if (mode != SweepMode::TruncationStudy)
        y_axis.validate("sweep.y_axis");
    if ((mode == SweepMode::SuccessMap || mode == SweepMode::FidelityMap) && !(fixed_c > 0.0))
        throw ConfigError("sweep.fixed_c", "cooperativity must be positive");
    if (mode == SweepMode::TruncationStudy && !(omega0_T > 0.0))
        throw ConfigError("sweep.omega0_T", "must be positive");
    if (mode == SweepMode::TruncationStudy && !(x_axis.min > 0.0))
        throw ConfigError("sweep.x_axis.min", "T/tau must be positive");
    if (!(halfwidth > 0.0))
        throw ConfigError("sweep.halfwidth", "must be positive");
    try {
        factors.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError("sweep.factors", e.what());
    }
    try {
        cfg.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError("sweep.sim", e.what());
    }
}

SweepSpec SweepSpec::defaults(SweepMode mode) {
    SweepSpec s;
    s.mode = mode;
    s.cfg.sample_count = 2;
    switch (mode) {
    case SweepMode::SuccessMap:
    case SweepMode::FidelityMap:
        s.x_axis = {"g_over_gamma", 1.0, 300.0, 41, AxisScale::Log};
        s.y_axis = {"tau_gamma", 1e-3, 10.0, 41, AxisScale::Log};
        break;
    case SweepMode::DissipationFreeMap:
        s.x_axis = {"omega0_tau", 0.1, 100.0, 41, AxisScale::Log};
        s.y_axis = {"g_tau", 0.1, 100.0, 41, AxisScale::Log};
        break;
    case SweepMode::TruncationStudy:
        s.x_axis = {"T_over_tau", 5.0, 20.0, 16, AxisScale::Linear};
        s.y_axis = {"unused", 0.0, 1.0, 2, AxisScale::Linear};
        break;
    }
    return s;
}

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(
        std::count_if(grid.begin(), grid.end(), [](const SweepCell& c) { return c.failed(); }));
}

const Overlay* SweepResult::overlay(const std::string& name) const {
    for (const auto& o : overlays)
        if (o.name == name)
            return &o;
    return nullptr;
}

std::optional<double> zero_crossing(const std::vector<double>& coords, const std::vector<double>& values,
                                    AxisScale scale) {
    for (std::size_t j = 0; j + 1 < coords.size() && j + 1 < values.size(); ++j) {
        const double a = values[j];
        const double b = values[j + 1];
        if (!std::isfinite(a) || !std::isfinite(b))
            continue;
        if (a == 0.0)
            return coords[j];
        if ((a < 0.0) != (b < 0.0) || b == 0.0) {
            const double u0 = to_coord(coords[j], scale);
            const double u1 = to_coord(coords[j + 1], scale);
            return from_coord(u0 + (0.0 - a) * (u1 - u0) / (b - a), scale);
        }
    }
    return std::nullopt;
}

SweepResult run_success_map(const SweepSpec& spec, Execution exec) {
    spec.validate();
    const auto xs = spec.x_axis.values();
    const auto ys = spec.y_axis.values();
    SweepResult res = make_result(spec, xs.size(), ys.size());

    OptimizerOptions opts = spec.optimizer;
    opts.halfwidth = spec.halfwidth;
    opts.execution = Execution::Serial;

    run_cells(res, exec, [&](SweepCell& cell, std::size_t ix, std::size_t iy) {
        cell.x = xs[ix];
        cell.y = ys[iy];
        const CqedParams p = CqedParams::from_cooperativity(cell.x, spec.fixed_c, 1.0);
        const Omega0Optimum opt = optimize_omega0(p, cell.y, Objective::SuccessProbability, spec.cfg, opts);
        fill_from(cell, opt.result);
        cell.omega0_opt = opt.omega0;
        cell.normalized_success = cell.success_probability / success_upper_bound(p);
        cell.tau0 = tau0(p, opt.omega0, spec.halfwidth);
    });

    Overlay tau_a{"tau_a_analytic", {}}, tau_c{"tau_c_analytic", {}};
    Overlay adi{"tau_fadi_tau0", {}}, cp{"omega0_over_g_fcp", {}};
    for (std::size_t ix = 0; ix < res.nx; ++ix) {
        const CqedParams p = CqedParams::from_cooperativity(xs[ix], spec.fixed_c, 1.0);
        const SpeedLimitReport rep = thresholds(p, spec.factors);
        tau_a.points.emplace_back(xs[ix], rep.tau_a);
        tau_c.points.emplace_back(xs[ix], rep.tau_c);

        std::vector<double> h_adi(res.ny), h_cp(res.ny);
        for (std::size_t iy = 0; iy < res.ny; ++iy) {
            const SweepCell& c = res.at(ix, iy);
            h_adi[iy] = c.failed() ? nan : c.y - spec.factors.f_adi * c.tau0;
            h_cp[iy] = c.failed() ? nan : c.omega0_opt / c.x - spec.factors.f_cp;
        }
        if (auto y = zero_crossing(ys, h_adi, spec.y_axis.scale))
            adi.points.emplace_back(xs[ix], *y);
        if (auto y = zero_crossing(ys, h_cp, spec.y_axis.scale))
            cp.points.emplace_back(xs[ix], *y);
    }
    res.overlays = {tau_a, tau_c, adi, cp};
    return res;
}

SweepResult run_dissipation_free_map(const SweepSpec& spec, Execution exec) {
    spec.validate();
    const auto xs = spec.x_axis.values();
    const auto ys = spec.y_axis.values();
    SweepResult res = make_result(spec, xs.size(), ys.size());

    // tau = 1, so the axes Omega0 tau and g tau are the rates themselves.
    run_cells(res, exec, [&](SweepCell& cell, std::size_t ix, std::size_t iy) {
        cell.x = xs[ix];
        cell.y = ys[iy];
        const CqedParams p(cell.y, 0.0, 0.0);
        const SimResult r = evolve(p, PulseSchedule(cell.x, 1.0, spec.halfwidth), spec.cfg);
        fill_from(cell, r);
        cell.omega0_opt = cell.x;
        cell.normalized_success = nan;
        cell.tau0 = tau0(p, cell.x, spec.halfwidth);
    });

    Overlay o_line{"omega0_tau_2", {{2.0, spec.y_axis.min}, {2.0, spec.y_axis.max}}};
    Overlay g_line{"g_tau_2", {{spec.x_axis.min, 2.0}, {spec.x_axis.max, 2.0}}};
    Overlay adi{"tau_fadi_tau0", {}};

    // For each Omega0 tau, the g tau at which F_adi tau0 = tau (= 1).
    const Axis fine{"g_tau", spec.y_axis.min, spec.y_axis.max, 200, spec.y_axis.scale};
    const auto gs = fine.values();
    std::vector<std::optional<double>> crossing(xs.size());
    for_each_index(xs.size(), exec, [&](std::size_t ix) {
        auto h = [&](double g) { return spec.factors.f_adi * tau0(CqedParams(g, 0.0, 0.0), xs[ix], spec.halfwidth) - 1.0; };
        std::vector<double> hv(gs.size());
        for (std::size_t j = 0; j < gs.size(); ++j)
            hv[j] = h(gs[j]);
        for (std::size_t j = 0; j + 1 < gs.size(); ++j) {
            if ((hv[j] < 0.0) == (hv[j + 1] < 0.0))
                continue;
            double lo = to_coord(gs[j], fine.scale), hi = to_coord(gs[j + 1], fine.scale);
            const bool lo_neg = hv[j] < 0.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((h(from_coord(mid, fine.scale)) < 0.0) == lo_neg)
                    lo = mid;
                else
                    hi = mid;
            }
            crossing[ix] = from_coord(0.5 * (lo + hi), fine.scale);
            break;
        }
    });
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
        if (crossing[ix])
            adi.points.emplace_back(xs[ix], *crossing[ix]);

    res.overlays = {o_line, g_line, adi};
    return res;
}

SweepResult run_truncation_study(const SweepSpec& spec, Execution exec) {
    spec.validate();
    const auto xs = spec.x_axis.values();
    SweepResult res = make_result(spec, xs.size(), 1);

    // g = Omega0 = 1, so T = omega0_T and tau = T / (T/tau).
    run_cells(res, exec, [&](SweepCell& cell, std::size_t ix, std::size_t) {
        cell.x = xs[ix];
        cell.y = spec.omega0_T;
        const double omega0 = 1.0;
        const double duration = spec.omega0_T / omega0;
        const double tau = duration / cell.x;
        const CqedParams p(omega0, 0.0, 0.0);
        const SimResult r = evolve(p, PulseSchedule(omega0, tau, 0.5 * cell.x), spec.cfg);
        fill_from(cell, r);
        cell.omega0_opt = omega0;
        cell.normalized_success = nan;
        cell.tau0 = tau0(p, omega0, 0.5 * cell.x);
    });
    return res;
}

SweepResult run_sweep(const SweepSpec& spec, Execution exec) {
    switch (spec.mode) {
    case SweepMode::SuccessMap:
    case SweepMode::FidelityMap: return run_success_map(spec, exec);
    case SweepMode::DissipationFreeMap: return run_dissipation_free_map(spec, exec);
    case SweepMode::TruncationStudy: return run_truncation_study(spec, exec);
    }
    throw InvalidParameter("unknown sweep mode");
}

} // namespace cmat
