#include "cmat/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "cmat/adiabatic.hpp"
#include "cmat/dynamics.hpp"
#include "cmat/errors.hpp"
#include "cmat/lossmodel.hpp"
#include "cmat/sweep.hpp"

namespace cmat {

namespace {

void line(std::ostream& out, const std::string& key, double v) {
    out << "  " << std::left << std::setw(24) << key + " " << std::setprecision(12) << v << "\n";
}

void line(std::ostream& out, const std::string& key, const std::string& v) {
    out << "  " << std::left << std::setw(24) << key + " " << v << "\n";
}

void write_trajectory(const SimResult& r, const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw Error("cannot open trajectory file '" + path + "'");
    f << "t";
    for (const char* b : {"ug0", "gu0", "eg0", "ge0", "gg1"})
        f << ",re_" << b << ",im_" << b;
    f << ",norm\n";
    for (const auto& s : r.samples) {
        f << format_double(s.t);
        for (Eigen::Index k = 0; k < 5; ++k)
            f << "," << format_double(s.amps(k).real()) << "," << format_double(s.amps(k).imag());
        f << "," << format_double(s.norm) << "\n";
    }
    if (!f)
        throw Error("write failed for trajectory file '" + path + "'");
}

void print_thresholds(std::ostream& out, const SpeedLimitReport& r) {
    line(out, "tau_a", r.tau_a);
    line(out, "tau_c", r.tau_c);
    line(out, "kappa_star", r.kappa_star);
    line(out, "g_star", r.g_star);
    line(out, "binding", std::string(to_string(r.binding)));
    line(out, "max_speed", r.max_speed());
}

// x where two sampled curves y_a(x), y_b(x) cross, linear in log x.
std::optional<double> curve_crossing(const Overlay& a, const Overlay& b) {
    std::vector<double> xs, diff;
    for (const auto& [xa, ya] : a.points)
        for (const auto& [xb, yb] : b.points)
            if (xa == xb) {
                xs.push_back(xa);
                diff.push_back(std::log(ya) - std::log(yb));
            }
    return zero_crossing(xs, diff, AxisScale::Log);
}

void summarize(const SweepResult& r, std::ostream& out) {
    line(out, "cells", static_cast<double>(r.grid.size()));
    line(out, "failed_cells", static_cast<double>(r.failures()));
    const auto ok_cells = [&] {
        std::vector<const SweepCell*> v;
        for (const auto& c : r.grid)
            if (!c.failed())
                v.push_back(&c);
        return v;
    }();

    switch (r.spec.mode) {
    case SweepMode::SuccessMap:
    case SweepMode::FidelityMap: {
        double lo = 1.0 / 0.0, hi = -1.0 / 0.0, flo = 1.0 / 0.0;
        for (const auto* c : ok_cells) {
            lo = std::min(lo, c->normalized_success);
            hi = std::max(hi, c->normalized_success);
            flo = std::min(flo, c->fidelity);
        }
        line(out, "min_normalized_Ps", lo);
        line(out, "max_normalized_Ps", hi);
        line(out, "min_fidelity", flo);
        const CqedParams ref = CqedParams::from_cooperativity(1.0, r.spec.fixed_c, 1.0);
        line(out, "g_star_analytic", thresholds(ref, r.spec.factors).g_star);
        const Overlay* adi = r.overlay("tau_fadi_tau0");
        const Overlay* cp = r.overlay("omega0_over_g_fcp");
        if (adi && cp) {
            if (auto x = curve_crossing(*adi, *cp))
                line(out, "g_star_numeric", *x);
            else
                line(out, "g_star_numeric", "not resolved on this grid");
        }
        break;
    }
    case SweepMode::DissipationFreeMap: {
        // tau = 1 on this map, so tau >= F_adi tau0 means F_adi tau0 <= 1.
        double worst = 1.0;
        std::size_t n = 0;
        for (const auto* c : ok_cells)
            if (r.spec.factors.f_adi * c->tau0 <= 1.0) {
                worst = std::min(worst, c->fidelity);
                ++n;
            }
        line(out, "cells_above_contour", static_cast<double>(n));
        line(out, "worst_fidelity_above", n ? worst : std::nan(""));
        break;
    }
    case SweepMode::TruncationStudy: {
        bool monotone = true;
        for (std::size_t i = 0; i < r.grid.size(); ++i) {
            line(out, "fidelity(T/tau=" + format_double(r.grid[i].x) + ")", r.grid[i].fidelity);
            if (i > 0 && r.grid[i].fidelity < r.grid[i - 1].fidelity)
                monotone = false;
        }
        line(out, "monotone_in_T_over_tau", monotone ? "yes" : "no");
        break;
    }
    }
}

} // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.cqed) {
        err << "config error: cqed: required for simulate\n";
        return exit_config;
    }
    if (!cfg.pulse) {
        err << "config error: pulse: required for simulate\n";
        return exit_config;
    }
    const CqedParams& p = *cfg.cqed;
    const PulseConfig& pc = *cfg.pulse;
    try {
        double omega0 = pc.omega0;
        SimResult r;
        if (pc.choice == Omega0Choice::Optimized) {
            OptimizerOptions opts;
            opts.halfwidth = pc.halfwidth;
            const auto objective = p.kappa() > 0.0 || p.gamma() > 0.0 ? Objective::SuccessProbability
                                                                     : Objective::Fidelity;
            auto best = optimize_omega0(p, pc.tau, objective, cfg.sim, opts);
            omega0 = best.omega0;
            r = std::move(best.result);
        } else {
            if (pc.choice == Omega0Choice::Balanced)
                omega0 = omega0_from_balancing(p, pc.tau);
            r = evolve(p, PulseSchedule(omega0, pc.tau, pc.halfwidth), cfg.sim);
        }

        out << "simulation (rates in units of gamma" << (cfg.absolute_units ? ", normalized from absolute" : "")
            << ")\n";
        line(out, "g", p.g());
        line(out, "kappa", p.kappa());
        line(out, "gamma", p.gamma());
        line(out, "omega0", omega0);
        line(out, "tau", pc.tau);
        line(out, "T", 2.0 * pc.halfwidth * pc.tau);
        line(out, "fidelity", r.fidelity);
        line(out, "norm_final", r.norm_final);
        line(out, "success_probability", r.success_probability);
        line(out, "I_a", r.i_a);
        line(out, "I_cav", r.i_cav);
        line(out, "photon_loss", photon_loss_probability(r));
        line(out, "budget_residual", r.budget_residual());

        const double t0 = tau0(p, omega0, pc.halfwidth);
        line(out, "tau0", t0);
        line(out, "tau_over_tau0", pc.tau / t0);

        const LossPrediction lp = beta(p, pc.tau, omega0);
        line(out, "beta", lp.beta);
        line(out, "beta_cavity", lp.beta_cavity);
        line(out, "beta_spont", lp.beta_spont);
        line(out, "p_pl_model", lp.p_pl);
        if (p.has_cooperativity()) {
            line(out, "cooperativity", p.cooperativity());
            line(out, "upper_bound", *lp.upper_bound);
            line(out, "normalized_Ps", r.success_probability / *lp.upper_bound);
            print_thresholds(out, thresholds(p, cfg.factors));
        } else {
            line(out, "cooperativity", "undefined (kappa or gamma is zero)");
        }

        if (cfg.trajectory) {
            write_trajectory(r, *cfg.trajectory);
            line(out, "trajectory", *cfg.trajectory);
        }
    } catch (const IntegrationFailure& e) {
        err << "integration failure: " << e.what() << " (last t = " << e.last_t << ")\n";
        return exit_runtime;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}

int cmd_speed_limit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.cqed) {
        err << "config error: cqed: required for speed-limit\n";
        return exit_config;
    }
    if (!cfg.cqed->has_cooperativity()) {
        err << "config error: cqed: cooperativity undefined (kappa and gamma must be > 0)\n";
        return exit_config;
    }
    const SpeedLimitReport r = thresholds(*cfg.cqed, cfg.factors);
    out << "speed limit (F_adi = " << cfg.factors.f_adi << ", F_cp = " << cfg.factors.f_cp << ")\n";
    line(out, "cooperativity", cfg.cqed->cooperativity());
    line(out, "g", cfg.cqed->g());
    line(out, "kappa", cfg.cqed->kappa());
    print_thresholds(out, r);
    if (cfg.pulse && cfg.pulse->choice == Omega0Choice::Value)
        line(out, "tau0", tau0(*cfg.cqed, cfg.pulse->omega0, cfg.pulse->halfwidth));
    if (r.binding == Binding::AdiabaticLimited)
        out << "  adiabatic condition binds: max speed 1/tau_a = 8 gamma sqrt(C) / F_adi^2, proportional to "
               "gamma sqrt(C)\n";
    else
        out << "  cavity-population suppression binds: raising g towards g_star (at fixed C) speeds up "
               "the transfer\n";
    return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.sweep) {
        err << "config error: sweep: required for sweep\n";
        return exit_config;
    }
    OutputFormat format = OutputFormat::CSV;
    const std::string fmt = cfg.format.value_or("csv");
    if (fmt == "json")
        format = OutputFormat::JSON;
    else if (fmt != "csv") {
        err << "config error: format: expected csv or json\n";
        return exit_config;
    }
    const std::string path = cfg.out.value_or(format == OutputFormat::JSON ? "sweep.json" : "sweep.csv");

    SweepResult r;
    try {
        r = run_sweep(*cfg.sweep);
        emit(r, path, format);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime;
    }

    out << "sweep " << to_string(r.spec.mode) << " -> " << path << "\n";
    summarize(r, out);
    if (r.failures() > 0) {
        err << r.failures() << " cell(s) failed\n";
        if (cfg.strict)
            return exit_runtime;
    }
    return exit_ok;
}

int cmd_validate(const ValidationOptions& opts, std::ostream& out, std::ostream&) {
    const auto results = run_validation(opts);
    bool all = true;
    for (const auto& c : results) {
        out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(40) << c.name << c.detail << "\n";
        all = all && c.passed;
    }
    if (!all) {
        for (const auto& c : results)
            if (!c.passed)
                out << "failing invariant: " << c.name << "\n";
        return exit_validation;
    }
    return exit_ok;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cavity-mediated adiabatic transfer: simulation, speed limits and sweeps", "cmat"};
    app.require_subcommand(1);

    std::string config_path, out_path, format, trajectory;
    bool strict = false;
    std::uint64_t seed = ValidationOptions{}.seed;
    double rel_tol = ValidationOptions{}.rel_tol;

    auto* sim = app.add_subcommand("simulate", "Run one transfer and print a report");
    auto* speed = app.add_subcommand("speed-limit", "Print the speed-limit thresholds");
    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV/JSON");
    auto* val = app.add_subcommand("validate", "Run the invariant checks");

    for (auto* sc : {sim, speed, sweep})
        sc->add_option("--config", config_path, "JSON run configuration")->required();
    sim->add_option("--trajectory", trajectory, "Write the sampled trajectory as CSV");
    sweep->add_option("--out", out_path, "Output path");
    sweep->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_flag("--strict", strict, "Exit 3 if any cell failed");
    val->add_option("--seed", seed, "Seed for the randomized checks");
    val->add_option("--rel-tol", rel_tol, "Integrator rel_tol for the dynamics checks")
        ->check(CLI::PositiveNumber);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_config;
    }

    if (*val) {
        ValidationOptions opts;
        opts.seed = seed;
        opts.rel_tol = rel_tol;
        return cmd_validate(opts, out, err);
    }

    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    }
    if (!out_path.empty())
        cfg.out = out_path;
    if (!format.empty())
        cfg.format = format;
    if (!trajectory.empty())
        cfg.trajectory = trajectory;
    if (strict)
        cfg.strict = true;

    if (*sim)
        return cmd_simulate(cfg, out, err);
    if (*speed)
        return cmd_speed_limit(cfg, out, err);
    return cmd_sweep(cfg, out, err);
}

} // namespace cmat
