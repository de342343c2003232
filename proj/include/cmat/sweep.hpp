// sweep.hpp: parameter-space maps: success/fidelity map at fixed
// cooperativity, dissipation-free fidelity map, truncation study.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmat/adiabatic.hpp"
#include "cmat/dynamics.hpp"
#include "cmat/lossmodel.hpp"
#include "cmat/parallel.hpp"

namespace cmat {

enum class AxisScale { Linear, Log };

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;
    AxisScale scale = AxisScale::Log;

    std::vector<double> values() const;
    void validate(const std::string& path) const;
};

enum class SweepMode { SuccessMap, FidelityMap, DissipationFreeMap, TruncationStudy };

std::string to_string(SweepMode m);
SweepMode sweep_mode_from_string(const std::string& s);

struct SweepSpec {
    SweepMode mode = SweepMode::SuccessMap;
    double fixed_c = 200.0;   // success/fidelity maps
    Axis x_axis;
    Axis y_axis;              // unused by the truncation study
    AdiabaticFactors factors;
    SimConfig cfg;
    double halfwidth = PulseSchedule::default_halfwidth;
    double omega0_T = 1000.0; // truncation study: g = Omega0, Omega0 T fixed
    OptimizerOptions optimizer;

    void validate() const;

    /// Axes and defaults for each mode: success map g/gamma in [1, 300] and
    /// tau gamma in [1e-3, 10] on 41x41 log grids; dissipation-free map
    /// Omega0 tau and g tau in [0.1, 100]; truncation study T/tau in [5, 20].
    static SweepSpec defaults(SweepMode mode);
};

struct SweepCell {
    double x = 0.0;
    double y = 0.0;
    double success_probability = 0.0;
    double fidelity = 0.0;
    double norm_final = 0.0;
    double i_a = 0.0;
    double i_cav = 0.0;
    double omega0_opt = 0.0;   // Omega0 used (optimized on the success map)
    double normalized_success = 0.0;  // success_probability / exp(-2/sqrt C), success map only
    double tau0 = 0.0;         // adiabatic time constant at this cell's Omega0
    std::string error;         // non-empty if the cell failed

    bool failed() const { return !error.empty(); }
};

struct Overlay {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct SweepResult {
    SweepSpec spec;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<SweepCell> grid;  // row-major, index = iy * nx + ix
    std::vector<Overlay> overlays;
    std::string version;

    const SweepCell& at(std::size_t ix, std::size_t iy) const { return grid[iy * nx + ix]; }
    std::size_t failures() const;
    const Overlay* overlay(const std::string& name) const;
};

SweepResult run_success_map(const SweepSpec& spec, Execution exec = Execution::Parallel);
SweepResult run_dissipation_free_map(const SweepSpec& spec, Execution exec = Execution::Parallel);
SweepResult run_truncation_study(const SweepSpec& spec, Execution exec = Execution::Parallel);
/// Dispatches on spec.mode; FidelityMap shares the success-map run.
SweepResult run_sweep(const SweepSpec& spec, Execution exec = Execution::Parallel);

/// First crossing of `values` through zero along `coords`, interpolated
/// linearly in the axis coordinate (log for log axes). Empty if none.
std::optional<double> zero_crossing(const std::vector<double>& coords, const std::vector<double>& values,
                                    AxisScale scale);

enum class OutputFormat { CSV, JSON };

/// CSV: header `x,y,success_probability,fidelity,norm_final,i_a,i_cav,omega0_opt`,
/// overlays in `<path>.overlay-<name>.csv`, sweep settings and units in `<path>.meta.json`.
/// JSON: one document with `spec`, `metadata`, `grid`, `overlays`.
void emit(const SweepResult& result, const std::filesystem::path& path, OutputFormat format);

std::string to_csv(const SweepResult& result);
std::string to_json_string(const SweepResult& result);
SweepResult sweep_result_from_json_string(const std::string& text);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

extern const char* const version_string;

} // namespace cmat
