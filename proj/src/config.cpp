#include "cmat/config.hpp"

#include <fstream>
#include <sstream>

#include "cmat/errors.hpp"

namespace cmat {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const json* field(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object())
        throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

std::optional<double> number(const json& obj, const std::string& key, const std::string& path) {
    const json* v = field(obj, key);
    if (!v)
        return std::nullopt;
    if (!v->is_number())
        throw ConfigError(join(path, key), "expected a number");
    return v->get<double>();
}

double required_number(const json& obj, const std::string& key, const std::string& path) {
    auto v = number(obj, key, path);
    if (!v)
        throw ConfigError(join(path, key), "required field is missing");
    return *v;
}

std::optional<std::string> string_field(const json& obj, const std::string& key, const std::string& path) {
    const json* v = field(obj, key);
    if (!v)
        return std::nullopt;
    if (!v->is_string())
        throw ConfigError(join(path, key), "expected a string");
    return v->get<std::string>();
}

void check(bool ok, const std::string& path, const std::string& what) {
    if (!ok)
        throw ConfigError(path, what);
}

std::size_t count_field(const json& obj, const std::string& key, const std::string& path, std::size_t fallback) {
    const json* v = field(obj, key);
    if (!v)
        return fallback;
    check(v->is_number_integer() || v->is_number_unsigned(), join(path, key), "expected an integer");
    const auto n = v->get<long long>();
    check(n >= 0, join(path, key), "must be non-negative");
    return static_cast<std::size_t>(n);
}

AdiabaticFactors parse_factors(const json& j, const std::string& path) {
    require_object(j, path);
    AdiabaticFactors f;
    if (auto v = number(j, "f_adi", path))
        f.f_adi = *v;
    if (auto v = number(j, "f_cp", path))
        f.f_cp = *v;
    check(f.f_adi > 0.0, join(path, "f_adi"), "must be positive");
    check(f.f_cp > 0.0 && f.f_cp < 1.0, join(path, "f_cp"), "must lie in (0, 1)");
    return f;
}

SimConfig parse_sim(const json& j, const std::string& path, SimConfig base) {
    require_object(j, path);
    if (auto v = number(j, "rel_tol", path))
        base.rel_tol = *v;
    if (auto v = number(j, "abs_tol", path))
        base.abs_tol = *v;
    if (auto v = number(j, "max_step", path))
        base.max_step = *v;
    base.sample_count = count_field(j, "sample_count", path, base.sample_count);
    check(base.rel_tol > 0.0, join(path, "rel_tol"), "must be positive");
    check(base.abs_tol > 0.0, join(path, "abs_tol"), "must be positive");
    check(!base.max_step || *base.max_step > 0.0, join(path, "max_step"), "must be positive");
    check(base.sample_count >= 2, join(path, "sample_count"), "must be at least 2");
    return base;
}

Axis parse_axis(const json& j, const std::string& path, Axis base) {
    require_object(j, path);
    if (auto v = string_field(j, "name", path))
        base.name = *v;
    if (auto v = number(j, "min", path))
        base.min = *v;
    if (auto v = number(j, "max", path))
        base.max = *v;
    base.count = count_field(j, "count", path, base.count);
    if (auto v = string_field(j, "scale", path)) {
        if (*v == "log")
            base.scale = AxisScale::Log;
        else if (*v == "linear")
            base.scale = AxisScale::Linear;
        else
            throw ConfigError(join(path, "scale"), "expected 'linear' or 'log'");
    }
    base.validate(path);
    return base;
}

json axis_to_json(const Axis& a) {
    return {{"name", a.name},
            {"min", a.min},
            {"max", a.max},
            {"count", a.count},
            {"scale", a.scale == AxisScale::Log ? "log" : "linear"}};
}

} // namespace

nlohmann::json sweep_spec_to_json(const SweepSpec& s) {
    json sim = {{"rel_tol", s.cfg.rel_tol}, {"abs_tol", s.cfg.abs_tol}, {"sample_count", s.cfg.sample_count}};
    if (s.cfg.max_step)
        sim["max_step"] = *s.cfg.max_step;
    return {{"mode", to_string(s.mode)},
            {"fixed_c", s.fixed_c},
            {"x_axis", axis_to_json(s.x_axis)},
            {"y_axis", axis_to_json(s.y_axis)},
            {"factors", {{"f_adi", s.factors.f_adi}, {"f_cp", s.factors.f_cp}}},
            {"sim", sim},
            {"halfwidth", s.halfwidth},
            {"omega0_T", s.omega0_T},
            {"optimizer",
             {{"log10_min", s.optimizer.log10_min},
              {"log10_max", s.optimizer.log10_max},
              {"grid_points", s.optimizer.grid_points},
              {"rel_tol", s.optimizer.rel_tol}}}};
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j, const std::string& path) {
    require_object(j, path);
    const auto mode_name = string_field(j, "mode", path);
    check(mode_name.has_value(), join(path, "mode"), "required field is missing");
    SweepSpec s = SweepSpec::defaults(sweep_mode_from_string(*mode_name));
    if (auto v = number(j, "fixed_c", path))
        s.fixed_c = *v;
    if (auto v = number(j, "halfwidth", path))
        s.halfwidth = *v;
    if (auto v = number(j, "omega0_T", path))
        s.omega0_T = *v;
    if (const json* a = field(j, "x_axis"))
        s.x_axis = parse_axis(*a, join(path, "x_axis"), s.x_axis);
    if (const json* a = field(j, "y_axis"); a && s.mode != SweepMode::TruncationStudy)
        s.y_axis = parse_axis(*a, join(path, "y_axis"), s.y_axis);
    if (const json* f = field(j, "factors"))
        s.factors = parse_factors(*f, join(path, "factors"));
    if (const json* c = field(j, "sim"))
        s.cfg = parse_sim(*c, join(path, "sim"), s.cfg);
    if (const json* o = field(j, "optimizer")) {
        const std::string op = join(path, "optimizer");
        require_object(*o, op);
        if (auto v = number(*o, "log10_min", op))
            s.optimizer.log10_min = *v;
        if (auto v = number(*o, "log10_max", op))
            s.optimizer.log10_max = *v;
        if (auto v = number(*o, "rel_tol", op))
            s.optimizer.rel_tol = *v;
        s.optimizer.grid_points = count_field(*o, "grid_points", op, s.optimizer.grid_points);
        check(s.optimizer.grid_points >= 3, join(op, "grid_points"), "must be at least 3");
        check(s.optimizer.log10_max > s.optimizer.log10_min, join(op, "log10_max"), "must exceed log10_min");
        check(s.optimizer.rel_tol > 0.0, join(op, "rel_tol"), "must be positive");
    }
    check(s.fixed_c > 0.0, join(path, "fixed_c"), "must be positive");
    check(s.halfwidth > 0.0, join(path, "halfwidth"), "must be positive");
    check(s.omega0_T > 0.0, join(path, "omega0_T"), "must be positive");
    s.validate();
    return s;
}

RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& source) {
    require_object(doc, "");
    RunConfig rc;
    rc.source = source;

    if (auto u = string_field(doc, "units", "")) {
        if (*u == "absolute")
            rc.absolute_units = true;
        else if (*u != "gamma")
            throw ConfigError("units", "expected 'gamma' or 'absolute'");
    }
    rc.out = string_field(doc, "out", "");
    rc.format = string_field(doc, "format", "");
    rc.trajectory = string_field(doc, "trajectory", "");
    if (const json* s = field(doc, "strict")) {
        check(s->is_boolean(), "strict", "expected a boolean");
        rc.strict = s->get<bool>();
    }

    double gamma_raw = 1.0;
    if (const json* c = field(doc, "cqed")) {
        require_object(*c, "cqed");
        const double g = required_number(*c, "g", "cqed");
        const double kappa = number(*c, "kappa", "cqed").value_or(0.0);
        const double gamma = number(*c, "gamma", "cqed").value_or(rc.absolute_units ? 0.0 : 1.0);
        check(g > 0.0, "cqed.g", "must be positive");
        check(kappa >= 0.0, "cqed.kappa", "must be non-negative");
        check(gamma >= 0.0, "cqed.gamma", "must be non-negative");
        if (rc.absolute_units) {
            check(gamma > 0.0, "cqed.gamma", "absolute units need gamma > 0 to normalize");
            gamma_raw = gamma;
            rc.cqed = to_gamma_units(CqedParams(g, kappa, gamma)).params;
        } else {
            rc.cqed = CqedParams(g, kappa, gamma);
        }
    }

    if (const json* f = field(doc, "factors"))
        rc.factors = parse_factors(*f, "factors");
    if (const json* s = field(doc, "sim")) {
        rc.sim = parse_sim(*s, "sim", rc.sim);
        if (rc.absolute_units && rc.sim.max_step)
            rc.sim.max_step = *rc.sim.max_step * gamma_raw;
    }

    if (const json* p = field(doc, "pulse")) {
        require_object(*p, "pulse");
        PulseConfig pc;
        pc.tau = required_number(*p, "tau", "pulse");
        check(pc.tau > 0.0, "pulse.tau", "must be positive");
        if (auto h = number(*p, "halfwidth", "pulse"))
            pc.halfwidth = *h;
        check(pc.halfwidth > 0.0, "pulse.halfwidth", "must be positive");
        const json* o = field(*p, "omega0");
        check(o != nullptr, "pulse.omega0", "required field is missing");
        if (o->is_string()) {
            const auto name = o->get<std::string>();
            if (name == "balanced")
                pc.choice = Omega0Choice::Balanced;
            else if (name == "optimized")
                pc.choice = Omega0Choice::Optimized;
            else
                throw ConfigError("pulse.omega0", "expected a number, 'balanced' or 'optimized'");
        } else {
            check(o->is_number(), "pulse.omega0", "expected a number, 'balanced' or 'optimized'");
            pc.omega0 = o->get<double>();
            check(pc.omega0 > 0.0, "pulse.omega0", "must be positive");
        }
        if (rc.absolute_units) {
            pc.tau *= gamma_raw;
            pc.omega0 /= gamma_raw;
        }
        if (pc.choice == Omega0Choice::Balanced && !(rc.cqed && rc.cqed->has_cooperativity()))
            throw ConfigError("pulse.omega0", "'balanced' needs cqed.kappa > 0 and cqed.gamma > 0");
        rc.pulse = pc;
    }

    if (const json* s = field(doc, "sweep"))
        rc.sweep = sweep_spec_from_json(*s, "sweep");
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("--config", "cannot open '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", "invalid JSON in '" + path.string() + "': " + e.what());
    }
    return parse_run_config(doc, path);
}

} // namespace cmat
