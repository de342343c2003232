#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "cmat/config.hpp"
#include "cmat/errors.hpp"
#include "cmat/sweep.hpp"

namespace cmat {

using nlohmann::json;

namespace {

constexpr const char* csv_header = "x,y,success_probability,fidelity,norm_final,i_a,i_cav,omega0_opt";

std::string units_note(SweepMode m) {
    switch (m) {
    case SweepMode::SuccessMap:
    case SweepMode::FidelityMap:
        return "x = g/gamma, y = tau*gamma, omega0_opt in units of gamma";
    case SweepMode::DissipationFreeMap:
        return "x = omega0*tau, y = g*tau (gamma = kappa = 0)";
    case SweepMode::TruncationStudy:
        return "x = T/tau, y = omega0*T (g = omega0, gamma = kappa = 0)";
    }
    return "";
}

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

double number_from(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json metadata(const SweepResult& r) {
    json m = {{"version", r.version}, {"units", units_note(r.spec.mode)}, {"nx", r.nx}, {"ny", r.ny}};
    if (r.spec.mode == SweepMode::SuccessMap || r.spec.mode == SweepMode::FidelityMap)
        m["upper_bound"] = std::exp(-2.0 / std::sqrt(r.spec.fixed_c));
    m["failures"] = r.failures();
    return m;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out)
        throw Error("write failed for '" + path.string() + "'");
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const SweepResult& r) {
    std::string out = csv_header;
    out += '\n';
    for (const auto& c : r.grid) {
        for (double v : {c.x, c.y, c.success_probability, c.fidelity, c.norm_final, c.i_a, c.i_cav}) {
            out += format_double(v);
            out += ',';
        }
        out += format_double(c.omega0_opt);
        out += '\n';
    }
    return out;
}

std::string to_json_string(const SweepResult& r) {
    json grid = json::array();
    for (const auto& c : r.grid) {
        json cell = {{"x", c.x},
                     {"y", c.y},
                     {"success_probability", number_or_null(c.success_probability)},
                     {"normalized_success_probability", number_or_null(c.normalized_success)},
                     {"fidelity", number_or_null(c.fidelity)},
                     {"norm_final", number_or_null(c.norm_final)},
                     {"i_a", number_or_null(c.i_a)},
                     {"i_cav", number_or_null(c.i_cav)},
                     {"omega0_opt", number_or_null(c.omega0_opt)},
                     {"tau0", number_or_null(c.tau0)}};
        if (c.failed())
            cell["error"] = c.error;
        grid.push_back(std::move(cell));
    }
    json overlays = json::object();
    for (const auto& o : r.overlays) {
        json pts = json::array();
        for (const auto& [x, y] : o.points)
            pts.push_back({x, y});
        overlays[o.name] = std::move(pts);
    }
    json doc = {{"spec", sweep_spec_to_json(r.spec)},
                {"metadata", metadata(r)},
                {"grid", std::move(grid)},
                {"overlays", std::move(overlays)}};
    return doc.dump(1) + "\n";
}

SweepResult sweep_result_from_json_string(const std::string& text) {
    const json doc = json::parse(text);
    SweepResult r;
    r.spec = sweep_spec_from_json(doc.at("spec"), "spec");
    r.version = doc.at("metadata").at("version").get<std::string>();
    r.nx = doc.at("metadata").at("nx").get<std::size_t>();
    r.ny = doc.at("metadata").at("ny").get<std::size_t>();
    for (const auto& j : doc.at("grid")) {
        SweepCell c;
        c.x = j.at("x").get<double>();
        c.y = j.at("y").get<double>();
        c.success_probability = number_from(j.at("success_probability"));
        c.normalized_success = number_from(j.at("normalized_success_probability"));
        c.fidelity = number_from(j.at("fidelity"));
        c.norm_final = number_from(j.at("norm_final"));
        c.i_a = number_from(j.at("i_a"));
        c.i_cav = number_from(j.at("i_cav"));
        c.omega0_opt = number_from(j.at("omega0_opt"));
        c.tau0 = number_from(j.at("tau0"));
        if (auto it = j.find("error"); it != j.end())
            c.error = it->get<std::string>();
        r.grid.push_back(std::move(c));
    }
    for (const auto& [name, pts] : doc.at("overlays").items()) {
        Overlay o{name, {}};
        for (const auto& p : pts)
            o.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        r.overlays.push_back(std::move(o));
    }
    return r;
}

void emit(const SweepResult& r, const std::filesystem::path& path, OutputFormat format) {
    if (format == OutputFormat::JSON) {
        write_file(path, to_json_string(r));
        return;
    }
    write_file(path, to_csv(r));
    for (const auto& o : r.overlays) {
        std::string text = "x,y\n";
        for (const auto& [x, y] : o.points)
            text += format_double(x) + "," + format_double(y) + "\n";
        write_file(path.string() + ".overlay-" + o.name + ".csv", text);
    }
    const json meta = {{"spec", sweep_spec_to_json(r.spec)}, {"metadata", metadata(r)}};
    write_file(path.string() + ".meta.json", meta.dump(1) + "\n");
}

} // namespace cmat
