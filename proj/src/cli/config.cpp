#include "magcp/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace magcp::cli {

using nlohmann::json;

namespace {

std::string child(const std::string& ptr, std::string_view key) { return ptr + "/" + std::string(key); }

void only_keys(const json& obj, const std::string& ptr, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ConfigError(ptr.empty() ? "/" : ptr, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(child(ptr, key), "unknown field");
    }
}

double number(const json& v, const std::string& ptr) {
    if (!v.is_number()) throw ConfigError(ptr, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(ptr, "must be finite");
    return x;
}

double positive(const json& v, const std::string& ptr) {
    const double x = number(v, ptr);
    if (!(x > 0.0)) throw ConfigError(ptr, "must be positive");
    return x;
}

bool boolean(const json& v, const std::string& ptr) {
    if (!v.is_boolean()) throw ConfigError(ptr, "expected true or false");
    return v.get<bool>();
}

std::string text(const json& v, const std::string& ptr) {
    if (!v.is_string()) throw ConfigError(ptr, "expected a string");
    return v.get<std::string>();
}

// Angular frequency in rad/s: a bare number is rad/s, {"value", "unit": "rad/s" | "Hz"} converts.
double frequency(const json& v, const std::string& ptr) {
    if (v.is_number()) return positive(v, ptr);
    only_keys(v, ptr, {"value", "unit"});
    if (!v.contains("value")) throw ConfigError(child(ptr, "value"), "missing");
    const double x = positive(v["value"], child(ptr, "value"));
    const std::string unit = v.contains("unit") ? text(v["unit"], child(ptr, "unit")) : "rad/s";
    if (unit == "rad/s") return x;
    if (unit == "Hz") return 2.0 * constants::pi * x;
    throw ConfigError(child(ptr, "unit"), "expected \"rad/s\" or \"Hz\"");
}

DipoleMoment dipole(const json& v, const std::string& ptr) {
    if (v.is_number()) return {positive(v, ptr), DipoleUnit::e_bohr};
    only_keys(v, ptr, {"value", "unit"});
    if (!v.contains("value")) throw ConfigError(child(ptr, "value"), "missing");
    const double x = positive(v["value"], child(ptr, "value"));
    const std::string unit = v.contains("unit") ? text(v["unit"], child(ptr, "unit")) : "e*a0";
    if (unit == "e*a0") return {x, DipoleUnit::e_bohr};
    if (unit == "C*m") return {x, DipoleUnit::coulomb_metre};
    throw ConfigError(child(ptr, "unit"), "expected \"e*a0\" or \"C*m\"");
}

void read_gamma0(const json& v, const std::string& ptr, RawParticle& raw) {
    if (v.is_null()) {
        raw.gamma_0.reset();
        return;
    }
    if (v.is_number()) {
        raw.gamma_0 = positive(v, ptr);
        raw.gamma_0_convention = RateConvention::angular;
        return;
    }
    only_keys(v, ptr, {"value", "convention"});
    if (!v.contains("value")) throw ConfigError(child(ptr, "value"), "missing");
    raw.gamma_0 = positive(v["value"], child(ptr, "value"));
    const std::string conv = v.contains("convention") ? text(v["convention"], child(ptr, "convention")) : "angular";
    if (conv == "angular")
        raw.gamma_0_convention = RateConvention::angular;
    else if (conv == "cyclic")
        raw.gamma_0_convention = RateConvention::cyclic;
    else
        throw ConfigError(child(ptr, "convention"), "expected \"angular\" or \"cyclic\"");
}

void read_particle(const json& v, JobConfig& cfg) {
    const std::string ptr = "/particle";
    only_keys(v, ptr, {"omega_e", "omega_m", "dipole", "spin", "m_s", "gamma_0", "mass_per_spin", "mass",
                       "allow_hierarchy_violation", "physical"});
    RawParticle& raw = cfg.particle;
    if (v.contains("omega_e")) raw.omega_e = frequency(v["omega_e"], ptr + "/omega_e");
    if (v.contains("omega_m")) raw.omega_m = frequency(v["omega_m"], ptr + "/omega_m");
    if (v.contains("dipole")) raw.dipole = dipole(v["dipole"], ptr + "/dipole");
    if (v.contains("gamma_0")) read_gamma0(v["gamma_0"], ptr + "/gamma_0", raw);
    if (v.contains("spin")) {
        raw.spin = number(v["spin"], ptr + "/spin");
        if (raw.spin < 0.0) throw ConfigError(ptr + "/spin", "must be >= 0");
        raw.m_s = -raw.spin;
    }
    if (v.contains("m_s")) raw.m_s = number(v["m_s"], ptr + "/m_s");
    if (std::abs(raw.m_s) > raw.spin) throw ConfigError(ptr + "/m_s", "|m_s| exceeds spin");
    if (v.contains("mass_per_spin")) raw.mass_per_spin = positive(v["mass_per_spin"], ptr + "/mass_per_spin");
    if (v.contains("mass")) {
        if (v["mass"].is_null())
            raw.mass.reset();
        else
            raw.mass = positive(v["mass"], ptr + "/mass");
    }
    if (v.contains("allow_hierarchy_violation"))
        raw.allow_hierarchy_violation = boolean(v["allow_hierarchy_violation"], ptr + "/allow_hierarchy_violation");
    if (v.contains("physical")) cfg.physical_particle = boolean(v["physical"], ptr + "/physical");
}

void read_surface(const json& v, JobConfig& cfg) {
    const std::string ptr = "/surface";
    if (!v.is_object()) throw ConfigError(ptr, "expected an object");
    if (!v.contains("model")) throw ConfigError(ptr + "/model", "missing surface model tag");
    const std::string model = text(v["model"], ptr + "/model");
    if (model == "perfect_conductor") {
        only_keys(v, ptr, {"model"});
        cfg.surface = PerfectConductor{};
    } else if (model == "drude") {
        only_keys(v, ptr, {"model", "omega_p", "gamma"});
        if (!v.contains("omega_p")) throw ConfigError(ptr + "/omega_p", "missing");
        if (!v.contains("gamma")) throw ConfigError(ptr + "/gamma", "missing");
        cfg.surface = Drude{frequency(v["omega_p"], ptr + "/omega_p"), frequency(v["gamma"], ptr + "/gamma")};
    } else if (model == "plasma") {
        only_keys(v, ptr, {"model", "omega_p"});
        if (!v.contains("omega_p")) throw ConfigError(ptr + "/omega_p", "missing");
        cfg.surface = Plasma{frequency(v["omega_p"], ptr + "/omega_p")};
    } else {
        throw ConfigError(ptr + "/model", "expected \"perfect_conductor\", \"drude\" or \"plasma\"");
    }
}

void read_grid(const json& v, JobConfig& cfg) {
    const std::string ptr = "/grid";
    only_keys(v, ptr, {"variable", "values", "range"});
    if (v.contains("variable")) {
        const std::string var = text(v["variable"], ptr + "/variable");
        if (var == "z_tilde")
            cfg.grid_variable = GridVariable::z_tilde;
        else if (var == "z0")
            cfg.grid_variable = GridVariable::z0;
        else
            throw ConfigError(ptr + "/variable", "expected \"z_tilde\" or \"z0\"");
    }
    if (v.contains("values") && v.contains("range")) throw ConfigError(ptr, "give either values or range");
    if (v.contains("values")) {
        const json& vals = v["values"];
        if (!vals.is_array()) throw ConfigError(ptr + "/values", "expected an array");
        cfg.grid.clear();
        for (std::size_t i = 0; i < vals.size(); ++i)
            cfg.grid.push_back(number(vals[i], ptr + "/values/" + std::to_string(i)));
    }
    if (v.contains("range")) {
        try {
            cfg.grid = parse_grid(text(v["range"], ptr + "/range"));
        } catch (const ConfigError& e) {
            throw ConfigError(ptr + "/range", e.what());
        }
    }
}

void read_quadrature(const json& v, JobConfig& cfg) {
    const std::string ptr = "/quadrature";
    only_keys(v, ptr, {"rel_tol", "abs_tol", "max_subdivisions", "tail_decades", "split_points"});
    QuadratureConfig& q = cfg.quadrature;
    if (v.contains("rel_tol")) q.rel_tol = number(v["rel_tol"], ptr + "/rel_tol");
    if (v.contains("abs_tol")) q.abs_tol = number(v["abs_tol"], ptr + "/abs_tol");
    const auto integer = [&](const char* key) {
        const json& x = v[key];
        if (!x.is_number_integer()) throw ConfigError(child(ptr, key), "expected an integer");
        return x.get<int>();
    };
    if (v.contains("max_subdivisions")) q.max_subdivisions = integer("max_subdivisions");
    if (v.contains("tail_decades")) q.tail_decades = integer("tail_decades");
    if (v.contains("split_points")) {
        const json& sp = v["split_points"];
        if (!sp.is_array()) throw ConfigError(ptr + "/split_points", "expected an array");
        q.split_points.clear();
        for (std::size_t i = 0; i < sp.size(); ++i)
            q.split_points.push_back(positive(sp[i], ptr + "/split_points/" + std::to_string(i)));
    }
    try {
        q.validate();
    } catch (const InvalidQuadratureConfig& e) {
        throw ConfigError(ptr, e.what());
    }
}

void read_mode(const json& v, JobConfig& cfg) {
    const std::string ptr = "/mode";
    only_keys(v, ptr, {"level", "static", "gravity"});
    if (v.contains("level")) {
        const std::string level = text(v["level"], ptr + "/level");
        if (level == "ground")
            cfg.mode = LevelMode::ground;
        else if (level == "excited0")
            cfg.mode = LevelMode::excited0;
        else
            throw ConfigError(ptr + "/level", "expected \"ground\" or \"excited0\"");
    }
    if (v.contains("static")) cfg.include_static = boolean(v["static"], ptr + "/static");
    if (v.contains("gravity")) cfg.gravity = boolean(v["gravity"], ptr + "/gravity");
}

void read_equilibrium(const json& v, JobConfig& cfg) {
    const std::string ptr = "/equilibrium";
    only_keys(v, ptr, {"bracket"});
    if (!v.contains("bracket")) return;
    const json& b = v["bracket"];
    if (!b.is_array() || b.size() != 2) throw ConfigError(ptr + "/bracket", "expected [lo, hi]");
    const Bracket br{positive(b[0], ptr + "/bracket/0"), positive(b[1], ptr + "/bracket/1")};
    if (!(br.hi > br.lo)) throw ConfigError(ptr + "/bracket", "need lo < hi");
    cfg.bracket = br;
}

void read_output(const json& v, JobConfig& cfg) {
    const std::string ptr = "/output";
    only_keys(v, ptr, {"path", "format", "precision"});
    if (v.contains("path")) cfg.output.path = text(v["path"], ptr + "/path");
    if (v.contains("format")) {
        const std::string f = text(v["format"], ptr + "/format");
        if (f == "csv")
            cfg.output.format = OutputFormat::csv;
        else if (f == "json")
            cfg.output.format = OutputFormat::json;
        else
            throw ConfigError(ptr + "/format", "expected \"csv\" or \"json\"");
    }
    if (v.contains("precision")) {
        const json& p = v["precision"];
        if (!p.is_number_integer() || p.get<int>() < 1 || p.get<int>() > 17)
            throw ConfigError(ptr + "/precision", "expected an integer in [1, 17]");
        cfg.output.precision = p.get<int>();
    }
}

double parse_double(std::string_view s, const std::string& what) {
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("", "bad " + what + " '" + std::string(s) + "'");
    return x;
}

bool is_half_integer(double x) { return std::abs(2.0 * x - std::round(2.0 * x)) < 1e-12; }

}  // namespace

JobConfig default_config() {
    JobConfig cfg;
    cfg.particle = reference_particle(1.0, -1.0);
    return cfg;
}

std::vector<double> parse_grid(std::string_view spec) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon == std::string_view::npos ? spec.npos : colon - start));
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 4 || (parts[0] != "log" && parts[0] != "lin"))
        throw ConfigError("", "grid must look like log:start:stop:n or lin:start:stop:n");
    const double a = parse_double(parts[1], "grid start");
    const double b = parse_double(parts[2], "grid stop");
    const double nd = parse_double(parts[3], "grid count");
    if (!(nd >= 1.0) || nd != std::floor(nd) || nd > 1e6) throw ConfigError("", "grid count must be a positive integer");
    const int n = static_cast<int>(nd);
    const bool log = parts[0] == "log";
    if (log && !(a > 0.0 && b > 0.0)) throw ConfigError("", "log grid needs positive ends");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back(a);
        return out;
    }
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        out.push_back(log ? a * std::pow(b / a, t) : a + (b - a) * t);
    }
    out.back() = b;
    return out;
}

JobConfig parse_config(const json& doc, const JobConfig& base) {
    only_keys(doc, "", {"particle", "surface", "grid", "quadrature", "mode", "equilibrium", "output", "threads"});
    JobConfig cfg = base;
    if (doc.contains("particle")) read_particle(doc["particle"], cfg);
    if (doc.contains("surface")) read_surface(doc["surface"], cfg);
    if (doc.contains("grid")) read_grid(doc["grid"], cfg);
    if (doc.contains("quadrature")) read_quadrature(doc["quadrature"], cfg);
    if (doc.contains("mode")) read_mode(doc["mode"], cfg);
    if (doc.contains("equilibrium")) read_equilibrium(doc["equilibrium"], cfg);
    if (doc.contains("output")) read_output(doc["output"], cfg);
    if (doc.contains("threads")) {
        const json& t = doc["threads"];
        if (!t.is_number_integer() || t.get<int>() < 0) throw ConfigError("/threads", "expected an integer >= 0");
        cfg.threads = t.get<int>();
    }
    try {
        validate_surface(cfg.surface);
    } catch (const Error& e) {
        throw ConfigError("/surface", e.what());
    }
    return cfg;
}

JobConfig parse_config_text(std::string_view text, const JobConfig& base) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is 1-based; translate to line and column.
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), "JSON syntax error");
    }
    return parse_config(doc, base);
}

JobConfig load_config(const std::string& path, const JobConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), base);
}

json to_json(const JobConfig& cfg) {
    const RawParticle& r = cfg.particle;
    json particle = {
        {"omega_e", r.omega_e},
        {"omega_m", r.omega_m},
        {"dipole", {{"value", r.dipole.coulomb_metres()}, {"unit", "C*m"}}},
        {"spin", r.spin},
        {"m_s", r.m_s},
        {"mass_per_spin", r.mass_per_spin},
        {"allow_hierarchy_violation", r.allow_hierarchy_violation},
        {"physical", cfg.physical_particle},
    };
    particle["gamma_0"] = r.gamma_0 ? json({{"value", *r.gamma_0},
                                            {"convention", r.gamma_0_convention == RateConvention::cyclic ? "cyclic" : "angular"}})
                                    : json(nullptr);
    particle["mass"] = r.mass ? json(*r.mass) : json(nullptr);

    json surface;
    if (const auto* d = std::get_if<Drude>(&cfg.surface))
        surface = {{"model", "drude"}, {"omega_p", d->omega_p}, {"gamma", d->gamma}};
    else if (const auto* p = std::get_if<Plasma>(&cfg.surface))
        surface = {{"model", "plasma"}, {"omega_p", p->omega_p}};
    else
        surface = {{"model", "perfect_conductor"}};

    const QuadratureConfig& q = cfg.quadrature;
    json doc = {
        {"particle", particle},
        {"surface", surface},
        {"grid", {{"variable", cfg.grid_variable == GridVariable::z0 ? "z0" : "z_tilde"}, {"values", cfg.grid}}},
        {"quadrature",
         {{"rel_tol", q.rel_tol},
          {"abs_tol", q.abs_tol},
          {"max_subdivisions", q.max_subdivisions},
          {"tail_decades", q.tail_decades},
          {"split_points", q.split_points}}},
        {"mode",
         {{"level", cfg.mode == LevelMode::excited0 ? "excited0" : "ground"},
          {"static", cfg.include_static},
          {"gravity", cfg.gravity}}},
        {"output",
         {{"path", cfg.output.path},
          {"format", cfg.output.format == OutputFormat::json ? "json" : "csv"},
          {"precision", cfg.output.precision}}},
        {"threads", cfg.threads},
    };
    if (cfg.bracket) doc["equilibrium"] = {{"bracket", {cfg.bracket->lo, cfg.bracket->hi}}};
    return doc;
}

void check_config(const JobConfig& cfg) {
    if (cfg.grid.empty()) throw ConfigError("/grid", "grid is empty");
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        if (!(cfg.grid[i] > 0.0) || !std::isfinite(cfg.grid[i]))
            throw ConfigError("/grid/values/" + std::to_string(i), "grid values must be positive");
        if (i > 0 && !(cfg.grid[i] > cfg.grid[i - 1]))
            throw ConfigError("/grid/values/" + std::to_string(i), "grid must be strictly increasing");
    }
    if (cfg.physical_particle) {
        if (!is_half_integer(cfg.particle.spin)) throw ConfigError("/particle/spin", "physical spin must be a multiple of 1/2");
        if (!is_half_integer(cfg.particle.spin - cfg.particle.m_s))
            throw ConfigError("/particle/m_s", "S - m_s must be an integer");
    }
    try {
        cfg.quadrature.validate();
    } catch (const InvalidQuadratureConfig& e) {
        throw ConfigError("/quadrature", e.what());
    }
}

std::vector<Geometry> geometries(const JobConfig& cfg, const ParticleSpec& p) {
    std::vector<Geometry> out;
    out.reserve(cfg.grid.size());
    for (double v : cfg.grid)
        out.push_back(cfg.grid_variable == GridVariable::z0 ? Geometry::from_z0(v, p) : Geometry::from_z_tilde(v, p));
    return out;
}

}  // namespace magcp::cli
