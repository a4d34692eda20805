#include "magcp/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "magcp/cli/validate.hpp"
#include "magcp/errors.hpp"

namespace magcp::cli {

using nlohmann::json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// fn(i) for i in [0, n) on up to `threads` workers; results are stored by index, so the output
// order (and content) does not depend on scheduling. The first exception by index is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, int threads, F fn) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

ParticleSpec particle_for(const JobConfig& cfg, Table& t) {
    ParticleSpec p;
    try {
        p = build_particle(cfg.particle);
        for (const auto& w : validate_surface(cfg.surface)) t.notes.push_back(w);
    } catch (const Error& e) {
        throw ConfigError("/particle", e.what());
    }
    for (const auto& n : p.notes) t.notes.push_back(n);
    return p;
}

EnvironmentSpec environment(const JobConfig& cfg) {
    return cfg.gravity ? EnvironmentSpec{} : EnvironmentSpec::no_gravity();
}

ForceOptions force_options(const JobConfig& cfg) {
    ForceOptions opt;
    opt.mode = cfg.mode;
    opt.include_static = cfg.include_static;
    opt.env = environment(cfg);
    return opt;
}

std::string format_number(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

bool on_off(const std::string& v, const char* flag) {
    if (v == "on") return true;
    if (v == "off") return false;
    throw ConfigError(flag, "expected on or off");
}

}  // namespace

Table cmd_potential(const JobConfig& cfg) {
    check_config(cfg);
    Table t;
    t.command = "potential";
    const ParticleSpec p = particle_for(cfg, t);
    const auto geo = geometries(cfg, p);
    t.columns = {"z_tilde", "z0_m", "u_e_minus", "u_m_minus", "u_m_z", "u_m_excited0", "total_ground",
                 "total_excited0", "converged_e", "converged_m_minus", "converged_m_z", "converged_m_excited0"};
    const auto rows = parallel_map<PotentialBreakdown>(geo.size(), cfg.threads, [&](std::size_t i) {
        PotentialBreakdown b = potential_breakdown(p, cfg.surface, geo[i], cfg.quadrature, cfg.mode);
        if (!cfg.include_static) {
            b.total_ground -= b.u_m_z;
            b.u_m_z = 0.0;
        }
        return b;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& b = rows[i];
        t.rows.push_back({geo[i].z_tilde, geo[i].z0, b.u_e_minus, b.u_m_minus, b.u_m_z, b.u_m_excited0,
                          b.total_ground, b.total_excited0, b.converged_e, b.converged_m_minus, b.converged_m_z,
                          b.converged_m_excited0});
        t.all_converged = t.all_converged && b.all_converged();
    }
    return t;
}

Table cmd_force(const JobConfig& cfg) {
    check_config(cfg);
    Table t;
    t.command = "force";
    const ParticleSpec p = particle_for(cfg, t);
    const auto geo = geometries(cfg, p);
    const ForceOptions opt = force_options(cfg);
    t.columns = {"z_tilde", "z0_m", "f_e", "f_m_minus", "f_m_z", "f_m_excited0", "f_gravity", "f_total",
                 "f_total_cp", "converged"};
    const auto rows = parallel_map<ForceBreakdown>(geo.size(), cfg.threads, [&](std::size_t i) {
        return force_breakdown(p, cfg.surface, geo[i], cfg.quadrature, opt);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& f = rows[i];
        t.rows.push_back({geo[i].z_tilde, geo[i].z0, f.f_e, f.f_m_minus, f.f_m_z, f.f_m_excited0, f.f_gravity,
                          f.f_total, f.f_total_cp, f.converged});
        t.all_converged = t.all_converged && f.converged;
    }
    return t;
}

Table cmd_threshold(const JobConfig& cfg) {
    check_config(cfg);
    Table t;
    t.command = "threshold";
    const ParticleSpec p = particle_for(cfg, t);
    const auto geo = geometries(cfg, p);
    const EnvironmentSpec env = environment(cfg);
    t.columns = {"z_tilde", "z0_m", "s_with_static", "s_without_static", "converged"};
    struct Row {
        double with_static = nan;
        double without_static = nan;
        bool converged = true;
    };
    const auto rows = parallel_map<Row>(geo.size(), cfg.threads, [&](std::size_t i) {
        Row r;
        try {
            r.with_static = spin_threshold(p, cfg.surface, geo[i], cfg.quadrature, ThresholdMode::with_static, env).spin;
            r.without_static =
                spin_threshold(p, cfg.surface, geo[i], cfg.quadrature, ThresholdMode::without_static, env).spin;
        } catch (const QuadratureFailure&) {
            r.converged = false;
        }
        return r;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        t.rows.push_back({geo[i].z_tilde, geo[i].z0, rows[i].with_static, rows[i].without_static, rows[i].converged});
        t.all_converged = t.all_converged && rows[i].converged;
    }
    return t;
}

Table cmd_equilibrium(const JobConfig& cfg) {
    Table t;
    t.command = "equilibrium";
    const ParticleSpec p = particle_for(cfg, t);
    Bracket b{0.1, 1000.0};
    if (cfg.bracket) {
        b = *cfg.bracket;
    } else if (cfg.grid.size() >= 2) {
        b = {cfg.grid.front(), cfg.grid.back()};
        if (cfg.grid_variable == GridVariable::z0) b = {b.lo * p.k_e, b.hi * p.k_e};
    }
    const Equilibrium eq = find_equilibrium(p, cfg.surface, cfg.quadrature, force_options(cfg), b);
    t.columns = {"z_tilde_eq", "z0_eq_m", "stable", "residual_force", "slope", "analytic_z_tilde", "method",
                 "force_evaluations"};
    t.rows.push_back({eq.z_tilde_eq, eq.z_tilde_eq / p.k_e, eq.stable, eq.residual_force, eq.slope,
                      eq.analytic.value_or(nan), std::string(to_string(eq.method)),
                      static_cast<double>(eq.force_evaluations)});
    return t;
}

void write_csv(std::ostream& out, const Table& t, int precision) {
    out << units_line << '\n';
    for (const auto& n : t.notes) out << "# note: " << n << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>)
                        out << format_number(v, precision);
                    else if constexpr (std::is_same_v<V, bool>)
                        out << (v ? "true" : "false");
                    else
                        out << csv_field(v);
                },
                row[i]);
        }
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& t, const JobConfig& cfg) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>)
                        r[t.columns[i]] = std::isfinite(v) ? json(v) : json(format_number(v, 1));
                    else
                        r[t.columns[i]] = v;
                },
                row[i]);
        }
        rows.push_back(std::move(r));
    }
    json doc = {{"command", t.command}, {"units", std::string(units_line).substr(2)}, {"config", to_json(cfg)},
                {"notes", t.notes},     {"converged", t.all_converged},              {"rows", rows}};
    out << doc.dump(2) << '\n';
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"magcp: Casimir-Polder shifts and forces on a magnetic particle near a surface"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, output_path, format, grid, mode, static_flag, gravity_flag;
    int threads = -1;
    app.add_option("--config", config_path, "JSON job configuration");
    app.add_option("--output", output_path, "write results here instead of stdout");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--grid", grid, "log:start:stop:n or lin:start:stop:n (grid variable of the config)");
    app.add_option("--mode", mode, "ground or excited0")->check(CLI::IsMember({"ground", "excited0"}));
    app.add_option("--static", static_flag, "include the magnetostatic term: on or off")
        ->check(CLI::IsMember({"on", "off"}));
    app.add_option("--gravity", gravity_flag, "on or off")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    for (const char* name : {"potential", "force", "equilibrium", "threshold", "validate"}) app.add_subcommand(name);
    app.get_subcommand("potential")->description("level shifts on the grid");
    app.get_subcommand("force")->description("force components on the grid");
    app.get_subcommand("equilibrium")->description("root of the total force and its stability");
    app.get_subcommand("threshold")->description("spin needed for zero total force on the grid");
    app.get_subcommand("validate")->description("built-in cross-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    JobConfig cfg;
    try {
        JobConfig base = default_config();
        if (const char* env = std::getenv("MAGCP_REL_TOL"); env && *env) {
            char* end = nullptr;
            const double tol = std::strtod(env, &end);
            if (*end != '\0' || !(tol > 0.0)) throw ConfigError("MAGCP_REL_TOL", "expected a positive number");
            base.quadrature.rel_tol = tol;
        }
        cfg = config_path.empty() ? base : load_config(config_path, base);
        if (!grid.empty()) {
            try {
                cfg.grid = parse_grid(grid);
            } catch (const ConfigError& e) {
                throw ConfigError("--grid", e.what());
            }
        }
        if (!mode.empty()) cfg.mode = mode == "excited0" ? LevelMode::excited0 : LevelMode::ground;
        if (!static_flag.empty()) cfg.include_static = on_off(static_flag, "--static");
        if (!gravity_flag.empty()) cfg.gravity = on_off(gravity_flag, "--gravity");
        if (!format.empty()) cfg.output.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
        if (!output_path.empty()) cfg.output.path = output_path;
        if (threads >= 0) cfg.threads = threads;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    }

    if (command == "validate") {
        const ValidationReport report = cmd_validate(cfg.quadrature);
        print_report(out, report);
        return report.passed() ? exit_ok : exit_not_converged;
    }

    Table table;
    int code = exit_ok;
    try {
        if (command == "potential")
            table = cmd_potential(cfg);
        else if (command == "force")
            table = cmd_force(cfg);
        else if (command == "threshold")
            table = cmd_threshold(cfg);
        else
            table = cmd_equilibrium(cfg);
        if (!table.all_converged) code = exit_not_converged;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const BracketError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const NoEquilibrium& e) {
        table = Table{};
        table.command = command;
        table.columns = {"status", "message"};
        table.rows.push_back({std::string("no_equilibrium"), std::string(e.what())});
        code = exit_no_result;
    } catch (const QuadratureFailure& e) {
        err << "quadrature failure: " << e.what() << '\n';
        return exit_not_converged;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    std::ofstream file;
    if (!cfg.output.path.empty()) {
        file.open(cfg.output.path);
        if (!file) {
            err << "config error: cannot write " << cfg.output.path << '\n';
            return exit_config;
        }
    }
    std::ostream& sink = cfg.output.path.empty() ? out : file;
    if (cfg.output.format == OutputFormat::json)
        write_json(sink, table, cfg);
    else
        write_csv(sink, table, cfg.output.precision);
    if (code == exit_not_converged) err << "warning: some grid points did not converge (partial results written)\n";
    return code;
}

}  // namespace magcp::cli
