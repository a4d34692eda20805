#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "magcp/core_params.hpp"
#include "magcp/materials.hpp"
#include "magcp/mechanics.hpp"
#include "magcp/potentials.hpp"
#include "magcp/quadrature.hpp"

namespace magcp::cli {

// Malformed or inconsistent configuration. `where` is a JSON pointer ("/surface/omega_p"), or a
// "line L, column C" location for syntax errors, or a flag name.
class ConfigError : public Error {
public:
    ConfigError(std::string where, const std::string& message)
        : Error(where.empty() ? message : where + ": " + message), where(std::move(where)) {}
    std::string where;
};

enum class OutputFormat { csv, json };

struct OutputSpec {
    std::string path;  // empty: stdout
    OutputFormat format = OutputFormat::csv;
    int precision = 12;
};

enum class GridVariable { z_tilde, z0 };

struct JobConfig {
    RawParticle particle;
    bool physical_particle = false;  // spin and m_S must be multiples of 1/2
    SurfaceModel surface = PerfectConductor{};
    GridVariable grid_variable = GridVariable::z_tilde;
    std::vector<double> grid;  // strictly increasing, positive
    QuadratureConfig quadrature;
    LevelMode mode = LevelMode::ground;
    bool include_static = true;
    bool gravity = true;
    std::optional<Bracket> bracket;  // z_tilde
    OutputSpec output;
    int threads = 0;  // 0: hardware concurrency
};

// Defaults: reference particle with S = 1, perfect conductor, empty grid.
JobConfig default_config();

// Fields absent from the document keep their value in `base`.
JobConfig parse_config(const nlohmann::json& doc, const JobConfig& base = default_config());
JobConfig parse_config_text(std::string_view text, const JobConfig& base = default_config());
JobConfig load_config(const std::string& path, const JobConfig& base = default_config());

// Normalized form accepted back by parse_config.
nlohmann::json to_json(const JobConfig& cfg);

// "log:start:stop:n" or "lin:start:stop:n".
std::vector<double> parse_grid(std::string_view spec);

// Grid, mode and flags are validated here: non-empty increasing grid, half-integer spins for
// physical particles, quadrature settings.
void check_config(const JobConfig& cfg);

std::vector<Geometry> geometries(const JobConfig& cfg, const ParticleSpec& p);

}  // namespace magcp::cli
