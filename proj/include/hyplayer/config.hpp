#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hyplayer/extension.hpp"
#include "hyplayer/layer.hpp"
#include "hyplayer/model.hpp"

namespace hyplayer {

struct ModelSection {
    int n = 3;
    double gamma = 0.5;
    /// <= 0 means "use n".
    double mu = 0.0;
    std::string potential = "quartic";
};

struct GridSection {
    double T = 10.0;
    double R = 10.0;
    int Nt = 400;
    int Ny = 120;
    /// <= 0 means default_grading(gamma).
    double q = 0.0;
    std::string top = "natural";  ///< natural | comparison
};

struct SolverSection {
    double tol = 1e-10;
    int max_iters = 60;
    bool damping = true;
};

struct OutputSection {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "json"};  ///< csv, json, field

    bool wants(const std::string& f) const;
};

struct SweepSection {
    std::vector<double> gammas = {0.25, 0.5, 0.75};
    std::vector<int> ns = {3};
    std::vector<double> Ts = {10.0};
};

struct RunConfig {
    ModelSection model;
    GridSection grid;
    SolverSection solver;
    OutputSection output;
    SweepSection sweep;

    ModelParams model_params() const;
    LayerGridConfig layer_grid_config() const;
    SolverConfig solver_config() const;
};

enum class ConfigErrorKind { kMissingFile = 2, kParse = 3, kValidation = 4 };

class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ConfigErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ConfigErrorKind kind_;
};

/// Reads a flat key = value file with [model], [grid], [solver], [output] and [sweep]
/// sections. '#' and ';' start comments. Only [model] is required; everything else has
/// defaults. Unknown sections or keys are parse errors naming the line.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");

/// Re-runs the validation done by parse_config (after command-line overrides).
void validate_config(const RunConfig& cfg);

}  // namespace hyplayer
