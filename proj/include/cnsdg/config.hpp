/// @file config.hpp
/// @brief Run configuration and the flat sectioned key-value config parser.

#ifndef CNSDG_CONFIG_HPP
#define CNSDG_CONFIG_HPP

#include "cnsdg/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cnsdg {

/// Values of -1 (or empty) defer to the scenario preset / degree defaults.
struct RunConfig {
    std::string scenario;
    int degree = 0;
    double dx = 0.0;
    double gamma = 1.4;
    double prandtl = -1.0;
    double reynolds = -1.0;
    double cfl_a = -1.0;
    double end_time = -1.0;
    double sigma_interior = -1.0;
    double sigma_boundary = -1.0;
    double sigma_tilde = 2.0;
    std::string output_prefix;
    int output_every_steps = 0;
    double floor_cap = 1e-13;
    int max_halvings = 40;
    int max_doublings = 40;
    std::string solver = "auto"; ///< auto | direct | krylov
    int mms_forcing = -1;        ///< -1: scenario default, else 0/1
};

struct ConvergenceConfig {
    std::vector<double> dx_list;
    double dt = 0.0;
};

struct VerifyConfig {
    double dt = 0.0;
    std::vector<double> sigma_tilde_list; ///< empty: use run.sigma_tilde
    bool dump = false;                    ///< write the matrix in COO text form
};

struct ConfigFile {
    RunConfig run;
    std::optional<ConvergenceConfig> convergence;
    std::optional<VerifyConfig> verify;
};

/// Parses "[section]" / "key = value" lines; '#' starts a comment.
/// Unknown sections or keys raise ConfigError.
ConfigFile parse_config_file(const std::string& path);
ConfigFile parse_config_text(const std::string& text, const std::string& origin = "<string>");

} // namespace cnsdg

#endif
