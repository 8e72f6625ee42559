#include "cnsdg/config.hpp"

#include <fstream>
#include <sstream>

namespace cnsdg {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value '" + v + "' for key '" + key + "'");
    }
}

int to_int(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid integer value '" + v + "' for key '" + key + "'");
    }
}

int to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "on" || v == "1") return 1;
    if (v == "false" || v == "off" || v == "0") return 0;
    throw ConfigError("invalid boolean value '" + v + "' for key '" + key + "'");
}

std::vector<double> to_double_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, key));
    }
    if (out.empty()) throw ConfigError("empty list for key '" + key + "'");
    return out;
}

} // namespace

ConfigFile parse_config_text(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    std::string section = "run";
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_scenario = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section == "convergence" && !cfg.convergence) cfg.convergence.emplace();
            else if (section == "verify" && !cfg.verify) cfg.verify.emplace();
            else if (section != "run" && section != "convergence" && section != "verify")
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError(where + ": empty key or value");

        if (section == "run") {
            RunConfig& r = cfg.run;
            if (key == "scenario") { r.scenario = val; saw_scenario = true; }
            else if (key == "degree") r.degree = to_int(val, key);
            else if (key == "dx") r.dx = to_double(val, key);
            else if (key == "gamma") r.gamma = to_double(val, key);
            else if (key == "prandtl") r.prandtl = to_double(val, key);
            else if (key == "reynolds") r.reynolds = to_double(val, key);
            else if (key == "cfl_a") r.cfl_a = to_double(val, key);
            else if (key == "end_time") r.end_time = to_double(val, key);
            else if (key == "sigma_interior") r.sigma_interior = to_double(val, key);
            else if (key == "sigma_boundary") r.sigma_boundary = to_double(val, key);
            else if (key == "sigma_tilde") r.sigma_tilde = to_double(val, key);
            else if (key == "output_prefix") r.output_prefix = val;
            else if (key == "output_every_steps") r.output_every_steps = to_int(val, key);
            else if (key == "floor_cap") r.floor_cap = to_double(val, key);
            else if (key == "max_halvings") r.max_halvings = to_int(val, key);
            else if (key == "max_doublings") r.max_doublings = to_int(val, key);
            else if (key == "solver") {
                if (val != "auto" && val != "direct" && val != "krylov")
                    throw ConfigError(where + ": solver must be auto, direct, or krylov");
                r.solver = val;
            } else if (key == "mms_forcing") r.mms_forcing = to_bool(val, key);
            else throw ConfigError(where + ": unknown key '" + key + "' in [run]");
        } else if (section == "convergence") {
            if (key == "dx_list") cfg.convergence->dx_list = to_double_list(val, key);
            else if (key == "dt") cfg.convergence->dt = to_double(val, key);
            else throw ConfigError(where + ": unknown key '" + key + "' in [convergence]");
        } else { // verify
            if (key == "dt") cfg.verify->dt = to_double(val, key);
            else if (key == "sigma_tilde_list")
                cfg.verify->sigma_tilde_list = to_double_list(val, key);
            else if (key == "dump") cfg.verify->dump = to_bool(val, key) != 0;
            else throw ConfigError(where + ": unknown key '" + key + "' in [verify]");
        }
    }
    if (!saw_scenario) throw ConfigError(origin + ": missing required key 'scenario'");
    if (cfg.run.degree < 1 || cfg.run.degree > 3)
        throw ConfigError(origin + ": degree must be 1, 2, or 3");
    if (!(cfg.run.dx > 0.0)) throw ConfigError(origin + ": dx must be positive");
    return cfg;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

} // namespace cnsdg
