#include "lrk/config.hpp"

#include <fstream>
#include <sstream>

#include "lrk/error.hpp"

namespace lrk {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Design ExperimentConfig::make_design() const {
    return grid ? grid_design(grid_m, domain) : random_design(random_n, domain, seed);
}

void ExperimentConfig::validate() const {
    require(!kernels.empty(), "config: at least one kernel is required");
    for (const auto& k : kernels) k.validate();
    if (grid) require(grid_m >= 1, "config: grid_m must be >= 1");
    else require(random_n >= 1, "config: random_n must be >= 1");
    require(quadrature_m >= 100, "config: quadrature_m must be >= 100");
    require(!output_dir.empty(), "config: output_dir must not be empty");
}

void apply_override(ExperimentConfig& config, const std::string& key, const std::string& value) {
    try {
        if (key == "kernel") {
            config.kernels.push_back(parse_kernel(value));
        } else if (key == "design") {
            if (value == "grid") config.grid = true;
            else if (value == "random") config.grid = false;
            else throw InvalidArgument("config: design must be grid or random");
        } else if (key == "grid_m") {
            config.grid_m = std::stoul(value);
        } else if (key == "random_n") {
            config.random_n = std::stoul(value);
        } else if (key == "domain") {
            const auto parts = split(value, ',');
            require(parts.size() >= 2 && parts.size() % 2 == 0,
                    "config: domain needs lo,hi pairs");
            std::vector<double> lo, hi;
            for (std::size_t i = 0; i < parts.size(); i += 2) {
                lo.push_back(std::stod(parts[i]));
                hi.push_back(std::stod(parts[i + 1]));
            }
            config.domain = Box(lo, hi);
        } else if (key == "k_list") {
            config.k_list.clear();
            for (const auto& p : split(value, ',')) config.k_list.push_back(std::stoul(p));
        } else if (key == "tau_list") {
            config.tau_list.clear();
            for (const auto& p : split(value, ',')) config.tau_list.push_back(std::stod(p));
        } else if (key == "quadrature_m") {
            config.quadrature_m = std::stoul(value);
        } else if (key == "seed") {
            config.seed = std::stoull(value);
        } else if (key == "output_dir") {
            config.output_dir = value;
        } else if (key == "raster_resolution") {
            config.raster_resolution = std::stoi(value);
        } else if (key == "max_matrix_bytes") {
            config.max_matrix_bytes = std::stoull(value);
        } else if (key == "corollary1_grid_sides") {
            config.verify.corollary1_grid_sides.clear();
            for (const auto& p : split(value, ','))
                config.verify.corollary1_grid_sides.push_back(std::stoul(p));
        } else if (key == "theorem1_grid_sides") {
            config.verify.theorem1_grid_sides.clear();
            for (const auto& p : split(value, ','))
                config.verify.theorem1_grid_sides.push_back(std::stoul(p));
        } else if (key == "theorem1_k") {
            config.verify.theorem1_k = std::stoul(value);
        } else if (key == "tail_rate_grid_side") {
            config.verify.tail_rate_grid_side = std::stoul(value);
        } else if (key == "discrete_continuous_grid_side") {
            config.verify.discrete_continuous_grid_side = std::stoul(value);
        } else if (key == "golden_grid_side") {
            config.verify.golden_grid_side = std::stoul(value);
        } else if (key == "golden_file") {
            config.verify.golden_file = value;
        } else {
            throw InvalidArgument("config: unknown key '" + key + "'");
        }
    } catch (const std::invalid_argument&) {
        throw InvalidArgument("config: bad value for '" + key + "'");
    } catch (const std::out_of_range&) {
        throw InvalidArgument("config: value out of range for '" + key + "'");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        require(eq != std::string::npos, "config: expected key=value, got '" + t + "'");
        apply_override(config, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace lrk
