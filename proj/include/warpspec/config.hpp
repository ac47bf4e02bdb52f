#pragma once

// Run configuration for the batch driver.  Config files are TOML (flat keys
// plus [section] headers); every value can be overridden by a CLI flag.

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "warpspec/eigensolver.hpp"

namespace warpspec {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int N = 3;
    int p = 0;
    double a = -1.0;
    double b = -1.0;
    double epsilon = 1.0;
    double c = 2.0;
    int kmax = 2;
    std::vector<double> ladder = {40.0, 80.0, 160.0};
    GridPolicy grid;
    double cutoff = 50.0;
    double tolerance = 0.05;
    std::string family = "type1";  // tower to sweep: type1 or type2
    std::string out_dir = "out";

    // throws ConfigError on any violated constraint
    void validate() const;
};

using TomlValue = std::variant<bool, double, std::string, std::vector<double>>;

// minimal TOML subset: comments, [sections] (flattened as "section.key"),
// key = number | "string" | true/false | [array of numbers]
std::map<std::string, TomlValue> parse_toml(const std::string& text);

RunConfig load_config(const std::string& path);
void apply_toml(RunConfig& config, const std::map<std::string, TomlValue>& values);

}  // namespace warpspec
