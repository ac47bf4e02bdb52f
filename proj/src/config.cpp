#include "warpspec/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace warpspec {

void RunConfig::validate() const {
    try {
        WarpParams params{N, a, b, epsilon, c};
        params.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    if (p < 0 || p > N) throw ConfigError("config: p outside [0, N]");
    if (kmax < 0) throw ConfigError("config: kmax must be >= 0");
    if (ladder.size() < 3) throw ConfigError("config: ladder needs at least 3 lengths");
    for (size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] > ladder[i - 1])) throw ConfigError("config: ladder must be increasing");
    if (!(cutoff > 0.0)) throw ConfigError("config: cutoff must be > 0");
    if (!(tolerance > 0.0)) throw ConfigError("config: tolerance must be > 0");
    if (family != "type1" && family != "type2")
        throw ConfigError("config: family must be type1 or type2");
    if (family == "type2" && p < 1) throw ConfigError("config: type2 family needs p >= 1");
    if (grid.n_min < 64) throw ConfigError("config: grid n_min must be >= 64");
    if (!(grid.r_min_factor > 0.0 && grid.r_min_factor <= 0.1))
        throw ConfigError("config: grid r_min_factor must lie in (0, 0.1]");
}

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& token, int line_no) {
    size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line_no) + ": bad number '" +
                          token + "'");
    }
    if (used != token.size())
        throw ConfigError("config line " + std::to_string(line_no) + ": bad number '" +
                          token + "'");
    return value;
}

TomlValue parse_value(const std::string& raw, int line_no) {
    const std::string token = trim(raw);
    if (token.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": missing value");
    if (token == "true") return true;
    if (token == "false") return false;
    if (token.front() == '"') {
        if (token.size() < 2 || token.back() != '"')
            throw ConfigError("config line " + std::to_string(line_no) + ": unterminated string");
        return token.substr(1, token.size() - 2);
    }
    if (token.front() == '[') {
        if (token.back() != ']')
            throw ConfigError("config line " + std::to_string(line_no) + ": unterminated array");
        std::vector<double> values;
        std::string body = token.substr(1, token.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            values.push_back(parse_number(item, line_no));
        }
        return values;
    }
    return parse_number(token, line_no);
}

}  // namespace

std::map<std::string, TomlValue> parse_toml(const std::string& text) {
    std::map<std::string, TomlValue> out;
    std::stringstream stream(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        out[key] = parse_value(line.substr(eq + 1), line_no);
    }
    return out;
}

namespace {

double as_number(const TomlValue& v, const std::string& key) {
    if (const double* d = std::get_if<double>(&v)) return *d;
    throw ConfigError("config: key '" + key + "' must be a number");
}

int as_int(const TomlValue& v, const std::string& key) {
    const double d = as_number(v, key);
    if (d != std::floor(d)) throw ConfigError("config: key '" + key + "' must be an integer");
    return static_cast<int>(d);
}

}  // namespace

void apply_toml(RunConfig& config, const std::map<std::string, TomlValue>& values) {
    for (const auto& [key, value] : values) {
        if (key == "n") config.N = as_int(value, key);
        else if (key == "p") config.p = as_int(value, key);
        else if (key == "a") config.a = as_number(value, key);
        else if (key == "b") config.b = as_number(value, key);
        else if (key == "epsilon") config.epsilon = as_number(value, key);
        else if (key == "c") config.c = as_number(value, key);
        else if (key == "kmax") config.kmax = as_int(value, key);
        else if (key == "cutoff") config.cutoff = as_number(value, key);
        else if (key == "tolerance") config.tolerance = as_number(value, key);
        else if (key == "ladder") {
            if (const auto* arr = std::get_if<std::vector<double>>(&value))
                config.ladder = *arr;
            else
                throw ConfigError("config: ladder must be an array");
        } else if (key == "family") {
            if (const auto* s = std::get_if<std::string>(&value))
                config.family = *s;
            else
                throw ConfigError("config: family must be a string");
        } else if (key == "out") {
            if (const auto* s = std::get_if<std::string>(&value))
                config.out_dir = *s;
            else
                throw ConfigError("config: out must be a string");
        } else if (key == "grid.n_min") config.grid.n_min = as_int(value, key);
        else if (key == "grid.ratio") config.grid.ratio = as_number(value, key);
        else if (key == "grid.r_min_factor") config.grid.r_min_factor = as_number(value, key);
        else if (key == "grid.spacing") config.grid.spacing = as_number(value, key);
        else throw ConfigError("config: unknown key '" + key + "'");
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    RunConfig config;
    apply_toml(config, parse_toml(buffer.str()));
    return config;
}

}  // namespace warpspec
