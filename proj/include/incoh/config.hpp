#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace incoh {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class ParamKind { length, number, integer };

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::length;
    bool required = false;
    double default_value = 0.0;
    std::string help;
};

struct GridSpec {
    std::size_t n = 1024;
    double dx = 0.0;
    double center = 0.0;
};

struct ScenarioConfig {
    std::string scenario;
    GridSpec grid;
    std::uint64_t frames = 1000;
    std::uint64_t seed = 1;
    // Every schema parameter after defaults; lengths in meters.
    std::map<std::string, double> params;
    std::vector<std::string> outputs;

    double get(const std::string& key) const;
    // Stable text form of all values that influence a run.
    std::string canonical() const;
    std::string hash_hex() const;
};

// "16cm" -> 0.16. The unit suffix is mandatory.
double parse_length(const std::string& key, const std::string& text, int line = 0);
double parse_number(const std::string& key, const std::string& text, int line = 0);
std::uint64_t parse_count(const std::string& key, const std::string& text, int line = 0);

ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

// Fills defaults and checks a key=value parameter map against a schema.
std::map<std::string, double> apply_schema(const std::vector<ParamSpec>& schema,
                                           const std::map<std::string, std::pair<std::string, int>>& raw,
                                           const std::string& owner);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace incoh
