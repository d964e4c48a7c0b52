#pragma once

#include <map>
#include <string>
#include <vector>

namespace incoh {

struct CalcRow {
    std::string key;
    double value = 0.0;
    std::string detail;
};

struct CalcResult {
    std::string kind;
    std::string key_label = "quantity";
    std::vector<CalcRow> rows;

    const CalcRow* find(const std::string& key) const;
};

std::vector<std::string> calc_kinds();

// args maps key to value text with units ("16cm"); a value naming another key copies it.
// Throws ConfigError for unknown kinds, unknown keys and missing units.
CalcResult calc(const std::string& kind, const std::map<std::string, std::string>& args);

// "key=value" tokens from the command line.
std::map<std::string, std::string> parse_calc_args(const std::vector<std::string>& tokens);

std::string format_calc_csv(const CalcResult& r);

}  // namespace incoh
