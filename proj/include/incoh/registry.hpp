#pragma once

#include <functional>
#include <string>
#include <vector>

#include "incoh/config.hpp"
#include "incoh/outputs.hpp"

namespace incoh {

struct RunOptions {
    bool oracle_only = false;
    bool strict_sampling = false;
    unsigned workers = 0;
};

using ScenarioFn = std::function<RunOutputs(const ScenarioConfig&, const RunOptions&)>;

struct ScenarioInfo {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
    GridSpec grid;
    std::uint64_t frames = 1000;
    std::vector<std::string> products;
    ScenarioFn run;
};

const std::vector<ScenarioInfo>& registry();
// Throws ConfigError for an unknown name.
const ScenarioInfo& find_scenario(const std::string& name);

RunOutputs run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {});

}  // namespace incoh
