#pragma once

#include <string>
#include <utility>
#include <vector>

#include "incoh/registry.hpp"
#include "incoh/scenarios.hpp"

namespace incoh::detail {

Grid grid_of(const ScenarioConfig& c);
MonteCarloOptions mc_of(const ScenarioConfig& c, const RunOptions& o);

Table real_table(const std::string& name, const RVec& x, const RVec& v, const std::string& x_label = "x_m");
Table complex_table(const std::string& name, const RVec& x, const CVec& v, const std::string& x_label = "x_m");
RVec abs2(const CVec& v);
RVec re(const CVec& v);

// Reports the chirp sampling margin lambda*Z/(span*dx) for each propagation distance.
void sampling_report(RunOutputs& out, const Grid& g, double k,
                     const std::vector<std::pair<std::string, double>>& distances);

RunOutputs run_fzp_triangular(const ScenarioConfig&, const RunOptions&);
RunOutputs run_lensless_fourier(const ScenarioConfig&, const RunOptions&);
RunOutputs run_unequal_path(const ScenarioConfig&, const RunOptions&);
RunOutputs run_lens_unequal_path(const ScenarioConfig&, const RunOptions&);
RunOutputs run_equal_path_lens(const ScenarioConfig&, const RunOptions&);
RunOutputs run_glass_rod(const ScenarioConfig&, const RunOptions&);
RunOutputs run_first_order_ghost(const ScenarioConfig&, const RunOptions&);

RunOutputs run_hbt_star(const ScenarioConfig&, const RunOptions&);
RunOutputs run_fano_two_source(const ScenarioConfig&, const RunOptions&);
RunOutputs run_hom(const ScenarioConfig&, const RunOptions&);
RunOutputs run_two_color(const ScenarioConfig&, const RunOptions&);
RunOutputs run_thermal_doubleslit(const ScenarioConfig&, const RunOptions&);
RunOutputs run_nonlocal_doubleslit(const ScenarioConfig&, const RunOptions&);

RunOutputs run_ghost_diffraction(const ScenarioConfig&, const RunOptions&);
RunOutputs run_ghost_imaging(const ScenarioConfig&, const RunOptions&);

}  // namespace incoh::detail
