#include "incoh/registry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "scenario_util.hpp"

namespace incoh {

namespace detail {

Grid grid_of(const ScenarioConfig& c) { return make_grid(c.grid.n, c.grid.dx, c.grid.center); }

MonteCarloOptions mc_of(const ScenarioConfig& c, const RunOptions& o) {
    MonteCarloOptions m;
    m.frames = o.oracle_only ? 0 : c.frames;
    m.seed = c.seed;
    m.workers = o.workers;
    m.sampling = o.strict_sampling ? SamplingMode::strict : SamplingMode::advisory;
    return m;
}

Table real_table(const std::string& name, const RVec& x, const RVec& v, const std::string& x_label) {
    Table t;
    t.name = name;
    t.x_label = x_label;
    t.x = x;
    t.value = v;
    return t;
}

Table complex_table(const std::string& name, const RVec& x, const CVec& v, const std::string& x_label) {
    Table t = real_table(name, x, v.real(), x_label);
    t.value_im = v.imag();
    return t;
}

RVec abs2(const CVec& v) { return v.cwiseAbs2(); }
RVec re(const CVec& v) { return v.real(); }

void sampling_report(RunOutputs& out, const Grid& g, double k,
                     const std::vector<std::pair<std::string, double>>& distances) {
    for (const auto& [name, z] : distances) {
        const SamplingCheck s = check_sampling(g, k, z);
        out.info("sampling_margin_" + name, s.limit / s.dx, s.describe());
    }
}

}  // namespace detail

namespace {

ParamSpec L(const std::string& name, double def, const std::string& help = "") {
    return {name, ParamKind::length, false, def, help};
}
ParamSpec Lreq(const std::string& name, const std::string& help = "") {
    return {name, ParamKind::length, true, 0.0, help};
}
ParamSpec N(const std::string& name, double def, const std::string& help = "") {
    return {name, ParamKind::number, false, def, help};
}
ParamSpec Int(const std::string& name, double def, const std::string& help = "") {
    return {name, ParamKind::integer, false, def, help};
}

const ParamSpec kLambda = L("lambda", 632.8e-9, "wavelength");
const ParamSpec kSlitB = L("b", 125e-6, "slit width");
const ParamSpec kSlitD = L("d", 310e-6, "slit separation");

std::vector<ScenarioInfo> build() {
    using namespace detail;
    std::vector<ScenarioInfo> r;
    r.push_back({"fzp_triangular", "point source through a double afocal triangular interferometer; FZP and Fourier encoding",
                 {L("z", 1.0), L("f1", 0.10), L("f2", 0.075), L("x_s", 0.0), N("r", std::sqrt(0.5)), N("t", std::sqrt(0.5)),
                  L("object_b", 100e-6), kLambda},
                 {1024, 10e-6, 0.0}, 0, {"fzp_intensity", "fzp_model", "encoding", "encoding_oracle"}, run_fzp_triangular});
    r.push_back({"lensless_fourier_hologram", "incoherent object with its mirror image; fringes 1 + cos(2 k x x0 / z)",
                 {L("z", 0.5), L("b", 40e-6), L("x0", 250e-6), kLambda},
                 {1024, 10e-6, 0.0}, 1000, {"intensity", "oracle", "mc_intensity"}, run_lensless_fourier});
    r.push_back({"hbt_star", "intensity interferometry of a uniform disk; first zero of the correlation gives the angular size",
                 {L("D", 1e-3), L("z", 10.0), kLambda, Int("bins", 256), Int("separations", 160), L("max_separation", 0.0)},
                 {1024, 10e-6, 0.0}, 10000, {"analytic", "mc"}, run_hbt_star});
    r.push_back({"fano_two_source", "two independent point sources and two detectors; second-order fringes, flat first order",
                 {L("a", 1e-3), L("z", 1.0), kLambda, L("x2", 0.0), Int("fixed_modulus", 1)},
                 {512, 10e-6, 0.0}, 10000, {"first_order", "g2", "g2_mc", "first_order_mc"}, run_fano_two_source});
    r.push_back({"hom", "beamsplitter coincidences: kind II beta sweep, degenerate theta sweep, thermal and coherent inputs",
                 {N("I1", 1.0), N("I2", 1.0), Int("steps", 181)},
                 {1024, 10e-6, 0.0}, 10000,
                 {"kind2_beta_sweep", "degenerate_theta_sweep", "thermal_theta_sweep", "coherent_theta_sweep"}, run_hom});
    r.push_back({"two_color_doubleslit", "two-colour biphoton through a double slit; coincidence map and four cuts",
                 {L("lambda1", 760e-9), L("lambda2", 840e-9), kSlitD, L("z", 1.0), N("beta", 0.0), Int("kind", 1)},
                 {2048, 0.16e-3, 0.0}, 0, {"coincidence_map", "cut_a", "cut_b", "cut_c", "cut_d"}, run_two_color});
    r.push_back({"thermal_doubleslit", "partially coherent double slit at a lens focal plane; G1, G2 and the G2(x,-x) cut",
                 {kSlitB, kSlitD, L("f", 0.2), kLambda, N("W", 0.0, "normalized bandwidth; 0 means delta-correlated")},
                 {1024, 5e-6, 0.0}, 0, {"first_order", "coherent", "g2_anti", "g1_map", "g2_map", "visibility_sweep"},
                 run_thermal_doubleslit});
    r.push_back({"ghost_diffraction", "lensless ghost diffraction with entangled and thermal sources",
                 {L("z_o1", 0.10), L("z_o2", 0.20), L("z_r", 0.10), kSlitB, kSlitD, kLambda},
                 {2048, 5e-6, 0.0}, 0, {"object", "thermal_cut", "entangled_cut", "thermal_map", "entangled_map"},
                 run_ghost_diffraction});
    r.push_back({"ghost_imaging", "lens ghost imaging with a bucket detector, entangled and thermal",
                 {L("z_o", 0.15), L("f", 0.10), L("z1", 0.10), L("z2_entangled", 0.20), L("z2_thermal", 0.40), kSlitB,
                  kSlitD, kLambda},
                 {1024, 8e-6, 0.0}, 0, {"entangled_image", "thermal_image", "expected_entangled", "expected_thermal"},
                 run_ghost_imaging});
    r.push_back({"unequal_path", "unequal-path interferometer with a thermal source; two-port differencing",
                 {Lreq("z_o", "object arm length"), Lreq("z_r", "reference arm length"), Lreq("b", "slit width"),
                  Lreq("d", "slit separation"), Lreq("lambda", "wavelength"), L("coherence_length", 1.0)},
                 {2048, 6e-6, 0.0}, 10000, {"oracle", "mc", "coherent_object", "coherent_cross"}, run_unequal_path});
    r.push_back({"lens_unequal_path", "focal-plane lenses of different focal length in both arms",
                 {L("f_o", 0.075), L("f_r", 0.12), kSlitB, kSlitD, kLambda, L("coherence_length", 1.0)},
                 {1024, 5e-6, 0.0}, 1000, {"oracle", "mc", "coherent_object", "coherent_reference"}, run_lens_unequal_path});
    r.push_back({"equal_path_lens", "equal-path interferometer with a lens in the object arm",
                 {L("f", 0.19), kSlitB, kSlitD, kLambda, Int("lens", 1), Int("pinhole", 0)},
                 {1024, 6e-6, 0.0}, 1000, {"oracle", "mc", "coherent_cross", "coherent_object"}, run_equal_path_lens});
    r.push_back({"glass_rod", "equal-path interferometer with a glass rod in the reference arm",
                 {L("l", 0.155), N("n_rod", 1.5163), L("z_o", 0.418), L("z_o1", 0.285), kSlitB, kSlitD, N("phase2", 0.0),
                  kLambda},
                 {1024, 6e-6, 0.0}, 0, {"oracle", "zeff_sweep"}, run_glass_rod});
    r.push_back({"first_order_ghost_imaging", "first-order ghost imaging in an equal-path interferometer",
                 {L("f1", 0.15), L("f2", 0.075), L("z0", 0.015), L("z1", 0.165), L("z2", 0.15), kSlitB, kSlitD,
                  N("phase2", 0.0), kLambda, Int("negative", 0)},
                 {1024, 8e-6, 0.0}, 1000, {"object", "predicted", "oracle", "bucket", "mc"}, run_first_order_ghost});
    r.push_back({"nonlocal_doubleslit", "double slit split over two arms: entangled, thermal second and first order",
                 {kSlitB, kSlitD, L("open_w", 375e-6), kLambda, L("f", 0.10), L("z0", 0.20), L("z", 0.50),
                  L("z0_first", 0.01), L("z1_first", 0.38), L("f_first", 0.19)},
                 {2048, 7.5e-6, 0.0}, 0,
                 {"entangled", "thermal_second_order", "thermal_first_order", "entangled_reference",
                  "thermal_second_order_reference", "thermal_first_order_reference", "entangled_marginal",
                  "thermal_second_order_marginal", "thermal_first_order_marginal"},
                 run_nonlocal_doubleslit});
    return r;
}

}  // namespace

const std::vector<ScenarioInfo>& registry() {
    static const std::vector<ScenarioInfo> r = build();
    return r;
}

const ScenarioInfo& find_scenario(const std::string& name) {
    for (const auto& s : registry())
        if (s.name == name) return s;
    throw ConfigError("unknown scenario '" + name + "'");
}

RunOutputs run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
    const ScenarioInfo& info = find_scenario(cfg.scenario);
    RunOutputs out = info.run(cfg, opt);
    out.info("grid_n", static_cast<double>(cfg.grid.n));
    out.info("grid_dx_m", cfg.grid.dx);
    out.info("grid_center_m", cfg.grid.center);
    out.info("frames", opt.oracle_only ? 0.0 : static_cast<double>(cfg.frames), opt.oracle_only ? "oracle only" : "");
    return out;
}

}  // namespace incoh
