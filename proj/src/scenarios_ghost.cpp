#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "incoh/spectrum.hpp"
#include "scenario_util.hpp"

namespace incoh {

namespace {
RVec scaled_object(const Grid& g, const CVec& t, double m) {
    RVec out(static_cast<Eigen::Index>(g.n));
    for (std::size_t i = 0; i < g.n; ++i) {
        const long j = g.index_of(g.x(i) / m);
        out[static_cast<Eigen::Index>(i)] = (j >= 0 && j < static_cast<long>(g.n)) ? std::norm(t[j]) : 0.0;
    }
    return out;
}
}  // namespace

Arm ghost_object_arm(const GhostDiffractionParams& p, const el::Transmittance& t) {
    Arm a;
    if (p.z_o1 > 0.0) a.elements.push_back(el::FreeSpace{p.z_o1});
    a.elements.push_back(t);
    a.elements.push_back(el::FreeSpace{p.z_o2});
    return a;
}

GhostDiffractionResult ghost_diffraction(const GhostDiffractionParams& p, bool entangled) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const el::Transmittance t = double_slit_object(g, p.b, p.d);
    const Arm obj = ghost_object_arm(p, t);
    const Arm ref{el::FreeSpace{p.z_r}};
    GhostDiffractionResult r;
    r.z_thermal = ghost_thermal_length(p.z_o1, p.z_o2, p.z_r);
    r.z_entangled = ghost_entangled_length(p.z_o1, p.z_o2, p.z_r);
    r.x = g.coords();
    r.object = t.profile;
    r.thermal = analytic_g1(obj, ref, g, g, k);
    if (entangled) {
        const CMat ho = arm_response(obj, g, g, k);
        const CMat hr = arm_response(ref, g, g, k);
        const auto bp = factorized_biphoton(g, CVec::Ones(static_cast<Eigen::Index>(g.n)), k, k);
        r.entangled = joint_propagate(bp, ho, hr, g).dense;
    }
    return r;
}

GhostImagingResult ghost_imaging(const GhostImagingParams& p) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const el::Transmittance t = double_slit_object(g, p.b, p.d);
    GhostImagingResult r;
    r.x = g.coords();
    r.entangled_check = entangled_ghost_image_check(p.z_o, p.z1, p.z2_entangled, p.f);
    r.thermal_residual = 1.0 / p.z_o + 1.0 / (p.z2_thermal - p.z1) - 1.0 / p.f;
    r.thermal_ok = std::abs(r.thermal_residual) * std::abs(p.f) <= 1e-6;
    r.thermal_magnification = -(p.z2_thermal - p.z1) / p.z_o;

    const Arm ref{el::FreeSpace{p.z1}};
    const Arm obj_en{el::FreeSpace{p.z2_entangled}, el::ThinLens{p.f}, el::FreeSpace{p.z_o}, t};
    const CMat ho = arm_response(obj_en, g, g, k);
    const CMat hr = arm_response(ref, g, g, k);
    const auto bp = factorized_biphoton(g, CVec::Ones(static_cast<Eigen::Index>(g.n)), k, k);
    const CMat amp = joint_propagate(bp, ho, hr, g).dense;
    r.entangled_image = amp.cwiseAbs2().colwise().sum().transpose() * g.dx;

    const Arm obj_th{el::FreeSpace{p.z2_thermal}, el::ThinLens{p.f}, el::FreeSpace{p.z_o}, t};
    const CMat gth = analytic_g1(obj_th, ref, g, g, k);
    r.thermal_image = gth.cwiseAbs2().colwise().sum().transpose() * g.dx;

    r.expected_entangled = scaled_object(g, t.profile, r.entangled_check.magnification);
    r.expected_thermal = scaled_object(g, t.profile, r.thermal_magnification);
    return r;
}

namespace detail {

RunOutputs run_ghost_diffraction(const ScenarioConfig& c, const RunOptions&) {
    GhostDiffractionParams p;
    p.z_o1 = c.get("z_o1");
    p.z_o2 = c.get("z_o2");
    p.z_r = c.get("z_r");
    p.b = c.get("b");
    p.d = c.get("d");
    p.lambda = c.get("lambda");
    p.grid = grid_of(c);
    const auto r = ghost_diffraction(p, true);
    RunOutputs out;
    out.info("Z_thermal_m", r.z_thermal.value, regime_name(r.z_thermal.regime));
    out.info("Z_entangled_m", r.z_entangled.value, regime_name(r.z_entangled.regime));
    sampling_report(out, p.grid, wavenumber(p.lambda), {{"z_o2", p.z_o2}, {"z_r", p.z_r}});
    const long c0 = p.grid.index_of(0.0);
    out.tables.push_back(complex_table("object", r.x, r.object));
    out.tables.push_back(complex_table("thermal_cut", r.x, r.thermal.row(c0).transpose(), "x2_m"));
    out.tables.push_back(complex_table("entangled_cut", r.x, r.entangled.row(c0).transpose(), "x2_m"));
    out.images.push_back({"thermal_map", r.thermal.cwiseAbs()});
    out.images.push_back({"entangled_map", r.entangled.cwiseAbs()});
    if (r.z_thermal.regime == Regime::imaging) {
        const double ov = support_overlap(r.thermal.row(c0).cwiseAbs().transpose(), r.object.cwiseAbs());
        out.check("thermal_image_support_overlap", ov, ov >= 0.99);
    }
    return out;
}

RunOutputs run_ghost_imaging(const ScenarioConfig& c, const RunOptions&) {
    GhostImagingParams p;
    p.z_o = c.get("z_o");
    p.f = c.get("f");
    p.z1 = c.get("z1");
    p.z2_entangled = c.get("z2_entangled");
    p.z2_thermal = c.get("z2_thermal");
    p.b = c.get("b");
    p.d = c.get("d");
    p.lambda = c.get("lambda");
    p.grid = grid_of(c);
    const auto r = ghost_imaging(p);
    RunOutputs out;
    out.gate("entangled_imaging_equation", r.entangled_check.residual, r.entangled_check.ok,
             "1/z_o + 1/(z1 + z2) - 1/f in 1/m");
    out.gate("thermal_imaging_equation", r.thermal_residual, r.thermal_ok, "1/z_o + 1/(z2 - z1) - 1/f in 1/m");
    out.info("entangled_magnification", r.entangled_check.magnification);
    out.info("thermal_magnification", r.thermal_magnification);
    out.info("entangled_image_correlation", pearson(r.entangled_image, r.expected_entangled));
    out.info("thermal_image_correlation", pearson(r.thermal_image, r.expected_thermal));
    out.tables.push_back(real_table("entangled_image", r.x, r.entangled_image));
    out.tables.push_back(real_table("thermal_image", r.x, r.thermal_image));
    out.tables.push_back(real_table("expected_entangled", r.x, r.expected_entangled));
    out.tables.push_back(real_table("expected_thermal", r.x, r.expected_thermal));
    return out;
}

}  // namespace detail

}  // namespace incoh
