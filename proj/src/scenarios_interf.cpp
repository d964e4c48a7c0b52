#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "incoh/montecarlo.hpp"
#include "incoh/pipeline.hpp"
#include "incoh/spectrum.hpp"
#include "scenario_util.hpp"

namespace incoh {

namespace {
const cplx I(0.0, 1.0);

CVec plane_wave(const Grid& g) { return CVec::Ones(static_cast<Eigen::Index>(g.n)); }

// Arm with an object between two free-space segments, dropping zero-length segments.
Arm object_between(double before, const Element& object, double after) {
    Arm a;
    if (before > 0.0) a.elements.push_back(el::FreeSpace{before});
    a.elements.push_back(object);
    if (after > 0.0) a.elements.push_back(el::FreeSpace{after});
    return a;
}

struct CrossEstimate {
    CVec mean;
    RVec sigma;
};

CrossEstimate cross_monte_carlo(const Arm& a1, const Arm& a2, const Grid& g, double k, const MonteCarloOptions& mc) {
    ThermalSetup s;
    s.arm1 = a1;
    s.arm2 = a2;
    s.source = g;
    s.detect = g;
    s.k = k;
    s.seed = mc.seed;
    s.mode = mc.sampling;
    TwoArmMonteCarlo engine(s);
    AccumulatorLayout layout;
    layout.n1 = g.n;
    layout.n2 = g.n;
    layout.cross = true;
    McRun r;
    r.frames = mc.frames;
    r.workers = mc.workers;
    const CorrelationAccumulator acc = engine.run(layout, r);
    return {acc.mean_cross(), mc.frames > 1 ? acc.cross_sigma() : RVec::Zero(static_cast<Eigen::Index>(g.n))};
}

double rel_variance(const CVec& v) {
    const cplx m = v.mean();
    const double var = (v.array() - m).abs2().mean();
    return var / std::norm(m);
}

G1Options g1_opts(const MonteCarloOptions& mc) {
    G1Options o;
    o.mode = mc.sampling;
    return o;
}
}  // namespace

CVec double_slit_profile(const Grid& g, double b, double d, double phase2) {
    return element_profile(el::DoubleSlit{b, d, phase2}, g);
}

el::Transmittance double_slit_object(const Grid& g, double b, double d, double phase2) {
    return el::Transmittance{g, double_slit_profile(g, b, d, phase2)};
}

UnequalPathResult unequal_path(const UnequalPathParams& p, const MonteCarloOptions& mc) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    UnequalPathResult r;
    r.Z = unequal_path_length(p.z_o, p.z_r);
    const Arm ref{el::FreeSpace{p.z_r}};
    const Arm obj{el::DoubleSlit{p.b, p.d}, el::FreeSpace{p.z_o}};
    r.gate = temporal_coherence_gate(obj.optical_path(), ref.optical_path(), p.coherence_length);
    r.x = g.coords();
    r.oracle = analytic_g1_cut(ref, obj, g, g, k, g1_opts(mc));

    const CVec eo = Pipeline(obj, g, g, k, mc.sampling).apply(plane_wave(g));
    const CVec er = Pipeline(ref, g, g, k, mc.sampling).apply(plane_wave(g));
    r.coherent_object = eo.cwiseAbs2();
    r.coherent_cross = er.conjugate().cwiseProduct(eo);
    r.expected_coherent_period = p.lambda * p.z_o / p.d;
    r.period_coherent = dominant_period(r.coherent_object, g.dx).period;

    if (std::isfinite(r.Z.value)) r.expected_period = p.lambda * std::abs(r.Z.value) / p.d;
    if (!r.gate.pass) {
        r.oracle.setZero();
        return r;
    }
    r.period_oracle = dominant_period(detail::abs2(r.oracle), g.dx).period;
    if (mc.frames > 0) {
        const auto e = cross_monte_carlo(ref, obj, g, k, mc);
        r.mc = e.mean;
        r.mc_sigma = e.sigma;
        r.period_mc = dominant_period(detail::abs2(r.mc), g.dx).period;
    }
    return r;
}

WashoutResult washout(const WashoutParams& p, double a, const MonteCarloOptions& mc) {
    if (!(a >= 0.0) || !(a < p.z)) throw std::invalid_argument("object placement must lie in [0, z)");
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const Arm ref{el::FreeSpace{p.z}};
    const Arm obj = object_between(a, el::DoubleSlit{p.b, p.d}, p.z - a);
    WashoutResult r;
    r.a = a;
    r.oracle = analytic_g1_cut(ref, obj, g, g, k, g1_opts(mc));
    r.rel_variance = rel_variance(r.oracle);
    if (mc.frames > 1) {
        const auto e = cross_monte_carlo(ref, obj, g, k, mc);
        r.mc = e.mean;
        r.mc_sigma = e.sigma;
        const cplx m = r.mc.mean();
        double worst = 0.0;
        for (Eigen::Index i = 0; i < r.mc.size(); ++i)
            if (r.mc_sigma[i] > 0.0) worst = std::max(worst, std::abs(r.mc[i] - m) / r.mc_sigma[i]);
        r.mc_max_z = worst;
    }
    return r;
}

FirstOrderGhostResult first_order_ghost(const FirstOrderGhostScenario& p, const MonteCarloOptions& mc) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    FirstOrderGhostResult r;
    const el::Transmittance t = double_slit_object(g, p.b, p.d, p.phase2);
    r.object = t.profile;
    r.x = g.coords();
    r.prediction = ghost_image_first_order(p.geom, g, t.profile, g, k);

    const Arm a1 = ghost_first_order_arm1(p.geom, t);
    Arm a2 = ghost_first_order_arm2(p.geom);
    // The overall phase of the cross term depends on sub-wavelength path details; it is
    // fixed once against the predicted image and then held by a path offset in arm 2.
    const CVec raw = analytic_g1_cut(a1, a2, g, g, k, g1_opts(mc));
    const double phi = std::arg(r.prediction.image.dot(raw));
    const double lambda = p.lambda;
    double delta = -phi / k;
    if (p.negative) delta += lambda / 2.0;
    delta = std::remainder(delta, lambda);
    r.alignment_offset = delta;
    a2.elements.push_back(el::PathOffset{delta});
    r.oracle = analytic_g1_cut(a1, a2, g, g, k, g1_opts(mc));

    Arm b1{el::FreeSpace{p.geom.z0}, t};
    Arm b2 = a2;
    strip_common_free_space(b1, b2);
    const CMat h1 = response_or_identity(b1, g, g, k, std::size_t(1) << 24, mc.sampling);
    const CMat h2 = response_or_identity(b2, g, g, k, std::size_t(1) << 24, mc.sampling);
    r.bucket = bucket_ghost_image(h1, h2, g.dx, g.dx);

    if (mc.frames > 0) {
        const auto e = cross_monte_carlo(a1, a2, g, k, mc);
        r.mc = e.mean;
        r.mc_sigma = e.sigma;
    }
    return r;
}

GlassRodScenarioResult glass_rod(const GlassRodParams& p, double z_o1) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    GlassRodScenarioResult r;
    r.z_o1 = z_o1;
    r.lengths = glass_rod_length(p.l, p.n_rod, p.z_o, z_o1);
    if (!(z_o1 >= 0.0) || !(z_o1 < p.z_o)) throw std::invalid_argument("z_o1 must lie in [0, z_o)");
    const el::Transmittance t = double_slit_object(g, p.b, p.d, p.phase2);
    const Arm obj = object_between(z_o1, t, p.z_o - z_o1);
    Arm ref;
    if (r.lengths.z_r - p.l > 0.0) ref.elements.push_back(el::FreeSpace{r.lengths.z_r - p.l});
    ref.elements.push_back(el::Medium{p.l, p.n_rod});
    r.x = g.coords();
    r.oracle = analytic_g1_cut(ref, obj, g, g, k);
    const RVec a = t.profile.cwiseAbs();
    const RVec b = r.oracle.cwiseAbs();
    r.image_overlap = a.dot(b) / (a.norm() * b.norm());
    return r;
}

FzpResult fzp_triangular(const FzpParams& p) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const Arm a1{el::FreeSpace{p.z}, el::Afocal{p.f1, p.f2}};
    const Arm a2{el::FreeSpace{p.z}, el::Afocal{p.f2, p.f1}};
    const CMat h1 = arm_response(a1, g, g, k);
    const CMat h2 = arm_response(a2, g, g, k);
    const double m1 = -p.f2 / p.f1, m2 = -p.f1 / p.f2;
    FzpResult r;
    r.F = p.z * p.f1 * p.f1 * p.f2 * p.f2 / (std::pow(p.f1, 4) - std::pow(p.f2, 4));
    r.ring_center = p.x_s / (1.0 / m1 + 1.0 / m2);
    r.x = g.coords();
    const long js = g.index_of(p.x_s);
    if (js < 0 || js >= static_cast<long>(g.n)) throw std::invalid_argument("point source lies outside the grid");
    const CVec c1 = h1.col(js), c2 = h2.col(js);
    r.intensity = (p.r * c1 + p.t * c2).cwiseAbs2();
    const double xs = g.x(static_cast<std::size_t>(js));
    const double A1 = p.r * std::abs(c1[0]), A2 = p.t * std::abs(c2[0]);
    r.visibility = 2.0 * A1 * A2 / (A1 * A1 + A2 * A2);
    r.model.resize(r.x.size());
    for (Eigen::Index i = 0; i < r.x.size(); ++i) {
        const double x = r.x[i];
        const double u1 = x / m1 - xs, u2 = x / m2 - xs;
        const double phase = k / (2.0 * p.z) * (u2 * u2 - u1 * u1);
        r.model[i] = A1 * A1 + A2 * A2 + 2.0 * A1 * A2 * std::cos(phase);
    }
    r.model_correlation = pearson(r.intensity, r.model);

    G1Options o;
    o.rebase = false;
    o.source_intensity = element_profile(el::Slit{p.object_b, p.x_s}, g).real();
    r.encoding = (h1.conjugate().cwiseProduct(h2) * o.source_intensity.cast<cplx>()) * g.dx;
    const double q_scale = k * (1.0 / m2 - 1.0 / m1) / p.z;
    r.encoding_oracle.resize(r.x.size());
    for (Eigen::Index i = 0; i < r.x.size(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < g.n; ++j) {
            const double w = o.source_intensity[static_cast<Eigen::Index>(j)];
            if (w != 0.0) s += w * std::exp(-I * (q_scale * r.x[i] * g.x(j)));
        }
        r.encoding_oracle[i] = std::abs(s) * g.dx;
    }
    r.encoding_correlation = pearson(r.encoding.cwiseAbs(), r.encoding_oracle);
    return r;
}

LenslessResult lensless_fourier(const LenslessParams& p, const MonteCarloOptions& mc) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const auto n = static_cast<Eigen::Index>(g.n);
    const RVec obj = element_profile(el::Slit{p.b, p.x0}, g).real();
    for (Eigen::Index j = 0; j < n; ++j)
        if (obj[j] != 0.0 && (j == 0 || obj[n - j] != 0.0))
            throw std::invalid_argument("object and its mirror image overlap or leave the grid");
    const auto kern = PropagationKernel::vacuum(p.z);
    LenslessResult r;
    r.x = g.coords();
    r.intensity = RVec::Zero(n);
    r.oracle = RVec::Zero(n);
    const double h2 = std::norm(kernel_prefactor(k, p.z));
    for (Eigen::Index j = 1; j < n; ++j) {
        if (obj[j] == 0.0) continue;
        const double xj = g.x(static_cast<std::size_t>(j));
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = r.x[i];
            const cplx h = kernel_value(k, kern, x - xj) + kernel_value(k, kern, x + xj);
            r.intensity[i] += obj[j] * std::norm(h) * g.dx;
            r.oracle[i] += obj[j] * 2.0 * h2 * (1.0 + std::cos(2.0 * k * x * xj / p.z)) * g.dx;
        }
    }
    r.correlation = pearson(r.intensity, r.oracle);

    if (mc.frames > 0) {
        const Pipeline prop(Arm{el::FreeSpace{p.z}}, g, g, k, mc.sampling);
        ThermalEnsemble ens;
        ens.k = k;
        ens.seed = mc.seed;
        ens.grid = g;
        const RVec amp = obj.cwiseSqrt();
        auto field = [&](std::uint64_t first, std::size_t count) {
            CMat s = thermal_block(ens, first, count);
            s = amp.cast<cplx>().asDiagonal() * s;
            CMat m = s;
            for (Eigen::Index j = 1; j < n; ++j) m.row(j) += s.row(n - j);
            return prop.apply(m);
        };
        AccumulatorLayout layout{g.n, g.n, {}, false, false};
        const double scale = std::max(std::pow(field(0, 1).cwiseAbs2().mean(), 2.0), 1e-300);
        McRun run;
        run.frames = mc.frames;
        run.workers = mc.workers;
        const CorrelationAccumulator acc =
            parallel_blocks(CorrelationAccumulator(layout, scale), run,
                            [&](std::uint64_t first, std::size_t count, CorrelationAccumulator& a) {
                                const Eigen::MatrixXd i = field(first, count).cwiseAbs2();
                                a.accumulate(i, i);
                            });
        r.mc = acc.mean_I1();
    }
    return r;
}

namespace detail {

namespace {
UnequalPathParams unequal_params(const ScenarioConfig& c) {
    UnequalPathParams p;
    p.z_o = c.get("z_o");
    p.z_r = c.get("z_r");
    p.b = c.get("b");
    p.d = c.get("d");
    p.lambda = c.get("lambda");
    p.coherence_length = c.get("coherence_length");
    p.grid = grid_of(c);
    return p;
}

void coherence_gate_report(RunOutputs& out, const CoherenceGate& gate) {
    out.gate("temporal_coherence_gate", gate.mismatch, gate.pass,
             gate.pass ? "" : "path mismatch exceeds the coherence length; interference products zeroed");
}

void two_arm_outputs(RunOutputs& out, const std::string& base, const Arm& a1, const Arm& a2, const Grid& g,
                     double k, const MonteCarloOptions& mc, bool gate_ok, double expected_period,
                     bool fringes = true) {
    CVec oracle = analytic_g1_cut(a1, a2, g, g, k, g1_opts(mc));
    if (!gate_ok) oracle.setZero();
    const RVec x = g.coords();
    out.tables.push_back(complex_table(base.empty() ? "oracle" : base + "_oracle", x, oracle));
    if (!gate_ok) return;
    const double p_or = fringes ? dominant_period(abs2(oracle), g.dx).period : 0.0;
    if (fringes) out.info("period_oracle_m", p_or);
    if (expected_period > 0.0) out.info("period_expected_m", expected_period);
    if (mc.frames > 0) {
        const auto e = cross_monte_carlo(a1, a2, g, k, mc);
        out.tables.push_back(complex_table(base.empty() ? "mc" : base + "_mc", x, e.mean));
        if (fringes) {
            const double p_mc = dominant_period(abs2(e.mean), g.dx).period;
            out.check("period_mc_m", p_mc, std::abs(p_mc / p_or - 1.0) <= 0.02, "within 2% of the oracle period");
        } else {
            out.info("mc_rel_variance", rel_variance(e.mean));
        }
        RVec z(e.mean.size());
        for (Eigen::Index i = 0; i < z.size(); ++i)
            z[i] = e.sigma[i] > 0.0 ? std::abs(e.mean[i] - oracle[i]) / e.sigma[i] : 0.0;
        out.info("mc_rms_z", std::sqrt(z.squaredNorm() / static_cast<double>(z.size())),
                 "rms of |mc - oracle| / sigma");
    }
}
}  // namespace

RunOutputs run_unequal_path(const ScenarioConfig& c, const RunOptions& o) {
    const UnequalPathParams p = unequal_params(c);
    const MonteCarloOptions mc = mc_of(c, o);
    const auto r = unequal_path(p, mc);
    RunOutputs out;
    coherence_gate_report(out, r.gate);
    out.info("Z_m", r.Z.value, regime_name(r.Z.regime));
    sampling_report(out, p.grid, wavenumber(p.lambda), {{"z_o", p.z_o}, {"z_r", p.z_r}});
    out.tables.push_back(complex_table("oracle", r.x, r.oracle));
    out.tables.push_back(real_table("coherent_object", r.x, r.coherent_object));
    out.tables.push_back(complex_table("coherent_cross", r.x, r.coherent_cross));
    out.info("period_coherent_m", r.period_coherent, "dominant period of |E_o|^2");
    out.info("period_coherent_expected_m", r.expected_coherent_period);
    if (!r.gate.pass) return out;
    if (r.expected_period > 0.0) {
        out.info("period_expected_m", r.expected_period, "lambda |Z| / d");
        out.check("period_oracle_m", r.period_oracle, std::abs(r.period_oracle / r.expected_period - 1.0) <= 0.02);
    }
    if (r.mc.size() > 0) {
        out.tables.push_back(complex_table("mc", r.x, r.mc));
        out.check("period_mc_m", r.period_mc, std::abs(r.period_mc / r.period_oracle - 1.0) <= 0.02,
                  "port-differenced estimate vs oracle");
    }
    return out;
}

RunOutputs run_lens_unequal_path(const ScenarioConfig& c, const RunOptions& o) {
    const double f_o = c.get("f_o"), f_r = c.get("f_r"), b = c.get("b"), d = c.get("d");
    const double lambda = c.get("lambda");
    const double k = wavenumber(lambda);
    const Grid g = grid_of(c);
    const MonteCarloOptions mc = mc_of(c, o);
    RunOutputs out;
    const auto feff = lens_pair_focal(f_o, f_r);
    out.info("f_eff_m", feff.value, regime_name(feff.regime));
    const Arm obj{el::DoubleSlit{b, d}, el::FocalPlaneLens{f_o}};
    const Arm ref{el::FocalPlaneLens{f_r}};
    const auto gate = temporal_coherence_gate(obj.optical_path(), ref.optical_path(), c.get("coherence_length"));
    coherence_gate_report(out, gate);
    two_arm_outputs(out, "", ref, obj, g, k, mc, gate.pass,
                    std::isfinite(feff.value) ? lambda * std::abs(feff.value) / d : 0.0);
    const CVec eo = Pipeline(obj, g, g, k, mc.sampling).apply(plane_wave(g));
    const CVec er = Pipeline(ref, g, g, k, mc.sampling).apply(plane_wave(g));
    const RVec x = g.coords();
    out.tables.push_back(real_table("coherent_object", x, eo.cwiseAbs2()));
    out.tables.push_back(real_table("coherent_reference", x, er.cwiseAbs2()));
    return out;
}

RunOutputs run_equal_path_lens(const ScenarioConfig& c, const RunOptions& o) {
    const double f = c.get("f"), b = c.get("b"), d = c.get("d"), lambda = c.get("lambda");
    const bool lens = c.get("lens") != 0.0;
    const bool pinhole = c.get("pinhole") != 0.0;
    const double k = wavenumber(lambda);
    const Grid g = grid_of(c);
    const MonteCarloOptions mc = mc_of(c, o);
    RunOutputs out;
    const Arm obj = lens ? Arm{el::DoubleSlit{b, d}, el::FocalPlaneLens{f}} : Arm{el::DoubleSlit{b, d}, el::FreeSpace{2.0 * f}};
    const Arm ref{el::FreeSpace{2.0 * f}};
    out.gate("equal_optical_path", obj.optical_path() - ref.optical_path(),
             std::abs(obj.optical_path() - ref.optical_path()) <= 1e-12);
    sampling_report(out, g, k, {{"2f", 2.0 * f}});
    const RVec x = g.coords();
    const CVec eo = Pipeline(obj, g, g, k, mc.sampling).apply(plane_wave(g));
    const CVec er = Pipeline(ref, g, g, k, mc.sampling).apply(plane_wave(g));
    out.tables.push_back(complex_table("coherent_cross", x, er.conjugate().cwiseProduct(eo)));
    out.tables.push_back(real_table("coherent_object", x, eo.cwiseAbs2()));
    if (pinhole) {
        out.info("source", 0.0, "pinhole: spatially coherent plane wave, no ensemble");
        return out;
    }
    const CVec oracle = analytic_g1_cut(ref, obj, g, g, k, g1_opts(mc));
    const double rv = rel_variance(oracle);
    if (!lens) {
        out.check("washout_rel_variance", rv, rv <= 1e-9, "lens removed: both arms diffract alike");
    } else {
        out.info("oracle_rel_variance", rv);
    }
    two_arm_outputs(out, "", ref, obj, g, k, mc, true, lens ? lambda * 2.0 * f / d : 0.0, lens);
    return out;
}


RunOutputs run_glass_rod(const ScenarioConfig& c, const RunOptions& o) {
    GlassRodParams p;
    p.l = c.get("l");
    p.n_rod = c.get("n_rod");
    p.z_o = c.get("z_o");
    p.b = c.get("b");
    p.d = c.get("d");
    p.phase2 = c.get("phase2");
    p.lambda = c.get("lambda");
    p.grid = grid_of(c);
    (void)o;
    RunOutputs out;
    const auto r = glass_rod(p, c.get("z_o1"));
    out.gate("equal_path_identity", r.lengths.identity_residual, r.lengths.identity_ok);
    out.info("z_r_m", r.lengths.z_r);
    out.info("z_bar_m", r.lengths.z_bar);
    out.info("Z_eff_m", r.lengths.z_eff.value, regime_name(r.lengths.z_eff.regime));
    out.info("image_overlap", r.image_overlap, "normalized overlap of |G| with |T|");
    out.tables.push_back(complex_table("oracle", r.x, r.oracle));
    const std::vector<double> sweep = {0.310, 0.285, 0.242, 0.200, 0.106};
    Table t;
    t.name = "zeff_sweep";
    t.x_label = "z_o1_m";
    t.x.resize(static_cast<Eigen::Index>(sweep.size()));
    t.value.resize(t.x.size());
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const auto gr = glass_rod_length(p.l, p.n_rod, p.z_o, sweep[i]);
        t.x[static_cast<Eigen::Index>(i)] = sweep[i];
        t.value[static_cast<Eigen::Index>(i)] = std::isfinite(gr.z_eff.value) ? gr.z_eff.value : 0.0;
    }
    out.tables.push_back(t);
    return out;
}

RunOutputs run_first_order_ghost(const ScenarioConfig& c, const RunOptions& o) {
    FirstOrderGhostScenario p;
    p.geom = {c.get("f1"), c.get("f2"), c.get("z0"), c.get("z1"), c.get("z2")};
    p.b = c.get("b");
    p.d = c.get("d");
    p.phase2 = c.get("phase2");
    p.lambda = c.get("lambda");
    p.negative = c.get("negative") != 0.0;
    p.grid = grid_of(c);
    const MonteCarloOptions mc = mc_of(c, o);
    RunOutputs out;
    const auto r = first_order_ghost(p, mc);
    out.gate("imaging_equation", r.prediction.imaging_residual, r.prediction.imaging_ok,
             "1/(z1 - z0) + 1/z2 - 1/f2 in 1/m");
    out.gate("equal_optical_path", r.prediction.path_mismatch, std::abs(r.prediction.path_mismatch) <= 1e-9);
    out.info("magnification", r.prediction.magnification);
    out.info("alignment_offset_m", r.alignment_offset);
    const double ov = std::abs(normalized_overlap(r.prediction.image, r.oracle));
    out.check("oracle_image_overlap", ov, ov >= 0.98);
    out.tables.push_back(complex_table("object", r.x, r.object));
    out.tables.push_back(complex_table("predicted", r.x, r.prediction.image));
    out.tables.push_back(complex_table("oracle", r.x, r.oracle));
    out.tables.push_back(real_table("bucket", r.x, r.bucket));
    if (r.mc.size() > 0) out.tables.push_back(complex_table("mc", r.x, r.mc));
    return out;
}

RunOutputs run_fzp_triangular(const ScenarioConfig& c, const RunOptions&) {
    FzpParams p;
    p.z = c.get("z");
    p.f1 = c.get("f1");
    p.f2 = c.get("f2");
    p.x_s = c.get("x_s");
    p.r = c.get("r");
    p.t = c.get("t");
    p.object_b = c.get("object_b");
    p.lambda = c.get("lambda");
    p.grid = grid_of(c);
    const auto r = fzp_triangular(p);
    RunOutputs out;
    out.info("F_m", r.F, "z f1^2 f2^2 / (f1^4 - f2^4)");
    out.info("ring_center_m", r.ring_center);
    out.info("visibility", r.visibility, "2 A1 A2 / (A1^2 + A2^2)");
    out.check("fzp_model_correlation", r.model_correlation, r.model_correlation >= 0.99);
    out.check("encoding_correlation", r.encoding_correlation, r.encoding_correlation >= 0.99);
    out.tables.push_back(real_table("fzp_intensity", r.x, r.intensity));
    out.tables.push_back(real_table("fzp_model", r.x, r.model));
    out.tables.push_back(complex_table("encoding", r.x, r.encoding));
    out.tables.push_back(real_table("encoding_oracle", r.x, r.encoding_oracle));
    return out;
}

RunOutputs run_lensless_fourier(const ScenarioConfig& c, const RunOptions& o) {
    LenslessParams p;
    p.z = c.get("z");
    p.b = c.get("b");
    p.x0 = c.get("x0");
    p.lambda = c.get("lambda");
    p.grid = grid_of(c);
    const MonteCarloOptions mc = mc_of(c, o);
    const auto r = lensless_fourier(p, mc);
    RunOutputs out;
    sampling_report(out, p.grid, wavenumber(p.lambda), {{"z", p.z}});
    out.check("oracle_correlation", r.correlation, r.correlation >= 0.999);
    out.info("fringe_period_expected_m", p.lambda * p.z / (2.0 * p.x0), "lambda z / (2 x0)");
    out.tables.push_back(real_table("intensity", r.x, r.intensity));
    out.tables.push_back(real_table("oracle", r.x, r.oracle));
    if (r.mc.size() > 0) {
        out.tables.push_back(real_table("mc_intensity", r.x, r.mc));
        const double pc = pearson(r.mc, r.oracle);
        out.info("mc_correlation", pc);
    }
    return out;
}

}  // namespace detail

}  // namespace incoh
