#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "incoh/montecarlo.hpp"
#include "incoh/pipeline.hpp"
#include "incoh/spectrum.hpp"
#include "scenario_util.hpp"

namespace incoh {

namespace {
const cplx I(0.0, 1.0);

std::vector<Eigen::Index> support(const CVec& t) {
    std::vector<Eigen::Index> s;
    for (Eigen::Index i = 0; i < t.size(); ++i)
        if (t[i] != cplx(0.0)) s.push_back(i);
    return s;
}

double omega_of(double lambda) { return 2.0 * kPi * kSpeedOfLight / lambda; }

// Mirror index of sample i about x = 0 on a centred grid.
Eigen::Index mirror(const Grid& g, Eigen::Index i) { return static_cast<Eigen::Index>(g.n) - i; }
}  // namespace

ThermalDoubleSlitResult thermal_doubleslit(const ThermalDoubleSlitParams& p, double W, bool maps) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const auto n = static_cast<Eigen::Index>(g.n);
    const CVec t = double_slit_profile(g, p.b, p.d);
    const auto s = support(t);
    const auto m = static_cast<Eigen::Index>(s.size());
    const CMat h = arm_response(Arm{el::FocalPlaneLens{p.f}}, g, g, k);
    CMat hs(n, m);
    for (Eigen::Index j = 0; j < m; ++j) hs.col(j) = h.col(s[static_cast<std::size_t>(j)]) * t[s[static_cast<std::size_t>(j)]];

    // Source covariance on the slit samples, in the G = sum conj(h) Gamma h^T dx^2 convention.
    Eigen::MatrixXd gamma(m, m);
    if (std::isinf(W)) {
        gamma = Eigen::MatrixXd::Identity(m, m) * (p.I0 / g.dx);
    } else {
        if (!(W > 0.0)) throw std::invalid_argument("normalized bandwidth W must be positive");
        const double w = 2.0 * kPi * W / p.d;
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) {
                const double dx = g.x(static_cast<std::size_t>(s[static_cast<std::size_t>(a)])) -
                                  g.x(static_cast<std::size_t>(s[static_cast<std::size_t>(b)]));
                gamma(a, b) = p.I0 * std::exp(-w * w * dx * dx / 2.0);
            }
    }
    const CMat left = (hs.conjugate() * gamma.cast<cplx>()) * (g.dx * g.dx);

    ThermalDoubleSlitResult r;
    r.W = W;
    r.x = g.coords();
    r.first_order = left.cwiseProduct(hs).rowwise().sum().real();
    r.coherent = (hs * CVec::Ones(m) * g.dx).cwiseAbs2();

    r.anti_x.resize(n - 1);
    r.g2_anti.resize(n - 1);
    r.g2_anti_fluct.resize(n - 1);
    for (Eigen::Index i = 1; i < n; ++i) {
        const Eigen::Index j = mirror(g, i);
        const cplx g12 = left.row(i).dot(hs.row(j).conjugate());
        r.anti_x[i - 1] = r.x[i];
        r.g2_anti_fluct[i - 1] = std::norm(g12);
        r.g2_anti[i - 1] = r.first_order[i] * r.first_order[j] + std::norm(g12);
    }
    r.period_g2 = dominant_period(r.g2_anti, g.dx).period;
    r.period_coherent = dominant_period(r.coherent, g.dx).period;
    const double mean = r.first_order.mean();
    r.first_order_rel_variance = (r.first_order.array() - mean).square().mean() / (mean * mean);

    const double P = p.lambda * p.f / p.d;
    const long c = g.index_of(0.0), q = g.index_of(P / 2.0);
    if (q >= 0 && q < n) {
        const double hi = r.first_order[c], lo = r.first_order[q];
        r.visibility = (hi - lo) / (hi + lo);
    }
    if (maps) {
        const CMat g1 = left * hs.transpose();
        r.g1_map = g1.cwiseAbs();
        r.g2_map = r.first_order * r.first_order.transpose() + g1.cwiseAbs2();
    }
    return r;
}

TwoColorResult two_color(const TwoColorParams& p, bool full_map) {
    const Grid& g = p.grid;
    const auto n = static_cast<Eigen::Index>(g.n);
    DiscreteBiphoton st{p.kind, p.beta, omega_of(p.lambda1), omega_of(p.lambda2)};
    validate(st);
    TwoColorResult r;
    r.x = g.coords();
    auto at = [&](double x1, double x2) { return two_color_doubleslit(st, x1, x2, p.d, p.z); };
    if (full_map) {
        r.map.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) r.map(i, j) = at(r.x[i], r.x[j]);
    }
    r.cut_a.resize(n);
    r.cut_b.resize(n);
    r.cut_c.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r.cut_a[i] = at(r.x[i], 0.0);
        r.cut_b[i] = at(0.0, r.x[i]);
        r.cut_c[i] = at(r.x[i], r.x[i]);
    }
    r.cut_d.resize(n - 1);
    for (Eigen::Index i = 1; i < n; ++i) r.cut_d[i - 1] = at(r.x[i], r.x[mirror(g, i)]);

    r.f_a = dominant_period(r.cut_a, g.dx).frequency;
    r.f_b = dominant_period(r.cut_b, g.dx).frequency;
    r.f_c = dominant_period(r.cut_c, g.dx).frequency;
    r.f_d = dominant_period(r.cut_d, g.dx).frequency;
    const double s = p.d / (2.0 * kPi * kSpeedOfLight * p.z);
    const double w1 = st.omega1, w2 = st.omega2;
    r.expected_a = w1 * s;
    r.expected_b = w2 * s;
    const bool kind1 = p.kind == BiphotonKind::I;
    r.expected_c = (kind1 ? w1 + w2 : std::abs(w1 - w2)) * s;
    r.expected_d = (kind1 ? std::abs(w1 - w2) : w1 + w2) * s;
    return r;
}

HbtMcResult hbt_monte_carlo(const HbtParams& p, const MonteCarloOptions& mc) {
    if (p.bins < 2 || p.separations < 4) throw std::invalid_argument("hbt needs at least 2 bins and 4 separations");
    const double k = wavenumber(p.lambda);
    const double R = p.D / 2.0;
    HbtMcResult r;
    r.theta_true = p.D / p.z;
    const double dc = kBesselJ1FirstZero * p.lambda * p.z / (kPi * p.D);
    const double dmax = p.max_separation > 0.0 ? p.max_separation : 2.0 * dc;
    std::vector<double> seps(p.separations);
    for (std::size_t m = 0; m < p.separations; ++m)
        seps[m] = dmax * static_cast<double>(m) / static_cast<double>(p.separations - 1);
    r.analytic = hbt_star(p.D, p.z, p.lambda, seps);
    if (mc.frames < 2) return r;

    // Disk projected onto one axis: chord-weighted bins.
    PointSourceSet src;
    src.seed = mc.seed;
    src.stats = AmplitudeStats::circular_gaussian;
    double wsum = 0.0;
    for (std::size_t s = 0; s < p.bins; ++s) {
        const double x = -R + (static_cast<double>(s) + 0.5) * p.D / static_cast<double>(p.bins);
        src.positions.push_back(x);
        src.weights.push_back(std::sqrt(std::max(0.0, 1.0 - (x / R) * (x / R))));
        wsum += src.weights.back();
    }
    for (auto& w : src.weights) w /= wsum;

    const auto M = static_cast<Eigen::Index>(p.separations);
    const auto B = static_cast<Eigen::Index>(p.bins);
    CMat prop(M, B);
    for (Eigen::Index m = 0; m < M; ++m)
        for (Eigen::Index s = 0; s < B; ++s) {
            const double u = seps[static_cast<std::size_t>(m)] - src.positions[static_cast<std::size_t>(s)];
            prop(m, s) = std::exp(I * (k * u * u / (2.0 * p.z)));
        }
    auto fields = [&](std::uint64_t first, std::size_t count) {
        CMat a(B, static_cast<Eigen::Index>(count));
        for (std::size_t c = 0; c < count; ++c) a.col(static_cast<Eigen::Index>(c)) = point_source_amplitudes(src, first + c);
        return CMat(prop * a);
    };
    AccumulatorLayout layout{p.separations, p.separations, {}, false, true};
    McRun run;
    run.frames = mc.frames;
    run.workers = mc.workers;
    const CorrelationAccumulator acc =
        parallel_blocks(CorrelationAccumulator(layout, 1.0), run,
                        [&](std::uint64_t first, std::size_t count, CorrelationAccumulator& a) {
                            const CMat e = fields(first, count);
                            const Eigen::MatrixXd in = e.cwiseAbs2();
                            a.accumulate(in, in);
                            CMat cross = e;
                            for (Eigen::Index c = 0; c < e.cols(); ++c) cross.col(c) *= std::conj(e(0, c));
                            a.accumulate_cross(cross);
                        });
    const CVec g = acc.mean_cross();
    const RVec sg = acc.cross_sigma();
    const RVec in = acc.mean_I1();
    r.mc.resize(M);
    r.mc_sigma.resize(M);
    for (Eigen::Index m = 0; m < M; ++m) {
        const double d = seps[static_cast<std::size_t>(m)];
        const double norm = std::sqrt(in[0] * in[m]);
        r.mc[m] = std::real(g[m] * std::exp(-I * (k * d * d / (2.0 * p.z)))) / norm;
        r.mc_sigma[m] = sg[m] / norm;
    }
    for (Eigen::Index m = 0; m + 1 < M; ++m) {
        if (r.mc[m] > 0.0 && r.mc[m + 1] <= 0.0) {
            const double d0 = seps[static_cast<std::size_t>(m)], d1 = seps[static_cast<std::size_t>(m + 1)];
            r.mc_first_zero = d0 + (d1 - d0) * r.mc[m] / (r.mc[m] - r.mc[m + 1]);
            break;
        }
    }
    if (r.mc_first_zero > 0.0) r.theta_mc = kBesselJ1FirstZero / kPi * p.lambda / r.mc_first_zero;
    return r;
}

FanoResult fano_two_source(const FanoParams& p, const MonteCarloOptions& mc) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const auto n = static_cast<Eigen::Index>(g.n);
    const std::vector<double> pos = {-p.a / 2.0, p.a / 2.0};
    auto phase = [&](double x, double s) { return std::exp(I * (k * (x - s) * (x - s) / (2.0 * p.z))); };
    const FanoMoments mom = p.stats == AmplitudeStats::fixed_modulus ? moments_coherent(1.0, 1.0) : moments_thermal(1.0, 1.0);
    FanoResult r;
    r.x = g.coords();
    r.first_order = RVec::Constant(n, 2.0);
    r.g2.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        TransferQuad q;
        q.phi << phase(r.x[i], pos[0]), phase(r.x[i], pos[1]), phase(p.x2, pos[0]), phase(p.x2, pos[1]);
        r.g2[i] = fano_coincidence(mom, q);
    }
    r.expected_period = p.lambda * p.z / p.a;
    r.period = dominant_period(r.g2, g.dx).period;
    if (mc.frames < 2) return r;

    PointSourceSet src;
    src.positions = pos;
    src.stats = p.stats;
    src.seed = mc.seed;
    CMat prop(n + 1, 2);
    for (Eigen::Index i = 0; i <= n; ++i)
        for (Eigen::Index s = 0; s < 2; ++s) prop(i, s) = phase(i < n ? r.x[i] : p.x2, pos[static_cast<std::size_t>(s)]);
    AccumulatorLayout layout{g.n, 1, {}, false, false};
    for (std::size_t i = 0; i < g.n; ++i) layout.pairs.emplace_back(i, 0);
    McRun run;
    run.frames = mc.frames;
    run.workers = mc.workers;
    const CorrelationAccumulator acc =
        parallel_blocks(CorrelationAccumulator(layout, 4.0), run,
                        [&](std::uint64_t first, std::size_t count, CorrelationAccumulator& a) {
                            CMat amp(2, static_cast<Eigen::Index>(count));
                            for (std::size_t c = 0; c < count; ++c) amp.col(static_cast<Eigen::Index>(c)) = point_source_amplitudes(src, first + c);
                            const Eigen::MatrixXd in = (prop * amp).cwiseAbs2();
                            a.accumulate(in.topRows(n), in.bottomRows(1));
                        });
    const double N = static_cast<double>(acc.frames());
    const RVec m1 = acc.mean_I1();
    const double m2 = acc.mean_I2()[0];
    r.first_order_mc = m1;
    r.g2_mc = acc.covariance_pairs() * ((N - 1.0) / N) + m1 * m2;
    return r;
}

HomMcResult hom_monte_carlo(double I1, double I2, double theta, AmplitudeStats stats, const MonteCarloOptions& mc) {
    PointSourceSet src;
    src.positions = {0.0, 1.0};
    src.weights = {I1, I2};
    src.stats = stats;
    src.seed = mc.seed;
    BeamsplitterParams bs;
    bs.theta = theta;
    const Eigen::Matrix2cd phi = beamsplitter_matrix(bs);
    PairMoments pm;
    for (std::uint64_t f = 0; f < mc.frames; ++f) {
        const CVec a = point_source_amplitudes(src, f);
        const Eigen::Vector2cd b = phi * Eigen::Vector2cd(a[0], a[1]);
        pm.add(std::norm(b[0]), std::norm(b[1]));
    }
    HomMcResult r;
    r.covariance = pm.covariance();
    r.sigma = pm.covariance_sigma();
    r.analytic = stats == AmplitudeStats::circular_gaussian ? hom_thermal(I1, I2, theta) : hom_coherent(I1, I2, theta);
    return r;
}

SiegertReport siegert_slit(const SiegertParams& p, const MonteCarloOptions& mc) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const Arm arm{el::Slit{p.b}, el::FreeSpace{p.z}};
    const CMat g1 = analytic_g1(arm, arm, g, g, k);
    std::vector<std::size_t> idx;
    const long c = g.index_of(0.0);
    const long start = c - static_cast<long>(p.points / 2);
    for (std::size_t i = 0; i < p.points; ++i) idx.push_back(static_cast<std::size_t>(start + static_cast<long>(i)));
    AccumulatorLayout layout{g.n, g.n, {}, false, false};
    for (auto a : idx)
        for (auto b : idx) layout.pairs.emplace_back(a, b);
    ThermalSetup s;
    s.arm1 = arm;
    s.arm2 = arm;
    s.source = g;
    s.detect = g;
    s.k = k;
    s.seed = mc.seed;
    s.mode = mc.sampling;
    McRun run;
    run.frames = mc.frames;
    run.workers = mc.workers;
    const auto acc = TwoArmMonteCarlo(s).run(layout, run);
    return siegert_check(acc, g1);
}

CVec nonlocal_aperture(const Grid& g, const NonlocalParams& p, int which, bool mirrored) {
    if (which != 1 && which != 2) throw std::invalid_argument("aperture index must be 1 or 2");
    const double slit_c = which == 1 ? -p.d / 2.0 : p.d / 2.0;
    const double open_sign = which == 1 ? 1.0 : -1.0;
    CVec a = CVec::Zero(static_cast<Eigen::Index>(g.n));
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = mirrored ? -g.x(i) : g.x(i);
        const double u = open_sign * x;
        if (std::abs(x - slit_c) <= p.b / 2.0 || (u > 0.0 && u <= p.open_w)) a[static_cast<Eigen::Index>(i)] = 1.0;
    }
    return a;
}

RVec nonlocal_reference(const NonlocalParams& p, const RVec& coord, double quad, double z) {
    const double k = wavenumber(p.lambda);
    const int per_slit = 2000;
    const double h = p.b / per_slit;
    std::vector<double> xs;
    for (double c : {-p.d / 2.0, p.d / 2.0})
        for (int j = 0; j < per_slit; ++j) xs.push_back(c - p.b / 2.0 + (j + 0.5) * h);
    RVec out(coord.size());
    for (Eigen::Index i = 0; i < coord.size(); ++i) {
        cplx s = 0.0;
        for (double x : xs) s += std::exp(I * (k * (quad * x * x - coord[i] * x / z)));
        out[i] = std::norm(s * h);
    }
    return out;
}

std::vector<NonlocalVariant> nonlocal_doubleslit(const NonlocalParams& p) {
    const double k = wavenumber(p.lambda);
    const Grid& g = p.grid;
    const long c = g.index_of(0.0);
    const el::Transmittance A1{g, nonlocal_aperture(g, p, 1)};
    const el::Transmittance A2{g, nonlocal_aperture(g, p, 2)};
    const el::Transmittance A2m{g, nonlocal_aperture(g, p, 2, true)};
    const RVec x = g.coords();
    std::vector<NonlocalVariant> out;

    auto finish = [&](NonlocalVariant& v) {
        v.period = dominant_period(v.pattern, g.dx).period;
        v.reference = nonlocal_reference(p, v.coord, v.quad, v.z);
        v.reference_period = dominant_period(v.reference, g.dx).period;
        v.marginal_visibility = spectral_visibility(v.marginal, g.dx, 1.0 / v.reference_period);
    };

    {
        NonlocalVariant v;
        v.name = "entangled";
        v.gate_residual = p.z0 - 2.0 * p.f;
        v.gate_ok = std::abs(v.gate_residual) <= 1e-9;
        const Arm a1{el::FreeSpace{p.z0}, A1, el::FreeSpace{p.z}};
        const Arm a2{el::FreeSpace{p.z0}, A2m, el::FreeSpace{p.z}};
        const CMat h1 = arm_response(a1, g, g, k);
        const CMat h2 = arm_response(a2, g, g, k);
        const auto bp = factorized_biphoton(g, gaussian_pump(g, k, p.f), k, k);
        const auto amp = joint_propagate(bp, h1, h2, g, std::size_t(1) << 24);
        v.coord = x.array() - x[c];
        v.pattern = coincidence_cut_fixed_x2(amp, static_cast<std::size_t>(c));
        v.marginal = amp.dense.cwiseAbs2().rowwise().sum() * g.dx;
        v.quad = (p.z0 + p.z) / (p.z0 * p.z);
        v.z = p.z;
        finish(v);
        out.push_back(std::move(v));
    }
    {
        NonlocalVariant v;
        v.name = "thermal_second_order";
        const Arm a1{el::FreeSpace{p.z0}, A1, el::FreeSpace{p.z}};
        const Arm a2{el::FreeSpace{p.z0}, A2, el::FreeSpace{p.z}};
        const CMat g12 = analytic_g1(a1, a2, g, g, k);
        v.coord = x.array() - x[c];
        v.pattern = g12.col(c).cwiseAbs2();
        v.marginal = analytic_g1_cut(a1, a1, g, g, k).real();
        v.quad = 0.0;
        v.z = p.z;
        finish(v);
        out.push_back(std::move(v));
    }
    {
        NonlocalVariant v;
        v.name = "thermal_first_order";
        v.gate_residual = p.z1_first - 2.0 * p.f_first;
        v.gate_ok = std::abs(v.gate_residual) <= 1e-9;
        const Arm a1{el::FreeSpace{p.z0_first}, A1, el::FreeSpace{p.z1_first}};
        const Arm a2{el::FreeSpace{p.z0_first}, A2, el::FocalPlaneLens{p.f_first}};
        v.coord = x;
        v.pattern = detail::abs2(analytic_g1_cut(a1, a2, g, g, k));
        v.marginal = analytic_g1_cut(a1, a1, g, g, k).real();
        v.quad = 1.0 / (2.0 * p.z1_first);
        v.z = p.z1_first;
        finish(v);
        out.push_back(std::move(v));
    }
    return out;
}

namespace detail {

RunOutputs run_thermal_doubleslit(const ScenarioConfig& c, const RunOptions&) {
    ThermalDoubleSlitParams p;
    p.b = c.get("b");
    p.d = c.get("d");
    p.f = c.get("f");
    p.lambda = c.get("lambda");
    p.grid = grid_of(c);
    const double Wp = c.get("W");
    const double W = Wp > 0.0 ? Wp : std::numeric_limits<double>::infinity();
    const bool maps = std::find(c.outputs.begin(), c.outputs.end(), "g1_map") != c.outputs.end() ||
                      std::find(c.outputs.begin(), c.outputs.end(), "g2_map") != c.outputs.end();
    const auto r = thermal_doubleslit(p, W, maps);
    RunOutputs out;
    out.info("W", Wp, Wp > 0.0 ? "" : "delta-correlated source");
    out.info("period_g2_anti_m", r.period_g2);
    out.info("period_coherent_m", r.period_coherent);
    out.check("subwavelength_ratio", r.period_g2 / r.period_coherent,
              std::abs(r.period_g2 / r.period_coherent - 0.5) <= 0.005, "G2(x,-x) period over coherent period");
    out.info("first_order_rel_variance", r.first_order_rel_variance);
    out.info("first_order_visibility", r.visibility);
    out.tables.push_back(real_table("first_order", r.x, r.first_order));
    out.tables.push_back(real_table("coherent", r.x, r.coherent));
    out.tables.push_back(real_table("g2_anti", r.anti_x, r.g2_anti));
    if (maps) {
        out.images.push_back({"g1_map", r.g1_map});
        out.images.push_back({"g2_map", r.g2_map});
    }
    Table sweep;
    sweep.name = "visibility_sweep";
    sweep.x_label = "W";
    const std::vector<double> Ws = {0.05, 0.1, 0.25, 0.5, 1.0};
    sweep.x.resize(static_cast<Eigen::Index>(Ws.size()));
    sweep.value.resize(sweep.x.size());
    for (std::size_t i = 0; i < Ws.size(); ++i) {
        sweep.x[static_cast<Eigen::Index>(i)] = Ws[i];
        sweep.value[static_cast<Eigen::Index>(i)] = thermal_doubleslit(p, Ws[i]).visibility;
    }
    out.tables.push_back(sweep);
    return out;
}

RunOutputs run_two_color(const ScenarioConfig& c, const RunOptions&) {
    TwoColorParams p;
    p.lambda1 = c.get("lambda1");
    p.lambda2 = c.get("lambda2");
    p.d = c.get("d");
    p.z = c.get("z");
    p.beta = c.get("beta");
    const double kind = c.get("kind");
    if (kind != 1.0 && kind != 2.0) throw ConfigError("kind must be 1 or 2");
    p.kind = kind == 1.0 ? BiphotonKind::I : BiphotonKind::II;
    p.grid = grid_of(c);
    const bool map = std::find(c.outputs.begin(), c.outputs.end(), "coincidence_map") != c.outputs.end() || c.outputs.empty();
    const auto r = two_color(p, map);
    RunOutputs out;
    const RVec xd = r.x.tail(r.x.size() - 1);
    out.tables.push_back(real_table("cut_a", r.x, r.cut_a, "x1_m"));
    out.tables.push_back(real_table("cut_b", r.x, r.cut_b, "x2_m"));
    out.tables.push_back(real_table("cut_c", r.x, r.cut_c, "x1_eq_x2_m"));
    out.tables.push_back(real_table("cut_d", xd, r.cut_d, "x1_eq_minus_x2_m"));
    if (map) out.images.push_back({"coincidence_map", r.map});
    const double fa = r.f_a;
    auto ratio = [&](const char* key, double f, double e) {
        const double rr = (f / fa) / (e / r.expected_a);
        out.check(key, rr, std::abs(rr - 1.0) <= 0.01, "measured over expected frequency ratio to cut a");
    };
    out.info("f_a_per_m", r.f_a);
    out.info("f_b_per_m", r.f_b);
    out.info("f_c_per_m", r.f_c);
    out.info("f_d_per_m", r.f_d);
    ratio("ratio_b", r.f_b, r.expected_b);
    ratio("ratio_c", r.f_c, r.expected_c);
    ratio("ratio_d", r.f_d, r.expected_d);
    return out;
}

RunOutputs run_hbt_star(const ScenarioConfig& c, const RunOptions& o) {
    HbtParams p;
    p.D = c.get("D");
    p.z = c.get("z");
    p.lambda = c.get("lambda");
    p.bins = static_cast<std::size_t>(c.get("bins"));
    p.separations = static_cast<std::size_t>(c.get("separations"));
    p.max_separation = c.get("max_separation");
    const auto r = hbt_monte_carlo(p, mc_of(c, o));
    RunOutputs out;
    out.info("first_zero_m", r.analytic.first_zero, "1.22 lambda z / D");
    out.info("theta_true", r.theta_true);
    out.tables.push_back(real_table("analytic", r.analytic.separations, r.analytic.correlation, "d_m"));
    if (r.mc.size() > 0) {
        out.tables.push_back(real_table("mc", r.analytic.separations, r.mc, "d_m"));
        out.info("first_zero_mc_m", r.mc_first_zero);
        const bool ok = r.theta_mc > 0.0 && std::abs(r.theta_mc / r.theta_true - 1.0) <= 0.03;
        out.check("theta_mc", r.theta_mc, ok, "within 3% of D/z");
    }
    return out;
}

RunOutputs run_fano_two_source(const ScenarioConfig& c, const RunOptions& o) {
    FanoParams p;
    p.a = c.get("a");
    p.z = c.get("z");
    p.lambda = c.get("lambda");
    p.x2 = c.get("x2");
    p.stats = c.get("fixed_modulus") != 0.0 ? AmplitudeStats::fixed_modulus : AmplitudeStats::circular_gaussian;
    p.grid = grid_of(c);
    const auto r = fano_two_source(p, mc_of(c, o));
    RunOutputs out;
    out.info("period_expected_m", r.expected_period, "lambda z / a");
    out.check("period_g2_m", r.period, std::abs(r.period / r.expected_period - 1.0) <= 0.02);
    out.tables.push_back(real_table("first_order", r.x, r.first_order));
    out.tables.push_back(real_table("g2", r.x, r.g2));
    if (r.g2_mc.size() > 0) {
        out.tables.push_back(real_table("g2_mc", r.x, r.g2_mc));
        out.tables.push_back(real_table("first_order_mc", r.x, r.first_order_mc));
        const double m = r.first_order_mc.mean();
        out.info("first_order_mc_rel_spread",
                 std::sqrt((r.first_order_mc.array() - m).square().mean()) / m);
    }
    return out;
}

RunOutputs run_hom(const ScenarioConfig& c, const RunOptions& o) {
    const double I1 = c.get("I1"), I2 = c.get("I2");
    const auto steps = static_cast<Eigen::Index>(c.get("steps"));
    if (steps < 2) throw ConfigError("steps must be at least 2");
    RunOutputs out;
    Table beta{"kind2_beta_sweep", "beta_rad", RVec(steps), RVec(steps), std::nullopt};
    Table deg{"degenerate_theta_sweep", "theta_rad", RVec(steps), RVec(steps), std::nullopt};
    Table th{"thermal_theta_sweep", "theta_rad", RVec(steps), RVec(steps), std::nullopt};
    Table co{"coherent_theta_sweep", "theta_rad", RVec(steps), RVec(steps), std::nullopt};
    const auto q45 = transfer_from_beamsplitter({});
    double worst = 0.0;
    for (Eigen::Index i = 0; i < steps; ++i) {
        const double b = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(steps - 1);
        DiscreteBiphoton s{BiphotonKind::II, b, 1.0, 1.0};
        beta.x[i] = b;
        beta.value[i] = discrete_coincidence(s, q45);
        worst = std::max(worst, std::abs(beta.value[i] - (1.0 - std::cos(b)) / 4.0));
        const double t = kPi / 2.0 * static_cast<double>(i) / static_cast<double>(steps - 1);
        BeamsplitterParams bs;
        bs.theta = t;
        deg.x[i] = th.x[i] = co.x[i] = t;
        deg.value[i] = discrete_coincidence(DiscreteBiphoton::degenerate(1.0), transfer_from_beamsplitter(bs));
        th.value[i] = hom_thermal(I1, I2, t);
        co.value[i] = hom_coherent(I1, I2, t);
    }
    const double dip = discrete_coincidence(DiscreteBiphoton::degenerate(1.0), q45);
    out.check("degenerate_dip", dip, std::abs(dip) <= 1e-12, "coincidence at theta = pi/4");
    out.check("kind2_beta_max_error", worst, worst <= 1e-12, "against (1 - cos beta)/4");
    out.tables.push_back(beta);
    out.tables.push_back(deg);
    out.tables.push_back(th);
    out.tables.push_back(co);
    const MonteCarloOptions mc = mc_of(c, o);
    if (mc.frames > 1) {
        const auto r = hom_monte_carlo(I1, I2, kPi / 4.0, AmplitudeStats::circular_gaussian, mc);
        out.info("thermal_mc_covariance", r.covariance);
        out.check("thermal_mc_z", std::abs(r.covariance - r.analytic) / r.sigma,
                  std::abs(r.covariance - r.analytic) <= 5.0 * r.sigma, "|mc - analytic| / sigma");
        const auto rc = hom_monte_carlo(I1, I2, kPi / 4.0, AmplitudeStats::fixed_modulus, mc);
        out.info("coherent_mc_covariance", rc.covariance);
        out.check("coherent_mc_z", std::abs(rc.covariance - rc.analytic) / rc.sigma,
                  std::abs(rc.covariance - rc.analytic) <= 5.0 * rc.sigma, "|mc - analytic| / sigma");
    }
    return out;
}

RunOutputs run_nonlocal_doubleslit(const ScenarioConfig& c, const RunOptions&) {
    NonlocalParams p;
    p.b = c.get("b");
    p.d = c.get("d");
    p.open_w = c.get("open_w");
    p.lambda = c.get("lambda");
    p.f = c.get("f");
    p.z0 = c.get("z0");
    p.z = c.get("z");
    p.z0_first = c.get("z0_first");
    p.z1_first = c.get("z1_first");
    p.f_first = c.get("f_first");
    p.grid = grid_of(c);
    RunOutputs out;
    const auto vs = nonlocal_doubleslit(p);
    for (const auto& v : vs) {
        if (v.name == "entangled") out.gate("gate_z0_eq_2f", v.gate_residual, v.gate_ok);
        if (v.name == "thermal_first_order") out.gate("gate_z1_eq_2f", v.gate_residual, v.gate_ok);
        out.info(v.name + "_reference_period_m", v.reference_period);
        out.check(v.name + "_period_m", v.period, std::abs(v.period / v.reference_period - 1.0) <= 0.02,
                  "within 2% of the coherent-reference period");
        out.check(v.name + "_marginal_visibility", v.marginal_visibility, v.marginal_visibility <= 0.05);
        const std::string label = v.name == "thermal_first_order" ? "x_m" : "x1_minus_x2_m";
        out.tables.push_back(real_table(v.name, v.coord, v.gate_ok ? v.pattern : RVec::Zero(v.pattern.size()), label));
        out.tables.push_back(real_table(v.name + "_reference", v.coord, v.reference, label));
        out.tables.push_back(real_table(v.name + "_marginal", grid_of(c).coords(), v.marginal));
    }
    return out;
}

}  // namespace detail

}  // namespace incoh
