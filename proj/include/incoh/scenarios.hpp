#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "incoh/biphoton.hpp"
#include "incoh/correlate.hpp"
#include "incoh/fieldgrid.hpp"
#include "incoh/optics.hpp"
#include "incoh/sources.hpp"

namespace incoh {

constexpr double kHeNe = 632.8e-9;

inline double wavenumber(double lambda) { return 2.0 * kPi / lambda; }

struct MonteCarloOptions {
    std::uint64_t frames = 0;   // 0 skips the ensemble
    std::uint64_t seed = 1;
    unsigned workers = 0;
    SamplingMode sampling = SamplingMode::advisory;
};

// Two slits of width b at +-d/2, the one at +d/2 with phase phase2.
CVec double_slit_profile(const Grid& g, double b, double d, double phase2 = 0.0);
el::Transmittance double_slit_object(const Grid& g, double b, double d, double phase2 = 0.0);

// ---- unequal-path interferometer ----

struct UnequalPathParams {
    double z_o = 0.16;
    double z_r = 0.27;
    double b = 125e-6;
    double d = 310e-6;
    double lambda = kHeNe;
    double coherence_length = 1.0;
    Grid grid = make_grid(2048, 6e-6);
};

struct UnequalPathResult {
    EffectiveLength Z;
    CoherenceGate gate;
    RVec x;
    CVec oracle;             // <E_r*(x) E_o(x)>
    CVec mc;                 // port-differenced estimate, empty without frames
    RVec mc_sigma;
    RVec coherent_object;    // |E_o|^2 under plane-wave illumination
    CVec coherent_cross;     // E_r* E_o under plane-wave illumination
    double period_oracle = 0.0;
    double period_mc = 0.0;
    double period_coherent = 0.0;
    double expected_period = 0.0;           // lambda Z / d
    double expected_coherent_period = 0.0;  // lambda z_o / d
};

UnequalPathResult unequal_path(const UnequalPathParams& p, const MonteCarloOptions& mc = {});

// ---- washout with one object in an otherwise equal pair of arms ----

struct WashoutParams {
    double z = 0.2;
    double b = 125e-6;
    double d = 310e-6;
    double lambda = kHeNe;
    Grid grid = make_grid(1024, 6e-6);
};

struct WashoutResult {
    double a = 0.0;
    CVec oracle;
    double rel_variance = 0.0;     // spatial variance / |mean|^2 of the oracle
    CVec mc;
    RVec mc_sigma;
    double mc_max_z = 0.0;          // max |mc - mean(mc)| / sigma
};

// Object placed a meters after the source in arm 2; arm 1 is free space of the same length.
WashoutResult washout(const WashoutParams& p, double a, const MonteCarloOptions& mc = {});

// ---- focal-plane thermal double slit ----

struct ThermalDoubleSlitParams {
    double b = 125e-6;
    double d = 310e-6;
    double f = 0.2;
    double lambda = kHeNe;
    double I0 = 1.0;
    Grid grid = make_grid(1024, 5e-6);
};

struct ThermalDoubleSlitResult {
    double W = 0.0;
    RVec x;
    RVec first_order;            // G1(x, x)
    RVec coherent;               // |E(x)|^2 for plane-wave illumination
    RVec anti_x;                 // x for the G2(x, -x) cut
    RVec g2_anti;                // <I(x) I(-x)>
    RVec g2_anti_fluct;          // |G1(x, -x)|^2
    double period_g2 = 0.0;
    double period_coherent = 0.0;
    double first_order_rel_variance = 0.0;
    double visibility = 0.0;     // first-order fringe visibility at the centre
    Eigen::MatrixXd g1_map;      // |G1(x1, x2)|, filled when maps are requested
    Eigen::MatrixXd g2_map;      // <I(x1) I(x2)>
};

// W = w d / (2 pi); W = infinity is the delta-correlated source.
ThermalDoubleSlitResult thermal_doubleslit(const ThermalDoubleSlitParams& p, double W, bool maps = false);

// ---- lensless ghost diffraction ----

struct GhostDiffractionParams {
    double z_o1 = 0.1;
    double z_o2 = 0.2;
    double z_r = 0.1;
    double b = 125e-6;
    double d = 310e-6;
    double lambda = kHeNe;
    Grid grid = make_grid(1024, 10e-6);
};

struct GhostDiffractionResult {
    EffectiveLength z_thermal;
    EffectiveLength z_entangled;
    RVec x;
    CVec object;
    CMat thermal;     // <E_o*(x1) E_r(x2)>, rows x1 (object arm), columns x2
    CMat entangled;   // two-photon amplitude A(x1, x2)
};

Arm ghost_object_arm(const GhostDiffractionParams& p, const el::Transmittance& t);
GhostDiffractionResult ghost_diffraction(const GhostDiffractionParams& p, bool entangled = true);

// ---- lens ghost imaging with a bucket detector ----

struct GhostImagingParams {
    double z_o = 0.15;
    double f = 0.1;
    double z1 = 0.1;
    double z2_entangled = 0.2;
    double z2_thermal = 0.4;
    double b = 125e-6;
    double d = 310e-6;
    double lambda = kHeNe;
    Grid grid = make_grid(1024, 8e-6);
};

struct GhostImagingResult {
    ImagingCheck entangled_check;
    double thermal_residual = 0.0;   // 1/z_o + 1/(z2 - z1) - 1/f
    bool thermal_ok = false;
    double thermal_magnification = 0.0;
    RVec x;
    RVec entangled_image;
    RVec thermal_image;
    RVec expected_entangled;   // |T(x / m)|^2
    RVec expected_thermal;
};

GhostImagingResult ghost_imaging(const GhostImagingParams& p);

// ---- first-order ghost imaging ----

struct FirstOrderGhostScenario {
    FirstOrderGhostParams geom{0.15, 0.075, 0.015, 0.165, 0.15};
    double b = 125e-6;
    double d = 310e-6;
    double phase2 = 0.0;
    double lambda = kHeNe;
    bool negative = false;        // extra half-wave path in the reference arm
    Grid grid = make_grid(1024, 8e-6);
};

struct FirstOrderGhostResult {
    FirstOrderGhostPrediction prediction;
    double alignment_offset = 0.0;   // path offset added to arm 2
    RVec x;
    CVec object;
    CVec oracle;       // <E1*(x) E2(x)> with the offset applied
    CVec mc;
    RVec mc_sigma;
    RVec bucket;
};

FirstOrderGhostResult first_order_ghost(const FirstOrderGhostScenario& p, const MonteCarloOptions& mc = {});

// ---- glass rod ----

struct GlassRodParams {
    double l = 0.155;
    double n_rod = 1.5163;
    double z_o = 0.418;
    double b = 125e-6;
    double d = 310e-6;
    double phase2 = 0.0;
    double lambda = kHeNe;
    Grid grid = make_grid(1024, 6e-6);
};

struct GlassRodScenarioResult {
    double z_o1 = 0.0;
    GlassRodResult lengths;
    RVec x;
    CVec oracle;
    double image_overlap = 0.0;   // |<|T(x)|, |G|>| normalized
};

GlassRodScenarioResult glass_rod(const GlassRodParams& p, double z_o1);

// ---- nonlocal double slit ----

struct NonlocalParams {
    double b = 125e-6;
    double d = 310e-6;
    double open_w = 375e-6;     // open half-window on the far side of x = 0
    double lambda = kHeNe;
    double f = 0.1;             // pump curvature
    double z0 = 0.2;            // source to apertures; the entangled gate asks for z0 = 2f
    double z = 0.5;             // aperture to detector, entangled and thermal second order
    double z0_first = 0.01;     // source to aperture, first-order variant
    double z1_first = 0.38;     // aperture to detector in arm 1; gate z1 = 2 f_first
    double f_first = 0.19;      // lens of the first-order variant
    Grid grid = make_grid(2048, 7.5e-6);
};

struct NonlocalVariant {
    std::string name;
    RVec coord;
    RVec pattern;
    RVec marginal;
    double period = 0.0;
    double marginal_visibility = 0.0;
    double gate_residual = 0.0;
    bool gate_ok = true;
    double quad = 0.0;           // x'^2 coefficient of the reference quadrature, in units of k
    double z = 0.0;              // distance in the linear term of the reference quadrature
    RVec reference;
    double reference_period = 0.0;
};

CVec nonlocal_aperture(const Grid& g, const NonlocalParams& p, int which, bool mirrored = false);
// |int D(x') exp[ik(quad x'^2 - x x'/z)] dx'|^2 by dense quadrature over the double slit D = A1 A2.
RVec nonlocal_reference(const NonlocalParams& p, const RVec& coord, double quad, double z);
std::vector<NonlocalVariant> nonlocal_doubleslit(const NonlocalParams& p);

// ---- two-colour double slit ----

struct TwoColorParams {
    double lambda1 = 760e-9;
    double lambda2 = 840e-9;
    double d = 310e-6;
    double z = 1.0;
    double beta = 0.0;
    BiphotonKind kind = BiphotonKind::I;
    Grid grid = make_grid(2048, 0.16e-3);
};

struct TwoColorResult {
    Eigen::MatrixXd map;   // rows x1, columns x2
    RVec x;
    RVec cut_a, cut_b, cut_c, cut_d;   // scan x1; scan x2; x1 = x2; x1 = -x2
    double f_a = 0.0, f_b = 0.0, f_c = 0.0, f_d = 0.0;   // fringes per meter along the scanned x
    double expected_a = 0.0, expected_b = 0.0, expected_c = 0.0, expected_d = 0.0;
};

TwoColorResult two_color(const TwoColorParams& p, bool full_map = true);

// ---- HBT stellar interferometer ----

struct HbtParams {
    double D = 1e-3;
    double z = 10.0;
    double lambda = kHeNe;
    std::size_t bins = 256;
    std::size_t separations = 160;
    double max_separation = 0.0;   // 0 picks twice the first zero
};

struct HbtMcResult {
    HbtCurve analytic;
    RVec mc;                  // Re(G1(0, d) e^{-ik d^2/2z}) / <I>
    RVec mc_sigma;
    double mc_first_zero = 0.0;
    double theta_mc = 0.0;
    double theta_true = 0.0;
};

HbtMcResult hbt_monte_carlo(const HbtParams& p, const MonteCarloOptions& mc);

// ---- two-source Fano correlation ----

struct FanoParams {
    double a = 1e-3;            // source separation
    double z = 1.0;
    double lambda = kHeNe;
    double x2 = 0.0;            // fixed detector
    AmplitudeStats stats = AmplitudeStats::fixed_modulus;
    Grid grid = make_grid(512, 10e-6);
};

struct FanoResult {
    RVec x;
    RVec first_order;        // <I(x)>
    RVec g2;                 // <I(x) I(x2)> analytic
    RVec g2_mc;
    RVec first_order_mc;
    double period = 0.0;
    double expected_period = 0.0;   // lambda z / a
};

FanoResult fano_two_source(const FanoParams& p, const MonteCarloOptions& mc = {});

// ---- beamsplitter Monte Carlo ----

struct HomMcResult {
    double covariance = 0.0;
    double sigma = 0.0;
    double analytic = 0.0;
};

HomMcResult hom_monte_carlo(double I1, double I2, double theta, AmplitudeStats stats, const MonteCarloOptions& mc);

// ---- Siegert check on a slit ----

struct SiegertParams {
    double b = 200e-6;
    double z = 0.05;
    double lambda = kHeNe;
    std::size_t points = 64;
    Grid grid = make_grid(1024, 5e-6);
};

SiegertReport siegert_slit(const SiegertParams& p, const MonteCarloOptions& mc);

// ---- triangular interferometer and mirrored-object hologram ----

struct FzpParams {
    double z = 1.0;
    double f1 = 0.1;
    double f2 = 0.075;
    double x_s = 0.0;
    double r = 0.7071067811865476;
    double t = 0.7071067811865476;
    double object_b = 100e-6;   // slit object for the incoherent encoding
    double lambda = kHeNe;
    Grid grid = make_grid(1024, 10e-6);
};

struct FzpResult {
    double F = 0.0;
    double ring_center = 0.0;
    RVec x;
    RVec intensity;          // point-source pattern
    RVec model;              // A1^2 + A2^2 + 2 A1 A2 cos(k (x - xc)^2 / 2F + phi)
    double model_correlation = 0.0;
    double visibility = 0.0;
    CVec encoding;           // cross term for the slit object
    RVec encoding_oracle;    // |object spectrum| at the encoded frequency
    double encoding_correlation = 0.0;
};

FzpResult fzp_triangular(const FzpParams& p);

struct LenslessParams {
    double z = 0.5;
    double b = 40e-6;
    double x0 = 250e-6;   // centre of the off-axis slit object
    double lambda = kHeNe;
    Grid grid = make_grid(1024, 10e-6);
};

struct LenslessResult {
    RVec x;
    RVec intensity;       // <I(x)> from the propagated object and its mirror image
    RVec oracle;          // integral of I0(x0) [1 + cos(2 k x x0 / z)]
    double correlation = 0.0;
    RVec mc;
};

LenslessResult lensless_fourier(const LenslessParams& p, const MonteCarloOptions& mc = {});

}  // namespace incoh
