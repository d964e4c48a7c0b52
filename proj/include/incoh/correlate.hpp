#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "incoh/fieldgrid.hpp"
#include "incoh/optics.hpp"

namespace incoh {

struct AccumulatorLayout {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    // Selected (i1, i2) product pairs; ignored when full is set.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    bool full = false;
    // Per-pixel complex cross term, length n1.
    bool cross = false;
};

// Streaming moment sums. Every block contribution is formed in double precision and
// then added to 128-bit fixed-point totals, so merging is exactly associative and
// commutative at block granularity.
class CorrelationAccumulator {
public:
    explicit CorrelationAccumulator(AccumulatorLayout layout, double scale = 1.0);

    const AccumulatorLayout& layout() const { return layout_; }
    std::uint64_t frames() const { return frames_; }

    // Columns are frames; I1 is n1 x F, I2 is n2 x F.
    void accumulate(const Eigen::MatrixXd& I1, const Eigen::MatrixXd& I2);
    // Same frames as the preceding accumulate call; cross is n1 x F.
    void accumulate_cross(const CMat& cross);
    void merge(const CorrelationAccumulator& other);

    RVec mean_I1() const;
    RVec mean_I2() const;
    // Unbiased <dI1 dI2> for each selected pair.
    RVec covariance_pairs() const;
    Eigen::MatrixXd covariance_full() const;
    CVec mean_cross() const;
    // Standard error of the mean cross term, per pixel.
    RVec cross_sigma() const;

    bool same_sums(const CorrelationAccumulator& other) const;

private:
    using Fixed = __int128;
    static Fixed to_fixed(double v, int exponent);
    static double from_fixed(Fixed v, int exponent);

    AccumulatorLayout layout_;
    int exp_lin_;
    int exp_sq_;
    std::uint64_t frames_ = 0;
    std::uint64_t cross_frames_ = 0;
    std::vector<Fixed> s1_, s2_, s12_, sc_re_, sc_im_, sc_sq_;
};

// Two-detector version for the discrete beamsplitter experiments.
struct PairMoments {
    std::uint64_t n = 0;
    // Raw sums of I1^a I2^b for the centered fourth moment.
    double s10 = 0, s01 = 0, s11 = 0, s20 = 0, s02 = 0, s21 = 0, s12 = 0, s22 = 0;

    void add(double i1, double i2);
    double covariance() const;
    // Standard error of the covariance from the sample variance of dI1*dI2.
    double covariance_sigma() const;
};

// Dense first-order correlation G(x1, x2) = I0 sum_j conj(h1(x1, x0_j)) h2(x2, x0_j) dx.
// With rebase set, the longest common vacuum prefix of both arms is removed first;
// a delta-correlated homogeneous source is unchanged by that shift.
struct G1Options {
    double I0 = 1.0;
    bool rebase = true;
    // Optional relative source intensity per sample (inhomogeneous incoherent object);
    // rebasing is not valid for such a source and is rejected.
    RVec source_intensity;
    std::size_t max_entries = std::size_t(1) << 24;
    SamplingMode mode = SamplingMode::advisory;
};

CMat analytic_g1(const Arm& arm1, const Arm& arm2, const Grid& source_grid, const Grid& detect_grid, double k,
                 const G1Options& opt = {});
// Equal-position cut G(x, x).
CVec analytic_g1_cut(const Arm& arm1, const Arm& arm2, const Grid& source_grid, const Grid& detect_grid,
                     double k, const G1Options& opt = {});
// Response of a possibly empty arm (empty means identity, delta/dx on the grid).
CMat response_or_identity(const Arm& arm, const Grid& source_grid, const Grid& detect_grid, double k,
                          std::size_t max_entries, SamplingMode mode);

struct SiegertReport {
    double max_abs = 0.0;
    double nrms = 0.0;
    std::size_t points = 0;
};

SiegertReport siegert_check(const CorrelationAccumulator& acc, const CMat& g1);

enum class Regime { normal, reversed, imaging, fourier, homogeneous };
std::string regime_name(Regime r);

struct EffectiveLength {
    double value = 0.0;   // meters; infinite for fourier and homogeneous
    Regime regime = Regime::normal;
};

double pole_tolerance();

EffectiveLength unequal_path_length(double z_o, double z_r);
EffectiveLength lens_pair_focal(double f_o, double f_r);
EffectiveLength ghost_entangled_length(double z_o1, double z_o2, double z_r);
EffectiveLength ghost_thermal_length(double z_o1, double z_o2, double z_r);

struct GlassRodResult {
    EffectiveLength z_eff;
    double z_bar = 0.0;          // diffraction length of the reference arm
    double z_r = 0.0;            // geometric reference-arm length at equal optical path
    double identity_residual = 0.0;
    bool identity_ok = false;
};

// Reference arm holds a rod of length l and index n; its geometric length is chosen so
// the optical paths of both arms are equal to z_o.
GlassRodResult glass_rod_length(double l, double n, double z_o, double z_o1);

struct FirstOrderGhostParams {
    double f1 = 0.0, f2 = 0.0, z0 = 0.0, z1 = 0.0, z2 = 0.0;
};

struct FirstOrderGhostPrediction {
    bool imaging_ok = false;
    double imaging_residual = 0.0;   // 1/(z1 - z0) + 1/z2 - 1/f2, in 1/m
    double path_mismatch = 0.0;      // optical path difference of the two arms
    double magnification = 0.0;      // image coordinate per object coordinate
    CVec image;                      // predicted G1 cut on the detection grid
};

// Arms: 1 = object T, then lens f1 focal-plane map; 2 = free z1, lens f2, free z2.
// The source plane is z0 before the object.
Arm ghost_first_order_arm1(const FirstOrderGhostParams& p, const el::Transmittance& object);
Arm ghost_first_order_arm2(const FirstOrderGhostParams& p);
FirstOrderGhostPrediction ghost_image_first_order(const FirstOrderGhostParams& p, const Grid& object_grid,
                                                  const CVec& object, const Grid& detect_grid, double k,
                                                  double rel_tol = 1e-6);

// B(x) = sum_x1 |G(x1, x)|^2 dx1 from arm responses on a common source grid.
RVec bucket_ghost_image(const CMat& h1, const CMat& h2, double dx_source, double dx_bucket, double I0 = 1.0);

struct HbtCurve {
    RVec separations;
    RVec correlation;    // |2 J1(u)/u|
    double first_zero = 0.0;
    double angular_diameter = 0.0;
};

constexpr double kBesselJ1FirstZero = 3.8317059702075123;

double hbt_normalized(double D, double z, double lambda, double d);
HbtCurve hbt_star(double D, double z, double lambda, const std::vector<double>& separations);

// Output intensity-fluctuation correlation behind a beamsplitter of angle theta.
double hom_thermal(double I1, double I2, double theta);
double hom_coherent(double I1, double I2, double theta);

}  // namespace incoh
