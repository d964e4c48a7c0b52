#pragma once

#include <Eigen/Dense>

#include "incoh/fieldgrid.hpp"
#include "incoh/optics.hpp"

namespace incoh {

constexpr double kSpeedOfLight = 299792458.0;

enum class BiphotonKind { I, II, II_degenerate };

struct DiscreteBiphoton {
    BiphotonKind kind = BiphotonKind::II;
    double beta = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;

    static DiscreteBiphoton degenerate(double omega) { return {BiphotonKind::II_degenerate, 0.0, omega, omega}; }
};

void validate(const DiscreteBiphoton& s);

// phi(j, i): amplitude from source i to detector j (zero-based).
struct TransferQuad {
    Eigen::Matrix2cd phi = Eigen::Matrix2cd::Identity();

    cplx p11() const { return phi(0, 0); }
    cplx p12() const { return phi(0, 1); }
    cplx p21() const { return phi(1, 0); }
    cplx p22() const { return phi(1, 1); }
};

TransferQuad transfer_from_beamsplitter(const BeamsplitterParams& p);

// Kind I and II follow the 1/sqrt(2) two-path amplitudes; the degenerate product
// state returns Phi11*Phi22 + Phi12*Phi21 (no normalization, no beta).
cplx discrete_amplitude(const DiscreteBiphoton& s, const TransferQuad& q);
double discrete_coincidence(const DiscreteBiphoton& s, const TransferQuad& q);

// Normally ordered input moments of two phase-independent modes.
struct FanoMoments {
    double n11 = 0.0;  // <a1+ a1+ a1 a1>
    double n22 = 0.0;  // <a2+ a2+ a2 a2>
    double n12 = 0.0;  // <a1+ a2+ a2 a1>
};

FanoMoments moments_single_photons();
FanoMoments moments_thermal(double I1, double I2);
FanoMoments moments_coherent(double I1, double I2);

// <b1+ b2+ b2 b1> for two phase-independent input modes.
double fano_coincidence(const FanoMoments& m, const TransferQuad& q);

// Far-field two-color double-slit coincidence, linearized in x/z.
double two_color_doubleslit(const DiscreteBiphoton& s, double x1, double x2, double d, double z);

struct ContinuousBiphoton {
    enum class Form { dense, factorized };
    Form form = Form::factorized;
    Grid grid;
    CMat dense;   // C(x1, x2), rows x1, columns x2
    CVec pump;    // C(x) of the factorized delta(x1 - x2) C(x1) form
    double k1 = 0.0;
    double k2 = 0.0;
};

ContinuousBiphoton factorized_biphoton(const Grid& g, CVec pump, double k1, double k2);
// Dense equivalent: delta(x1 - x2) becomes 1/dx on the diagonal.
ContinuousBiphoton to_dense(const ContinuousBiphoton& bp);

// Two-photon amplitude at the detectors from arm responses h1(x1, x0), h2(x2, x0).
ContinuousBiphoton joint_propagate(const ContinuousBiphoton& bp, const CMat& h1, const CMat& h2,
                                   const Grid& detect_grid,
                                   std::size_t max_entries = std::size_t(1) << 24);
RVec coincidence_cut_fixed_x2(const ContinuousBiphoton& bp, std::size_t x2_index);
Eigen::MatrixXd coincidence_map(const ContinuousBiphoton& bp);

CVec gaussian_pump(const Grid& g, double k, double f);

struct ImagingCheck {
    bool ok = false;
    double residual = 0.0;   // 1/z_o + 1/(z1+z2) - 1/f, in 1/m
    double magnification = 0.0;
};

ImagingCheck entangled_ghost_image_check(double z_o, double z1, double z2, double f,
                                         double rel_tol = 1e-6);
// Image-side distance z1 + z2 that satisfies the entangled imaging equation.
double entangled_image_distance(double z_o, double f);

}  // namespace incoh
