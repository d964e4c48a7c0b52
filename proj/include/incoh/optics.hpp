#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "incoh/fieldgrid.hpp"

namespace incoh {

class OpticsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SamplingMode { advisory, strict };

// Optical path z_opt carries exp(ik z_opt); diffraction length z_diff sets the chirp.
struct PropagationKernel {
    double z_opt = 0.0;
    double z_diff = 0.0;

    static PropagationKernel vacuum(double z) { return {z, z}; }
    static PropagationKernel medium(double length, double index) {
        return {index * length, length / index};
    }
};

PropagationKernel cascade(const std::vector<PropagationKernel>& kerns);

// Paraxial impulse response sqrt(k/(i 2 pi Z)) exp(ik z) exp(ik dx^2 / 2Z).
cplx kernel_value(double k, const PropagationKernel& kern, double offset);
cplx kernel_prefactor(double k, double z_diff);

struct SamplingCheck {
    bool ok = true;
    double dx = 0.0;
    double limit = 0.0;
    std::string describe() const;
};

// Local chirp Nyquist test: dx must not exceed lambda*|Z|/span.
SamplingCheck check_sampling(const Grid& g, double k, double z_diff);

SampledField propagate(const SampledField& f, const PropagationKernel& kern,
                       SamplingMode mode = SamplingMode::advisory);
// Same discrete sum as propagate, evaluated by FFT convolution.
SampledField propagate_fast(const SampledField& f, const PropagationKernel& kern,
                            SamplingMode mode = SamplingMode::advisory);
SampledField propagate_cascade(const SampledField& f, const std::vector<PropagationKernel>& kerns,
                               SamplingMode mode = SamplingMode::advisory);
SampledField lens_fourier(const SampledField& f, double focal);

namespace el {
struct FreeSpace { double length; };
struct Medium { double length; double index; };
struct Transmittance { Grid grid; CVec profile; };
struct FocalPlaneLens { double f; };
struct ThinLens { double f; };
struct Slit { double b; double center = 0.0; };
// Two slits of width b centred at +-d/2; the slit at +d/2 carries exp(i*phase2).
struct DoubleSlit { double b; double d; double phase2 = 0.0; };
struct CircAperture { double D; double center = 0.0; };
// Afocal relay, as in a triangular interferometer; magnification -f_out/f_in.
struct Afocal { double f_in; double f_out; };
// Sub-wavelength path change; contributes only the phase exp(ik delta).
struct PathOffset { double delta; };
}  // namespace el

using Element = std::variant<el::FreeSpace, el::Medium, el::Transmittance, el::FocalPlaneLens,
                             el::ThinLens, el::Slit, el::DoubleSlit, el::CircAperture, el::Afocal,
                             el::PathOffset>;

void validate(const Element& e);
bool is_propagation(const Element& e);
std::string element_name(const Element& e);

// Sampled complex profile of a mask-like element (slits, apertures, transmittances).
CVec element_profile(const Element& e, const Grid& g);

SampledField apply_element(const SampledField& f, const Element& e,
                           SamplingMode mode = SamplingMode::advisory);

struct Arm {
    std::vector<Element> elements;

    Arm() = default;
    Arm(std::initializer_list<Element> els) : elements(els) {}

    // Sum of optical path lengths; lenses count their 2f focal-plane path.
    double optical_path() const;
};

// Removes the longest vacuum free-space prefix shared by both arms and returns its length.
// A homogeneous delta-correlated source stays delta-correlated under free propagation, so
// the source plane can be moved forward by this amount without changing any cross term.
double strip_common_free_space(Arm& a, Arm& b);

struct BeamsplitterParams {
    double theta = kPi / 4.0;
    double phi_tau = 0.0;
    double phi_rho = 0.0;
};

Eigen::Matrix2cd beamsplitter_matrix(const BeamsplitterParams& p);
FieldPair beamsplit(const FieldPair& pair, const BeamsplitterParams& p);

// Dense impulse response h(x, x0) with out(x) = sum_j h(x, x0_j) in_j dx.
CMat arm_response(const Arm& arm, const Grid& source_grid, const Grid& detect_grid, double k,
                  std::size_t max_entries = std::size_t(1) << 24,
                  SamplingMode mode = SamplingMode::advisory);

}  // namespace incoh
