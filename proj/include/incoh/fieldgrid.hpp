#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace incoh {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Uniform 1-D transverse sampling. Sample i sits at center + (i - n/2)*dx,
// with n/2 rounded down.
struct Grid {
    std::size_t n = 0;
    double dx = 0.0;
    double center = 0.0;

    double x(std::size_t i) const {
        return center + (static_cast<double>(i) - static_cast<double>(n / 2)) * dx;
    }
    // Nearest sample index; may fall outside [0, n).
    long index_of(double xpos) const;
    double span() const { return static_cast<double>(n) * dx; }
    RVec coords() const;
    bool same_as(const Grid& o, double rel_tol = 1e-9) const;
};

Grid make_grid(std::size_t n, double dx, double center = 0.0);

struct SampledField {
    Grid grid;
    CVec amp;
    double k = 0.0;

    SampledField() = default;
    SampledField(Grid g, CVec a, double wavenumber);

    double wavelength() const { return 2.0 * kPi / k; }
};

SampledField constant_field(const Grid& g, double k, cplx value = 1.0);

struct FieldPair {
    SampledField a;
    SampledField b;

    FieldPair(SampledField first, SampledField second);
};

cplx quad_integral(const SampledField& f);
RVec intensity(const SampledField& f);
CVec interference_term(const FieldPair& pair);

// Total power sum |amp|^2 dx.
double power(const SampledField& f);

}  // namespace incoh
