#include "incoh/biphoton.hpp"

#include <cmath>
#include <stdexcept>

namespace incoh {

namespace {
const cplx I(0.0, 1.0);
}

void validate(const DiscreteBiphoton& s) {
    if (s.kind == BiphotonKind::II_degenerate && s.omega1 != s.omega2)
        throw std::invalid_argument("degenerate biphoton requires equal frequencies");
}

TransferQuad transfer_from_beamsplitter(const BeamsplitterParams& p) {
    return TransferQuad{beamsplitter_matrix(p)};
}

cplx discrete_amplitude(const DiscreteBiphoton& s, const TransferQuad& q) {
    validate(s);
    const cplx eb = std::exp(I * s.beta);
    switch (s.kind) {
        case BiphotonKind::I: return (q.p11() * q.p21() + eb * q.p12() * q.p22()) / std::sqrt(2.0);
        case BiphotonKind::II: return (q.p11() * q.p22() + eb * q.p12() * q.p21()) / std::sqrt(2.0);
        case BiphotonKind::II_degenerate: return q.p11() * q.p22() + q.p12() * q.p21();
    }
    return 0.0;
}

double discrete_coincidence(const DiscreteBiphoton& s, const TransferQuad& q) {
    if (s.kind != BiphotonKind::II_degenerate) return std::norm(discrete_amplitude(s, q));
    validate(s);
    const cplx a = q.p11() * q.p22();
    const cplx b = q.p12() * q.p21();
    return std::norm(a) + std::norm(b) + 2.0 * std::real(std::conj(a) * b);
}

FanoMoments moments_single_photons() { return {0.0, 0.0, 1.0}; }
FanoMoments moments_thermal(double I1, double I2) { return {2.0 * I1 * I1, 2.0 * I2 * I2, I1 * I2}; }
FanoMoments moments_coherent(double I1, double I2) { return {I1 * I1, I2 * I2, I1 * I2}; }

double fano_coincidence(const FanoMoments& m, const TransferQuad& q) {
    const cplx direct = q.p11() * q.p22();
    const cplx exchange = q.p12() * q.p21();
    return m.n11 * std::norm(q.p11() * q.p21()) + m.n22 * std::norm(q.p12() * q.p22()) +
           m.n12 * (std::norm(direct) + std::norm(exchange)) +
           m.n12 * 2.0 * std::real(std::conj(direct) * exchange);
}

double two_color_doubleslit(const DiscreteBiphoton& s, double x1, double x2, double d, double z) {
    validate(s);
    const double scale = d / (kSpeedOfLight * z);
    double arg = 0.0;
    switch (s.kind) {
        case BiphotonKind::I: arg = (s.omega1 * x1 + s.omega2 * x2) * scale; break;
        case BiphotonKind::II:
        case BiphotonKind::II_degenerate: arg = (s.omega1 * x1 - s.omega2 * x2) * scale; break;
    }
    return 1.0 + std::cos(arg + s.beta);
}

ContinuousBiphoton factorized_biphoton(const Grid& g, CVec pump, double k1, double k2) {
    if (static_cast<std::size_t>(pump.size()) != g.n) throw std::invalid_argument("pump length does not match grid");
    ContinuousBiphoton bp;
    bp.form = ContinuousBiphoton::Form::factorized;
    bp.grid = g;
    bp.pump = std::move(pump);
    bp.k1 = k1;
    bp.k2 = k2;
    return bp;
}

ContinuousBiphoton to_dense(const ContinuousBiphoton& bp) {
    if (bp.form == ContinuousBiphoton::Form::dense) return bp;
    ContinuousBiphoton out = bp;
    out.form = ContinuousBiphoton::Form::dense;
    out.dense = CMat(bp.pump.asDiagonal()) / bp.grid.dx;
    out.pump.resize(0);
    return out;
}

ContinuousBiphoton joint_propagate(const ContinuousBiphoton& bp, const CMat& h1, const CMat& h2,
                                   const Grid& detect_grid, std::size_t max_entries) {
    const auto n = static_cast<Eigen::Index>(bp.grid.n);
    if (h1.cols() != n || h2.cols() != n) throw std::invalid_argument("arm responses do not match the source grid");
    if (static_cast<std::size_t>(h1.rows()) * static_cast<std::size_t>(h2.rows()) > max_entries)
        throw std::invalid_argument("joint amplitude exceeds the configured matrix size cap");
    ContinuousBiphoton out;
    out.form = ContinuousBiphoton::Form::dense;
    out.grid = detect_grid;
    out.k1 = bp.k1;
    out.k2 = bp.k2;
    const double dx = bp.grid.dx;
    if (bp.form == ContinuousBiphoton::Form::factorized) {
        out.dense = (h1 * bp.pump.asDiagonal()) * h2.transpose() * dx;
    } else {
        out.dense = h1 * bp.dense * h2.transpose() * (dx * dx);
    }
    return out;
}

Eigen::MatrixXd coincidence_map(const ContinuousBiphoton& bp) {
    if (bp.form != ContinuousBiphoton::Form::dense) return coincidence_map(to_dense(bp));
    return bp.dense.cwiseAbs2();
}

RVec coincidence_cut_fixed_x2(const ContinuousBiphoton& bp, std::size_t x2_index) {
    if (bp.form != ContinuousBiphoton::Form::dense) return coincidence_cut_fixed_x2(to_dense(bp), x2_index);
    return bp.dense.col(static_cast<Eigen::Index>(x2_index)).cwiseAbs2();
}

CVec gaussian_pump(const Grid& g, double k, double f) {
    CVec c(static_cast<Eigen::Index>(g.n));
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        c[static_cast<Eigen::Index>(i)] = std::exp(-I * (k * x * x / (2.0 * f)));
    }
    return c;
}

ImagingCheck entangled_ghost_image_check(double z_o, double z1, double z2, double f, double rel_tol) {
    if (!(z_o > 0.0) || !(z1 >= 0.0) || !(z2 >= 0.0) || !(z1 + z2 > 0.0) || f == 0.0)
        throw std::invalid_argument("imaging check needs positive lengths");
    ImagingCheck c;
    c.residual = 1.0 / z_o + 1.0 / (z1 + z2) - 1.0 / f;
    c.ok = std::abs(c.residual) * std::abs(f) <= rel_tol;
    c.magnification = -(z1 + z2) / z_o;
    return c;
}

double entangled_image_distance(double z_o, double f) {
    const double inv = 1.0 / f - 1.0 / z_o;
    if (inv == 0.0) throw std::invalid_argument("object at the focal plane has no finite image");
    return 1.0 / inv;
}

}  // namespace incoh
