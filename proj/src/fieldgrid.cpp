#include "incoh/fieldgrid.hpp"

#include <cmath>
#include <string>

namespace incoh {

Grid make_grid(std::size_t n, double dx, double center) {
    if (n < 2) throw GridError("grid needs at least 2 samples, got " + std::to_string(n));
    if (!(dx > 0.0) || !std::isfinite(dx)) throw GridError("grid pitch must be positive");
    if (!std::isfinite(center)) throw GridError("grid center must be finite");
    return Grid{n, dx, center};
}

long Grid::index_of(double xpos) const {
    return static_cast<long>(std::lround((xpos - center) / dx)) + static_cast<long>(n / 2);
}

RVec Grid::coords() const {
    RVec c(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) c[static_cast<Eigen::Index>(i)] = x(i);
    return c;
}

bool Grid::same_as(const Grid& o, double rel_tol) const {
    return n == o.n && std::abs(dx - o.dx) <= rel_tol * dx &&
           std::abs(center - o.center) <= rel_tol * dx;
}

SampledField::SampledField(Grid g, CVec a, double wavenumber)
    : grid(g), amp(std::move(a)), k(wavenumber) {
    if (static_cast<std::size_t>(amp.size()) != grid.n)
        throw GridError("field length does not match grid");
    if (!(k > 0.0)) throw GridError("wavenumber must be positive");
    if (!amp.allFinite()) throw GridError("field contains non-finite samples");
}

SampledField constant_field(const Grid& g, double k, cplx value) {
    return SampledField(g, CVec::Constant(static_cast<Eigen::Index>(g.n), value), k);
}

FieldPair::FieldPair(SampledField first, SampledField second)
    : a(std::move(first)), b(std::move(second)) {
    if (!a.grid.same_as(b.grid)) throw GridError("field pair grids differ");
    if (a.k != b.k) throw GridError("field pair wavenumbers differ");
}

cplx quad_integral(const SampledField& f) {
    return f.amp.sum() * f.grid.dx;
}

RVec intensity(const SampledField& f) {
    return f.amp.cwiseAbs2();
}

CVec interference_term(const FieldPair& pair) {
    return pair.a.amp.conjugate().cwiseProduct(pair.b.amp);
}

double power(const SampledField& f) {
    return f.amp.squaredNorm() * f.grid.dx;
}

}  // namespace incoh
