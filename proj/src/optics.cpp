#include "incoh/optics.hpp"

#include <cmath>
#include <sstream>

#include "incoh/fft.hpp"
#include "incoh/pipeline.hpp"

namespace incoh {

namespace {
const cplx I(0.0, 1.0);

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_kernel(const PropagationKernel& kern) {
    if (kern.z_diff == 0.0 || !std::isfinite(kern.z_diff) || !std::isfinite(kern.z_opt))
        throw OpticsError("propagation kernel needs a finite, non-zero diffraction length");
}

void enforce(const SamplingCheck& c, SamplingMode mode) {
    if (!c.ok && mode == SamplingMode::strict) throw SamplingError(c.describe());
}
}  // namespace

PropagationKernel cascade(const std::vector<PropagationKernel>& kerns) {
    if (kerns.empty()) throw OpticsError("cascade needs at least one kernel");
    PropagationKernel total{0.0, 0.0};
    for (const auto& k : kerns) {
        total.z_opt += k.z_opt;
        total.z_diff += k.z_diff;
    }
    return total;
}

cplx kernel_prefactor(double k, double z_diff) {
    return std::sqrt(cplx(k, 0.0) / (I * 2.0 * kPi * z_diff));
}

cplx kernel_value(double k, const PropagationKernel& kern, double offset) {
    return kernel_prefactor(k, kern.z_diff) * std::exp(I * (k * kern.z_opt)) *
           std::exp(I * (k * offset * offset / (2.0 * kern.z_diff)));
}

std::string SamplingCheck::describe() const {
    std::ostringstream os;
    os << "sampling " << (ok ? "adequate" : "violated") << ": dx=" << dx << " m, limit=" << limit
       << " m";
    return os.str();
}

SamplingCheck check_sampling(const Grid& g, double k, double z_diff) {
    SamplingCheck c;
    c.dx = g.dx;
    c.limit = (2.0 * kPi / k) * std::abs(z_diff) / g.span();
    c.ok = g.dx <= c.limit * (1.0 + 1e-12);
    return c;
}

SampledField propagate(const SampledField& f, const PropagationKernel& kern, SamplingMode mode) {
    require_kernel(kern);
    enforce(check_sampling(f.grid, f.k, kern.z_diff), mode);
    const std::size_t n = f.grid.n;
    const double dx = f.grid.dx;
    CVec taps(static_cast<Eigen::Index>(2 * n - 1));
    for (std::size_t m = 0; m < 2 * n - 1; ++m) {
        const double off = (static_cast<double>(m) - static_cast<double>(n - 1)) * dx;
        taps[static_cast<Eigen::Index>(m)] = kernel_value(f.k, kern, off) * dx;
    }
    CVec out = CVec::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += taps[static_cast<Eigen::Index>(i + n - 1 - j)] * f.amp[static_cast<Eigen::Index>(j)];
        out[static_cast<Eigen::Index>(i)] = acc;
    }
    return SampledField(f.grid, std::move(out), f.k);
}

SampledField propagate_fast(const SampledField& f, const PropagationKernel& kern,
                            SamplingMode mode) {
    require_kernel(kern);
    enforce(check_sampling(f.grid, f.k, kern.z_diff), mode);
    const std::size_t n = f.grid.n;
    CVec taps(static_cast<Eigen::Index>(2 * n - 1));
    for (std::size_t m = 0; m < 2 * n - 1; ++m) {
        const double off = (static_cast<double>(m) - static_cast<double>(n - 1)) * f.grid.dx;
        taps[static_cast<Eigen::Index>(m)] = kernel_value(f.k, kern, off) * f.grid.dx;
    }
    ToeplitzConvolver conv(taps, n);
    CVec out(static_cast<Eigen::Index>(n));
    conv.apply(f.amp.data(), out.data());
    return SampledField(f.grid, std::move(out), f.k);
}

SampledField propagate_cascade(const SampledField& f, const std::vector<PropagationKernel>& kerns,
                               SamplingMode mode) {
    return propagate(f, cascade(kerns), mode);
}

SampledField lens_fourier(const SampledField& f, double focal) {
    if (focal == 0.0 || !std::isfinite(focal)) throw OpticsError("lens focal length must be non-zero");
    const std::size_t n = f.grid.n;
    const cplx pre = kernel_prefactor(f.k, focal) * std::exp(I * (2.0 * f.k * focal)) * f.grid.dx;
    const RVec x = f.grid.coords();
    CVec out(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        cplx acc = 0.0;
        for (Eigen::Index j = 0; j < x.size(); ++j)
            acc += std::exp(-I * (f.k * x[i] * x[j] / focal)) * f.amp[j];
        out[i] = pre * acc;
    }
    return SampledField(f.grid, std::move(out), f.k);
}

void validate(const Element& e) {
    std::visit(overloaded{
                   [](const el::FreeSpace& s) {
                       if (!std::isfinite(s.length)) throw OpticsError("free-space length must be finite");
                   },
                   [](const el::Medium& s) {
                       if (!(s.index > 0.0) || !std::isfinite(s.length))
                           throw OpticsError("medium needs positive index and finite length");
                   },
                   [](const el::Transmittance& t) {
                       if (static_cast<std::size_t>(t.profile.size()) != t.grid.n)
                           throw OpticsError("transmittance profile length does not match its grid");
                   },
                   [](const el::FocalPlaneLens& l) {
                       if (l.f == 0.0 || !std::isfinite(l.f)) throw OpticsError("lens focal length must be non-zero");
                   },
                   [](const el::ThinLens& l) {
                       if (l.f == 0.0 || !std::isfinite(l.f)) throw OpticsError("lens focal length must be non-zero");
                   },
                   [](const el::Slit& s) {
                       if (!(s.b > 0.0)) throw OpticsError("slit width must be positive");
                   },
                   [](const el::DoubleSlit& s) {
                       if (!(s.b > 0.0) || !(s.d > s.b)) throw OpticsError("double slit requires d > b > 0");
                   },
                   [](const el::CircAperture& a) {
                       if (!(a.D > 0.0)) throw OpticsError("aperture diameter must be positive");
                   },
                   [](const el::Afocal& a) {
                       if (a.f_in <= 0.0 || a.f_out <= 0.0) throw OpticsError("afocal focal lengths must be positive");
                   },
                   [](const el::PathOffset&) {},
               },
               e);
}

bool is_propagation(const Element& e) {
    return std::holds_alternative<el::FreeSpace>(e) || std::holds_alternative<el::Medium>(e);
}

std::string element_name(const Element& e) {
    return std::visit(overloaded{
                          [](const el::FreeSpace&) { return std::string("free_space"); },
                          [](const el::Medium&) { return std::string("medium"); },
                          [](const el::Transmittance&) { return std::string("transmittance"); },
                          [](const el::FocalPlaneLens&) { return std::string("focal_plane_lens"); },
                          [](const el::ThinLens&) { return std::string("thin_lens"); },
                          [](const el::Slit&) { return std::string("slit"); },
                          [](const el::DoubleSlit&) { return std::string("double_slit"); },
                          [](const el::CircAperture&) { return std::string("aperture"); },
                          [](const el::Afocal&) { return std::string("afocal"); },
                          [](const el::PathOffset&) { return std::string("path_offset"); },
                      },
                      e);
}

namespace {
bool inside(double x, double c, double half) {
    return std::abs(x - c) <= half * (1.0 + 1e-12);
}
}  // namespace

CVec element_profile(const Element& e, const Grid& g) {
    validate(e);
    const Eigen::Index n = static_cast<Eigen::Index>(g.n);
    CVec p = CVec::Zero(n);
    std::visit(overloaded{
                   [&](const el::Transmittance& t) {
                       if (!t.grid.same_as(g))
                           throw OpticsError("transmittance grid does not match field grid");
                       p = t.profile;
                   },
                   [&](const el::Slit& s) {
                       for (Eigen::Index i = 0; i < n; ++i)
                           if (inside(g.x(static_cast<std::size_t>(i)), s.center, s.b / 2)) p[i] = 1.0;
                   },
                   [&](const el::DoubleSlit& s) {
                       const cplx second = std::exp(I * s.phase2);
                       for (Eigen::Index i = 0; i < n; ++i) {
                           const double x = g.x(static_cast<std::size_t>(i));
                           if (inside(x, -s.d / 2, s.b / 2)) p[i] = 1.0;
                           if (inside(x, s.d / 2, s.b / 2)) p[i] = second;
                       }
                   },
                   [&](const el::CircAperture& a) {
                       for (Eigen::Index i = 0; i < n; ++i)
                           if (inside(g.x(static_cast<std::size_t>(i)), a.center, a.D / 2)) p[i] = 1.0;
                   },
                   [&](const auto&) { throw OpticsError(element_name(e) + " has no mask profile"); },
               },
               e);
    return p;
}

SampledField apply_element(const SampledField& f, const Element& e, SamplingMode mode) {
    validate(e);
    return std::visit(
        overloaded{
            [&](const el::FreeSpace& s) { return propagate(f, PropagationKernel::vacuum(s.length), mode); },
            [&](const el::Medium& s) { return propagate(f, PropagationKernel::medium(s.length, s.index), mode); },
            [&](const el::FocalPlaneLens& l) { return lens_fourier(f, l.f); },
            [&](const el::ThinLens& l) {
                CVec out = f.amp;
                for (Eigen::Index i = 0; i < out.size(); ++i) {
                    const double x = f.grid.x(static_cast<std::size_t>(i));
                    out[i] *= std::exp(-I * (f.k * x * x / (2.0 * l.f)));
                }
                return SampledField(f.grid, std::move(out), f.k);
            },
            [&](const el::PathOffset& p) {
                return SampledField(f.grid, f.amp * std::exp(I * (f.k * p.delta)), f.k);
            },
            [&](const el::Afocal&) -> SampledField {
                throw OpticsError("afocal relay acts on a propagated point response; use an arm");
            },
            [&](const auto&) {
                return SampledField(f.grid, f.amp.cwiseProduct(element_profile(e, f.grid)), f.k);
            },
        },
        e);
}

double Arm::optical_path() const {
    double z = 0.0;
    for (const auto& e : elements) {
        std::visit(overloaded{
                       [&](const el::FreeSpace& s) { z += s.length; },
                       [&](const el::Medium& s) { z += s.index * s.length; },
                       [&](const el::FocalPlaneLens& l) { z += 2.0 * l.f; },
                       [&](const el::Afocal& a) { z += 2.0 * (a.f_in + a.f_out); },
                       [&](const el::PathOffset& p) { z += p.delta; },
                       [](const auto&) {},
                   },
                   e);
    }
    return z;
}

namespace {
double leading_free_space(const Arm& a) {
    double z = 0.0;
    for (const auto& e : a.elements) {
        if (const auto* s = std::get_if<el::FreeSpace>(&e)) z += s->length;
        else break;
    }
    return z;
}

void drop_leading(Arm& a, double amount) {
    std::vector<Element> rest;
    double left = amount;
    std::size_t i = 0;
    for (; i < a.elements.size(); ++i) {
        auto* s = std::get_if<el::FreeSpace>(&a.elements[i]);
        if (!s) break;
        if (s->length <= left) {
            left -= s->length;
            continue;
        }
        rest.push_back(el::FreeSpace{s->length - left});
        left = 0.0;
        ++i;
        break;
    }
    for (; i < a.elements.size(); ++i) rest.push_back(a.elements[i]);
    a.elements = std::move(rest);
}
}  // namespace

double strip_common_free_space(Arm& a, Arm& b) {
    const double common = std::min(leading_free_space(a), leading_free_space(b));
    if (common <= 0.0) return 0.0;
    drop_leading(a, common);
    drop_leading(b, common);
    return common;
}

Eigen::Matrix2cd beamsplitter_matrix(const BeamsplitterParams& p) {
    if (p.theta < 0.0 || p.theta > kPi / 2 + 1e-15) throw OpticsError("beamsplitter angle outside [0, pi/2]");
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    Eigen::Matrix2cd m;
    m(0, 0) = std::exp(I * p.phi_tau) * c;
    m(0, 1) = std::exp(I * p.phi_rho) * s;
    m(1, 0) = -std::exp(-I * p.phi_rho) * s;
    m(1, 1) = std::exp(-I * p.phi_tau) * c;
    return m;
}

FieldPair beamsplit(const FieldPair& pair, const BeamsplitterParams& p) {
    const Eigen::Matrix2cd m = beamsplitter_matrix(p);
    CVec b1 = m(0, 0) * pair.a.amp + m(0, 1) * pair.b.amp;
    CVec b2 = m(1, 0) * pair.a.amp + m(1, 1) * pair.b.amp;
    return FieldPair(SampledField(pair.a.grid, std::move(b1), pair.a.k),
                     SampledField(pair.a.grid, std::move(b2), pair.a.k));
}

CMat arm_response(const Arm& arm, const Grid& source_grid, const Grid& detect_grid, double k,
                  std::size_t max_entries, SamplingMode mode) {
    if (detect_grid.n * source_grid.n > max_entries)
        throw OpticsError("arm response exceeds the configured matrix size cap");
    return Pipeline(arm, source_grid, detect_grid, k, mode, max_entries).response();
}

}  // namespace incoh
