#include <doctest.h>

#include <cmath>

#include "incoh/optics.hpp"
#include "incoh/pipeline.hpp"

using namespace incoh;

namespace {
const double kLambda = 632.8e-9;
const double kK = 2 * kPi / kLambda;
const cplx I1(0.0, 1.0);

cplx fresnel(double z, double off) {
    return std::sqrt(kK / (I1 * 2.0 * kPi * z)) * std::exp(I1 * kK * z) * std::exp(I1 * kK * off * off / (2 * z));
}

double rms_width(const RVec& I, const RVec& x) {
    const double m0 = I.sum();
    const double m1 = I.dot(x) / m0;
    return std::sqrt(I.dot(x.cwiseProduct(x)) / m0 - m1 * m1);
}
}  // namespace

TEST_CASE("plane wave picks up only exp(ikz) away from the window edges") {
    const Grid g = make_grid(4096, 2e-6);
    const double z = 0.1;
    const auto out = propagate(constant_field(g, kK), PropagationKernel::vacuum(z));
    const cplx ph = std::exp(I1 * kK * z);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        if (std::abs(g.x(i)) < 0.25 * g.span()) worst = std::max(worst, std::abs(out.amp[i] - ph));
    CHECK(worst < 5e-2);
    double mod = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        if (std::abs(g.x(i)) < 0.25 * g.span()) mod = std::max(mod, std::abs(std::abs(out.amp[i]) - 1.0));
    CHECK(mod < 5e-2);
}

TEST_CASE("gaussian beam width after free propagation") {
    const double w0 = 200e-6, z = 0.3;
    const Grid g = make_grid(2048, 4e-6);
    CVec a(2048);
    for (std::size_t i = 0; i < g.n; ++i) a[i] = std::exp(-g.x(i) * g.x(i) / (w0 * w0));
    const auto out = propagate(SampledField(g, a, kK), PropagationKernel::vacuum(z));
    const double zr = kPi * w0 * w0 / kLambda;
    const double w = w0 * std::sqrt(1 + (z / zr) * (z / zr));
    CHECK(2.0 * rms_width(intensity(out), g.coords()) == doctest::Approx(w).epsilon(0.005));
    CHECK(power(out) == doctest::Approx(power(SampledField(g, a, kK))).epsilon(1e-6));
}

TEST_CASE("double slit near field against a fine quadrature of the Fresnel integral") {
    const double b = 125e-6, d = 310e-6, z = 0.16;
    const Grid g = make_grid(4096, 1e-6);
    const auto slit = apply_element(constant_field(g, kK), el::DoubleSlit{b, d});
    const auto out = propagate(slit, PropagationKernel::vacuum(z));
    const int m = 20000;
    double peak = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < g.n; i += 7) {
        const double x = g.x(i);
        if (std::abs(x) > 1e-3) continue;
        cplx s = 0.0;
        for (double c : {-d / 2, d / 2})
            for (int j = 0; j < m; ++j) s += fresnel(z, x - (c - b / 2 + (j + 0.5) * b / m));
        s *= b / m;
        peak = std::max(peak, std::abs(s));
        worst = std::max(worst, std::abs(s - out.amp[i]));
    }
    CHECK(worst <= 1e-3 * peak);
}

TEST_CASE("fast and direct propagation agree") {
    const Grid g = make_grid(512, 6e-6);
    CVec a(512);
    for (std::size_t i = 0; i < g.n; ++i) a[i] = std::exp(-std::pow(g.x(i) / 80e-6, 2)) * std::exp(I1 * 1e3 * g.x(i));
    const SampledField f(g, a, kK);
    const auto p1 = propagate(f, PropagationKernel::vacuum(0.1));
    const auto p2 = propagate_fast(f, PropagationKernel::vacuum(0.1));
    CHECK((p1.amp - p2.amp).cwiseAbs().maxCoeff() < 1e-9 * p1.amp.cwiseAbs().maxCoeff());
}

TEST_CASE("propagation kernels cascade by adding lengths") {
    const Grid g = make_grid(512, 8e-6);
    CVec a(512);
    for (std::size_t i = 0; i < g.n; ++i) a[i] = std::exp(-std::pow(g.x(i) / 100e-6, 2));
    const auto k = cascade({PropagationKernel::vacuum(0.1), PropagationKernel::vacuum(0.2)});
    CHECK(k.z_opt == doctest::Approx(0.3));
    CHECK(k.z_diff == doctest::Approx(0.3));
    const SampledField f(g, a, kK);
    const auto one = propagate(f, PropagationKernel::vacuum(0.3));
    const auto two = propagate_cascade(f, {PropagationKernel::vacuum(0.1), PropagationKernel::vacuum(0.2)});
    CHECK((one.amp - two.amp).norm() <= 1e-6 * one.amp.norm());

    const auto rod = cascade({PropagationKernel::vacuum(0.338 - 0.155), PropagationKernel::medium(0.155, 1.5163)});
    CHECK(rod.z_opt == doctest::Approx(0.4180265).epsilon(1e-9));
    CHECK(rod.z_diff == doctest::Approx(0.338 - 0.155 + 0.155 / 1.5163).epsilon(1e-12));
    CHECK(rod.z_diff == doctest::Approx(0.2852).epsilon(1e-3));
    CHECK_THROWS_AS(cascade({}), OpticsError);
}

TEST_CASE("sampling check follows the local chirp limit") {
    const Grid g = make_grid(1024, 10e-6);
    const auto s = check_sampling(g, kK, 0.1);
    CHECK(s.limit == doctest::Approx(kLambda * 0.1 / g.span()));
    CHECK_FALSE(s.ok);
    CHECK(check_sampling(g, kK, 0.2).ok);
    CVec a = CVec::Zero(1024);
    a[512] = 1.0;
    CHECK_THROWS_AS(propagate(SampledField(g, a, kK), PropagationKernel::vacuum(0.1), SamplingMode::strict),
                    SamplingError);
    CHECK_NOTHROW(propagate(SampledField(g, a, kK), PropagationKernel::vacuum(0.1)));
}

TEST_CASE("focal-plane lens gives the double-slit Fourier fringes") {
    const double b = 125e-6, d = 310e-6, f = 0.2;
    const Grid g = make_grid(1024, 5e-6);
    const auto slit = apply_element(constant_field(g, kK), el::DoubleSlit{b, d});
    const Grid out_g = make_grid(1024, 5e-6);
    const CMat h = arm_response(Arm{el::DoubleSlit{b, d}, el::FocalPlaneLens{f}}, g, out_g, kK);
    const CVec out = h * CVec::Ones(1024) * g.dx;
    // analytic far field of the sampled slit: (2b) sinc(qb/2) cos(qd/2)
    double peak = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < out_g.n; ++i) {
        if (std::abs(out_g.x(i)) > 1e-3) continue;
        const double q = kK * out_g.x(i) / f;
        const double t = q == 0.0 ? 2 * b : 4 * std::sin(q * b / 2) / q * std::cos(q * d / 2);
        const double expect = std::abs(std::sqrt(kK / (2 * kPi * f)) * t);
        peak = std::max(peak, expect);
        worst = std::max(worst, std::abs(std::abs(out[i]) - expect));
    }
    CHECK(worst < 1e-2 * peak);
    CHECK(slit.amp.cwiseAbs().sum() * g.dx == doctest::Approx(2 * b).epsilon(1e-12));
}

TEST_CASE("constant input focuses at the centre and a double transform mirrors") {
    const Grid g = make_grid(1024, 10e-6);
    const double f = 1024 * 1e-10 / kLambda;
    const auto focus = lens_fourier(constant_field(g, kK), f);
    Eigen::Index imax;
    focus.amp.cwiseAbs().maxCoeff(&imax);
    CHECK(g.x(static_cast<std::size_t>(imax)) == 0.0);

    CVec a = CVec::Zero(1024);
    for (std::size_t i = 0; i < g.n; ++i) a[i] = std::exp(-std::pow((g.x(i) - 400e-6) / 60e-6, 2));
    const auto twice = lens_fourier(lens_fourier(SampledField(g, a, kK), f), f);
    double worst = 0.0;
    for (std::size_t i = 1; i < g.n; ++i)
        worst = std::max(worst, std::abs(std::abs(twice.amp[i]) - std::abs(a[g.n - i])));
    CHECK(worst < 1e-6);
}

TEST_CASE("mask elements") {
    const Grid g = make_grid(1024, 5e-6);
    const CVec ds = element_profile(el::DoubleSlit{125e-6, 310e-6}, g);
    int open = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        const bool in = std::abs(std::abs(g.x(i)) - 155e-6) <= 62.5e-6;
        CHECK((ds[i] != 0.0) == in);
        open += in;
    }
    CHECK(open == 50);

    const CVec ph = element_profile(el::DoubleSlit{125e-6, 310e-6, kPi}, g);
    CHECK(std::abs(ph[g.index_of(155e-6)] + ph[g.index_of(-155e-6)]) < 1e-12);
    CHECK(std::abs(ph[g.index_of(155e-6)]) == doctest::Approx(1.0));

    const CVec ones = CVec::Ones(1024);
    const auto f = apply_element(SampledField(g, ones * 0.5, kK), el::Transmittance{g, ones});
    CHECK((f.amp.array() - 0.5).abs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(validate(el::DoubleSlit{125e-6, 100e-6}), OpticsError);
    CHECK_THROWS_AS(validate(el::FreeSpace{std::nan("")}), OpticsError);
    CHECK_THROWS_AS(validate(el::ThinLens{0.0}), OpticsError);
    CHECK(element_name(el::FocalPlaneLens{0.1}) == "focal_plane_lens");
}

TEST_CASE("beamsplitter") {
    const Grid g = make_grid(32, 1e-6);
    CVec a(32), b(32);
    for (int i = 0; i < 32; ++i) {
        a[i] = cplx(std::sin(0.3 * i), std::cos(0.7 * i));
        b[i] = cplx(0.2 * i, -0.1);
    }
    const FieldPair in(SampledField(g, a, kK), SampledField(g, b, kK));

    const auto pass = beamsplit(in, {0.0, 0.4, 0.9});
    CHECK((pass.a.amp - std::exp(I1 * 0.4) * a).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((pass.b.amp - std::exp(-I1 * 0.4) * b).cwiseAbs().maxCoeff() < 1e-15);

    const auto half = beamsplit(FieldPair(SampledField(g, a, kK), constant_field(g, kK, 0.0)), {});
    CHECK((intensity(half.a) - intensity(half.b)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((intensity(half.a) - 0.5 * a.cwiseAbs2()).cwiseAbs().maxCoeff() < 1e-12);

    const auto mix = beamsplit(in, {0.37, 1.1, -0.4});
    const RVec tot_in = a.cwiseAbs2() + b.cwiseAbs2();
    const RVec tot_out = intensity(mix.a) + intensity(mix.b);
    CHECK((tot_in - tot_out).cwiseAbs().maxCoeff() < 1e-12);
    const auto m = beamsplitter_matrix({0.37, 1.1, -0.4});
    CHECK((m.adjoint() * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("free-space response matches the paraxial kernel entrywise") {
    const Grid g = make_grid(256, 20e-6);
    const double z = 0.4;
    const CMat h = arm_response(Arm{el::FreeSpace{z}}, g, g, kK);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(h(i, j) - fresnel(z, g.x(i) - g.x(j))));
    CHECK(worst <= 1e-12 * std::abs(fresnel(z, 0.0)));
}

TEST_CASE("object arm response equals the nested quadrature") {
    const Grid g = make_grid(192, 10e-6);
    const double z1 = 0.1, z2 = 0.2;
    CVec t = element_profile(el::DoubleSlit{125e-6, 310e-6, 0.5}, g);
    const CMat h = arm_response(Arm{el::FreeSpace{z1}, el::Transmittance{g, t}, el::FreeSpace{z2}}, g, g, kK);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.n; i += 5)
        for (std::size_t j = 0; j < g.n; j += 3) {
            cplx s = 0.0;
            for (std::size_t m = 0; m < g.n; ++m)
                s += fresnel(z2, g.x(i) - g.x(m)) * t[m] * fresnel(z1, g.x(m) - g.x(j));
            s *= g.dx;
            scale = std::max(scale, std::abs(s));
            worst = std::max(worst, std::abs(s - h(i, j)));
        }
    CHECK(worst <= 1e-6 * scale);
}

TEST_CASE("afocal relay images the propagated point response with magnification -f2/f1") {
    const Grid g = make_grid(128, 10e-6);
    const double z = 0.5, f1 = 0.1, f2 = 0.075, m = -f2 / f1;
    const CMat h = arm_response(Arm{el::FreeSpace{z}, el::Afocal{f1, f2}}, g, g, kK);
    const cplx c = std::exp(I1 * 2.0 * kK * (f1 + f2)) / std::sqrt(std::abs(m));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            worst = std::max(worst, std::abs(h(i, j) - c * fresnel(z, g.x(i) / m - g.x(j))));
    CHECK(worst < 1e-9 * std::abs(fresnel(z, 0.0)));
}

TEST_CASE("thin lens then focal distance matches the focal-plane map in modulus") {
    const Grid g = make_grid(1024, 4e-6);
    const double f = 0.25;
    const CMat a = arm_response(Arm{el::Slit{100e-6}, el::ThinLens{f}, el::FreeSpace{f}}, g, g, kK);
    const CMat b = arm_response(Arm{el::Slit{100e-6}, el::FocalPlaneLens{f}}, g, g, kK);
    const CVec ea = a * CVec::Ones(1024), eb = b * CVec::Ones(1024);
    CHECK((ea.cwiseAbs() - eb.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-6 * eb.cwiseAbs().maxCoeff());
}

TEST_CASE("optical path and common-prefix stripping") {
    Arm a{el::FreeSpace{0.1}, el::FreeSpace{0.05}, el::DoubleSlit{1e-4, 3e-4}, el::FocalPlaneLens{0.2}};
    Arm b{el::FreeSpace{0.12}, el::Medium{0.1, 1.5}, el::PathOffset{1e-7}};
    CHECK(a.optical_path() == doctest::Approx(0.55));
    CHECK(b.optical_path() == doctest::Approx(0.27 + 1e-7));
    CHECK(strip_common_free_space(a, b) == doctest::Approx(0.12));
    CHECK(a.optical_path() == doctest::Approx(0.43));
    CHECK(b.optical_path() == doctest::Approx(0.15 + 1e-7));
    Arm c{el::DoubleSlit{1e-4, 3e-4}};
    CHECK(strip_common_free_space(a, c) == 0.0);
}

TEST_CASE("pipeline stages reproduce the dense response") {
    const Grid g = make_grid(256, 8e-6);
    const Arm arm{el::FreeSpace{0.2}, el::Slit{300e-6, 40e-6}, el::FreeSpace{0.3}, el::ThinLens{0.15}, el::FreeSpace{0.1}};
    const Pipeline p(arm, g, g, kK);
    CVec in(256);
    for (int i = 0; i < 256; ++i) in[i] = cplx(std::cos(0.1 * i), std::sin(0.05 * i * i));
    const CVec direct = p.apply(in);
    const CVec via = p.map_matrix() * in;
    CHECK((direct - via).norm() <= 1e-10 * via.norm());
    CHECK((p.response() * g.dx - p.map_matrix()).norm() <= 1e-12 * p.map_matrix().norm());
}
