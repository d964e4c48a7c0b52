#include <doctest.h>

#include <cmath>

#include "incoh/biphoton.hpp"
#include "incoh/correlate.hpp"
#include "incoh/spectrum.hpp"

using namespace incoh;

namespace {
const double kLambda = 632.8e-9;
const double kK = 2 * kPi / kLambda;
const cplx I1(0.0, 1.0);

cplx fresnel(double z, double off) {
    return std::sqrt(kK / (I1 * 2.0 * kPi * z)) * std::exp(I1 * kK * z) * std::exp(I1 * kK * off * off / (2 * z));
}

TransferQuad bs(double theta) { return transfer_from_beamsplitter({theta, 0.0, 0.0}); }
}  // namespace

TEST_CASE("discrete two-photon amplitudes") {
    DiscreteBiphoton kind1{BiphotonKind::I, 0.0, 1.0, 2.0};
    CHECK(std::abs(discrete_amplitude(kind1, TransferQuad{})) == 0.0);

    DiscreteBiphoton kind2{BiphotonKind::II, kPi, 1.0, 2.0};
    CHECK(std::abs(discrete_amplitude(kind2, bs(kPi / 4))) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    TransferQuad same;
    same.phi << 1.0, 1.0, 1.0, 1.0;
    kind1.beta = kPi;
    CHECK(std::abs(discrete_amplitude(kind1, same)) < 1e-15);
}

TEST_CASE("HOM coincidences") {
    for (double beta = 0.0; beta <= 2 * kPi; beta += 0.1) {
        const DiscreteBiphoton s{BiphotonKind::II, beta, 1.0, 2.0};
        CHECK(std::abs(discrete_coincidence(s, bs(kPi / 4)) - (1 - std::cos(beta)) / 4) < 1e-12);
        const double th = 0.3;
        const double c = std::cos(th), sn = std::sin(th);
        const double expect = 0.5 * (std::pow(c, 4) + std::pow(sn, 4) - 2 * c * c * sn * sn * std::cos(beta));
        CHECK(std::abs(discrete_coincidence(s, bs(th)) - expect) < 1e-12);
    }
    const auto deg = DiscreteBiphoton::degenerate(3.0);
    CHECK(discrete_coincidence(deg, bs(kPi / 4)) < 1e-30);
    CHECK(discrete_coincidence(deg, bs(0.0)) == doctest::Approx(1.0));
    for (double th : {0.1, 0.5, 1.2})
        CHECK(discrete_coincidence(deg, bs(th)) == doctest::Approx(std::pow(std::cos(2 * th), 2)).epsilon(1e-12));
    CHECK_THROWS(validate(DiscreteBiphoton{BiphotonKind::II_degenerate, 0.0, 1.0, 2.0}));
}

TEST_CASE("phase-independent two-mode inputs behind a beamsplitter") {
    CHECK(fano_coincidence(moments_single_photons(), bs(kPi / 4)) == doctest::Approx(0.0).scale(1.0));
    // thermal: <n1 n2> - <n1><n2> = (I1 - I2)^2 c^2 s^2, zero at equal intensity
    for (double th : {0.2, kPi / 4, 1.0}) {
        const double c2 = std::pow(std::cos(th), 2), s2 = std::pow(std::sin(th), 2);
        const double I1v = 1.3, I2v = 0.4;
        const double n1 = I1v * c2 + I2v * s2, n2 = I1v * s2 + I2v * c2;
        CHECK(fano_coincidence(moments_thermal(I1v, I2v), bs(th)) - n1 * n2 ==
              doctest::Approx(std::pow(I1v - I2v, 2) * c2 * s2).epsilon(1e-12));
        CHECK(fano_coincidence(moments_coherent(I1v, I2v), bs(th)) - n1 * n2 ==
              doctest::Approx(-2 * I1v * I2v * c2 * s2).epsilon(1e-12));
    }
}

TEST_CASE("two-colour double slit frequencies") {
    const double w1 = 2 * kPi * kSpeedOfLight / 760e-9, w2 = 2 * kPi * kSpeedOfLight / 840e-9;
    const double d = 310e-6, z = 1.0;
    const Grid g = make_grid(4096, 0.08e-3);
    auto period = [&](const DiscreteBiphoton& s, int mode) {
        RVec cut(4096);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            const double x1 = mode == 0 ? x : (mode == 1 ? 0.0 : x);
            const double x2 = mode == 0 ? 0.0 : (mode == 1 ? x : (mode == 2 ? x : -x));
            cut[i] = two_color_doubleslit(s, x1, x2, d, z);
        }
        return dominant_period(cut, g.dx).period;
    };
    const DiscreteBiphoton k1{BiphotonKind::I, 0.0, w1, w2};
    const DiscreteBiphoton k2{BiphotonKind::II, 0.0, w1, w2};
    CHECK(period(k1, 2) == doctest::Approx(2 * kPi * kSpeedOfLight * z / ((w1 + w2) * d)).epsilon(1e-3));
    CHECK(period(k1, 3) == doctest::Approx(2 * kPi * kSpeedOfLight * z / ((w1 - w2) * d)).epsilon(1e-2));
    CHECK(period(k2, 0) == doctest::Approx(2 * kPi * kSpeedOfLight * z / (w1 * d)).epsilon(1e-3));
    CHECK(period(k2, 2) == doctest::Approx(2 * kPi * kSpeedOfLight * z / ((w1 - w2) * d)).epsilon(1e-2));
}

TEST_CASE("perfect entanglement through identity arms is a diagonal ridge") {
    const Grid g = make_grid(64, 1e-5);
    const auto bp = factorized_biphoton(g, CVec::Ones(64), kK, kK);
    const CMat id = CMat::Identity(64, 64) / g.dx;
    const auto amp = joint_propagate(bp, id, id, g);
    const Eigen::MatrixXd map = coincidence_map(amp);
    CHECK(map.diagonal().minCoeff() > 0.0);
    CHECK((map - Eigen::MatrixXd(map.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    const auto dense = to_dense(bp);
    CHECK((coincidence_map(dense) - coincidence_map(amp)).cwiseAbs().maxCoeff() <= 1e-9 * map.maxCoeff());
    CHECK_THROWS(factorized_biphoton(g, CVec::Ones(63), kK, kK));
}

TEST_CASE("entangled ghost diffraction behaves as an unfolded path of length Z_en") {
    const Grid g = make_grid(768, 8e-6);
    const double zo1 = 0.1, zo2 = 0.1, zr = 0.1;
    const CVec t = element_profile(el::DoubleSlit{100e-6, 300e-6}, g);
    const CMat ho = arm_response(Arm{el::FreeSpace{zo1}, el::Transmittance{g, t}, el::FreeSpace{zo2}}, g, g, kK);
    const CMat hr = arm_response(Arm{el::FreeSpace{zr}}, g, g, kK);
    const auto amp = joint_propagate(factorized_biphoton(g, CVec::Ones(768), kK, kK), ho, hr, g);
    const long c = g.index_of(0.0);
    RVec sim(201), unfolded(201);
    for (int i = 0; i < 201; ++i) {
        const long r = c - 100 + i;
        sim[i] = std::norm(amp.dense(r, c));
        cplx s = 0.0;
        for (std::size_t m = 0; m < g.n; ++m) s += fresnel(zo2, g.x(r) - g.x(m)) * t[m] * fresnel(zo1 + zr, g.x(m));
        unfolded[i] = std::norm(s * g.dx);
    }
    CHECK(pearson(sim, unfolded) >= 0.99);
    CHECK(ghost_entangled_length(zo1, zo2, zr).value == doctest::Approx(1.0 / (1 / zo2 + 1 / (zo1 + zr))));
}

TEST_CASE("focused pump at z0 = 2f builds the product double slit of the two apertures") {
    const Grid g = make_grid(1024, 10e-6);
    const double f = 0.1, z0 = 2 * f, z = 0.5, b = 100e-6, d = 300e-6;
    CVec a1 = CVec::Zero(1024), a2 = CVec::Zero(1024);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        if (std::abs(x + d / 2) <= b / 2 || (x > 0 && x <= 400e-6)) a1[i] = 1.0;
        // mirrored second aperture, so that A1(x) A2(-x) is the double slit
        if (std::abs(x + d / 2) <= b / 2 || (x > 0 && x <= 400e-6)) a2[i] = 1.0;
    }
    const CMat h1 = arm_response(Arm{el::FreeSpace{z0}, el::Transmittance{g, a1}, el::FreeSpace{z}}, g, g, kK);
    const CMat h2 = arm_response(Arm{el::FreeSpace{z0}, el::Transmittance{g, a2}, el::FreeSpace{z}}, g, g, kK);
    const auto amp = joint_propagate(factorized_biphoton(g, gaussian_pump(g, kK, f), kK, kK), h1, h2, g);
    const long c = g.index_of(0.0);
    RVec sim(401), eq(401);
    for (int i = 0; i < 401; ++i) {
        const long r = c - 200 + i;
        sim[i] = std::norm(amp.dense(r, c));
        const double u = g.x(r);
        cplx s = 0.0;
        const int m = 400;
        for (double cc : {-d / 2, d / 2})
            for (int j = 0; j < m; ++j) {
                const double xp = cc - b / 2 + (j + 0.5) * b / m;
                s += std::exp(I1 * 2.0 * kK * ((z0 + z) / (2 * z0 * z) * xp * xp - u / 2 * xp / z));
            }
        eq[i] = std::norm(s);
    }
    CHECK(pearson(sim, eq) >= 0.98);
}

TEST_CASE("entangled imaging equation") {
    const auto ok = entangled_ghost_image_check(0.2, 0.1, 0.1, 0.1);
    CHECK(ok.ok);
    CHECK(ok.magnification == doctest::Approx(-1.0));
    CHECK_FALSE(entangled_ghost_image_check(0.1, 0.3, 0.2, 0.1).ok);
    CHECK(entangled_image_distance(0.15, 0.1) == doctest::Approx(0.3));
    CHECK_THROWS(entangled_image_distance(0.1, 0.1));
}
