#include "incoh/correlate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace incoh {

namespace {
const cplx I(0.0, 1.0);
constexpr int kFractionBits = 80;
const long double kFixedLimit = std::ldexp(1.0L, 125);

int exponent_for(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("accumulator scale must be positive");
    return std::ilogb(scale) - kFractionBits;
}
}  // namespace

CorrelationAccumulator::CorrelationAccumulator(AccumulatorLayout layout, double scale)
    : layout_(std::move(layout)), exp_lin_(exponent_for(std::sqrt(scale))), exp_sq_(exponent_for(scale)) {
    if (layout_.n1 == 0 || layout_.n2 == 0) throw std::invalid_argument("accumulator needs non-empty detectors");
    for (const auto& [a, b] : layout_.pairs)
        if (a >= layout_.n1 || b >= layout_.n2) throw std::invalid_argument("accumulator pair index out of range");
    s1_.assign(layout_.n1, 0);
    s2_.assign(layout_.n2, 0);
    s12_.assign(layout_.full ? layout_.n1 * layout_.n2 : layout_.pairs.size(), 0);
    if (layout_.cross) {
        sc_re_.assign(layout_.n1, 0);
        sc_im_.assign(layout_.n1, 0);
        sc_sq_.assign(layout_.n1, 0);
    }
}

CorrelationAccumulator::Fixed CorrelationAccumulator::to_fixed(double v, int exponent) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in accumulator");
    const long double t = std::nearbyint(std::ldexp(static_cast<long double>(v), -exponent));
    if (std::abs(t) > kFixedLimit) throw std::overflow_error("accumulator fixed-point range exceeded; raise scale");
    return static_cast<Fixed>(t);
}

double CorrelationAccumulator::from_fixed(Fixed v, int exponent) {
    return static_cast<double>(std::ldexp(static_cast<long double>(v), exponent));
}

void CorrelationAccumulator::accumulate(const Eigen::MatrixXd& I1, const Eigen::MatrixXd& I2) {
    if (static_cast<std::size_t>(I1.rows()) != layout_.n1 || static_cast<std::size_t>(I2.rows()) != layout_.n2)
        throw std::invalid_argument("frame size differs from the accumulator layout");
    if (I1.cols() != I2.cols()) throw std::invalid_argument("detector blocks hold different frame counts");
    const RVec r1 = I1.rowwise().sum();
    const RVec r2 = I2.rowwise().sum();
    for (std::size_t i = 0; i < layout_.n1; ++i) s1_[i] += to_fixed(r1[static_cast<Eigen::Index>(i)], exp_lin_);
    for (std::size_t i = 0; i < layout_.n2; ++i) s2_[i] += to_fixed(r2[static_cast<Eigen::Index>(i)], exp_lin_);
    if (layout_.full) {
        const Eigen::MatrixXd p = I1 * I2.transpose();
        for (std::size_t a = 0; a < layout_.n1; ++a)
            for (std::size_t b = 0; b < layout_.n2; ++b)
                s12_[a * layout_.n2 + b] += to_fixed(p(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)), exp_sq_);
    } else {
        for (std::size_t q = 0; q < layout_.pairs.size(); ++q) {
            const auto a = static_cast<Eigen::Index>(layout_.pairs[q].first);
            const auto b = static_cast<Eigen::Index>(layout_.pairs[q].second);
            s12_[q] += to_fixed(I1.row(a).dot(I2.row(b)), exp_sq_);
        }
    }
    frames_ += static_cast<std::uint64_t>(I1.cols());
}

void CorrelationAccumulator::accumulate_cross(const CMat& cross) {
    if (!layout_.cross) throw std::logic_error("accumulator was built without a cross term");
    if (static_cast<std::size_t>(cross.rows()) != layout_.n1)
        throw std::invalid_argument("cross block size differs from the accumulator layout");
    const CVec s = cross.rowwise().sum();
    const RVec q = cross.cwiseAbs2().rowwise().sum();
    for (std::size_t i = 0; i < layout_.n1; ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        sc_re_[i] += to_fixed(s[e].real(), exp_lin_);
        sc_im_[i] += to_fixed(s[e].imag(), exp_lin_);
        sc_sq_[i] += to_fixed(q[e], exp_sq_);
    }
    cross_frames_ += static_cast<std::uint64_t>(cross.cols());
}

void CorrelationAccumulator::merge(const CorrelationAccumulator& o) {
    if (o.layout_.n1 != layout_.n1 || o.layout_.n2 != layout_.n2 || o.layout_.full != layout_.full ||
        o.layout_.pairs != layout_.pairs || o.layout_.cross != layout_.cross || o.exp_lin_ != exp_lin_ ||
        o.exp_sq_ != exp_sq_)
        throw std::invalid_argument("cannot merge accumulators with different layouts");
    auto add = [](std::vector<Fixed>& a, const std::vector<Fixed>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(s1_, o.s1_);
    add(s2_, o.s2_);
    add(s12_, o.s12_);
    add(sc_re_, o.sc_re_);
    add(sc_im_, o.sc_im_);
    add(sc_sq_, o.sc_sq_);
    frames_ += o.frames_;
    cross_frames_ += o.cross_frames_;
}

RVec CorrelationAccumulator::mean_I1() const {
    if (frames_ == 0) throw std::logic_error("no frames accumulated");
    RVec m(static_cast<Eigen::Index>(layout_.n1));
    for (std::size_t i = 0; i < layout_.n1; ++i)
        m[static_cast<Eigen::Index>(i)] = from_fixed(s1_[i], exp_lin_) / static_cast<double>(frames_);
    return m;
}

RVec CorrelationAccumulator::mean_I2() const {
    if (frames_ == 0) throw std::logic_error("no frames accumulated");
    RVec m(static_cast<Eigen::Index>(layout_.n2));
    for (std::size_t i = 0; i < layout_.n2; ++i)
        m[static_cast<Eigen::Index>(i)] = from_fixed(s2_[i], exp_lin_) / static_cast<double>(frames_);
    return m;
}

RVec CorrelationAccumulator::covariance_pairs() const {
    if (layout_.full) throw std::logic_error("use covariance_full for a full layout");
    if (frames_ < 2) throw std::logic_error("covariance needs at least two frames");
    const double N = static_cast<double>(frames_);
    RVec c(static_cast<Eigen::Index>(layout_.pairs.size()));
    for (std::size_t q = 0; q < layout_.pairs.size(); ++q) {
        const double a = from_fixed(s1_[layout_.pairs[q].first], exp_lin_);
        const double b = from_fixed(s2_[layout_.pairs[q].second], exp_lin_);
        c[static_cast<Eigen::Index>(q)] = (from_fixed(s12_[q], exp_sq_) - a * b / N) / (N - 1.0);
    }
    return c;
}

Eigen::MatrixXd CorrelationAccumulator::covariance_full() const {
    if (!layout_.full) throw std::logic_error("accumulator holds selected pairs only");
    if (frames_ < 2) throw std::logic_error("covariance needs at least two frames");
    const double N = static_cast<double>(frames_);
    Eigen::MatrixXd c(static_cast<Eigen::Index>(layout_.n1), static_cast<Eigen::Index>(layout_.n2));
    for (std::size_t a = 0; a < layout_.n1; ++a) {
        const double sa = from_fixed(s1_[a], exp_lin_);
        for (std::size_t b = 0; b < layout_.n2; ++b) {
            const double sb = from_fixed(s2_[b], exp_lin_);
            c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                (from_fixed(s12_[a * layout_.n2 + b], exp_sq_) - sa * sb / N) / (N - 1.0);
        }
    }
    return c;
}

CVec CorrelationAccumulator::mean_cross() const {
    if (!layout_.cross || cross_frames_ == 0) throw std::logic_error("no cross frames accumulated");
    CVec m(static_cast<Eigen::Index>(layout_.n1));
    const double N = static_cast<double>(cross_frames_);
    for (std::size_t i = 0; i < layout_.n1; ++i)
        m[static_cast<Eigen::Index>(i)] = cplx(from_fixed(sc_re_[i], exp_lin_), from_fixed(sc_im_[i], exp_lin_)) / N;
    return m;
}

RVec CorrelationAccumulator::cross_sigma() const {
    if (!layout_.cross || cross_frames_ < 2) throw std::logic_error("cross sigma needs at least two frames");
    const double N = static_cast<double>(cross_frames_);
    const CVec m = mean_cross();
    RVec s(static_cast<Eigen::Index>(layout_.n1));
    for (std::size_t i = 0; i < layout_.n1; ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        const double var = (from_fixed(sc_sq_[i], exp_sq_) - N * std::norm(m[e])) / (N - 1.0);
        s[e] = std::sqrt(std::max(var, 0.0) / N);
    }
    return s;
}

bool CorrelationAccumulator::same_sums(const CorrelationAccumulator& o) const {
    return frames_ == o.frames_ && cross_frames_ == o.cross_frames_ && s1_ == o.s1_ && s2_ == o.s2_ &&
           s12_ == o.s12_ && sc_re_ == o.sc_re_ && sc_im_ == o.sc_im_ && sc_sq_ == o.sc_sq_;
}

void PairMoments::add(double i1, double i2) {
    ++n;
    s10 += i1;
    s01 += i2;
    s11 += i1 * i2;
    s20 += i1 * i1;
    s02 += i2 * i2;
    s21 += i1 * i1 * i2;
    s12 += i1 * i2 * i2;
    s22 += i1 * i1 * i2 * i2;
}

double PairMoments::covariance() const {
    if (n < 2) throw std::logic_error("covariance needs at least two samples");
    const double N = static_cast<double>(n);
    return (s11 - s10 * s01 / N) / (N - 1.0);
}

double PairMoments::covariance_sigma() const {
    if (n < 2) throw std::logic_error("covariance needs at least two samples");
    const double N = static_cast<double>(n);
    const double a = s10 / N, b = s01 / N;
    // E[(I1-a)^2 (I2-b)^2] expanded in raw moments.
    const double m22 = s22 / N - 2.0 * b * s21 / N - 2.0 * a * s12 / N + b * b * s20 / N + a * a * s02 / N +
                       4.0 * a * b * s11 / N - 3.0 * a * a * b * b;
    const double c = s11 / N - a * b;
    return std::sqrt(std::max(m22 - c * c, 0.0) / N);
}

CMat response_or_identity(const Arm& arm, const Grid& src, const Grid& det, double k, std::size_t max_entries,
                          SamplingMode mode) {
    if (!arm.elements.empty()) return arm_response(arm, src, det, k, max_entries, mode);
    if (!src.same_as(det)) throw OpticsError("an empty arm cannot map onto a different detection grid");
    return CMat::Identity(static_cast<Eigen::Index>(src.n), static_cast<Eigen::Index>(src.n)) / src.dx;
}

namespace {
std::pair<CMat, CMat> g1_responses(const Arm& arm1, const Arm& arm2, const Grid& src, const Grid& det, double k,
                                   const G1Options& opt) {
    Arm a = arm1, b = arm2;
    if (opt.source_intensity.size() > 0) {
        if (opt.rebase) throw std::invalid_argument("an inhomogeneous source cannot be rebased");
        if (static_cast<std::size_t>(opt.source_intensity.size()) != src.n)
            throw std::invalid_argument("source intensity does not match the source grid");
    }
    if (opt.rebase) strip_common_free_space(a, b);
    return {response_or_identity(a, src, det, k, opt.max_entries, opt.mode),
            response_or_identity(b, src, det, k, opt.max_entries, opt.mode)};
}
}  // namespace

CMat analytic_g1(const Arm& arm1, const Arm& arm2, const Grid& src, const Grid& det, double k,
                 const G1Options& opt) {
    const auto [h1, h2] = g1_responses(arm1, arm2, src, det, k, opt);
    if (opt.source_intensity.size() > 0)
        return (h1.conjugate() * opt.source_intensity.cast<cplx>().asDiagonal() * h2.transpose()) * (opt.I0 * src.dx);
    return (h1.conjugate() * h2.transpose()) * (opt.I0 * src.dx);
}

CVec analytic_g1_cut(const Arm& arm1, const Arm& arm2, const Grid& src, const Grid& det, double k,
                     const G1Options& opt) {
    const auto [h1, h2] = g1_responses(arm1, arm2, src, det, k, opt);
    if (opt.source_intensity.size() > 0)
        return (h1.conjugate().cwiseProduct(h2) * opt.source_intensity.cast<cplx>()) * (opt.I0 * src.dx);
    return h1.conjugate().cwiseProduct(h2).rowwise().sum() * (opt.I0 * src.dx);
}

SiegertReport siegert_check(const CorrelationAccumulator& acc, const CMat& g1) {
    SiegertReport r;
    const auto& L = acc.layout();
    if (static_cast<std::size_t>(g1.rows()) != L.n1 || static_cast<std::size_t>(g1.cols()) != L.n2)
        throw std::invalid_argument("G1 matrix does not match the accumulator layout");
    double se = 0.0, sa = 0.0;
    auto visit = [&](double est, double an) {
        const double d = est - an;
        r.max_abs = std::max(r.max_abs, std::abs(d));
        se += d * d;
        sa += an * an;
        ++r.points;
    };
    if (L.full) {
        const Eigen::MatrixXd c = acc.covariance_full();
        for (Eigen::Index a = 0; a < c.rows(); ++a)
            for (Eigen::Index b = 0; b < c.cols(); ++b) visit(c(a, b), std::norm(g1(a, b)));
    } else {
        const RVec c = acc.covariance_pairs();
        for (std::size_t q = 0; q < L.pairs.size(); ++q)
            visit(c[static_cast<Eigen::Index>(q)],
                  std::norm(g1(static_cast<Eigen::Index>(L.pairs[q].first), static_cast<Eigen::Index>(L.pairs[q].second))));
    }
    r.nrms = sa > 0.0 ? std::sqrt(se / sa) : std::sqrt(se);
    return r;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::normal: return "normal";
        case Regime::reversed: return "reversed";
        case Regime::imaging: return "imaging";
        case Regime::fourier: return "fourier";
        case Regime::homogeneous: return "homogeneous (no diffraction structure)";
    }
    return "unknown";
}

double pole_tolerance() { return 1e-9; }

namespace {
EffectiveLength classify(double value) {
    EffectiveLength e;
    e.value = value;
    if (std::abs(value) <= pole_tolerance()) {
        e.value = 0.0;
        e.regime = Regime::imaging;
    } else {
        e.regime = value > 0.0 ? Regime::normal : Regime::reversed;
    }
    return e;
}

EffectiveLength infinite(Regime r) {
    return {std::numeric_limits<double>::infinity(), r};
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}
}  // namespace

EffectiveLength unequal_path_length(double z_o, double z_r) {
    require_positive(z_o, "z_o");
    require_positive(z_r, "z_r");
    const double den = z_r - z_o;
    if (std::abs(den) <= pole_tolerance()) return infinite(Regime::homogeneous);
    return classify(z_o * z_r / den);
}

EffectiveLength lens_pair_focal(double f_o, double f_r) {
    if (f_o == 0.0 || f_r == 0.0) throw std::invalid_argument("focal lengths must be non-zero");
    const double den = f_r - f_o;
    if (std::abs(den) <= pole_tolerance()) return infinite(Regime::homogeneous);
    return classify(f_o * f_r / den);
}

EffectiveLength ghost_entangled_length(double z_o1, double z_o2, double z_r) {
    require_positive(z_o1, "z_o1");
    require_positive(z_o2, "z_o2");
    require_positive(z_r, "z_r");
    const double a = z_o2, b = z_o1 + z_r;
    return classify(a * b / (a + b));
}

EffectiveLength ghost_thermal_length(double z_o1, double z_o2, double z_r) {
    require_positive(z_o1, "z_o1");
    require_positive(z_o2, "z_o2");
    require_positive(z_r, "z_r");
    const double a = z_o2, b = z_o1 - z_r;
    if (std::abs(b) <= pole_tolerance()) return {0.0, Regime::imaging};
    if (std::abs(a + b) <= pole_tolerance()) return infinite(Regime::fourier);
    return classify(a * b / (a + b));
}

GlassRodResult glass_rod_length(double l, double n, double z_o, double z_o1) {
    require_positive(l, "rod length");
    require_positive(z_o, "z_o");
    require_positive(z_o1, "z_o1");
    if (!(n > 1.0)) throw std::invalid_argument("rod index must exceed 1");
    if (!(z_o1 < z_o)) throw std::invalid_argument("object must sit inside the object arm (z_o1 < z_o)");
    GlassRodResult r;
    r.z_r = z_o + l - n * l;
    if (!(r.z_r >= l)) throw std::invalid_argument("reference arm too short to hold the rod");
    r.z_bar = r.z_r - l + l / n;
    const double z_o2 = z_o - z_o1;
    const double gap = z_o1 - r.z_bar;
    const double spread = l * (n - 1.0 / n);
    r.z_eff = classify(z_o2 * gap / spread);
    if (std::abs(gap) > pole_tolerance()) {
        const double lhs = 1.0 / z_o2 + 1.0 / gap;
        const double rhs = spread / (z_o2 * gap);
        r.identity_residual = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
    }
    r.identity_ok = r.identity_residual <= 1e-9;
    return r;
}

Arm ghost_first_order_arm1(const FirstOrderGhostParams& p, const el::Transmittance& object) {
    return Arm{el::FreeSpace{p.z0}, object, el::FocalPlaneLens{p.f1}};
}

Arm ghost_first_order_arm2(const FirstOrderGhostParams& p) {
    return Arm{el::FreeSpace{p.z1}, el::ThinLens{p.f2}, el::FreeSpace{p.z2}};
}

FirstOrderGhostPrediction ghost_image_first_order(const FirstOrderGhostParams& p, const Grid& object_grid,
                                                  const CVec& object, const Grid& detect_grid, double k,
                                                  double rel_tol) {
    require_positive(p.f1, "f1");
    require_positive(p.f2, "f2");
    require_positive(p.z2, "z2");
    if (!(p.z1 > p.z0) || !(p.z0 >= 0.0)) throw std::invalid_argument("ghost imaging needs z1 > z0 >= 0");
    if (static_cast<std::size_t>(object.size()) != object_grid.n)
        throw std::invalid_argument("object profile does not match its grid");
    FirstOrderGhostPrediction r;
    const double u = p.z1 - p.z0;
    r.imaging_residual = 1.0 / u + 1.0 / p.z2 - 1.0 / p.f2;
    r.imaging_ok = std::abs(r.imaging_residual) * p.f2 <= rel_tol;
    r.path_mismatch = (p.z0 + 2.0 * p.f1) - (p.z1 + p.z2);
    r.magnification = -p.z2 / u;
    const double chirp = 0.5 * k * (1.0 / p.f2 - 2.0 / p.f1) * u / p.z2;
    r.image.resize(static_cast<Eigen::Index>(detect_grid.n));
    for (std::size_t i = 0; i < detect_grid.n; ++i) {
        const double x = detect_grid.x(i);
        const long j = object_grid.index_of(-x * u / p.z2);
        const cplx t = (j >= 0 && j < static_cast<long>(object_grid.n)) ? object[j] : cplx(0.0);
        r.image[static_cast<Eigen::Index>(i)] = std::conj(t) * std::exp(I * (chirp * x * x));
    }
    return r;
}

RVec bucket_ghost_image(const CMat& h1, const CMat& h2, double dx_source, double dx_bucket, double I0) {
    if (h1.cols() != h2.cols()) throw std::invalid_argument("arm responses do not share a source grid");
    const CMat g = (h1.conjugate() * h2.transpose()) * (I0 * dx_source);
    return g.cwiseAbs2().colwise().sum().transpose() * dx_bucket;
}

double hbt_normalized(double D, double z, double lambda, double d) {
    require_positive(D, "D");
    require_positive(z, "z");
    require_positive(lambda, "lambda");
    const double u = kPi * D * std::abs(d) / (lambda * z);
    if (u < 1e-8) return 1.0;
    return std::abs(2.0 * std::cyl_bessel_j(1.0, u) / u);
}

HbtCurve hbt_star(double D, double z, double lambda, const std::vector<double>& separations) {
    HbtCurve c;
    c.separations.resize(static_cast<Eigen::Index>(separations.size()));
    c.correlation.resize(static_cast<Eigen::Index>(separations.size()));
    for (std::size_t i = 0; i < separations.size(); ++i) {
        c.separations[static_cast<Eigen::Index>(i)] = separations[i];
        c.correlation[static_cast<Eigen::Index>(i)] = hbt_normalized(D, z, lambda, separations[i]);
    }
    c.first_zero = kBesselJ1FirstZero * lambda * z / (kPi * D);
    c.angular_diameter = kBesselJ1FirstZero / kPi * lambda / c.first_zero;
    return c;
}

double hom_thermal(double I1, double I2, double theta) {
    if (I1 < 0.0 || I2 < 0.0) throw std::invalid_argument("intensities must be non-negative");
    const double c = std::cos(theta), s = std::sin(theta);
    return (I1 - I2) * (I1 - I2) * c * c * s * s;
}

double hom_coherent(double I1, double I2, double theta) {
    if (I1 < 0.0 || I2 < 0.0) throw std::invalid_argument("intensities must be non-negative");
    const double c = std::cos(theta), s = std::sin(theta);
    return -2.0 * I1 * I2 * c * c * s * s;
}

}  // namespace incoh
