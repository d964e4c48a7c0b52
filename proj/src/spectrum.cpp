#include "incoh/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "incoh/fft.hpp"

namespace incoh {

PeriodEstimate dominant_period(const RVec& cut, double dx, int pad_factor) {
    if (cut.size() < 4) throw std::invalid_argument("fringe cut too short");
    if (!(dx > 0.0) || pad_factor < 1) throw std::invalid_argument("invalid period extraction settings");
    const std::size_t n = static_cast<std::size_t>(cut.size());
    const std::size_t m = n * static_cast<std::size_t>(pad_factor);
    CVec in = CVec::Zero(static_cast<Eigen::Index>(m));
    RVec w(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        w[static_cast<Eigen::Index>(i)] = 0.5 - 0.5 * std::cos(2.0 * kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    const double mean = w.dot(cut) / w.sum();
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        in[j] = w[j] * (cut[j] - mean);
    }
    CVec out(static_cast<Eigen::Index>(m));
    Fft fft(m);
    fft.forward(in.data(), out.data());
    const std::size_t half = m / 2;
    RVec mag(static_cast<Eigen::Index>(half + 1));
    for (std::size_t k = 0; k <= half; ++k) mag[static_cast<Eigen::Index>(k)] = std::abs(out[static_cast<Eigen::Index>(k)]);
    // the zero-frequency lobe, including any slow envelope, rises from the removed mean and then falls
    std::size_t start = 0;
    while (start < half && mag[static_cast<Eigen::Index>(start + 1)] >= mag[static_cast<Eigen::Index>(start)]) ++start;
    while (start < half && mag[static_cast<Eigen::Index>(start + 1)] <= mag[static_cast<Eigen::Index>(start)]) ++start;
    if (start >= half) throw std::runtime_error("no fringe found in cut");
    std::size_t best = start;
    for (std::size_t k = start; k < half; ++k)
        if (mag[static_cast<Eigen::Index>(k)] > mag[static_cast<Eigen::Index>(best)]) best = k;
    double shift = 0.0;
    if (best > 0 && best < half) {
        const double a = mag[static_cast<Eigen::Index>(best - 1)];
        const double b = mag[static_cast<Eigen::Index>(best)];
        const double c = mag[static_cast<Eigen::Index>(best + 1)];
        const double den = a - 2.0 * b + c;
        if (den != 0.0) shift = 0.5 * (a - c) / den;
    }
    PeriodEstimate e;
    const double kk = static_cast<double>(best) + shift;
    if (!(kk > 0.0)) throw std::runtime_error("no fringe found in cut");
    e.frequency = kk / (static_cast<double>(m) * dx);
    e.period = 1.0 / e.frequency;
    e.peak = mag[static_cast<Eigen::Index>(best)];
    return e;
}

double spectral_visibility(const RVec& cut, double dx, double frequency) {
    const double mean = cut.mean();
    if (mean == 0.0) throw std::invalid_argument("visibility of a zero-mean cut is undefined");
    cplx s = 0.0;
    for (Eigen::Index i = 0; i < cut.size(); ++i)
        s += (cut[i] - mean) * std::polar(1.0, -2.0 * kPi * frequency * static_cast<double>(i) * dx);
    return 2.0 * std::abs(s) / (static_cast<double>(cut.size()) * std::abs(mean));
}

double pearson(const RVec& a, const RVec& b) {
    if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("profiles differ in length");
    const RVec da = a.array() - a.mean();
    const RVec db = b.array() - b.mean();
    const double den = da.norm() * db.norm();
    if (den == 0.0) throw std::invalid_argument("correlation of a constant profile");
    return da.dot(db) / den;
}

cplx normalized_overlap(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("profiles differ in length");
    const double den = a.norm() * b.norm();
    if (den == 0.0) throw std::invalid_argument("overlap with a zero profile");
    return a.dot(b) / den;
}

double support_overlap(const RVec& a, const RVec& b, double threshold) {
    if (a.size() != b.size() || a.size() == 0) throw std::invalid_argument("profiles differ in length");
    const double ta = threshold * a.maxCoeff();
    const double tb = threshold * b.maxCoeff();
    Eigen::Index both = 0, either = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const bool in_a = a[i] > ta, in_b = b[i] > tb;
        both += (in_a && in_b);
        either += (in_a || in_b);
    }
    return either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace incoh
