#include "incoh/sources.hpp"

#include <cmath>
#include <stdexcept>

#include "incoh/fft.hpp"

namespace incoh {

namespace rng {

namespace {
std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame, std::uint64_t index) {
    std::uint64_t h = splitmix(seed ^ 0x6a09e667f3bcc909ULL);
    h = splitmix(h ^ stream);
    h = splitmix(h ^ frame);
    return splitmix(h ^ index);
}

double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame, std::uint64_t index,
               std::uint64_t draw) {
    const std::uint64_t bits = splitmix(hash(seed, stream, frame, index) + draw * 0x9e3779b97f4a7c15ULL);
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

cplx circular_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame,
                       std::uint64_t index, double variance) {
    const double u1 = uniform(seed, stream, frame, index, 0);
    const double u2 = uniform(seed, stream, frame, index, 1);
    const double r = std::sqrt(-variance * std::log(u1));
    return std::polar(r, 2.0 * kPi * u2);
}

double uniform_phase(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame, std::uint64_t index) {
    return 2.0 * kPi * uniform(seed, stream, frame, index, 1);
}

}  // namespace rng

SampledField coherent_frame(const CoherentSource& src, const Grid& g) {
    if (std::abs(src.amplitude) == 0.0) throw std::invalid_argument("coherent source amplitude must be non-zero");
    return constant_field(g, src.k, src.amplitude);
}

SampledField thermal_frame(const ThermalEnsemble& src, std::uint64_t frame_idx) {
    return SampledField(src.grid, thermal_block(src, frame_idx, 1).col(0), src.k);
}

CMat thermal_block(const ThermalEnsemble& src, std::uint64_t first, std::size_t count) {
    if (!(src.I0 > 0.0)) throw std::invalid_argument("thermal mean intensity must be positive");
    const double var = src.I0 / src.grid.dx;
    CMat out(static_cast<Eigen::Index>(src.grid.n), static_cast<Eigen::Index>(count));
    for (std::size_t c = 0; c < count; ++c)
        for (std::size_t i = 0; i < src.grid.n; ++i)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                rng::circular_gaussian(src.seed, src.stream, first + c, i, var);
    return out;
}

void check_spectral_width(const PartiallyCoherentEnsemble& src) {
    if (std::isinf(src.w)) return;
    if (!(src.w > 0.0)) throw std::invalid_argument("spectral width must be positive");
    const double q_nyquist = kPi / src.base.grid.dx;
    if (q_nyquist < 4.0 * src.w)
        throw std::invalid_argument("spectral width too large for the grid: angular spectrum aliases");
}

CMat partially_coherent_block(const PartiallyCoherentEnsemble& src, std::uint64_t first, std::size_t count) {
    check_spectral_width(src);
    CMat white = thermal_block(src.base, first, count);
    if (std::isinf(src.w)) return white;
    const std::size_t n = src.base.grid.n;
    const double dq = 2.0 * kPi / (static_cast<double>(n) * src.base.grid.dx);
    // Filter amplitude sqrt(2 pi S(q)): turns I0/dx white noise into
    // a field with <E*(x)E(x+D)> = I0 exp(-w^2 D^2 / 2).
    RVec filt(static_cast<Eigen::Index>(n));
    for (std::size_t p = 0; p < n; ++p) {
        const double pp = (p <= n / 2) ? static_cast<double>(p) : static_cast<double>(p) - static_cast<double>(n);
        const double q = pp * dq;
        const double S = std::exp(-q * q / (2.0 * src.w * src.w)) / (std::sqrt(2.0 * kPi) * src.w);
        filt[static_cast<Eigen::Index>(p)] = std::sqrt(2.0 * kPi * S) / static_cast<double>(n);
    }
    Fft fft(n);
    CVec spec(static_cast<Eigen::Index>(n));
    for (Eigen::Index c = 0; c < white.cols(); ++c) {
        fft.forward(white.col(c).data(), spec.data());
        spec = spec.cwiseProduct(filt.cast<cplx>());
        fft.inverse(spec.data(), white.col(c).data());
    }
    return white;
}

SampledField partially_coherent_frame(const PartiallyCoherentEnsemble& src, std::uint64_t frame_idx) {
    return SampledField(src.base.grid, partially_coherent_block(src, frame_idx, 1).col(0), src.base.k);
}

CVec point_source_amplitudes(const PointSourceSet& src, std::uint64_t frame_idx) {
    if (src.positions.empty()) throw std::invalid_argument("point source set is empty");
    if (!src.weights.empty() && src.weights.size() != src.positions.size())
        throw std::invalid_argument("point source weights do not match positions");
    CVec a(static_cast<Eigen::Index>(src.positions.size()));
    for (std::size_t s = 0; s < src.positions.size(); ++s) {
        const double w = src.weights.empty() ? 1.0 : src.weights[s];
        if (src.stats == AmplitudeStats::circular_gaussian)
            a[static_cast<Eigen::Index>(s)] = rng::circular_gaussian(src.seed, src.stream, frame_idx, s, w);
        else
            a[static_cast<Eigen::Index>(s)] = std::polar(std::sqrt(w), rng::uniform_phase(src.seed, src.stream, frame_idx, s));
    }
    return a;
}

std::vector<std::pair<double, cplx>> point_sources_frame(const PointSourceSet& src, std::uint64_t frame_idx) {
    const CVec a = point_source_amplitudes(src, frame_idx);
    std::vector<std::pair<double, cplx>> out;
    out.reserve(src.positions.size());
    for (std::size_t s = 0; s < src.positions.size(); ++s)
        out.emplace_back(src.positions[s], a[static_cast<Eigen::Index>(s)]);
    return out;
}

CoherenceGate temporal_coherence_gate(double path1, double path2, double coherence_length) {
    CoherenceGate g;
    g.mismatch = std::abs(path1 - path2);
    g.coherence_length = coherence_length;
    g.pass = g.mismatch < coherence_length;
    return g;
}

}  // namespace incoh
