#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "incoh/fieldgrid.hpp"

namespace incoh {

// Counter-based draws: every value is a pure function of (seed, stream, frame, index),
// so frames can be produced in any order on any worker.
namespace rng {
std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame, std::uint64_t index);
// Uniform on (0, 1].
double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame, std::uint64_t index,
               std::uint64_t draw);
// Circular complex Gaussian with E|A|^2 = variance.
cplx circular_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame,
                       std::uint64_t index, double variance);
double uniform_phase(std::uint64_t seed, std::uint64_t stream, std::uint64_t frame, std::uint64_t index);
}  // namespace rng

struct CoherentSource {
    cplx amplitude{1.0, 0.0};
    double k = 0.0;
};

SampledField coherent_frame(const CoherentSource& src, const Grid& g);

struct ThermalEnsemble {
    double I0 = 1.0;
    double k = 0.0;
    std::uint64_t seed = 0;
    Grid grid;
    std::uint64_t stream = 1;
};

// Delta-correlated speckle frame: independent circular Gaussian samples of variance I0/dx.
SampledField thermal_frame(const ThermalEnsemble& src, std::uint64_t frame_idx);
// Frames first..first+count-1 as columns.
CMat thermal_block(const ThermalEnsemble& src, std::uint64_t first, std::size_t count);

struct PartiallyCoherentEnsemble {
    ThermalEnsemble base;
    // Gaussian angular-spectrum width in rad/m; +inf reproduces the thermal ensemble.
    double w = std::numeric_limits<double>::infinity();
};

// Throws if the spectrum is not negligible at the grid Nyquist frequency.
void check_spectral_width(const PartiallyCoherentEnsemble& src);
SampledField partially_coherent_frame(const PartiallyCoherentEnsemble& src, std::uint64_t frame_idx);
CMat partially_coherent_block(const PartiallyCoherentEnsemble& src, std::uint64_t first, std::size_t count);
// Normalized spatial bandwidth W = w d / (2 pi).
inline double normalized_bandwidth(double w, double d) { return w * d / (2.0 * kPi); }

enum class AmplitudeStats { fixed_modulus, circular_gaussian };

struct PointSourceSet {
    std::vector<double> positions;
    // Mean intensity per source; empty means 1 for every source.
    std::vector<double> weights;
    AmplitudeStats stats = AmplitudeStats::circular_gaussian;
    std::uint64_t seed = 0;
    std::uint64_t stream = 3;
};

CVec point_source_amplitudes(const PointSourceSet& src, std::uint64_t frame_idx);
std::vector<std::pair<double, cplx>> point_sources_frame(const PointSourceSet& src, std::uint64_t frame_idx);

struct CoherenceGate {
    bool pass = true;
    double mismatch = 0.0;
    double coherence_length = 0.0;
};

// Interference between two arms survives only if their optical paths differ by less
// than the source coherence length.
CoherenceGate temporal_coherence_gate(double path1, double path2, double coherence_length);

}  // namespace incoh
