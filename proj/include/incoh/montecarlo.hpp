#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>

#include "incoh/correlate.hpp"
#include "incoh/pipeline.hpp"
#include "incoh/sources.hpp"

namespace incoh {

struct ThermalSetup {
    Arm arm1;
    Arm arm2;
    Grid source;
    Grid detect;
    double k = 0.0;
    double I0 = 1.0;
    // Gaussian angular-spectrum width; infinity gives delta-correlated frames.
    double w = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 1;
    SamplingMode mode = SamplingMode::advisory;
    std::size_t max_entries = std::size_t(1) << 24;
};

struct McRun {
    std::uint64_t frames = 1000;
    std::size_t block = 64;
    unsigned workers = 0;   // 0 picks the hardware concurrency
};

// conj(a) * b rebuilt from the four output-port intensities |a +- b|^2 and |i a +- b|^2.
CMat differenced_cross(const CMat& a, const CMat& b);

// Shared homogeneous source feeding two arms. Frames are generated at the plane reached
// after the longest vacuum prefix common to both arms.
class TwoArmMonteCarlo {
public:
    explicit TwoArmMonteCarlo(const ThermalSetup& s);

    double stripped() const { return stripped_; }
    const Pipeline& arm1() const { return p1_; }
    const Pipeline& arm2() const { return p2_; }

    CMat source_block(std::uint64_t first, std::size_t count) const;
    std::pair<CMat, CMat> fields(std::uint64_t first, std::size_t count) const;

    // Intensities |E1|^2, |E2|^2 and, when the layout asks for it, the differenced cross term.
    CorrelationAccumulator run(const AccumulatorLayout& layout, const McRun& r) const;

private:
    ThermalSetup s_;
    double stripped_ = 0.0;
    Pipeline p1_;
    Pipeline p2_;
};

// Runs fn(first, count, acc) over blocks on worker threads, each with its own copy of proto,
// and merges the copies. Exact accumulator arithmetic makes the result independent of the
// worker count.
CorrelationAccumulator parallel_blocks(const CorrelationAccumulator& proto, const McRun& r,
                                       const std::function<void(std::uint64_t, std::size_t, CorrelationAccumulator&)>& fn);

}  // namespace incoh
