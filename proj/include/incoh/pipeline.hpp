#pragma once

#include <memory>
#include <vector>

#include "incoh/fft.hpp"
#include "incoh/optics.hpp"

namespace incoh {

// An arm compiled into a chain of linear stages acting on sampled fields.
// Consecutive propagation segments are merged by the cascade rule before
// being turned into a stage, so the chain never re-samples a merged segment.
class Pipeline {
public:
    Pipeline(const Arm& arm, const Grid& source_grid, const Grid& detect_grid, double k,
             SamplingMode mode = SamplingMode::advisory,
             std::size_t max_entries = std::size_t(1) << 24);

    const Grid& source_grid() const { return src_; }
    const Grid& detect_grid() const { return det_; }
    double k() const { return k_; }

    // Each column is a field on the source grid; result columns live on the detection grid.
    CMat apply(const CMat& fields) const;
    CVec apply(const CVec& field) const;

    // Matrix M with out = M * in.
    CMat map_matrix() const;
    // Impulse response h(x, x0) = M / dx_source.
    CMat response() const;

    const std::vector<SamplingCheck>& sampling() const { return checks_; }

private:
    struct Stage {
        enum class Kind { diag, toeplitz, dense } kind;
        CVec d;
        std::shared_ptr<ToeplitzConvolver> conv;
        CMat m;
    };

    // Returns true when the stage maps onto the detection grid.
    bool flush(PropagationKernel& pending, bool& has_pending, bool final_stage);
    void push_dense(CMat m);

    Grid src_;
    Grid det_;
    double k_;
    SamplingMode mode_;
    std::size_t max_entries_;
    std::vector<Stage> stages_;
    std::vector<SamplingCheck> checks_;
};

}  // namespace incoh
