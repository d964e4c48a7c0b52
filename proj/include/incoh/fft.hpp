#pragma once

#include <cstddef>
#include <memory>

#include "incoh/fieldgrid.hpp"

namespace incoh {

// Thin wrapper over an FFTW plan pair of fixed length. Plans are built with
// FFTW_ESTIMATE so repeated runs produce bit-identical transforms.
class Fft {
public:
    explicit Fft(std::size_t n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const { return n_; }
    // Unnormalized forward transform, sum_j x_j exp(-2 pi i jk/n).
    void forward(const cplx* in, cplx* out) const;
    // Unnormalized inverse transform.
    void inverse(const cplx* in, cplx* out) const;

private:
    std::size_t n_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

// Linear (non-circular) convolution with a fixed Toeplitz kernel:
// out_i = sum_j taps[i - j + (n-1)] * in_j for i, j in [0, n).
class ToeplitzConvolver {
public:
    ToeplitzConvolver(const CVec& taps, std::size_t n);

    std::size_t size() const { return n_; }
    void apply(const cplx* in, cplx* out) const;
    void apply_block(CMat& block) const;

private:
    std::size_t n_;
    std::shared_ptr<Fft> fft_;
    CVec kernel_hat_;
};

}  // namespace incoh
