#include "incoh/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace incoh {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Fft::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

Fft::Fft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
    if (n == 0) throw std::invalid_argument("fft length must be positive");
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    plans_->fwd = fftw_plan_dft_1d(len, a, b, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->inv = fftw_plan_dft_1d(len, a, b, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plans_->fwd);
    fftw_destroy_plan(plans_->inv);
}

void Fft::forward(const cplx* in, cplx* out) const {
    fftw_execute_dft(plans_->fwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void Fft::inverse(const cplx* in, cplx* out) const {
    fftw_execute_dft(plans_->inv, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

ToeplitzConvolver::ToeplitzConvolver(const CVec& taps, std::size_t n)
    : n_(n), fft_(std::make_shared<Fft>(2 * n)) {
    if (static_cast<std::size_t>(taps.size()) != 2 * n - 1)
        throw std::invalid_argument("toeplitz taps must have length 2n-1");
    const std::size_t L = 2 * n;
    CVec c = CVec::Zero(static_cast<Eigen::Index>(L));
    // c[m] holds the tap for offset m (m >= 0) and c[L - m] the tap for -m.
    for (std::size_t m = 0; m < n; ++m) c[m] = taps[static_cast<Eigen::Index>(n - 1 + m)];
    for (std::size_t m = 1; m < n; ++m) c[L - m] = taps[static_cast<Eigen::Index>(n - 1 - m)];
    kernel_hat_.resize(static_cast<Eigen::Index>(L));
    fft_->forward(c.data(), kernel_hat_.data());
    kernel_hat_ /= static_cast<double>(L);
}

void ToeplitzConvolver::apply(const cplx* in, cplx* out) const {
    const std::size_t L = 2 * n_;
    std::vector<cplx> buf(L, cplx(0.0)), spec(L);
    std::copy(in, in + n_, buf.begin());
    fft_->forward(buf.data(), spec.data());
    for (std::size_t i = 0; i < L; ++i) spec[i] *= kernel_hat_[static_cast<Eigen::Index>(i)];
    fft_->inverse(spec.data(), buf.data());
    std::copy(buf.begin(), buf.begin() + static_cast<long>(n_), out);
}

void ToeplitzConvolver::apply_block(CMat& block) const {
    if (static_cast<std::size_t>(block.rows()) != n_)
        throw std::invalid_argument("toeplitz block row count mismatch");
    for (Eigen::Index c = 0; c < block.cols(); ++c) apply(block.col(c).data(), block.col(c).data());
}

}  // namespace incoh
