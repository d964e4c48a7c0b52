#include "incoh/montecarlo.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace incoh {

namespace {
Arm identity_if_empty(Arm a) {
    if (a.elements.empty()) a.elements.push_back(el::PathOffset{0.0});
    return a;
}

std::pair<Arm, Arm> rebased(const ThermalSetup& s, double& stripped) {
    Arm a = s.arm1, b = s.arm2;
    stripped = strip_common_free_space(a, b);
    return {identity_if_empty(std::move(a)), identity_if_empty(std::move(b))};
}
}  // namespace

CMat differenced_cross(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("port fields differ in shape");
    const cplx i(0.0, 1.0);
    const Eigen::MatrixXd re = ((a + b).cwiseAbs2() - (a - b).cwiseAbs2()) / 4.0;
    const Eigen::MatrixXd im = ((i * a + b).cwiseAbs2() - (i * a - b).cwiseAbs2()) / 4.0;
    CMat out(a.rows(), a.cols());
    out.real() = re;
    out.imag() = im;
    return out;
}

TwoArmMonteCarlo::TwoArmMonteCarlo(const ThermalSetup& s)
    : s_(s),
      p1_(rebased(s, stripped_).first, s.source, s.detect, s.k, s.mode, s.max_entries),
      p2_(rebased(s, stripped_).second, s.source, s.detect, s.k, s.mode, s.max_entries) {}

CMat TwoArmMonteCarlo::source_block(std::uint64_t first, std::size_t count) const {
    PartiallyCoherentEnsemble e;
    e.base.I0 = s_.I0;
    e.base.k = s_.k;
    e.base.seed = s_.seed;
    e.base.grid = s_.source;
    e.w = s_.w;
    return partially_coherent_block(e, first, count);
}

std::pair<CMat, CMat> TwoArmMonteCarlo::fields(std::uint64_t first, std::size_t count) const {
    const CMat src = source_block(first, count);
    return {p1_.apply(src), p2_.apply(src)};
}

CorrelationAccumulator parallel_blocks(const CorrelationAccumulator& proto, const McRun& r,
                                       const std::function<void(std::uint64_t, std::size_t, CorrelationAccumulator&)>& fn) {
    if (r.block == 0) throw std::invalid_argument("block size must be positive");
    const std::uint64_t nblocks = (r.frames + r.block - 1) / r.block;
    unsigned workers = r.workers ? r.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(nblocks, 1)));
    std::vector<CorrelationAccumulator> accs(workers, proto);
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&](unsigned w) {
        try {
            for (std::uint64_t b = w; b < nblocks; b += workers) {
                const std::uint64_t first = b * r.block;
                const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(r.block, r.frames - first));
                fn(first, count, accs[w]);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!err) err = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
    CorrelationAccumulator out = proto;
    for (const auto& a : accs) out.merge(a);
    return out;
}

CorrelationAccumulator TwoArmMonteCarlo::run(const AccumulatorLayout& layout, const McRun& r) const {
    const auto probe = fields(0, 1);
    const double m1 = probe.first.cwiseAbs2().mean();
    const double m2 = probe.second.cwiseAbs2().mean();
    const double scale = std::max(m1 * m2, 1e-300);
    CorrelationAccumulator proto(layout, scale);
    return parallel_blocks(proto, r, [&](std::uint64_t first, std::size_t count, CorrelationAccumulator& acc) {
        const auto [e1, e2] = fields(first, count);
        acc.accumulate(e1.cwiseAbs2(), e2.cwiseAbs2());
        if (layout.cross) acc.accumulate_cross(differenced_cross(e1, e2));
    });
}

}  // namespace incoh
