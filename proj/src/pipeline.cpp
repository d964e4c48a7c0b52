#include "incoh/pipeline.hpp"

#include <cmath>
#include <variant>

namespace incoh {

namespace {
const cplx I(0.0, 1.0);

bool is_last_propagation_like(const std::vector<Element>& els, std::size_t i) {
    for (std::size_t j = i + 1; j < els.size(); ++j)
        if (!is_propagation(els[j])) return false;
    return true;
}
}  // namespace

Pipeline::Pipeline(const Arm& arm, const Grid& source_grid, const Grid& detect_grid, double k,
                   SamplingMode mode, std::size_t max_entries)
    : src_(source_grid), det_(detect_grid), k_(k), mode_(mode), max_entries_(max_entries) {
    if (!(k > 0.0)) throw OpticsError("wavenumber must be positive");
    if (arm.elements.empty()) throw OpticsError("arm has no elements");
    const bool regrid = !src_.same_as(det_);
    PropagationKernel pending{0.0, 0.0};
    bool has_pending = false;
    bool on_detector = false;
    const auto& els = arm.elements;
    for (std::size_t i = 0; i < els.size(); ++i) {
        const Element& e = els[i];
        validate(e);
        if (on_detector) throw OpticsError("element after the detection-plane mapping");
        if (const auto* s = std::get_if<el::FreeSpace>(&e)) {
            pending.z_opt += s->length;
            pending.z_diff += s->length;
            has_pending = true;
            continue;
        }
        if (const auto* s = std::get_if<el::Medium>(&e)) {
            const auto mk = PropagationKernel::medium(s->length, s->index);
            pending.z_opt += mk.z_opt;
            pending.z_diff += mk.z_diff;
            has_pending = true;
            continue;
        }
        const bool last = (i + 1 == els.size());
        if (const auto* a = std::get_if<el::Afocal>(&e)) {
            if (!has_pending || pending.z_diff == 0.0)
                throw OpticsError("afocal relay needs a preceding free-space segment");
            const bool to_det = regrid && is_last_propagation_like(els, i) && last;
            const Grid& out = to_det ? det_ : src_;
            const double m = -a->f_out / a->f_in;
            const cplx c = std::exp(I * (2.0 * k_ * (a->f_in + a->f_out))) / std::sqrt(std::abs(m));
            checks_.push_back(check_sampling(src_, k_, pending.z_diff));
            if (!checks_.back().ok && mode_ == SamplingMode::strict)
                throw SamplingError(checks_.back().describe());
            CMat M(static_cast<Eigen::Index>(out.n), static_cast<Eigen::Index>(src_.n));
            for (Eigen::Index r = 0; r < M.rows(); ++r) {
                const double xr = out.x(static_cast<std::size_t>(r)) / m;
                for (Eigen::Index c2 = 0; c2 < M.cols(); ++c2)
                    M(r, c2) = c * kernel_value(k_, pending, xr - src_.x(static_cast<std::size_t>(c2))) * src_.dx;
            }
            push_dense(std::move(M));
            pending = {0.0, 0.0};
            has_pending = false;
            on_detector = to_det;
            continue;
        }
        if (has_pending) flush(pending, has_pending, false);
        if (const auto* l = std::get_if<el::FocalPlaneLens>(&e)) {
            const bool to_det = regrid && last;
            const Grid& out = to_det ? det_ : src_;
            const cplx pre = kernel_prefactor(k_, l->f) * std::exp(I * (2.0 * k_ * l->f)) * src_.dx;
            CMat M(static_cast<Eigen::Index>(out.n), static_cast<Eigen::Index>(src_.n));
            for (Eigen::Index r = 0; r < M.rows(); ++r) {
                const double xr = out.x(static_cast<std::size_t>(r));
                for (Eigen::Index c2 = 0; c2 < M.cols(); ++c2)
                    M(r, c2) = pre * std::exp(-I * (k_ * xr * src_.x(static_cast<std::size_t>(c2)) / l->f));
            }
            push_dense(std::move(M));
            on_detector = to_det;
            continue;
        }
        CVec d;
        if (const auto* l = std::get_if<el::ThinLens>(&e)) {
            d.resize(static_cast<Eigen::Index>(src_.n));
            for (Eigen::Index r = 0; r < d.size(); ++r) {
                const double x = src_.x(static_cast<std::size_t>(r));
                d[r] = std::exp(-I * (k_ * x * x / (2.0 * l->f)));
            }
        } else if (const auto* p = std::get_if<el::PathOffset>(&e)) {
            d = CVec::Constant(static_cast<Eigen::Index>(src_.n), std::exp(I * (k_ * p->delta)));
        } else {
            d = element_profile(e, src_);
        }
        if (!stages_.empty() && stages_.back().kind == Stage::Kind::diag) {
            stages_.back().d = stages_.back().d.cwiseProduct(d);
        } else {
            Stage s{Stage::Kind::diag, std::move(d), nullptr, {}};
            stages_.push_back(std::move(s));
        }
    }
    if (has_pending) on_detector = flush(pending, has_pending, true);
    if (regrid && !on_detector)
        throw OpticsError("arm must end in a propagation or lens to map onto a different detection grid");
}

void Pipeline::push_dense(CMat m) {
    if (static_cast<std::size_t>(m.rows()) * static_cast<std::size_t>(m.cols()) > max_entries_)
        throw OpticsError("dense stage exceeds the configured matrix size cap");
    Stage s{Stage::Kind::dense, {}, nullptr, std::move(m)};
    stages_.push_back(std::move(s));
}

bool Pipeline::flush(PropagationKernel& pending, bool& has_pending, bool final_stage) {
    has_pending = false;
    if (pending.z_diff == 0.0) {
        if (pending.z_opt != 0.0) {
            Stage s{Stage::Kind::diag,
                    CVec::Constant(static_cast<Eigen::Index>(src_.n), std::exp(I * (k_ * pending.z_opt))),
                    nullptr,
                    {}};
            stages_.push_back(std::move(s));
        }
        pending = {0.0, 0.0};
        if (final_stage && !src_.same_as(det_))
            throw OpticsError("zero-length segment cannot map onto a different detection grid");
        return false;
    }
    checks_.push_back(check_sampling(src_, k_, pending.z_diff));
    if (!checks_.back().ok && mode_ == SamplingMode::strict) throw SamplingError(checks_.back().describe());
    const bool to_det = final_stage && !src_.same_as(det_);
    if (to_det) {
        CMat M(static_cast<Eigen::Index>(det_.n), static_cast<Eigen::Index>(src_.n));
        for (Eigen::Index r = 0; r < M.rows(); ++r)
            for (Eigen::Index c = 0; c < M.cols(); ++c)
                M(r, c) = kernel_value(k_, pending,
                                       det_.x(static_cast<std::size_t>(r)) - src_.x(static_cast<std::size_t>(c))) *
                          src_.dx;
        push_dense(std::move(M));
        pending = {0.0, 0.0};
        return true;
    }
    const std::size_t n = src_.n;
    CVec taps(static_cast<Eigen::Index>(2 * n - 1));
    for (std::size_t m = 0; m < 2 * n - 1; ++m) {
        const double off = (static_cast<double>(m) - static_cast<double>(n - 1)) * src_.dx;
        taps[static_cast<Eigen::Index>(m)] = kernel_value(k_, pending, off) * src_.dx;
    }
    Stage s{Stage::Kind::toeplitz, {}, std::make_shared<ToeplitzConvolver>(taps, n), {}};
    stages_.push_back(std::move(s));
    pending = {0.0, 0.0};
    return false;
}

CMat Pipeline::apply(const CMat& fields) const {
    if (static_cast<std::size_t>(fields.rows()) != src_.n)
        throw OpticsError("input fields do not match the source grid");
    CMat cur = fields;
    for (const auto& s : stages_) {
        switch (s.kind) {
            case Stage::Kind::diag: cur = s.d.asDiagonal() * cur; break;
            case Stage::Kind::toeplitz: s.conv->apply_block(cur); break;
            case Stage::Kind::dense: cur = s.m * cur; break;
        }
    }
    return cur;
}

CVec Pipeline::apply(const CVec& field) const {
    CMat m = field;
    return apply(m).col(0);
}

CMat Pipeline::map_matrix() const {
    // Track a diagonal operator as long as possible to avoid needless dense products.
    CVec diag = CVec::Ones(static_cast<Eigen::Index>(src_.n));
    bool is_diag = true;
    CMat cur;
    for (const auto& s : stages_) {
        switch (s.kind) {
            case Stage::Kind::diag:
                if (is_diag) diag = diag.cwiseProduct(s.d);
                else cur = s.d.asDiagonal() * cur;
                break;
            case Stage::Kind::toeplitz:
                if (is_diag) {
                    cur = CMat(diag.asDiagonal());
                    is_diag = false;
                }
                s.conv->apply_block(cur);
                break;
            case Stage::Kind::dense:
                if (is_diag) {
                    cur = s.m * diag.asDiagonal();
                    is_diag = false;
                } else {
                    cur = s.m * cur;
                }
                break;
        }
    }
    if (is_diag) return CMat(diag.asDiagonal());
    return cur;
}

CMat Pipeline::response() const {
    return map_matrix() / src_.dx;
}

}  // namespace incoh
