#pragma once

#include "incoh/fieldgrid.hpp"

namespace incoh {

struct PeriodEstimate {
    double period = 0.0;      // meters per fringe
    double frequency = 0.0;   // fringes per meter
    double peak = 0.0;        // spectral magnitude at the peak
};

// Dominant non-DC period of a sampled cut. The window-weighted mean is removed, the cut is
// Hann windowed and zero padded by pad_factor, the zero-frequency lobe is skipped (one rise
// and one fall from bin 0) and the remaining maximum is refined by a quadratic fit.
PeriodEstimate dominant_period(const RVec& cut, double dx, int pad_factor = 8);

// Spectral magnitude of the mean-removed cut at a given spatial frequency (fringes/m),
// relative to the mean: 2|sum (y - mean) e^{-2 pi i f x}| / (n mean).
double spectral_visibility(const RVec& cut, double dx, double frequency);

// Pearson correlation of two real profiles.
double pearson(const RVec& a, const RVec& b);
// <a, b> / (|a| |b|), complex.
cplx normalized_overlap(const CVec& a, const CVec& b);
// Intersection over union of the supports {a > threshold * max a} and {b > threshold * max b}.
double support_overlap(const RVec& a, const RVec& b, double threshold = 0.5);

}  // namespace incoh
