#pragma once

#include <cstdint>
#include <vector>

#include "pcad/series.hpp"

namespace pcad {

// Maps every sample time onto folded time [0,1) via the fractional part of
// (t - epoch) / period; negative fractions wrap by +1. Output is sorted by
// phase, ties keep the original sample order.
std::vector<FoldedSample> fold(const RawSeries& raw, double period,
                               double epoch);

// Median/MAD spike rule over a centered circular window: a sample is dropped
// when its absolute deviation from the window median exceeds
// spike_k * (1.4826 * MAD). Errors if fewer than half the samples survive.
std::vector<bool> despike_mask(const std::vector<double>& values,
                               const PreprocessConfig& cfg);
std::vector<double> despike(const std::vector<double>& values,
                            const PreprocessConfig& cfg);
std::vector<FoldedSample> despike(const std::vector<FoldedSample>& samples,
                                  const PreprocessConfig& cfg);

// Centered circular moving average; folded time wraps, so the window does too.
std::vector<double> smooth(const std::vector<double>& values,
                           std::size_t window);
std::vector<FoldedSample> smooth(const std::vector<FoldedSample>& samples,
                                 std::size_t window);

// Linear interpolation onto the grid j/d with circular wrap across the
// phase 1 -> 0 boundary. Samples sharing an identical phase are averaged
// into one interpolation knot.
std::vector<double> resample(const std::vector<FoldedSample>& folded,
                             std::size_t d);

// z-score then scale by 1/sqrt(d): mean 0, sum of squares 1.
std::vector<double> normalize(const std::vector<double>& values);

// Rotates the series so the robust high-value cluster lands at 0.25*d.
UniformSeries universal_phase(const UniformSeries& x);

// Circular rotation by a uniform shift in {0, ..., d-1}.
UniformSeries random_phase(const UniformSeries& x, std::uint64_t seed);

struct PipelineOptions {
    bool despike = true;
    bool smooth = true;
};

// fold -> despike -> smooth -> resample -> normalize.
UniformSeries preprocess(const RawSeries& raw, const PreprocessConfig& cfg,
                         const PipelineOptions& opts = {});

}  // namespace pcad
