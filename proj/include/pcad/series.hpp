#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pcad/errors.hpp"
#include "pcad/fft.hpp"

namespace pcad {

// One irregularly sampled observation: time in days, magnitude, optional
// magnitude error. The error is kept for ingestion fidelity only; no
// computation uses it.
struct RawSample {
    double t = 0.0;
    double mag = 0.0;
    std::optional<double> err;
};

struct RawSeries {
    std::string id;
    std::vector<RawSample> samples;   // strictly increasing t
    std::optional<double> period;     // T in days, > 0 when present
    double epoch = 0.0;               // t0 in days
};

// Fixed-length, zero-mean, unit-sum-of-squares samples on folded time
// [0,1). The unit of every downstream computation.
struct UniformSeries {
    std::string id;
    std::vector<double> values;

    std::size_t d() const { return values.size(); }
};

struct FoldedSample {
    double phase = 0.0;  // in [0,1)
    double mag = 0.0;
};

struct PreprocessConfig {
    std::size_t d = 256;          // power of two, >= 16
    std::size_t spike_window = 5; // odd, >= 3
    double spike_k = 5.0;         // > 0
    std::size_t smooth_window = 5;
};

void validate(const RawSeries& raw);
void validate(const UniformSeries& x);
void validate(const PreprocessConfig& cfg);

}  // namespace pcad
