#pragma once

#include <cstddef>
#include <vector>

#include "pcad/fft.hpp"
#include "pcad/series.hpp"

namespace pcad {

// Result of maximizing circular cross correlation over integer shifts.
struct PhaseMatch {
    double corr = 0.0;       // correlation at the winning shift
    std::size_t shift = 0;   // tau* in {0, ..., d-1}
};

// Shifts within this tolerance of the maximum count as ties; the smallest
// tau among them wins.
inline constexpr double kShiftTieTol = 1e-12;

// sum_t x(t) * y((t - tau) mod d); the O(d) definition.
double xcorr_at(const UniformSeries& x, const UniformSeries& y,
                std::size_t tau);

// All d correlations at once via the convolution theorem:
// inverse transform of X(nu) * conj(Y(nu)).
std::vector<double> xcorr_all(const UniformSeries& x, const UniformSeries& y);

// (max value, argmax shift) of xcorr_all, ties resolved to the smallest tau.
PhaseMatch max_xcorr(const UniformSeries& x, const UniformSeries& y);

// output(t) = y((t - tau) mod d), so that
// xcorr_at(x, rotate(y, max_xcorr(x, y).shift), 0) == max_xcorr(x, y).corr.
UniformSeries rotate(const UniformSeries& y, std::size_t tau);
std::vector<double> rotate_values(const std::vector<double>& v,
                                  std::size_t tau);

// Cached-spectrum variants for hot loops: forward transforms are computed
// once per series and reused across pairs.
void xcorr_all_spec(const Spectrum& x_spec, const Spectrum& y_spec,
                    std::vector<double>& out, Spectrum& scratch);
PhaseMatch max_xcorr_spec(const Spectrum& x_spec, const Spectrum& y_spec,
                          std::vector<double>& buf, Spectrum& scratch);
PhaseMatch pick_max_shift(const std::vector<double>& corr);

}  // namespace pcad
