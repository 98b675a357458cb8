#include "pcad/xcorr.hpp"

#include <stdexcept>

#include "pcad/errors.hpp"

namespace pcad {

namespace {

void check_lengths(std::size_t dx, std::size_t dy) {
    if (dx != dy) {
        throw LengthMismatch("xcorr: lengths differ (" + std::to_string(dx) +
                             " vs " + std::to_string(dy) + ")");
    }
}

}  // namespace

double xcorr_at(const UniformSeries& x, const UniformSeries& y,
                std::size_t tau) {
    const std::size_t d = x.d();
    check_lengths(d, y.d());
    if (tau >= d) {
        throw std::out_of_range("xcorr_at: tau out of range");
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
        acc += x.values[t] * y.values[(t + d - tau) % d];
    }
    return acc;
}

void xcorr_all_spec(const Spectrum& x_spec, const Spectrum& y_spec,
                    std::vector<double>& out, Spectrum& scratch) {
    const std::size_t d = x_spec.size();
    check_lengths(d, y_spec.size());
    scratch.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        scratch[i] = x_spec[i] * std::conj(y_spec[i]);
    }
    fft_inplace(scratch, true);
    out.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        out[i] = scratch[i].real();
    }
}

std::vector<double> xcorr_all(const UniformSeries& x, const UniformSeries& y) {
    const std::size_t d = x.d();
    check_lengths(d, y.d());
    if (!is_power_of_two(d)) {
        throw NonPowerOfTwoLength("xcorr_all: length " + std::to_string(d) +
                                  " is not a power of two");
    }
    const Spectrum xs = fft_forward(x.values);
    const Spectrum ys = fft_forward(y.values);
    std::vector<double> out;
    Spectrum scratch;
    xcorr_all_spec(xs, ys, out, scratch);
    return out;
}

PhaseMatch pick_max_shift(const std::vector<double>& corr) {
    const std::size_t d = corr.size();
    double best = corr[0];
    for (std::size_t t = 1; t < d; ++t) {
        if (corr[t] > best) best = corr[t];
    }
    for (std::size_t t = 0; t < d; ++t) {
        if (corr[t] >= best - kShiftTieTol) {
            return PhaseMatch{corr[t], t};
        }
    }
    return PhaseMatch{best, 0};  // unreachable
}

PhaseMatch max_xcorr(const UniformSeries& x, const UniformSeries& y) {
    return pick_max_shift(xcorr_all(x, y));
}

PhaseMatch max_xcorr_spec(const Spectrum& x_spec, const Spectrum& y_spec,
                          std::vector<double>& buf, Spectrum& scratch) {
    xcorr_all_spec(x_spec, y_spec, buf, scratch);
    return pick_max_shift(buf);
}

std::vector<double> rotate_values(const std::vector<double>& v,
                                  std::size_t tau) {
    const std::size_t d = v.size();
    std::vector<double> out(d);
    for (std::size_t t = 0; t < d; ++t) {
        out[t] = v[(t + d - tau % d) % d];
    }
    return out;
}

UniformSeries rotate(const UniformSeries& y, std::size_t tau) {
    return UniformSeries{y.id, rotate_values(y.values, tau)};
}

}  // namespace pcad
