// Independent brute-force oracles used by tests only. These implement the
// defining sums directly and must stay free of the library's FFT path.
#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "pcad/preprocess.hpp"
#include "pcad/rng.hpp"
#include "pcad/series.hpp"

namespace oracle {

// O(n^2) discrete Fourier transform straight from the definition.
inline std::vector<std::complex<double>> naive_dft(
    const std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = sign * 2.0 * std::numbers::pi *
                               static_cast<double>(k) *
                               static_cast<double>(t) /
                               static_cast<double>(n);
            acc += a[t] * std::polar(1.0, ang);
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

// Direct O(d) correlation at one shift.
inline double xcorr_direct_at(const std::vector<double>& x,
                              const std::vector<double>& y, std::size_t tau) {
    const std::size_t d = x.size();
    double acc = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
        const std::size_t yi = t >= tau ? t - tau : t - tau + d;
        acc += x[t] * y[yi];
    }
    return acc;
}

// Direct O(d^2) correlation vector.
inline std::vector<double> xcorr_direct(const std::vector<double>& x,
                                        const std::vector<double>& y) {
    std::vector<double> out(x.size());
    for (std::size_t tau = 0; tau < x.size(); ++tau) {
        out[tau] = xcorr_direct_at(x, y, tau);
    }
    return out;
}

// Max of the direct correlation vector with the same tie rule as the
// library: ties within 1e-12 resolve to the smallest shift.
inline std::pair<double, std::size_t> max_xcorr_direct(
    const std::vector<double>& x, const std::vector<double>& y) {
    const std::vector<double> c = xcorr_direct(x, y);
    double best = c[0];
    for (double v : c) best = std::max(best, v);
    for (std::size_t t = 0; t < c.size(); ++t) {
        if (c[t] >= best - 1e-12) return {c[t], t};
    }
    return {best, 0};
}

// Random unit-norm series of length d.
inline pcad::UniformSeries random_series(std::size_t d, pcad::Rng& rng,
                                         const std::string& id = "r") {
    std::vector<double> v(d);
    for (double& x : v) x = rng.normal();
    return pcad::UniformSeries{id, pcad::normalize(v)};
}

}  // namespace oracle
