#include "pcad/fft.hpp"

#include <numbers>
#include <unordered_map>

#include "pcad/errors.hpp"

namespace pcad {

namespace {

struct Plan {
    std::vector<std::complex<double>> twiddle;  // exp(-2*pi*i*k/n), k < n/2
    std::vector<std::size_t> bitrev;
};

Plan make_plan(std::size_t n) {
    Plan p;
    p.twiddle.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(n);
        p.twiddle[k] = std::polar(1.0, ang);
    }
    p.bitrev.resize(n);
    std::size_t lg = 0;
    while ((std::size_t{1} << lg) < n) ++lg;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < lg; ++b) {
            r = (r << 1) | ((i >> b) & 1);
        }
        p.bitrev[i] = r;
    }
    return p;
}

const Plan& plan_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, Plan> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, make_plan(n)).first;
    }
    return it->second;
}

}  // namespace

void fft_inplace(Spectrum& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) {
        throw NonPowerOfTwoLength("fft: length " + std::to_string(n) +
                                  " is not a power of two");
    }
    if (n == 1) return;

    const Plan& plan = plan_for(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = plan.bitrev[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t j = 0; j < half; ++j) {
                std::complex<double> w = plan.twiddle[j * step];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[base + j];
                const std::complex<double> v = a[base + j + half] * w;
                a[base + j] = u + v;
                a[base + j + half] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= scale;
    }
}

Spectrum fft_forward(const std::vector<double>& values) {
    Spectrum a(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) a[i] = values[i];
    fft_inplace(a, false);
    return a;
}

}  // namespace pcad
