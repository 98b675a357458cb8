#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pcad/errors.hpp"
#include "pcad/fft.hpp"
#include "pcad/rng.hpp"

using namespace pcad;

TEST_CASE("fft matches the naive dft") {
    Rng rng(7);
    for (std::size_t n : {1u, 2u, 4u, 8u, 32u, 256u}) {
        Spectrum a(n);
        for (auto& z : a) z = {rng.normal(), rng.normal()};
        Spectrum got = a;
        fft_inplace(got, false);
        const auto want = oracle::naive_dft(a, false);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(got[i] - want[i]) < 1e-9);
        }
    }
}

TEST_CASE("inverse fft round-trips") {
    Rng rng(11);
    Spectrum a(128);
    for (auto& z : a) z = {rng.normal(), rng.normal()};
    Spectrum b = a;
    fft_inplace(b, false);
    fft_inplace(b, true);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }
}

TEST_CASE("non power of two lengths are rejected") {
    Spectrum a(12);
    CHECK_THROWS_AS(fft_inplace(a, false), NonPowerOfTwoLength);
}

TEST_CASE("forward transform of real input has conjugate symmetry") {
    Rng rng(3);
    std::vector<double> v(64);
    for (double& x : v) x = rng.normal();
    const Spectrum s = fft_forward(v);
    for (std::size_t k = 1; k < v.size(); ++k) {
        CHECK(std::abs(s[k] - std::conj(s[v.size() - k])) < 1e-12);
    }
}
