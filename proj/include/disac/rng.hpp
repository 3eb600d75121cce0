#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace disac {

using Rng = std::mt19937_64;

/// SplitMix64 mixing step, used to whiten seed material.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a stream path
/// (e.g. {sweep point, trial index}). Stable across runs and platforms, so
/// parallel Monte Carlo trials stay reproducible regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p));
    return h;
}

inline Rng make_rng(std::uint64_t master,
                    std::initializer_list<std::uint64_t> path = {}) {
    return Rng(derive_seed(master, path));
}

/// Circularly-symmetric complex Gaussian sample, CN(0, variance):
/// variance/2 per real component.
inline std::complex<double> complex_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

/// Uniform phase in [0, 2*pi).
inline double uniform_phase(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979323846);
    return u(rng);
}

}  // namespace disac
