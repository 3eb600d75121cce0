// Shared scene/channel builders for the test suites.
#pragma once

#include <complex>

#include "disac/ofdm.hpp"
#include "disac/scene.hpp"
#include "disac/signal_model.hpp"

namespace helpers {

inline const disac::OfdmConfig kCfg{5e9, 50e6, 64, 32};

/// Channel with one synthetic component at delay tau, Doppler fd, amplitude
/// beta, written straight from the subcarrier-symbol model.
inline disac::SensingChannel tone_channel(double tau, double fd,
                                          std::complex<double> beta,
                                          const disac::OfdmConfig& cfg = kCfg) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const std::complex<double> j{0.0, 1.0};
    disac::SensingChannel ch;
    ch.data.resize(cfg.subcarriers, cfg.symbols);
    for (int p = 0; p < cfg.subcarriers; ++p)
        for (int q = 0; q < cfg.symbols; ++q)
            ch.data(p, q) =
                beta *
                std::exp(-j * (kTwoPi * p * cfg.subcarrier_spacing_hz * tau)) *
                std::exp(j * (kTwoPi * q * cfg.symbol_duration_s * fd));
    return ch;
}

/// Two nodes 50 m from a static origin target (the standard pairwise scene).
inline disac::Scene pair_scene(double noise_var = 0.0) {
    disac::Scene s;
    disac::NodeState a, b;
    a.position = {35.35, -35.35};
    b.position = {-35.35, -35.35};
    s.nodes = {a, b};
    disac::Target t;
    t.position = {0.0, 0.0};
    s.targets = {t};
    s.noise_var = noise_var;
    s.rng_seed = 1;
    return s;
}

}  // namespace helpers
