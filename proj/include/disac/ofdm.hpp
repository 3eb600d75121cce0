#pragma once

#include <stdexcept>

namespace disac {

/// OFDM frame geometry shared by every stage of the pipeline.
///
/// subcarrier_spacing_hz * symbol_duration_s == 1 by construction, and
/// bandwidth_hz == subcarriers * subcarrier_spacing_hz.
struct OfdmConfig {
    double carrier_hz = 0.0;
    double bandwidth_hz = 0.0;
    int subcarriers = 0;  // P
    int symbols = 0;      // Q
    double subcarrier_spacing_hz = 0.0;
    double symbol_duration_s = 0.0;

    OfdmConfig() = default;

    OfdmConfig(double carrier, double bandwidth, int n_subcarriers, int n_symbols)
        : carrier_hz(carrier),
          bandwidth_hz(bandwidth),
          subcarriers(n_subcarriers),
          symbols(n_symbols) {
        if (n_subcarriers < 2 || n_symbols < 2)
            throw std::invalid_argument("OfdmConfig: need at least 2 subcarriers and 2 symbols");
        if (!(carrier > 0.0) || !(bandwidth > 0.0))
            throw std::invalid_argument("OfdmConfig: carrier and bandwidth must be positive");
        subcarrier_spacing_hz = bandwidth / n_subcarriers;
        symbol_duration_s = 1.0 / subcarrier_spacing_hz;
    }
};

}  // namespace disac
