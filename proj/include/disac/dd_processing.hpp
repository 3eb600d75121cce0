#pragma once

#include <Eigen/Core>

#include "disac/signal_model.hpp"

namespace disac {

/// Delay-Doppler spectrum C of a sensing channel: unnormalized inverse DFT
/// along the subcarrier axis, unnormalized forward DFT along the symbol
/// axis. The compressed 1-D channels below then carry the amplitudes
/// Q*beta (delay branch) and P*beta (Doppler branch) and noise variances
/// sigma^2*Q and sigma^2*P respectively, which the matched-signal noise
/// statistics and the offset CRBs rely on. With this convention an all-ones
/// P x Q channel transforms to a single spike of height P*Q at (0, 0).
struct DelayDopplerSpectrum {
    Eigen::MatrixXcd data;  // P x Q
    int rx = 0;
    int tx = 0;
};

DelayDopplerSpectrum delay_doppler_spectrum(const SensingChannel& ch);

/// Exact inverse of delay_doppler_spectrum (round trip to ~1e-15 relative).
SensingChannel channel_from_spectrum(const DelayDopplerSpectrum& spec);

/// Maximal-power delay row and Doppler column of the spectrum. Ties break
/// toward the smallest index. Runner-up bins are reported for diagnostics
/// when several slices carry near-equal power.
struct PeakIndices {
    int delay_bin = 0;    // p_hat
    int doppler_bin = 0;  // q_hat
    int delay_runner_up = 0;
    int doppler_runner_up = 0;
};

/// Throws std::runtime_error on an all-zero spectrum.
PeakIndices peak_indices(const DelayDopplerSpectrum& spec);

/// 1-D channels obtained by collapsing the spectrum onto the selected bins.
struct CompressedPair {
    Eigen::VectorXcd doppler_compressed;  // length P, tones at delays
    Eigen::VectorXcd delay_compressed;    // length Q, tones at Dopplers
    int delay_bin = 0;
    int doppler_bin = 0;
};

/// doppler_compressed = (1/P) * forward P-DFT of column C[:, doppler_bin];
/// delay_compressed   = (1/Q) * backward Q-DFT of row C[delay_bin, :].
CompressedPair compress(const DelayDopplerSpectrum& spec, int delay_bin,
                        int doppler_bin);

}  // namespace disac
