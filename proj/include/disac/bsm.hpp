#pragma once

#include <vector>

#include <Eigen/Core>

namespace disac {

enum class Axis { Delay, Doppler };

/// Element-wise product of a compressed channel with the conjugate of its
/// reciprocal partner. All target components collapse onto a single complex
/// exponential whose frequency is twice the TO (delay axis) or twice the
/// CFO (Doppler axis); remaining components are target inter-modulation
/// products and noise.
struct MatchedSignal {
    Eigen::VectorXcd samples;  // length P (delay) or Q (Doppler)
    Axis axis = Axis::Delay;
    double sample_step = 0.0;  // subcarrier spacing (delay) or symbol duration (Doppler)
};

/// g = fwd .* conj(rev). Throws std::invalid_argument on length mismatch.
MatchedSignal match(const Eigen::VectorXcd& fwd, const Eigen::VectorXcd& rev,
                    Axis axis, double sample_step);

/// Closed-form variances of the aggregate noise in the matched signals:
///   delay branch:   sigma_t^2 = sigma^2 Q^2 (sum_k 2 |beta_k|^2 Q + sigma^2)
///   Doppler branch: sigma_f^2 = sigma^2 P^2 (sum_k 2 |beta_k|^2 P + sigma^2)
struct BsmNoiseStats {
    double delay_var = 0.0;    // sigma_t^2
    double doppler_var = 0.0;  // sigma_f^2
};

/// target_snrs holds the per-target per-sample SNRs |beta_k|^2 / sigma^2.
BsmNoiseStats noise_stats(const std::vector<double>& target_snrs,
                          int subcarriers, int symbols, double noise_var);

}  // namespace disac
