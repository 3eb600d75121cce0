#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "disac/ofdm.hpp"

namespace disac {

/// Per-node clock state. Offsets are relative to the reference node
/// (index 0), whose own offsets must be zero.
struct NodeState {
    Eigen::Vector2d position{0.0, 0.0};
    double time_offset_s = 0.0;  // TO, delta_t
    double freq_offset_hz = 0.0; // CFO, delta_f
};

struct Target {
    Eigen::Vector2d position{0.0, 0.0};
    Eigen::Vector2d velocity{0.0, 0.0};
    double rcs_m2 = 1.0;
    /// When set, used verbatim as the link amplitude instead of the
    /// path-loss model (same value in both directions of a pair).
    std::optional<std::complex<double>> amplitude_override;
};

struct Scene {
    std::vector<NodeState> nodes;
    std::vector<Target> targets;
    double eta = 1.0;        // antenna/transmit gain factor
    double noise_var = 0.0;  // per-sample complex noise variance, sigma^2
    std::uint64_t rng_seed = 0;

    /// Per-target per-sample SNR |beta|^2 / sigma^2 (linear). When set, link
    /// amplitudes are rescaled so each target hits this SNR at the receiver,
    /// overriding the path-loss magnitude. Requires noise_var > 0.
    std::optional<double> target_snr;

    /// Strict: the complex link amplitude is identical in both directions of
    /// a node pair (channel reciprocity). Loose: independent phases per
    /// direction, for probing sensitivity to the reciprocity assumption.
    bool strict_reciprocity = true;

    /// Throws std::invalid_argument on contract violations (fewer than two
    /// nodes, negative noise variance, nonzero reference offsets, rcs <= 0,
    /// SNR override without noise).
    void validate() const;
};

struct SimConfig {
    OfdmConfig ofdm;
    Scene scene;
};

/// Parses the JSON configuration format (keys: carrier_hz, bandwidth_hz,
/// subcarriers, symbols, noise_var, eta, seed, nodes[].pos/to_s/cfo_hz,
/// targets[].pos/vel/rcs, optional target_snr_db, strict_reciprocity).
SimConfig parse_sim_config(const std::string& json_text);
SimConfig load_sim_config(const std::string& path);

}  // namespace disac
