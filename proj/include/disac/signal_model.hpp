#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "disac/ofdm.hpp"
#include "disac/rng.hpp"
#include "disac/scene.hpp"

namespace disac {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

class degenerate_geometry_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Propagation parameters of one (receiver, transmitter, target) link.
struct LinkParams {
    double tof_s = 0.0;                      // tau, time of flight via the target
    double doppler_hz = 0.0;                 // bistatic Doppler shift
    std::complex<double> amplitude{0.0, 0.0};  // beta
};

/// Subcarrier-symbol domain sensing channel H (P x Q) of the link with
/// transmitter `tx` and receiver `rx`.
struct SensingChannel {
    Eigen::MatrixXcd data;
    int rx = 0;
    int tx = 0;
};

/// Geometry, Doppler and amplitude of target k on the (rx, tx) link.
///
/// tof = (|x_k - x_tx| + |x_k - x_rx|) / c. Doppler projects the target
/// velocity onto both paths at the carrier. |beta|^2 follows the
/// eta * rcs / (R_rx^2 R_tx^2) path-loss model (or the scene's SNR override);
/// the phase is drawn once per (target, pair) from the scene seed. Under
/// strict reciprocity the amplitude is identical for (rx, tx) and (tx, rx).
LinkParams link_params(const Scene& scene, const OfdmConfig& cfg,
                       int rx, int tx, int target);

/// Synthesizes the ground-truth sensing channel:
///   H[p,q] = sum_k beta_k exp(-j 2 pi p df (tau_k + dto))
///                   exp(+j 2 pi q T (fd_k + dcfo))
/// with dto = to[tx] - to[rx] and dcfo = cfo[tx] - cfo[rx].
/// Appends ICI-safety and empty-scene warnings to `warnings` if given.
SensingChannel synthesize_channel(const Scene& scene, const OfdmConfig& cfg,
                                  int rx, int tx,
                                  std::vector<std::string>* warnings = nullptr);

/// Adds i.i.d. CN(0, noise_var) samples to every entry.
SensingChannel add_noise(const SensingChannel& ch, double noise_var, Rng& rng);

/// Frequency-domain matched filtering: received .* conj(pilot). Pilot entries
/// must be unit modulus or exactly zero (zero marks subcarriers unused by
/// this transmitter under FDM combs).
SensingChannel demodulate(const Eigen::MatrixXcd& received,
                          const Eigen::MatrixXcd& pilot, int rx, int tx);

/// Offset differences seen on the (rx, tx) link: to[tx] - to[rx] (seconds)
/// and cfo[tx] - cfo[rx] (Hz).
struct PairOffsets {
    double to_s = 0.0;
    double cfo_hz = 0.0;
};
PairOffsets pair_offsets(const Scene& scene, int rx, int tx);

}  // namespace disac
