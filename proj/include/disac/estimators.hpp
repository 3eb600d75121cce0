#pragma once

#include <optional>
#include <string>

#include "disac/bsm.hpp"
#include "disac/dd_processing.hpp"
#include "disac/ofdm.hpp"

namespace disac {

enum class Method { Mle, Mp, Cc };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

/// Matrix pencil parameters. Zero selects the default floor(length / 3).
struct PencilConfig {
    int delay_pencil = 0;    // L_t
    int doppler_pencil = 0;  // L_f
};

/// Coarse offsets from the peak-bin differences of the reciprocal spectra,
/// with the fine-search half-widths around them. Bin differences are
/// wrapped to the nearest point on the circular bin axis.
struct InitialEstimate {
    double to_s = 0.0;
    double cfo_hz = 0.0;
    double to_halfwidth_s = 0.0;   // 1 / (2 P df)
    double cfo_halfwidth_hz = 0.0; // 1 / (2 Q T)
};

InitialEstimate initial_estimate(const PeakIndices& fwd, const PeakIndices& rev,
                                 const OfdmConfig& cfg);

/// Scalar estimate on one branch (TO in seconds or CFO in Hz).
struct BranchEstimate {
    double offset = 0.0;
    bool converged = true;  // false: refinement fell back to the grid point
    double cost = 0.0;      // residual ||g - beta a||^2 (MLE) or 1 - sv ratio (MP)
};

/// Nonlinear LS fit of a single complex exponential to the matched signal:
/// the amplitude is profiled out in closed form, leaving a 1-D periodogram
/// maximization over [init - halfwidth, init + halfwidth], solved by a dense
/// grid followed by derivative-free refinement.
BranchEstimate estimate_mle(const MatchedSignal& g, double init, double halfwidth);

/// Matrix pencil on the matched signal: SVD of the Hankel matrix, shift
/// invariance of the principal right singular vector, offset from the phase
/// of the resulting pole. Requires signal length >= pencil + 2.
BranchEstimate estimate_mp(const MatchedSignal& g, int pencil = 0);

/// Combined TO/CFO estimate with per-branch diagnostics.
struct OffsetEstimate {
    double to_s = 0.0;
    double cfo_hz = 0.0;
    Method method = Method::Mle;
    InitialEstimate initial;  // meaningful for MLE/MP
    bool to_converged = true;
    bool cfo_converged = true;
    int zero_pad = 0;  // CC grid factor
};

/// Spectral cross-correlation baseline: both spectra are inverted back to
/// channels, zero-padded by `zero_pad` along each axis, re-transformed, and
/// their power profiles circularly cross-correlated per axis. The argmax
/// lag, halved and scaled to physical units, gives on-grid TO/CFO estimates.
OffsetEstimate estimate_cc(const DelayDopplerSpectrum& fwd,
                           const DelayDopplerSpectrum& rev, int zero_pad,
                           const OfdmConfig& cfg);

/// Full reciprocal-channel offset estimation pipeline on one node pair:
/// delay-Doppler decoupling, peak selection, compression, matching, then
/// the selected estimator.
OffsetEstimate estimate_offsets(const SensingChannel& fwd,
                                const SensingChannel& rev,
                                const OfdmConfig& cfg, Method method,
                                const PencilConfig& pencil = {},
                                int cc_zero_pad = 8);

}  // namespace disac
