#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "disac/estimators.hpp"
#include "disac/rng.hpp"
#include "disac/scene.hpp"

namespace disac {

/// Random node deployment over a square region centered on the origin.
struct Deployment {
    std::vector<Eigen::Vector2d> positions;
    double intensity = 0.0;  // mu, nodes per m^2
    double area = 0.0;       // m^2
};

/// Poisson point process draw: count ~ Poisson(mu * area), positions i.i.d.
/// uniform on the square. A draw of zero nodes is redrawn (with a warning);
/// a synchronization experiment needs at least two.
Deployment deploy_ppp(double mu, double area, Rng& rng,
                      std::vector<std::string>* warnings = nullptr);

/// PPP conditioned on an exact node count: positions i.i.d. uniform.
std::vector<Eigen::Vector2d> ppp_conditioned(int count, double area, Rng& rng);

/// The `count` nodes of an infinite-plane PPP of intensity mu nearest to the
/// origin: squared distances are cumulative sums of Exponential(mu * pi)
/// inter-arrivals, angles uniform. A square window would truncate the outer
/// order statistics.
std::vector<Eigen::Vector2d> ppp_nearest(int count, double mu, Rng& rng);

/// Node distances drawn independently per index from the i-th
/// nearest-neighbor marginal of a PPP (R_i^2 ~ Gamma(i, 1/(mu pi))), angles
/// uniform. This is the stochastic model behind the closed-form CPS
/// total-variance bounds, which treat the ordered distances as independent;
/// the joint order statistics of ppp_nearest are positively correlated and
/// sit measurably above those bounds.
std::vector<Eigen::Vector2d> ppp_independent_marginals(int count, double mu, Rng& rng);

struct PairDiagnostics {
    int node = 0;  // non-reference node of the pair
    OffsetEstimate estimate;
    bool valid = true;
    std::string error;
};

/// Star-topology synchronization outcome: per-node offsets relative to the
/// selected reference node (reference entries exactly zero).
struct SyncResult {
    int reference = 0;
    std::vector<double> to_s;          // estimated TO per node
    std::vector<double> cfo_hz;        // estimated CFO per node
    std::vector<double> to_error_s;    // estimate - ground truth
    std::vector<double> cfo_error_hz;
    std::vector<bool> valid;
    double total_sq_error_to = 0.0;    // sum over non-reference nodes
    double total_sq_error_cfo = 0.0;
    std::vector<PairDiagnostics> pairs;
};

/// Centered pairwise synchronization: picks the reference node closest to
/// the (first) target, then runs the full reciprocal-channel estimation
/// pipeline for each of the N-1 pairs. Estimator failures invalidate the
/// pair instead of aborting the run. `reference` overrides the nearest-node
/// rule (used when the node ensemble carries its own reference convention).
SyncResult synchronize_network(const Scene& scene, const OfdmConfig& cfg,
                               Method method, Rng& rng,
                               const PencilConfig& pencil = {},
                               std::optional<int> reference = std::nullopt);

/// Multiplies each channel by the conjugate offset diagonals built from the
/// estimated offsets of its (rx, tx) pair; residual offsets equal the
/// estimation errors.
std::vector<SensingChannel> apply_compensation(
    const std::vector<SensingChannel>& channels, const SyncResult& sync,
    const OfdmConfig& cfg);

}  // namespace disac
