#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "disac/ofdm.hpp"

namespace disac {

class singular_fim_error : public std::runtime_error {
  public:
    singular_fim_error(const std::string& block, const std::string& what)
        : std::runtime_error(what), block_(block) {}
    const std::string& block() const { return block_; }

  private:
    std::string block_;
};

/// CRB of the TO estimate from the delay-branch matched signal:
///   3 (1 + 2 gamma_t Q) / (8 pi^2 df^2 P (P^2 - 1) gamma_t^2 Q^2)   [s^2]
/// gamma_t is the summed per-sample target SNR on the selected delay bin.
double crb_to(double gamma_t, int subcarriers, int symbols, double delta_f);

/// CRB of the CFO estimate from the Doppler-branch matched signal:
///   3 (1 + 2 gamma_f P) / (8 pi^2 T^2 Q (Q^2 - 1) gamma_f^2 P^2)    [Hz^2]
double crb_cfo(double gamma_f, int subcarriers, int symbols, double symbol_duration);

/// Both pairwise offset CRBs with the inputs they were evaluated at.
struct CrbReport {
    double crb_to_s2 = 0.0;
    double crb_cfo_hz2 = 0.0;
    double gamma_t = 0.0;
    double gamma_f = 0.0;
    int subcarriers = 0;
    int symbols = 0;
    double delta_f = 0.0;
    double symbol_duration = 0.0;
};
CrbReport offset_crb_report(double gamma_t, double gamma_f, const OfdmConfig& cfg);

/// Stochastic-geometry lower bounds on the total offset estimate variance of
/// N-node centered pairwise synchronization with PPP node deployment of
/// intensity mu (nodes per m^2), nearest-node reference:
///   TO:  3 sigma^2 (N-1)(N+2) / (8 pi^4 eta alpha df^2 mu^2 P^3 Q)
///   CFO: 3 sigma^2 (N-1)(N+2) / (8 pi^4 eta alpha T^2  mu^2 P Q^3)
struct CpsBound {
    double total_var_to = 0.0;   // s^2
    double total_var_cfo = 0.0;  // Hz^2
    int n_nodes = 0;
    double mu = 0.0;
    double eta = 0.0;
    double alpha = 0.0;
    double sigma_sq = 0.0;
};
CpsBound cps_bound(int n_nodes, double mu, double eta, double alpha,
                   double sigma_sq, const OfdmConfig& cfg);

/// Index of the node closest to the target (ties: smallest index).
int select_reference(const std::vector<double>& node_distances);

/// Variance of a single-link TOF estimate:
///   3 sigma^2 / (2 pi^2 |beta|^2 df^2 P^3 Q)   [s^2]
double tof_variance(double beta_sq, double sigma_sq, int subcarriers,
                    int symbols, double delta_f);

enum class FusionMode { Centralized, Decentralized };

/// Target-localization hybrid CRB setup for an asynchronous network of
/// collocated-TX/RX nodes measuring monostatic and bistatic TOFs.
///
/// Centralized: all N^2 directed observations are fused at signal level;
/// reciprocal pairs share one TOF parameter (N(N+1)/2 total) observed twice
/// with opposite-sign TO coupling, and one TO parameter per unordered pair
/// (N(N-1)/2 total). Decentralized(node_index): only that node's N
/// observations are used, with N TOF and N-1 TO parameters.
struct LocalizationProblem {
    std::vector<Eigen::Vector2d> nodes;
    Eigen::Vector2d target{0.0, 0.0};
    /// Per-link TOF measurement variances, sigma^2_{R}[rx][tx], N x N.
    Eigen::MatrixXd tof_var;
    /// Prior variance of each unknown TO (Gaussian prior). Zero means
    /// perfectly synchronized links (the prior-certain limit).
    double to_prior_var = 0.0;
    FusionMode mode = FusionMode::Centralized;
    int node_index = 0;  // decentralized anchor node
};

/// Trace of the position block of the inverted effective FIM (m^2). Throws
/// singular_fim_error naming the deficient block when the offset prior block
/// or the position Schur complement is not invertible (condition > 1e12).
double localization_hcrb(const LocalizationProblem& problem);

/// Decentralized estimates of every node fused by plain averaging, assumed
/// independent: (1/N^2) * sum_n CRB_L(node n).
double localization_hcrb_fused(const LocalizationProblem& problem);

/// Builds the per-link TOF variance matrix from node/target geometry and the
/// path-loss amplitude model |beta|^2 = eta * alpha / (R_rx^2 R_tx^2).
Eigen::MatrixXd tof_variance_matrix(const std::vector<Eigen::Vector2d>& nodes,
                                    const Eigen::Vector2d& target,
                                    double eta_alpha, double sigma_sq,
                                    const OfdmConfig& cfg);

/// Gradient of the (rx, tx) bistatic TOF with respect to the target position
/// (the Jacobian rows of the localization FIM).
Eigen::Vector2d tof_gradient(const std::vector<Eigen::Vector2d>& nodes,
                             const Eigen::Vector2d& target, int rx, int tx);

}  // namespace disac
