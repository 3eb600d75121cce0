#include "disac/theory.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "disac/signal_model.hpp"

namespace disac {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kCondLimit = 1e12;

/// Inverts a symmetric positive-definite block, throwing a structured error
/// when its conditioning indicates a deficient problem.
Eigen::MatrixXd guarded_inverse(const Eigen::MatrixXd& m, const char* block) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) <= 0.0 ||
        sv(0) / sv(sv.size() - 1) > kCondLimit)
        throw singular_fim_error(block, std::string("localization_hcrb: singular ") +
                                            block + " block in the FIM");
    return svd.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace

double crb_to(double gamma_t, int subcarriers, int symbols, double delta_f) {
    if (!(gamma_t > 0.0)) throw std::invalid_argument("crb_to: SNR must be positive");
    if (subcarriers < 2) throw std::invalid_argument("crb_to: need P >= 2");
    const double P = subcarriers;
    const double Q = symbols;
    return 3.0 * (1.0 + 2.0 * gamma_t * Q) /
           (8.0 * kPi * kPi * delta_f * delta_f * P * (P * P - 1.0) * gamma_t * gamma_t *
            Q * Q);
}

double crb_cfo(double gamma_f, int subcarriers, int symbols, double symbol_duration) {
    if (!(gamma_f > 0.0)) throw std::invalid_argument("crb_cfo: SNR must be positive");
    if (symbols < 2) throw std::invalid_argument("crb_cfo: need Q >= 2");
    const double P = subcarriers;
    const double Q = symbols;
    return 3.0 * (1.0 + 2.0 * gamma_f * P) /
           (8.0 * kPi * kPi * symbol_duration * symbol_duration * Q * (Q * Q - 1.0) *
            gamma_f * gamma_f * P * P);
}

CpsBound cps_bound(int n_nodes, double mu, double eta, double alpha,
                   double sigma_sq, const OfdmConfig& cfg) {
    if (n_nodes < 2) throw std::invalid_argument("cps_bound: need N >= 2");
    if (!(mu > 0.0)) throw std::invalid_argument("cps_bound: intensity must be positive");
    const double N = n_nodes;
    const double P = cfg.subcarriers;
    const double Q = cfg.symbols;
    const double df = cfg.subcarrier_spacing_hz;
    const double T = cfg.symbol_duration_s;
    const double pi4 = kPi * kPi * kPi * kPi;
    const double common = 3.0 * sigma_sq * (N - 1.0) * (N + 2.0) / (8.0 * pi4 * eta * alpha * mu * mu);

    CpsBound out;
    out.total_var_to = common / (df * df * P * P * P * Q);
    out.total_var_cfo = common / (T * T * P * Q * Q * Q);
    return out;
}

int select_reference(const std::vector<double>& node_distances) {
    if (node_distances.empty())
        throw std::invalid_argument("select_reference: no nodes");
    int best = 0;
    for (int i = 1; i < static_cast<int>(node_distances.size()); ++i)
        if (node_distances[i] < node_distances[best]) best = i;
    return best;
}

double tof_variance(double beta_sq, double sigma_sq, int subcarriers,
                    int symbols, double delta_f) {
    if (!(beta_sq > 0.0)) throw std::invalid_argument("tof_variance: |beta|^2 must be positive");
    const double P = subcarriers;
    const double Q = symbols;
    return 3.0 * sigma_sq / (2.0 * kPi * kPi * beta_sq * delta_f * delta_f * P * P * P * Q);
}

Eigen::MatrixXd tof_variance_matrix(const std::vector<Eigen::Vector2d>& nodes,
                                    const Eigen::Vector2d& target,
                                    double eta_alpha, double sigma_sq,
                                    const OfdmConfig& cfg) {
    const int n = static_cast<int>(nodes.size());
    Eigen::MatrixXd out(n, n);
    for (int rx = 0; rx < n; ++rx)
        for (int tx = 0; tx < n; ++tx) {
            const double r_rx = (target - nodes[rx]).norm();
            const double r_tx = (target - nodes[tx]).norm();
            if (r_rx <= 0.0 || r_tx <= 0.0)
                throw degenerate_geometry_error("tof_variance_matrix: node at the target");
            const double beta_sq = eta_alpha / (r_rx * r_rx * r_tx * r_tx);
            out(rx, tx) = tof_variance(beta_sq, sigma_sq, cfg.subcarriers,
                                       cfg.symbols, cfg.subcarrier_spacing_hz);
        }
    return out;
}

Eigen::Vector2d tof_gradient(const std::vector<Eigen::Vector2d>& nodes,
                             const Eigen::Vector2d& target, int rx, int tx) {
    const Eigen::Vector2d d_rx = target - nodes[rx];
    const Eigen::Vector2d d_tx = target - nodes[tx];
    const double r_rx = d_rx.norm();
    const double r_tx = d_tx.norm();
    if (r_rx <= 0.0 || r_tx <= 0.0)
        throw degenerate_geometry_error("tof_gradient: node at the target");
    return (d_rx / r_rx + d_tx / r_tx) / kSpeedOfLight;
}

namespace {

Eigen::RowVector2d tof_jacobian_row(const std::vector<Eigen::Vector2d>& nodes,
                                    const Eigen::Vector2d& target, int rx, int tx) {
    return tof_gradient(nodes, target, rx, tx).transpose();
}

struct FimBlocks {
    Eigen::MatrixXd pos;        // J^T F_tt J                 (2 x 2)
    Eigen::MatrixXd coupling;   // J^T F_td                   (2 x n_offsets)
    Eigen::MatrixXd offsets;    // F_dd + F_P                 (n_offsets x n_offsets)
    int n_offsets = 0;
};

/// Assembles the chain-ruled FIM blocks from the directed TOF observations.
/// Each observation (rx, tx) has mean tau_{pair} + sign * dto_{pair} with
/// sign = +1 when tx > rx and -1 when tx < rx (offset parameters are kept
/// for ordered pairs with rx < tx; reciprocity fixes the opposite direction).
FimBlocks assemble_blocks(const LocalizationProblem& prob) {
    const int n = static_cast<int>(prob.nodes.size());
    if (n < 2) throw std::invalid_argument("localization_hcrb: need at least 2 nodes");
    if (prob.tof_var.rows() != n || prob.tof_var.cols() != n)
        throw std::invalid_argument("localization_hcrb: tof_var must be N x N");

    const bool central = prob.mode == FusionMode::Centralized;
    if (!central && (prob.node_index < 0 || prob.node_index >= n))
        throw std::out_of_range("localization_hcrb: bad decentralized node index");

    // Offset parameter indexing over unordered pairs i < j. Decentralized
    // mode only involves pairs containing the anchor node.
    std::vector<std::pair<int, int>> offset_pairs;
    auto offset_index = [&](int i, int j) {
        const int a = std::min(i, j), b = std::max(i, j);
        for (int k = 0; k < static_cast<int>(offset_pairs.size()); ++k)
            if (offset_pairs[k] == std::make_pair(a, b)) return k;
        offset_pairs.emplace_back(a, b);
        return static_cast<int>(offset_pairs.size()) - 1;
    };

    FimBlocks blocks;
    blocks.pos = Eigen::MatrixXd::Zero(2, 2);
    std::vector<Eigen::RowVector2d> coupling_rows;  // grows with offset params
    std::vector<double> offset_info;

    auto accumulate = [&](int rx, int tx) {
        const double info = 1.0 / prob.tof_var(rx, tx);
        const Eigen::RowVector2d jrow = tof_jacobian_row(prob.nodes, prob.target, rx, tx);
        blocks.pos += info * jrow.transpose() * jrow;
        if (rx == tx) return;
        const double sign = tx > rx ? 1.0 : -1.0;
        const int k = offset_index(rx, tx);
        while (static_cast<int>(coupling_rows.size()) <= k) {
            coupling_rows.emplace_back(Eigen::RowVector2d::Zero());
            offset_info.push_back(0.0);
        }
        coupling_rows[k] += info * sign * jrow;
        offset_info[k] += info;
    };

    if (central) {
        for (int rx = 0; rx < n; ++rx)
            for (int tx = 0; tx < n; ++tx) accumulate(rx, tx);
    } else {
        for (int tx = 0; tx < n; ++tx) accumulate(prob.node_index, tx);
    }

    blocks.n_offsets = static_cast<int>(offset_pairs.size());
    blocks.coupling = Eigen::MatrixXd::Zero(2, blocks.n_offsets);
    blocks.offsets = Eigen::MatrixXd::Zero(blocks.n_offsets, blocks.n_offsets);
    for (int k = 0; k < blocks.n_offsets; ++k) {
        blocks.coupling.col(k) = coupling_rows[k].transpose();
        blocks.offsets(k, k) = offset_info[k];
        if (prob.to_prior_var > 0.0) blocks.offsets(k, k) += 1.0 / prob.to_prior_var;
    }
    return blocks;
}

}  // namespace

double localization_hcrb(const LocalizationProblem& prob) {
    FimBlocks blocks = assemble_blocks(prob);

    Eigen::MatrixXd effective = blocks.pos;
    if (blocks.n_offsets > 0 && prob.to_prior_var > 0.0) {
        const Eigen::MatrixXd offsets_inv = guarded_inverse(blocks.offsets, "offset");
        effective -= blocks.coupling * offsets_inv * blocks.coupling.transpose();
    }
    // to_prior_var == 0: perfectly known offsets, the coupling term vanishes.

    const Eigen::MatrixXd pos_cov = guarded_inverse(effective, "position");
    return pos_cov.trace();
}

double localization_hcrb_fused(const LocalizationProblem& prob) {
    if (prob.mode != FusionMode::Decentralized)
        throw std::invalid_argument("localization_hcrb_fused: decentralized mode only");
    const int n = static_cast<int>(prob.nodes.size());
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        LocalizationProblem per_node = prob;
        per_node.node_index = i;
        acc += localization_hcrb(per_node);
    }
    return acc / (static_cast<double>(n) * n);
}

}  // namespace disac
