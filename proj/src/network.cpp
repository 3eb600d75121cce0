#include "disac/network.hpp"

#include <cmath>
#include <numbers>

#include "disac/dd_processing.hpp"
#include "disac/signal_model.hpp"
#include "disac/theory.hpp"

namespace disac {

Deployment deploy_ppp(double mu, double area, Rng& rng,
                      std::vector<std::string>* warnings) {
    if (!(mu > 0.0) || !(area > 0.0))
        throw std::invalid_argument("deploy_ppp: intensity and area must be positive");

    Deployment out;
    out.intensity = mu;
    out.area = area;

    std::poisson_distribution<int> count_dist(mu * area);
    int count = count_dist(rng);
    while (count == 0) {
        if (warnings) warnings->push_back("deploy_ppp: zero nodes drawn, redrawing");
        count = count_dist(rng);
    }
    out.positions = ppp_conditioned(count, area, rng);
    return out;
}

std::vector<Eigen::Vector2d> ppp_conditioned(int count, double area, Rng& rng) {
    if (count < 1) throw std::invalid_argument("ppp_conditioned: need count >= 1");
    const double half = std::sqrt(area) / 2.0;
    std::uniform_real_distribution<double> u(-half, half);
    std::vector<Eigen::Vector2d> positions(count);
    for (auto& p : positions) {
        const double x = u(rng);
        const double y = u(rng);
        p = {x, y};
    }
    return positions;
}

std::vector<Eigen::Vector2d> ppp_nearest(int count, double mu, Rng& rng) {
    if (count < 1) throw std::invalid_argument("ppp_nearest: need count >= 1");
    if (!(mu > 0.0)) throw std::invalid_argument("ppp_nearest: intensity must be positive");
    std::exponential_distribution<double> gap(mu * std::numbers::pi);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Eigen::Vector2d> positions(count);
    double r_sq = 0.0;
    for (auto& p : positions) {
        r_sq += gap(rng);
        const double r = std::sqrt(r_sq);
        const double phi = angle(rng);
        p = {r * std::cos(phi), r * std::sin(phi)};
    }
    return positions;
}

std::vector<Eigen::Vector2d> ppp_independent_marginals(int count, double mu, Rng& rng) {
    if (count < 1)
        throw std::invalid_argument("ppp_independent_marginals: need count >= 1");
    if (!(mu > 0.0))
        throw std::invalid_argument("ppp_independent_marginals: intensity must be positive");
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Eigen::Vector2d> positions(count);
    for (int i = 0; i < count; ++i) {
        std::gamma_distribution<double> r_sq_dist(i + 1.0, 1.0 / (mu * std::numbers::pi));
        const double r = std::sqrt(r_sq_dist(rng));
        const double phi = angle(rng);
        positions[i] = {r * std::cos(phi), r * std::sin(phi)};
    }
    return positions;
}

SyncResult synchronize_network(const Scene& scene, const OfdmConfig& cfg,
                               Method method, Rng& rng,
                               const PencilConfig& pencil,
                               std::optional<int> reference) {
    scene.validate();
    if (scene.targets.empty())
        throw std::invalid_argument("synchronize_network: need at least one target");

    const int n = static_cast<int>(scene.nodes.size());
    // Reference selection per the nearest-node rule, using the first target
    // (the multi-node analysis assumes a shared single target).
    std::vector<double> distances(n);
    for (int i = 0; i < n; ++i)
        distances[i] = (scene.targets[0].position - scene.nodes[i].position).norm();
    const int ref = reference ? *reference : select_reference(distances);
    if (ref < 0 || ref >= n)
        throw std::out_of_range("synchronize_network: bad reference index");

    SyncResult out;
    out.reference = ref;
    out.to_s.assign(n, 0.0);
    out.cfo_hz.assign(n, 0.0);
    out.to_error_s.assign(n, 0.0);
    out.cfo_error_hz.assign(n, 0.0);
    out.valid.assign(n, true);

    for (int node = 0; node < n; ++node) {
        if (node == ref) continue;
        PairDiagnostics diag;
        diag.node = node;
        try {
            SensingChannel fwd = synthesize_channel(scene, cfg, ref, node);
            SensingChannel rev = synthesize_channel(scene, cfg, node, ref);
            fwd = add_noise(fwd, scene.noise_var, rng);
            rev = add_noise(rev, scene.noise_var, rng);
            diag.estimate = estimate_offsets(fwd, rev, cfg, method, pencil);

            const PairOffsets truth = pair_offsets(scene, ref, node);
            out.to_s[node] = diag.estimate.to_s;
            out.cfo_hz[node] = diag.estimate.cfo_hz;
            out.to_error_s[node] = diag.estimate.to_s - truth.to_s;
            out.cfo_error_hz[node] = diag.estimate.cfo_hz - truth.cfo_hz;
            out.total_sq_error_to += out.to_error_s[node] * out.to_error_s[node];
            out.total_sq_error_cfo += out.cfo_error_hz[node] * out.cfo_error_hz[node];
        } catch (const std::exception& e) {
            diag.valid = false;
            diag.error = e.what();
            out.valid[node] = false;
        }
        out.pairs.push_back(diag);
    }
    return out;
}

std::vector<SensingChannel> apply_compensation(
    const std::vector<SensingChannel>& channels, const SyncResult& sync,
    const OfdmConfig& cfg) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    const std::complex<double> j{0.0, 1.0};

    std::vector<SensingChannel> out;
    out.reserve(channels.size());
    for (const auto& ch : channels) {
        const int n_nodes = static_cast<int>(sync.to_s.size());
        if (ch.rx < 0 || ch.rx >= n_nodes || ch.tx < 0 || ch.tx >= n_nodes)
            throw std::out_of_range("apply_compensation: channel pair outside sync result");
        const double dto = sync.to_s[ch.tx] - sync.to_s[ch.rx];
        const double dcfo = sync.cfo_hz[ch.tx] - sync.cfo_hz[ch.rx];

        SensingChannel comp = ch;
        for (Eigen::Index q = 0; q < comp.data.cols(); ++q)
            for (Eigen::Index p = 0; p < comp.data.rows(); ++p) {
                // Conjugates of the synthesis offset factors.
                const double to_phase = kTwoPi * double(p) * cfg.subcarrier_spacing_hz * dto;
                const double cfo_phase = kTwoPi * double(q) * cfg.symbol_duration_s * dcfo;
                comp.data(p, q) *= std::exp(j * to_phase) * std::exp(-j * cfo_phase);
            }
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace disac
