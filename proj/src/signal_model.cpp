#include "disac/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace disac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_node_index(const Scene& scene, int idx, const char* role) {
    if (idx < 0 || idx >= static_cast<int>(scene.nodes.size()))
        throw std::out_of_range(std::string("signal_model: bad ") + role + " node index");
}

/// One beta phase per (target, pair); under strict reciprocity the pair is
/// unordered so both directions share the value.
double beta_phase(const Scene& scene, int rx, int tx, int target) {
    int a = rx, b = tx;
    if (scene.strict_reciprocity && a > b) std::swap(a, b);
    Rng rng = make_rng(scene.rng_seed,
                       {0x62657461ULL, static_cast<std::uint64_t>(target),
                        static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)});
    return uniform_phase(rng);
}

}  // namespace

PairOffsets pair_offsets(const Scene& scene, int rx, int tx) {
    check_node_index(scene, rx, "receiver");
    check_node_index(scene, tx, "transmitter");
    return {scene.nodes[tx].time_offset_s - scene.nodes[rx].time_offset_s,
            scene.nodes[tx].freq_offset_hz - scene.nodes[rx].freq_offset_hz};
}

LinkParams link_params(const Scene& scene, const OfdmConfig& cfg,
                       int rx, int tx, int target) {
    check_node_index(scene, rx, "receiver");
    check_node_index(scene, tx, "transmitter");
    if (target < 0 || target >= static_cast<int>(scene.targets.size()))
        throw std::out_of_range("signal_model: bad target index");

    const Target& tgt = scene.targets[target];
    const Eigen::Vector2d d_rx = tgt.position - scene.nodes[rx].position;
    const Eigen::Vector2d d_tx = tgt.position - scene.nodes[tx].position;
    const double r_rx = d_rx.norm();
    const double r_tx = d_tx.norm();
    if (r_rx <= 0.0 || r_tx <= 0.0)
        throw degenerate_geometry_error("signal_model: target coincides with a node");

    LinkParams out;
    out.tof_s = (r_tx + r_rx) / kSpeedOfLight;

    // Bistatic Doppler: range rate toward transmitter plus range rate toward
    // receiver, scaled to the carrier. Positive when closing on both.
    const double closing_tx = -tgt.velocity.dot(d_tx) / r_tx;
    const double closing_rx = -tgt.velocity.dot(d_rx) / r_rx;
    out.doppler_hz = (cfg.carrier_hz / kSpeedOfLight) * (closing_tx + closing_rx);

    if (tgt.amplitude_override) {
        out.amplitude = *tgt.amplitude_override;
        return out;
    }

    double beta_sq;
    if (scene.target_snr) {
        beta_sq = *scene.target_snr * scene.noise_var;
    } else {
        beta_sq = scene.eta * tgt.rcs_m2 / (r_rx * r_rx * r_tx * r_tx);
    }
    out.amplitude = std::polar(std::sqrt(beta_sq), beta_phase(scene, rx, tx, target));
    return out;
}

SensingChannel synthesize_channel(const Scene& scene, const OfdmConfig& cfg,
                                  int rx, int tx,
                                  std::vector<std::string>* warnings) {
    const auto offsets = pair_offsets(scene, rx, tx);
    const int P = cfg.subcarriers;
    const int Q = cfg.symbols;

    SensingChannel ch;
    ch.rx = rx;
    ch.tx = tx;
    ch.data = Eigen::MatrixXcd::Zero(P, Q);

    if (scene.targets.empty()) {
        if (warnings) warnings->push_back("synthesize_channel: no targets, zero channel");
        return ch;
    }

    const std::complex<double> j{0.0, 1.0};
    Eigen::VectorXcd delay_tone(P), doppler_tone(Q);
    for (int k = 0; k < static_cast<int>(scene.targets.size()); ++k) {
        const LinkParams lp = link_params(scene, cfg, rx, tx, k);

        const double doppler_total = lp.doppler_hz + offsets.cfo_hz;
        if (std::abs(doppler_total) > cfg.subcarrier_spacing_hz / 10.0 && warnings) {
            std::ostringstream msg;
            msg << "synthesize_channel: target " << k << " violates the ICI-safety bound: |"
                << doppler_total << " Hz| > spacing/10 = "
                << cfg.subcarrier_spacing_hz / 10.0 << " Hz";
            warnings->push_back(msg.str());
        }

        const double delay_total = lp.tof_s + offsets.to_s;
        for (int p = 0; p < P; ++p)
            delay_tone(p) = std::exp(-j * (kTwoPi * p * cfg.subcarrier_spacing_hz * delay_total));
        for (int q = 0; q < Q; ++q)
            doppler_tone(q) = std::exp(j * (kTwoPi * q * cfg.symbol_duration_s * doppler_total));

        ch.data.noalias() += lp.amplitude * delay_tone * doppler_tone.transpose();
    }
    return ch;
}

SensingChannel add_noise(const SensingChannel& ch, double noise_var, Rng& rng) {
    if (noise_var < 0.0)
        throw std::invalid_argument("add_noise: noise_var must be >= 0");
    SensingChannel out = ch;
    if (noise_var == 0.0) return out;
    for (Eigen::Index c = 0; c < out.data.cols(); ++c)
        for (Eigen::Index r = 0; r < out.data.rows(); ++r)
            out.data(r, c) += complex_gaussian(rng, noise_var);
    return out;
}

SensingChannel demodulate(const Eigen::MatrixXcd& received,
                          const Eigen::MatrixXcd& pilot, int rx, int tx) {
    if (received.rows() != pilot.rows() || received.cols() != pilot.cols())
        throw std::invalid_argument("demodulate: received/pilot dimension mismatch");
    constexpr double kTol = 1e-9;
    for (Eigen::Index c = 0; c < pilot.cols(); ++c)
        for (Eigen::Index r = 0; r < pilot.rows(); ++r) {
            const double mag = std::abs(pilot(r, c));
            if (mag != 0.0 && std::abs(mag - 1.0) > kTol)
                throw std::invalid_argument(
                    "demodulate: pilot entries must be unit modulus (or zero for unused "
                    "FDM subcarriers)");
        }
    SensingChannel out;
    out.rx = rx;
    out.tx = tx;
    out.data = received.cwiseProduct(pilot.conjugate());
    return out;
}

}  // namespace disac
