#include "disac/bsm.hpp"

#include <stdexcept>

namespace disac {

MatchedSignal match(const Eigen::VectorXcd& fwd, const Eigen::VectorXcd& rev,
                    Axis axis, double sample_step) {
    if (fwd.size() != rev.size())
        throw std::invalid_argument("match: reciprocal channel length mismatch");
    MatchedSignal g;
    g.axis = axis;
    g.sample_step = sample_step;
    g.samples = fwd.cwiseProduct(rev.conjugate());
    return g;
}

BsmNoiseStats noise_stats(const std::vector<double>& target_snrs,
                          int subcarriers, int symbols, double noise_var) {
    if (noise_var < 0.0)
        throw std::invalid_argument("noise_stats: noise_var must be >= 0");
    double snr_sum = 0.0;
    for (double g : target_snrs) {
        if (g < 0.0) throw std::invalid_argument("noise_stats: SNRs must be >= 0");
        snr_sum += g;
    }
    const double P = subcarriers;
    const double Q = symbols;
    const double beta_sq_sum = snr_sum * noise_var;  // sum_k |beta_k|^2

    BsmNoiseStats out;
    out.delay_var = noise_var * Q * Q * (2.0 * beta_sq_sum * Q + noise_var);
    out.doppler_var = noise_var * P * P * (2.0 * beta_sq_sum * P + noise_var);
    return out;
}

}  // namespace disac
