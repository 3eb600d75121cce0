#include "disac/dd_processing.hpp"

#include <stdexcept>

#include "disac/transforms.hpp"

namespace disac {

DelayDopplerSpectrum delay_doppler_spectrum(const SensingChannel& ch) {
    DelayDopplerSpectrum spec;
    spec.rx = ch.rx;
    spec.tx = ch.tx;
    spec.data = ch.data;
    fft::backward_columns(spec.data);  // subcarrier axis -> delay bins
    fft::forward_rows(spec.data);      // symbol axis -> Doppler bins
    return spec;
}

SensingChannel channel_from_spectrum(const DelayDopplerSpectrum& spec) {
    SensingChannel ch;
    ch.rx = spec.rx;
    ch.tx = spec.tx;
    ch.data = spec.data;
    fft::forward_columns(ch.data);
    fft::backward_rows(ch.data);
    ch.data /= static_cast<double>(ch.data.rows() * ch.data.cols());
    return ch;
}

PeakIndices peak_indices(const DelayDopplerSpectrum& spec) {
    const Eigen::MatrixXd power = spec.data.cwiseAbs2();
    if (power.sum() == 0.0) throw std::runtime_error("peak_indices: empty spectrum");

    const Eigen::VectorXd row_power = power.rowwise().sum();
    const Eigen::VectorXd col_power = power.colwise().sum();

    // argmax with smallest-index tie-break; also track the runner-up slice.
    auto top_two = [](const Eigen::VectorXd& v) {
        int best = 0, second = -1;
        for (int i = 1; i < v.size(); ++i) {
            if (v(i) > v(best)) {
                second = best;
                best = i;
            } else if (second < 0 || v(i) > v(second)) {
                second = i;
            }
        }
        return std::pair<int, int>{best, second < 0 ? best : second};
    };

    PeakIndices out;
    std::tie(out.delay_bin, out.delay_runner_up) = top_two(row_power);
    std::tie(out.doppler_bin, out.doppler_runner_up) = top_two(col_power);
    return out;
}

CompressedPair compress(const DelayDopplerSpectrum& spec, int delay_bin,
                        int doppler_bin) {
    const int P = static_cast<int>(spec.data.rows());
    const int Q = static_cast<int>(spec.data.cols());
    if (delay_bin < 0 || delay_bin >= P || doppler_bin < 0 || doppler_bin >= Q)
        throw std::out_of_range("compress: bin index outside the spectrum");

    CompressedPair out;
    out.delay_bin = delay_bin;
    out.doppler_bin = doppler_bin;

    out.doppler_compressed = fft::forward(spec.data.col(doppler_bin)) / double(P);
    out.delay_compressed =
        fft::backward(spec.data.row(delay_bin).transpose()) / double(Q);
    return out;
}

}  // namespace disac
