#include <doctest.h>

#include <complex>

#include "disac/bsm.hpp"
#include "disac/dd_processing.hpp"
#include "disac/estimators.hpp"
#include "disac/signal_model.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace disac;
using helpers::kCfg;

namespace {

/// Runs one direction of the pipeline up to the compressed pair.
CompressedPair compressed(const SensingChannel& ch) {
    const DelayDopplerSpectrum spec = delay_doppler_spectrum(ch);
    const PeakIndices peaks = peak_indices(spec);
    return compress(spec, peaks.delay_bin, peaks.doppler_bin);
}

}  // namespace

TEST_CASE("match: single target, 5 ns TO -> pure tone at 10 ns, real positive amplitude") {
    const double tau = 14.0 / (kCfg.subcarriers * kCfg.subcarrier_spacing_hz);
    const std::complex<double> beta{0.6, 0.2};
    const double dto = 5e-9;

    const SensingChannel fwd = helpers::tone_channel(tau + dto, 0.0, beta);
    const SensingChannel rev = helpers::tone_channel(tau - dto, 0.0, beta);
    const CompressedPair cf = compressed(fwd);
    const CompressedPair cr = compressed(rev);
    const MatchedSignal g = match(cf.doppler_compressed, cr.doppler_compressed,
                                  Axis::Delay, kCfg.subcarrier_spacing_hz);

    const double amp = kCfg.symbols * double(kCfg.symbols) * std::norm(beta);
    const std::complex<double> j{0.0, 1.0};
    for (int p = 0; p < kCfg.subcarriers; ++p) {
        const std::complex<double> expected =
            amp * std::exp(-j * (2.0 * oracles::kPi * p * kCfg.subcarrier_spacing_hz *
                                 2.0 * dto));
        CHECK(std::abs(g.samples(p) - expected) < 1e-8 * amp);
    }
    CHECK(g.samples(0).real() > 0.0);
    CHECK(std::abs(g.samples(0).imag()) < 1e-8 * amp);
}

TEST_CASE("match: zero offsets give a constant positive real vector") {
    const double tau = 6.0 / (kCfg.subcarriers * kCfg.subcarrier_spacing_hz);
    const SensingChannel ch = helpers::tone_channel(tau, 0.0, {0.3, -0.8});
    const CompressedPair c = compressed(ch);
    const MatchedSignal g = match(c.doppler_compressed, c.doppler_compressed,
                                  Axis::Delay, kCfg.subcarrier_spacing_hz);
    for (int p = 0; p < kCfg.subcarriers; ++p) {
        CHECK(g.samples(p).imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(g.samples(p).real() > 0.0);
        CHECK(g.samples(p).real() == doctest::Approx(g.samples(0).real()));
    }
}

TEST_CASE("match: two same-bin targets produce exactly the three predicted tones") {
    const double bin = 1.0 / (kCfg.subcarriers * kCfg.subcarrier_spacing_hz);
    const double tau1 = 12.0 * bin + 0.10 * bin;
    const double tau2 = 12.0 * bin + 0.34 * bin;  // same delay bin as tau1
    const std::complex<double> b1{0.7, 0.1};
    const std::complex<double> b2{-0.2, 0.6};
    const double dto = 3e-9;

    auto two_tone = [&](double shift) {
        SensingChannel ch = helpers::tone_channel(tau1 + shift, 0.0, b1);
        ch.data += helpers::tone_channel(tau2 + shift, 0.0, b2).data;
        return ch;
    };
    const CompressedPair cf = compressed(two_tone(+dto));
    const CompressedPair cr = compressed(two_tone(-dto));
    const MatchedSignal g = match(cf.doppler_compressed, cr.doppler_compressed,
                                  Axis::Delay, kCfg.subcarrier_spacing_hz);

    // Expansion of the matched product: the offset tone carries the summed
    // power, the cross terms sit at +-(tau1 - tau2) around it.
    const std::complex<double> j{0.0, 1.0};
    const double q2 = double(kCfg.symbols) * kCfg.symbols;
    Eigen::VectorXcd expected(kCfg.subcarriers);
    for (int p = 0; p < kCfg.subcarriers; ++p) {
        const double w = 2.0 * oracles::kPi * p * kCfg.subcarrier_spacing_hz;
        expected(p) =
            q2 * (std::norm(b1) + std::norm(b2)) * std::exp(-j * (w * 2.0 * dto)) +
            q2 * b1 * std::conj(b2) * std::exp(-j * (w * (tau1 - tau2 + 2.0 * dto))) +
            q2 * b2 * std::conj(b1) * std::exp(-j * (w * (tau2 - tau1 + 2.0 * dto)));
    }
    CHECK((g.samples - expected).cwiseAbs().maxCoeff() <
          1e-9 * expected.cwiseAbs().maxCoeff());

    // Brute-force DFT of g: the offset tone dominates (summed power).
    const Eigen::VectorXcd spectrum = oracles::dft_direct(g.samples);
    Eigen::Index peak;
    spectrum.cwiseAbs().maxCoeff(&peak);
    // 2*dto = 6 ns is well inside bin 0 of the matched-signal axis.
    CHECK(peak == 0);
}

TEST_CASE("match: conjugation antisymmetry and length checks") {
    const SensingChannel ch = helpers::tone_channel(3e-7, 0.0, {1.0, 0.0});
    const CompressedPair c = compressed(ch);
    Eigen::VectorXcd shifted = c.doppler_compressed;
    shifted(0) += std::complex<double>{0.1, 0.2};
    const MatchedSignal ba = match(shifted, c.doppler_compressed, Axis::Delay,
                                   kCfg.subcarrier_spacing_hz);
    const MatchedSignal ba_rev = match(c.doppler_compressed, shifted, Axis::Delay,
                                       kCfg.subcarrier_spacing_hz);
    CHECK((ba.samples - ba_rev.samples.conjugate()).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::VectorXcd wrong(kCfg.subcarriers + 1);
    CHECK_THROWS_AS(match(c.doppler_compressed, wrong, Axis::Delay,
                          kCfg.subcarrier_spacing_hz),
                    std::invalid_argument);
}

TEST_CASE("noise_stats: closed forms") {
    SUBCASE("no targets: the pure noise-noise floor") {
        const BsmNoiseStats s = noise_stats({}, 64, 32, 0.5);
        CHECK(s.delay_var == doctest::Approx(0.25 * 32.0 * 32.0));
        CHECK(s.doppler_var == doctest::Approx(0.25 * 64.0 * 64.0));
    }
    SUBCASE("zero noise: both zero") {
        const BsmNoiseStats s = noise_stats({10.0}, 64, 32, 0.0);
        CHECK(s.delay_var == 0.0);
        CHECK(s.doppler_var == 0.0);
    }
    SUBCASE("worked example: |beta|^2 = 1, sigma^2 = 0.1, P = 64, Q = 32") {
        // gamma = |beta|^2 / sigma^2 = 10
        const BsmNoiseStats s = noise_stats({10.0}, 64, 32, 0.1);
        CHECK(s.delay_var == doctest::Approx(6563.84).epsilon(1e-12));
    }
}

TEST_CASE("noise_stats: Monte Carlo variance of the matched-signal noise") {
    // Scaled-down version of the acceptance check: full pipeline, the
    // empirical variance of g_t minus its noiseless value tracks sigma_t^2.
    const double sigma_sq = 1.0;
    const double snr_db = 12.0;
    const double beta_mag = std::sqrt(std::pow(10.0, snr_db / 10.0) * sigma_sq);
    const double tau = 10.0 / (kCfg.subcarriers * kCfg.subcarrier_spacing_hz);

    const SensingChannel clean = helpers::tone_channel(tau, 0.0, {beta_mag, 0.0});
    const CompressedPair c0 = compressed(clean);
    const MatchedSignal g0 = match(c0.doppler_compressed, c0.doppler_compressed,
                                   Axis::Delay, kCfg.subcarrier_spacing_hz);

    const int trials = 3000;
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = make_rng(23, {static_cast<std::uint64_t>(t)});
        const SensingChannel fwd = add_noise(clean, sigma_sq, rng);
        const SensingChannel rev = add_noise(clean, sigma_sq, rng);
        const CompressedPair cf = compressed(fwd);
        const CompressedPair cr = compressed(rev);
        const MatchedSignal g = match(cf.doppler_compressed, cr.doppler_compressed,
                                      Axis::Delay, kCfg.subcarrier_spacing_hz);
        acc += (g.samples - g0.samples).cwiseAbs2().mean();
    }
    const double empirical = acc / trials;
    const BsmNoiseStats stats =
        noise_stats({beta_mag * beta_mag / sigma_sq}, kCfg.subcarriers,
                    kCfg.symbols, sigma_sq);
    CHECK(empirical == doctest::Approx(stats.delay_var).epsilon(0.10));
}
