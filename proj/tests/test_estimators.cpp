#include <doctest.h>

#include <cmath>

#include "disac/estimators.hpp"
#include "disac/signal_model.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace disac;
using helpers::kCfg;

namespace {

MatchedSignal delay_tone(double dto, int n = 64,
                         double step = kCfg.subcarrier_spacing_hz,
                         double amp = 1.0) {
    const std::complex<double> j{0.0, 1.0};
    MatchedSignal g;
    g.axis = Axis::Delay;
    g.sample_step = step;
    g.samples.resize(n);
    for (int i = 0; i < n; ++i)
        g.samples(i) = amp * std::exp(-j * (2.0 * oracles::kPi * i * step * 2.0 * dto));
    return g;
}

MatchedSignal doppler_tone(double dcfo, int n = 32,
                           double step = kCfg.symbol_duration_s) {
    const std::complex<double> j{0.0, 1.0};
    MatchedSignal g;
    g.axis = Axis::Doppler;
    g.sample_step = step;
    g.samples.resize(n);
    for (int i = 0; i < n; ++i)
        g.samples(i) = std::exp(j * (2.0 * oracles::kPi * i * step * 2.0 * dcfo));
    return g;
}

PeakIndices bins(int delay, int doppler) {
    PeakIndices p;
    p.delay_bin = delay;
    p.doppler_bin = doppler;
    return p;
}

}  // namespace

TEST_CASE("initial_estimate: bin differences and circular wrap") {
    SUBCASE("equal bins give zero") {
        const InitialEstimate init = initial_estimate(bins(9, 4), bins(9, 4), kCfg);
        CHECK(init.to_s == 0.0);
        CHECK(init.cfo_hz == 0.0);
    }
    SUBCASE("worked example: 20 ns from a two-bin difference") {
        const InitialEstimate init = initial_estimate(bins(5, 0), bins(3, 0), kCfg);
        CHECK(init.to_s == doctest::Approx(20e-9).epsilon(1e-12));
        CHECK(init.to_halfwidth_s == doctest::Approx(10e-9).epsilon(1e-12));
    }
    SUBCASE("Doppler wraparound picks the short way around the circle") {
        const InitialEstimate init =
            initial_estimate(bins(0, 0), bins(0, kCfg.symbols - 1), kCfg);
        CHECK(init.cfo_hz ==
              doctest::Approx(1.0 / (2.0 * kCfg.symbols * kCfg.symbol_duration_s))
                  .epsilon(1e-12));
        CHECK(init.cfo_hz > 0.0);
    }
}

TEST_CASE("estimate_mle: noiseless exactness and trivial cases") {
    SUBCASE("tone at 2*dto = 10 ns recovers 5 ns almost exactly") {
        const MatchedSignal g = delay_tone(5e-9);
        const BranchEstimate est = estimate_mle(g, 0.0, 10e-9);
        CHECK(std::abs(est.offset - 5e-9) < 1e-15);  // < 1e-3 ps
        CHECK(est.converged);
    }
    SUBCASE("all-ones matched signal estimates zero") {
        MatchedSignal g = delay_tone(0.0);
        const BranchEstimate est = estimate_mle(g, 0.0, 10e-9);
        CHECK(std::abs(est.offset) < 1e-15);
    }
    SUBCASE("empty or zero signal rejected") {
        MatchedSignal g = delay_tone(0.0);
        g.samples.setZero();
        CHECK_THROWS_AS(estimate_mle(g, 0.0, 1e-9), std::invalid_argument);
    }
}

TEST_CASE("estimate_mle: refinement never degrades the coarse grid cost") {
    // Tone plus a weak interferer: refined cost must stay at or below every
    // grid point's cost, in particular the best one.
    MatchedSignal g = delay_tone(3.3e-9);
    g.samples += 0.25 * delay_tone(-6.7e-9).samples;
    const double hw = 10e-9;
    const BranchEstimate est = estimate_mle(g, 0.0, hw);

    const double energy = g.samples.squaredNorm();
    const int n = static_cast<int>(g.samples.size());
    double best_grid_cost = 1e300;
    for (int i = 0; i < 129; ++i) {
        const double x = -hw + 2 * hw * i / 128.0;
        const std::complex<double> j{0.0, 1.0};
        std::complex<double> acc{0.0, 0.0};
        for (int k = 0; k < n; ++k)
            acc += g.samples(k) * std::exp(j * (2.0 * oracles::kPi * k *
                                                g.sample_step * 2.0 * x));
        best_grid_cost = std::min(best_grid_cost, energy - std::norm(acc) / n);
    }
    CHECK(est.cost <= best_grid_cost + 1e-9 * energy);
}

TEST_CASE("estimate_mp: noiseless exactness, constants, errors") {
    SUBCASE("tone at 2*dto = 10 ns with L = 21 recovers 5 ns to machine precision") {
        const MatchedSignal g = delay_tone(5e-9);
        const BranchEstimate est = estimate_mp(g, 21);
        CHECK(std::abs(est.offset - 5e-9) < 1e-18);
    }
    SUBCASE("constant vector maps to zero offset") {
        const MatchedSignal g = delay_tone(0.0);
        const BranchEstimate est = estimate_mp(g);
        CHECK(std::abs(est.offset) < 1e-18);
    }
    SUBCASE("off-grid offsets anywhere in the unambiguous range are exact") {
        // MP noiseless error < 1e-6 bin for arbitrary off-grid offsets.
        const double bin = 1.0 / (2.0 * kCfg.subcarriers * kCfg.subcarrier_spacing_hz);
        for (double frac : {-0.437, -0.11, 0.077, 0.29, 0.46}) {
            const double dto = frac * kCfg.subcarriers * bin;  // within +-1/(4 df)
            const MatchedSignal g = delay_tone(dto);
            const BranchEstimate est = estimate_mp(g);
            CHECK(std::abs(est.offset - dto) < 1e-6 * bin);
        }
    }
    SUBCASE("doppler branch sign: positive CFO estimates positive") {
        const MatchedSignal g = doppler_tone(700.0);
        const BranchEstimate est = estimate_mp(g);
        CHECK(est.offset == doctest::Approx(700.0).epsilon(1e-10));
    }
    SUBCASE("zero signal is degenerate") {
        MatchedSignal g = delay_tone(0.0);
        g.samples.setZero();
        CHECK_THROWS_AS(estimate_mp(g), std::runtime_error);
    }
    SUBCASE("pencil bounds enforced") {
        const MatchedSignal g = delay_tone(1e-9, 8);
        CHECK_THROWS_AS(estimate_mp(g, 7), std::invalid_argument);
    }
}

TEST_CASE("estimate_cc: identical and shifted spectra") {
    const double bin = 1.0 / (kCfg.subcarriers * kCfg.subcarrier_spacing_hz);
    SUBCASE("identical spectra give exactly zero") {
        const SensingChannel ch = helpers::tone_channel(10.0 * bin, 0.0, {1.0, 0.0});
        const DelayDopplerSpectrum spec = delay_doppler_spectrum(ch);
        const OffsetEstimate est = estimate_cc(spec, spec, 1, kCfg);
        CHECK(est.to_s == 0.0);
        CHECK(est.cfo_hz == 0.0);
    }
    SUBCASE("on-grid two-bin offset recovered exactly at zp = 1") {
        const double dto = 1.0 * bin;  // fwd at +1 bin, rev at -1 bin: lag 2
        const SensingChannel fwd = helpers::tone_channel(10.0 * bin + dto, 0.0, {1.0, 0.0});
        const SensingChannel rev = helpers::tone_channel(10.0 * bin - dto, 0.0, {1.0, 0.0});
        const OffsetEstimate est = estimate_cc(delay_doppler_spectrum(fwd),
                                               delay_doppler_spectrum(rev), 1, kCfg);
        CHECK(est.to_s == doctest::Approx(dto).epsilon(1e-12));
    }
    SUBCASE("zp = 8 quantization floor on generic off-grid offsets") {
        const double dto = 0.137 * bin;  // well off the padded grid
        const SensingChannel fwd = helpers::tone_channel(10.0 * bin + dto, 0.0, {1.0, 0.0});
        const SensingChannel rev = helpers::tone_channel(10.0 * bin - dto, 0.0, {1.0, 0.0});
        const OffsetEstimate est = estimate_cc(delay_doppler_spectrum(fwd),
                                               delay_doppler_spectrum(rev), 8, kCfg);
        const double step = 1.0 / (2.0 * 8 * kCfg.subcarriers * kCfg.subcarrier_spacing_hz);
        CHECK(std::abs(est.to_s - dto) <= step);  // on-grid by construction
        CHECK(std::abs(est.to_s - dto) > 0.0);    // off-grid truth is not hit exactly
    }
}

TEST_CASE("full pipeline: CFO sign consistency across all three methods") {
    Scene s = helpers::pair_scene();
    s.targets[0].amplitude_override = std::complex<double>{1.0, 0.0};
    s.nodes[1].time_offset_s = 4e-9;
    s.nodes[1].freq_offset_hz = 2500.0;  // positive CFO

    const SensingChannel fwd = synthesize_channel(s, kCfg, 0, 1);
    const SensingChannel rev = synthesize_channel(s, kCfg, 1, 0);

    for (Method m : {Method::Mle, Method::Mp, Method::Cc}) {
        const OffsetEstimate est = estimate_offsets(fwd, rev, kCfg, m);
        CAPTURE(method_name(m));
        CHECK(est.cfo_hz > 0.0);
        CHECK(est.to_s > 0.0);
        if (m != Method::Cc) {
            CHECK(est.to_s == doctest::Approx(4e-9).epsilon(1e-6));
            CHECK(est.cfo_hz == doctest::Approx(2500.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("full pipeline: unbiased at high SNR (sample mean within 3 standard errors)") {
    Scene s = helpers::pair_scene(1.0);
    s.target_snr = std::pow(10.0, 2.5);  // 25 dB
    const double dto = 7e-9, dcfo = 3000.0;

    const int trials = 300;
    double sum_to = 0.0, sum_cfo = 0.0, sq_to = 0.0, sq_cfo = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = make_rng(31, {static_cast<std::uint64_t>(t)});
        Scene trial = s;
        trial.rng_seed = derive_seed(31, {7, static_cast<std::uint64_t>(t)});
        trial.nodes[1].time_offset_s = dto;
        trial.nodes[1].freq_offset_hz = dcfo;
        SensingChannel fwd = synthesize_channel(trial, kCfg, 0, 1);
        SensingChannel rev = synthesize_channel(trial, kCfg, 1, 0);
        fwd = add_noise(fwd, trial.noise_var, rng);
        rev = add_noise(rev, trial.noise_var, rng);
        const OffsetEstimate est = estimate_offsets(fwd, rev, kCfg, Method::Mp);
        sum_to += est.to_s - dto;
        sum_cfo += est.cfo_hz - dcfo;
        sq_to += (est.to_s - dto) * (est.to_s - dto);
        sq_cfo += (est.cfo_hz - dcfo) * (est.cfo_hz - dcfo);
    }
    const double se_to = std::sqrt(sq_to / trials / trials);
    const double se_cfo = std::sqrt(sq_cfo / trials / trials);
    CHECK(std::abs(sum_to / trials) < 3.0 * se_to);
    CHECK(std::abs(sum_cfo / trials) < 3.0 * se_cfo);
}
