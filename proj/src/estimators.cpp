#include "disac/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>
#include <boost/math/tools/minima.hpp>

#include "disac/transforms.hpp"

namespace disac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tone exponent sign per axis: delay-branch tones rotate as
/// exp(-j 2 pi i df x), Doppler-branch tones as exp(+j 2 pi i T x).
double axis_sign(Axis axis) { return axis == Axis::Delay ? -1.0 : +1.0; }

/// Profiled-amplitude periodogram |a(2 offset)^H g|^2.
double periodogram(const MatchedSignal& g, double offset) {
    const double s = axis_sign(g.axis);
    const std::complex<double> j{0.0, 1.0};
    std::complex<double> acc{0.0, 0.0};
    const double w = -s * kTwoPi * g.sample_step * 2.0 * offset;
    for (Eigen::Index i = 0; i < g.samples.size(); ++i)
        acc += g.samples(i) * std::exp(j * (w * static_cast<double>(i)));
    return std::norm(acc);
}

/// Wraps an integer bin difference onto the circular axis, to the
/// equivalent value of smallest magnitude (exact half wraps to -n/2).
int wrap_bins(int diff, int n) {
    int w = ((diff % n) + n + n / 2) % n - n / 2;
    return w;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Mle: return "mle";
        case Method::Mp: return "mp";
        case Method::Cc: return "cc";
    }
    return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
    if (name == "mle") return Method::Mle;
    if (name == "mp") return Method::Mp;
    if (name == "cc") return Method::Cc;
    return std::nullopt;
}

InitialEstimate initial_estimate(const PeakIndices& fwd, const PeakIndices& rev,
                                 const OfdmConfig& cfg) {
    const int P = cfg.subcarriers;
    const int Q = cfg.symbols;
    InitialEstimate out;
    out.to_halfwidth_s = 1.0 / (2.0 * P * cfg.subcarrier_spacing_hz);
    out.cfo_halfwidth_hz = 1.0 / (2.0 * Q * cfg.symbol_duration_s);
    out.to_s = wrap_bins(fwd.delay_bin - rev.delay_bin, P) /
               (2.0 * P * cfg.subcarrier_spacing_hz);
    out.cfo_hz = wrap_bins(fwd.doppler_bin - rev.doppler_bin, Q) /
                 (2.0 * Q * cfg.symbol_duration_s);
    return out;
}

BranchEstimate estimate_mle(const MatchedSignal& g, double init, double halfwidth) {
    if (g.samples.size() == 0 || g.samples.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("estimate_mle: empty matched signal");
    if (!(halfwidth > 0.0))
        throw std::invalid_argument("estimate_mle: search half-width must be positive");

    // The search runs in normalized units u in [-1, 1] (fractions of the
    // half-width around the initial estimate) to condition the scalar
    // optimizer; offsets in SI units can sit at the 1e-10 scale where
    // absolute tolerances misbehave.
    auto to_offset = [&](double u) { return init + u * halfwidth; };
    auto p_of = [&](double u) { return periodogram(g, to_offset(u)); };

    // Dense coarse grid over the bounded interval.
    constexpr int kGrid = 129;
    double best_u = -1.0, best_p = -1.0;
    for (int i = 0; i < kGrid; ++i) {
        const double u = -1.0 + 2.0 * i / (kGrid - 1);
        const double p = p_of(u);
        if (p > best_p) {
            best_p = p;
            best_u = u;
        }
    }

    // Derivative-free refinement inside the bracketing grid cell pair.
    const double step = 2.0 / (kGrid - 1);
    const double blo = std::max(-1.0, best_u - step);
    const double bhi = std::min(1.0, best_u + step);
    auto neg = [&](double u) { return -p_of(u); };
    const auto [ref_u, ref_negp] =
        boost::math::tools::brent_find_minima(neg, blo, bhi,
                                              std::numeric_limits<double>::digits);
    const double ref_x = to_offset(ref_u);
    const double best_x = to_offset(best_u);

    BranchEstimate out;
    const double energy = g.samples.squaredNorm();
    const double n = static_cast<double>(g.samples.size());
    const double ref_p = -ref_negp;
    if (ref_p >= best_p) {
        out.offset = ref_x;
        out.cost = energy - ref_p / n;
    } else if (ref_p >= best_p * (1.0 - 1e-9)) {
        // Refinement landed within float noise of the exact grid optimum.
        out.offset = best_p > ref_p ? best_x : ref_x;
        out.cost = energy - std::max(best_p, ref_p) / n;
    } else {
        out.offset = best_x;
        out.converged = false;
        out.cost = energy - best_p / n;
    }
    return out;
}

BranchEstimate estimate_mp(const MatchedSignal& g, int pencil) {
    const int n = static_cast<int>(g.samples.size());
    int L = pencil > 0 ? pencil : n / 3;
    if (L < 1) L = 1;
    if (n < L + 2)
        throw std::invalid_argument("estimate_mp: signal shorter than pencil + 2");

    // (n - L) x (L + 1) Hankel matrix of the matched signal.
    Eigen::MatrixXcd hankel(n - L, L + 1);
    for (int r = 0; r < n - L; ++r)
        for (int c = 0; c <= L; ++c) hankel(r, c) = g.samples(r + c);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(hankel, Eigen::ComputeThinV);
    if (svd.singularValues()(0) <= 0.0)
        throw std::runtime_error("estimate_mp: zero principal singular value");

    const Eigen::VectorXcd v = svd.matrixV().col(0);
    const Eigen::VectorXcd v1 = v.head(L);
    const Eigen::VectorXcd v2 = v.tail(L);
    const std::complex<double> denom = v1.adjoint() * v1;
    if (std::abs(denom) <= 0.0)
        throw std::runtime_error("estimate_mp: degenerate singular vector");
    const std::complex<double> lambda = (v2.adjoint() * v1)(0) / denom;

    BranchEstimate out;
    out.offset = axis_sign(g.axis) * std::atan2(lambda.imag(), lambda.real()) /
                 (2.0 * kTwoPi * g.sample_step);
    out.converged = true;
    const auto& sv = svd.singularValues();
    out.cost = sv.size() > 1 ? sv(1) / sv(0) : 0.0;
    return out;
}

namespace {

/// Circular cross-correlation argmax, scanning lags 0, +1, -1, +2, ... so
/// ties prefer the smallest magnitude (zero lag for identical profiles).
int correlation_peak_lag(const Eigen::VectorXd& fwd, const Eigen::VectorXd& rev) {
    const int m = static_cast<int>(fwd.size());
    auto corr_at = [&](int lag) {
        double acc = 0.0;
        for (int a = 0; a < m; ++a) acc += fwd(a) * rev(((a - lag) % m + m) % m);
        return acc;
    };
    int best_lag = 0;
    double best = corr_at(0);
    for (int step = 1; step <= m / 2; ++step) {
        for (int lag : {step, -step}) {
            if (lag < -m / 2 || lag >= (m + 1) / 2) continue;
            const double v = corr_at(lag);
            if (v > best) {
                best = v;
                best_lag = lag;
            }
        }
    }
    return best_lag;
}

}  // namespace

OffsetEstimate estimate_cc(const DelayDopplerSpectrum& fwd,
                           const DelayDopplerSpectrum& rev, int zero_pad,
                           const OfdmConfig& cfg) {
    if (zero_pad < 1) throw std::invalid_argument("estimate_cc: zero_pad must be >= 1");
    const int P = cfg.subcarriers;
    const int Q = cfg.symbols;
    if (fwd.data.rows() != P || fwd.data.cols() != Q || rev.data.rows() != P ||
        rev.data.cols() != Q)
        throw std::invalid_argument("estimate_cc: spectrum dimensions do not match config");

    auto padded_spectrum = [&](const DelayDopplerSpectrum& s) {
        const SensingChannel ch = channel_from_spectrum(s);
        Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(zero_pad * P, zero_pad * Q);
        padded.topLeftCorner(P, Q) = ch.data;
        fft::backward_columns(padded);
        fft::forward_rows(padded);
        return padded;
    };

    const Eigen::MatrixXcd cf = padded_spectrum(fwd);
    const Eigen::MatrixXcd cr = padded_spectrum(rev);

    const Eigen::VectorXd delay_fwd = cf.cwiseAbs2().rowwise().sum();
    const Eigen::VectorXd delay_rev = cr.cwiseAbs2().rowwise().sum();
    const Eigen::VectorXd dopp_fwd = cf.cwiseAbs2().colwise().sum();
    const Eigen::VectorXd dopp_rev = cr.cwiseAbs2().colwise().sum();

    const int delay_lag = correlation_peak_lag(delay_fwd, delay_rev);
    const int dopp_lag = correlation_peak_lag(dopp_fwd, dopp_rev);

    OffsetEstimate out;
    out.method = Method::Cc;
    out.zero_pad = zero_pad;
    out.to_s = delay_lag / (2.0 * zero_pad * P * cfg.subcarrier_spacing_hz);
    out.cfo_hz = dopp_lag / (2.0 * zero_pad * Q * cfg.symbol_duration_s);
    return out;
}

OffsetEstimate estimate_offsets(const SensingChannel& fwd,
                                const SensingChannel& rev,
                                const OfdmConfig& cfg, Method method,
                                const PencilConfig& pencil, int cc_zero_pad) {
    const DelayDopplerSpectrum spec_fwd = delay_doppler_spectrum(fwd);
    const DelayDopplerSpectrum spec_rev = delay_doppler_spectrum(rev);

    if (method == Method::Cc)
        return estimate_cc(spec_fwd, spec_rev, cc_zero_pad, cfg);

    const PeakIndices peaks_fwd = peak_indices(spec_fwd);
    const PeakIndices peaks_rev = peak_indices(spec_rev);
    const InitialEstimate init = initial_estimate(peaks_fwd, peaks_rev, cfg);

    const CompressedPair comp_fwd =
        compress(spec_fwd, peaks_fwd.delay_bin, peaks_fwd.doppler_bin);
    const CompressedPair comp_rev =
        compress(spec_rev, peaks_rev.delay_bin, peaks_rev.doppler_bin);

    const MatchedSignal g_t =
        match(comp_fwd.doppler_compressed, comp_rev.doppler_compressed,
              Axis::Delay, cfg.subcarrier_spacing_hz);
    const MatchedSignal g_f =
        match(comp_fwd.delay_compressed, comp_rev.delay_compressed,
              Axis::Doppler, cfg.symbol_duration_s);

    OffsetEstimate out;
    out.method = method;
    out.initial = init;
    if (method == Method::Mle) {
        const BranchEstimate to = estimate_mle(g_t, init.to_s, init.to_halfwidth_s);
        const BranchEstimate cfo = estimate_mle(g_f, init.cfo_hz, init.cfo_halfwidth_hz);
        out.to_s = to.offset;
        out.cfo_hz = cfo.offset;
        out.to_converged = to.converged;
        out.cfo_converged = cfo.converged;
    } else {
        const BranchEstimate to = estimate_mp(g_t, pencil.delay_pencil);
        const BranchEstimate cfo = estimate_mp(g_f, pencil.doppler_pencil);
        out.to_s = to.offset;
        out.cfo_hz = cfo.offset;
    }
    return out;
}

}  // namespace disac
