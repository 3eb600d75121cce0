#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disac/estimators.hpp"
#include "disac/ofdm.hpp"
#include "disac/scene.hpp"

namespace disac {

/// A reproducible Monte Carlo experiment: sweep variable, per-point trial
/// count, estimators, scene template and master seed. Presets mirror the
/// standard evaluation scenarios; `custom` runs whatever the config says.
struct ExperimentConfig {
    std::string preset = "custom";
    std::string sweep_var;        // snr_db | symbols | bandwidth_hz | nodes | to_prior_std_s
    std::vector<double> sweep;
    int trials = 1000;
    std::vector<Method> estimators{Method::Mle, Method::Mp, Method::Cc};
    OfdmConfig ofdm{5e9, 50e6, 64, 32};
    Scene scene;                  // template; offsets/noise drawn per trial
    std::uint64_t seed = 1;
    std::string out_path;

    // Pairwise sweeps: random offset draw scales per trial.
    double to_std_s = 20e-9;
    double cfo_std_hz = 10e3;
    int cc_zero_pad = 8;

    // Network sweeps: PPP intensity; fixed area when > 0 (otherwise the
    // region grows as N / mu); target SNR calibration "snr_ref at range_ref"
    // fixing eta * rcs = snr_ref * sigma^2 * range_ref^4.
    double mu = 1e-4;
    double area = 0.0;
    double snr_ref_db = 17.0;
    double range_ref_m = 50.0;

    // HCRB sweep: node counts evaluated per prior value.
    std::vector<int> node_counts{2, 3};
};

/// One value of one metric at one sweep point, with the matching theory
/// overlay (offset RCRB, CPS total-variance bound, or none).
struct ResultRecord {
    std::string sweep_var;
    double sweep_value = 0.0;
    std::string estimator;
    std::string metric;  // rmse_to_s | rmse_cfo_hz | total_var_to | total_var_cfo | crb_l_m2
    double value = 0.0;
    std::optional<double> theory;
    int trials = 0;
    std::uint64_t seed = 0;
};

/// Presets: fig3 (SNR sweep, two fixed nodes, one target), fig4 (symbol
/// count sweep), fig5 (bandwidth sweep at fixed spacing), fig7 (node count,
/// fixed density), fig8 (node count, fixed area), fig11 (localization HCRB
/// vs assumed TO prior std). Throws std::invalid_argument on unknown names.
ExperimentConfig make_preset(const std::string& name, int trials,
                             std::uint64_t seed);

/// Runs the experiment. Trials are independent and seeded by
/// (master seed, sweep index, trial index); records come back in a fixed
/// order regardless of scheduling.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

/// Writes records as CSV with header
/// sweep_var,sweep_value,estimator,metric,value,theory,trials,seed
/// in deterministic row order (sweep value, then estimator, then metric),
/// floating point at 17 significant digits. Throws std::runtime_error with
/// the path on I/O failure.
void emit_csv(const std::vector<ResultRecord>& records, const std::string& path);

std::string format_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_csv(const std::string& csv_text);

}  // namespace disac
