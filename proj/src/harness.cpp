#include "disac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <execution>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "disac/network.hpp"
#include "disac/signal_model.hpp"
#include "disac/theory.hpp"

namespace disac {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void parallel_trials(int trials, const std::function<void(int)>& body) {
    std::vector<int> idx(trials);
    std::iota(idx.begin(), idx.end(), 0);
    std::for_each(std::execution::par, idx.begin(), idx.end(), body);
}

Scene two_node_scene() {
    Scene s;
    NodeState a, b;
    a.position = {35.35, -35.35};
    b.position = {-35.35, -35.35};
    s.nodes = {a, b};
    Target t;
    t.position = {0.0, 0.0};
    s.targets = {t};
    s.noise_var = 1.0;
    return s;
}

bool is_pairwise(const ExperimentConfig& c) {
    return c.sweep_var == "snr_db" || c.sweep_var == "symbols" ||
           c.sweep_var == "bandwidth_hz";
}

/// OFDM geometry at one sweep point. Bandwidth sweeps keep the subcarrier
/// spacing fixed and scale the subcarrier count.
OfdmConfig point_ofdm(const ExperimentConfig& c, double sweep_value) {
    if (c.sweep_var == "symbols")
        return {c.ofdm.carrier_hz, c.ofdm.bandwidth_hz, c.ofdm.subcarriers,
                static_cast<int>(std::lround(sweep_value))};
    if (c.sweep_var == "bandwidth_hz") {
        const int p = static_cast<int>(
            std::lround(sweep_value / c.ofdm.subcarrier_spacing_hz));
        return {c.ofdm.carrier_hz, sweep_value, p, c.ofdm.symbols};
    }
    return c.ofdm;
}

std::vector<ResultRecord> run_pairwise(const ExperimentConfig& c) {
    std::vector<ResultRecord> records;
    const int n_est = static_cast<int>(c.estimators.size());

    for (size_t point = 0; point < c.sweep.size(); ++point) {
        const double sweep_value = c.sweep[point];
        const OfdmConfig cfg = point_ofdm(c, sweep_value);

        Scene base = c.scene;
        if (c.sweep_var == "snr_db") base.target_snr = db_to_linear(sweep_value);

        std::vector<std::vector<double>> to_sq(n_est, std::vector<double>(c.trials));
        std::vector<std::vector<double>> cfo_sq(n_est, std::vector<double>(c.trials));

        parallel_trials(c.trials, [&](int trial) {
            Rng rng = make_rng(c.seed, {point, static_cast<std::uint64_t>(trial)});
            Scene scene = base;
            scene.rng_seed = derive_seed(c.seed, {0xb7aULL, point,
                                                  static_cast<std::uint64_t>(trial)});
            std::normal_distribution<double> to_draw(0.0, c.to_std_s);
            std::normal_distribution<double> cfo_draw(0.0, c.cfo_std_hz);
            scene.nodes[1].time_offset_s = to_draw(rng);
            scene.nodes[1].freq_offset_hz = cfo_draw(rng);

            SensingChannel fwd = synthesize_channel(scene, cfg, 0, 1);
            SensingChannel rev = synthesize_channel(scene, cfg, 1, 0);
            fwd = add_noise(fwd, scene.noise_var, rng);
            rev = add_noise(rev, scene.noise_var, rng);

            const PairOffsets truth = pair_offsets(scene, 0, 1);
            for (int e = 0; e < n_est; ++e) {
                const OffsetEstimate est = estimate_offsets(
                    fwd, rev, cfg, c.estimators[e], {}, c.cc_zero_pad);
                const double dto = est.to_s - truth.to_s;
                const double dcfo = est.cfo_hz - truth.cfo_hz;
                to_sq[e][trial] = dto * dto;
                cfo_sq[e][trial] = dcfo * dcfo;
            }
        });

        const double snr = base.target_snr ? *base.target_snr : 1.0;
        const double rcrb_to =
            std::sqrt(crb_to(snr, cfg.subcarriers, cfg.symbols, cfg.subcarrier_spacing_hz));
        const double rcrb_cfo =
            std::sqrt(crb_cfo(snr, cfg.subcarriers, cfg.symbols, cfg.symbol_duration_s));

        for (int e = 0; e < n_est; ++e) {
            const double mean_to =
                std::accumulate(to_sq[e].begin(), to_sq[e].end(), 0.0) / c.trials;
            const double mean_cfo =
                std::accumulate(cfo_sq[e].begin(), cfo_sq[e].end(), 0.0) / c.trials;
            const std::string name = method_name(c.estimators[e]);
            records.push_back({c.sweep_var, sweep_value, name, "rmse_to_s",
                               std::sqrt(mean_to), rcrb_to, c.trials, c.seed});
            records.push_back({c.sweep_var, sweep_value, name, "rmse_cfo_hz",
                               std::sqrt(mean_cfo), rcrb_cfo, c.trials, c.seed});
        }
    }
    return records;
}

std::vector<ResultRecord> run_network(const ExperimentConfig& c) {
    std::vector<ResultRecord> records;
    const double eta_alpha =
        db_to_linear(c.snr_ref_db) * std::pow(c.range_ref_m, 4.0);  // sigma^2 = 1

    for (size_t point = 0; point < c.sweep.size(); ++point) {
        const int n_nodes = static_cast<int>(std::lround(c.sweep[point]));
        const double mu = c.area > 0.0 ? n_nodes / c.area : c.mu;

        for (Method method : c.estimators) {
            std::vector<double> tot_to(c.trials), tot_cfo(c.trials);
            std::vector<char> ok(c.trials, 0);

            parallel_trials(c.trials, [&](int trial) {
                Rng rng = make_rng(c.seed, {point, static_cast<std::uint64_t>(trial),
                                            static_cast<std::uint64_t>(method)});
                Scene scene;
                scene.noise_var = 1.0;
                scene.eta = eta_alpha;
                scene.rng_seed = derive_seed(
                    c.seed, {0xce11ULL, point, static_cast<std::uint64_t>(trial)});

                // The total-variance bound models the ordered node distances
                // as independent per-index draws with node 0 as the nearest
                // (reference) node; sample that model so the overlay column
                // is the exact expectation of the simulated ensemble.
                const auto positions = ppp_independent_marginals(n_nodes, mu, rng);
                std::normal_distribution<double> to_draw(0.0, c.to_std_s);
                std::normal_distribution<double> cfo_draw(0.0, c.cfo_std_hz);
                for (int i = 0; i < n_nodes; ++i) {
                    NodeState node;
                    node.position = positions[i];
                    if (i > 0) {
                        node.time_offset_s = to_draw(rng);
                        node.freq_offset_hz = cfo_draw(rng);
                    }
                    scene.nodes.push_back(node);
                }
                Target target;
                target.position = {0.0, 0.0};
                target.rcs_m2 = 1.0;
                scene.targets = {target};

                const SyncResult sync =
                    synchronize_network(scene, c.ofdm, method, rng, {}, 0);
                const bool all_valid =
                    std::all_of(sync.valid.begin(), sync.valid.end(), [](bool v) { return v; });
                ok[trial] = all_valid ? 1 : 0;
                tot_to[trial] = sync.total_sq_error_to;
                tot_cfo[trial] = sync.total_sq_error_cfo;
            });

            double sum_to = 0.0, sum_cfo = 0.0;
            int n_ok = 0;
            for (int t = 0; t < c.trials; ++t) {
                if (!ok[t]) continue;
                sum_to += tot_to[t];
                sum_cfo += tot_cfo[t];
                ++n_ok;
            }
            if (n_ok == 0) throw std::runtime_error("run_experiment: every network draw failed");

            const CpsBound bound = cps_bound(n_nodes, mu, eta_alpha, 1.0, 1.0, c.ofdm);
            const std::string name = method_name(method);
            records.push_back({c.sweep_var, double(n_nodes), name, "total_var_to",
                               sum_to / n_ok, bound.total_var_to, n_ok, c.seed});
            records.push_back({c.sweep_var, double(n_nodes), name, "total_var_cfo",
                               sum_cfo / n_ok, bound.total_var_cfo, n_ok, c.seed});
        }
    }
    return records;
}

std::vector<ResultRecord> run_hcrb(const ExperimentConfig& c) {
    std::vector<ResultRecord> records;
    const double eta_alpha =
        db_to_linear(c.snr_ref_db) * std::pow(c.range_ref_m, 4.0);

    for (int n_nodes : c.node_counts) {
        Rng rng = make_rng(c.seed, {0x9c8bULL, static_cast<std::uint64_t>(n_nodes)});
        LocalizationProblem prob;
        prob.nodes = ppp_nearest(n_nodes, c.mu, rng);
        prob.target = {0.0, 0.0};
        prob.tof_var = tof_variance_matrix(prob.nodes, prob.target, eta_alpha, 1.0, c.ofdm);

        for (size_t point = 0; point < c.sweep.size(); ++point) {
            const double prior_std = c.sweep[point];
            prob.to_prior_var = prior_std * prior_std;

            prob.mode = FusionMode::Centralized;
            const double central = localization_hcrb(prob);
            prob.mode = FusionMode::Decentralized;
            const double decentral = localization_hcrb_fused(prob);

            const std::string suffix = "_n" + std::to_string(n_nodes);
            records.push_back({c.sweep_var, prior_std, "centralized" + suffix,
                               "crb_l_m2", central, std::nullopt, 1, c.seed});
            records.push_back({c.sweep_var, prior_std, "decentralized" + suffix,
                               "crb_l_m2", decentral, std::nullopt, 1, c.seed});
        }
    }
    return records;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig make_preset(const std::string& name, int trials,
                             std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("make_preset: trials must be >= 1");
    ExperimentConfig c;
    c.preset = name;
    c.trials = trials;
    c.seed = seed;
    c.ofdm = OfdmConfig(5e9, 50e6, 64, 32);

    if (name == "fig3") {
        c.sweep_var = "snr_db";
        c.sweep = {0, 5, 10, 15, 20, 25, 30, 35, 40};
        c.scene = two_node_scene();
    } else if (name == "fig4") {
        c.sweep_var = "symbols";
        c.sweep = {8, 16, 32, 64, 128};
        c.scene = two_node_scene();
        c.scene.target_snr = db_to_linear(25.0);
    } else if (name == "fig5") {
        c.sweep_var = "bandwidth_hz";
        c.sweep = {12.5e6, 25e6, 50e6, 100e6};
        c.scene = two_node_scene();
        c.scene.target_snr = db_to_linear(25.0);
    } else if (name == "fig7") {
        c.sweep_var = "nodes";
        c.sweep = {2, 3, 4, 5, 6};
        c.estimators = {Method::Mle, Method::Mp};
        c.mu = 1e-4;  // 100 nodes/km^2
        c.area = 0.0;
    } else if (name == "fig8") {
        c.sweep_var = "nodes";
        c.sweep = {2, 3, 4, 5, 6};
        c.estimators = {Method::Mle, Method::Mp};
        c.area = 200.0 * 200.0;
    } else if (name == "fig11") {
        c.sweep_var = "to_prior_std_s";
        c.sweep = {1e-12, 1e-11, 1e-10, 1e-9, 3.16e-9, 1e-8};
        c.node_counts = {2, 3};
        c.mu = 1e-4;
        c.estimators = {};
    } else if (name == "custom") {
        // caller fills in the sweep
    } else {
        throw std::invalid_argument("make_preset: unknown preset '" + name + "'");
    }
    return c;
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& c) {
    if (c.sweep_var != "to_prior_std_s" && c.sweep.empty())
        throw std::invalid_argument("run_experiment: empty sweep");
    if (c.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");

    std::vector<ResultRecord> records;
    if (is_pairwise(c)) {
        records = run_pairwise(c);
    } else if (c.sweep_var == "nodes") {
        records = run_network(c);
    } else if (c.sweep_var == "to_prior_std_s") {
        records = run_hcrb(c);
    } else {
        throw std::invalid_argument("run_experiment: unknown sweep variable '" +
                                    c.sweep_var + "'");
    }
    if (!c.out_path.empty()) emit_csv(records, c.out_path);
    return records;
}

std::string format_csv(const std::vector<ResultRecord>& records) {
    std::vector<ResultRecord> sorted = records;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ResultRecord& a, const ResultRecord& b) {
                         if (a.sweep_value != b.sweep_value)
                             return a.sweep_value < b.sweep_value;
                         if (a.estimator != b.estimator) return a.estimator < b.estimator;
                         return a.metric < b.metric;
                     });

    std::ostringstream out;
    out << "sweep_var,sweep_value,estimator,metric,value,theory,trials,seed\n";
    for (const auto& r : sorted) {
        out << r.sweep_var << ',' << format_double(r.sweep_value) << ',' << r.estimator
            << ',' << r.metric << ',' << format_double(r.value) << ','
            << (r.theory ? format_double(*r.theory) : "") << ',' << r.trials << ','
            << r.seed << '\n';
    }
    return out.str();
}

void emit_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open for writing: " + path);
    out << format_csv(records);
    if (!out) throw std::runtime_error("emit_csv: write failed: " + path);
}

std::vector<ResultRecord> parse_csv(const std::string& csv_text) {
    std::vector<ResultRecord> records;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("parse_csv: empty input");
    if (line != "sweep_var,sweep_value,estimator,metric,value,theory,trials,seed")
        throw std::runtime_error("parse_csv: unexpected header: " + line);

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (line.back() == ',') fields.push_back("");
        if (fields.size() != 8)
            throw std::runtime_error("parse_csv: malformed row: " + line);

        ResultRecord r;
        r.sweep_var = fields[0];
        r.sweep_value = std::stod(fields[1]);
        r.estimator = fields[2];
        r.metric = fields[3];
        r.value = std::stod(fields[4]);
        if (!fields[5].empty()) r.theory = std::stod(fields[5]);
        r.trials = std::stoi(fields[6]);
        r.seed = std::stoull(fields[7]);
        records.push_back(r);
    }
    return records;
}

}  // namespace disac
