// Experiment driver for the distributed-ISAC synchronization toolkit.
//
//   disac run   --preset fig3 --trials 200 --seed 1 --out fig3.csv
//   disac bound --theorem 1 --snr-db 25
//   disac bound --theorem 2 --nodes 4 --mu 1e-4 --eta-alpha 3.13e8
//   disac hcrb  --config scene.json --prior-std-s 1e-9 --mode centralized

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "disac/harness.hpp"
#include "disac/network.hpp"
#include "disac/signal_model.hpp"
#include "disac/theory.hpp"

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

int cmd_run(const std::string& preset, int trials, std::uint64_t seed,
            const std::string& out, const std::string& config_path,
            const std::string& estimators) {
    disac::ExperimentConfig cfg = disac::make_preset(preset, trials, seed);
    cfg.out_path = out;

    if (!config_path.empty()) {
        const disac::SimConfig sim = disac::load_sim_config(config_path);
        cfg.ofdm = sim.ofdm;
        cfg.scene = sim.scene;
    }
    if (!estimators.empty()) {
        cfg.estimators.clear();
        std::istringstream in(estimators);
        std::string name;
        while (std::getline(in, name, ',')) {
            auto m = disac::method_from_name(name);
            if (!m) throw std::invalid_argument("unknown estimator: " + name);
            cfg.estimators.push_back(*m);
        }
    }

    const auto records = disac::run_experiment(cfg);
    if (out.empty()) std::cout << disac::format_csv(records);
    std::cerr << records.size() << " records"
              << (out.empty() ? "" : " -> " + out) << "\n";
    return 0;
}

int cmd_bound(int theorem, double snr_db, int subcarriers, int symbols,
              double bandwidth, double carrier, int nodes, double mu,
              double eta_alpha, double sigma_sq) {
    const disac::OfdmConfig ofdm(carrier, bandwidth, subcarriers, symbols);
    if (theorem == 1) {
        const double gamma = db_to_linear(snr_db);
        const double to = disac::crb_to(gamma, subcarriers, symbols,
                                        ofdm.subcarrier_spacing_hz);
        const double cfo = disac::crb_cfo(gamma, subcarriers, symbols,
                                          ofdm.symbol_duration_s);
        std::printf("crb_to_s2 %.17g\n", to);
        std::printf("rcrb_to_s %.17g\n", std::sqrt(to));
        std::printf("crb_cfo_hz2 %.17g\n", cfo);
        std::printf("rcrb_cfo_hz %.17g\n", std::sqrt(cfo));
    } else if (theorem == 2) {
        const disac::CpsBound b =
            disac::cps_bound(nodes, mu, eta_alpha, 1.0, sigma_sq, ofdm);
        std::printf("total_var_to_s2 %.17g\n", b.total_var_to);
        std::printf("total_var_cfo_hz2 %.17g\n", b.total_var_cfo);
    } else {
        throw std::invalid_argument("bound: --theorem must be 1 or 2");
    }
    return 0;
}

int cmd_hcrb(const std::string& config_path, double prior_std,
             const std::string& mode, int node_index) {
    const disac::SimConfig sim = disac::load_sim_config(config_path);
    if (sim.scene.targets.empty())
        throw std::invalid_argument("hcrb: config needs a target");

    disac::LocalizationProblem prob;
    for (const auto& n : sim.scene.nodes) prob.nodes.push_back(n.position);
    prob.target = sim.scene.targets[0].position;
    const double eta_alpha = sim.scene.eta * sim.scene.targets[0].rcs_m2;
    prob.tof_var = disac::tof_variance_matrix(prob.nodes, prob.target, eta_alpha,
                                              sim.scene.noise_var, sim.ofdm);
    prob.to_prior_var = prior_std * prior_std;

    if (mode == "centralized") {
        prob.mode = disac::FusionMode::Centralized;
        std::printf("crb_l_m2 %.17g\n", disac::localization_hcrb(prob));
    } else if (mode == "decentralized") {
        prob.mode = disac::FusionMode::Decentralized;
        if (node_index >= 0) {
            prob.node_index = node_index;
            std::printf("crb_l_m2 %.17g\n", disac::localization_hcrb(prob));
        } else {
            std::printf("crb_l_m2 %.17g\n", disac::localization_hcrb_fused(prob));
        }
    } else {
        throw std::invalid_argument("hcrb: --mode must be centralized or decentralized");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Over-the-air time-frequency synchronization experiments"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a Monte Carlo experiment preset");
    std::string preset = "fig3", out, config_path, estimators;
    int trials = 1000;
    std::uint64_t seed = 1;
    run->add_option("--preset", preset, "fig3|fig4|fig5|fig7|fig8|fig11|custom");
    run->add_option("--trials", trials, "Monte Carlo trials per sweep point");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--out", out, "output CSV path (stdout when omitted)");
    run->add_option("--config", config_path, "scene/OFDM JSON overriding the preset");
    run->add_option("--estimators", estimators, "comma list of mle,mp,cc");

    // bound
    auto* bound = app.add_subcommand("bound", "evaluate closed-form bounds");
    int theorem = 1, subcarriers = 64, symbols = 32, nodes = 4;
    double snr_db = 25.0, bandwidth = 50e6, carrier = 5e9;
    double mu = 1e-4, eta_alpha = 1.0, sigma_sq = 1.0;
    bound->add_option("--theorem", theorem, "1: pairwise offset CRB, 2: CPS total variance");
    bound->add_option("--snr-db", snr_db, "target SNR (bound 1)");
    bound->add_option("--subcarriers", subcarriers);
    bound->add_option("--symbols", symbols);
    bound->add_option("--bandwidth-hz", bandwidth);
    bound->add_option("--carrier-hz", carrier);
    bound->add_option("--nodes", nodes, "node count N (bound 2)");
    bound->add_option("--mu", mu, "PPP intensity, nodes per m^2 (bound 2)");
    bound->add_option("--eta-alpha", eta_alpha, "gain * RCS product (bound 2)");
    bound->add_option("--sigma-sq", sigma_sq, "noise variance (bound 2)");

    // hcrb
    auto* hcrb = app.add_subcommand("hcrb", "target localization hybrid CRB");
    std::string hcrb_config, mode = "centralized";
    double prior_std = 0.0;
    int node_index = -1;
    hcrb->add_option("--config", hcrb_config, "scene/OFDM JSON")->required();
    hcrb->add_option("--prior-std-s", prior_std, "assumed TO prior std (s)");
    hcrb->add_option("--mode", mode, "centralized|decentralized");
    hcrb->add_option("--node", node_index, "decentralized anchor (default: fused average)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(preset, trials, seed, out, config_path, estimators);
        if (bound->parsed())
            return cmd_bound(theorem, snr_db, subcarriers, symbols, bandwidth,
                             carrier, nodes, mu, eta_alpha, sigma_sq);
        if (hcrb->parsed())
            return cmd_hcrb(hcrb_config, prior_std, mode, node_index);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
