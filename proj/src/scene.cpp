#include "disac/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace disac {

void Scene::validate() const {
    if (nodes.size() < 2)
        throw std::invalid_argument("Scene: pairwise synchronization needs at least 2 nodes");
    if (noise_var < 0.0)
        throw std::invalid_argument("Scene: noise_var must be >= 0");
    if (nodes[0].time_offset_s != 0.0 || nodes[0].freq_offset_hz != 0.0)
        throw std::invalid_argument("Scene: reference node (index 0) must have zero TO and CFO");
    for (const auto& t : targets)
        if (!(t.rcs_m2 > 0.0))
            throw std::invalid_argument("Scene: target rcs must be positive");
    if (target_snr && !(noise_var > 0.0))
        throw std::invalid_argument("Scene: target_snr override requires noise_var > 0");
    if (target_snr && !(*target_snr > 0.0))
        throw std::invalid_argument("Scene: target_snr must be positive");
}

namespace {

Eigen::Vector2d parse_vec2(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument(std::string("config: ") + what + " must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

SimConfig parse_sim_config(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);

    SimConfig out;
    out.ofdm = OfdmConfig(j.at("carrier_hz").get<double>(),
                          j.at("bandwidth_hz").get<double>(),
                          j.at("subcarriers").get<int>(),
                          j.at("symbols").get<int>());

    Scene& s = out.scene;
    s.noise_var = j.value("noise_var", 0.0);
    s.eta = j.value("eta", 1.0);
    s.rng_seed = j.value("seed", std::uint64_t{0});
    s.strict_reciprocity = j.value("strict_reciprocity", true);
    if (j.contains("target_snr_db"))
        s.target_snr = std::pow(10.0, j["target_snr_db"].get<double>() / 10.0);

    for (const auto& jn : j.at("nodes")) {
        NodeState n;
        n.position = parse_vec2(jn.at("pos"), "nodes[].pos");
        n.time_offset_s = jn.value("to_s", 0.0);
        n.freq_offset_hz = jn.value("cfo_hz", 0.0);
        s.nodes.push_back(n);
    }
    for (const auto& jt : j.at("targets")) {
        Target t;
        t.position = parse_vec2(jt.at("pos"), "targets[].pos");
        if (jt.contains("vel")) t.velocity = parse_vec2(jt["vel"], "targets[].vel");
        t.rcs_m2 = jt.value("rcs", 1.0);
        s.targets.push_back(t);
    }

    s.validate();
    return out;
}

SimConfig load_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sim_config(buf.str());
}

}  // namespace disac
