#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fedshield/attacks.hpp"
#include "fedshield/nn.hpp"

namespace fedshield::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Rule { mean, trimmed_mean, krum };
enum class Transport { in_memory, tcp };

inline std::string to_string(Rule r) {
    switch (r) {
        case Rule::mean: return "mean";
        case Rule::trimmed_mean: return "trimmed_mean";
        case Rule::krum: return "krum";
    }
    return "?";
}

inline std::optional<Rule> rule_from(const std::string& s) {
    if (s == "mean") return Rule::mean;
    if (s == "trimmed_mean") return Rule::trimmed_mean;
    if (s == "krum") return Rule::krum;
    return std::nullopt;
}

inline std::string to_string(Transport t) {
    return t == Transport::in_memory ? "in_memory" : "tcp";
}

inline std::optional<Transport> transport_from(const std::string& s) {
    if (s == "in_memory") return Transport::in_memory;
    if (s == "tcp") return Transport::tcp;
    return std::nullopt;
}

struct ExperimentConfig {
    int n_clients = 20;
    int n_malicious = 5;
    int rounds = 50;
    Rule rule = Rule::krum;
    bool ibi_enabled = true;
    double trim_beta = 0.25;
    std::optional<int> krum_f; // defaults to n_malicious
    int strike_threshold = 3;
    double trim_flag_threshold = 0.5;  // trimmed-fraction above this flags a client
    double krum_score_factor = 1.5;    // score above factor * median flags a client
    double test_fraction = 0.2;
    std::uint64_t seed = 42;
    Transport transport = Transport::in_memory;
    std::uint16_t tcp_port = 0; // 0 = ephemeral
    std::string dataset_path = "data/health_survey.csv";
    nn::ModelConfig model;             // input_dim filled from the dataset
    attacks::AttackParams attack;

    int effective_krum_f() const { return krum_f.value_or(n_malicious); }

    void validate() const {
        if (n_clients < 1) throw ConfigError("config: n_clients must be >= 1");
        const int cap = (n_clients + 1) / 2 - 1;
        if (n_malicious < 0 || n_malicious > cap)
            throw ConfigError("config: n_malicious must lie in [0, ceil(n/2)-1] = [0, " +
                              std::to_string(cap) + "]");
        if (rounds < 0) throw ConfigError("config: rounds must be >= 0");
        if (trim_beta < 0.0 || trim_beta >= 0.5)
            throw ConfigError("config: trim_beta must lie in [0, 0.5)");
        if (rule == Rule::krum && n_clients - effective_krum_f() - 2 < 1)
            throw ConfigError("config: krum needs n_clients - krum_f - 2 >= 1");
        if (strike_threshold < 1) throw ConfigError("config: strike_threshold must be >= 1");
        if (trim_flag_threshold <= 0.0 || trim_flag_threshold > 1.0)
            throw ConfigError("config: trim_flag_threshold must lie in (0, 1]");
        if (krum_score_factor <= 0.0)
            throw ConfigError("config: krum_score_factor must be > 0");
        if (test_fraction < 0.0 || test_fraction >= 1.0)
            throw ConfigError("config: test_fraction must lie in [0, 1)");
        if (dataset_path.empty()) throw ConfigError("config: dataset_path must be set");
        if (model.learning_rate <= 0.0)
            throw ConfigError("config: model.learning_rate must be > 0");
        if (model.batch_size < 1) throw ConfigError("config: model.batch_size must be >= 1");
        if (model.local_epochs < 0)
            throw ConfigError("config: model.local_epochs must be >= 0");
        for (int d : model.hidden_dims)
            if (d < 1) throw ConfigError("config: model.hidden_dims must be positive");
        if (model.dropout_hidden < 0.0 || model.dropout_hidden >= 1.0 ||
            model.dropout_preoutput < 0.0 || model.dropout_preoutput >= 1.0)
            throw ConfigError("config: dropout probabilities must lie in [0, 1)");
        if (attack.gaussian_sigma < 0.0)
            throw ConfigError("config: attack.gaussian.sigma must be >= 0");
        if (attack.alie_z < 0.0) throw ConfigError("config: attack.alie.z_max must be >= 0");
    }
};

// Flat JSON document; section membership is spelled with dotted keys.
inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["n_clients"] = c.n_clients;
    j["n_malicious"] = c.n_malicious;
    j["rounds"] = c.rounds;
    j["rule"] = to_string(c.rule);
    j["ibi_enabled"] = c.ibi_enabled;
    j["trim_beta"] = c.trim_beta;
    j["krum_f"] = c.effective_krum_f();
    j["strike_threshold"] = c.strike_threshold;
    j["trim_flag_threshold"] = c.trim_flag_threshold;
    j["krum_score_factor"] = c.krum_score_factor;
    j["test_fraction"] = c.test_fraction;
    j["seed"] = c.seed;
    j["transport"] = to_string(c.transport);
    j["tcp_port"] = c.tcp_port;
    j["dataset_path"] = c.dataset_path;
    j["model.hidden_dims"] = c.model.hidden_dims;
    j["model.dropout_hidden"] = c.model.dropout_hidden;
    j["model.dropout_preoutput"] = c.model.dropout_preoutput;
    j["model.learning_rate"] = c.model.learning_rate;
    j["model.batch_size"] = c.model.batch_size;
    j["model.local_epochs"] = c.model.local_epochs;
    j["attack.gaussian.mu"] = c.attack.gaussian_mu;
    j["attack.gaussian.sigma"] = c.attack.gaussian_sigma;
    j["attack.gaussian_mode"] =
        c.attack.gaussian_mode == attacks::AttackParams::GaussianMode::additive ? "additive"
                                                                                : "replace";
    j["attack.alie.z_max"] = c.attack.alie_z;
    return j;
}

namespace detail {

template <typename T>
T expect(const nlohmann::json& v, const char* key, const char* kind, bool ok) {
    if (!ok) throw ConfigError(std::string("config: key '") + key + "' must be " + kind);
    return v.get<T>();
}

} // namespace detail

inline void apply_json(ExperimentConfig& c, const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
    using nlohmann::json;
    for (auto& [key, v] : doc.items()) {
        auto num = [&]() -> double {
            return detail::expect<double>(v, key.c_str(), "a number", v.is_number());
        };
        auto integer = [&]() -> int {
            return detail::expect<int>(v, key.c_str(), "an integer", v.is_number_integer());
        };
        auto text = [&]() -> std::string {
            return detail::expect<std::string>(v, key.c_str(), "a string", v.is_string());
        };
        auto boolean = [&]() -> bool {
            return detail::expect<bool>(v, key.c_str(), "a boolean", v.is_boolean());
        };

        if (key == "n_clients") c.n_clients = integer();
        else if (key == "n_malicious") c.n_malicious = integer();
        else if (key == "rounds") c.rounds = integer();
        else if (key == "rule") {
            auto r = rule_from(text());
            if (!r) throw ConfigError("config: rule must be krum|trimmed_mean|mean");
            c.rule = *r;
        } else if (key == "ibi_enabled") c.ibi_enabled = boolean();
        else if (key == "trim_beta") c.trim_beta = num();
        else if (key == "krum_f") c.krum_f = integer();
        else if (key == "strike_threshold") c.strike_threshold = integer();
        else if (key == "trim_flag_threshold") c.trim_flag_threshold = num();
        else if (key == "krum_score_factor") c.krum_score_factor = num();
        else if (key == "test_fraction") c.test_fraction = num();
        else if (key == "seed") {
            if (!v.is_number_unsigned() && !v.is_number_integer())
                throw ConfigError("config: key 'seed' must be an integer");
            c.seed = v.get<std::uint64_t>();
        } else if (key == "transport") {
            auto t = transport_from(text());
            if (!t) throw ConfigError("config: transport must be in_memory|tcp");
            c.transport = *t;
        } else if (key == "tcp_port") c.tcp_port = static_cast<std::uint16_t>(integer());
        else if (key == "dataset_path") c.dataset_path = text();
        else if (key == "model.hidden_dims") {
            if (!v.is_array()) throw ConfigError("config: model.hidden_dims must be an array");
            c.model.hidden_dims = v.get<std::vector<int>>();
        } else if (key == "model.dropout_hidden") c.model.dropout_hidden = num();
        else if (key == "model.dropout_preoutput") c.model.dropout_preoutput = num();
        else if (key == "model.learning_rate") c.model.learning_rate = num();
        else if (key == "model.batch_size") c.model.batch_size = integer();
        else if (key == "model.local_epochs") c.model.local_epochs = integer();
        else if (key == "attack.gaussian.mu") c.attack.gaussian_mu = num();
        else if (key == "attack.gaussian.sigma") c.attack.gaussian_sigma = num();
        else if (key == "attack.gaussian_mode") {
            auto mode = text();
            if (mode == "additive")
                c.attack.gaussian_mode = attacks::AttackParams::GaussianMode::additive;
            else if (mode == "replace")
                c.attack.gaussian_mode = attacks::AttackParams::GaussianMode::replace;
            else throw ConfigError("config: attack.gaussian_mode must be additive|replace");
        } else if (key == "attack.alie.z_max") c.attack.alie_z = num();
        else throw ConfigError("config: unknown key '" + key + "'");
    }
}

// Defaults, overlaid with the file (empty file = all defaults), validated by
// the caller after any flag overrides.
inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    ExperimentConfig c;
    const auto nonspace = text.find_first_not_of(" \t\r\n");
    if (nonspace == std::string::npos) return c; // empty file -> defaults
    auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config: '" + path + "' is not well-formed JSON");
    apply_json(c, doc);
    return c;
}

} // namespace fedshield::config
