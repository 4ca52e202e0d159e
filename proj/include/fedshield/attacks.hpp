#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "fedshield/aggregation.hpp"
#include "fedshield/nn.hpp"
#include "fedshield/rng.hpp"

namespace fedshield::attacks {

using nn::ParamVector;

struct AttackParams {
    double gaussian_mu = 2.0;
    double gaussian_sigma = 2.0;
    double alie_z = 0.9;
    enum class GaussianMode { additive, replace } gaussian_mode = GaussianMode::additive;
};

// Loud first-contact attack: independent per-coordinate noise on top of the
// honestly trained update (or replacing it, if configured).
inline ParamVector gaussian_attack(const ParamVector& honest_update, const AttackParams& params,
                                   Rng& rng) {
    if (params.gaussian_sigma < 0)
        throw std::invalid_argument("gaussian_attack: sigma must be >= 0");
    ParamVector out(honest_update.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double noise = rng.normal(params.gaussian_mu, params.gaussian_sigma);
        out[i] = params.gaussian_mode == AttackParams::GaussianMode::additive
                     ? honest_update[i] + noise
                     : noise;
    }
    return out;
}

// Stealth attack: every colluding client submits mu - z * sigma, computed
// coordinate-wise over the cohort's honestly trained updates (population
// standard deviation). Deterministic given the cohort.
inline ParamVector alie_attack(const agg::UpdateSet& cohort_honest_updates, double z) {
    if (z < 0) throw std::invalid_argument("alie_attack: z must be >= 0");
    const std::size_t d = cohort_honest_updates.dim();
    const std::size_t m = cohort_honest_updates.size();
    ParamVector out(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        double mean = 0.0;
        for (const auto& e : cohort_honest_updates.entries) mean += e.params[k];
        mean /= static_cast<double>(m);
        double var = 0.0;
        for (const auto& e : cohort_honest_updates.entries) {
            const double diff = e.params[k] - mean;
            var += diff * diff;
        }
        var /= static_cast<double>(m);
        out[k] = mean - z * std::sqrt(var);
    }
    return out;
}

// Reconnecting-malicious-client strategy machine. A disconnected Gaussian
// attacker comes back stealthier; a denied reconnect retires the identity.
enum class RmcPhase { gaussian, alie, banned };
enum class RmcEvent { connected, flagged, force_disconnected, reconnect_denied };

struct RmcState {
    RmcPhase phase = RmcPhase::gaussian;
    int disconnect_count = 0;
};

inline std::string to_string(RmcPhase phase) {
    switch (phase) {
        case RmcPhase::gaussian: return "gaussian";
        case RmcPhase::alie: return "alie";
        case RmcPhase::banned: return "banned";
    }
    return "?";
}

inline RmcState rmc_transition(RmcState state, RmcEvent event) {
    if (state.phase == RmcPhase::banned)
        throw std::logic_error("rmc: no transitions out of the banned state");
    switch (event) {
        case RmcEvent::connected:
        case RmcEvent::flagged:
            return state; // observational events, no phase change
        case RmcEvent::force_disconnected:
            return RmcState{RmcPhase::alie, state.disconnect_count + 1};
        case RmcEvent::reconnect_denied:
            return RmcState{RmcPhase::banned, state.disconnect_count};
    }
    return state;
}

} // namespace fedshield::attacks
