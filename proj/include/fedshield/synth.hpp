#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedshield/rng.hpp"

namespace fedshield::data {

// Deterministic stand-in for the cleaned 2015 health-survey diabetes table:
// same 21 feature columns, same 0/1 label balance (exactly half positive),
// integral cell values in the survey's ranges, and class-conditional
// structure calibrated so a small classifier lands in the mid-0.7 accuracy
// band. `signal` scales the per-class gaps of the marginal columns;
// `pair_strength` is the probability that the Smoker/PhysActivity pair
// carries the label in its parity, individually unbiased columns whose
// joint effect has to be picked up the slow way.
struct SynthSpec {
    std::size_t rows = 70692;
    std::uint64_t seed = 7;
    double signal = 1.0;
    double pair_strength = 0.0;
};

namespace detail_synth {

struct ColumnSampler {
    const char* name;
    // kind 0: bernoulli(p0 -> p1); kind 1: rounded clipped normal
    int kind;
    double a0, a1;       // probabilities, or means
    double sd, lo, hi;   // normal-only
};

inline const std::vector<ColumnSampler>& columns() {
    static const std::vector<ColumnSampler> cols = {
        {"HighBP", 0, 0.45, 0.75, 0, 0, 0},
        {"HighChol", 0, 0.39, 0.67, 0, 0, 0},
        {"CholCheck", 0, 0.95, 0.99, 0, 0, 0},
        {"BMI", 1, 27.8, 31.9, 6.5, 12, 98},
        {"Smoker", 0, 0.43, 0.52, 0, 0, 0},
        {"Stroke", 0, 0.03, 0.09, 0, 0, 0},
        {"HeartDiseaseorAttack", 0, 0.07, 0.22, 0, 0, 0},
        {"PhysActivity", 0, 0.78, 0.63, 0, 0, 0},
        {"Fruits", 0, 0.63, 0.59, 0, 0, 0},
        {"Veggies", 0, 0.82, 0.76, 0, 0, 0},
        {"HvyAlcoholConsump", 0, 0.065, 0.04, 0, 0, 0},
        {"AnyHealthcare", 0, 0.95, 0.96, 0, 0, 0},
        {"NoDocbcCost", 0, 0.08, 0.10, 0, 0, 0},
        {"GenHlth", 1, 2.4, 3.3, 1.05, 1, 5},
        {"MentHlth", 2, 0.28, 0.34, 9.0, 0, 30},
        {"PhysHlth", 2, 0.30, 0.47, 10.0, 0, 30},
        {"DiffWalk", 0, 0.13, 0.37, 0, 0, 0},
        {"Sex", 0, 0.44, 0.48, 0, 0, 0},
        {"Age", 1, 7.5, 9.4, 2.9, 1, 13},
        {"Education", 1, 5.1, 4.8, 1.0, 1, 6},
        {"Income", 1, 6.1, 5.2, 2.0, 1, 8},
    };
    return cols;
}

inline double sample_cell(const ColumnSampler& col, int label, double signal, Rng& rng) {
    const double mix = label ? signal : 0.0;
    switch (col.kind) {
        case 0: {
            double p = col.a0 + (col.a1 - col.a0) * mix;
            p = std::min(std::max(p, 0.0), 1.0);
            return rng.bernoulli(p) ? 1.0 : 0.0;
        }
        case 1: {
            const double mu = col.a0 + (col.a1 - col.a0) * mix;
            double v = std::round(rng.normal(mu, col.sd));
            return std::min(std::max(v, col.lo), col.hi);
        }
        default: { // zero-inflated count of bad days
            double p = col.a0 + (col.a1 - col.a0) * mix;
            if (!rng.bernoulli(p)) return 0.0;
            double v = std::round(std::abs(rng.normal(0.0, col.sd))) + 1.0;
            return std::min(std::max(v, col.lo), col.hi);
        }
    }
}

} // namespace detail_synth

inline void write_synthetic_health_csv(const std::string& path, const SynthSpec& spec) {
    if (spec.rows < 2) throw std::invalid_argument("synth: need at least two rows");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("synth: cannot open '" + path + "' for writing");

    const auto& cols = detail_synth::columns();
    out << "Diabetes_binary";
    for (const auto& c : cols) out << ',' << c.name;
    out << '\n';

    Rng rng = derive_rng(spec.seed, "synth-health");
    std::vector<std::uint8_t> labels(spec.rows, 0);
    for (std::size_t i = spec.rows / 2; i < spec.rows; ++i) labels[i] = 1;
    rng.shuffle(labels);

    char cell[32];
    for (std::size_t r = 0; r < spec.rows; ++r) {
        out << (labels[r] ? "1.0" : "0.0");
        // paired columns: zero marginal signal, label lives in the parity
        const int a = rng.bernoulli(0.5) ? 1 : 0;
        const int b = rng.bernoulli(spec.pair_strength) ? (a ^ labels[r])
                                                        : (rng.bernoulli(0.5) ? 1 : 0);
        for (const auto& c : cols) {
            double v;
            if (spec.pair_strength > 0.0 && std::string_view(c.name) == "Smoker")
                v = a;
            else if (spec.pair_strength > 0.0 && std::string_view(c.name) == "PhysActivity")
                v = b;
            else
                v = detail_synth::sample_cell(c, labels[r], spec.signal, rng);
            std::snprintf(cell, sizeof(cell), ",%.1f", v);
            out << cell;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("synth: write to '" + path + "' failed");
}

} // namespace fedshield::data
