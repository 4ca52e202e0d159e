#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedshield/nn.hpp"

namespace fedshield::agg {

using nn::ParamVector;

struct UpdateSet {
    struct Entry {
        std::string client_id;
        ParamVector params;
    };
    std::vector<Entry> entries;

    std::size_t size() const { return entries.size(); }

    std::size_t dim() const {
        if (entries.empty()) throw std::invalid_argument("aggregation: empty update set");
        const std::size_t d = entries.front().params.size();
        for (const auto& e : entries)
            if (e.params.size() != d)
                throw std::invalid_argument("aggregation: update length mismatch for client '" +
                                            e.client_id + "'");
        return d;
    }
};

struct TrimConfig {
    double beta = 0.25; // fraction trimmed per side, in [0, 0.5)
};

struct KrumConfig {
    int assumed_byzantine = 0; // f; requires n - f - 2 >= 1
};

// Per-client suspicion evidence from one aggregation.
struct FlagReport {
    struct PerClient {
        std::string id;
        double trimmed_fraction = 0.0; // trimmed-mean evidence
        double krum_score = 0.0;       // krum evidence
        bool selected = false;         // krum winner
    };
    std::vector<PerClient> clients;
};

inline ParamVector aggregate_mean(const UpdateSet& updates) {
    const std::size_t d = updates.dim();
    ParamVector out(d, 0.0);
    for (const auto& e : updates.entries)
        for (std::size_t k = 0; k < d; ++k) out[k] += e.params[k];
    for (double& v : out) v /= static_cast<double>(updates.size());
    return out;
}

// Coordinate-wise trimmed mean: per coordinate, drop the floor(beta*m)
// largest and smallest values and average the rest in ascending order. A
// client counts as trimmed at a coordinate only when its value lies strictly
// outside the surviving band, so exact ties are never flagged.
inline std::pair<ParamVector, FlagReport> trimmed_mean(const UpdateSet& updates,
                                                       const TrimConfig& cfg) {
    if (cfg.beta < 0.0 || cfg.beta >= 0.5)
        throw std::invalid_argument("trimmed_mean: beta must lie in [0, 0.5)");
    const std::size_t d = updates.dim();
    const std::size_t m = updates.size();
    const std::size_t k_trim = static_cast<std::size_t>(cfg.beta * static_cast<double>(m));
    if (m <= 2 * k_trim)
        throw std::invalid_argument("trimmed_mean: beta leaves no surviving clients");

    ParamVector out(d, 0.0);
    std::vector<std::size_t> trimmed_counts(m, 0);
    std::vector<double> column(m);

    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < m; ++i) column[i] = updates.entries[i].params[k];
        std::sort(column.begin(), column.end());
        const double lo = column[k_trim];
        const double hi = column[m - 1 - k_trim];
        double sum = 0.0;
        for (std::size_t i = k_trim; i < m - k_trim; ++i) sum += column[i];
        out[k] = sum / static_cast<double>(m - 2 * k_trim);
        for (std::size_t i = 0; i < m; ++i) {
            const double v = updates.entries[i].params[k];
            if (v < lo || v > hi) ++trimmed_counts[i];
        }
    }

    FlagReport report;
    report.clients.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        report.clients[i].id = updates.entries[i].client_id;
        report.clients[i].trimmed_fraction =
            static_cast<double>(trimmed_counts[i]) / static_cast<double>(d);
    }
    return {std::move(out), std::move(report)};
}

// s(i) = sum of squared distances from V_i to its n - f - 2 nearest other
// vectors.
inline std::vector<double> krum_scores(const UpdateSet& updates, const KrumConfig& cfg) {
    const std::size_t d = updates.dim();
    const std::size_t n = updates.size();
    const long neighbors =
        static_cast<long>(n) - static_cast<long>(cfg.assumed_byzantine) - 2;
    if (neighbors < 1)
        throw std::invalid_argument("krum: need n - f - 2 >= 1 (n=" + std::to_string(n) +
                                    ", f=" + std::to_string(cfg.assumed_byzantine) + ")");

    std::vector<double> dist2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double acc = 0.0;
            const auto& a = updates.entries[i].params;
            const auto& b = updates.entries[j].params;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = a[k] - b[k];
                acc += diff * diff;
            }
            dist2[i * n + j] = acc;
            dist2[j * n + i] = acc;
        }
    }

    std::vector<double> scores(n, 0.0);
    std::vector<double> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) row.push_back(dist2[i * n + j]);
        std::sort(row.begin(), row.end());
        double acc = 0.0;
        for (long j = 0; j < neighbors; ++j) acc += row[static_cast<std::size_t>(j)];
        scores[i] = acc;
    }
    return scores;
}

// Lowest score wins; ties break to the lowest list index. The winning update
// is returned verbatim.
inline std::tuple<std::string, ParamVector, FlagReport> krum_select(const UpdateSet& updates,
                                                                    const KrumConfig& cfg) {
    auto scores = krum_scores(updates, cfg);
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] < scores[best]) best = i;

    FlagReport report;
    report.clients.resize(updates.size());
    for (std::size_t i = 0; i < updates.size(); ++i) {
        report.clients[i].id = updates.entries[i].client_id;
        report.clients[i].krum_score = scores[i];
        report.clients[i].selected = i == best;
    }
    return {updates.entries[best].client_id, updates.entries[best].params, std::move(report)};
}

} // namespace fedshield::agg
