#pragma once

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fedshield::metrics {

struct RoundMetrics {
    int round = 0;
    double accuracy = 0.0;
    int active = 0;
    std::vector<std::string> flagged;
    std::vector<std::string> disconnected;
    int reconnect_attempts = 0;
    int auth_denials = 0;
    std::string selected_client; // krum only
};

struct AuthEvent {
    int round = 0;
    std::string id;
    bool reconnect = false;
    bool admitted = false;
    std::string reason;    // banned | bad_proof | malformed | timeout, empty on success
    std::string rmc_phase; // empty for honest clients
};

struct BanEvent {
    int round = 0;
    std::string id;
};

struct Summary {
    double avg_accuracy = 0.0;
    double final_accuracy = 0.0;
    int total_disconnections = 0;
    int total_auth_denials = 0;
    int false_positive_disconnections = 0;
};

struct MetricsLog {
    nlohmann::json config_echo;
    std::vector<std::string> malicious_ids;
    std::vector<RoundMetrics> rounds;
    std::vector<AuthEvent> auth_events;
    std::vector<BanEvent> bans;
    // per logged round: the client ids whose updates entered the aggregate
    std::vector<std::vector<std::string>> aggregated_ids;

    Summary summary() const {
        Summary s;
        if (rounds.empty()) return s;
        std::set<std::string> malicious(malicious_ids.begin(), malicious_ids.end());
        for (const auto& r : rounds) {
            s.avg_accuracy += r.accuracy;
            s.total_disconnections += static_cast<int>(r.disconnected.size());
            s.total_auth_denials += r.auth_denials;
            for (const auto& id : r.disconnected)
                if (!malicious.count(id)) ++s.false_positive_disconnections;
        }
        s.avg_accuracy /= static_cast<double>(rounds.size());
        s.final_accuracy = rounds.back().accuracy;
        return s;
    }
};

namespace detail {

// shortest round-trip decimal form
inline std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out.push_back(';');
        out += ids[i];
    }
    return out;
}

} // namespace detail

// One row per logged round plus a trailing '#' comment block with the
// summary and the config echo. Emission is a pure function of the log.
inline std::string render_metrics_csv(const MetricsLog& log) {
    std::ostringstream out;
    out << "round,accuracy,active,flagged,disconnected,reconnect_attempts,auth_denials,"
           "selected_client\n";
    for (const auto& r : log.rounds) {
        out << r.round << ',' << detail::format_double(r.accuracy) << ',' << r.active << ','
            << detail::join_ids(r.flagged) << ',' << detail::join_ids(r.disconnected) << ','
            << r.reconnect_attempts << ',' << r.auth_denials << ',' << r.selected_client << '\n';
    }
    const Summary s = log.summary();
    out << "# avg_accuracy=" << detail::format_double(s.avg_accuracy) << '\n';
    out << "# final_accuracy=" << detail::format_double(s.final_accuracy) << '\n';
    out << "# total_disconnections=" << s.total_disconnections << '\n';
    out << "# total_auth_denials=" << s.total_auth_denials << '\n';
    out << "# false_positive_disconnections=" << s.false_positive_disconnections << '\n';
    out << "# config=" << log.config_echo.dump() << '\n';
    return out.str();
}

inline void emit_metrics(const MetricsLog& log, const std::string& path) {
    if (log.rounds.empty()) throw std::invalid_argument("metrics: refusing to emit an empty log");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("metrics: cannot write '" + path + "'");
    out << render_metrics_csv(log);
    if (!out) throw std::runtime_error("metrics: write to '" + path + "' failed");
}

// Round/accuracy series recovered from an emitted CSV, for plotting.
struct CsvSeries {
    std::string label;
    std::vector<double> accuracy;
};

inline CsvSeries read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("metrics: cannot open '" + path + "'");
    CsvSeries series;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string key = "# config=";
            if (line.rfind(key, 0) == 0) {
                auto j = nlohmann::json::parse(line.substr(key.size()), nullptr, false);
                if (!j.is_discarded() && j.contains("rule")) {
                    series.label = j["rule"].get<std::string>();
                    if (j.contains("ibi_enabled"))
                        series.label += j["ibi_enabled"].get<bool>() ? "+ibi" : "+noibi";
                }
            }
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::runtime_error("metrics: malformed row in '" + path + "'");
        series.accuracy.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    if (series.accuracy.empty())
        throw std::runtime_error("metrics: no data rows in '" + path + "'");
    return series;
}

} // namespace fedshield::metrics
