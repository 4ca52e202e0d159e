#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fedshield/metrics.hpp"
#include "fedshield/plot.hpp"

using namespace fedshield;
using namespace fedshield::metrics;

namespace {

MetricsLog sample_log(int rounds) {
    MetricsLog log;
    log.config_echo = {{"rule", "krum"}, {"ibi_enabled", true}};
    log.malicious_ids = {"client-18", "client-19"};
    for (int r = 0; r <= rounds; ++r) {
        RoundMetrics m;
        m.round = r;
        m.accuracy = 0.5 + 0.004 * r;
        m.active = 20;
        if (r == 3) {
            m.flagged = {"client-18", "client-19"};
            m.disconnected = {"client-18"};
        }
        if (r == 4) {
            m.reconnect_attempts = 1;
            m.auth_denials = 1;
        }
        m.selected_client = "client-01";
        log.rounds.push_back(m);
        log.aggregated_ids.push_back({});
    }
    return log;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// minimal well-formedness scan: tags balance and nest properly
bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    while ((i = text.find('<', i)) != std::string::npos) {
        const std::size_t end = text.find('>', i);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(i + 1, end - i - 1);
        i = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        const bool self_closing = tag.back() == '/';
        if (self_closing) tag.pop_back();
        std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
        if (name.empty()) return false;
        if (name[0] == '/') {
            if (stack.empty() || stack.back() != name.substr(1)) return false;
            stack.pop_back();
        } else if (!self_closing) {
            stack.push_back(name);
        }
    }
    return stack.empty();
}

} // namespace

TEST_CASE("csv shape: 51 rows for a 50-round log plus summary comments") {
    auto log = sample_log(50);
    auto text = render_metrics_csv(log);
    int rows = 0, comments = 0;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.rfind('#', 0) == 0) {
            ++comments;
        } else if (header) {
            header = false;
            CHECK(line ==
                  "round,accuracy,active,flagged,disconnected,reconnect_attempts,auth_denials,"
                  "selected_client");
        } else {
            ++rows;
        }
    }
    CHECK(rows == 51);
    CHECK(comments == 6);
    CHECK(text.find("# avg_accuracy=") != std::string::npos);
    CHECK(text.find("# final_accuracy=") != std::string::npos);
    CHECK(text.find("# config={") != std::string::npos);
    CHECK(text.find("client-18;client-19") != std::string::npos);
}

TEST_CASE("summary math") {
    auto log = sample_log(4);
    auto s = log.summary();
    double avg = 0;
    for (auto& r : log.rounds) avg += r.accuracy;
    avg /= 5.0;
    CHECK(s.avg_accuracy == Catch::Approx(avg));
    CHECK(s.final_accuracy == log.rounds.back().accuracy);
    CHECK(s.total_disconnections == 1);
    CHECK(s.total_auth_denials == 1);
    CHECK(s.false_positive_disconnections == 0);

    log.rounds[2].disconnected.push_back("client-02"); // honest casualty
    CHECK(log.summary().false_positive_disconnections == 1);
}

TEST_CASE("emission is deterministic and byte-stable") {
    auto log = sample_log(10);
    auto a = std::filesystem::temp_directory_path() / "fedshield_metrics_a.csv";
    auto b = std::filesystem::temp_directory_path() / "fedshield_metrics_b.csv";
    emit_metrics(log, a.string());
    emit_metrics(log, b.string());
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == render_metrics_csv(log));

    SECTION("accuracy cells round-trip at full precision") {
        auto series = read_metrics_csv(a.string());
        REQUIRE(series.accuracy.size() == log.rounds.size());
        for (std::size_t i = 0; i < series.accuracy.size(); ++i)
            CHECK(series.accuracy[i] == log.rounds[i].accuracy);
        CHECK(series.label == "krum+ibi");
    }
    std::filesystem::remove(a);
    std::filesystem::remove(b);

    SECTION("empty log refuses to emit") {
        MetricsLog empty;
        CHECK_THROWS_AS(emit_metrics(empty, "/tmp/never.csv"), std::invalid_argument);
    }
    SECTION("unwritable path") {
        CHECK_THROWS_AS(emit_metrics(log, "/nonexistent-dir/x.csv"), std::runtime_error);
    }
}

TEST_CASE("svg plot") {
    metrics::CsvSeries baseline{"krum+noibi", {0.5, 0.62, 0.55, 0.51}};
    metrics::CsvSeries shielded{"krum+ibi", {0.5, 0.65, 0.7, 0.74}};

    SECTION("two series, two polylines, distinct strokes") {
        auto svg = plot::render_accuracy_svg({baseline, shielded});
        CHECK(xml_well_formed(svg));
        CHECK(svg.find("krum+noibi") != std::string::npos);
        CHECK(svg.find("krum+ibi") != std::string::npos);
        std::size_t polylines = 0, at = 0;
        while ((at = svg.find("<polyline", at)) != std::string::npos) {
            ++polylines;
            at += 1;
        }
        CHECK(polylines == 2);
        CHECK(svg.find("#1f77b4") != std::string::npos);
        CHECK(svg.find("#d62728") != std::string::npos);
    }
    SECTION("single-point series degenerates to a marker") {
        metrics::CsvSeries one{"solo", {0.5}};
        auto svg = plot::render_accuracy_svg({one});
        CHECK(xml_well_formed(svg));
        CHECK(svg.find("<circle") != std::string::npos);
        CHECK(svg.find("<polyline") == std::string::npos);
    }
    SECTION("no series is an error") {
        CHECK_THROWS_AS(plot::render_accuracy_svg({}), std::invalid_argument);
    }
    SECTION("file emission") {
        auto p = std::filesystem::temp_directory_path() / "fedshield_plot.svg";
        plot::emit_plot({baseline}, p.string());
        CHECK(xml_well_formed(slurp(p)));
        std::filesystem::remove(p);
    }
}
