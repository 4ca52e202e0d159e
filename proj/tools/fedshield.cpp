// fedshield: federated-learning security simulator.
//
//   fedshield run --config cfg.json [--rounds N] [--rule R] [--ibi on|off]
//                 [--seed N] [--out-dir DIR] [--transport in_memory|tcp]
//   fedshield plot a.csv b.csv ... --out fig.svg
//   fedshield gen-data [--out PATH] [--rows N] [--seed N]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fedshield/config.hpp"
#include "fedshield/metrics.hpp"
#include "fedshield/plot.hpp"
#include "fedshield/simulation.hpp"
#include "fedshield/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fedshield;

struct RunFlags {
    std::string config_path;
    std::optional<int> rounds;
    std::optional<std::string> rule;
    std::optional<std::string> ibi;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> transport;
    std::string out_dir = "out";
};

config::ExperimentConfig resolve_config(const RunFlags& flags) {
    auto cfg = config::parse_config_file(flags.config_path);
    if (flags.rounds) cfg.rounds = *flags.rounds;
    if (flags.rule) {
        auto r = config::rule_from(*flags.rule);
        if (!r) throw config::ConfigError("--rule must be krum|trimmed_mean|mean");
        cfg.rule = *r;
    }
    if (flags.ibi) {
        if (*flags.ibi == "on") cfg.ibi_enabled = true;
        else if (*flags.ibi == "off") cfg.ibi_enabled = false;
        else throw config::ConfigError("--ibi must be on|off");
    }
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.transport) {
        auto t = config::transport_from(*flags.transport);
        if (!t) throw config::ConfigError("--transport must be in_memory|tcp");
        cfg.transport = *t;
    }
    cfg.validate();
    return cfg;
}

std::string metrics_filename(const config::ExperimentConfig& cfg) {
    return "metrics_" + config::to_string(cfg.rule) + (cfg.ibi_enabled ? "_ibi" : "_noibi") +
           ".csv";
}

int cmd_run(const RunFlags& flags) {
    const auto cfg = resolve_config(flags);
    std::cout << "config: " << config::to_json(cfg).dump() << "\n";

    fs::create_directories(flags.out_dir);
    const fs::path csv_path = fs::path(flags.out_dir) / metrics_filename(cfg);

    orch::Logger logger = [](const std::string& line) { std::cout << line << "\n"; };
    metrics::MetricsLog log;
    try {
        log = orch::run_experiment(cfg, logger);
    } catch (const orch::ExperimentAborted& e) {
        std::cerr << "run aborted: " << e.what() << "\n";
        if (!e.partial_log.rounds.empty()) {
            metrics::emit_metrics(e.partial_log, csv_path.string());
            std::cerr << "partial metrics written to " << csv_path << "\n";
        }
        return 2;
    }

    metrics::emit_metrics(log, csv_path.string());
    const auto summary = log.summary();
    std::cout << "metrics written to " << csv_path << "\n";
    std::cout << "avg_accuracy=" << summary.avg_accuracy
              << " final_accuracy=" << summary.final_accuracy
              << " disconnections=" << summary.total_disconnections
              << " auth_denials=" << summary.total_auth_denials << "\n";
    return 0;
}

int cmd_plot(const std::vector<std::string>& csvs, const std::string& out) {
    std::vector<metrics::CsvSeries> series;
    for (const auto& path : csvs) {
        auto s = metrics::read_metrics_csv(path);
        if (s.label.empty()) s.label = fs::path(path).stem().string();
        series.push_back(std::move(s));
    }
    plot::emit_plot(series, out);
    std::cout << "plot written to " << out << "\n";
    return 0;
}

int cmd_gen_data(const std::string& out, std::size_t rows, std::uint64_t seed) {
    if (auto dir = fs::path(out).parent_path(); !dir.empty()) fs::create_directories(dir);
    data::SynthSpec spec;
    spec.rows = rows;
    spec.seed = seed;
    data::write_synthetic_health_csv(out, spec);
    std::cout << "wrote " << rows << " rows to " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"federated-learning security simulator"};
    app.require_subcommand(1);

    RunFlags flags;
    auto* run = app.add_subcommand("run", "run an experiment and emit metrics");
    run->add_option("--config", flags.config_path, "experiment config (JSON)")->required();
    run->add_option("--rounds", flags.rounds, "override training rounds");
    run->add_option("--rule", flags.rule, "override aggregation rule: krum|trimmed_mean|mean");
    run->add_option("--ibi", flags.ibi, "override identity authentication: on|off");
    run->add_option("--seed", flags.seed, "override master seed");
    run->add_option("--out-dir", flags.out_dir, "output directory (default: out)");
    run->add_option("--transport", flags.transport, "override transport: in_memory|tcp");

    std::vector<std::string> plot_inputs;
    std::string plot_out;
    auto* plot_cmd = app.add_subcommand("plot", "render accuracy curves from metrics CSVs");
    plot_cmd->add_option("csv", plot_inputs, "metrics CSV files")->required()->expected(-1);
    plot_cmd->add_option("--out", plot_out, "output SVG path")->required();

    std::string gen_out = "data/health_survey.csv";
    std::size_t gen_rows = 70692;
    std::uint64_t gen_seed = 7;
    auto* gen = app.add_subcommand("gen-data", "generate the synthetic survey table");
    gen->add_option("--out", gen_out, "output CSV path");
    gen->add_option("--rows", gen_rows, "row count");
    gen->add_option("--seed", gen_seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) return cmd_run(flags);
        if (plot_cmd->parsed()) return cmd_plot(plot_inputs, plot_out);
        if (gen->parsed()) return cmd_gen_data(gen_out, gen_rows, gen_seed);
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
