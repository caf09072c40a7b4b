// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
//
// Batch front end: `params` solves the security thresholds, `run` executes
// one seeded simulation, `sweep` fans a parameter axis over seeds.
// Exit codes: 0 success, 1 usage/config error, 2 infeasible parameters,
// 3 I/O failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lightchain/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitIo = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("LIGHTCHAIN_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw lightchain::InvalidParameter("LIGHTCHAIN_SEED is not an integer");
        }
    }
    return 1;
}

std::string timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

struct RunFlags {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> peers;
    std::optional<double> f;
    std::optional<double> q;
    std::optional<unsigned> alpha;
    std::optional<unsigned> t;
    std::optional<unsigned> min_tx;
    std::optional<double> hours;
    std::optional<unsigned> slot_minutes;
};

void add_run_flags(CLI::App* cmd, RunFlags& fl) {
    cmd->add_option("--config", fl.config_path, "key=value config file");
    cmd->add_option("--seed", fl.seed, "RNG seed (default: LIGHTCHAIN_SEED or 1)");
    cmd->add_option("--peers", fl.peers, "peer count");
    cmd->add_option("--f", fl.f, "adversarial fraction");
    cmd->add_option("--q", fl.q, "steady-state offline probability");
    cmd->add_option("--alpha", fl.alpha, "validators threshold");
    cmd->add_option("--t", fl.t, "signatures threshold");
    cmd->add_option("--min-tx", fl.min_tx, "minimum transactions per block");
    cmd->add_option("--hours", fl.hours, "simulated hours");
    cmd->add_option("--slot-minutes", fl.slot_minutes, "slot length in minutes");
    cmd->add_option("--out", fl.out_dir, "output directory");
}

lightchain::SimConfig build_config(const RunFlags& fl) {
    lightchain::SimConfig cfg;
    if (!fl.config_path.empty())
        lightchain::apply_config(cfg, lightchain::parse_kv_file(fl.config_path));
    if (fl.peers) cfg.n = *fl.peers;
    if (fl.f) cfg.f = *fl.f;
    if (fl.q) {
        if (*fl.q < 0.0 || *fl.q >= 1.0)
            throw lightchain::InvalidParameter("q must be in [0, 1)");
        cfg.mean_offline_hours = cfg.mean_online_hours * *fl.q / (1.0 - *fl.q);
    }
    if (fl.alpha) cfg.pov.alpha = *fl.alpha;
    if (fl.t) cfg.pov.t = *fl.t;
    if (fl.min_tx) cfg.pov.min_tx = *fl.min_tx;
    if (fl.hours) cfg.sim_hours = *fl.hours;
    if (fl.slot_minutes) cfg.slot_minutes = *fl.slot_minutes;
    cfg.seed = fl.seed ? *fl.seed : default_seed();
    cfg.validate();
    return cfg;
}

int cmd_params(double f, double q, double epsilon, unsigned alpha_cap) {
    auto report = lightchain::solve(f, q, epsilon, alpha_cap);
    std::cout << report.to_text();
    return report.feasible ? kExitOk : kExitInfeasible;
}

int cmd_run(const RunFlags& fl) {
    auto cfg = build_config(fl);
    std::filesystem::path out(fl.out_dir);
    std::filesystem::create_directories(out);
    lightchain::RunManifest manifest;
    manifest.config = cfg;
    manifest.seeds = {cfg.seed};
    manifest.outputs = {"summary.txt", "series.csv"};
    manifest.started_at = timestamp();
    write_file(out / "manifest.txt", manifest.to_text());
    auto metrics = lightchain::run(cfg);
    write_file(out / "summary.txt", lightchain::summary_text(metrics));
    write_file(out / "series.csv", lightchain::series_csv(metrics));
    std::cout << lightchain::summary_text(metrics);
    return kExitOk;
}

int cmd_sweep(const RunFlags& fl, const std::string& axis, const std::string& values_csv,
              const std::string& seeds_csv) {
    auto cfg = build_config(fl);
    std::vector<double> values;
    std::vector<std::string> value_tokens;
    {
        std::istringstream ss(values_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) {
                values.push_back(std::stod(item));
                value_tokens.push_back(item);
            }
    }
    std::vector<std::uint64_t> seeds;
    {
        std::istringstream ss(seeds_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) seeds.push_back(std::stoull(item));
    }
    if (seeds.empty()) seeds.push_back(cfg.seed);
    // Axis validation up front so a typo fails before any run.
    if (!values.empty()) (void)lightchain::with_axis(cfg, axis, values.front());

    std::filesystem::path out(fl.out_dir);
    std::filesystem::create_directories(out);
    lightchain::RunManifest manifest;
    manifest.config = cfg;
    manifest.seeds = seeds;
    manifest.outputs = {"aggregate.csv"};
    for (const auto& tok : value_tokens)
        for (auto seed : seeds)
            manifest.outputs.push_back("series_" + axis + "_" + tok + "_seed" +
                                       std::to_string(seed) + ".csv");
    manifest.started_at = timestamp();
    write_file(out / "manifest.txt", manifest.to_text());

    std::ostringstream agg;
    agg << lightchain::kAggregateHeader << '\n';
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        auto cell_cfg = lightchain::with_axis(cfg, axis, values[vi]);
        for (auto seed : seeds) {
            cell_cfg.seed = seed;
            lightchain::SweepCell cell{values[vi], seed, lightchain::run(cell_cfg)};
            agg << lightchain::aggregate_row(cell) << '\n';
            write_file(out / ("series_" + axis + "_" + value_tokens[vi] + "_seed" +
                              std::to_string(seed) + ".csv"),
                       lightchain::series_csv(cell.metrics));
        }
    }
    write_file(out / "aggregate.csv", agg.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LightChain DHT blockchain simulator"};
    app.require_subcommand(1);

    double p_f = 0.0, p_q = 0.0, p_eps = std::pow(2.0, -20);
    unsigned p_cap = 10000;
    auto* params = app.add_subcommand("params", "solve security thresholds");
    params->add_option("--f", p_f, "adversarial fraction");
    params->add_option("--q", p_q, "offline probability");
    params->add_option("--epsilon", p_eps, "target failure probability");
    params->add_option("--alpha-cap", p_cap, "alpha search bound");

    RunFlags run_fl;
    auto* run_cmd = app.add_subcommand("run", "execute one seeded simulation");
    add_run_flags(run_cmd, run_fl);

    RunFlags sweep_fl;
    std::string axis, values_csv, seeds_csv;
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep a parameter axis over seeds");
    add_run_flags(sweep_cmd, sweep_fl);
    sweep_cmd->add_option("--axis", axis, "parameter to sweep")->required();
    sweep_cmd->add_option("--values", values_csv, "comma-separated axis values")->required();
    sweep_cmd->add_option("--seeds", seeds_csv, "comma-separated seeds");

    try {
        app.parse(argc, argv);
        if (params->parsed()) return cmd_params(p_f, p_q, p_eps, p_cap);
        if (run_cmd->parsed()) return cmd_run(run_fl);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_fl, axis, values_csv, seeds_csv);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const lightchain::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
