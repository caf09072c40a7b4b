// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <fstream>
#include <iomanip>

#include "lightchain/sim.hpp"

namespace lightchain {

inline constexpr const char* kToolVersion = "lightchain 0.1.0";

/// key=value lines; '#' starts a comment; blank lines ignored.
inline std::map<std::string, std::string> parse_kv_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("config line " + std::to_string(lineno) +
                                   ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [&](std::string& s) {
            s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
            s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
        };
        trim(key);
        trim(val);
        out[key] = val;
    }
    return out;
}

inline std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kv_text(buf.str());
}

inline void apply_config(SimConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, val] : kv) {
        try {
            if (key == "peers" || key == "n")
                cfg.n = std::stoul(val);
            else if (key == "f")
                cfg.f = std::stod(val);
            else if (key == "q") {
                double q = std::stod(val);
                if (q < 0.0 || q >= 1.0) throw InvalidParameter("q out of [0, 1)");
                cfg.mean_offline_hours = cfg.mean_online_hours * q / (1.0 - q);
            } else if (key == "alpha")
                cfg.pov.alpha = static_cast<unsigned>(std::stoul(val));
            else if (key == "t")
                cfg.pov.t = static_cast<unsigned>(std::stoul(val));
            else if (key == "min_tx")
                cfg.pov.min_tx = static_cast<unsigned>(std::stoul(val));
            else if (key == "validation_fee")
                cfg.pov.validation_fee = std::stoull(val);
            else if (key == "routing_fee")
                cfg.pov.routing_fee = std::stoull(val);
            else if (key == "block_reward")
                cfg.pov.block_reward = std::stoull(val);
            else if (key == "misbehavior_penalty")
                cfg.pov.misbehavior_penalty = std::stoull(val);
            else if (key == "block_interval")
                cfg.pov.block_interval = static_cast<unsigned>(std::stoul(val));
            else if (key == "mean_online_hours")
                cfg.mean_online_hours = std::stod(val);
            else if (key == "mean_offline_hours")
                cfg.mean_offline_hours = std::stod(val);
            else if (key == "tx_rate")
                cfg.tx_rate_per_peer_per_hour = std::stod(val);
            else if (key == "hours")
                cfg.sim_hours = std::stod(val);
            else if (key == "slot_minutes")
                cfg.slot_minutes = static_cast<unsigned>(std::stoul(val));
            else if (key == "seed")
                cfg.seed = std::stoull(val);
            else if (key == "width_s")
                cfg.width_s = static_cast<unsigned>(std::stoul(val));
            else if (key == "endowment")
                cfg.endowment = std::stoll(val);
            else if (key == "bootstrap_interval_slots")
                cfg.bootstrap_interval_slots = static_cast<unsigned>(std::stoul(val));
            else if (key == "replica_burn_in_slots")
                cfg.replica_burn_in_slots = static_cast<unsigned>(std::stoul(val));
            else if (key == "id_spacing") {
                if (val == "even")
                    cfg.id_spacing = IdSpacing::even;
                else if (val == "hashed")
                    cfg.id_spacing = IdSpacing::hashed;
                else
                    throw InvalidParameter("id_spacing must be even or hashed");
            } else if (key == "adversary_strategies") {
                cfg.adversary_strategies.clear();
                std::istringstream ss(val);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty())
                        cfg.adversary_strategies.insert(adversary_strategy_from_string(item));
            } else {
                throw InvalidParameter("unknown config key: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw InvalidParameter("bad value for config key " + key + ": " + val);
        } catch (const std::out_of_range&) {
            throw InvalidParameter("value out of range for config key " + key + ": " + val);
        }
    }
}

inline std::string config_to_text(const SimConfig& cfg) {
    std::ostringstream os;
    os << "peers=" << cfg.n << '\n'
       << "f=" << cfg.f << '\n'
       << "alpha=" << cfg.pov.alpha << '\n'
       << "t=" << cfg.pov.t << '\n'
       << "min_tx=" << cfg.pov.min_tx << '\n'
       << "validation_fee=" << cfg.pov.validation_fee << '\n'
       << "routing_fee=" << cfg.pov.routing_fee << '\n'
       << "block_reward=" << cfg.pov.block_reward << '\n'
       << "misbehavior_penalty=" << cfg.pov.misbehavior_penalty << '\n'
       << "block_interval=" << cfg.pov.block_interval << '\n'
       << "mean_online_hours=" << cfg.mean_online_hours << '\n'
       << "mean_offline_hours=" << cfg.mean_offline_hours << '\n'
       << "tx_rate=" << cfg.tx_rate_per_peer_per_hour << '\n'
       << "hours=" << cfg.sim_hours << '\n'
       << "slot_minutes=" << cfg.slot_minutes << '\n'
       << "seed=" << cfg.seed << '\n'
       << "width_s=" << cfg.width_s << '\n'
       << "endowment=" << cfg.endowment << '\n'
       << "bootstrap_interval_slots=" << cfg.bootstrap_interval_slots << '\n'
       << "replica_burn_in_slots=" << cfg.replica_burn_in_slots << '\n'
       << "id_spacing=" << (cfg.id_spacing == IdSpacing::even ? "even" : "hashed") << '\n';
    os << "adversary_strategies=";
    bool first = true;
    for (auto s : cfg.adversary_strategies) {
        os << (first ? "" : ",") << to_string(s);
        first = false;
    }
    os << '\n';
    return os.str();
}

/// Reproduction record: written before any run output.
struct RunManifest {
    SimConfig config;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> outputs;
    std::string tool_version = kToolVersion;
    std::string started_at;  // informational only; never part of metrics files

    std::string to_text() const {
        std::ostringstream os;
        os << "tool_version=" << tool_version << '\n';
        os << "started_at=" << started_at << '\n';
        os << "seeds=";
        for (std::size_t i = 0; i < seeds.size(); ++i) os << (i ? "," : "") << seeds[i];
        os << '\n';
        for (const auto& o : outputs) os << "output=" << o << '\n';
        os << config_to_text(config);
        return os.str();
    }
};

inline const char* kSeriesHeader =
    "slot,online_peers,chain_height,mean_replicas,integrity_violations,"
    "service_denials,messages";

inline std::string series_csv(const Metrics& m) {
    std::ostringstream os;
    os << kSeriesHeader << '\n';
    os << std::fixed << std::setprecision(6);
    for (const auto& s : m.series)
        os << s.slot << ',' << s.online_peers << ',' << s.chain_height << ','
           << s.mean_replicas << ',' << s.integrity_violations << ',' << s.service_denials
           << ',' << s.messages << '\n';
    return os.str();
}

inline const char* kAggregateHeader =
    "axis_value,seed,integrity_violations,service_denial_rate,mean_replicas,"
    "mean_hops,involvement_stddev";

inline std::string aggregate_row(const SweepCell& cell) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6);
    os << cell.axis_value << ',' << cell.seed << ',' << cell.metrics.integrity_violations
       << ',' << cell.metrics.service_denial_rate() << ',' << cell.metrics.mean_replicas
       << ',' << cell.metrics.mean_hops() << ',' << cell.metrics.involvement_stddev();
    return os.str();
}

inline std::string summary_text(const Metrics& m) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6);
    os << "chain_height=" << m.chain_height << '\n'
       << "integrity_violations=" << m.integrity_violations << '\n'
       << "service_attempts=" << m.service_attempts << '\n'
       << "service_denials=" << m.service_denials << '\n'
       << "service_denial_rate=" << m.service_denial_rate() << '\n'
       << "mean_replicas=" << m.mean_replicas << '\n'
       << "mean_hops=" << m.mean_hops() << '\n'
       << "messages=" << m.messages << '\n'
       << "bootstrap_checks=" << m.bootstrap_checks << '\n'
       << "bootstrap_mismatches=" << m.bootstrap_mismatches << '\n'
       << "blacklisted=" << m.blacklisted << '\n'
       << "total_balance=" << m.total_balance << '\n'
       << "involvement_mean=" << m.involvement_mean() << '\n'
       << "involvement_stddev=" << m.involvement_stddev() << '\n';
    return os.str();
}

}  // namespace lightchain
