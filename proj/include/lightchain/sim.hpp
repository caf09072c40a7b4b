// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <random>

#include "lightchain/incentive.hpp"
#include "lightchain/secparams.hpp"

namespace lightchain {

enum class AdversaryStrategy : std::uint8_t {
    forge_block_commit,
    withhold_signatures,
    sign_invalid,
    serve_forged_view,
    keep_stale_pointers,
};

inline const char* to_string(AdversaryStrategy s) {
    switch (s) {
        case AdversaryStrategy::forge_block_commit: return "forge_block_commit";
        case AdversaryStrategy::withhold_signatures: return "withhold_signatures";
        case AdversaryStrategy::sign_invalid: return "sign_invalid";
        case AdversaryStrategy::serve_forged_view: return "serve_forged_view";
        case AdversaryStrategy::keep_stale_pointers: return "keep_stale_pointers";
    }
    return "?";
}

inline AdversaryStrategy adversary_strategy_from_string(const std::string& s) {
    for (auto v : {AdversaryStrategy::forge_block_commit, AdversaryStrategy::withhold_signatures,
                   AdversaryStrategy::sign_invalid, AdversaryStrategy::serve_forged_view,
                   AdversaryStrategy::keep_stale_pointers})
        if (s == to_string(v)) return v;
    throw InvalidParameter("unknown adversary strategy: " + s);
}

/// Steady-state offline fraction of the alternating on/off renewal process.
inline double derive_q(double mean_online, double mean_offline) {
    if (mean_online <= 0.0 || mean_offline < 0.0)
        throw InvalidParameter("derive_q: durations must be positive");
    return mean_offline / (mean_online + mean_offline);
}

// Peer identifier placement over the ring. Even spacing idealizes the
// uniform-placement assumption behind the fairness and complexity claims;
// hashed derives identifiers from key material as the protocol prescribes.
enum class IdSpacing : std::uint8_t { even, hashed };

struct SimConfig {
    std::size_t n = 512;
    double f = 0.0;
    PovParams pov;
    double mean_online_hours = 10.6;
    double mean_offline_hours = 2.8;
    double tx_rate_per_peer_per_hour = 1.0;
    double sim_hours = 48.0;
    unsigned slot_minutes = 10;
    std::uint64_t seed = 1;
    unsigned width_s = 64;
    std::set<AdversaryStrategy> adversary_strategies;  // defaulted at run() when f > 0
    IdSpacing id_spacing = IdSpacing::even;
    std::int64_t endowment = 1'000'000;
    unsigned bootstrap_interval_slots = 24;  // 0 disables the periodic check
    // Replica holders are online at commit by construction; a block's
    // replicas enter the availability average only once its holders have
    // decorrelated from that commit-time conditioning.
    unsigned replica_burn_in_slots = 24;

    double q() const { return derive_q(mean_online_hours, mean_offline_hours); }
    double slot_hours() const { return slot_minutes / 60.0; }
    std::size_t slot_count() const {
        return static_cast<std::size_t>(sim_hours / slot_hours() + 1e-9);
    }

    void validate() const {
        if (n < 2) throw InvalidParameter("n must be at least 2");
        if (f < 0.0 || f >= 1.0) throw InvalidParameter("f must be in [0, 1)");
        if (slot_minutes < 1) throw InvalidParameter("slot_minutes must be positive");
        if (sim_hours < 0.0) throw InvalidParameter("sim_hours must be nonnegative");
        if (tx_rate_per_peer_per_hour < 0.0) throw InvalidParameter("tx rate must be nonnegative");
        if (mean_online_hours <= 0.0 || mean_offline_hours < 0.0)
            throw InvalidParameter("churn means must be positive");
        if (width_s == 0 || width_s > Identifier::kMaxBits)
            throw InvalidParameter("width_s must be in [1, 256]");
        if (id_spacing == IdSpacing::even && width_s > 64)
            throw InvalidParameter("even id spacing supports widths up to 64 bits");
        double hops = 2.0 * std::log2(static_cast<double>(n)) * pov.alpha;
        pov.validate(hops);
    }
};

struct SlotSample {
    std::size_t slot = 0;
    std::size_t online_peers = 0;
    std::size_t chain_height = 0;
    double mean_replicas = 0.0;
    std::uint64_t integrity_violations = 0;  // cumulative
    std::uint64_t service_denials = 0;       // cumulative
    std::uint64_t messages = 0;              // cumulative
};

struct Metrics {
    std::uint64_t integrity_violations = 0;
    std::uint64_t service_attempts = 0;
    std::uint64_t service_denials = 0;
    std::vector<SlotSample> series;
    std::map<std::size_t, std::uint64_t> hop_histogram;
    std::map<Identifier, std::uint64_t> involvement;  // per-peer validator designations
    std::uint64_t messages = 0;
    std::size_t chain_height = 0;
    std::uint64_t bootstrap_checks = 0;
    std::uint64_t bootstrap_mismatches = 0;
    std::uint64_t blacklisted = 0;
    std::int64_t total_balance = 0;
    bool view_matches_replay = true;

    double mean_replicas = 0.0;  // grand mean over slots with at least one block

    double service_denial_rate() const {
        return service_attempts == 0
                   ? 0.0
                   : static_cast<double>(service_denials) / static_cast<double>(service_attempts);
    }

    double mean_hops() const {
        std::uint64_t total = 0, count = 0;
        for (const auto& [hops, c] : hop_histogram) {
            total += hops * c;
            count += c;
        }
        return count == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(count);
    }

    double involvement_mean() const {
        if (involvement.empty()) return 0.0;
        double sum = 0.0;
        for (const auto& [id, c] : involvement) sum += static_cast<double>(c);
        return sum / static_cast<double>(involvement.size());
    }

    double involvement_stddev() const {
        if (involvement.empty()) return 0.0;
        double mean = involvement_mean(), acc = 0.0;
        for (const auto& [id, c] : involvement) {
            double d = static_cast<double>(c) - mean;
            acc += d * d;
        }
        return std::sqrt(acc / static_cast<double>(involvement.size()));
    }
};

/// One LightChain system under seeded discrete-event simulation: exponential
/// crash-recover churn sampled at slot boundaries, per-peer transaction
/// workload through full PoV, block formation, replication and pointers,
/// adversary strategies, audits, and metric sampling.
class Simulation {
public:
    explicit Simulation(SimConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
        if (cfg_.f > 0.0 && cfg_.adversary_strategies.empty())
            cfg_.adversary_strategies = {AdversaryStrategy::forge_block_commit,
                                         AdversaryStrategy::sign_invalid};
    }

    Metrics run() {
        setup();
        std::size_t slots = cfg_.slot_count();
        for (std::size_t slot = 0; slot < slots; ++slot) {
            current_slot_ = slot;
            double slot_end = (slot + 1) * cfg_.slot_hours();
            churn_to(slot_end);
            workload();
            if (enabled(AdversaryStrategy::forge_block_commit)) forge_attempt();
            form_block();
            advance_finality();
            if (cfg_.bootstrap_interval_slots &&
                (slot + 1) % cfg_.bootstrap_interval_slots == 0)
                bootstrap_check();
            sample(slot);
        }
        finish_metrics();
        return metrics_;
    }

private:
    struct Peer {
        Identifier id;
        Identifier name;  // membership vector source; equals id in hashed mode
        KeyPair key;
        bool corrupted = false;
        bool online = true;
        double next_flip = 0.0;  // absolute hours
    };

    bool enabled(AdversaryStrategy s) const { return cfg_.adversary_strategies.count(s) > 0; }

    double exp_sample(double mean) {
        std::exponential_distribution<double> d(1.0 / mean);
        return d(rng_);
    }

    Identifier even_id(std::size_t i) const {
        unsigned __int128 space = static_cast<unsigned __int128>(1) << cfg_.width_s;
        unsigned __int128 step = space / cfg_.n;
        unsigned __int128 v = step * i + step / 2;
        return Identifier::from_u64(cfg_.width_s, static_cast<std::uint64_t>(v));
    }

    void setup() {
        rng_.seed(cfg_.seed);
        keys_ = KeyDirectory();
        overlay_ = std::make_unique<Overlay>(cfg_.width_s, &keys_);
        store_ = std::make_unique<LedgerStore>(cfg_.width_s);

        peers_.clear();
        peers_.reserve(cfg_.n);
        std::vector<Identifier> ids;
        for (std::size_t i = 0; i < cfg_.n; ++i) {
            Encoder secret;
            secret.field_u64(cfg_.seed).field_u64(i);
            Peer p;
            p.key = make_hmac_keypair(secret.bytes());
            if (cfg_.id_spacing == IdSpacing::even) {
                // Evenly spaced ring positions need an order-independent
                // membership vector, or every skip-list level collapses into
                // the base ring; a hash of the position supplies random bits.
                p.id = even_id(i);
                Encoder enc;
                enc.field(p.id);
                p.name = enc.hash(cfg_.width_s);
            } else {
                p.id = derive_peer_identifiers(p.key, cfg_.width_s).first;
                p.name = p.id;
            }
            keys_.add(p.id, p.key);
            ids.push_back(p.id);
            peers_.push_back(std::move(p));
        }
        for (std::size_t i = 0; i < cfg_.n; ++i) peer_index_[peers_[i].id] = i;

        // Corruption: floor(f*n) peers by seeded draw; corrupted never churn.
        std::vector<std::size_t> order(cfg_.n);
        for (std::size_t i = 0; i < cfg_.n; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng_);
        std::size_t m = static_cast<std::size_t>(cfg_.f * static_cast<double>(cfg_.n));
        for (std::size_t i = 0; i < m; ++i) {
            peers_[order[i]].corrupted = true;
            corrupted_.push_back(order[i]);
        }

        // Stationary churn start for honest peers.
        double q = cfg_.q();
        std::bernoulli_distribution off(q);
        for (auto& p : peers_) {
            if (p.corrupted) {
                p.online = true;
                p.next_flip = std::numeric_limits<double>::infinity();
                continue;
            }
            p.online = !off(rng_);
            p.next_flip = exp_sample(p.online ? cfg_.mean_online_hours
                                              : cfg_.mean_offline_hours);
        }

        overlay_->set_phase("join");
        for (const auto& p : peers_)
            overlay_->join({p.id, p.name, NodeKind::peer, p.id, p.online});
        overlay_->set_phase("run");

        view_ = ViewTable(cfg_.width_s, ids, cfg_.endowment, store_->genesis());
        blacklist_ = Blacklist();
        registry_ = PointerRegistry();
        block_replicas_.clear();
        mempool_.clear();
        artifact_index_.clear();
        reported_.clear();
        processed_final_ = 0;
        metrics_ = Metrics();
        for (const auto& p : peers_) metrics_.involvement[p.id] = 0;

        // A fixed forged view the corrupted coalition serves to bootstrappers.
        Encoder forged;
        forged.field_u64(cfg_.seed).field_u64(0xf0f0f0f0ull);
        forged_tail_ = forged.hash(cfg_.width_s);
        forged.field_u64(1);
        forged_digest_ = forged.hash(cfg_.width_s);
    }

    void churn_to(double now) {
        for (auto& p : peers_) {
            if (p.corrupted) continue;
            while (p.next_flip <= now) {
                p.online = !p.online;
                p.next_flip += exp_sample(p.online ? cfg_.mean_online_hours
                                                   : cfg_.mean_offline_hours);
            }
            overlay_->set_peer_online(p.id, p.online);
        }
    }

    void record_hops(const std::vector<SearchProof>& proofs) {
        for (const auto& p : proofs) metrics_.hop_histogram[p.hops.size() - 1] += 1;
    }

    ValidatorContext make_ctx(const Peer& validator) const {
        ValidatorContext ctx;
        ctx.store = store_.get();
        ctx.keys = &keys_;
        ctx.params = &cfg_.pov;
        ctx.width_s = cfg_.width_s;
        ctx.validator = validator.id;
        ctx.validator_key = &validator.key;
        ctx.balance_of = [this](const Identifier& id) {
            std::int64_t b = view_.balance_of(id);
            return b < 0 ? std::uint64_t{0} : static_cast<std::uint64_t>(b);
        };
        ctx.evidence_ok = [this](const Contribution::Evidence& ev) {
            AuditContext actx{store_.get(), &keys_, &cfg_.pov, cfg_.width_s};
            auto resolve = [this](const Bytes& payload) -> const Block* {
                auto it = artifact_index_.find(payload);
                return it == artifact_index_.end() ? nullptr : &it->second;
            };
            return verify_evidence(ev, actx, resolve, &registry_, store_->chain_height());
        };
        return ctx;
    }

    /// Runs the PoV round for an owner-signed transaction: each designated
    /// validator (resolved online by the proofs) validates and signs or
    /// refuses. Returns true when t distinct non-blacklisted signatures land.
    bool pov_round_tx(Transaction& tx) {
        metrics_.service_attempts += 1;
        std::set<Identifier> seen;
        for (const auto& proof : tx.search_proofs) {
            const Identifier& vid = proof.result;
            if (!seen.insert(vid).second) continue;
            if (blacklist_.contains(vid)) continue;
            const Peer& v = peers_[peer_index_.at(vid)];
            if (v.corrupted) {
                if (enabled(AdversaryStrategy::withhold_signatures)) continue;
                if (enabled(AdversaryStrategy::sign_invalid)) {
                    tx.sigs.push_back(sign(v.key, v.id, tx.h.bytes()));
                    continue;
                }
            }
            auto outcome = validate_transaction(tx, make_ctx(v));
            if (outcome.verdict == Verdict::signed_ok) tx.sigs.push_back(*outcome.signature);
        }
        if (tx_valid_signers(tx, keys_) >= cfg_.pov.t) return true;
        metrics_.service_denials += 1;
        return false;
    }

    void workload() {
        double p_emit = std::min(1.0, cfg_.tx_rate_per_peer_per_hour * cfg_.slot_hours());
        if (p_emit <= 0.0) return;
        std::bernoulli_distribution emit(p_emit);
        std::uniform_int_distribution<std::size_t> pick(0, cfg_.n - 1);
        std::uniform_int_distribution<std::uint64_t> amt(1, 10);
        for (std::size_t i = 0; i < cfg_.n; ++i) {
            Peer& owner = peers_[i];
            if (owner.corrupted || !owner.online || blacklist_.contains(owner.id)) continue;
            if (!emit(rng_)) continue;
            if (pending_owner_.count(owner.id)) continue;  // one in flight per owner
            Contribution cont;
            std::size_t r = pick(rng_);
            cont.recipient = peers_[r == i ? (r + 1) % cfg_.n : r].id;
            cont.amount = amt(rng_);
            if (view_.balance_of(owner.id) <
                static_cast<std::int64_t>(cont.amount) + 2000)
                continue;  // keep a generous fee cushion
            Transaction tx = assemble_transaction(*overlay_, store_->resolve_tail(), owner.id,
                                                  owner.key, std::move(cont), cfg_.pov.alpha,
                                                  cfg_.width_s);
            record_hops(tx.search_proofs);
            if (pov_round_tx(tx)) {
                pending_owner_.insert(tx.owner);
                mempool_.push_back(std::move(tx));
            }
        }
    }

    /// One honest block formation attempt per slot once enough distinct-owner
    /// validated transactions are pending.
    void form_block() {
        prune_mempool();
        std::vector<Transaction> picked;
        std::set<Identifier> owners;
        for (const auto& tx : mempool_) {
            if (owners.count(tx.owner)) continue;
            owners.insert(tx.owner);
            picked.push_back(tx);
            if (picked.size() >= 2 * static_cast<std::size_t>(cfg_.pov.min_tx)) break;
        }
        if (picked.size() < cfg_.pov.min_tx) return;

        std::vector<std::size_t> online;
        for (std::size_t i = 0; i < cfg_.n; ++i)
            if (!peers_[i].corrupted && peers_[i].online && !blacklist_.contains(peers_[i].id))
                online.push_back(i);
        if (online.empty()) return;
        std::uniform_int_distribution<std::size_t> pick(0, online.size() - 1);
        Peer& proposer = peers_[online[pick(rng_)]];

        Block blk = assemble_block(*overlay_, store_->resolve_tail(), proposer.id,
                                   proposer.key, std::move(picked), cfg_.pov.alpha,
                                   cfg_.width_s);
        record_hops(blk.search_proofs);
        metrics_.service_attempts += 1;
        std::set<Identifier> seen;
        auto tail_fn = [this] { return store_->resolve_tail(); };
        for (const auto& proof : blk.search_proofs) {
            const Identifier& vid = proof.result;
            if (!seen.insert(vid).second) continue;
            if (blacklist_.contains(vid)) continue;
            const Peer& v = peers_[peer_index_.at(vid)];
            if (v.corrupted) {
                if (enabled(AdversaryStrategy::withhold_signatures)) continue;
                if (enabled(AdversaryStrategy::sign_invalid)) {
                    blk.sigs.push_back(sign(v.key, v.id, blk.h.bytes()));
                    continue;
                }
            }
            auto outcome = validate_block(blk, make_ctx(v), tail_fn);
            if (outcome.verdict == Verdict::signed_ok) blk.sigs.push_back(*outcome.signature);
        }
        if (!commit_threshold(blk)) {
            metrics_.service_denials += 1;
            return;
        }
        commit_block(blk);
    }

    /// Honest acceptance rule for a broadcast block: t distinct verifying
    /// validator signatures from non-blacklisted peers.
    bool commit_threshold(const Block& blk) const {
        if (blacklist_.contains(blk.owner)) return false;
        std::set<Identifier> designated;
        for (const auto& p : blk.search_proofs) designated.insert(p.result);
        std::set<Identifier> signers;
        for (const auto& s : blk.sigs) {
            if (s.signer_id == blk.owner || !designated.count(s.signer_id)) continue;
            if (blacklist_.contains(s.signer_id)) continue;
            if (keys_.verify(s.signer_id, blk.h.bytes(), s.bytes)) signers.insert(s.signer_id);
        }
        return signers.size() >= cfg_.pov.t;
    }

    void commit_block(const Block& blk) {
        store_->append_block(blk);
        std::size_t height = store_->height_of(blk.h);
        artifact_index_.emplace(encode_block(blk), blk);

        // Replication on owner plus actual signers; pointers ride the same set.
        ReplicaSet rs = make_replica_set(blk.h, blk.owner, blk.sigs, cfg_.pov.t);
        replicate(*overlay_, NodeKind::block, blk.h, blk.prev, rs.holders);
        block_replicas_.emplace_back(rs, current_slot_);
        for (const auto& tx : blk.txs) {
            ReplicaSet txrs = make_replica_set(tx.h, tx.owner, tx.sigs, cfg_.pov.t);
            replicate(*overlay_, NodeKind::transaction, tx.h, tx.prev, txrs.holders);
        }
        install_pointers(*overlay_, registry_, blk, rs.holders, height);
        auto retires = [this](const Identifier& holder) {
            if (!enabled(AdversaryStrategy::keep_stale_pointers)) return true;
            return !peers_[peer_index_.at(holder)].corrupted;
        };
        auto report = retire_pointers(*overlay_, registry_, height, cfg_.pov.block_interval,
                                      retires);
        for (const auto& [holder, ptr] : report.flagged)
            file_report(make_stale_pointer_evidence(holder, ptr));

        for (const auto& proof : blk.search_proofs)
            metrics_.involvement[proof.result] += 1;

        // Included and newly unsound transactions leave the mempool.
        std::set<Identifier> taken;
        for (const auto& tx : blk.txs) taken.insert(tx.h);
        for (auto it = mempool_.begin(); it != mempool_.end();) {
            if (taken.count(it->h)) {
                pending_owner_.erase(it->owner);
                it = mempool_.erase(it);
            } else {
                ++it;
            }
        }
        prune_mempool();
    }

    void prune_mempool() {
        for (auto it = mempool_.begin(); it != mempool_.end();) {
            if (!tx_sound(*it, *store_)) {
                pending_owner_.erase(it->owner);
                it = mempool_.erase(it);
            } else {
                ++it;
            }
        }
    }

    /// The corrupted coalition assembles a block of never-validated
    /// transactions on the current tail and tries to push it to t signatures
    /// with corrupted validators alone.
    void forge_attempt() {
        if (corrupted_.empty()) return;
        std::uniform_int_distribution<std::size_t> pick(0, corrupted_.size() - 1);
        Peer& forger = peers_[corrupted_[pick(rng_)]];
        if (blacklist_.contains(forger.id)) return;
        std::vector<Transaction> txs;
        for (unsigned k = 0; k < cfg_.pov.min_tx; ++k) {
            Peer& tx_owner = peers_[corrupted_[k % corrupted_.size()]];
            Contribution cont;
            cont.recipient = tx_owner.id;
            cont.amount = 1;
            txs.push_back(assemble_transaction(*overlay_, store_->resolve_tail(), tx_owner.id,
                                               tx_owner.key, std::move(cont), cfg_.pov.alpha,
                                               cfg_.width_s));
        }
        Block blk = assemble_block(*overlay_, store_->resolve_tail(), forger.id, forger.key,
                                   std::move(txs), cfg_.pov.alpha, cfg_.width_s);
        for (const auto& proof : blk.search_proofs) {
            const Identifier& vid = proof.result;
            const Peer& v = peers_[peer_index_.at(vid)];
            if (v.corrupted) blk.sigs.push_back(sign(v.key, v.id, blk.h.bytes()));
        }
        if (commit_threshold(blk)) commit_block(blk);
    }

    /// A misbehavior report entering the normal transaction pipeline.
    void file_report(const Contribution::Evidence& ev) {
        Encoder key;
        key.field(ev.accused).field_u32(static_cast<std::uint32_t>(ev.kind)).field(ev.payload);
        if (!reported_.insert(key.bytes()).second) return;
        const Peer* reporter = nullptr;
        for (const auto& p : peers_)
            if (!p.corrupted && p.online && !pending_owner_.count(p.id)) {
                reporter = &p;
                break;
            }
        if (!reporter) return;
        try {
            Transaction tx = file_misbehavior_tx(*overlay_, reporter->id, reporter->key,
                                                 store_->resolve_tail(), ev, cfg_.pov,
                                                 cfg_.width_s);
            record_hops(tx.search_proofs);
            if (pov_round_tx(tx)) {
                pending_owner_.insert(tx.owner);
                mempool_.push_back(std::move(tx));
            }
        } catch (const OverlayEmpty&) {
        }
    }

    /// One-block finality: blocks strictly below the tail are final. Newly
    /// final blocks are audited (the omniscient violation count uses the same
    /// re-validation any honest auditor runs) and applied to the view.
    void advance_finality() {
        const auto& path = store_->main_path();
        while (path.size() >= 2 && processed_final_ < path.size() - 2) {
            std::size_t h = processed_final_ + 1;
            const Block& blk = *store_->find(path[h]);
            AuditContext actx{store_.get(), &keys_, &cfg_.pov, cfg_.width_s};
            if (auto ev = audit_block(blk, actx)) {
                metrics_.integrity_violations += 1;
                file_report(*ev);
            }
            view_.apply_block(blk, cfg_.pov, h, &blacklist_);
            processed_final_ = h;
        }
    }

    void bootstrap_check() {
        metrics_.bootstrap_checks += 1;
        Encoder seed;
        seed.field_u64(cfg_.seed).field_u64(metrics_.bootstrap_checks + 0xb007);
        Identifier newcomer = seed.hash(cfg_.width_s);
        keys_.add(newcomer, make_hmac_keypair(seed.bytes()));
        auto fetch = [this](const Identifier& peer) -> std::optional<IntroducedView> {
            auto it = peer_index_.find(peer);
            if (it == peer_index_.end()) return std::nullopt;
            const Peer& p = peers_[it->second];
            if (p.corrupted && enabled(AdversaryStrategy::serve_forged_view))
                return IntroducedView{forged_tail_, forged_digest_, ViewTable()};
            return IntroducedView{view_.tail_hash(), view_.digest(cfg_.width_s), view_};
        };
        try {
            ViewTable adopted = bootstrap(*overlay_, newcomer, cfg_.pov.t, 4 * cfg_.pov.alpha,
                                          fetch, cfg_.width_s);
            std::vector<Identifier> ids;
            for (const auto& p : peers_) ids.push_back(p.id);
            Blacklist scratch;
            ViewTable replayed = replay_from_genesis(*store_, cfg_.pov, ids, cfg_.endowment,
                                                     processed_final_, cfg_.width_s, &scratch);
            if (!(adopted.digest(cfg_.width_s) == replayed.digest(cfg_.width_s)) ||
                !(adopted.tail_hash() == replayed.tail_hash())) {
                metrics_.bootstrap_mismatches += 1;
                metrics_.view_matches_replay = false;
            }
        } catch (const BootstrapUnavailable&) {
            metrics_.service_attempts += 1;
            metrics_.service_denials += 1;
        }
    }

    void sample(std::size_t slot) {
        SlotSample s;
        s.slot = slot;
        for (const auto& p : peers_)
            if (p.online) s.online_peers += 1;
        s.chain_height = store_->chain_height();
        std::uint64_t online = 0, mature = 0;
        for (const auto& [rs, committed] : block_replicas_) {
            if (slot < committed + cfg_.replica_burn_in_slots) continue;
            mature += 1;
            for (const auto& h : rs.holders)
                if (peers_[peer_index_.at(h)].online) online += 1;
        }
        if (mature > 0)
            s.mean_replicas = static_cast<double>(online) / static_cast<double>(mature);
        s.integrity_violations = metrics_.integrity_violations;
        s.service_denials = metrics_.service_denials;
        s.messages = overlay_->ledger().total();
        metrics_.series.push_back(s);
    }

    void finish_metrics() {
        metrics_.messages = overlay_->ledger().total();
        metrics_.chain_height = store_->chain_height();
        metrics_.blacklisted = blacklist_.size();
        metrics_.total_balance = view_.total_balance();
        double acc = 0.0;
        std::size_t cnt = 0;
        for (const auto& s : metrics_.series)
            if (s.mean_replicas > 0.0) {
                acc += s.mean_replicas;
                ++cnt;
            }
        metrics_.mean_replicas = cnt == 0 ? 0.0 : acc / static_cast<double>(cnt);
    }

    SimConfig cfg_;
    std::mt19937_64 rng_;
    KeyDirectory keys_;
    std::unique_ptr<Overlay> overlay_;
    std::unique_ptr<LedgerStore> store_;
    std::vector<Peer> peers_;
    std::map<Identifier, std::size_t> peer_index_;
    std::vector<std::size_t> corrupted_;
    ViewTable view_;
    Blacklist blacklist_;
    PointerRegistry registry_;
    std::vector<std::pair<ReplicaSet, std::size_t>> block_replicas_;  // set, commit slot
    std::vector<Transaction> mempool_;
    std::set<Identifier> pending_owner_;
    std::map<Bytes, Block> artifact_index_;
    std::set<Bytes> reported_;
    std::size_t processed_final_ = 0;
    std::size_t current_slot_ = 0;
    Identifier forged_tail_;
    Identifier forged_digest_;
    Metrics metrics_;
};

inline Metrics run(const SimConfig& cfg) { return Simulation(cfg).run(); }

/// Applies a sweep axis value onto a config copy.
inline SimConfig with_axis(SimConfig base, const std::string& axis, double value) {
    if (axis == "t")
        base.pov.t = static_cast<unsigned>(value);
    else if (axis == "alpha")
        base.pov.alpha = static_cast<unsigned>(value);
    else if (axis == "f")
        base.f = value;
    else if (axis == "n" || axis == "peers")
        base.n = static_cast<std::size_t>(value);
    else if (axis == "min_tx")
        base.pov.min_tx = static_cast<unsigned>(value);
    else if (axis == "tx_rate")
        base.tx_rate_per_peer_per_hour = value;
    else if (axis == "hours")
        base.sim_hours = value;
    else if (axis == "q") {
        if (value < 0.0 || value >= 1.0) throw InvalidParameter("q axis value out of [0, 1)");
        base.mean_offline_hours = base.mean_online_hours * value / (1.0 - value);
    } else {
        throw InvalidParameter("unknown sweep axis: " + axis);
    }
    return base;
}

struct SweepCell {
    double axis_value = 0.0;
    std::uint64_t seed = 0;
    Metrics metrics;
};

inline std::vector<SweepCell> run_sweep(const SimConfig& base, const std::string& axis,
                                        const std::vector<double>& values,
                                        const std::vector<std::uint64_t>& seeds) {
    std::vector<SweepCell> out;
    for (double v : values) {
        SimConfig cfg = with_axis(base, axis, v);
        for (std::uint64_t seed : seeds) {
            cfg.seed = seed;
            out.push_back({v, seed, run(cfg)});
        }
    }
    return out;
}

}  // namespace lightchain
