// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "lightchain/ledger.hpp"

namespace lightchain {

class ReplicaUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Peers holding a copy of one validated subject: the owner plus the
/// validators whose signatures carried it over the threshold (so at most
/// t + 1 distinct peers).
struct ReplicaSet {
    Identifier subject_hash;
    std::set<Identifier> holders;
};

/// Owner plus up to t actual signers, deduplicated.
inline ReplicaSet make_replica_set(const Identifier& subject_hash, const Identifier& owner,
                                   const std::vector<Signature>& sigs, unsigned t) {
    ReplicaSet rs;
    rs.subject_hash = subject_hash;
    rs.holders.insert(owner);
    unsigned validators = 0;
    for (const auto& s : sigs) {
        if (validators >= t) break;
        if (s.signer_id == owner || rs.holders.count(s.signer_id)) continue;
        rs.holders.insert(s.signer_id);
        ++validators;
    }
    return rs;
}

/// Joins one overlay node per holder for the subject (numID = hash,
/// nameID = prev). Re-replication for a holder that already has the copy is
/// a no-op. Offline holders get the replica too; it surfaces on recovery.
inline void replicate(Overlay& overlay, NodeKind kind, const Identifier& subject_hash,
                      const Identifier& subject_prev, const std::set<Identifier>& holders) {
    for (const auto& holder : holders) {
        if (overlay.has_replica(kind, subject_hash, subject_prev, holder)) continue;
        OverlayNode node;
        node.kind = kind;
        node.numID = subject_hash;
        node.nameID = subject_prev;
        node.host_peer = holder;
        node.online = overlay.peer_online(holder);
        overlay.join(node);
    }
}

/// Looks a replicated subject up by hash. Distinguishes "nobody stores it"
/// from "stored but every holder is offline".
inline Overlay::SearchResult retrieve(const Overlay& overlay, const Identifier& querier,
                                      NodeKind kind, const Identifier& subject_hash) {
    try {
        auto res = overlay.search_num_id(querier, subject_hash, kind);
        if (res.node.numID == subject_hash) return res;
    } catch (const OverlayEmpty&) {
    }
    if (overlay.contains(kind, subject_hash))
        throw ReplicaUnavailable("all replica holders offline");
    throw NotFound("subject not replicated");
}

/// A moving flag from an asset owner's name to the committed block carrying
/// the owner's most recent transaction.
struct TransactionPointer {
    Identifier owner;  // nameID of the pointer node
    Identifier blk;    // numID of the pointer node
    std::set<Identifier> holders;
    std::size_t created_height = 0;
    std::optional<std::size_t> superseded_height;  // set once a newer pointer lands
};

class PointerRegistry {
public:
    std::vector<TransactionPointer>& of_owner(const Identifier& owner) {
        return by_owner_[owner];
    }
    const std::vector<TransactionPointer>* find_owner(const Identifier& owner) const {
        auto it = by_owner_.find(owner);
        return it == by_owner_.end() ? nullptr : &it->second;
    }
    std::map<Identifier, std::vector<TransactionPointer>>& all() { return by_owner_; }
    const std::map<Identifier, std::vector<TransactionPointer>>& all() const {
        return by_owner_;
    }

private:
    std::map<Identifier, std::vector<TransactionPointer>> by_owner_;
};

/// Installs one pointer node per transaction of a committed block, hosted by
/// the block's owner and its signing validators. Pointers the new block
/// supersedes get their supersession height stamped here.
inline void install_pointers(Overlay& overlay, PointerRegistry& registry, const Block& blk,
                             const std::set<Identifier>& holders, std::size_t height) {
    for (const auto& tx : blk.txs) {
        auto& ptrs = registry.of_owner(tx.owner);
        for (auto& p : ptrs)
            if (!p.superseded_height) p.superseded_height = height;
        TransactionPointer ptr;
        ptr.owner = tx.owner;
        ptr.blk = blk.h;
        ptr.holders = holders;
        ptr.created_height = height;
        ptrs.push_back(ptr);
        for (const auto& holder : holders) {
            if (overlay.has_replica(NodeKind::pointer, blk.h, tx.owner, holder)) continue;
            OverlayNode node;
            node.kind = NodeKind::pointer;
            node.numID = blk.h;
            node.nameID = tx.owner;
            node.host_peer = holder;
            node.online = overlay.peer_online(holder);
            overlay.join(node);
        }
    }
}

struct RetirementReport {
    std::vector<TransactionPointer> retired;
    // Holders that kept a pointer past its grace interval, with the stale
    // pointer they refused to take down; feeds the misbehavior pipeline.
    std::vector<std::pair<Identifier, TransactionPointer>> flagged;
};

/// Sweeps superseded pointers whose grace interval has elapsed. A holder that
/// declines (adversarial strategy) keeps its stale replica and is flagged.
inline RetirementReport retire_pointers(
    Overlay& overlay, PointerRegistry& registry, std::size_t current_height,
    unsigned block_interval,
    const std::function<bool(const Identifier& holder)>& holder_retires = nullptr) {
    RetirementReport report;
    for (auto& [owner, ptrs] : registry.all()) {
        for (auto it = ptrs.begin(); it != ptrs.end();) {
            if (!it->superseded_height ||
                current_height < *it->superseded_height + block_interval) {
                ++it;
                continue;
            }
            std::set<Identifier> stale;
            for (const auto& holder : it->holders) {
                if (holder_retires && !holder_retires(holder)) {
                    stale.insert(holder);
                    report.flagged.emplace_back(holder, *it);
                    continue;
                }
                overlay.leave(NodeKind::pointer, it->blk, holder, it->owner);
            }
            if (stale.empty()) {
                report.retired.push_back(*it);
                it = ptrs.erase(it);
            } else {
                it->holders = std::move(stale);  // stays until audit forces it out
                ++it;
            }
        }
    }
    return report;
}

struct StateRetrieval {
    Identifier blk_hash;
    Transaction tx;
};

/// Latest-state lookup for an asset owner: pointer by name, then the pointed
/// block by number, then the owner's transaction within it. During the grace
/// interval several pointers may be live; the highest committed block wins.
inline StateRetrieval fast_retrieve_state(const Overlay& overlay, const Identifier& querier,
                                          const Identifier& owner, const LedgerStore& store) {
    auto pointers = overlay.search_name_id(querier, owner, NodeKind::pointer);
    if (pointers.empty()) throw NotFound("no live pointer for owner");
    const Identifier* best = nullptr;
    std::size_t best_height = 0;
    for (const auto& p : pointers) {
        if (!store.on_main_path(p.node.numID)) continue;
        std::size_t h = store.height_of(p.node.numID);
        if (!best || h > best_height) {
            best = &p.node.numID;
            best_height = h;
        }
    }
    if (!best) throw NotFound("no pointer into the committed chain");
    auto blk_node = retrieve(overlay, querier, NodeKind::block, *best);
    const Block* blk = store.find(blk_node.node.numID);
    if (!blk) throw NotFound("pointed block missing from store");
    for (const auto& tx : blk->txs)
        if (tx.owner == owner) return {blk->h, tx};
    throw NotFound("pointed block carries no transaction of the owner");
}

}  // namespace lightchain
