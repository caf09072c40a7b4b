// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "lightchain/storage.hpp"
#include "lightchain/view.hpp"

namespace lightchain {

class InvalidEvidence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AuditContext {
    const LedgerStore* store = nullptr;
    const KeyDirectory* keys = nullptr;
    const PovParams* params = nullptr;
    unsigned width_s = 64;
};

/// The checks any peer can replay on a committed block without having been
/// one of its validators: hash integrity, owner signature, per-transaction
/// signature thresholds, and the structural block rules.
inline std::optional<Contribution::Evidence> audit_block(const Block& blk,
                                                         const AuditContext& ctx) {
    auto evidence = [&](MisbehaviorKind kind) {
        Contribution::Evidence ev;
        ev.accused = blk.owner;
        ev.kind = kind;
        ev.payload = encode_block(blk);
        return ev;
    };
    auto hashes = member_hashes(blk);
    if (!(blk_hash(blk.prev, blk.owner, hashes, blk.search_proofs, ctx.width_s) == blk.h))
        return evidence(MisbehaviorKind::forged_proof);
    bool owner_signed = false;
    for (const auto& s : blk.sigs)
        if (s.signer_id == blk.owner &&
            ctx.keys->verify(blk.owner, blk.h.bytes(), s.bytes)) {
            owner_signed = true;
            break;
        }
    if (!owner_signed) return evidence(MisbehaviorKind::invalid_block_direct_submit);
    // A committed block must carry t verifying validator signatures of its own.
    std::set<Identifier> blk_signers;
    for (const auto& s : blk.sigs) {
        if (s.signer_id == blk.owner) continue;
        if (ctx.keys->verify(s.signer_id, blk.h.bytes(), s.bytes))
            blk_signers.insert(s.signer_id);
    }
    if (blk_signers.size() < ctx.params->t)
        return evidence(MisbehaviorKind::invalid_block_direct_submit);
    if (blk.txs.size() < ctx.params->min_tx)
        return evidence(MisbehaviorKind::invalid_block_direct_submit);
    std::set<Identifier> owners;
    for (const auto& tx : blk.txs) {
        if (!(tx_hash(tx.prev, tx.owner, tx.cont, tx.search_proofs, ctx.width_s) == tx.h))
            return evidence(MisbehaviorKind::forged_proof);
        bool tx_owner_signed = false;
        for (const auto& s : tx.sigs)
            if (s.signer_id == tx.owner &&
                ctx.keys->verify(tx.owner, tx.h.bytes(), s.bytes)) {
                tx_owner_signed = true;
                break;
            }
        if (!tx_owner_signed)
            return evidence(MisbehaviorKind::unsound_tx_in_committed_block);
        if (tx_valid_signers(tx, *ctx.keys) < ctx.params->t)
            return evidence(MisbehaviorKind::unsound_tx_in_committed_block);
        if (!owners.insert(tx.owner).second)
            return evidence(MisbehaviorKind::unsound_tx_in_committed_block);
    }
    return std::nullopt;
}

inline Bytes encode_pointer(const TransactionPointer& ptr) {
    Encoder enc;
    enc.field(ptr.owner).field(ptr.blk);
    enc.field_u64(ptr.created_height);
    enc.field_u64(ptr.superseded_height ? *ptr.superseded_height : 0);
    return enc.bytes();
}

inline Contribution::Evidence make_stale_pointer_evidence(const Identifier& holder,
                                                          const TransactionPointer& ptr) {
    Contribution::Evidence ev;
    ev.accused = holder;
    ev.kind = MisbehaviorKind::stale_pointer;
    ev.payload = encode_pointer(ptr);
    return ev;
}

/// Stale pointers still answering name searches for an owner whose latest
/// committed update is newer than the grace interval.
inline std::vector<Contribution::Evidence> audit_pointers(const PointerRegistry& registry,
                                                          std::size_t current_height,
                                                          unsigned block_interval) {
    std::vector<Contribution::Evidence> out;
    for (const auto& [owner, ptrs] : registry.all()) {
        for (const auto& p : ptrs) {
            if (!p.superseded_height) continue;
            if (current_height < *p.superseded_height + block_interval) continue;
            for (const auto& holder : p.holders)
                out.push_back(make_stale_pointer_evidence(holder, p));
        }
    }
    return out;
}

/// Evidence re-verification: the correctness check PoV validators run for
/// misbehavior-report transactions. Block-shaped payloads are matched against
/// the reported artifact and re-audited; stale-pointer evidence is checked
/// against the live registry.
inline bool verify_evidence(const Contribution::Evidence& ev, const AuditContext& ctx,
                            const std::function<const Block*(const Bytes&)>& resolve_block,
                            const PointerRegistry* registry, std::size_t current_height) {
    switch (ev.kind) {
        case MisbehaviorKind::invalid_block_direct_submit:
        case MisbehaviorKind::unsound_tx_in_committed_block:
        case MisbehaviorKind::forged_proof: {
            const Block* blk = resolve_block ? resolve_block(ev.payload) : nullptr;
            if (!blk || !(encode_block(*blk) == ev.payload)) return false;
            auto found = audit_block(*blk, ctx);
            return found && found->accused == ev.accused;
        }
        case MisbehaviorKind::stale_pointer: {
            if (!registry) return false;
            for (const auto& [owner, ptrs] : registry->all())
                for (const auto& p : ptrs) {
                    if (!(encode_pointer(p) == ev.payload)) continue;
                    if (!p.holders.count(ev.accused)) continue;
                    if (p.superseded_height &&
                        current_height >= *p.superseded_height + ctx.params->block_interval)
                        return true;
                }
            return false;
        }
    }
    return false;
}

/// Files a misbehavior report: a zero-amount transaction to the reporter
/// itself with the evidence riding in the contribution extension. Validators
/// treat evidence re-verification as the correctness check.
inline Transaction file_misbehavior_tx(
    const Overlay& overlay, const Identifier& reporter, const KeyPair& reporter_key,
    const Identifier& prev, Contribution::Evidence evidence, const PovParams& params,
    unsigned width_s,
    const std::function<bool(const Contribution::Evidence&)>& local_check = nullptr) {
    if (local_check && !local_check(evidence))
        throw InvalidEvidence("evidence failed local re-verification");
    Contribution cont;
    cont.recipient = reporter;
    cont.amount = 0;
    cont.evidence = std::move(evidence);
    return assemble_transaction(overlay, prev, reporter, reporter_key, std::move(cont),
                                params.alpha, width_s);
}

inline bool is_blacklisted(const Blacklist& blacklist, const Identifier& peer) {
    return blacklist.contains(peer);
}

}  // namespace lightchain
