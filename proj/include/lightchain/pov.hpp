// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <functional>
#include <set>

#include "lightchain/ledger.hpp"

namespace lightchain {

struct PovParams {
    unsigned alpha = 4;          // Validators Threshold
    unsigned t = 2;              // Signatures Threshold
    unsigned min_tx = 10;        // minimum transactions per non-genesis block
    std::uint64_t validation_fee = 2;
    std::uint64_t routing_fee = 1;
    std::uint64_t block_reward = 1000;
    std::uint64_t misbehavior_penalty = 500;
    std::uint64_t audition_reward = 50;
    unsigned block_interval = 2;  // pointer retirement grace, in blocks

    // t > alpha is a halted configuration (no subject can ever collect t
    // distinct validator signatures); parameter sweeps may visit it.
    void validate(double expected_path_hops) const {
        if (alpha < 1 || t < 1) throw InvalidParameter("alpha and t must be positive");
        if (min_tx < 1) throw InvalidParameter("min_tx must be positive");
        double fees = static_cast<double>(validation_fee) * t +
                      static_cast<double>(routing_fee) * expected_path_hops;
        if (static_cast<double>(block_reward) <= fees)
            throw InvalidParameter("block_reward must exceed validation and routing fees");
    }
};

enum class Verdict : std::uint8_t { signed_ok, rejected };
enum class RejectReason : std::uint8_t {
    ok,
    unsound,
    incorrect,
    unauthentic,
    insufficient_balance,
    inconsistent,
};

struct ValidationOutcome {
    Verdict verdict = Verdict::rejected;
    RejectReason reason = RejectReason::ok;
    std::optional<Signature> signature;

    static ValidationOutcome reject(RejectReason r) { return {Verdict::rejected, r, {}}; }
};

inline Identifier tx_validator_id(const Identifier& prev, const Identifier& owner,
                                  const Contribution& cont, unsigned i, unsigned alpha,
                                  unsigned width_s) {
    if (i < 1 || i > alpha) throw InvalidParameter("validator index out of [1, alpha]");
    Encoder enc;
    enc.field(prev).field(owner).field(cont.encode()).field_u32(i);
    return enc.hash(width_s);
}

inline Identifier blk_validator_id(const Identifier& prev, const Identifier& owner,
                                   const std::vector<Identifier>& tx_hashes, unsigned i,
                                   unsigned alpha, unsigned width_s) {
    if (i < 1 || i > alpha) throw InvalidParameter("validator index out of [1, alpha]");
    Encoder enc;
    enc.field(prev).field(owner);
    Encoder s_enc;
    for (const auto& th : tx_hashes) s_enc.field(th);
    enc.field(s_enc.bytes()).field_u32(i);
    return enc.hash(width_s);
}

struct ResolvedValidator {
    Identifier peer;
    SearchProof proof;
};

/// Per-index validator resolution: searches the peer ring for the hash-derived
/// identifier of each index. Distinct indices may land on the same peer; the
/// requester itself is not excluded.
inline std::vector<ResolvedValidator> resolve_validators(
    const Overlay& overlay, const Identifier& requester, unsigned alpha,
    const std::function<Identifier(unsigned)>& id_for_index) {
    std::vector<ResolvedValidator> out;
    out.reserve(alpha);
    for (unsigned i = 1; i <= alpha; ++i) {
        auto res = overlay.search_num_id(requester, id_for_index(i), NodeKind::peer);
        out.push_back({res.node.numID, std::move(res.proof)});
    }
    return out;
}

struct ValidatorContext {
    const LedgerStore* store = nullptr;
    const KeyDirectory* keys = nullptr;
    const PovParams* params = nullptr;
    unsigned width_s = 64;
    Identifier validator;
    const KeyPair* validator_key = nullptr;
    std::function<std::uint64_t(const Identifier&)> balance_of;
    // Evidence re-verification for misbehavior-report transactions; when the
    // contribution carries evidence, correctness means the evidence checks out.
    std::function<bool(const Contribution::Evidence&)> evidence_ok;
};

inline bool tx_authentic(const Transaction& tx, const ValidatorContext& ctx) {
    if (!(tx_hash(tx.prev, tx.owner, tx.cont, tx.search_proofs, ctx.width_s) == tx.h))
        return false;
    bool owner_signed = false;
    for (const auto& s : tx.sigs) {
        if (s.signer_id == tx.owner && ctx.keys->verify(tx.owner, tx.h.bytes(), s.bytes)) {
            owner_signed = true;
            break;
        }
    }
    if (!owner_signed) return false;
    if (tx.search_proofs.size() != ctx.params->alpha) return false;
    for (unsigned i = 1; i <= ctx.params->alpha; ++i) {
        const SearchProof& p = tx.search_proofs[i - 1];
        if (!(p.target == tx_validator_id(tx.prev, tx.owner, tx.cont, i,
                                          ctx.params->alpha, ctx.width_s)))
            return false;
        if (!verify_search_proof(p, *ctx.keys)) return false;
    }
    return true;
}

inline bool tx_sound(const Transaction& tx, const LedgerStore& store) {
    if (!store.on_main_path(tx.prev)) return false;
    auto latest = store.latest_owner_block(tx.owner, store.resolve_tail());
    if (!latest) return true;
    return store.height_of(*latest) <= store.height_of(tx.prev);
}

/// Designated validators of a transaction, as named by its search proofs.
inline std::set<Identifier> tx_designated_validators(const Transaction& tx) {
    std::set<Identifier> out;
    for (const auto& p : tx.search_proofs) out.insert(p.result);
    return out;
}

/// Distinct designated validators whose signatures over tx.h verify.
inline std::size_t tx_valid_signers(const Transaction& tx, const KeyDirectory& keys) {
    auto designated = tx_designated_validators(tx);
    std::set<Identifier> signers;
    for (const auto& s : tx.sigs) {
        if (s.signer_id == tx.owner) continue;
        if (!designated.count(s.signer_id)) continue;
        if (signers.count(s.signer_id)) continue;
        if (keys.verify(s.signer_id, tx.h.bytes(), s.bytes)) signers.insert(s.signer_id);
    }
    return signers.size();
}

inline ValidationOutcome validate_transaction(const Transaction& tx,
                                              const ValidatorContext& ctx) {
    // Check order: authenticity, soundness, correctness, balance compliance.
    if (!tx_authentic(tx, ctx)) return ValidationOutcome::reject(RejectReason::unauthentic);
    if (!tx_sound(tx, *ctx.store)) return ValidationOutcome::reject(RejectReason::unsound);
    std::uint64_t balance = ctx.balance_of(tx.owner);
    if (tx.cont.evidence) {
        if (!ctx.evidence_ok || !ctx.evidence_ok(*tx.cont.evidence) || tx.cont.amount != 0)
            return ValidationOutcome::reject(RejectReason::incorrect);
    } else if (balance < tx.cont.amount) {
        return ValidationOutcome::reject(RejectReason::incorrect);
    }
    std::uint64_t fees = ctx.params->validation_fee * ctx.params->t +
                         ctx.params->routing_fee * tx.proof_hops();
    if (balance < tx.cont.amount + fees)
        return ValidationOutcome::reject(RejectReason::insufficient_balance);
    ValidationOutcome out;
    out.verdict = Verdict::signed_ok;
    out.reason = RejectReason::ok;
    out.signature = sign(*ctx.validator_key, ctx.validator, tx.h.bytes());
    return out;
}

inline bool blk_authentic(const Block& blk, const ValidatorContext& ctx) {
    auto hashes = member_hashes(blk);
    if (!(blk_hash(blk.prev, blk.owner, hashes, blk.search_proofs, ctx.width_s) == blk.h))
        return false;
    bool owner_signed = false;
    for (const auto& s : blk.sigs) {
        if (s.signer_id == blk.owner && ctx.keys->verify(blk.owner, blk.h.bytes(), s.bytes)) {
            owner_signed = true;
            break;
        }
    }
    if (!owner_signed) return false;
    if (blk.search_proofs.size() != ctx.params->alpha) return false;
    for (unsigned i = 1; i <= ctx.params->alpha; ++i) {
        const SearchProof& p = blk.search_proofs[i - 1];
        if (!(p.target == blk_validator_id(blk.prev, blk.owner, hashes, i,
                                           ctx.params->alpha, ctx.width_s)))
            return false;
        if (!verify_search_proof(p, *ctx.keys)) return false;
    }
    return true;
}

/// Full block validation. `current_tail` is re-queried immediately before
/// signing so a tail change during validation yields an inconsistent verdict.
inline ValidationOutcome validate_block(
    const Block& blk, const ValidatorContext& ctx,
    const std::function<Identifier()>& current_tail) {
    if (!(blk.prev == current_tail()))
        return ValidationOutcome::reject(RejectReason::inconsistent);
    if (!blk_authentic(blk, ctx)) return ValidationOutcome::reject(RejectReason::unauthentic);
    if (blk.txs.size() < ctx.params->min_tx)
        return ValidationOutcome::reject(RejectReason::unsound);
    std::set<Identifier> owners;
    for (const auto& tx : blk.txs) {
        if (!tx_authentic(tx, ctx))
            return ValidationOutcome::reject(RejectReason::unauthentic);
        if (tx_valid_signers(tx, *ctx.keys) < ctx.params->t)
            return ValidationOutcome::reject(RejectReason::unauthentic);
        if (!tx_sound(tx, *ctx.store))
            return ValidationOutcome::reject(RejectReason::unsound);
        if (!owners.insert(tx.owner).second)  // one transaction per owner per block
            return ValidationOutcome::reject(RejectReason::unsound);
    }
    if (!(blk.prev == current_tail()))  // a fork appeared during validation
        return ValidationOutcome::reject(RejectReason::inconsistent);
    ValidationOutcome out;
    out.verdict = Verdict::signed_ok;
    out.reason = RejectReason::ok;
    out.signature = sign(*ctx.validator_key, ctx.validator, blk.h.bytes());
    return out;
}

/// Builds an owner-signed transaction: derives the alpha validator targets,
/// collects authenticated search proofs for each, hashes, and signs. The
/// result still needs t validator signatures before it can enter a block.
inline Transaction assemble_transaction(const Overlay& overlay, const Identifier& prev,
                                        const Identifier& owner, const KeyPair& owner_key,
                                        Contribution cont, unsigned alpha,
                                        unsigned width_s) {
    Transaction tx;
    tx.prev = prev;
    tx.owner = owner;
    tx.cont = std::move(cont);
    auto resolved = resolve_validators(overlay, owner, alpha, [&](unsigned i) {
        return tx_validator_id(prev, owner, tx.cont, i, alpha, width_s);
    });
    for (auto& r : resolved) tx.search_proofs.push_back(std::move(r.proof));
    tx.h = tx_hash(tx.prev, tx.owner, tx.cont, tx.search_proofs, width_s);
    tx.sigs.push_back(sign(owner_key, owner, tx.h.bytes()));
    return tx;
}

/// Same assembly for a block over an ordered transaction set S.
inline Block assemble_block(const Overlay& overlay, const Identifier& prev,
                            const Identifier& owner, const KeyPair& owner_key,
                            std::vector<Transaction> txs, unsigned alpha,
                            unsigned width_s) {
    Block blk;
    blk.prev = prev;
    blk.owner = owner;
    blk.txs = std::move(txs);
    auto hashes = member_hashes(blk);
    auto resolved = resolve_validators(overlay, owner, alpha, [&](unsigned i) {
        return blk_validator_id(prev, owner, hashes, i, alpha, width_s);
    });
    for (auto& r : resolved) blk.search_proofs.push_back(std::move(r.proof));
    blk.h = blk_hash(blk.prev, blk.owner, hashes, blk.search_proofs, width_s);
    blk.sigs.push_back(sign(owner_key, owner, blk.h.bytes()));
    return blk;
}

/// True iff signatures from at least t distinct validator peers verify over
/// the subject hash. Duplicate indices landing on one peer count once.
inline bool collect_threshold(
    const std::vector<std::pair<Identifier, ValidationOutcome>>& outcomes,
    const Identifier& subject_hash, unsigned t, const KeyDirectory& keys) {
    std::set<Identifier> signers;
    for (const auto& [peer, outcome] : outcomes) {
        if (outcome.verdict != Verdict::signed_ok || !outcome.signature) continue;
        if (!(outcome.signature->signer_id == peer)) continue;
        if (keys.verify(peer, subject_hash.bytes(), outcome.signature->bytes))
            signers.insert(peer);
    }
    return signers.size() >= t;
}

/// A knocked-out fork loser keeps the transactions the winner did not take.
/// The owner resubmits only after topping the set back up to min_tx.
inline std::vector<Transaction> knockout_recovery(const Block& my_block,
                                                  const Block& winner_block) {
    std::set<Identifier> taken;
    for (const auto& tx : winner_block.txs) taken.insert(tx.h);
    std::vector<Transaction> kept;
    for (const auto& tx : my_block.txs)
        if (!taken.count(tx.h)) kept.push_back(tx);
    return kept;
}

}  // namespace lightchain
