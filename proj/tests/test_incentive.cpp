// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#include <catch2/catch_amalgamated.hpp>

#include "lightchain/incentive.hpp"

using namespace lightchain;

namespace {

struct Net {
    KeyDirectory keys;
    Overlay overlay{64, &keys};
    LedgerStore store{64};
    PovParams params;
    std::vector<Identifier> peers;
    std::map<Identifier, KeyPair> keypairs;

    Net() {
        params.alpha = 3;
        params.t = 2;
        params.min_tx = 1;
        for (std::uint64_t i = 0; i < 12; ++i) {
            std::uint64_t v = i * (~0ull / 12) + (~0ull / 24);  // spread over the full space
            Identifier num = Identifier::from_u64(64, v);
            Encoder enc;
            enc.field(num);
            KeyPair kp = make_hmac_keypair(Bytes(num.bytes().begin(), num.bytes().end()));
            keys.add(num, kp);
            keypairs.emplace(num, kp);
            overlay.join({num, enc.hash(64), NodeKind::peer, num, true});
            peers.push_back(num);
        }
    }

    AuditContext audit_ctx() const { return {&store, &keys, &params, 64}; }

    Transaction signed_tx(int owner_idx, std::uint64_t amount = 1) {
        Identifier owner = peers[owner_idx];
        Transaction tx = assemble_transaction(overlay, store.resolve_tail(), owner,
                                              keypairs.at(owner),
                                              Contribution{peers[11], amount, {}},
                                              params.alpha, 64);
        ValidatorContext ctx;
        ctx.store = &store;
        ctx.keys = &keys;
        ctx.params = &params;
        ctx.width_s = 64;
        ctx.balance_of = [](const Identifier&) { return 100000ull; };
        for (const Identifier& v : tx_designated_validators(tx)) {
            ctx.validator = v;
            ctx.validator_key = &keypairs.at(v);
            auto out = validate_transaction(tx, ctx);
            if (out.verdict == Verdict::signed_ok) tx.sigs.push_back(*out.signature);
        }
        return tx;
    }

    // Fully validated block: owner signature plus t block-validator signatures.
    Block good_block(std::vector<Transaction> txs, int proposer_idx = 9) {
        Block blk = assemble_block(overlay, store.resolve_tail(), peers[proposer_idx],
                                   keypairs.at(peers[proposer_idx]), std::move(txs),
                                   params.alpha, 64);
        unsigned granted = 0;
        std::set<Identifier> signers;
        for (const auto& p : blk.search_proofs) signers.insert(p.result);
        // The designated set can be smaller than t after deduplication (or can
        // include the proposer); top it up so the block carries t countable
        // validator signatures.
        for (const auto& p : peers) signers.insert(p);
        for (const Identifier& v : signers) {
            if (granted >= params.t) break;
            if (v == blk.owner) continue;  // owner signature is counted separately
            blk.sigs.push_back(sign(keypairs.at(v), v, blk.h.bytes()));
            ++granted;
        }
        return blk;
    }
};

}  // namespace

TEST_CASE("auditing a clean block finds nothing") {
    Net net;
    Block blk = net.good_block({net.signed_tx(0)});
    REQUIRE_FALSE(audit_block(blk, net.audit_ctx()).has_value());
}

TEST_CASE("audit classifies each defect") {
    Net net;
    auto ctx = net.audit_ctx();

    SECTION("hash mismatch is a forged proof") {
        Block blk = net.good_block({net.signed_tx(0)});
        blk.h = Identifier::from_u64(64, 1);
        auto ev = audit_block(blk, ctx);
        REQUIRE(ev);
        REQUIRE(ev->kind == MisbehaviorKind::forged_proof);
        REQUIRE(ev->accused == blk.owner);
    }
    SECTION("missing owner signature is a direct submit") {
        Block blk = net.good_block({net.signed_tx(0)});
        blk.sigs.erase(blk.sigs.begin());  // the owner signature
        auto ev = audit_block(blk, ctx);
        REQUIRE(ev);
        REQUIRE(ev->kind == MisbehaviorKind::invalid_block_direct_submit);
    }
    SECTION("fewer than t block signatures is a direct submit") {
        Block blk = net.good_block({net.signed_tx(0)});
        blk.sigs.resize(2);  // owner + one validator
        auto ev = audit_block(blk, ctx);
        REQUIRE(ev);
        REQUIRE(ev->kind == MisbehaviorKind::invalid_block_direct_submit);
    }
    SECTION("under-signed member transaction is an unsound inclusion") {
        Transaction weak = net.signed_tx(0);
        weak.sigs.resize(1);  // strip validator signatures
        Block blk = net.good_block({weak});
        auto ev = audit_block(blk, ctx);
        REQUIRE(ev);
        REQUIRE(ev->kind == MisbehaviorKind::unsound_tx_in_committed_block);
        REQUIRE(ev->accused == blk.owner);
    }
    SECTION("tampered member transaction is a forged proof") {
        Transaction tx = net.signed_tx(0);
        tx.cont.amount += 1;
        Block blk = net.good_block({tx});
        auto ev = audit_block(blk, ctx);
        REQUIRE(ev);
        REQUIRE(ev->kind == MisbehaviorKind::forged_proof);
    }
    SECTION("duplicate owner in one block is unsound") {
        Block blk = net.good_block({net.signed_tx(0), net.signed_tx(0, 2)});
        auto ev = audit_block(blk, ctx);
        REQUIRE(ev);
        REQUIRE(ev->kind == MisbehaviorKind::unsound_tx_in_committed_block);
    }
}

TEST_CASE("block evidence verifies end to end") {
    Net net;
    Block bad = net.good_block({net.signed_tx(0)});
    bad.sigs.resize(1);  // strip validator signatures -> direct submit
    Bytes encoded = encode_block(bad);
    auto found = audit_block(bad, net.audit_ctx());
    REQUIRE(found);

    auto resolve = [&](const Bytes& payload) -> const Block* {
        return payload == encoded ? &bad : nullptr;
    };
    REQUIRE(verify_evidence(*found, net.audit_ctx(), resolve, nullptr, 0));

    SECTION("evidence against the wrong accused fails") {
        Contribution::Evidence wrong = *found;
        wrong.accused = net.peers[0];
        REQUIRE_FALSE(verify_evidence(wrong, net.audit_ctx(), resolve, nullptr, 0));
    }
    SECTION("evidence against a clean block fails") {
        Block clean = net.good_block({net.signed_tx(1)});
        Contribution::Evidence ev;
        ev.accused = clean.owner;
        ev.kind = MisbehaviorKind::invalid_block_direct_submit;
        ev.payload = encode_block(clean);
        auto resolve2 = [&](const Bytes& payload) -> const Block* {
            return payload == ev.payload ? &clean : nullptr;
        };
        REQUIRE_FALSE(verify_evidence(ev, net.audit_ctx(), resolve2, nullptr, 0));
    }
    SECTION("unresolvable payload fails") {
        REQUIRE_FALSE(verify_evidence(*found, net.audit_ctx(), nullptr, nullptr, 0));
    }
}

TEST_CASE("stale pointer audit and evidence") {
    Net net;
    PointerRegistry registry;
    TransactionPointer ptr;
    ptr.owner = net.peers[0];
    ptr.blk = Identifier::from_u64(64, 900);
    ptr.holders = {net.peers[5]};
    ptr.created_height = 1;
    ptr.superseded_height = 2;
    registry.of_owner(ptr.owner).push_back(ptr);

    SECTION("within grace: no findings, no valid evidence") {
        REQUIRE(audit_pointers(registry, 3, 2).empty());
        auto ev = make_stale_pointer_evidence(net.peers[5], ptr);
        REQUIRE_FALSE(verify_evidence(ev, net.audit_ctx(), nullptr, &registry, 3));
    }
    SECTION("past grace: flagged and verifiable") {
        auto findings = audit_pointers(registry, 4, 2);
        REQUIRE(findings.size() == 1);
        REQUIRE(findings[0].kind == MisbehaviorKind::stale_pointer);
        REQUIRE(findings[0].accused == net.peers[5]);
        REQUIRE(verify_evidence(findings[0], net.audit_ctx(), nullptr, &registry, 4));

        SECTION("a non-holder cannot be accused") {
            Contribution::Evidence wrong = findings[0];
            wrong.accused = net.peers[6];
            REQUIRE_FALSE(verify_evidence(wrong, net.audit_ctx(), nullptr, &registry, 4));
        }
        SECTION("no registry, no verdict") {
            REQUIRE_FALSE(verify_evidence(findings[0], net.audit_ctx(), nullptr, nullptr, 4));
        }
    }
    SECTION("live pointers are never stale") {
        registry.of_owner(ptr.owner)[0].superseded_height.reset();
        REQUIRE(audit_pointers(registry, 100, 2).empty());
    }
}

TEST_CASE("a filed report flows through validation into a block") {
    Net net;
    Block bad = net.good_block({net.signed_tx(0)});
    bad.sigs.resize(1);
    Bytes encoded = encode_block(bad);
    auto found = audit_block(bad, net.audit_ctx());
    REQUIRE(found);
    auto resolve = [&](const Bytes& payload) -> const Block* {
        return payload == encoded ? &bad : nullptr;
    };
    auto check = [&](const Contribution::Evidence& ev) {
        return verify_evidence(ev, net.audit_ctx(), resolve, nullptr, 0);
    };

    Identifier reporter = net.peers[3];
    Transaction report = file_misbehavior_tx(net.overlay, reporter,
                                             net.keypairs.at(reporter),
                                             net.store.genesis(), *found, net.params,
                                             64, check);
    REQUIRE(report.cont.amount == 0);
    REQUIRE(report.cont.evidence);

    // Validators accept it because the evidence re-verifies.
    ValidatorContext ctx;
    ctx.store = &net.store;
    ctx.keys = &net.keys;
    ctx.params = &net.params;
    ctx.width_s = 64;
    ctx.balance_of = [](const Identifier&) { return 100000ull; };
    ctx.evidence_ok = check;
    unsigned granted = 0;
    for (const Identifier& v : tx_designated_validators(report)) {
        ctx.validator = v;
        ctx.validator_key = &net.keypairs.at(v);
        auto out = validate_transaction(report, ctx);
        if (out.verdict == Verdict::signed_ok) {
            report.sigs.push_back(*out.signature);
            ++granted;
        }
    }
    REQUIRE(granted >= net.params.t);

    Block carrier = net.good_block({report});
    net.store.append_block(carrier);
    ViewTable view(64, net.peers, 100000, net.store.genesis());
    Blacklist bl;
    view.apply_block(carrier, net.params, 1, &bl);
    REQUIRE(is_blacklisted(bl, bad.owner));

    SECTION("filing rejects evidence that fails the local check") {
        Contribution::Evidence junk = *found;
        junk.accused = net.peers[0];
        REQUIRE_THROWS_AS(
            file_misbehavior_tx(net.overlay, reporter, net.keypairs.at(reporter),
                                net.store.genesis(), junk, net.params, 64, check),
            InvalidEvidence);
    }
}
