// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lightchain/encoding.hpp"
#include "lightchain/skipgraph.hpp"

namespace lightchain {

enum class MisbehaviorKind : std::uint32_t {
    invalid_block_direct_submit,
    stale_pointer,
    unsound_tx_in_committed_block,
    forged_proof,
};

/// Single-recipient remittance. Misbehavior reports ride in the optional
/// evidence extension, which is part of the hashed encoding when present.
struct Contribution {
    Identifier recipient;
    std::uint64_t amount = 0;

    struct Evidence {
        Identifier accused;
        MisbehaviorKind kind;
        Bytes payload;  // canonical bytes of the offending artifact
    };
    std::optional<Evidence> evidence;

    Bytes encode() const {
        Encoder enc;
        enc.field(recipient).field_u64(amount);
        enc.field_u32(evidence ? 1 : 0);
        if (evidence) {
            enc.field(evidence->accused);
            enc.field_u32(static_cast<std::uint32_t>(evidence->kind));
            enc.field(evidence->payload);
        }
        return enc.bytes();
    }
};

struct Transaction {
    Identifier prev;   // hash of a committed block
    Identifier owner;  // peer numID
    Contribution cont;
    std::vector<SearchProof> search_proofs;  // one per validator index
    Identifier h;
    std::vector<Signature> sigs;  // owner first, then validators

    std::size_t proof_hops() const {
        std::size_t n = 0;
        for (const auto& p : search_proofs) n += p.hops.size();
        return n;
    }
};

struct Block {
    Identifier prev;
    Identifier owner;
    std::vector<Transaction> txs;  // the ordered set S
    std::vector<SearchProof> search_proofs;
    Identifier h;
    std::vector<Signature> sigs;
};

inline void encode_proofs(Encoder& enc, const std::vector<SearchProof>& proofs) {
    enc.field_u32(static_cast<std::uint32_t>(proofs.size()));
    for (const auto& p : proofs) enc.field(p.encode());
}

inline Identifier tx_hash(const Identifier& prev, const Identifier& owner,
                          const Contribution& cont,
                          const std::vector<SearchProof>& proofs, unsigned width_s) {
    Encoder enc;
    enc.field(prev).field(owner).field(cont.encode());
    encode_proofs(enc, proofs);
    return enc.hash(width_s);
}

/// S is hashed as the concatenation of member transaction hashes in block
/// (insertion) order.
inline Identifier blk_hash(const Identifier& prev, const Identifier& owner,
                           const std::vector<Identifier>& tx_hashes,
                           const std::vector<SearchProof>& proofs, unsigned width_s) {
    Encoder enc;
    enc.field(prev).field(owner);
    Encoder s_enc;
    for (const auto& th : tx_hashes) s_enc.field(th);
    enc.field(s_enc.bytes());
    encode_proofs(enc, proofs);
    return enc.hash(width_s);
}

inline std::vector<Identifier> member_hashes(const Block& blk) {
    std::vector<Identifier> out;
    out.reserve(blk.txs.size());
    for (const auto& tx : blk.txs) out.push_back(tx.h);
    return out;
}

inline Identifier blk_hash(const Block& blk, unsigned width_s) {
    return blk_hash(blk.prev, blk.owner, member_hashes(blk), blk.search_proofs, width_s);
}

inline Bytes encode_tx(const Transaction& tx) {
    Encoder enc;
    enc.field(tx.prev).field(tx.owner).field(tx.cont.encode());
    encode_proofs(enc, tx.search_proofs);
    enc.field(tx.h);
    enc.field_u32(static_cast<std::uint32_t>(tx.sigs.size()));
    for (const auto& s : tx.sigs) {
        enc.field(s.signer_id);
        enc.field(s.bytes);
    }
    return enc.bytes();
}

inline Bytes encode_block(const Block& blk) {
    Encoder enc;
    enc.field(blk.prev).field(blk.owner);
    enc.field_u32(static_cast<std::uint32_t>(blk.txs.size()));
    for (const auto& tx : blk.txs) enc.field(encode_tx(tx));
    encode_proofs(enc, blk.search_proofs);
    enc.field(blk.h);
    enc.field_u32(static_cast<std::uint32_t>(blk.sigs.size()));
    for (const auto& s : blk.sigs) {
        enc.field(s.signer_id);
        enc.field(s.bytes);
    }
    return enc.bytes();
}

inline Block make_genesis(unsigned width_s) {
    Block g;
    g.prev = Identifier::zero(width_s);
    g.owner = Identifier::zero(width_s);
    g.h = blk_hash(g, width_s);
    return g;
}

class MissingParent : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class InvalidReference : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Block store plus the fork-free main-path bookkeeping. The committed chain
// is the unique path from genesis descending into the lowest-hash child at
// every fork.
class LedgerStore {
public:
    explicit LedgerStore(unsigned width_s) : width_(width_s) {
        Block g = make_genesis(width_s);
        genesis_ = g.h;
        blocks_.emplace(g.h, std::move(g));
        main_path_.push_back(genesis_);
        heights_.emplace(genesis_, 0);
    }

    unsigned width() const { return width_; }
    const Identifier& genesis() const { return genesis_; }

    const Block* find(const Identifier& h) const {
        auto it = blocks_.find(h);
        return it == blocks_.end() ? nullptr : &it->second;
    }

    void append_block(const Block& blk) {
        if (blocks_.count(blk.h)) throw DuplicateNode("duplicate block hash");
        if (!blocks_.count(blk.prev)) throw MissingParent("block prev not in store");
        blocks_.emplace(blk.h, blk);
        children_[blk.prev].insert(blk.h);
        auto hit = heights_.find(blk.prev);
        if (hit != heights_.end()) {
            std::size_t child_height = hit->second + 1;
            // The new block changes the main path only if it wins the fork
            // at its own height.
            if (child_height >= main_path_.size() ||
                wins_fork(blk.h, main_path_[child_height]))
                rebuild_from(child_height);
        }
    }

    const Identifier& resolve_tail() const { return main_path_.back(); }

    bool on_main_path(const Identifier& h) const { return heights_.count(h) > 0; }

    std::size_t height_of(const Identifier& h) const {
        auto it = heights_.find(h);
        if (it == heights_.end()) throw InvalidReference("block not on main path");
        return it->second;
    }

    std::size_t chain_height() const { return main_path_.size() - 1; }

    const std::vector<Identifier>& main_path() const { return main_path_; }

    /// A block is finalized once at least one further main-path block
    /// succeeds it (one-block finality).
    bool is_finalized(const Identifier& h) const {
        if (!blocks_.count(h)) throw NotFound("unknown block hash");
        auto it = heights_.find(h);
        return it != heights_.end() && it->second + 1 < main_path_.size();
    }

    /// Hash of the most recent main-path block at or before `upto` carrying
    /// a transaction of this owner.
    std::optional<Identifier> latest_owner_block(const Identifier& owner,
                                                 const Identifier& upto) const {
        auto hit = heights_.find(upto);
        if (hit == heights_.end()) throw InvalidReference("upto block off the main path");
        auto oit = owner_heights_.find(owner);
        if (oit == owner_heights_.end()) return std::nullopt;
        const auto& hs = oit->second;
        auto it = std::upper_bound(hs.begin(), hs.end(), hit->second);
        if (it == hs.begin()) return std::nullopt;
        return main_path_[*std::prev(it)];
    }

    /// One block per line: h prev owner tx-hashes sig-count.
    std::string export_text() const {
        std::ostringstream os;
        for (const Identifier& h : main_path_) {
            const Block& b = blocks_.at(h);
            os << b.h.hex() << ' ' << b.prev.hex() << ' ' << b.owner.hex() << ' ';
            for (std::size_t i = 0; i < b.txs.size(); ++i)
                os << (i ? "," : "") << b.txs[i].h.hex();
            if (b.txs.empty()) os << '-';
            os << ' ' << b.sigs.size() << '\n';
        }
        return os.str();
    }

private:
    bool wins_fork(const Identifier& a, const Identifier& b) const {
        if (!(blocks_.at(a).h == blocks_.at(b).h)) return a < b;
        // Hash ties are negligible at s = 256 but possible at small
        // simulation widths; owner then encoded bytes keep it deterministic.
        const Block& ba = blocks_.at(a);
        const Block& bb = blocks_.at(b);
        if (!(ba.owner == bb.owner)) return ba.owner < bb.owner;
        return encode_block(ba) < encode_block(bb);
    }

    void rebuild_from(std::size_t height) {
        // Drop owner bookkeeping for the truncated suffix.
        while (main_path_.size() > height) {
            const Identifier& h = main_path_.back();
            const Block& b = blocks_.at(h);
            std::set<Identifier> seen;
            for (const auto& tx : b.txs) seen.insert(tx.owner);
            for (const auto& owner : seen) {
                auto& v = owner_heights_[owner];
                while (!v.empty() && v.back() >= main_path_.size() - 1) v.pop_back();
            }
            heights_.erase(h);
            main_path_.pop_back();
        }
        // Walk forward following the lowest-hash child.
        while (true) {
            auto cit = children_.find(main_path_.back());
            if (cit == children_.end() || cit->second.empty()) break;
            const Identifier* best = nullptr;
            for (const Identifier& c : cit->second)
                if (!best || wins_fork(c, *best)) best = &c;
            const Block& b = blocks_.at(*best);
            heights_.emplace(*best, main_path_.size());
            std::set<Identifier> seen;
            for (const auto& tx : b.txs) seen.insert(tx.owner);
            for (const auto& owner : seen) owner_heights_[owner].push_back(main_path_.size());
            main_path_.push_back(*best);
        }
    }

    unsigned width_;
    Identifier genesis_;
    std::map<Identifier, Block> blocks_;
    std::map<Identifier, std::set<Identifier>> children_;
    std::vector<Identifier> main_path_;
    std::map<Identifier, std::size_t> heights_;
    std::map<Identifier, std::vector<std::size_t>> owner_heights_;
};

}  // namespace lightchain
