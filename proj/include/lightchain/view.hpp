// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "lightchain/pov.hpp"

namespace lightchain {

class InconsistentView : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class InvalidBlock : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class BootstrapUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ViewEntry {
    Identifier numID;
    Identifier lastblk;
    std::uint64_t state = 0;    // asset register: committed transaction count
    std::int64_t balance = 0;   // spendable units; penalties may drive it negative
};

/// Blacklisted peers never leave the set.
class Blacklist {
public:
    void add(const Identifier& peer, std::size_t height) {
        entries_.emplace(peer, height);
    }
    bool contains(const Identifier& peer) const { return entries_.count(peer) > 0; }
    std::size_t size() const { return entries_.size(); }
    const std::map<Identifier, std::size_t>& entries() const { return entries_; }

private:
    std::map<Identifier, std::size_t> entries_;  // peer -> committing height
};

class ViewTable {
public:
    ViewTable() = default;

    ViewTable(unsigned width_s, const std::vector<Identifier>& peers,
              std::int64_t endowment, const Identifier& genesis_hash)
        : tail_(genesis_hash) {
        for (const auto& p : peers) {
            ViewEntry e;
            e.numID = p;
            e.lastblk = Identifier::zero(width_s);
            e.balance = endowment;
            entries_.emplace(p, e);
        }
    }

    const Identifier& tail_hash() const { return tail_; }

    const ViewEntry* find(const Identifier& numID) const {
        auto it = entries_.find(numID);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::int64_t balance_of(const Identifier& numID) const {
        const ViewEntry* e = find(numID);
        return e ? e->balance : 0;
    }

    std::int64_t total_balance() const {
        std::int64_t sum = 0;
        for (const auto& [id, e] : entries_) sum += e.balance;
        return sum;
    }

    const std::map<Identifier, ViewEntry>& entries() const { return entries_; }

    /// Applies a finalized block: remittances, fee transfers, and the block
    /// reward (the only minting flow). Evidence transactions additionally
    /// move the misbehavior penalty and blacklist the accused.
    void apply_block(const Block& blk, const PovParams& params,
                     std::size_t committed_height, Blacklist* blacklist = nullptr) {
        if (!(blk.prev == tail_))
            throw InconsistentView("block prev does not match view tail");
        for (const auto& tx : blk.txs) {
            ViewEntry& owner = entry(tx.owner);
            std::uint64_t hops = tx.proof_hops();
            // Validation fee to the first t distinct designated signers; the
            // owner is debited only for fees actually paid out, so transfers
            // stay conservative even for under-signed (audited) artifacts.
            auto designated = tx_designated_validators(tx);
            std::set<Identifier> paid;
            for (const auto& s : tx.sigs) {
                if (paid.size() >= params.t) break;
                if (s.signer_id == tx.owner || !designated.count(s.signer_id)) continue;
                paid.insert(s.signer_id);
            }
            std::int64_t debit = static_cast<std::int64_t>(tx.cont.amount) +
                                 static_cast<std::int64_t>(params.validation_fee) *
                                     static_cast<std::int64_t>(paid.size()) +
                                 static_cast<std::int64_t>(params.routing_fee) * hops;
            if (!tx.cont.evidence && owner.balance < debit)
                throw InvalidBlock("debit below zero; correctness check missed it");
            owner.balance -= debit;
            owner.state += 1;
            owner.lastblk = blk.h;
            entry(tx.cont.recipient).balance += static_cast<std::int64_t>(tx.cont.amount);
            for (const auto& v : paid)
                entry(v).balance += static_cast<std::int64_t>(params.validation_fee);
            // Routing fee per hop, in the favor of every peer on the paths.
            for (const auto& p : tx.search_proofs)
                for (const auto& hop : p.hops)
                    entry(hop.peer).balance += static_cast<std::int64_t>(params.routing_fee);
            if (tx.cont.evidence) {
                entry(tx.cont.evidence->accused).balance -=
                    static_cast<std::int64_t>(params.misbehavior_penalty);
                entry(tx.owner).balance += static_cast<std::int64_t>(params.misbehavior_penalty);
                if (blacklist) blacklist->add(tx.cont.evidence->accused, committed_height);
            }
        }
        entry(blk.owner).balance += static_cast<std::int64_t>(params.block_reward);
        tail_ = blk.h;
    }

    Identifier digest(unsigned width_s) const {
        Encoder enc;
        for (const auto& [id, e] : entries_) {
            enc.field(e.numID).field(e.lastblk);
            enc.field_u64(e.state);
            enc.field_u64(static_cast<std::uint64_t>(e.balance));
        }
        enc.field(tail_);
        return enc.hash(width_s);
    }

    /// One entry per line: numID lastblk state balance.
    std::string export_text() const {
        std::ostringstream os;
        for (const auto& [id, e] : entries_)
            os << e.numID.hex() << ' ' << e.lastblk.hex() << ' ' << e.state << ' '
               << e.balance << '\n';
        return os.str();
    }

private:
    ViewEntry& entry(const Identifier& numID) {
        auto it = entries_.find(numID);
        if (it != entries_.end()) return it->second;
        ViewEntry e;
        e.numID = numID;
        e.lastblk = Identifier::zero(numID.width());
        auto [nit, ok] = entries_.emplace(numID, e);
        return nit->second;
    }

    std::map<Identifier, ViewEntry> entries_;
    Identifier tail_;
};

inline Identifier view_introducer_id(const Identifier& new_peer_numID, unsigned i,
                                     unsigned width_s) {
    if (i < 1) throw InvalidParameter("introducer index starts at 1");
    Encoder enc;
    enc.field(new_peer_numID).field_u32(i);
    return enc.hash(width_s);
}

struct IntroducedView {
    Identifier tail;
    Identifier digest;
    ViewTable table;
};

/// Randomized bootstrapping: iterate hash-derived introducer identifiers,
/// fetch each designated peer's view, and adopt the first view seen from t
/// byte-consistent (tail, digest) responses.
inline ViewTable bootstrap(
    const Overlay& overlay, const Identifier& new_peer_numID, unsigned t,
    unsigned max_introducers,
    const std::function<std::optional<IntroducedView>(const Identifier&)>& fetch,
    unsigned width_s) {
    std::map<std::pair<Identifier, Identifier>, std::pair<unsigned, ViewTable>> tally;
    for (unsigned i = 1; i <= max_introducers; ++i) {
        Identifier intro_id = view_introducer_id(new_peer_numID, i, width_s);
        auto res = overlay.search_num_id(new_peer_numID, intro_id, NodeKind::peer);
        auto view = fetch(res.node.numID);
        if (!view) continue;  // unresponsive introducer: move to the next index
        auto key = std::make_pair(view->tail, view->digest);
        auto& slot = tally[key];
        slot.first += 1;
        slot.second = std::move(view->table);
        if (slot.first >= t) return slot.second;
    }
    throw BootstrapUnavailable("no t consistent views within the introducer cap");
}

/// Rebuilds a view by replaying the main path from genesis up to (and
/// including) the block at `upto_height`.
inline ViewTable replay_from_genesis(const LedgerStore& store, const PovParams& params,
                                     const std::vector<Identifier>& peers,
                                     std::int64_t endowment, std::size_t upto_height,
                                     unsigned width_s, Blacklist* blacklist = nullptr) {
    ViewTable view(width_s, peers, endowment, store.genesis());
    const auto& path = store.main_path();
    for (std::size_t h = 1; h <= upto_height && h < path.size(); ++h)
        view.apply_block(*store.find(path[h]), params, h, blacklist);
    return view;
}

}  // namespace lightchain
