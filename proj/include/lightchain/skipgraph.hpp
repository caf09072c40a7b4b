// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lightchain/crypto.hpp"
#include "lightchain/encoding.hpp"
#include "lightchain/identifier.hpp"

namespace lightchain {

enum class NodeKind : std::uint8_t { peer, transaction, block, pointer };

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::peer: return "peer";
        case NodeKind::transaction: return "transaction";
        case NodeKind::block: return "block";
        case NodeKind::pointer: return "pointer";
    }
    return "?";
}

struct OverlayNode {
    Identifier numID;
    Identifier nameID;
    NodeKind kind = NodeKind::peer;
    Identifier host_peer;  // the peer answering for this node
    bool online = true;
};

struct SearchHop {
    Identifier peer;  // host peer that forwarded the query
    Signature sig;    // over (target, previous-hop numID, this numID)
};

struct SearchProof {
    Identifier target;
    std::vector<SearchHop> hops;
    Identifier result;  // numID of the last hop's peer

    Bytes encode() const {
        Encoder enc;
        enc.field(target);
        enc.field_u32(static_cast<std::uint32_t>(hops.size()));
        for (const auto& h : hops) {
            enc.field(h.peer);
            enc.field(h.sig.bytes);
            enc.field(h.sig.signer_id);
        }
        enc.field(result);
        return enc.bytes();
    }
};

inline Bytes hop_message(const Identifier& target, const Identifier& prev,
                         const Identifier& self) {
    Encoder enc;
    enc.field(target).field(prev).field(self);
    return enc.bytes();
}

inline bool verify_search_proof(const SearchProof& proof, const KeyDirectory& keys) {
    if (proof.hops.empty()) return false;
    for (std::size_t i = 0; i < proof.hops.size(); ++i) {
        const Identifier& prev = i == 0 ? proof.hops[0].peer : proof.hops[i - 1].peer;
        const SearchHop& hop = proof.hops[i];
        if (!(hop.sig.signer_id == hop.peer)) return false;
        Bytes msg = hop_message(proof.target, prev, hop.peer);
        if (!keys.verify(hop.peer, msg, hop.sig.bytes)) return false;
    }
    return proof.result == proof.hops.back().peer;
}

class MessageLedger {
public:
    void count(const std::string& phase, std::uint64_t n) { counters_[phase] += n; }
    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& [k, v] : counters_) sum += v;
        return sum;
    }
    const std::map<std::string, std::uint64_t>& counters() const { return counters_; }

private:
    std::map<std::string, std::uint64_t> counters_;
};

class DuplicateNode : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class OverlayEmpty : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Skip Graph overlay holding peer, transaction, block, and pointer nodes.
// Levels are induced by nameID bits acting as the membership vector (the
// level-l group of a node is keyed by the l low-order bits of its nameID).
// Routing is simulated faithfully at the hop level; every hop increments the
// message ledger. Churn repair is idealized: offline nodes are skipped
// atomically by routing.
class Overlay {
public:
    static constexpr unsigned kMaxLevel = 24;

    explicit Overlay(unsigned width_s, const KeyDirectory* keys, double routing_c = 4.0)
        : width_(width_s), keys_(keys), routing_c_(routing_c) {}

    unsigned width() const { return width_; }
    MessageLedger& ledger() { return ledger_; }
    const MessageLedger& ledger() const { return ledger_; }
    void set_phase(std::string phase) { phase_ = std::move(phase); }

    std::size_t online_count(NodeKind kind) const {
        return index_of(kind).level0_size();
    }

    void join(const OverlayNode& node) {
        GroupKey key{node.kind, node.numID, node.nameID};
        auto it = groups_.find(key);
        if (it != groups_.end()) {
            Group& g = *it->second;
            if (g.replicas.count(node.host_peer))
                throw DuplicateNode("duplicate (kind, numID, host) node");
            bool was_online = g.online > 0;
            g.replicas[node.host_peer] = node.online;
            hosted_[node.host_peer].insert(&g);
            if (node.online) ++g.online;
            if (!was_online && g.online > 0) index_insert(g);
        } else {
            auto g = std::make_unique<Group>();
            g->kind = node.kind;
            g->numID = node.numID;
            g->nameID = node.nameID;
            g->replicas[node.host_peer] = node.online;
            g->online = node.online ? 1 : 0;
            hosted_[node.host_peer].insert(g.get());
            if (g->online > 0) index_insert(*g);
            groups_.emplace(key, std::move(g));
        }
        // Simulated Skip Graph join cost: O(log n * log n) messages.
        std::uint64_t logn = ceil_log2(index_of(node.kind).level0_size() + 1);
        ledger_.count(phase_, logn * logn);
    }

    /// Removes one replica, or the whole node when host is not given. The
    /// nameID disambiguates pointer nodes sharing a numID; when omitted the
    /// first matching node is taken.
    void leave(NodeKind kind, const Identifier& numID,
               std::optional<Identifier> host = std::nullopt,
               std::optional<Identifier> nameID = std::nullopt) {
        auto it = find_group(kind, numID, nameID);
        if (it == groups_.end()) throw NotFound("unknown overlay node");
        Group& g = *it->second;
        bool was_online = g.online > 0;
        if (host) {
            auto rit = g.replicas.find(*host);
            if (rit == g.replicas.end()) throw NotFound("unknown replica host");
            if (rit->second) --g.online;
            g.replicas.erase(rit);
            unhost(*host, &g);
        } else {
            for (const auto& [h, on] : g.replicas) unhost(h, &g);
            g.replicas.clear();
            g.online = 0;
        }
        ledger_.count(phase_, ceil_log2(index_of(kind).level0_size() + 1));
        if (was_online && g.online == 0) index_erase(g);
        if (g.replicas.empty()) groups_.erase(it);
    }

    bool contains(NodeKind kind, const Identifier& numID) const {
        auto it = groups_.lower_bound(GroupKey{kind, numID, Identifier::zero(width_)});
        return it != groups_.end() && std::get<0>(it->first) == kind &&
               std::get<1>(it->first) == numID;
    }

    bool has_replica(NodeKind kind, const Identifier& numID, const Identifier& nameID,
                     const Identifier& host) const {
        auto it = groups_.find(GroupKey{kind, numID, nameID});
        return it != groups_.end() && it->second->replicas.count(host) > 0;
    }

    bool peer_online(const Identifier& peer) const {
        // Peers may carry a nameID different from their numID; match on the
        // (kind, numID) prefix.
        auto it = groups_.lower_bound(GroupKey{NodeKind::peer, peer, Identifier::zero(width_)});
        return it != groups_.end() && std::get<0>(it->first) == NodeKind::peer &&
               std::get<1>(it->first) == peer && it->second->online > 0;
    }

    /// Crash-recover churn: offline replicas retain their data and re-expose
    /// it on recovery.
    void set_online(NodeKind kind, const Identifier& numID, const Identifier& host,
                    bool online, std::optional<Identifier> nameID = std::nullopt) {
        auto it = find_group(kind, numID, nameID);
        if (it == groups_.end()) throw NotFound("unknown overlay node");
        Group& g = *it->second;
        auto rit = g.replicas.find(host);
        if (rit == g.replicas.end()) throw NotFound("unknown replica host");
        if (rit->second == online) return;
        bool was_online = g.online > 0;
        rit->second = online;
        g.online += online ? 1 : -1;
        if (!was_online && g.online > 0) index_insert(g);
        if (was_online && g.online == 0) index_erase(g);
    }

    /// Toggles a peer node and every replica it hosts.
    void set_peer_online(const Identifier& peer, bool online) {
        auto hit = hosted_.find(peer);
        if (hit == hosted_.end()) return;
        for (Group* g : hit->second) {
            auto rit = g->replicas.find(peer);
            if (rit == g->replicas.end() || rit->second == online) continue;
            bool was_online = g->online > 0;
            rit->second = online;
            g->online += online ? 1 : -1;
            if (!was_online && g->online > 0) index_insert(*g);
            if (was_online && g->online == 0) index_erase(*g);
        }
    }

    struct SearchResult {
        OverlayNode node;
        SearchProof proof;
    };

    /// Search for a numerical ID: the node with numID == target if present,
    /// otherwise the online node with the largest numID below it; wraps to
    /// the globally largest numID when the target precedes every node.
    SearchResult search_num_id(const Identifier& origin_peer, const Identifier& target,
                               std::optional<NodeKind> kind_filter) const {
        if (kind_filter) return search_in_index(origin_peer, target, *kind_filter);
        // No filter: probe each kind and keep the best candidate under the
        // same exact-match / largest-below / wrap rule.
        const SearchResult* best = nullptr;
        std::vector<SearchResult> results;
        for (NodeKind k : {NodeKind::peer, NodeKind::transaction, NodeKind::block,
                           NodeKind::pointer}) {
            if (index_of(k).level0_size() == 0) continue;
            results.push_back(search_in_index(origin_peer, target, k));
        }
        if (results.empty()) throw OverlayEmpty("no online node in overlay");
        for (const auto& r : results) {
            if (r.node.numID == target) return r;
        }
        for (const auto& r : results) {
            bool below = r.node.numID < target;
            if (!best) { best = &r; continue; }
            bool best_below = best->node.numID < target;
            if (below != best_below) {
                if (below) best = &r;  // prefer non-wrapped candidates
            } else if (below ? best->node.numID < r.node.numID
                             : best->node.numID < r.node.numID) {
                best = &r;
            }
        }
        return *best;
    }

    /// Search for a name ID: all online nodes whose nameID equals the target
    /// (and pass the filter), each with its own proof.
    std::vector<SearchResult> search_name_id(const Identifier& origin_peer,
                                             const Identifier& target_name,
                                             std::optional<NodeKind> kind_filter) const {
        std::vector<SearchResult> out;
        auto scan = [&](NodeKind k) {
            const Index& idx = index_of(k);
            auto it = idx.by_name.find(target_name);
            if (it == idx.by_name.end()) return;
            for (const Identifier& numID : it->second) {
                const Group& g = *groups_.at(GroupKey{k, numID, target_name});
                out.push_back(make_result(origin_peer, target_name, g));
            }
        };
        if (kind_filter) {
            scan(*kind_filter);
        } else {
            for (NodeKind k : {NodeKind::peer, NodeKind::transaction, NodeKind::block,
                               NodeKind::pointer})
                scan(k);
        }
        std::size_t n = kind_filter ? index_of(*kind_filter).level0_size() : total_online();
        ledger_.count(phase_, ceil_log2(n + 1) + out.size());
        return out;
    }

    std::vector<Identifier> online_peers() const {
        std::vector<Identifier> out;
        const Index& idx = index_of(NodeKind::peer);
        auto it = idx.levels[0].find(0);
        if (it == idx.levels[0].end()) return out;
        for (const auto& [key, g] : it->second) out.push_back(key.first);
        return out;
    }

    double max_hops(std::size_t n) const {
        return routing_c_ * std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
    }

    /// Line-oriented snapshot: kind numID nameID host online, one per replica.
    std::string dump_text() const {
        std::ostringstream os;
        for (const auto& [key, g] : groups_) {
            for (const auto& [host, online] : g->replicas) {
                os << to_string(g->kind) << ' ' << g->numID.hex() << ' ' << g->nameID.hex()
                   << ' ' << host.hex() << ' ' << (online ? 1 : 0) << '\n';
            }
        }
        return os.str();
    }

    static Overlay restore_text(const std::string& snapshot, unsigned width_s,
                                const KeyDirectory* keys) {
        Overlay ov(width_s, keys);
        std::istringstream is(snapshot);
        std::string kind, num, name, host;
        int online;
        while (is >> kind >> num >> name >> host >> online) {
            OverlayNode node;
            node.numID = Identifier::from_hex(width_s, num);
            node.nameID = Identifier::from_hex(width_s, name);
            node.host_peer = Identifier::from_hex(width_s, host);
            node.online = online != 0;
            if (kind == "peer") node.kind = NodeKind::peer;
            else if (kind == "transaction") node.kind = NodeKind::transaction;
            else if (kind == "block") node.kind = NodeKind::block;
            else if (kind == "pointer") node.kind = NodeKind::pointer;
            else throw InvalidParameter("bad node kind in snapshot: " + kind);
            ov.join(node);
        }
        return ov;
    }

private:
    struct Group {
        NodeKind kind;
        Identifier numID;
        Identifier nameID;
        std::map<Identifier, bool> replicas;  // host -> online
        int online = 0;

        Identifier answering_host() const {
            for (const auto& [host, on] : replicas)
                if (on) return host;
            throw OverlayEmpty("no online replica");
        }
    };

    using GroupKey = std::tuple<NodeKind, Identifier, Identifier>;  // kind, numID, nameID
    using RingKey = std::pair<Identifier, Identifier>;               // numID, nameID

    struct Index {
        // levels[l] maps the l-bit membership prefix to the ordered group
        // ring at that level. Level 0 holds everything under prefix 0.
        std::array<std::map<std::uint64_t, std::map<RingKey, Group*>>, kMaxLevel + 1>
            levels;
        std::map<Identifier, std::set<Identifier>> by_name;

        std::size_t level0_size() const {
            auto it = levels[0].find(0);
            return it == levels[0].end() ? 0 : it->second.size();
        }
    };

    static std::uint64_t ceil_log2(std::size_t n) {
        std::uint64_t bits = 0;
        while ((std::size_t{1} << bits) < n) ++bits;
        return bits;
    }

    std::uint64_t prefix_key(const Identifier& nameID, unsigned level) const {
        if (level == 0) return 0;
        // Low-order nameID bits so that membership groups interleave.
        std::uint64_t low = 0;
        auto b = nameID.bytes();
        for (std::size_t i = b.size() >= 8 ? b.size() - 8 : 0; i < b.size(); ++i)
            low = (low << 8) | b[i];
        return low & ((std::uint64_t{1} << level) - 1);
    }

    Index& index_of(NodeKind k) { return indexes_[static_cast<std::size_t>(k)]; }
    const Index& index_of(NodeKind k) const { return indexes_[static_cast<std::size_t>(k)]; }

    unsigned top_level() const { return kMaxLevel; }

    void index_insert(Group& g) {
        Index& idx = index_of(g.kind);
        for (unsigned l = 0; l <= top_level(); ++l)
            idx.levels[l][prefix_key(g.nameID, l)].emplace(RingKey{g.numID, g.nameID}, &g);
        idx.by_name[g.nameID].insert(g.numID);
    }

    void index_erase(Group& g) {
        Index& idx = index_of(g.kind);
        for (unsigned l = 0; l <= top_level(); ++l) {
            auto key = prefix_key(g.nameID, l);
            auto it = idx.levels[l].find(key);
            it->second.erase(RingKey{g.numID, g.nameID});
            if (it->second.empty()) idx.levels[l].erase(it);
        }
        auto nit = idx.by_name.find(g.nameID);
        nit->second.erase(g.numID);
        if (nit->second.empty()) idx.by_name.erase(nit);
    }

    std::map<GroupKey, std::unique_ptr<Group>>::iterator find_group(
        NodeKind kind, const Identifier& numID, std::optional<Identifier> nameID) {
        if (nameID) return groups_.find(GroupKey{kind, numID, *nameID});
        auto it = groups_.lower_bound(GroupKey{kind, numID, Identifier::zero(width_)});
        if (it != groups_.end() && std::get<0>(it->first) == kind &&
            std::get<1>(it->first) == numID)
            return it;
        return groups_.end();
    }

    void unhost(const Identifier& host, Group* g) {
        auto it = hosted_.find(host);
        if (it == hosted_.end()) return;
        it->second.erase(g);
        if (it->second.empty()) hosted_.erase(it);
    }

    std::size_t total_online() const {
        std::size_t n = 0;
        for (const auto& idx : indexes_) n += idx.level0_size();
        return n;
    }

    const Group* neighbor(const Index& idx, const Group& cur, unsigned level,
                          bool right) const {
        auto lit = idx.levels[level].find(prefix_key(cur.nameID, level));
        if (lit == idx.levels[level].end()) return nullptr;
        const auto& ring = lit->second;
        auto it = ring.find(RingKey{cur.numID, cur.nameID});
        if (it == ring.end()) return nullptr;
        if (right) {
            ++it;
            return it == ring.end() ? nullptr : it->second;
        }
        if (it == ring.begin()) return nullptr;
        --it;
        return it->second;
    }

    SearchResult search_in_index(const Identifier& origin_peer, const Identifier& target,
                                 NodeKind kind) const {
        const Index& idx = index_of(kind);
        auto l0 = idx.levels[0].find(0);
        if (l0 == idx.levels[0].end() || l0->second.empty())
            throw OverlayEmpty("no online node of requested kind");
        const auto& ring = l0->second;

        SearchProof proof;
        proof.target = target;
        append_hop(proof, origin_peer, origin_peer);

        // Entry point: the index node at or just below the origin's position.
        auto eit = ring.upper_bound(RingKey{origin_peer, max_identifier(width_)});
        const Group* cur = eit == ring.begin() ? std::prev(ring.end())->second
                                               : std::prev(eit)->second;
        Identifier prev_hop = origin_peer;
        auto hop_to = [&](const Group* g) {
            Identifier host = g->answering_host();
            append_hop(proof, prev_hop, host);
            prev_hop = host;
            cur = g;
        };
        if (!(cur->answering_host() == origin_peer)) hop_to(cur);

        while (!(cur->numID == target)) {
            const Group* next = nullptr;
            bool rightward = cur->numID < target;
            for (int l = static_cast<int>(top_level()); l >= 0; --l) {
                const Group* cand = neighbor(idx, *cur, static_cast<unsigned>(l), rightward);
                if (!cand) continue;
                if (rightward ? cand->numID <= target : cand->numID >= target) {
                    next = cand;
                    break;
                }
            }
            if (next) {
                hop_to(next);
                continue;
            }
            if (rightward) break;  // cur is the largest node below target
            // cur is the smallest node above target: settle one step left,
            // or wrap to the global maximum.
            const Group* left = neighbor(idx, *cur, 0, /*right=*/false);
            hop_to(left ? left : std::prev(ring.end())->second);
            break;
        }

        proof.result = proof.hops.back().peer;
        ledger_.count(phase_, proof.hops.size() - 1);

        SearchResult res;
        res.node.numID = cur->numID;
        res.node.nameID = cur->nameID;
        res.node.kind = cur->kind;
        res.node.host_peer = cur->answering_host();
        res.node.online = true;
        res.proof = std::move(proof);
        return res;
    }

    SearchResult make_result(const Identifier& origin_peer, const Identifier& target,
                             const Group& g) const {
        SearchProof proof;
        proof.target = target;
        append_hop(proof, origin_peer, origin_peer);
        Identifier host = g.answering_host();
        if (!(host == origin_peer)) append_hop(proof, origin_peer, host);
        proof.result = proof.hops.back().peer;
        SearchResult res;
        res.node.numID = g.numID;
        res.node.nameID = g.nameID;
        res.node.kind = g.kind;
        res.node.host_peer = host;
        res.node.online = true;
        res.proof = std::move(proof);
        return res;
    }

    void append_hop(SearchProof& proof, const Identifier& prev, const Identifier& self) const {
        const KeyPair* kp = keys_->find(self);
        if (!kp) throw NotFound("no key material for hop peer");
        SearchHop hop;
        hop.peer = self;
        hop.sig = sign(*kp, self, hop_message(proof.target, prev, self));
        proof.hops.push_back(std::move(hop));
    }

    unsigned width_;
    const KeyDirectory* keys_;
    double routing_c_;
    std::map<GroupKey, std::unique_ptr<Group>> groups_;
    std::map<Identifier, std::set<Group*>> hosted_;
    std::array<Index, 4> indexes_;
    mutable MessageLedger ledger_;
    std::string phase_ = "default";
};

}  // namespace lightchain
