// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <set>

#include <govsim/ledger.hpp>

namespace govsim {

// ---------------------------------------------------------------------------
// token locking (records live in world_state; these are the pattern-level ops)

inline uint64_t lock_tokens(world_state &st, const address &owner, token_amount amount, lock_purpose purpose,
    std::optional<uint64_t> unlock_at, uint64_t at_height)
{
    return apply_lock(st, owner, amount, purpose, unlock_at, at_height);
}

inline void release_lock(world_state &st, uint64_t record_id, uint64_t at_height)
{
    apply_release_or_burn(st, record_id, lock_action::release, at_height);
}

inline void burn_lock(world_state &st, uint64_t record_id, uint64_t at_height)
{
    apply_release_or_burn(st, record_id, lock_action::burn, at_height);
}

inline token_amount locked_for_purpose(const world_state &st, const address &owner, lock_purpose purpose)
{
    token_amount sum {};
    for (const auto &rec: st.locks) {
        if (rec.owner == owner && rec.purpose == purpose && rec.status == lock_record::state_t::active)
            sum += rec.amount;
    }
    return sum;
}

inline constexpr uint64_t default_masternode_threshold_tokens = 1'000;

inline bool masternode_eligible(
    const world_state &st, const address &owner, uint64_t threshold_tokens = default_masternode_threshold_tokens)
{
    return locked_for_purpose(st, owner, lock_purpose::masternode)
        >= token_amount::from_tokens(threshold_tokens);
}

// ---------------------------------------------------------------------------
// scam list

// Append-only journal: delisting appends a tombstone entry, it never erases
// the listing it cancels.
struct scam_entry {
    enum class kind_t { listed, delisted };

    kind_t kind = kind_t::listed;
    address subject {};
    std::string note {};
    uint64_t at_height = 0;
};

struct scam_list {
    std::vector<scam_entry> entries {};

    void list(const address &subject, std::string note, uint64_t at_height)
    {
        entries.push_back(scam_entry { scam_entry::kind_t::listed, subject, std::move(note), at_height });
    }

    void delist(const address &subject, std::string note, uint64_t at_height)
    {
        entries.push_back(scam_entry { scam_entry::kind_t::delisted, subject, std::move(note), at_height });
    }

    // Listed iff the latest entry for the subject is a listing.
    bool is_listed(const address &subject) const
    {
        bool listed = false;
        for (const auto &e: entries) {
            if (e.subject == subject)
                listed = e.kind == scam_entry::kind_t::listed;
        }
        return listed;
    }

    std::set<address> listed_now() const
    {
        std::set<address> out;
        for (const auto &e: entries) {
            if (e.kind == scam_entry::kind_t::listed)
                out.insert(e.subject);
            else
                out.erase(e.subject);
        }
        return out;
    }
};

// Undirected association graph between addresses that have moved tokens.
using transfer_graph = std::map<address, std::set<address>>;

inline void add_transfer_edge(transfer_graph &g, const address &a, const address &b)
{
    if (a == b)
        return;
    g[a].insert(b);
    g[b].insert(a);
}

// Builds the association graph from emitted Transfer events. Cross-shard
// moves connect sender and final recipient through the same mechanism: the
// debit event carries both endpoints.
inline transfer_graph transfer_graph_from_events(const std::vector<event> &events)
{
    transfer_graph g;
    for (const auto &e: events) {
        if (e.kind != "Transfer" && e.kind != "XShardDebit")
            continue;
        std::optional<address> from, to;
        for (const auto &[k, v]: e.attributes) {
            if (k == "from")
                from = address::from_hex(v);
            else if (k == "to")
                to = address::from_hex(v);
        }
        if (from && to)
            add_transfer_edge(g, *from, *to);
    }
    return g;
}

// Guilt by association, halving per hop away from the currently listed set:
// listed addresses score 1, a neighbour 0.5, two hops 0.25, and anything
// below 0.01 (seven or more hops) flattens to 0. Every reachable value is a
// negative power of two, exact in a double.
inline double taint_score(const scam_list &list, const transfer_graph &graph, const address &subject)
{
    const auto listed = list.listed_now();
    if (listed.contains(subject))
        return 1.0;
    if (listed.empty())
        return 0.0;
    std::map<address, unsigned> dist;
    std::deque<address> frontier;
    for (const auto &a: listed) {
        dist[a] = 0;
        frontier.push_back(a);
    }
    while (!frontier.empty()) {
        const address cur = frontier.front();
        frontier.pop_front();
        const unsigned d = dist[cur];
        if (d >= 6)
            continue; // neighbours would sit 7+ hops out and score 0 anyway
        const auto it = graph.find(cur);
        if (it == graph.end())
            continue;
        for (const auto &next: it->second) {
            if (dist.contains(next))
                continue;
            dist[next] = d + 1;
            if (next == subject)
                return std::ldexp(1.0, -static_cast<int>(d + 1));
            frontier.push_back(next);
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// freezing

struct freeze_record {
    address by {};
    uint64_t at_height = 0;
    std::string reason {};
};

struct freeze_state {
    std::optional<freeze_record> network {};
    std::map<address, freeze_record> contracts {};
    std::map<uint32_t, freeze_record> shards {};

    bool network_frozen() const
    {
        return network.has_value();
    }

    bool contract_frozen(const address &a) const
    {
        return contracts.contains(a);
    }

    bool shard_frozen(uint32_t shard) const
    {
        return shards.contains(shard);
    }

    std::set<address> frozen_contract_set() const
    {
        std::set<address> out;
        for (const auto &[a, rec]: contracts)
            out.insert(a);
        return out;
    }
};

// Only addresses in `privileged` may flip freeze state.
inline void require_privileged(const std::set<address> &privileged, const address &who)
{
    if (!privileged.contains(who))
        throw error { errc::not_privileged, who.hex() + " may not freeze or thaw" };
}

inline void freeze_network(
    freeze_state &fs, const std::set<address> &privileged, const address &who, uint64_t at_height, std::string reason)
{
    require_privileged(privileged, who);
    fs.network = freeze_record { who, at_height, std::move(reason) };
}

inline void unfreeze_network(freeze_state &fs, const std::set<address> &privileged, const address &who)
{
    require_privileged(privileged, who);
    fs.network.reset();
}

inline void freeze_contract(freeze_state &fs, const std::set<address> &privileged, const address &who,
    const address &contract, uint64_t at_height, std::string reason)
{
    require_privileged(privileged, who);
    fs.contracts.insert_or_assign(contract, freeze_record { who, at_height, std::move(reason) });
}

inline void unfreeze_contract(
    freeze_state &fs, const std::set<address> &privileged, const address &who, const address &contract)
{
    require_privileged(privileged, who);
    fs.contracts.erase(contract);
}

inline void freeze_shard(freeze_state &fs, const std::set<address> &privileged, const address &who, uint32_t shard,
    uint64_t at_height, std::string reason)
{
    require_privileged(privileged, who);
    fs.shards.insert_or_assign(shard, freeze_record { who, at_height, std::move(reason) });
}

inline void unfreeze_shard(freeze_state &fs, const std::set<address> &privileged, const address &who, uint32_t shard)
{
    require_privileged(privileged, who);
    fs.shards.erase(shard);
}

} // namespace govsim
