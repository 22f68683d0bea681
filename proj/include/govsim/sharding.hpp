// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <map>
#include <set>
#include <vector>

#include <govsim/admission.hpp>
#include <govsim/controls.hpp>
#include <govsim/ledger.hpp>
#include <govsim/rng.hpp>

namespace govsim {

// Home shard of an address: the address id is already a digest, so its first
// eight bytes are a uniform value.
inline uint32_t home_shard(const address &a, uint32_t shard_count)
{
    if (shard_count == 0)
        throw error { errc::zero_shards, "shard count must be positive" };
    uint64_t v = 0;
    for (size_t i = 0; i < 8; ++i)
        v |= static_cast<uint64_t>(a.id[i]) << (8 * i);
    return static_cast<uint32_t>(v % shard_count);
}

struct coordinator_entry {
    uint32_t shard = 0;
    uint64_t height = 0;
    bytes32 block_hash {};

    bool operator==(const coordinator_entry &) const = default;
};

struct coordinator_chain {
    std::vector<coordinator_entry> headers {};
    std::set<uint32_t> takeover_flagged {};
};

struct cross_shard_transfer {
    enum class status_t { pending, settled, aborted };

    bytes32 origin {}; // id of the debit transaction
    uint32_t source = 0;
    uint32_t target = 0;
    address from {};
    address to {};
    token_amount amount {};
    status_t status = status_t::pending;
};

struct shard_set {
    uint32_t count = 0;
    std::vector<chain> shards {};
    std::vector<std::vector<address>> validators {};
    std::vector<uint32_t> understaffed {};
    std::vector<keypair> escrow {}; // one system identity per shard
    keypair fallback_validator {};
    coordinator_chain coordinator {};
    std::map<bytes32, cross_shard_transfer> transfers {};

    token_amount global_supply() const
    {
        token_amount sum {};
        for (const auto &c: shards)
            sum += c.state.total_supply;
        return sum;
    }

    token_amount global_balance_sum() const
    {
        token_amount sum {};
        for (const auto &c: shards)
            sum += c.state.balance_sum();
        return sum;
    }
};

// Validators are shuffled once and dealt round-robin, so shard sizes differ
// by at most one. Accounts are funded on their home shard only.
inline shard_set init_shards(uint32_t shard_count, const std::vector<address> &validators,
    const std::map<address, token_amount> &alloc, protocol_rules rules, deterministic_rng &rng)
{
    if (shard_count == 0)
        throw error { errc::zero_shards, "cannot split the network into zero shards" };
    if (validators.empty())
        throw error { errc::no_validators, "at least one validator is required" };

    shard_set ss;
    ss.count = shard_count;
    ss.validators.resize(shard_count);
    auto deck = validators;
    rng.shuffle(deck);
    for (size_t i = 0; i < deck.size(); ++i)
        ss.validators[i % shard_count].push_back(deck[i]);
    for (uint32_t s = 0; s < shard_count; ++s) {
        if (ss.validators[s].empty())
            ss.understaffed.push_back(s);
    }

    std::vector<std::map<address, token_amount>> shard_alloc(shard_count);
    for (const auto &[addr, amount]: alloc)
        shard_alloc[home_shard(addr, shard_count)].emplace(addr, amount);

    for (uint32_t s = 0; s < shard_count; ++s) {
        ss.shards.push_back(make_chain(s, std::move(shard_alloc[s]), rules));
        ss.escrow.push_back(keypair::from_seed("escrow:" + std::to_string(s)));
        ss.coordinator.headers.push_back(
            coordinator_entry { s, 0, ss.shards[s].blocks.front().hash });
    }
    ss.fallback_validator = keypair::from_seed("system-validator");
    return ss;
}

inline const address &escrow_address(const shard_set &ss, uint32_t shard)
{
    if (shard >= ss.count)
        throw error { errc::unknown_shard, "shard " + std::to_string(shard) };
    return ss.escrow[shard].owner;
}

// Round-robin rotation over the shard's validators; understaffed shards fall
// back to the system identity.
inline address shard_validator(const shard_set &ss, uint32_t shard, uint64_t height)
{
    if (shard >= ss.count)
        throw error { errc::unknown_shard, "shard " + std::to_string(shard) };
    const auto &vals = ss.validators[shard];
    if (vals.empty())
        return ss.fallback_validator.owner;
    return vals[(height - 1) % vals.size()];
}

struct route_decision {
    uint32_t source = 0;
    uint32_t target = 0;
    bool cross = false;
};

// Decides the shard a transaction executes on; transfers to a foreign home
// shard are flagged for the two-phase path. A hint overrides the computed
// source shard for senders whose funds migrated.
inline route_decision route_transaction(
    const shard_set &ss, const transaction &tx, std::optional<uint32_t> source_hint = std::nullopt)
{
    if (source_hint && *source_hint >= ss.count)
        throw error { errc::unknown_shard, "shard " + std::to_string(*source_hint) };
    route_decision d;
    d.source = source_hint ? *source_hint : home_shard(tx.sender, ss.count);
    d.target = d.source;
    if (const auto *t = std::get_if<transfer_payload>(&tx.payload); t != nullptr) {
        d.target = home_shard(t->to, ss.count);
        d.cross = d.target != d.source;
    }
    return d;
}

inline transaction make_cross_shard_debit(
    const shard_set &ss, const address &sender, uint64_t nonce, const address &to, token_amount amount, uint32_t source)
{
    if (source >= ss.count)
        throw error { errc::unknown_shard, "shard " + std::to_string(source) };
    const uint32_t target = home_shard(to, ss.count);
    return make_transaction(
        sender, nonce, xshard_debit_payload { to, amount, target, escrow_address(ss, source) });
}

// Seals a block on one shard and records its header with the coordinator.
// Any cross-shard debit inside the block opens a pending transfer.
inline const block &seal_shard_block(
    shard_set &ss, uint32_t shard, std::vector<transaction> txs, const freeze_state *fs = nullptr)
{
    if (shard >= ss.count)
        throw error { errc::unknown_shard, "shard " + std::to_string(shard) };
    if (fs != nullptr && (fs->network_frozen() || fs->shard_frozen(shard)))
        throw error { errc::frozen, "shard " + std::to_string(shard) + " is frozen" };
    auto &c = ss.shards[shard];
    std::set<address> frozen_contracts;
    if (fs != nullptr)
        frozen_contracts = fs->frozen_contract_set();
    const auto &b = seal_block(c, std::move(txs), shard_validator(ss, shard, c.height() + 1), &frozen_contracts);
    ss.coordinator.headers.push_back(coordinator_entry { shard, b.height, b.hash });
    for (const auto &tx: b.txs) {
        if (const auto *d = std::get_if<xshard_debit_payload>(&tx.payload); d != nullptr) {
            ss.transfers.emplace(tx.id,
                cross_shard_transfer { tx.id, shard, d->target_shard, tx.sender, d->to, d->amount,
                    cross_shard_transfer::status_t::pending });
        }
    }
    return b;
}

namespace detail {
    // System transactions still pass admission before sealing, so the pool
    // soundness invariant holds for protocol-internal blocks too.
    inline void seal_system_tx(shard_set &ss, uint32_t shard, const keypair &signer, tx_payload payload,
        const freeze_state *fs)
    {
        auto &c = ss.shards[shard];
        const auto *acct = c.state.find(signer.owner);
        auto tx = make_transaction(signer.owner, acct ? acct->nonce : 0, std::move(payload));
        tx = sign_transaction(tx, signer);
        tx_pool transient;
        const key_registry keys { { signer.owner, signer.public_key } };
        if (const auto v = filter_and_admit(tx, filter_policy {}, keys, transient); !v.admitted)
            throw error { errc::rule_violation, "system tx rejected: " + v.reason };
        seal_shard_block(ss, shard, transient.take(1), fs);
    }
} // namespace detail

// Completes a pending transfer: a credit block on the target shard, then a
// receipt block on the source retiring the escrowed amount. The two shard
// supplies change in opposite directions by the same amount.
inline void settle_cross_shard(shard_set &ss, const bytes32 &origin, const freeze_state *fs = nullptr)
{
    const auto it = ss.transfers.find(origin);
    if (it == ss.transfers.end())
        throw error { errc::syntax_error, "unknown cross-shard transfer " + hex_encode(origin) };
    auto &xfer = it->second;
    if (xfer.status != cross_shard_transfer::status_t::pending)
        throw error { errc::already_settled, "transfer " + hex_encode(origin) };
    detail::seal_system_tx(ss, xfer.target, ss.escrow[xfer.target],
        xshard_credit_payload { xfer.to, xfer.amount, xfer.source, origin }, fs);
    detail::seal_system_tx(ss, xfer.source, ss.escrow[xfer.source],
        xshard_receipt_payload { xfer.amount, origin }, fs);
    xfer.status = cross_shard_transfer::status_t::settled;
}

// Returns the escrowed amount to the original sender on the source shard.
inline void abort_cross_shard(shard_set &ss, const bytes32 &origin, const freeze_state *fs = nullptr)
{
    const auto it = ss.transfers.find(origin);
    if (it == ss.transfers.end())
        throw error { errc::syntax_error, "unknown cross-shard transfer " + hex_encode(origin) };
    auto &xfer = it->second;
    if (xfer.status != cross_shard_transfer::status_t::pending)
        throw error { errc::already_settled, "transfer " + hex_encode(origin) };
    detail::seal_system_tx(ss, xfer.source, ss.escrow[xfer.source],
        xshard_refund_payload { xfer.from, xfer.amount, origin }, fs);
    xfer.status = cross_shard_transfer::status_t::aborted;
}

// A shard is flagged once strictly more than num/denom of its validators are
// malicious. With the 2/3 default, a small global minority that lands
// concentrated in one shard still trips the flag there.
inline void flag_takeovers(shard_set &ss, const std::set<address> &malicious, uint32_t num = 2, uint32_t denom = 3)
{
    for (uint32_t s = 0; s < ss.count; ++s) {
        const auto &vals = ss.validators[s];
        if (vals.empty())
            continue;
        size_t bad = 0;
        for (const auto &v: vals) {
            if (malicious.contains(v))
                ++bad;
        }
        if (bad * denom > static_cast<size_t>(num) * vals.size())
            ss.coordinator.takeover_flagged.insert(s);
    }
}

} // namespace govsim
