// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <deque>
#include <map>
#include <set>
#include <variant>

#include <govsim/keys.hpp>
#include <govsim/ledger.hpp>

namespace govsim {

inline transaction sign_transaction(transaction tx, const keypair &kp, const std::string &scheme = "sim-mac-v1")
{
    if (kp.owner != tx.sender)
        throw error { errc::sender_key_mismatch, "key owner does not match tx sender" };
    tx.sig = sign_digest(kp, tx.id, scheme);
    return tx;
}

// Recomputes the content digest instead of trusting the stored id, so a
// mutation anywhere in the transaction (id and signature bytes included)
// flips the verdict.
inline bool verify_transaction(const transaction &tx, const bytes32 &public_key)
{
    if (tx.sig.sig.empty())
        return false;
    if (tx_content_digest(tx.sender, tx.nonce, tx.payload) != tx.id)
        return false;
    try {
        return verify_digest(public_key, tx.id, tx.sig);
    } catch (const error &) {
        return false; // unknown scheme id is just a bad signature here
    }
}

// ---------------------------------------------------------------------------
// admission policy

// One content rule: a named predicate over the whole transaction. Rules run
// in policy order and the first failure decides the rejection reason.
struct content_rule {
    std::string id {};
    std::function<bool(const transaction &)> admits {};
};

struct filter_policy {
    bool require_signature = true;
    // payload kinds admitted at all; empty = every kind
    std::set<std::string> allowed_kinds {};
    // senders allowed to submit; empty = everyone
    std::set<address> authorized_senders {};
    std::vector<content_rule> content_rules {};
};

struct admission_verdict {
    bool admitted = true;
    std::string reason {}; // first failing check or rule id

    static admission_verdict reject(std::string why)
    {
        return { false, std::move(why) };
    }
};

// ---------------------------------------------------------------------------
// pending pool

struct tx_pool {
    static constexpr size_t default_capacity = 10'000;

    size_t capacity = default_capacity;
    std::deque<transaction> pending {};
    std::set<bytes32> ids {};

    bool contains(const bytes32 &id) const
    {
        return ids.contains(id);
    }

    void push(transaction tx)
    {
        if (pending.size() >= capacity)
            throw error { errc::pool_full, "pending pool holds " + std::to_string(pending.size()) };
        ids.insert(tx.id);
        pending.push_back(std::move(tx));
    }

    // FIFO drain of up to `max_count` transactions.
    std::vector<transaction> take(size_t max_count)
    {
        std::vector<transaction> out;
        while (!pending.empty() && out.size() < max_count) {
            ids.erase(pending.front().id);
            out.push_back(std::move(pending.front()));
            pending.pop_front();
        }
        return out;
    }

    size_t size() const
    {
        return pending.size();
    }
};

// Registry of announced public keys; admission verifies against these, never
// against key material carried by the transaction itself.
using key_registry = std::map<address, bytes32>;

inline admission_verdict check_admission(
    const transaction &tx, const filter_policy &policy, const key_registry &keys, const tx_pool &pool)
{
    if (policy.require_signature) {
        if (tx.sig.sig.empty())
            return admission_verdict::reject("Unsigned");
        const auto key = keys.find(tx.sender);
        if (key == keys.end() || !verify_transaction(tx, key->second))
            return admission_verdict::reject("BadSignature");
    }
    if (!policy.authorized_senders.empty() && !policy.authorized_senders.contains(tx.sender))
        return admission_verdict::reject("Unauthorized");
    if (!policy.allowed_kinds.empty() && !policy.allowed_kinds.contains(payload_kind(tx.payload)))
        return admission_verdict::reject("Kind");
    for (const auto &rule: policy.content_rules) {
        if (!rule.admits(tx))
            return admission_verdict::reject(rule.id);
    }
    if (pool.contains(tx.id))
        return admission_verdict::reject("Duplicate");
    return {};
}

// Admits into the pool on success; the rejection reason otherwise. PoolFull
// still escapes as an error: it is a capacity fault, not a policy verdict.
inline admission_verdict filter_and_admit(
    transaction tx, const filter_policy &policy, const key_registry &keys, tx_pool &pool)
{
    auto verdict = check_admission(tx, policy, keys, pool);
    if (verdict.admitted)
        pool.push(std::move(tx));
    return verdict;
}

} // namespace govsim
