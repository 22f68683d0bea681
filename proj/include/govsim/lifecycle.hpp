// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <optional>
#include <set>

#include <govsim/keys.hpp>
#include <govsim/ledger.hpp>

namespace govsim {

// ---------------------------------------------------------------------------
// forking

// Candidate blocks used to compare two rule sets: transfer blocks of every
// size up to twice the larger block limit, plus one block per non-transfer
// payload kind. Purely structural, never sealed.
inline std::vector<block> probe_universe(const chain &c, const protocol_rules &a, const protocol_rules &b)
{
    static const keypair probe_id = keypair::from_seed("probe");
    const auto dummy_tx = [&](uint64_t nonce, tx_payload payload) {
        return make_transaction(probe_id.owner, nonce, std::move(payload));
    };
    const auto base_block = [&]() {
        block blk;
        blk.height = c.tip().height + 1;
        blk.parent_hash = c.tip().hash;
        blk.validator = probe_id.owner;
        blk.shard = c.shard;
        return blk;
    };

    std::vector<block> probes;
    const uint32_t limit = 2 * std::max(a.max_block_txs, b.max_block_txs);
    for (uint32_t n = 0; n <= limit; ++n) {
        auto blk = base_block();
        for (uint32_t i = 0; i < n; ++i)
            blk.txs.push_back(dummy_tx(i, transfer_payload { probe_id.owner, token_amount::from_base(1) }));
        probes.push_back(std::move(blk));
    }
    const std::vector<tx_payload> kinds {
        burn_payload { token_amount::from_base(1) },
        lock_payload { token_amount::from_base(1), lock_purpose::vote_deposit, std::nullopt },
        contract_call_payload { probe_id.owner, "probe", {} },
        vote_action_payload { 0, "probe", {}, {}, {} },
        governance_action_payload { "probe", {} },
    };
    for (const auto &p: kinds) {
        auto blk = base_block();
        blk.txs.push_back(dummy_tx(0, p));
        probes.push_back(std::move(blk));
    }
    return probes;
}

// A rule change may ride on the existing chain only if it never widens what
// counts as valid: every probe block the new rules admit, the old rules must
// admit too. Widening splits the network and demands a hard fork instead.
inline bool backward_compatible(const chain &c, const protocol_rules &old_rules, const protocol_rules &new_rules)
{
    for (const auto &p: probe_universe(c, old_rules, new_rules)) {
        const bool new_ok = validate_block(p, c.state, new_rules).ok;
        if (new_ok && !validate_block(p, c.state, old_rules).ok)
            return false;
    }
    return true;
}

inline void apply_soft_fork(
    chain &c, const protocol_rules &new_rules, double adoption, double majority = 0.5)
{
    rule_set(new_rules.validity_predicate);
    if (adoption < majority)
        throw error { errc::insufficient_adoption,
            std::to_string(adoption) + " of validators adopted, " + std::to_string(majority) + " required" };
    if (!backward_compatible(c, c.rules, new_rules))
        throw error { errc::not_backward_compatible, "rule change widens block validity" };
    c.rules = new_rules;
}

// Splits off a new instance that keeps blocks up to `at_height` and restarts
// under the new rules. Blocks above the cut exist only on the old instance;
// the old instance itself is never touched.
inline chain apply_hard_fork(const chain &c, uint64_t at_height, const protocol_rules &new_rules)
{
    rule_set(new_rules.validity_predicate);
    if (at_height > c.height())
        throw error { errc::height_beyond_tip,
            "fork at " + std::to_string(at_height) + ", tip is " + std::to_string(c.height()) };
    chain forked;
    forked.shard = c.shard;
    forked.rules = new_rules;
    forked.genesis_alloc = c.genesis_alloc;
    forked.blocks.assign(c.blocks.begin(), c.blocks.begin() + static_cast<ptrdiff_t>(at_height) + 1);
    forked.state = state_from_alloc(forked.genesis_alloc);
    for (size_t i = 1; i < forked.blocks.size(); ++i) {
        const auto &b = forked.blocks[i];
        const apply_context ctx { false, nullptr, b.height, &forked.events };
        for (const auto &tx: b.txs)
            apply_transaction(forked.state, tx, ctx);
    }
    return forked;
}

// ---------------------------------------------------------------------------
// social contract: an off-ledger pledge that a coordinated hold of tokens
// backs a published set of norms. The threshold grows linearly with each
// amendment.

struct social_contract {
    uint64_t base_tokens = 60'102'216;
    uint64_t factor_permille = 1'198; // initial multiplier, in thousandths
    uint64_t step_permille = 260;     // added per amendment, in thousandths
    std::string published_tag {};
};

// base_tokens * (factor + step * n) / 1000 tokens; with 1000 base units per
// token the division cancels and the result is exact in base units.
inline token_amount social_contract_threshold(const social_contract &sc, uint64_t amendments)
{
    static_assert(token_amount::base_per_token == 1'000);
    uint64_t permille = 0;
    if (__builtin_mul_overflow(sc.step_permille, amendments, &permille)
        || __builtin_add_overflow(permille, sc.factor_permille, &permille))
        throw error { errc::overflow, "amendment count " + std::to_string(amendments) };
    uint64_t base = 0;
    if (__builtin_mul_overflow(sc.base_tokens, permille, &base))
        throw error { errc::overflow, "amendment count " + std::to_string(amendments) };
    return token_amount::from_base(base);
}

inline bool social_contract_met(const social_contract &sc, uint64_t amendments, const token_amount &committed)
{
    return social_contract_threshold(sc, amendments) <= committed;
}

// ---------------------------------------------------------------------------
// maintainer succession: while the founding team is active nothing changes;
// once it steps back the smallest candidate address takes over, and with no
// candidates the project is terminated.

struct maintainer_state {
    bool team_active = true;
    std::set<address> candidates {};
    std::optional<address> maintainer {};
    bool terminated = false;
};

inline void select_maintainer(maintainer_state &ms)
{
    if (ms.team_active)
        throw error { errc::team_still_active, "the founding team has not stepped back" };
    if (ms.candidates.empty()) {
        ms.maintainer.reset();
        ms.terminated = true;
        return;
    }
    ms.maintainer = *ms.candidates.begin();
    ms.terminated = false;
}

} // namespace govsim
