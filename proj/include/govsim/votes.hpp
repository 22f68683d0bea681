// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <map>
#include <optional>
#include <set>

#include <govsim/ledger.hpp>

namespace govsim {

enum class vote_choice { accept, reject };

inline const char *vote_choice_name(vote_choice c)
{
    return c == vote_choice::accept ? "accept" : "reject";
}

enum class proposal_status { open, accepted, rejected, vetoed };

inline const char *proposal_status_name(proposal_status s)
{
    switch (s) {
    case proposal_status::open: return "open";
    case proposal_status::accepted: return "accepted";
    case proposal_status::rejected: return "rejected";
    case proposal_status::vetoed: return "vetoed";
    }
    return "?";
}

struct proposal {
    uint64_t id = 0;
    std::string description {};
    std::string mechanism {}; // carbon | quadratic | liquid | crosschain
    proposal_status status = proposal_status::open;
    uint64_t opened_at = 0;
    uint64_t closes_at = 0;
};

// Strictly more accepting weight wins; a nonzero tie is an explicit draw and
// resolves to rejection.
template<typename weight_t>
struct tally_outcome {
    weight_t accept_weight {};
    weight_t reject_weight {};
    bool accepted = false;
    bool tied = false;
};

template<typename weight_t>
tally_outcome<weight_t> decide(weight_t accept_w, weight_t reject_w)
{
    tally_outcome<weight_t> o;
    o.accept_weight = accept_w;
    o.reject_weight = reject_w;
    o.accepted = reject_w < accept_w;
    o.tied = !(accept_w < reject_w) && !(reject_w < accept_w) && !(accept_w < weight_t {})
        && accept_w != weight_t {};
    return o;
}

using carbon_outcome = tally_outcome<token_amount>;
using quadratic_outcome = tally_outcome<uint64_t>;

// ---------------------------------------------------------------------------
// carbonvote: every token held (spendable or locked) is one unit of voice,
// weighed at tally time, so tokens that moved away stop counting.

struct carbonvote_session {
    uint64_t proposal = 0;
    std::map<address, vote_choice> casts {}; // last cast per address wins

    void cast(const address &voter, vote_choice choice)
    {
        casts.insert_or_assign(voter, choice);
    }

    carbon_outcome tally(const world_state &snapshot) const
    {
        token_amount accept_w {}, reject_w {};
        for (const auto &[voter, choice]: casts) {
            const auto weight = snapshot.holding_of(voter);
            if (choice == vote_choice::accept)
                accept_w += weight;
            else
                reject_w += weight;
        }
        return decide(accept_w, reject_w);
    }
};

// ---------------------------------------------------------------------------
// quadratic voting: n votes cost n^2 whole tokens, so the marginal price of
// the n-th vote is 2n-1 and buying voice saturates quickly.

inline uint64_t quadratic_cost_tokens(uint64_t votes)
{
    if (votes != 0 && votes > UINT64_MAX / votes)
        throw error { errc::overflow, "quadratic cost of " + std::to_string(votes) + " votes" };
    return votes * votes;
}

struct quadratic_cast {
    vote_choice choice = vote_choice::accept;
    uint64_t votes = 0;
};

struct quadratic_bill {
    token_amount cost {};   // debited to the proposal pool
    token_amount refund {}; // earlier cast's cost returned on a recast
};

struct quadratic_session {
    uint64_t proposal = 0;
    std::map<address, quadratic_cast> casts {};

    // Price of replacing the voter's current cast with `votes` votes.
    quadratic_bill bill(const address &voter, uint64_t votes) const
    {
        quadratic_bill b;
        b.cost = token_amount::from_tokens(quadratic_cost_tokens(votes));
        if (const auto it = casts.find(voter); it != casts.end())
            b.refund = token_amount::from_tokens(quadratic_cost_tokens(it->second.votes));
        return b;
    }

    void record(const address &voter, vote_choice choice, uint64_t votes)
    {
        casts.insert_or_assign(voter, quadratic_cast { choice, votes });
    }

    quadratic_outcome tally() const
    {
        uint64_t accept_v = 0, reject_v = 0;
        for (const auto &[voter, c]: casts) {
            if (c.choice == vote_choice::accept)
                accept_v += c.votes;
            else
                reject_v += c.votes;
        }
        return decide(accept_v, reject_v);
    }
};

// ---------------------------------------------------------------------------
// quadratic funding match

inline uint128 isqrt_u128(uint128 x)
{
    if (x == 0)
        return 0;
    int bits = 0;
    for (uint128 t = x; t != 0; t >>= 1)
        ++bits;
    uint128 g = uint128(1) << ((bits + 1) / 2);
    for (;;) {
        const uint128 n = (g + x / g) >> 1;
        if (n >= g)
            return g;
        g = n;
    }
}

// Match for one project: the square of the summed square roots of the
// contributions. Roots are taken over base units widened by 10^15 so that a
// single contribution matches to exactly itself; the squared remainders of
// the individual roots are added back and the final narrowing rounds to the
// nearest base unit, which keeps perfect-square profiles exact.
inline token_amount quadratic_funding_match(const std::vector<token_amount> &contributions)
{
    constexpr uint128 scale = 1'000'000'000'000'000ULL; // 10^15
    uint128 root_sum = 0;
    uint128 remainder_sum = 0;
    for (const auto &c: contributions) {
        const uint128 widened = static_cast<uint128>(c.base) * scale;
        const uint128 s = isqrt_u128(widened);
        root_sum += s;
        remainder_sum += widened - s * s;
    }
    if (root_sum != 0 && root_sum > ~uint128(0) / root_sum)
        throw error { errc::overflow, "funding match exceeds representable range" };
    const uint128 squared = root_sum * root_sum;
    if (squared > ~uint128(0) - remainder_sum - scale / 2)
        throw error { errc::overflow, "funding match exceeds representable range" };
    const uint128 matched_base = (squared + remainder_sum + scale / 2) / scale;
    if (matched_base > UINT64_MAX)
        throw error { errc::overflow, "funding match exceeds representable range" };
    return token_amount::from_base(static_cast<uint64_t>(matched_base));
}

// ---------------------------------------------------------------------------
// liquid democracy: at most one outgoing delegation per address, cycles are
// rejected at insertion time, and weight flows along the edges to whoever
// actually cast a vote.

struct delegation_graph {
    std::map<address, address> edges {}; // delegator -> delegate
    std::map<address, vote_choice> direct_votes {};

    void set_delegate(const address &from, const address &to)
    {
        if (from == to)
            throw error { errc::self_delegation, from.hex() };
        // walking from `to` must not lead back to `from`
        address cur = to;
        for (;;) {
            if (cur == from)
                throw error { errc::cycle_detected, from.hex() + " -> " + to.hex() };
            const auto it = edges.find(cur);
            if (it == edges.end())
                break;
            cur = it->second;
        }
        edges.insert_or_assign(from, to);
    }

    void revoke_delegate(const address &from)
    {
        edges.erase(from);
    }

    void cast_direct(const address &voter, vote_choice choice)
    {
        if (edges.contains(voter))
            throw error { errc::delegation_active, voter.hex() + " has delegated its vote" };
        direct_votes.insert_or_assign(voter, choice);
    }
};

struct liquid_outcome {
    carbon_outcome result {};
    uint64_t counted = 0;   // addresses whose weight reached a cast vote
    uint64_t uncounted = 0; // addresses whose terminal delegate stayed silent
    // terminal voter -> total weight that ended up with them
    std::map<address, token_amount> delegate_weight {};
    double max_delegate_share = 0.0;
};

inline liquid_outcome liquid_tally(const delegation_graph &g, const world_state &snapshot)
{
    std::set<address> universe;
    for (const auto &[from, to]: g.edges) {
        universe.insert(from);
        universe.insert(to);
    }
    for (const auto &[voter, choice]: g.direct_votes)
        universe.insert(voter);

    liquid_outcome out;
    token_amount accept_w {}, reject_w {};
    for (const auto &a: universe) {
        address terminal = a;
        for (auto it = g.edges.find(terminal); it != g.edges.end(); it = g.edges.find(terminal))
            terminal = it->second;
        const auto vote = g.direct_votes.find(terminal);
        if (vote == g.direct_votes.end()) {
            out.uncounted += 1;
            continue;
        }
        out.counted += 1;
        const auto weight = snapshot.holding_of(a);
        out.delegate_weight[terminal] += weight;
        if (vote->second == vote_choice::accept)
            accept_w += weight;
        else
            reject_w += weight;
    }
    out.result = decide(accept_w, reject_w);
    const auto total = accept_w + reject_w;
    if (!total.is_zero()) {
        for (const auto &[term, w]: out.delegate_weight) {
            const double share = static_cast<double>(w.base) / static_cast<double>(total.base);
            if (out.max_delegate_share < share)
                out.max_delegate_share = share;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// benevolent dictatorship: the community tallies as usual, but a designated
// maintainer can strike the result down within a bounded window.

struct dictator_policy {
    std::set<address> dictators {};
    uint64_t veto_window = 12; // heights after the proposal closes
};

inline proposal_status dictator_finalize(const dictator_policy &policy, const address &who, bool veto,
    bool community_accepted, uint64_t closed_at, uint64_t at_height)
{
    if (!policy.dictators.contains(who))
        throw error { errc::not_dictator, who.hex() };
    if (at_height >= closed_at + policy.veto_window)
        throw error { errc::veto_window_expired,
            "window closed at height " + std::to_string(closed_at + policy.veto_window) };
    if (veto)
        return proposal_status::vetoed;
    return community_accepted ? proposal_status::accepted : proposal_status::rejected;
}

// ---------------------------------------------------------------------------
// cross-chain voting: the poll runs on a purpose-made foreign ledger and only
// a digest-checked relay message carries the outcome home.

struct relay_message {
    uint64_t proposal = 0;
    token_amount accept_weight {};
    token_amount reject_weight {};
    bool accepted = false;
    bool tied = false;
    bytes32 digest {};
};

inline bytes32 relay_digest(const relay_message &m)
{
    byte_writer w;
    w.str("govsim.relay");
    w.u64(m.proposal);
    w.u64(m.accept_weight.base);
    w.u64(m.reject_weight.base);
    w.u8(m.accepted ? 1 : 0);
    w.u8(m.tied ? 1 : 0);
    return sha256(w);
}

inline relay_message make_relay(uint64_t proposal, const carbon_outcome &o)
{
    relay_message m { proposal, o.accept_weight, o.reject_weight, o.accepted, o.tied, {} };
    m.digest = relay_digest(m);
    return m;
}

inline bool verify_relay(const relay_message &m)
{
    return relay_digest(m) == m.digest;
}

struct crosschain_session {
    uint64_t proposal = 0;
    bool issued = false;
    chain foreign {}; // meaningful once issued
    carbonvote_session poll {};

    void issue(std::map<address, token_amount> alloc)
    {
        foreign = make_chain(0, std::move(alloc));
        issued = true;
    }

    void cast(const address &voter, vote_choice choice)
    {
        if (!issued)
            throw error { errc::tokens_not_issued, "voting tokens were never issued" };
        poll.cast(voter, choice);
    }

    // Tallies on the foreign ledger and returns the sealed relay message.
    relay_message tally_and_relay() const
    {
        if (!issued)
            throw error { errc::tokens_not_issued, "voting tokens were never issued" };
        return make_relay(proposal, poll.tally(foreign.state));
    }
};

// The home chain applies a relayed outcome only after the digest checks out.
inline carbon_outcome accept_relay(const relay_message &m)
{
    if (!verify_relay(m))
        throw error { errc::relay_mismatch, "relay digest does not match its content" };
    carbon_outcome o;
    o.accept_weight = m.accept_weight;
    o.reject_weight = m.reject_weight;
    o.accepted = m.accepted;
    o.tied = m.tied;
    return o;
}

} // namespace govsim
