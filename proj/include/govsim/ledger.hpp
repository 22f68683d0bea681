// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include <govsim/common.hpp>
#include <govsim/hash.hpp>
#include <govsim/keys.hpp>
#include <govsim/token.hpp>

namespace govsim {

using attr_list = std::vector<std::pair<std::string, std::string>>;

// ---------------------------------------------------------------------------
// transaction payloads

struct transfer_payload {
    address to {};
    token_amount amount {};
};

// Explicit burn of spendable tokens: the only conservation exception besides
// burning a lock record.
struct burn_payload {
    token_amount amount {};
};

enum class lock_purpose { masternode, vote_deposit, penalty };

inline const char *lock_purpose_name(lock_purpose p)
{
    switch (p) {
    case lock_purpose::masternode: return "masternode";
    case lock_purpose::vote_deposit: return "vote-deposit";
    case lock_purpose::penalty: return "penalty";
    }
    return "?";
}

struct lock_payload {
    token_amount amount {};
    lock_purpose purpose = lock_purpose::vote_deposit;
    std::optional<uint64_t> unlock_at {}; // nullopt = never
};

// Resolves an active lock record of the sender: release returns the tokens
// to the spendable column once unlockable, burn destroys them.
struct lock_resolve_payload {
    uint64_t record = 0;
    bool burn = false;
};

struct contract_call_payload {
    address contract {};
    std::string method {};
    attr_list args {};
};

// Money movement of a vote: cost is debited to the proposal pool at cast
// time, refund returns a replaced cast's earlier cost.
struct vote_action_payload {
    uint64_t proposal = 0;
    std::string kind {};
    attr_list attrs {};
    token_amount cost {};
    token_amount refund {};
};

struct governance_action_payload {
    std::string kind {};
    attr_list attrs {};
};

// Two-phase cross-shard machinery. Debit escrows on the source shard;
// credit mints on the target; receipt retires the escrowed amount on the
// source; refund compensates an aborted transfer.
struct xshard_debit_payload {
    address to {};
    token_amount amount {};
    uint32_t target_shard = 0;
    address escrow {};
};

struct xshard_credit_payload {
    address to {};
    token_amount amount {};
    uint32_t source_shard = 0;
    bytes32 origin {};
};

struct xshard_receipt_payload {
    token_amount amount {};
    bytes32 origin {};
};

struct xshard_refund_payload {
    address to {};
    token_amount amount {};
    bytes32 origin {};
};

using tx_payload = std::variant<
    transfer_payload,
    burn_payload,
    lock_payload,
    lock_resolve_payload,
    contract_call_payload,
    vote_action_payload,
    governance_action_payload,
    xshard_debit_payload,
    xshard_credit_payload,
    xshard_receipt_payload,
    xshard_refund_payload>;

inline const char *payload_kind(const tx_payload &p)
{
    struct visitor {
        const char *operator()(const transfer_payload &) { return "transfer"; }
        const char *operator()(const burn_payload &) { return "burn"; }
        const char *operator()(const lock_payload &) { return "lock"; }
        const char *operator()(const lock_resolve_payload &) { return "lock-resolve"; }
        const char *operator()(const contract_call_payload &) { return "contract-call"; }
        const char *operator()(const vote_action_payload &) { return "vote-action"; }
        const char *operator()(const governance_action_payload &) { return "governance-action"; }
        const char *operator()(const xshard_debit_payload &) { return "xshard-debit"; }
        const char *operator()(const xshard_credit_payload &) { return "xshard-credit"; }
        const char *operator()(const xshard_receipt_payload &) { return "xshard-receipt"; }
        const char *operator()(const xshard_refund_payload &) { return "xshard-refund"; }
    };
    return std::visit(visitor {}, p);
}

inline void write_attrs(byte_writer &w, const attr_list &attrs)
{
    w.u64(attrs.size());
    for (const auto &[k, v]: attrs) {
        w.str(k);
        w.str(v);
    }
}

inline void write_payload(byte_writer &w, const tx_payload &p)
{
    struct visitor {
        byte_writer &w;
        void operator()(const transfer_payload &t)
        {
            w.u8(0);
            w.raw(t.to.id);
            w.u64(t.amount.base);
        }
        void operator()(const burn_payload &b)
        {
            w.u8(1);
            w.u64(b.amount.base);
        }
        void operator()(const lock_payload &l)
        {
            w.u8(2);
            w.u64(l.amount.base);
            w.u8(static_cast<uint8_t>(l.purpose));
            w.u8(l.unlock_at ? 1 : 0);
            w.u64(l.unlock_at.value_or(0));
        }
        void operator()(const lock_resolve_payload &l)
        {
            w.u8(10);
            w.u64(l.record);
            w.u8(l.burn ? 1 : 0);
        }
        void operator()(const contract_call_payload &c)
        {
            w.u8(3);
            w.raw(c.contract.id);
            w.str(c.method);
            write_attrs(w, c.args);
        }
        void operator()(const vote_action_payload &v)
        {
            w.u8(4);
            w.u64(v.proposal);
            w.str(v.kind);
            write_attrs(w, v.attrs);
            w.u64(v.cost.base);
            w.u64(v.refund.base);
        }
        void operator()(const governance_action_payload &g)
        {
            w.u8(5);
            w.str(g.kind);
            write_attrs(w, g.attrs);
        }
        void operator()(const xshard_debit_payload &x)
        {
            w.u8(6);
            w.raw(x.to.id);
            w.u64(x.amount.base);
            w.u32(x.target_shard);
            w.raw(x.escrow.id);
        }
        void operator()(const xshard_credit_payload &x)
        {
            w.u8(7);
            w.raw(x.to.id);
            w.u64(x.amount.base);
            w.u32(x.source_shard);
            w.raw(x.origin);
        }
        void operator()(const xshard_receipt_payload &x)
        {
            w.u8(8);
            w.u64(x.amount.base);
            w.raw(x.origin);
        }
        void operator()(const xshard_refund_payload &x)
        {
            w.u8(9);
            w.raw(x.to.id);
            w.u64(x.amount.base);
            w.raw(x.origin);
        }
    };
    std::visit(visitor { w }, p);
}

inline attr_list read_attrs(byte_reader &r)
{
    const uint64_t n = r.u64();
    if (n > 1'000'000)
        throw error { errc::syntax_error, "implausible attribute count" };
    attr_list out;
    out.reserve(n);
    for (uint64_t i = 0; i < n; ++i) {
        auto k = r.str();
        auto v = r.str();
        out.emplace_back(std::move(k), std::move(v));
    }
    return out;
}

inline tx_payload read_payload(byte_reader &r)
{
    switch (r.u8()) {
    case 0: {
        transfer_payload p;
        p.to.id = r.b32();
        p.amount = token_amount::from_base(r.u64());
        return p;
    }
    case 1:
        return burn_payload { token_amount::from_base(r.u64()) };
    case 2: {
        lock_payload p;
        p.amount = token_amount::from_base(r.u64());
        const auto purpose = r.u8();
        if (purpose > 2)
            throw error { errc::syntax_error, "bad lock purpose" };
        p.purpose = static_cast<lock_purpose>(purpose);
        const bool has_unlock = r.u8() != 0;
        const auto unlock = r.u64();
        if (has_unlock)
            p.unlock_at = unlock;
        return p;
    }
    case 3: {
        contract_call_payload p;
        p.contract.id = r.b32();
        p.method = r.str();
        p.args = read_attrs(r);
        return p;
    }
    case 4: {
        vote_action_payload p;
        p.proposal = r.u64();
        p.kind = r.str();
        p.attrs = read_attrs(r);
        p.cost = token_amount::from_base(r.u64());
        p.refund = token_amount::from_base(r.u64());
        return p;
    }
    case 5: {
        governance_action_payload p;
        p.kind = r.str();
        p.attrs = read_attrs(r);
        return p;
    }
    case 6: {
        xshard_debit_payload p;
        p.to.id = r.b32();
        p.amount = token_amount::from_base(r.u64());
        p.target_shard = r.u32();
        p.escrow.id = r.b32();
        return p;
    }
    case 7: {
        xshard_credit_payload p;
        p.to.id = r.b32();
        p.amount = token_amount::from_base(r.u64());
        p.source_shard = r.u32();
        p.origin = r.b32();
        return p;
    }
    case 8: {
        xshard_receipt_payload p;
        p.amount = token_amount::from_base(r.u64());
        p.origin = r.b32();
        return p;
    }
    case 9: {
        xshard_refund_payload p;
        p.to.id = r.b32();
        p.amount = token_amount::from_base(r.u64());
        p.origin = r.b32();
        return p;
    }
    case 10: {
        lock_resolve_payload p;
        p.record = r.u64();
        p.burn = r.u8() != 0;
        return p;
    }
    default:
        throw error { errc::syntax_error, "bad payload tag" };
    }
}

// ---------------------------------------------------------------------------
// transactions and blocks

struct transaction {
    address sender {};
    uint64_t nonce = 0;
    tx_payload payload { transfer_payload {} };
    signature sig {};
    bytes32 id {};
};

inline bytes32 tx_content_digest(const address &sender, uint64_t nonce, const tx_payload &payload)
{
    byte_writer w;
    w.str("govsim.tx");
    w.raw(sender.id);
    w.u64(nonce);
    write_payload(w, payload);
    return sha256(w);
}

inline transaction make_transaction(const address &sender, uint64_t nonce, tx_payload payload)
{
    transaction tx;
    tx.sender = sender;
    tx.nonce = nonce;
    tx.payload = std::move(payload);
    tx.id = tx_content_digest(tx.sender, tx.nonce, tx.payload);
    return tx;
}

// Wire form, id and signature included. The encoding is positional and
// injective: equal transactions encode to equal bytes and vice versa, so a
// mutated byte never decodes back to the original transaction.
inline bytes encode_transaction(const transaction &tx)
{
    byte_writer w;
    w.raw(tx.sender.id);
    w.u64(tx.nonce);
    write_payload(w, tx.payload);
    w.str(tx.sig.scheme_id);
    w.blob(tx.sig.sig);
    w.raw(tx.id);
    return std::move(w.buf);
}

inline transaction decode_transaction(std::span<const uint8_t> data)
{
    byte_reader r { data };
    transaction tx;
    tx.sender.id = r.b32();
    tx.nonce = r.u64();
    tx.payload = read_payload(r);
    tx.sig.scheme_id = r.str();
    tx.sig.sig = r.blob();
    tx.id = r.b32();
    if (!r.done())
        throw error { errc::syntax_error, "trailing bytes after transaction" };
    return tx;
}

struct block {
    uint64_t height = 0;
    bytes32 parent_hash {};
    std::vector<transaction> txs {};
    address validator {};
    uint32_t shard = 0;
    bytes32 hash {};
};

inline bytes32 block_digest(const block &b)
{
    byte_writer w;
    w.str("govsim.block");
    w.u64(b.height);
    w.raw(b.parent_hash);
    w.raw(b.validator.id);
    w.u32(b.shard);
    w.u64(b.txs.size());
    for (const auto &tx: b.txs) {
        w.raw(tx.id);
        w.str(tx.sig.scheme_id);
        w.blob(tx.sig.sig);
    }
    return sha256(w);
}

// ---------------------------------------------------------------------------
// protocol rules

struct world_state;

// A rule set returns the id of the first violated rule, or nullopt when the
// block complies. Pure over (block, state).
using rule_fn = std::function<std::optional<std::string>(const block &, const world_state &)>;

inline const std::map<std::string, rule_fn> &rule_catalog()
{
    static const std::map<std::string, rule_fn> catalog {
        { "standard",
          [](const block &, const world_state &) -> std::optional<std::string> { return std::nullopt; } },
        { "nonempty",
          [](const block &b, const world_state &) -> std::optional<std::string> {
              if (b.txs.empty())
                  return "NonEmpty";
              return std::nullopt;
          } },
        { "transfers-only",
          [](const block &b, const world_state &) -> std::optional<std::string> {
              for (const auto &tx: b.txs) {
                  if (!std::holds_alternative<transfer_payload>(tx.payload))
                      return "TransfersOnly";
              }
              return std::nullopt;
          } },
    };
    return catalog;
}

inline const rule_fn &rule_set(const std::string &name)
{
    const auto &catalog = rule_catalog();
    const auto it = catalog.find(name);
    if (it == catalog.end())
        throw error { errc::rule_violation, "unregistered rule set: " + name };
    return it->second;
}

struct protocol_rules {
    uint32_t version = 1;
    uint32_t max_block_txs = 10;
    std::string validity_predicate = "standard";

    bool operator==(const protocol_rules &) const = default;
};

// ---------------------------------------------------------------------------
// world state

struct lock_record {
    enum class state_t { active, released, burned };

    uint64_t id = 0;
    address owner {};
    token_amount amount {};
    lock_purpose purpose = lock_purpose::vote_deposit;
    uint64_t locked_at = 0;
    std::optional<uint64_t> unlock_at {}; // nullopt = never
    state_t status = state_t::active;
};

struct account {
    address addr {};
    token_amount spendable {};
    token_amount locked {};
    uint64_t nonce = 0;

    token_amount holding() const
    {
        return spendable + locked;
    }

    bool operator==(const account &) const = default;
};

struct world_state {
    std::map<address, account> accounts {};
    std::vector<lock_record> locks {};
    token_amount total_supply {};

    account &get_or_create(const address &a)
    {
        const auto it = accounts.find(a);
        if (it != accounts.end())
            return it->second;
        return accounts.emplace(a, account { a, {}, {}, 0 }).first->second;
    }

    const account *find(const address &a) const
    {
        const auto it = accounts.find(a);
        return it == accounts.end() ? nullptr : &it->second;
    }

    token_amount spendable_of(const address &a) const
    {
        const auto *acct = find(a);
        return acct ? acct->spendable : token_amount {};
    }

    token_amount holding_of(const address &a) const
    {
        const auto *acct = find(a);
        return acct ? acct->holding() : token_amount {};
    }

    // Sum of every account's spendable+locked; equals total_supply whenever
    // the state was produced by the engine.
    token_amount balance_sum() const
    {
        token_amount sum {};
        for (const auto &[addr, acct]: accounts)
            sum += acct.holding();
        return sum;
    }

    bytes32 digest() const
    {
        byte_writer w;
        w.str("govsim.state");
        w.u64(total_supply.base);
        w.u64(accounts.size());
        for (const auto &[addr, acct]: accounts) {
            w.raw(addr.id);
            w.u64(acct.spendable.base);
            w.u64(acct.locked.base);
            w.u64(acct.nonce);
        }
        w.u64(locks.size());
        for (const auto &l: locks) {
            w.u64(l.id);
            w.raw(l.owner.id);
            w.u64(l.amount.base);
            w.u8(static_cast<uint8_t>(l.purpose));
            w.u64(l.locked_at);
            w.u8(l.unlock_at ? 1 : 0);
            w.u64(l.unlock_at.value_or(0));
            w.u8(static_cast<uint8_t>(l.status));
        }
        return sha256(w);
    }

    bool operator==(const world_state &) const = default;
};

inline bool operator==(const lock_record &a, const lock_record &b)
{
    return a.id == b.id && a.owner == b.owner && a.amount == b.amount && a.purpose == b.purpose
        && a.locked_at == b.locked_at && a.unlock_at == b.unlock_at && a.status == b.status;
}

// ---------------------------------------------------------------------------
// events (emitted only while transactions are applied inside a seal)

struct event {
    uint64_t block_height = 0;
    bytes32 tx_id {};
    std::string kind {};
    attr_list attributes {};

    bool operator==(const event &) const = default;
};

// ---------------------------------------------------------------------------
// applying transactions

struct apply_context {
    bool network_frozen = false;
    const std::set<address> *frozen_contracts = nullptr;
    uint64_t height = 0;
    std::vector<event> *events = nullptr;
};

namespace detail {
    inline void emit(const apply_context &ctx, const transaction &tx, std::string kind, attr_list attrs)
    {
        if (ctx.events != nullptr)
            ctx.events->push_back(event { ctx.height, tx.id, std::move(kind), std::move(attrs) });
    }
} // namespace detail

// Moves `amount` of the owner's spendable tokens into the locked column and
// registers the record. Penalty locks can never be released, only burned.
inline uint64_t apply_lock(world_state &st, const address &owner, token_amount amount, lock_purpose purpose,
    std::optional<uint64_t> unlock_at, uint64_t at_height)
{
    if (amount.is_zero())
        throw error { errc::zero_amount, "cannot lock zero tokens" };
    auto &acct = st.get_or_create(owner);
    if (acct.spendable < amount)
        throw error { errc::insufficient_spendable,
            "lock of " + amount.str() + " exceeds spendable " + acct.spendable.str() };
    if (purpose == lock_purpose::penalty)
        unlock_at.reset();
    acct.spendable -= amount;
    acct.locked += amount;
    const uint64_t id = st.locks.size();
    st.locks.push_back(lock_record { id, owner, amount, purpose, at_height, unlock_at, lock_record::state_t::active });
    return id;
}

enum class lock_action { release, burn };

inline void apply_release_or_burn(world_state &st, uint64_t record_id, lock_action action, uint64_t at_height)
{
    if (record_id >= st.locks.size())
        throw error { errc::syntax_error, "unknown lock record " + std::to_string(record_id) };
    auto &rec = st.locks[record_id];
    if (rec.status != lock_record::state_t::active)
        throw error { errc::already_resolved, "lock record " + std::to_string(record_id) };
    auto &acct = st.get_or_create(rec.owner);
    if (action == lock_action::release) {
        if (rec.purpose == lock_purpose::penalty || !rec.unlock_at.has_value() || at_height < *rec.unlock_at)
            throw error { errc::not_yet_unlockable, "lock record " + std::to_string(record_id) };
        acct.locked -= rec.amount;
        acct.spendable += rec.amount;
        rec.status = lock_record::state_t::released;
    } else {
        acct.locked -= rec.amount;
        st.total_supply -= rec.amount;
        rec.status = lock_record::state_t::burned;
    }
}

// Fixed system account that holds tokens consumed by vote casts.
inline const address &proposal_pool_address()
{
    static const address a = address_of(sha256(std::string { "govsim.proposal-pool" }));
    return a;
}

inline void apply_transaction(world_state &st, const transaction &tx, const apply_context &ctx)
{
    if (ctx.network_frozen)
        throw error { errc::frozen, "network is frozen" };
    auto &sender = st.get_or_create(tx.sender);
    if (tx.nonce != sender.nonce)
        throw error { errc::nonce_mismatch,
            "expected nonce " + std::to_string(sender.nonce) + ", got " + std::to_string(tx.nonce) };

    struct visitor {
        world_state &st;
        const transaction &tx;
        const apply_context &ctx;
        account &sender;

        void debit_sender(const token_amount &amount)
        {
            if (sender.spendable < amount)
                throw error { errc::insufficient_spendable,
                    amount.str() + " needed, " + sender.spendable.str() + " spendable" };
            sender.spendable -= amount;
        }

        void operator()(const transfer_payload &t)
        {
            debit_sender(t.amount);
            st.get_or_create(t.to).spendable += t.amount;
            detail::emit(ctx, tx, "Transfer",
                { { "from", tx.sender.hex() }, { "to", t.to.hex() }, { "amount", t.amount.str() } });
        }

        void operator()(const burn_payload &b)
        {
            debit_sender(b.amount);
            st.total_supply -= b.amount;
            detail::emit(ctx, tx, "Burn", { { "owner", tx.sender.hex() }, { "amount", b.amount.str() } });
        }

        void operator()(const lock_payload &l)
        {
            apply_lock(st, tx.sender, l.amount, l.purpose, l.unlock_at, ctx.height);
            detail::emit(ctx, tx, "Lock",
                { { "owner", tx.sender.hex() }, { "amount", l.amount.str() },
                    { "purpose", lock_purpose_name(l.purpose) } });
        }

        void operator()(const lock_resolve_payload &l)
        {
            if (l.record >= st.locks.size() || st.locks[l.record].owner != tx.sender)
                throw error { errc::not_privileged,
                    "lock record " + std::to_string(l.record) + " is not the sender's" };
            apply_release_or_burn(st, l.record, l.burn ? lock_action::burn : lock_action::release, ctx.height);
            const auto &rec = st.locks[l.record];
            detail::emit(ctx, tx, "LockResolve",
                { { "record", std::to_string(l.record) }, { "owner", rec.owner.hex() },
                    { "amount", rec.amount.str() }, { "action", l.burn ? "burn" : "release" } });
        }

        void operator()(const contract_call_payload &c)
        {
            if (ctx.frozen_contracts != nullptr && ctx.frozen_contracts->contains(c.contract))
                throw error { errc::frozen, "contract " + c.contract.hex() + " is frozen" };
            detail::emit(ctx, tx, c.method, c.args);
        }

        void operator()(const vote_action_payload &v)
        {
            debit_sender(v.cost);
            auto &pool = st.get_or_create(proposal_pool_address());
            pool.spendable += v.cost;
            if (!v.refund.is_zero()) {
                if (pool.spendable < v.refund)
                    throw error { errc::insufficient_spendable, "proposal pool cannot cover refund" };
                pool.spendable -= v.refund;
                sender.spendable += v.refund;
            }
            detail::emit(ctx, tx, "Vote", v.attrs);
        }

        void operator()(const governance_action_payload &g)
        {
            attr_list attrs { { "action", g.kind } };
            attrs.insert(attrs.end(), g.attrs.begin(), g.attrs.end());
            detail::emit(ctx, tx, "Governance", attrs);
        }

        void operator()(const xshard_debit_payload &x)
        {
            debit_sender(x.amount);
            st.get_or_create(x.escrow).spendable += x.amount;
            detail::emit(ctx, tx, "XShardDebit",
                { { "from", tx.sender.hex() }, { "to", x.to.hex() }, { "amount", x.amount.str() },
                    { "target_shard", std::to_string(x.target_shard) } });
        }

        void operator()(const xshard_credit_payload &x)
        {
            st.get_or_create(x.to).spendable += x.amount;
            st.total_supply += x.amount;
            detail::emit(ctx, tx, "XShardCredit",
                { { "to", x.to.hex() }, { "amount", x.amount.str() },
                    { "source_shard", std::to_string(x.source_shard) } });
        }

        void operator()(const xshard_receipt_payload &x)
        {
            debit_sender(x.amount);
            st.total_supply -= x.amount;
            detail::emit(ctx, tx, "XShardReceipt",
                { { "escrow", tx.sender.hex() }, { "amount", x.amount.str() } });
        }

        void operator()(const xshard_refund_payload &x)
        {
            debit_sender(x.amount);
            st.get_or_create(x.to).spendable += x.amount;
            detail::emit(ctx, tx, "XShardRefund", { { "to", x.to.hex() }, { "amount", x.amount.str() } });
        }
    };
    std::visit(visitor { st, tx, ctx, sender }, tx.payload);
    sender.nonce += 1;
}

// ---------------------------------------------------------------------------
// chains

struct chain {
    uint32_t shard = 0;
    std::vector<block> blocks {};
    world_state state {};
    protocol_rules rules {};
    bool frozen = false; // mirrors the controls module's network freeze
    std::vector<event> events {};
    std::map<address, token_amount> genesis_alloc {};

    uint64_t height() const
    {
        return blocks.back().height;
    }

    const block &tip() const
    {
        return blocks.back();
    }
};

inline world_state state_from_alloc(const std::map<address, token_amount> &alloc)
{
    world_state st;
    for (const auto &[addr, amount]: alloc) {
        st.get_or_create(addr).spendable = amount;
        st.total_supply += amount;
    }
    return st;
}

inline block make_genesis_block(uint32_t shard, const std::map<address, token_amount> &alloc)
{
    block g;
    g.height = 0;
    g.shard = shard;
    byte_writer w;
    w.str("govsim.genesis");
    w.u32(shard);
    w.u64(alloc.size());
    for (const auto &[addr, amount]: alloc) {
        w.raw(addr.id);
        w.u64(amount.base);
    }
    g.hash = sha256(w);
    return g;
}

inline chain make_chain(uint32_t shard, std::map<address, token_amount> alloc, protocol_rules rules = {})
{
    rule_set(rules.validity_predicate); // reject unregistered rule sets up front
    chain c;
    c.shard = shard;
    c.rules = std::move(rules);
    c.genesis_alloc = std::move(alloc);
    c.state = state_from_alloc(c.genesis_alloc);
    c.blocks.push_back(make_genesis_block(shard, c.genesis_alloc));
    return c;
}

struct block_validity {
    bool ok = true;
    std::string reason {};
};

// Pure validity of a block under exactly the supplied rules; invalid is a
// value, not an error.
inline block_validity validate_block(const block &b, const world_state &st, const protocol_rules &rules)
{
    if (b.height > 0 && b.validator.is_zero())
        return { false, "EmptyValidator" };
    if (b.txs.size() > rules.max_block_txs)
        return { false, "MaxTxs" };
    if (const auto violated = rule_set(rules.validity_predicate)(b, st); violated.has_value())
        return { false, *violated };
    return {};
}

inline const block &seal_block(chain &c, std::vector<transaction> txs, const address &validator,
    const std::set<address> *frozen_contracts = nullptr)
{
    if (c.frozen)
        throw error { errc::frozen, "chain is frozen" };
    if (validator.is_zero())
        throw error { errc::empty_validator, "validator address is zero" };
    block b;
    b.height = c.tip().height + 1;
    b.parent_hash = c.tip().hash;
    b.txs = std::move(txs);
    b.validator = validator;
    b.shard = c.shard;
    if (const auto v = validate_block(b, c.state, c.rules); !v.ok)
        throw error { errc::rule_violation, v.reason };

    // apply on a copy so a failing transaction leaves the chain untouched
    auto next = c.state;
    std::vector<event> emitted;
    const apply_context ctx { false, frozen_contracts, b.height, &emitted };
    for (const auto &tx: b.txs)
        apply_transaction(next, tx, ctx);

    b.hash = block_digest(b);
    c.state = std::move(next);
    c.events.insert(c.events.end(), emitted.begin(), emitted.end());
    c.blocks.push_back(std::move(b));
    return c.blocks.back();
}

struct replay_result {
    world_state state {};
    std::vector<event> events {};
};

// Rebuilds state and events from genesis. The result must be byte-identical
// to the live chain (replay determinism).
inline replay_result replay(const chain &c)
{
    replay_result r;
    r.state = state_from_alloc(c.genesis_alloc);
    for (size_t i = 1; i < c.blocks.size(); ++i) {
        const auto &b = c.blocks[i];
        const apply_context ctx { false, nullptr, b.height, &r.events };
        for (const auto &tx: b.txs)
            apply_transaction(r.state, tx, ctx);
    }
    return r;
}

} // namespace govsim
