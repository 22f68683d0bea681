// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <govsim/govsim.hpp>

using namespace govsim;

namespace {

const keypair alice = keypair::from_seed("alice");
const keypair bob = keypair::from_seed("bob");

transaction signed_transfer(uint64_t nonce = 0, uint64_t tokens = 5)
{
    return sign_transaction(
        make_transaction(alice.owner, nonce, transfer_payload { bob.owner, token_amount::from_tokens(tokens) }),
        alice);
}

key_registry both_keys()
{
    return { { alice.owner, alice.public_key }, { bob.owner, bob.public_key } };
}

} // namespace

TEST_CASE("signing binds key owner to sender")
{
    const auto tx = signed_transfer();
    CHECK(verify_transaction(tx, alice.public_key));
    CHECK(!verify_transaction(tx, bob.public_key));

    try {
        sign_transaction(make_transaction(alice.owner, 0, burn_payload { token_amount::from_tokens(1) }), bob);
        FAIL("foreign key must raise");
    } catch (const error &e) {
        CHECK(e.code == errc::sender_key_mismatch);
    }
}

TEST_CASE("verification recomputes the id and rejects every field change")
{
    auto tx = signed_transfer();

    SECTION("missing signature")
    {
        tx.sig = signature {};
        CHECK(!verify_transaction(tx, alice.public_key));
    }
    SECTION("unknown scheme id")
    {
        tx.sig.scheme_id = "no-such-scheme";
        CHECK(!verify_transaction(tx, alice.public_key));
    }
    SECTION("altered nonce")
    {
        tx.nonce += 1;
        CHECK(!verify_transaction(tx, alice.public_key));
    }
    SECTION("altered amount")
    {
        std::get<transfer_payload>(tx.payload).amount += token_amount::from_base(1);
        CHECK(!verify_transaction(tx, alice.public_key));
    }
    SECTION("altered stored id")
    {
        tx.id[0] ^= 0x01;
        CHECK(!verify_transaction(tx, alice.public_key));
    }
    SECTION("altered signature byte")
    {
        tx.sig.sig[7] ^= 0x80;
        CHECK(!verify_transaction(tx, alice.public_key));
    }
}

TEST_CASE("transaction codec round-trips every payload kind")
{
    const std::vector<tx_payload> payloads {
        transfer_payload { bob.owner, token_amount::from_tokens(3) },
        burn_payload { token_amount::from_base(77) },
        lock_payload { token_amount::from_tokens(1'000), lock_purpose::masternode, 42 },
        lock_payload { token_amount::from_tokens(1), lock_purpose::penalty, std::nullopt },
        lock_resolve_payload { 3, true },
        contract_call_payload { bob.owner, "ping", { { "x", "1" }, { "y", "2" } } },
        vote_action_payload { 9, "quadratic", { { "choice", "accept" } }, token_amount::from_tokens(4),
            token_amount::from_tokens(1) },
        governance_action_payload { "tally", { { "detail", "proposal=9" } } },
        xshard_debit_payload { bob.owner, token_amount::from_tokens(2), 3, alice.owner },
        xshard_credit_payload { bob.owner, token_amount::from_tokens(2), 1, bytes32 { 1, 2, 3 } },
        xshard_receipt_payload { token_amount::from_tokens(2), bytes32 { 4, 5 } },
        xshard_refund_payload { alice.owner, token_amount::from_tokens(2), bytes32 { 6 } },
    };
    uint64_t nonce = 0;
    for (const auto &p: payloads) {
        const auto tx = sign_transaction(make_transaction(alice.owner, nonce++, p), alice);
        const auto decoded = decode_transaction(encode_transaction(tx));
        CHECK(decoded.sender == tx.sender);
        CHECK(decoded.nonce == tx.nonce);
        CHECK(decoded.id == tx.id);
        CHECK(decoded.sig == tx.sig);
        CHECK(encode_transaction(decoded) == encode_transaction(tx));
        CHECK(verify_transaction(decoded, alice.public_key));
    }
}

TEST_CASE("no single-byte mutation of the wire form verifies")
{
    deterministic_rng rng { 99 };
    const auto tx = signed_transfer(7, 123);
    const auto wire = encode_transaction(tx);
    for (int i = 0; i < 500; ++i) {
        auto mutated = wire;
        const size_t at = rng.below(mutated.size());
        mutated[at] ^= static_cast<uint8_t>(1 + rng.below(255));
        try {
            const auto decoded = decode_transaction(mutated);
            CHECK(!verify_transaction(decoded, alice.public_key));
        } catch (const error &) {
            // refusing to decode rejects the mutation outright
        }
    }
}

TEST_CASE("admission reports the first failing check")
{
    tx_pool pool;
    const auto keys = both_keys();

    SECTION("unsigned transactions")
    {
        const auto v = filter_and_admit(
            make_transaction(alice.owner, 0, burn_payload { token_amount::from_tokens(1) }), filter_policy {},
            keys, pool);
        CHECK(!v.admitted);
        CHECK(v.reason == "Unsigned");
        CHECK(pool.size() == 0);
    }
    SECTION("tampered signatures")
    {
        auto tx = signed_transfer();
        tx.sig.sig[0] ^= 0xFF;
        const auto v = filter_and_admit(tx, filter_policy {}, keys, pool);
        CHECK(v.reason == "BadSignature");
    }
    SECTION("senders without a registered key")
    {
        const auto carol = keypair::from_seed("carol");
        const auto tx = sign_transaction(
            make_transaction(carol.owner, 0, burn_payload { token_amount::from_tokens(1) }), carol);
        CHECK(filter_and_admit(tx, filter_policy {}, keys, pool).reason == "BadSignature");
    }
    SECTION("unauthorized senders")
    {
        filter_policy policy;
        policy.authorized_senders = { bob.owner };
        CHECK(filter_and_admit(signed_transfer(), policy, keys, pool).reason == "Unauthorized");
    }
    SECTION("payload kinds outside the allow list")
    {
        filter_policy policy;
        policy.allowed_kinds = { "burn" };
        CHECK(filter_and_admit(signed_transfer(), policy, keys, pool).reason == "Kind");
    }
    SECTION("content rules run in policy order")
    {
        filter_policy policy;
        policy.content_rules.push_back(content_rule { "first", [](const transaction &) { return false; } });
        policy.content_rules.push_back(content_rule { "second", [](const transaction &) { return false; } });
        CHECK(filter_and_admit(signed_transfer(), policy, keys, pool).reason == "first");
    }
    SECTION("duplicates by transaction id")
    {
        CHECK(filter_and_admit(signed_transfer(), filter_policy {}, keys, pool).admitted);
        CHECK(filter_and_admit(signed_transfer(), filter_policy {}, keys, pool).reason == "Duplicate");
        CHECK(pool.size() == 1);
    }
}

TEST_CASE("the pool drains in arrival order and respects capacity")
{
    tx_pool pool;
    pool.capacity = 3;
    const auto keys = both_keys();
    for (uint64_t i = 0; i < 3; ++i)
        CHECK(filter_and_admit(signed_transfer(i), filter_policy {}, keys, pool).admitted);
    try {
        filter_and_admit(signed_transfer(3), filter_policy {}, keys, pool);
        FAIL("overflow must raise");
    } catch (const error &e) {
        CHECK(e.code == errc::pool_full);
    }
    const auto drained = pool.take(2);
    REQUIRE(drained.size() == 2);
    CHECK(drained[0].nonce == 0);
    CHECK(drained[1].nonce == 1);
    CHECK(pool.size() == 1);
    CHECK(pool.take(10).size() == 1);
    CHECK(pool.size() == 0);
}
