// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <govsim/govsim.hpp>

using namespace govsim;

namespace {

const keypair alice = keypair::from_seed("alice");
const keypair bob = keypair::from_seed("bob");
const address sealer = keypair::from_seed("sealer").owner;

// Chain with `height` blocks of one signed back-and-forth transfer each.
chain pingpong_chain(uint64_t height)
{
    auto c = make_chain(0,
        { { alice.owner, token_amount::from_tokens(500) }, { bob.owner, token_amount::from_tokens(500) } });
    for (uint64_t h = 1; h <= height; ++h) {
        const auto &from = h % 2 == 1 ? alice : bob;
        const auto &to = h % 2 == 1 ? bob : alice;
        const auto tx = sign_transaction(
            make_transaction(from.owner, c.state.find(from.owner)->nonce, transfer_payload { to.owner, token_amount::from_tokens(1) }),
            from);
        seal_block(c, { tx }, sealer);
    }
    return c;
}

} // namespace

TEST_CASE("amendment thresholds are exact in base units")
{
    const social_contract sc {};

    const auto t0 = social_contract_threshold(sc, 0);
    CHECK(t0.str() == "72002454.768");
    CHECK(t0.base == 72'002'454'768ULL);

    const auto t1 = social_contract_threshold(sc, 1);
    CHECK(t1.str() == "87629030.928");
    CHECK(t1.base == 87'629'030'928ULL);

    // each amendment raises the bar by the same exact step
    const auto step = token_amount::parse("15626576.16");
    for (uint64_t n = 0; n + 1 <= 50; ++n) {
        const auto lo = social_contract_threshold(sc, n);
        const auto hi = social_contract_threshold(sc, n + 1);
        CHECK(hi - lo == step);

        // wide-integer recomputation, no shared code with the implementation
        const uint128 expect = uint128(60'102'216) * (1'198 + 260 * uint128(n));
        CHECK(uint128(lo.base) == expect);
    }

    SECTION("meeting the bar is inclusive")
    {
        CHECK(social_contract_met(sc, 0, t0));
        CHECK(!social_contract_met(sc, 0, t0 - token_amount::from_base(1)));
        CHECK(social_contract_met(sc, 0, t0 + token_amount::from_base(1)));
    }
    SECTION("absurd amendment counts refuse instead of wrapping")
    {
        CHECK_THROWS_AS(social_contract_threshold(sc, UINT64_MAX), error);
    }
    SECTION("custom parameters scale the same way")
    {
        const social_contract tiny { 100, 1'000, 500, "v2" };
        CHECK(social_contract_threshold(tiny, 0) == token_amount::from_tokens(100));
        CHECK(social_contract_threshold(tiny, 2) == token_amount::from_tokens(200));
    }
}

TEST_CASE("rule changes ride the chain only when they never widen validity")
{
    auto c = pingpong_chain(3);
    REQUIRE(c.rules.validity_predicate == "standard");

    SECTION("tightening passes the probe and applies in place")
    {
        protocol_rules tighter { 2, 5, "nonempty" };
        CHECK(backward_compatible(c, c.rules, tighter));
        apply_soft_fork(c, tighter, 0.7);
        CHECK(c.rules.version == 2);
        CHECK(c.rules.max_block_txs == 5);

        // a block the old rules would have taken is now refused
        try {
            seal_block(c, {}, sealer);
            FAIL("empty block under nonempty rules must raise");
        } catch (const error &e) {
            CHECK(e.code == errc::rule_violation);
        }
        CHECK(c.height() == 3);
    }
    SECTION("loosening is refused regardless of adoption")
    {
        protocol_rules base { 2, 10, "nonempty" };
        apply_soft_fork(c, base, 1.0);

        protocol_rules looser { 3, 10, "standard" };
        CHECK(!backward_compatible(c, c.rules, looser));
        try {
            apply_soft_fork(c, looser, 1.0);
            FAIL("widening rule change must raise");
        } catch (const error &e) {
            CHECK(e.code == errc::not_backward_compatible);
        }
        CHECK(c.rules.validity_predicate == "nonempty");
    }
    SECTION("raising the block size cap widens validity too")
    {
        protocol_rules bigger { 2, 20, "standard" };
        CHECK(!backward_compatible(c, c.rules, bigger));
    }
    SECTION("a minority cannot activate even a compatible change")
    {
        protocol_rules tighter { 2, 5, "nonempty" };
        try {
            apply_soft_fork(c, tighter, 0.49);
            FAIL("minority adoption must raise");
        } catch (const error &e) {
            CHECK(e.code == errc::insufficient_adoption);
        }
        CHECK(c.rules.validity_predicate == "standard");
    }
    SECTION("unknown predicates are refused up front")
    {
        CHECK_THROWS_AS(apply_soft_fork(c, protocol_rules { 2, 5, "no-such-rule" }, 1.0), error);
    }
}

TEST_CASE("a hard fork keeps the prefix and discards everything above the cut")
{
    const auto c = pingpong_chain(99);
    REQUIRE(c.height() == 99);

    protocol_rules new_rules { 2, 10, "nonempty" };
    auto forked = apply_hard_fork(c, 80, new_rules);

    CHECK(forked.height() == 80);
    CHECK(forked.rules.version == 2);
    for (uint64_t h = 0; h <= 80; ++h)
        CHECK(forked.blocks[h].hash == c.blocks[h].hash);

    // the old instance is untouched and keeps its full history
    CHECK(c.height() == 99);
    CHECK(c.rules.version == 1);

    // forked state equals an independent replay of the kept prefix
    chain prefix = c;
    prefix.blocks.resize(81);
    const auto replayed = replay(prefix);
    CHECK(forked.state == replayed.state);
    CHECK(forked.state.digest() == replayed.state.digest());
    REQUIRE(forked.events.size() == replayed.events.size());
    CHECK(forked.events.back().block_height <= 80);

    SECTION("the next block continues from the cut under the new rules")
    {
        const auto tx = sign_transaction(
            make_transaction(alice.owner, forked.state.find(alice.owner)->nonce,
                transfer_payload { bob.owner, token_amount::from_tokens(2) }),
            alice);
        const auto &b = seal_block(forked, { tx }, sealer);
        CHECK(b.height == 81);
        CHECK(b.parent_hash == c.blocks[80].hash);
        CHECK(b.hash != c.blocks[81].hash);

        CHECK_THROWS_AS(seal_block(forked, {}, sealer), error); // nonempty now binds
    }
    SECTION("forking beyond the tip is refused")
    {
        try {
            apply_hard_fork(c, 100, new_rules);
            FAIL("cut above the tip must raise");
        } catch (const error &e) {
            CHECK(e.code == errc::height_beyond_tip);
        }
    }
    SECTION("forking at the tip clones the whole history")
    {
        const auto clone = apply_hard_fork(c, 99, protocol_rules {});
        CHECK(clone.height() == 99);
        CHECK(clone.tip().hash == c.tip().hash);
        CHECK(clone.state == c.state);
    }
}

TEST_CASE("maintainer succession picks the smallest candidate address")
{
    maintainer_state ms;
    const auto c1 = keypair::from_seed("cand1").owner;
    const auto c2 = keypair::from_seed("cand2").owner;
    ms.candidates = { c1, c2 };

    try {
        select_maintainer(ms);
        FAIL("selection while the team is active must raise");
    } catch (const error &e) {
        CHECK(e.code == errc::team_still_active);
    }

    ms.team_active = false;
    select_maintainer(ms);
    REQUIRE(ms.maintainer.has_value());
    CHECK(*ms.maintainer == std::min(c1, c2));
    CHECK(!ms.terminated);

    ms.candidates.erase(*ms.maintainer);
    select_maintainer(ms);
    CHECK(*ms.maintainer == std::max(c1, c2));

    ms.candidates.clear();
    select_maintainer(ms);
    CHECK(!ms.maintainer.has_value());
    CHECK(ms.terminated);

    // a late volunteer revives the project
    ms.candidates.insert(c1);
    select_maintainer(ms);
    CHECK(*ms.maintainer == c1);
    CHECK(!ms.terminated);
}
