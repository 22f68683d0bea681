// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <govsim/govsim.hpp>

using namespace govsim;

namespace {

address addr(const std::string &seed)
{
    return keypair::from_seed(seed).owner;
}

world_state funded(const address &who, uint64_t tokens)
{
    world_state st;
    st.get_or_create(who).spendable = token_amount::from_tokens(tokens);
    st.total_supply = token_amount::from_tokens(tokens);
    return st;
}

// Path graph a0 - a1 - ... - a{n-1}.
transfer_graph path_graph(const std::vector<address> &nodes)
{
    transfer_graph g;
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        add_transfer_edge(g, nodes[i], nodes[i + 1]);
    return g;
}

} // namespace

TEST_CASE("masternode eligibility follows the locked balance, not the spendable one")
{
    const auto owner = addr("owner");
    auto st = funded(owner, 5'000);

    CHECK(!masternode_eligible(st, owner));

    SECTION("a lock at the threshold qualifies")
    {
        lock_tokens(st, owner, token_amount::from_tokens(1'000), lock_purpose::masternode, std::nullopt, 1);
        CHECK(masternode_eligible(st, owner));
        CHECK(st.spendable_of(owner) == token_amount::from_tokens(4'000));
    }
    SECTION("one base unit short does not")
    {
        lock_tokens(st, owner, token_amount::parse("999.999"), lock_purpose::masternode, std::nullopt, 1);
        CHECK(!masternode_eligible(st, owner));
    }
    SECTION("locks held for other purposes do not count")
    {
        lock_tokens(st, owner, token_amount::from_tokens(2'000), lock_purpose::vote_deposit, std::nullopt, 1);
        CHECK(!masternode_eligible(st, owner));
        CHECK(locked_for_purpose(st, owner, lock_purpose::vote_deposit) == token_amount::from_tokens(2'000));
    }
    SECTION("two partial locks accumulate")
    {
        lock_tokens(st, owner, token_amount::from_tokens(600), lock_purpose::masternode, std::nullopt, 1);
        const auto second
            = lock_tokens(st, owner, token_amount::from_tokens(400), lock_purpose::masternode, 2, 1);
        CHECK(masternode_eligible(st, owner));

        release_lock(st, second, 2);
        CHECK(!masternode_eligible(st, owner));
        CHECK(st.spendable_of(owner) == token_amount::from_tokens(4'400));
    }
    SECTION("burning the bond destroys supply and eligibility")
    {
        const auto rec
            = lock_tokens(st, owner, token_amount::from_tokens(1'000), lock_purpose::masternode, std::nullopt, 1);
        burn_lock(st, rec, 2);
        CHECK(!masternode_eligible(st, owner));
        CHECK(st.total_supply == token_amount::from_tokens(4'000));
    }
    SECTION("a custom threshold applies")
    {
        lock_tokens(st, owner, token_amount::from_tokens(10), lock_purpose::masternode, std::nullopt, 1);
        CHECK(masternode_eligible(st, owner, 10));
        CHECK(!masternode_eligible(st, owner, 11));
    }
}

TEST_CASE("the scam journal is append-only and the latest entry wins")
{
    scam_list list;
    const auto mallory = addr("mallory");
    const auto shop = addr("shop");

    CHECK(!list.is_listed(mallory));
    list.list(mallory, "phishing", 3);
    CHECK(list.is_listed(mallory));
    CHECK(!list.is_listed(shop));

    list.list(shop, "fake storefront", 4);
    CHECK(list.listed_now() == std::set<address> { mallory, shop });

    list.delist(shop, "cleared after review", 9);
    CHECK(!list.is_listed(shop));
    CHECK(list.is_listed(mallory));
    CHECK(list.listed_now() == std::set<address> { mallory });

    list.list(shop, "relapsed", 12);
    CHECK(list.is_listed(shop));

    // the journal keeps every entry, including the cancelled listing
    CHECK(list.entries.size() == 4);
}

TEST_CASE("taint halves per hop from the listed set and flattens below one percent")
{
    std::vector<address> nodes;
    for (int i = 0; i < 10; ++i)
        nodes.push_back(addr("n" + std::to_string(i)));
    const auto g = path_graph(nodes);

    scam_list list;
    list.list(nodes[0], "source", 1);

    CHECK(taint_score(list, g, nodes[0]) == 1.0);
    for (int d = 1; d < 7; ++d)
        CHECK(taint_score(list, g, nodes[d]) == std::ldexp(1.0, -d));
    CHECK(taint_score(list, g, nodes[7]) == 0.0);
    CHECK(taint_score(list, g, nodes[8]) == 0.0);

    SECTION("unconnected strangers score zero")
    {
        CHECK(taint_score(list, g, addr("stranger")) == 0.0);
    }
    SECTION("an empty listed set clears every score")
    {
        list.delist(nodes[0], "", 2);
        for (const auto &n: nodes)
            CHECK(taint_score(list, g, n) == 0.0);
    }
    SECTION("moving the listing re-scores from the new source")
    {
        list.delist(nodes[0], "", 2);
        list.list(nodes[9], "new source", 2);
        CHECK(taint_score(list, g, nodes[9]) == 1.0);
        CHECK(taint_score(list, g, nodes[8]) == 0.5);
        CHECK(taint_score(list, g, nodes[0]) == 0.0); // nine hops away now
    }
    SECTION("the shortest path to any listed address decides")
    {
        list.list(nodes[4], "second source", 2);
        CHECK(taint_score(list, g, nodes[2]) == 0.25);  // 2 from nodes[0], 2 from nodes[4]
        CHECK(taint_score(list, g, nodes[6]) == 0.25);  // 2 from nodes[4] beats 6 from nodes[0]
        CHECK(taint_score(list, g, nodes[4]) == 1.0);
    }
}

TEST_CASE("the association graph is built from transfer events")
{
    const auto a = addr("a"), b = addr("b"), c = addr("c"), d = addr("d");
    std::vector<event> events;
    events.push_back(event { 1, bytes32 {}, "Transfer",
        { { "from", a.hex() }, { "to", b.hex() }, { "amount", "5" } } });
    events.push_back(event { 2, bytes32 {}, "XShardDebit",
        { { "from", b.hex() }, { "to", c.hex() }, { "amount", "1" }, { "target_shard", "2" } } });
    events.push_back(event { 3, bytes32 {}, "Burn", { { "owner", d.hex() }, { "amount", "1" } } });

    const auto g = transfer_graph_from_events(events);
    CHECK(g.size() == 3); // burn creates no association
    CHECK(g.at(a).contains(b));
    CHECK(g.at(b).contains(a));
    CHECK(g.at(b).contains(c));
    CHECK(!g.contains(d));

    scam_list list;
    list.list(a, "reported", 4);
    CHECK(taint_score(list, g, b) == 0.5);
    CHECK(taint_score(list, g, c) == 0.25);
    CHECK(taint_score(list, g, d) == 0.0);
}

TEST_CASE("only privileged addresses flip freeze state")
{
    freeze_state fs;
    const auto council = addr("council");
    const auto rando = addr("rando");
    const auto contract = addr("registry");
    const std::set<address> privileged { council };

    for (auto attempt: std::vector<std::function<void()>> {
             [&] { freeze_network(fs, privileged, rando, 5, "nope"); },
             [&] { unfreeze_network(fs, privileged, rando); },
             [&] { freeze_contract(fs, privileged, rando, contract, 5, "nope"); },
             [&] { unfreeze_contract(fs, privileged, rando, contract); },
             [&] { freeze_shard(fs, privileged, rando, 0, 5, "nope"); },
             [&] { unfreeze_shard(fs, privileged, rando, 0); },
         }) {
        try {
            attempt();
            FAIL("unprivileged freeze must raise");
        } catch (const error &e) {
            CHECK(e.code == errc::not_privileged);
        }
    }
    CHECK(!fs.network_frozen());

    freeze_network(fs, privileged, council, 7, "incident");
    CHECK(fs.network_frozen());
    CHECK(fs.network->at_height == 7);
    unfreeze_network(fs, privileged, council);
    CHECK(!fs.network_frozen());

    freeze_contract(fs, privileged, council, contract, 8, "exploit");
    CHECK(fs.contract_frozen(contract));
    CHECK(fs.frozen_contract_set() == std::set<address> { contract });
    unfreeze_contract(fs, privileged, council, contract);
    CHECK(fs.frozen_contract_set().empty());

    freeze_shard(fs, privileged, council, 2, 9, "takeover");
    CHECK(fs.shard_frozen(2));
    CHECK(!fs.shard_frozen(0));
    unfreeze_shard(fs, privileged, council, 2);
    CHECK(!fs.shard_frozen(2));
}

TEST_CASE("a frozen contract rejects calls while others proceed")
{
    const auto caller = keypair::from_seed("caller");
    const auto frozen_c = addr("frozen-contract");
    const auto open_c = addr("open-contract");

    auto ch = make_chain(0, { { caller.owner, token_amount::from_tokens(10) } });
    freeze_state fs;
    freeze_contract(fs, { caller.owner }, caller.owner, frozen_c, 0, "bug");
    const auto frozen_set = fs.frozen_contract_set();

    const auto blocked = sign_transaction(
        make_transaction(caller.owner, 0, contract_call_payload { frozen_c, "withdraw", {} }), caller);
    try {
        seal_block(ch, { blocked }, addr("validator"), &frozen_set);
        FAIL("call into a frozen contract must raise");
    } catch (const error &e) {
        CHECK(e.code == errc::frozen);
    }
    CHECK(ch.height() == 0);

    const auto fine = sign_transaction(
        make_transaction(caller.owner, 0, contract_call_payload { open_c, "withdraw", {} }), caller);
    seal_block(ch, { fine }, addr("validator"), &frozen_set);
    CHECK(ch.height() == 1);
}
