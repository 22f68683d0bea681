// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <catch2/catch_amalgamated.hpp>

#include <govsim/govsim.hpp>

using namespace govsim;

namespace {

errc parse_errc(const std::string &text)
{
    try {
        parse_scenario(text);
    } catch (const error &e) {
        return e.code;
    }
    FAIL("parse must raise");
    return errc::syntax_error;
}

const std::string minimal = R"({
    "version": 1,
    "name": "minimal",
    "seed": 5,
    "genesis": { "accounts": { "alice": "100", "bob": "50" } },
    "actions": [
        { "op": "transfer", "from": "alice", "to": "bob", "amount": "30" }
    ],
    "assertions": [
        { "query": "balance:alice", "expect": "70" },
        { "query": "balance:bob", "expect": "80" },
        { "query": "supply", "expect": "150" }
    ]
})";

} // namespace

TEST_CASE("scenario parsing refuses malformed documents")
{
    CHECK(parse_errc("{ not json") == errc::syntax_error);
    CHECK(parse_errc(R"(["not", "an", "object"])") == errc::syntax_error);
    CHECK(parse_errc(R"({ "version": 2 })") == errc::syntax_error);

    SECTION("unknown ops are caught before execution")
    {
        CHECK(parse_errc(R"({ "actions": [ { "op": "summon" } ] })") == errc::unknown_action);
    }
    SECTION("every referenced identity must be declared")
    {
        CHECK(parse_errc(R"({
            "genesis": { "accounts": { "alice": "10" } },
            "actions": [ { "op": "transfer", "from": "alice", "to": "nobody", "amount": "1" } ]
        })") == errc::undeclared_identity);

        CHECK(parse_errc(R"({
            "assertions": [ { "query": "balance:ghost", "expect": "0" } ]
        })") == errc::undeclared_identity);

        // listing a name under identities is declaration enough
        parse_scenario(R"({
            "genesis": { "accounts": { "alice": "10" }, "identities": [ "carol" ] },
            "actions": [ { "op": "transfer", "from": "alice", "to": "carol", "amount": "1" } ]
        })");
    }
    SECTION("amounts must be canonical and non-negative")
    {
        CHECK(parse_errc(R"({
            "genesis": { "accounts": { "alice": "-5" } }
        })") == errc::syntax_error);
        CHECK(parse_errc(R"({
            "genesis": { "accounts": { "alice": 1.5 } }
        })") == errc::syntax_error);
    }
    SECTION("assertion comparators and proposals are checked")
    {
        CHECK(parse_errc(R"({
            "assertions": [ { "query": "supply", "op": "almost", "expect": "1" } ]
        })") == errc::syntax_error);
    }
    SECTION("fork actions carry their shape requirements")
    {
        CHECK(parse_errc(R"({
            "actions": [ { "op": "fork", "kind": "soft" } ]
        })") == errc::syntax_error); // missing adoption
        CHECK(parse_errc(R"({
            "actions": [ { "op": "fork", "kind": "hard", "at_height": 1 } ]
        })") == errc::syntax_error); // missing name
        CHECK(parse_errc(R"({
            "actions": [
                { "op": "fork", "kind": "soft", "adoption": 1.0,
                  "rules": { "validity_predicate": "no-such-rule" } }
            ]
        })") == errc::syntax_error);
    }
}

TEST_CASE("a minimal scenario runs, asserts, and reports")
{
    const auto doc = parse_scenario(minimal);
    const auto res = run_scenario(doc);
    REQUIRE(res.exit_code == 0);

    const auto &r = res.report;
    CHECK(r.at("scenario") == "minimal");
    CHECK(r.at("seed") == 5);
    CHECK(r.at("passed") == true);
    CHECK(r.at("summary").at("supply") == "150");
    CHECK(r.at("summary").at("accounts").at("alice").at("spendable") == "70");
    CHECK(r.at("actions").size() == 1);
    CHECK(r.at("actions")[0].at("status") == "ok");
    CHECK(r.at("assertions").size() == 3);
    for (const auto &a: r.at("assertions"))
        CHECK(a.at("pass") == true);

    SECTION("the text rendering carries the same verdicts")
    {
        const auto text = render_text_report(r);
        CHECK(text.find("scenario: minimal") != std::string::npos);
        CHECK(text.find("PASS balance:alice") != std::string::npos);
        CHECK(text.find("FAIL") == std::string::npos);
    }
}

TEST_CASE("failed assertions exit with code one and name the actual value")
{
    auto doc = parse_scenario(minimal);
    doc.assertions[0].expect = "71";
    const auto res = run_scenario(doc);
    CHECK(res.exit_code == 1);
    CHECK(res.report.at("passed") == false);
    const auto &a = res.report.at("assertions")[0];
    CHECK(a.at("pass") == false);
    CHECK(a.at("actual") == "70");
}

TEST_CASE("expected failures are part of the script")
{
    SECTION("a thrown domain error matches by name")
    {
        const auto doc = parse_scenario(R"({
            "genesis": { "accounts": { "alice": "10", "bob": "0" } },
            "actions": [
                { "op": "transfer", "from": "alice", "to": "bob", "amount": "99",
                  "expect_error": "InsufficientSpendable" }
            ],
            "assertions": [
                { "query": "balance:alice", "expect": "10" },
                { "query": "height", "expect": "0" }
            ]
        })");
        const auto res = run_scenario(doc);
        REQUIRE(res.exit_code == 0);
        CHECK(res.report.at("actions")[0].at("status") == "error:InsufficientSpendable");
    }
    SECTION("an admission rejection matches by reason")
    {
        const auto doc = parse_scenario(R"({
            "genesis": { "accounts": { "alice": "10", "bob": "0" } },
            "actions": [
                { "op": "transfer", "from": "alice", "to": "bob", "amount": "1",
                  "signed": false, "expect_error": "Unsigned" }
            ],
            "assertions": [ { "query": "balance:bob", "expect": "0" } ]
        })");
        const auto res = run_scenario(doc);
        REQUIRE(res.exit_code == 0);
        CHECK(res.report.at("actions")[0].at("status") == "rejected:Unsigned");
    }
    SECTION("succeeding where failure was promised is an execution error")
    {
        const auto doc = parse_scenario(R"({
            "genesis": { "accounts": { "alice": "10", "bob": "0" } },
            "actions": [
                { "op": "transfer", "from": "alice", "to": "bob", "amount": "1",
                  "expect_error": "InsufficientSpendable" }
            ]
        })");
        const auto res = run_scenario(doc);
        CHECK(res.exit_code == 2);
        CHECK(res.report.at("error").at("op") == "transfer");
    }
    SECTION("an unexpected error stops the run with code two")
    {
        const auto doc = parse_scenario(R"({
            "genesis": { "accounts": { "alice": "10", "bob": "0" } },
            "actions": [
                { "op": "transfer", "from": "alice", "to": "bob", "amount": "99" },
                { "op": "transfer", "from": "alice", "to": "bob", "amount": "1" }
            ]
        })");
        const auto res = run_scenario(doc);
        CHECK(res.exit_code == 2);
        CHECK(res.report.at("error").at("action") == 0);
        CHECK(res.report.at("error").at("message").get<std::string>().find("InsufficientSpendable")
            != std::string::npos);
    }
}

TEST_CASE("pooled transactions wait for an explicit seal")
{
    const auto doc = parse_scenario(R"({
        "genesis": { "accounts": { "alice": "10", "bob": "0" } },
        "actions": [
            { "op": "transfer", "from": "alice", "to": "bob", "amount": "2", "pool": true },
            { "op": "transfer", "from": "alice", "to": "bob", "amount": "3", "pool": true },
            { "op": "seal" }
        ],
        "assertions": [
            { "query": "balance:bob", "expect": "5" },
            { "query": "height", "expect": "1" },
            { "query": "pool", "expect": "0" }
        ]
    })");
    CHECK(run_scenario(doc).exit_code == 0);
}

TEST_CASE("reports are byte-identical across runs and honour the seed override")
{
    const auto doc = parse_scenario(minimal);
    const auto first = run_scenario(doc);
    const auto second = run_scenario(doc);
    CHECK(first.report.dump() == second.report.dump());

    const auto shifted = run_scenario(doc, 99);
    CHECK(shifted.report.at("seed") == 99);
    CHECK(run_scenario(doc, 99).report.dump() == shifted.report.dump());
}

TEST_CASE("reports never leak private key material")
{
    const auto doc = parse_scenario(R"({
        "genesis": {
            "accounts": { "alice": "100", "bob": "10" },
            "validators": [ "val0" ],
            "privileged": [ "council" ]
        },
        "actions": [
            { "op": "transfer", "from": "alice", "to": "bob", "amount": "5" },
            { "op": "freeze", "by": "council", "scope": "network" },
            { "op": "unfreeze", "by": "council", "scope": "network" }
        ]
    })");
    const auto res = run_scenario(doc);
    REQUIRE(res.exit_code == 0);
    const auto dump = res.report.dump();
    for (const auto &name: doc.declared) {
        const auto kp = keypair::from_seed(name);
        CHECK(dump.find(hex_encode(kp.private_key)) == std::string::npos);
    }
}

TEST_CASE("a scripted governance round trips through every mechanism")
{
    const auto doc = parse_scenario(R"({
        "genesis": {
            "accounts": { "whale": "86", "minnow": "14", "quinn": "30" },
            "dictators": [ "boss" ],
            "veto_window": 12
        },
        "actions": [
            { "op": "open_proposal", "id": 1, "mechanism": "carbon", "closes_in": 3 },
            { "op": "carbonvote", "proposal": 1, "voter": "whale", "choice": "accept" },
            { "op": "carbonvote", "proposal": 1, "voter": "minnow", "choice": "reject" },
            { "op": "advance", "heights": 1 },
            { "op": "tally", "proposal": 1 },

            { "op": "open_proposal", "id": 2, "mechanism": "quadratic", "closes_in": 2 },
            { "op": "quadratic_vote", "proposal": 2, "voter": "quinn", "choice": "accept", "votes": 3 },
            { "op": "advance", "heights": 1 },
            { "op": "tally", "proposal": 2 },
            { "op": "dictator_finalize", "proposal": 2, "by": "boss", "veto": true }
        ],
        "assertions": [
            { "query": "status:1", "expect": "accepted" },
            { "query": "accept_weight:1", "expect": "86" },
            { "query": "reject_weight:1", "expect": "14" },
            { "query": "status:2", "expect": "vetoed" },
            { "query": "quad_cost:3", "expect": "9" },
            { "query": "balance:quinn", "expect": "21" }
        ]
    })");
    const auto res = run_scenario(doc);
    if (res.exit_code != 0)
        UNSCOPED_INFO(res.report.dump(2));
    CHECK(res.exit_code == 0);
}
