// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include <govsim/admission.hpp>
#include <govsim/controls.hpp>
#include <govsim/events.hpp>
#include <govsim/ledger.hpp>
#include <govsim/lifecycle.hpp>
#include <govsim/rng.hpp>
#include <govsim/sharding.hpp>
#include <govsim/votes.hpp>

namespace govsim {

using njson = nlohmann::json; // std::map-backed, so dumps have sorted keys

// ---------------------------------------------------------------------------
// scenario documents

struct scenario_assertion {
    std::string query {};
    std::string op { "eq" };
    std::string expect {};
    std::string instance {}; // empty = whichever instance is current at the end
};

struct scenario_action {
    std::string op {};
    njson args {};
    std::string expect_error {}; // reason name this action is supposed to raise
    bool pool = false;           // park the transaction instead of sealing now
};

struct scenario_doc {
    std::string name { "scenario" };
    uint64_t seed = 0;
    uint32_t shards = 1;
    std::map<std::string, token_amount> accounts {};
    std::vector<std::string> validators {};
    std::vector<std::string> identities {};
    std::vector<std::string> privileged {};
    std::vector<std::string> dictators {};
    std::vector<std::string> malicious {};
    uint64_t veto_window = 12;
    uint64_t masternode_threshold = 1'000;
    double adoption_majority = 0.5;
    protocol_rules rules {};
    social_contract contract_terms {};
    event_schema custom_kinds {};
    bool require_signature = true;
    std::set<std::string> allowed_kinds {};
    std::vector<std::string> authorized {};
    std::vector<std::string> filter_rules {};
    std::vector<scenario_action> actions {};
    std::vector<scenario_assertion> assertions {};
    std::set<std::string> declared {}; // every identity name usable in actions
};

inline const std::set<std::string> &scenario_ops()
{
    static const std::set<std::string> ops {
        "transfer", "burn", "lock", "release", "burn_lock", "seal", "advance",
        "settle_pending", "abort_pending",
        "open_proposal", "carbonvote", "quadratic_vote", "delegate", "revoke", "direct_vote",
        "tally", "dictator_finalize", "issue_foreign", "crosschain_vote", "crosschain_tally",
        "funding_match",
        "freeze", "unfreeze", "flag_scam", "delist_scam", "flag_takeovers",
        "fork", "use_instance", "declare_team_inactive", "select_maintainer",
        "define_pipeline", "extract", "emit_event",
    };
    return ops;
}

// Named transaction predicates a scenario's admission policy can enable.
inline const std::map<std::string, content_rule> &scenario_rule_catalog()
{
    static const std::map<std::string, content_rule> catalog {
        { "no-zero-transfer",
          content_rule { "no-zero-transfer",
              [](const transaction &tx) {
                  const auto *t = std::get_if<transfer_payload>(&tx.payload);
                  return t == nullptr || !t->amount.is_zero();
              } } },
        { "no-self-transfer",
          content_rule { "no-self-transfer",
              [](const transaction &tx) {
                  const auto *t = std::get_if<transfer_payload>(&tx.payload);
                  return t == nullptr || t->to != tx.sender;
              } } },
    };
    return catalog;
}

namespace scenario_detail {

    inline token_amount amount_from_json(const njson &v)
    {
        if (v.is_string())
            return token_amount::parse(v.get<std::string>());
        if (v.is_number_unsigned())
            return token_amount::from_tokens(v.get<uint64_t>());
        if (v.is_number_integer()) {
            const auto x = v.get<int64_t>();
            if (x < 0)
                throw error { errc::syntax_error, "token amounts are never negative" };
            return token_amount::from_tokens(static_cast<uint64_t>(x));
        }
        throw error { errc::syntax_error, "amounts are decimal strings or whole-token integers" };
    }

    inline std::vector<std::string> string_list(const njson &o, const char *field)
    {
        std::vector<std::string> out;
        if (!o.contains(field))
            return out;
        for (const auto &v: o.at(field))
            out.push_back(v.get<std::string>());
        return out;
    }

    inline void require_fields(const njson &o, std::initializer_list<const char *> fields, const std::string &where)
    {
        for (const auto *f: fields) {
            if (!o.contains(f))
                throw error { errc::syntax_error, where + ": missing field '" + f + "'" };
        }
    }

    // identity-typed fields per action kind, checked against the declared set
    inline const std::map<std::string, std::vector<std::string>> &identity_fields()
    {
        static const std::map<std::string, std::vector<std::string>> table {
            { "transfer", { "from", "to" } },
            { "burn", { "owner" } },
            { "lock", { "owner" } },
            { "release", { "owner" } },
            { "burn_lock", { "owner" } },
            { "carbonvote", { "voter" } },
            { "quadratic_vote", { "voter" } },
            { "direct_vote", { "voter" } },
            { "crosschain_vote", { "voter" } },
            { "delegate", { "from", "to" } },
            { "revoke", { "from" } },
            { "dictator_finalize", { "by" } },
            { "freeze", { "by" } },
            { "unfreeze", { "by" } },
            { "flag_scam", { "by", "subject" } },
            { "delist_scam", { "by", "subject" } },
            { "emit_event", { "caller", "contract" } },
        };
        return table;
    }

    inline void validate_doc(const scenario_doc &d)
    {
        const auto check_name = [&](const std::string &name, const std::string &where) {
            if (!d.declared.contains(name))
                throw error { errc::undeclared_identity, where + ": " + name };
        };
        for (const auto &name: d.authorized)
            check_name(name, "filter.authorized");
        for (const auto &rule: d.filter_rules) {
            if (!scenario_rule_catalog().contains(rule))
                throw error { errc::syntax_error, "unknown admission rule: " + rule };
        }
        if (!rule_catalog().contains(d.rules.validity_predicate))
            throw error { errc::syntax_error, "unknown validity predicate: " + d.rules.validity_predicate };
        if (d.shards == 0)
            throw error { errc::syntax_error, "genesis.shards must be positive" };

        std::set<std::string> instance_names { "main" };
        for (size_t i = 0; i < d.actions.size(); ++i) {
            const auto &a = d.actions[i];
            const std::string where = "action " + std::to_string(i) + " (" + a.op + ")";
            if (!scenario_ops().contains(a.op))
                throw error { errc::unknown_action, a.op };
            if (const auto it = identity_fields().find(a.op); it != identity_fields().end()) {
                for (const auto &f: it->second) {
                    if (a.args.contains(f))
                        check_name(a.args.at(f).get<std::string>(), where);
                }
            }
            if (a.op == "issue_foreign" && a.args.contains("accounts")) {
                for (const auto &[name, amount]: a.args.at("accounts").items())
                    check_name(name, where);
            }
            if (a.op == "declare_team_inactive") {
                for (const auto &name: string_list(a.args, "candidates"))
                    check_name(name, where);
            }
            if (a.op == "lock" && a.args.contains("purpose")) {
                const auto p = a.args.at("purpose").get<std::string>();
                if (p != "masternode" && p != "vote-deposit" && p != "penalty")
                    throw error { errc::syntax_error, where + ": bad purpose " + p };
            }
            if (a.args.contains("choice")) {
                const auto c = a.args.at("choice").get<std::string>();
                if (c != "accept" && c != "reject")
                    throw error { errc::syntax_error, where + ": bad choice " + c };
            }
            if (a.op == "open_proposal") {
                require_fields(a.args, { "id", "mechanism", "closes_in" }, where);
                const auto m = a.args.at("mechanism").get<std::string>();
                if (m != "carbon" && m != "quadratic" && m != "liquid" && m != "crosschain")
                    throw error { errc::syntax_error, where + ": bad mechanism " + m };
            }
            if (a.op == "fork") {
                if (d.shards != 1)
                    throw error { errc::syntax_error, where + ": forking requires a single shard" };
                const auto kind = a.args.value("kind", std::string {});
                if (kind == "hard") {
                    require_fields(a.args, { "at_height", "name" }, where);
                    instance_names.insert(a.args.at("name").get<std::string>());
                } else if (kind == "soft") {
                    require_fields(a.args, { "adoption" }, where);
                } else {
                    throw error { errc::syntax_error, where + ": bad fork kind '" + kind + "'" };
                }
                if (a.args.contains("rules")) {
                    const auto pred = a.args.at("rules").value("validity_predicate", std::string { "standard" });
                    if (!rule_catalog().contains(pred))
                        throw error { errc::syntax_error, where + ": unknown validity predicate " + pred };
                }
            }
            if (a.op == "use_instance") {
                require_fields(a.args, { "name" }, where);
                if (!instance_names.contains(a.args.at("name").get<std::string>()))
                    throw error { errc::syntax_error, where + ": unknown instance" };
            }
        }

        static const std::set<std::string> comparators { "eq", "ne", "lt", "le", "gt", "ge" };
        static const std::set<std::string> name_queries { "balance", "locked", "holding", "taint", "listed",
            "masternode", "contract_frozen" };
        for (size_t i = 0; i < d.assertions.size(); ++i) {
            const auto &as = d.assertions[i];
            const std::string where = "assertion " + std::to_string(i);
            if (!comparators.contains(as.op))
                throw error { errc::syntax_error, where + ": bad comparator " + as.op };
            if (!as.instance.empty() && !instance_names.contains(as.instance))
                throw error { errc::syntax_error, where + ": unknown instance " + as.instance };
            const auto colon = as.query.find(':');
            if (colon != std::string::npos && name_queries.contains(as.query.substr(0, colon)))
                check_name(as.query.substr(colon + 1), where);
        }
    }

    inline scenario_doc build_doc(const njson &j)
    {
        if (!j.is_object())
            throw error { errc::syntax_error, "scenario must be a JSON object" };
        if (j.contains("version") && j.at("version").get<int64_t>() != 1)
            throw error { errc::syntax_error, "unsupported scenario version" };
        scenario_doc d;
        d.name = j.value("name", d.name);
        d.seed = j.value("seed", d.seed);

        const njson g = j.value("genesis", njson::object());
        d.shards = g.value("shards", d.shards);
        if (g.contains("accounts")) {
            for (const auto &[name, amount]: g.at("accounts").items())
                d.accounts.emplace(name, amount_from_json(amount));
        }
        d.validators = string_list(g, "validators");
        d.identities = string_list(g, "identities");
        d.privileged = string_list(g, "privileged");
        d.dictators = string_list(g, "dictators");
        d.malicious = string_list(g, "malicious");
        d.veto_window = g.value("veto_window", d.veto_window);
        d.masternode_threshold = g.value("masternode_threshold", d.masternode_threshold);
        d.adoption_majority = g.value("adoption_majority", d.adoption_majority);
        d.rules.max_block_txs = g.value("max_block_txs", d.rules.max_block_txs);
        d.rules.validity_predicate = g.value("validity_predicate", d.rules.validity_predicate);
        if (g.contains("social")) {
            const auto &s = g.at("social");
            d.contract_terms.base_tokens = s.value("base_tokens", d.contract_terms.base_tokens);
            d.contract_terms.factor_permille = s.value("factor_permille", d.contract_terms.factor_permille);
            d.contract_terms.step_permille = s.value("step_permille", d.contract_terms.step_permille);
            d.contract_terms.published_tag = s.value("tag", d.contract_terms.published_tag);
        }
        if (g.contains("event_kinds")) {
            for (const auto &[kind, attrs]: g.at("event_kinds").items()) {
                std::vector<std::string> names;
                for (const auto &a: attrs)
                    names.push_back(a.get<std::string>());
                d.custom_kinds.emplace(kind, std::move(names));
            }
        }
        if (g.contains("filter")) {
            const auto &f = g.at("filter");
            d.require_signature = f.value("require_signature", true);
            for (const auto &k: string_list(f, "allowed_kinds"))
                d.allowed_kinds.insert(k);
            d.authorized = string_list(f, "authorized");
            d.filter_rules = string_list(f, "rules");
        }

        if (j.contains("actions")) {
            for (const auto &entry: j.at("actions")) {
                if (!entry.is_object() || !entry.contains("op"))
                    throw error { errc::syntax_error, "every action needs an 'op' field" };
                scenario_action a;
                a.op = entry.at("op").get<std::string>();
                a.args = entry;
                a.expect_error = entry.value("expect_error", std::string {});
                a.pool = entry.value("pool", false);
                d.actions.push_back(std::move(a));
            }
        }
        if (j.contains("assertions")) {
            for (const auto &entry: j.at("assertions")) {
                scenario_assertion as;
                as.query = entry.at("query").get<std::string>();
                as.op = entry.value("op", std::string { "eq" });
                as.expect = entry.at("expect").get<std::string>();
                as.instance = entry.value("instance", std::string {});
                d.assertions.push_back(std::move(as));
            }
        }

        for (const auto &[name, amount]: d.accounts)
            d.declared.insert(name);
        for (const auto &list: { d.validators, d.identities, d.privileged, d.dictators, d.malicious }) {
            for (const auto &name: list)
                d.declared.insert(name);
        }
        d.declared.insert("governance");
        if (d.validators.empty())
            d.declared.insert("validator-0");

        validate_doc(d);
        return d;
    }

} // namespace scenario_detail

inline scenario_doc parse_scenario(const std::string &text)
{
    njson j;
    try {
        j = njson::parse(text);
    } catch (const std::exception &ex) {
        throw error { errc::syntax_error, ex.what() };
    }
    try {
        return scenario_detail::build_doc(j);
    } catch (const error &) {
        throw;
    } catch (const std::exception &ex) {
        throw error { errc::syntax_error, ex.what() };
    }
}

// ---------------------------------------------------------------------------
// scenario execution

struct scenario_result {
    njson report {};
    int exit_code = 0; // 0 pass, 1 failed assertion, 2 execution error
};

struct scenario_engine {
    explicit scenario_engine(const scenario_doc &doc, std::optional<uint64_t> seed_override = std::nullopt):
        _doc { doc },
        _seed { seed_override.value_or(doc.seed) },
        _rng { _seed }
    {
        for (const auto &name: _doc.declared) {
            const auto kp = keypair::from_seed(name);
            _names.emplace(kp.owner, name);
            _keys.emplace(kp.owner, kp.public_key);
            _ids.emplace(name, kp);
        }
        _policy.require_signature = _doc.require_signature;
        _policy.allowed_kinds = _doc.allowed_kinds;
        for (const auto &name: _doc.authorized)
            _policy.authorized_senders.insert(_ids.at(name).owner);
        for (const auto &rule: _doc.filter_rules)
            _policy.content_rules.push_back(scenario_rule_catalog().at(rule));
        _schema = default_event_schema();
        for (const auto &[kind, attrs]: _doc.custom_kinds)
            _schema.insert_or_assign(kind, attrs);
        for (const auto &name: _doc.privileged)
            _privileged.insert(_ids.at(name).owner);
        _dict.veto_window = _doc.veto_window;
        for (const auto &name: _doc.dictators)
            _dict.dictators.insert(_ids.at(name).owner);

        std::vector<address> validator_addrs;
        for (const auto &name: _doc.validators)
            validator_addrs.push_back(_ids.at(name).owner);
        if (validator_addrs.empty())
            validator_addrs.push_back(_ids.at("validator-0").owner);
        std::map<address, token_amount> alloc;
        for (const auto &[name, amount]: _doc.accounts)
            alloc.emplace(_ids.at(name).owner, amount);
        auto &main = _instances["main"];
        main.net = init_shards(_doc.shards, validator_addrs, alloc, _doc.rules, _rng);
        main.pools.resize(main.net.count);
    }

    scenario_result run()
    {
        for (size_t i = 0; i < _doc.actions.size(); ++i) {
            const auto &a = _doc.actions[i];
            std::string status;
            try {
                const auto rejected = exec(a);
                if (rejected.has_value()) {
                    if (a.expect_error == *rejected)
                        status = "rejected:" + *rejected;
                    else
                        return failure(i, a.op, "transaction rejected: " + *rejected);
                } else if (!a.expect_error.empty()) {
                    return failure(i, a.op, "expected " + a.expect_error + ", but the action completed");
                } else {
                    status = "ok";
                }
            } catch (const error &e) {
                if (a.expect_error == errc_name(e.code))
                    status = std::string { "error:" } + errc_name(e.code);
                else
                    return failure(i, a.op, e.what());
            } catch (const std::exception &e) {
                return failure(i, a.op, e.what());
            }
            njson entry;
            entry["index"] = i;
            entry["op"] = a.op;
            entry["status"] = status;
            _action_log.push_back(std::move(entry));
        }

        bool all_pass = true;
        njson checks = njson::array();
        for (const auto &as: _doc.assertions) {
            njson entry;
            entry["query"] = as.query;
            entry["op"] = as.op;
            entry["expect"] = as.expect;
            if (!as.instance.empty())
                entry["instance"] = as.instance;
            try {
                const auto &inst = _instances.at(as.instance.empty() ? _current : as.instance);
                const auto actual = eval_query(as.query, inst);
                const bool pass = compare(actual, as.op, as.expect);
                entry["actual"] = actual;
                entry["pass"] = pass;
                all_pass = all_pass && pass;
            } catch (const std::exception &e) {
                return failure(_doc.actions.size(), "assertion " + as.query, e.what());
            }
            checks.push_back(std::move(entry));
        }

        auto report = base_report();
        report["assertions"] = std::move(checks);
        report["passed"] = all_pass;
        return scenario_result { std::move(report), all_pass ? 0 : 1 };
    }

private:
    struct net_instance {
        shard_set net {};
        std::vector<tx_pool> pools {};
    };

    struct proposal_record {
        proposal prop {};
        bool tallied = false;
        std::string accept_w { "0" };
        std::string reject_w { "0" };
        bool tie_broken = false;
        uint64_t counted = 0;
        uint64_t uncounted = 0;
        double max_share = 0.0;
    };

    const scenario_doc &_doc;
    uint64_t _seed;
    deterministic_rng _rng;
    std::map<std::string, keypair> _ids {};
    std::map<address, std::string> _names {};
    key_registry _keys {};
    filter_policy _policy {};
    event_schema _schema {};
    std::set<address> _privileged {};
    std::map<std::string, net_instance> _instances {};
    std::vector<std::string> _instance_order { "main" };
    std::string _current { "main" };
    freeze_state _freezes {};
    scam_list _scams {};
    dictator_policy _dict {};
    maintainer_state _maint {};
    std::map<uint64_t, proposal_record> _props {};
    std::map<uint64_t, carbonvote_session> _carbon {};
    std::map<uint64_t, quadratic_session> _quad {};
    std::map<uint64_t, crosschain_session> _foreign {};
    delegation_graph _delegations {};
    std::map<std::string, token_amount> _funding {};
    std::map<std::string, event_pipeline> _pipelines {};
    std::map<std::string, std::vector<extracted_record>> _extractions {};
    njson _action_log = njson::array();

    net_instance &cur()
    {
        return _instances.at(_current);
    }

    const keypair &id_of(const std::string &name) const
    {
        const auto it = _ids.find(name);
        if (it == _ids.end())
            throw error { errc::undeclared_identity, name };
        return it->second;
    }

    std::string name_of(const address &a) const
    {
        const auto it = _names.find(a);
        return it == _names.end() ? a.hex().substr(0, 12) : it->second;
    }

    uint64_t height0()
    {
        return cur().net.shards[0].height();
    }

    static std::string fmt_share(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }

    static std::string bool_str(bool v)
    {
        return v ? "true" : "false";
    }

    std::vector<event> merged_events(const net_instance &inst) const
    {
        std::vector<event> all;
        for (const auto &c: inst.net.shards)
            all.insert(all.end(), c.events.begin(), c.events.end());
        std::stable_sort(all.begin(), all.end(),
            [](const event &a, const event &b) { return a.block_height < b.block_height; });
        return all;
    }

    world_state merged_state(const net_instance &inst) const
    {
        world_state merged;
        for (const auto &c: inst.net.shards) {
            for (const auto &[addr, acct]: c.state.accounts) {
                auto &m = merged.get_or_create(addr);
                m.spendable += acct.spendable;
                m.locked += acct.locked;
            }
            merged.locks.insert(merged.locks.end(), c.state.locks.begin(), c.state.locks.end());
            merged.total_supply += c.state.total_supply;
        }
        return merged;
    }

    // ---- transaction plumbing ----

    struct submit_outcome {
        std::optional<std::string> rejected {};
        bytes32 tx_id {};
    };

    void seal_pool(uint32_t shard)
    {
        auto &inst = cur();
        if (shard >= inst.net.count)
            throw error { errc::unknown_shard, "shard " + std::to_string(shard) };
        if (_freezes.network_frozen() || _freezes.shard_frozen(shard))
            throw error { errc::frozen, "shard " + std::to_string(shard) + " is frozen" };
        auto &pool = inst.pools[shard];
        auto txs = pool.take(inst.net.shards[shard].rules.max_block_txs);
        try {
            seal_shard_block(inst.net, shard, txs, &_freezes);
        } catch (...) {
            // a failed seal returns the drained transactions to the pool head
            for (auto it = txs.rbegin(); it != txs.rend(); ++it) {
                pool.ids.insert(it->id);
                pool.pending.push_front(std::move(*it));
            }
            throw;
        }
    }

    submit_outcome submit_tx(const keypair &kp, tx_payload payload, bool sign_it, bool to_pool, uint32_t shard,
        const filter_policy &policy)
    {
        auto &inst = cur();
        if (shard >= inst.net.count)
            throw error { errc::unknown_shard, "shard " + std::to_string(shard) };
        auto &c = inst.net.shards[shard];
        const auto *acct = c.state.find(kp.owner);
        uint64_t nonce = acct ? acct->nonce : 0;
        for (const auto &pending: inst.pools[shard].pending) {
            if (pending.sender == kp.owner)
                ++nonce;
        }
        auto tx = make_transaction(kp.owner, nonce, std::move(payload));
        if (sign_it)
            tx = sign_transaction(tx, kp);
        submit_outcome out;
        out.tx_id = tx.id;
        if (to_pool) {
            const auto v = filter_and_admit(std::move(tx), policy, _keys, inst.pools[shard]);
            if (!v.admitted)
                out.rejected = v.reason;
            return out;
        }
        if (inst.pools[shard].contains(tx.id)) {
            out.rejected = "Duplicate";
            return out;
        }
        tx_pool transient;
        const auto v = filter_and_admit(std::move(tx), policy, _keys, transient);
        if (!v.admitted) {
            out.rejected = v.reason;
            return out;
        }
        if (_freezes.network_frozen() || _freezes.shard_frozen(shard))
            throw error { errc::frozen, "shard " + std::to_string(shard) + " is frozen" };
        seal_shard_block(inst.net, shard, transient.take(1), &_freezes);
        return out;
    }

    // governance bookkeeping rides on the primary shard as ordinary signed
    // transactions, so it shows up in events and survives replay
    void governance_echo(const std::string &action, const std::string &detail)
    {
        const auto out = submit_tx(id_of("governance"),
            governance_action_payload { action, { { "detail", detail } } }, true, false, 0, filter_policy {});
        if (out.rejected.has_value())
            throw error { errc::rule_violation, "governance record rejected: " + *out.rejected };
    }

    // ---- proposal gates ----

    proposal_record &proposal_at(uint64_t id)
    {
        const auto it = _props.find(id);
        if (it == _props.end())
            throw error { errc::syntax_error, "unknown proposal " + std::to_string(id) };
        return it->second;
    }

    void require_open(const proposal_record &rec)
    {
        if (rec.prop.status != proposal_status::open || height0() >= rec.prop.closes_at)
            throw error { errc::already_resolved, "proposal " + std::to_string(rec.prop.id) + " is closed" };
    }

    void require_closed(const proposal_record &rec)
    {
        if (rec.prop.status != proposal_status::open)
            throw error { errc::already_resolved, "proposal " + std::to_string(rec.prop.id) };
        if (height0() < rec.prop.closes_at)
            throw error { errc::not_closed,
                "proposal " + std::to_string(rec.prop.id) + " closes at height "
                    + std::to_string(rec.prop.closes_at) };
    }

    template<typename weight_t>
    void record_outcome(proposal_record &rec, const tally_outcome<weight_t> &out)
    {
        if constexpr (std::is_same_v<weight_t, token_amount>) {
            rec.accept_w = out.accept_weight.str();
            rec.reject_w = out.reject_weight.str();
        } else {
            rec.accept_w = std::to_string(out.accept_weight);
            rec.reject_w = std::to_string(out.reject_weight);
        }
        rec.tie_broken = out.tied;
        rec.prop.status = out.accepted ? proposal_status::accepted : proposal_status::rejected;
        rec.tallied = true;
    }

    // ---- action dispatch ----

    std::optional<std::string> exec(const scenario_action &a)
    {
        const auto &args = a.args;
        if (a.op == "transfer")
            return act_transfer(a);
        if (a.op == "burn") {
            return submit_tx(id_of(args.at("owner").get<std::string>()),
                burn_payload { scenario_detail::amount_from_json(args.at("amount")) },
                args.value("signed", true), a.pool, args.value("shard", 0u), _policy)
                .rejected;
        }
        if (a.op == "lock") {
            lock_payload p;
            p.amount = scenario_detail::amount_from_json(args.at("amount"));
            const auto purpose = args.value("purpose", std::string { "vote-deposit" });
            p.purpose = purpose == "masternode" ? lock_purpose::masternode
                : purpose == "penalty"          ? lock_purpose::penalty
                                                : lock_purpose::vote_deposit;
            if (args.contains("unlock_at"))
                p.unlock_at = args.at("unlock_at").get<uint64_t>();
            else if (args.contains("unlock_in"))
                p.unlock_at = height0() + args.at("unlock_in").get<uint64_t>();
            return submit_tx(id_of(args.at("owner").get<std::string>()), p, args.value("signed", true), a.pool,
                args.value("shard", 0u), _policy)
                .rejected;
        }
        if (a.op == "release" || a.op == "burn_lock") {
            return submit_tx(id_of(args.at("owner").get<std::string>()),
                lock_resolve_payload { args.at("record").get<uint64_t>(), a.op == "burn_lock" },
                args.value("signed", true), a.pool, args.value("shard", 0u), _policy)
                .rejected;
        }
        if (a.op == "seal") {
            seal_pool(args.value("shard", 0u));
            return std::nullopt;
        }
        if (a.op == "advance") {
            const uint64_t n = args.value("heights", 1ULL);
            const uint32_t shard = args.value("shard", 0u);
            auto &inst = cur();
            if (shard >= inst.net.count)
                throw error { errc::unknown_shard, "shard " + std::to_string(shard) };
            for (uint64_t i = 0; i < n; ++i)
                seal_shard_block(inst.net, shard, {}, &_freezes);
            return std::nullopt;
        }
        if (a.op == "settle_pending" || a.op == "abort_pending") {
            auto &net = cur().net;
            for (auto &[origin, xfer]: net.transfers) {
                if (xfer.status != cross_shard_transfer::status_t::pending)
                    continue;
                if (a.op == "settle_pending")
                    settle_cross_shard(net, origin, &_freezes);
                else
                    abort_cross_shard(net, origin, &_freezes);
            }
            return std::nullopt;
        }
        if (a.op == "open_proposal")
            return act_open_proposal(args);
        if (a.op == "carbonvote" || a.op == "direct_vote" || a.op == "quadratic_vote")
            return act_vote(a);
        if (a.op == "delegate") {
            _delegations.set_delegate(
                id_of(args.at("from").get<std::string>()).owner, id_of(args.at("to").get<std::string>()).owner);
            return std::nullopt;
        }
        if (a.op == "revoke") {
            _delegations.revoke_delegate(id_of(args.at("from").get<std::string>()).owner);
            return std::nullopt;
        }
        if (a.op == "tally")
            return act_tally(args);
        if (a.op == "dictator_finalize")
            return act_dictator(args);
        if (a.op == "issue_foreign") {
            auto &session = foreign_session(args.at("proposal").get<uint64_t>());
            std::map<address, token_amount> alloc;
            for (const auto &[name, amount]: args.at("accounts").items())
                alloc.emplace(id_of(name).owner, scenario_detail::amount_from_json(amount));
            session.issue(std::move(alloc));
            return std::nullopt;
        }
        if (a.op == "crosschain_vote") {
            auto &rec = proposal_at(args.at("proposal").get<uint64_t>());
            require_open(rec);
            foreign_session(rec.prop.id)
                .cast(id_of(args.at("voter").get<std::string>()).owner,
                    args.at("choice").get<std::string>() == "accept" ? vote_choice::accept : vote_choice::reject);
            return std::nullopt;
        }
        if (a.op == "crosschain_tally")
            return act_crosschain_tally(args);
        if (a.op == "funding_match") {
            std::vector<token_amount> contributions;
            for (const auto &c: args.at("contributions"))
                contributions.push_back(scenario_detail::amount_from_json(c));
            _funding.insert_or_assign(
                args.at("id").get<std::string>(), quadratic_funding_match(contributions));
            return std::nullopt;
        }
        if (a.op == "freeze" || a.op == "unfreeze")
            return act_freeze(a.op == "freeze", args);
        if (a.op == "flag_scam" || a.op == "delist_scam") {
            const auto &by = id_of(args.at("by").get<std::string>()).owner;
            require_privileged(_privileged, by);
            const auto &subject = id_of(args.at("subject").get<std::string>()).owner;
            const auto note = args.value("note", std::string {});
            if (a.op == "flag_scam")
                _scams.list(subject, note, height0());
            else
                _scams.delist(subject, note, height0());
            return std::nullopt;
        }
        if (a.op == "flag_takeovers") {
            std::set<address> bad;
            for (const auto &name: _doc.malicious)
                bad.insert(id_of(name).owner);
            flag_takeovers(cur().net, bad);
            return std::nullopt;
        }
        if (a.op == "fork")
            return act_fork(args);
        if (a.op == "use_instance") {
            const auto name = args.at("name").get<std::string>();
            if (!_instances.contains(name))
                throw error { errc::syntax_error, "unknown instance " + name };
            _current = name;
            return std::nullopt;
        }
        if (a.op == "declare_team_inactive") {
            _maint.team_active = false;
            _maint.candidates.clear();
            for (const auto &name: scenario_detail::string_list(args, "candidates"))
                _maint.candidates.insert(id_of(name).owner);
            return std::nullopt;
        }
        if (a.op == "select_maintainer") {
            select_maintainer(_maint);
            return std::nullopt;
        }
        if (a.op == "define_pipeline") {
            event_pipeline p;
            for (const auto &k: scenario_detail::string_list(args, "kinds"))
                p.kinds.insert(k);
            p.from_height = args.value("from", 0ULL);
            p.to_height = args.value("to", UINT64_MAX);
            p.projection = scenario_detail::string_list(args, "project");
            validate_pipeline(p, _schema);
            _pipelines.insert_or_assign(args.at("id").get<std::string>(), std::move(p));
            return std::nullopt;
        }
        if (a.op == "extract") {
            const auto id = args.at("pipeline").get<std::string>();
            const auto it = _pipelines.find(id);
            if (it == _pipelines.end())
                throw error { errc::syntax_error, "unknown pipeline " + id };
            _extractions.insert_or_assign(id, extract_logs(merged_events(cur()), it->second, _schema));
            return std::nullopt;
        }
        if (a.op == "emit_event") {
            const auto method = args.at("method").get<std::string>();
            if (!_schema.contains(method))
                throw error { errc::unknown_kind, method };
            attr_list call_args;
            if (args.contains("attrs")) {
                for (const auto &[k, v]: args.at("attrs").items())
                    call_args.emplace_back(k, v.get<std::string>());
            }
            return submit_tx(id_of(args.at("caller").get<std::string>()),
                contract_call_payload { id_of(args.at("contract").get<std::string>()).owner, method, call_args },
                args.value("signed", true), a.pool, args.value("shard", 0u), _policy)
                .rejected;
        }
        throw error { errc::unknown_action, a.op };
    }

    std::optional<std::string> act_transfer(const scenario_action &a)
    {
        const auto &args = a.args;
        const auto &from = id_of(args.at("from").get<std::string>());
        const auto &to = id_of(args.at("to").get<std::string>()).owner;
        const auto amount = scenario_detail::amount_from_json(args.at("amount"));
        auto &inst = cur();
        uint32_t source = args.contains("shard") ? args.at("shard").get<uint32_t>()
                                                 : home_shard(from.owner, inst.net.count);
        if (source >= inst.net.count)
            throw error { errc::unknown_shard, "shard " + std::to_string(source) };
        const uint32_t target = home_shard(to, inst.net.count);
        if (source == target) {
            return submit_tx(from, transfer_payload { to, amount }, args.value("signed", true), a.pool, source,
                _policy)
                .rejected;
        }
        const auto out = submit_tx(from,
            xshard_debit_payload { to, amount, target, escrow_address(inst.net, source) },
            args.value("signed", true), a.pool, source, _policy);
        if (out.rejected.has_value() || a.pool)
            return out.rejected;
        const auto mode = args.value("xs", std::string { "settle" });
        if (mode == "settle")
            settle_cross_shard(inst.net, out.tx_id, &_freezes);
        else if (mode == "abort")
            abort_cross_shard(inst.net, out.tx_id, &_freezes);
        else if (mode != "defer")
            throw error { errc::syntax_error, "bad xs mode " + mode };
        return std::nullopt;
    }

    std::optional<std::string> act_open_proposal(const njson &args)
    {
        const uint64_t id = args.at("id").get<uint64_t>();
        if (_props.contains(id))
            throw error { errc::syntax_error, "proposal " + std::to_string(id) + " already exists" };
        const auto mechanism = args.at("mechanism").get<std::string>();
        governance_echo("open-proposal", "proposal=" + std::to_string(id) + " mechanism=" + mechanism);
        proposal_record rec;
        rec.prop.id = id;
        rec.prop.description = args.value("description", std::string {});
        rec.prop.mechanism = mechanism;
        rec.prop.opened_at = height0();
        rec.prop.closes_at = height0() + args.at("closes_in").get<uint64_t>();
        _props.emplace(id, std::move(rec));
        if (mechanism == "carbon")
            _carbon.emplace(id, carbonvote_session { id });
        else if (mechanism == "quadratic")
            _quad.emplace(id, quadratic_session { id });
        else if (mechanism == "crosschain")
            _foreign.emplace(id, crosschain_session { id });
        return std::nullopt;
    }

    std::optional<std::string> act_vote(const scenario_action &a)
    {
        const auto &args = a.args;
        auto &rec = proposal_at(args.at("proposal").get<uint64_t>());
        require_open(rec);
        const auto &voter = id_of(args.at("voter").get<std::string>());
        const auto choice
            = args.at("choice").get<std::string>() == "accept" ? vote_choice::accept : vote_choice::reject;
        const uint64_t id = rec.prop.id;

        vote_action_payload p;
        p.proposal = id;
        uint64_t votes = 1;
        if (a.op == "carbonvote") {
            if (rec.prop.mechanism != "carbon")
                throw error { errc::syntax_error, "proposal " + std::to_string(id) + " is not a carbonvote" };
            p.kind = "carbon";
        } else if (a.op == "direct_vote") {
            if (rec.prop.mechanism != "liquid")
                throw error { errc::syntax_error, "proposal " + std::to_string(id) + " is not a liquid vote" };
            p.kind = "liquid";
            auto probe = _delegations; // reject before anything lands on chain
            probe.cast_direct(voter.owner, choice);
        } else {
            if (rec.prop.mechanism != "quadratic")
                throw error { errc::syntax_error, "proposal " + std::to_string(id) + " is not a quadratic vote" };
            p.kind = "quadratic";
            votes = args.at("votes").get<uint64_t>();
            const auto bill = _quad.at(id).bill(voter.owner, votes);
            p.cost = bill.cost;
            p.refund = bill.refund;
        }
        p.attrs = { { "proposal", std::to_string(id) }, { "voter", voter.owner.hex() },
            { "choice", vote_choice_name(choice) }, { "votes", std::to_string(votes) } };

        const auto out
            = submit_tx(voter, p, args.value("signed", true), false, args.value("shard", 0u), _policy);
        if (out.rejected.has_value())
            return out.rejected;
        if (a.op == "carbonvote")
            _carbon.at(id).cast(voter.owner, choice);
        else if (a.op == "direct_vote")
            _delegations.cast_direct(voter.owner, choice);
        else
            _quad.at(id).record(voter.owner, choice, votes);
        return std::nullopt;
    }

    std::optional<std::string> act_tally(const njson &args)
    {
        auto &rec = proposal_at(args.at("proposal").get<uint64_t>());
        require_closed(rec);
        if (rec.prop.mechanism == "carbon") {
            record_outcome(rec, _carbon.at(rec.prop.id).tally(merged_state(cur())));
        } else if (rec.prop.mechanism == "quadratic") {
            record_outcome(rec, _quad.at(rec.prop.id).tally());
        } else if (rec.prop.mechanism == "liquid") {
            const auto out = liquid_tally(_delegations, merged_state(cur()));
            record_outcome(rec, out.result);
            rec.counted = out.counted;
            rec.uncounted = out.uncounted;
            rec.max_share = out.max_delegate_share;
            _delegations.direct_votes.clear();
        } else {
            throw error { errc::syntax_error, "crosschain proposals tally via crosschain_tally" };
        }
        governance_echo("tally",
            "proposal=" + std::to_string(rec.prop.id) + " decision=" + proposal_status_name(rec.prop.status));
        return std::nullopt;
    }

    std::optional<std::string> act_dictator(const njson &args)
    {
        auto &rec = proposal_at(args.at("proposal").get<uint64_t>());
        if (!rec.tallied)
            throw error { errc::not_closed, "no community outcome to finalize yet" };
        const auto &who = id_of(args.at("by").get<std::string>()).owner;
        const bool veto = args.value("veto", false);
        rec.prop.status = dictator_finalize(_dict, who, veto, rec.prop.status == proposal_status::accepted,
            rec.prop.closes_at, height0());
        governance_echo("finalize",
            "proposal=" + std::to_string(rec.prop.id) + " decision=" + proposal_status_name(rec.prop.status));
        return std::nullopt;
    }

    crosschain_session &foreign_session(uint64_t id)
    {
        const auto it = _foreign.find(id);
        if (it == _foreign.end())
            throw error { errc::syntax_error, "proposal " + std::to_string(id) + " is not cross-chain" };
        return it->second;
    }

    std::optional<std::string> act_crosschain_tally(const njson &args)
    {
        auto &rec = proposal_at(args.at("proposal").get<uint64_t>());
        require_closed(rec);
        auto m = foreign_session(rec.prop.id).tally_and_relay();
        if (args.value("tamper", false))
            m.accept_weight += token_amount::from_tokens(1); // digest no longer covers the content
        record_outcome(rec, accept_relay(m));
        governance_echo("crosschain-tally",
            "proposal=" + std::to_string(rec.prop.id) + " decision=" + proposal_status_name(rec.prop.status));
        return std::nullopt;
    }

    std::optional<std::string> act_freeze(bool on, const njson &args)
    {
        const auto &by = id_of(args.at("by").get<std::string>()).owner;
        const auto scope = args.value("scope", std::string { "network" });
        const auto reason = args.value("reason", std::string {});
        if (scope == "network") {
            if (on)
                freeze_network(_freezes, _privileged, by, height0(), reason);
            else
                unfreeze_network(_freezes, _privileged, by);
        } else if (scope == "contract") {
            const auto &target = id_of(args.at("contract").get<std::string>()).owner;
            if (on)
                freeze_contract(_freezes, _privileged, by, target, height0(), reason);
            else
                unfreeze_contract(_freezes, _privileged, by, target);
        } else if (scope == "shard") {
            const auto shard = args.at("shard").get<uint32_t>();
            if (on)
                freeze_shard(_freezes, _privileged, by, shard, height0(), reason);
            else
                unfreeze_shard(_freezes, _privileged, by, shard);
        } else {
            throw error { errc::syntax_error, "bad freeze scope " + scope };
        }
        return std::nullopt;
    }

    std::optional<std::string> act_fork(const njson &args)
    {
        auto &inst = cur();
        protocol_rules rules = inst.net.shards[0].rules;
        if (args.contains("rules")) {
            const auto &r = args.at("rules");
            rules.version = r.value("version", rules.version + 1);
            rules.max_block_txs = r.value("max_block_txs", rules.max_block_txs);
            rules.validity_predicate = r.value("validity_predicate", rules.validity_predicate);
        }
        if (args.at("kind").get<std::string>() == "soft") {
            apply_soft_fork(inst.net.shards[0], rules, args.at("adoption").get<double>(), _doc.adoption_majority);
            return std::nullopt;
        }
        const auto at_height = args.at("at_height").get<uint64_t>();
        const auto name = args.at("name").get<std::string>();
        if (_instances.contains(name))
            throw error { errc::syntax_error, "instance " + name + " already exists" };
        net_instance forked;
        forked.net.count = 1;
        forked.net.validators = inst.net.validators;
        forked.net.understaffed = inst.net.understaffed;
        forked.net.escrow = inst.net.escrow;
        forked.net.fallback_validator = inst.net.fallback_validator;
        forked.net.shards.push_back(apply_hard_fork(inst.net.shards[0], at_height, rules));
        for (const auto &h: inst.net.coordinator.headers) {
            if (h.height <= at_height)
                forked.net.coordinator.headers.push_back(h);
        }
        forked.pools.resize(1);
        _instances.emplace(name, std::move(forked));
        _instance_order.push_back(name);
        _current = name;
        return std::nullopt;
    }

    // ---- assertions ----

    std::string eval_query(const std::string &q, const net_instance &inst)
    {
        const auto colon = q.find(':');
        const std::string key = colon == std::string::npos ? q : q.substr(0, colon);
        const std::string arg = colon == std::string::npos ? std::string {} : q.substr(colon + 1);
        const auto shard_arg = [&]() -> uint32_t {
            const uint32_t s = arg.empty() ? 0 : static_cast<uint32_t>(std::stoul(arg));
            if (s >= inst.net.count)
                throw error { errc::unknown_shard, "shard " + std::to_string(s) };
            return s;
        };
        const auto num_arg = [&]() { return std::stoull(arg); };
        const auto addr_arg = [&]() { return id_of(arg).owner; };

        if (key == "supply")
            return inst.net.global_supply().str();
        if (key == "balance" || key == "locked" || key == "holding") {
            const auto merged = merged_state(inst);
            const auto *acct = merged.find(addr_arg());
            if (acct == nullptr)
                return "0";
            if (key == "balance")
                return acct->spendable.str();
            if (key == "locked")
                return acct->locked.str();
            return acct->holding().str();
        }
        if (key == "height")
            return std::to_string(inst.net.shards[shard_arg()].height());
        if (key == "tip_hash")
            return hex_encode(inst.net.shards[shard_arg()].tip().hash);
        if (key == "pool")
            return std::to_string(inst.pools[shard_arg()].size());
        if (key == "status")
            return proposal_status_name(proposal_at(num_arg()).prop.status);
        if (key == "accept_weight")
            return proposal_at(num_arg()).accept_w;
        if (key == "reject_weight")
            return proposal_at(num_arg()).reject_w;
        if (key == "tie_broken")
            return bool_str(proposal_at(num_arg()).tie_broken);
        if (key == "counted")
            return std::to_string(proposal_at(num_arg()).counted);
        if (key == "uncounted")
            return std::to_string(proposal_at(num_arg()).uncounted);
        if (key == "max_share")
            return fmt_share(proposal_at(num_arg()).max_share);
        if (key == "quad_cost")
            return std::to_string(quadratic_cost_tokens(num_arg()));
        if (key == "funding") {
            const auto it = _funding.find(arg);
            if (it == _funding.end())
                throw error { errc::syntax_error, "unknown funding id " + arg };
            return it->second.str();
        }
        if (key == "taint")
            return fmt_share(taint_score(_scams, transfer_graph_from_events(merged_events(inst)), addr_arg()));
        if (key == "listed")
            return bool_str(_scams.is_listed(addr_arg()));
        if (key == "masternode")
            return bool_str(masternode_eligible(merged_state(inst), addr_arg(), _doc.masternode_threshold));
        if (key == "network_frozen")
            return bool_str(_freezes.network_frozen());
        if (key == "shard_frozen")
            return bool_str(_freezes.shard_frozen(static_cast<uint32_t>(num_arg())));
        if (key == "contract_frozen")
            return bool_str(_freezes.contract_frozen(addr_arg()));
        if (key == "maintainer")
            return _maint.maintainer ? name_of(*_maint.maintainer) : "none";
        if (key == "terminated")
            return bool_str(_maint.terminated);
        if (key == "social_threshold")
            return social_contract_threshold(_doc.contract_terms, num_arg()).str();
        if (key == "extract_count") {
            const auto it = _extractions.find(arg);
            if (it == _extractions.end())
                throw error { errc::syntax_error, "unknown extraction " + arg };
            return std::to_string(it->second.size());
        }
        if (key == "coordinator_headers")
            return std::to_string(inst.net.coordinator.headers.size());
        if (key == "takeover_flagged") {
            if (arg.empty())
                return std::to_string(inst.net.coordinator.takeover_flagged.size());
            return bool_str(inst.net.coordinator.takeover_flagged.contains(static_cast<uint32_t>(num_arg())));
        }
        if (key == "xs_pending" || key == "xs_settled" || key == "xs_aborted") {
            const auto want = key == "xs_pending" ? cross_shard_transfer::status_t::pending
                : key == "xs_settled"             ? cross_shard_transfer::status_t::settled
                                                  : cross_shard_transfer::status_t::aborted;
            size_t n = 0;
            for (const auto &[origin, xfer]: inst.net.transfers) {
                if (xfer.status == want)
                    ++n;
            }
            return std::to_string(n);
        }
        throw error { errc::syntax_error, "unknown query " + q };
    }

    static bool compare(const std::string &actual, const std::string &op, const std::string &expect)
    {
        const auto ordered = [&](auto a, auto b) {
            if (op == "eq")
                return a == b;
            if (op == "ne")
                return a != b;
            if (op == "lt")
                return a < b;
            if (op == "le")
                return a <= b;
            if (op == "gt")
                return a > b;
            return a >= b;
        };
        const auto try_token = [](const std::string &s, uint64_t &out) {
            try {
                out = token_amount::parse(s).base;
                return true;
            } catch (const error &) {
                return false;
            }
        };
        const auto try_double = [](const std::string &s, double &out) {
            char *end = nullptr;
            out = std::strtod(s.c_str(), &end);
            return end != s.c_str() && end != nullptr && *end == '\0';
        };
        uint64_t a = 0, b = 0;
        if (try_token(actual, a) && try_token(expect, b))
            return ordered(a, b);
        double x = 0, y = 0;
        if (try_double(actual, x) && try_double(expect, y))
            return ordered(x, y);
        if (op == "eq")
            return actual == expect;
        if (op == "ne")
            return actual != expect;
        throw error { errc::syntax_error, "ordered comparison of non-numeric values" };
    }

    // ---- reporting ----

    njson base_report()
    {
        njson report;
        report["version"] = 1;
        report["scenario"] = _doc.name;
        report["seed"] = _seed;
        report["actions"] = _action_log;

        const auto &inst = cur();
        njson heights = njson::object(), pools = njson::object();
        for (uint32_t s = 0; s < inst.net.count; ++s) {
            heights[std::to_string(s)] = inst.net.shards[s].height();
            pools[std::to_string(s)] = inst.pools[s].size();
        }
        njson accounts = njson::object();
        const auto merged = merged_state(inst);
        for (const auto &[name, amount]: _doc.accounts) {
            const auto *acct = merged.find(_ids.at(name).owner);
            njson entry;
            entry["spendable"] = acct ? acct->spendable.str() : "0";
            entry["locked"] = acct ? acct->locked.str() : "0";
            accounts[name] = std::move(entry);
        }
        njson summary;
        summary["supply"] = inst.net.global_supply().str();
        summary["heights"] = std::move(heights);
        summary["pools"] = std::move(pools);
        summary["accounts"] = std::move(accounts);
        summary["instances"] = _instance_order;
        summary["current_instance"] = _current;
        report["summary"] = std::move(summary);

        njson proposals = njson::object();
        for (const auto &[id, rec]: _props) {
            njson p;
            p["mechanism"] = rec.prop.mechanism;
            p["status"] = proposal_status_name(rec.prop.status);
            if (rec.tallied) {
                p["accept_weight"] = rec.accept_w;
                p["reject_weight"] = rec.reject_w;
                p["tie_broken"] = rec.tie_broken;
            }
            proposals[std::to_string(id)] = std::move(p);
        }
        njson governance;
        governance["proposals"] = std::move(proposals);
        governance["maintainer"] = _maint.maintainer ? name_of(*_maint.maintainer) : "none";
        governance["terminated"] = _maint.terminated;
        report["governance"] = std::move(governance);

        njson controls;
        controls["network_frozen"] = _freezes.network_frozen();
        njson frozen_shards = njson::array();
        for (const auto &[s, recd]: _freezes.shards)
            frozen_shards.push_back(s);
        controls["frozen_shards"] = std::move(frozen_shards);
        njson frozen_contracts = njson::array();
        for (const auto &[c, recd]: _freezes.contracts)
            frozen_contracts.push_back(name_of(c));
        controls["frozen_contracts"] = std::move(frozen_contracts);
        njson listed = njson::array();
        for (const auto &a: _scams.listed_now())
            listed.push_back(name_of(a));
        controls["scam_listed"] = std::move(listed);
        report["controls"] = std::move(controls);

        njson sharding;
        sharding["coordinator_headers"] = inst.net.coordinator.headers.size();
        njson flagged = njson::array();
        for (const auto s: inst.net.coordinator.takeover_flagged)
            flagged.push_back(s);
        sharding["takeover_flagged"] = std::move(flagged);
        size_t pending = 0, settled = 0, aborted = 0;
        for (const auto &[origin, xfer]: inst.net.transfers) {
            if (xfer.status == cross_shard_transfer::status_t::pending)
                ++pending;
            else if (xfer.status == cross_shard_transfer::status_t::settled)
                ++settled;
            else
                ++aborted;
        }
        njson xfers;
        xfers["pending"] = pending;
        xfers["settled"] = settled;
        xfers["aborted"] = aborted;
        sharding["transfers"] = std::move(xfers);
        report["sharding"] = std::move(sharding);

        njson extractions = njson::object();
        for (const auto &[id, records]: _extractions) {
            njson lines = njson::array();
            for (const auto &r: records) {
                std::string line = std::to_string(r.height) + "\t" + hex_encode(r.tx_id) + "\t" + r.kind;
                for (const auto &[k, v]: r.attributes)
                    line += "\t" + k + "=" + v;
                lines.push_back(std::move(line));
            }
            extractions[id] = std::move(lines);
        }
        report["extractions"] = std::move(extractions);

        njson funding = njson::object();
        for (const auto &[id, amount]: _funding)
            funding[id] = amount.str();
        report["funding"] = std::move(funding);
        return report;
    }

    scenario_result failure(size_t action_index, const std::string &op, const std::string &message)
    {
        auto report = base_report();
        njson err;
        err["action"] = action_index;
        err["op"] = op;
        err["message"] = message;
        report["error"] = std::move(err);
        report["passed"] = false;
        return scenario_result { std::move(report), 2 };
    }
};

inline scenario_result run_scenario(const scenario_doc &doc, std::optional<uint64_t> seed_override = std::nullopt)
{
    scenario_engine engine { doc, seed_override };
    return engine.run();
}

// Human-oriented rendering of a report; the JSON form is the canonical one.
inline std::string render_text_report(const njson &report)
{
    std::string out;
    out += "scenario: " + report.at("scenario").get<std::string>() + "\n";
    out += "seed: " + std::to_string(report.at("seed").get<uint64_t>()) + "\n";
    for (const auto &entry: report.at("actions"))
        out += "  action " + std::to_string(entry.at("index").get<uint64_t>()) + " "
            + entry.at("op").get<std::string>() + ": " + entry.at("status").get<std::string>() + "\n";
    if (report.contains("assertions")) {
        for (const auto &entry: report.at("assertions")) {
            out += std::string { entry.at("pass").get<bool>() ? "  PASS " : "  FAIL " }
                + entry.at("query").get<std::string>() + " " + entry.at("op").get<std::string>() + " "
                + entry.at("expect").get<std::string>() + " (actual "
                + entry.at("actual").get<std::string>() + ")\n";
        }
    }
    if (report.contains("error")) {
        const auto &err = report.at("error");
        out += "error at action " + std::to_string(err.at("action").get<uint64_t>()) + " ("
            + err.at("op").get<std::string>() + "): " + err.at("message").get<std::string>() + "\n";
    }
    out += std::string { "result: " } + (report.at("passed").get<bool>() ? "passed" : "failed") + "\n";
    return out;
}

} // namespace govsim
