// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <algorithm>
#include <map>
#include <set>

#include <govsim/ledger.hpp>

namespace govsim {

// kind -> attribute names an event of that kind may carry
using event_schema = std::map<std::string, std::vector<std::string>>;

inline event_schema default_event_schema()
{
    return event_schema {
        { "Transfer", { "from", "to", "amount" } },
        { "Burn", { "owner", "amount" } },
        { "Lock", { "owner", "amount", "purpose" } },
        { "LockResolve", { "record", "owner", "amount", "action" } },
        { "Vote", { "proposal", "voter", "choice", "votes" } },
        { "Governance", { "action", "detail" } },
        { "XShardDebit", { "from", "to", "amount", "target_shard" } },
        { "XShardCredit", { "to", "amount", "source_shard" } },
        { "XShardReceipt", { "escrow", "amount" } },
        { "XShardRefund", { "to", "amount" } },
    };
}

struct event_pipeline {
    std::set<std::string> kinds {};       // empty = every known kind
    uint64_t from_height = 0;             // inclusive
    uint64_t to_height = UINT64_MAX;      // inclusive
    std::vector<std::string> projection {}; // empty = all attributes, as emitted
};

inline void validate_pipeline(const event_pipeline &p, const event_schema &schema)
{
    if (p.to_height < p.from_height)
        throw error { errc::empty_range,
            "heights " + std::to_string(p.from_height) + ".." + std::to_string(p.to_height) };
    for (const auto &k: p.kinds) {
        if (!schema.contains(k))
            throw error { errc::unknown_kind, k };
    }
    // a projected attribute must be available on every kind the pipeline selects
    const auto check_attr = [&](const std::string &attr, const std::string &kind) {
        const auto &attrs = schema.at(kind);
        if (std::find(attrs.begin(), attrs.end(), attr) == attrs.end())
            throw error { errc::unknown_attribute, attr + " on " + kind };
    };
    for (const auto &attr: p.projection) {
        if (p.kinds.empty()) {
            for (const auto &[kind, attrs]: schema)
                check_attr(attr, kind);
        } else {
            for (const auto &kind: p.kinds)
                check_attr(attr, kind);
        }
    }
}

struct extracted_record {
    uint64_t height = 0;
    bytes32 tx_id {};
    std::string kind {};
    attr_list attributes {};

    bool operator==(const extracted_record &) const = default;
};

inline extracted_record project_event(const event &e, const std::vector<std::string> &projection)
{
    extracted_record rec { e.block_height, e.tx_id, e.kind, {} };
    if (projection.empty()) {
        rec.attributes = e.attributes;
        return rec;
    }
    for (const auto &want: projection) {
        for (const auto &[k, v]: e.attributes) {
            if (k == want) {
                rec.attributes.emplace_back(k, v);
                break;
            }
        }
    }
    return rec;
}

// Pre-indexes the stream by kind, then merges the selected buckets back into
// stream order. Equivalent to one linear scan; the shape exists so the index
// can be reused across pipelines over the same stream.
struct event_index {
    std::map<std::string, std::vector<size_t>> by_kind {};
    const std::vector<event> *stream = nullptr;

    explicit event_index(const std::vector<event> &events)
        : stream { &events }
    {
        for (size_t i = 0; i < events.size(); ++i)
            by_kind[events[i].kind].push_back(i);
    }

    std::vector<extracted_record> extract(const event_pipeline &p, const event_schema &schema) const
    {
        validate_pipeline(p, schema);
        std::vector<size_t> selected;
        for (const auto &[kind, positions]: by_kind) {
            if (!p.kinds.empty() && !p.kinds.contains(kind))
                continue;
            if (p.kinds.empty() && !schema.contains(kind))
                continue;
            selected.insert(selected.end(), positions.begin(), positions.end());
        }
        std::sort(selected.begin(), selected.end());
        std::vector<extracted_record> out;
        for (const size_t pos: selected) {
            const auto &e = (*stream)[pos];
            if (e.block_height < p.from_height || e.block_height > p.to_height)
                continue;
            out.push_back(project_event(e, p.projection));
        }
        return out;
    }
};

inline std::vector<extracted_record> extract_logs(
    const std::vector<event> &events, const event_pipeline &p, const event_schema &schema)
{
    return event_index { events }.extract(p, schema);
}

// One record per line: height, transaction id, kind, then the projected
// attributes in projection order.
inline std::string records_to_lines(const std::vector<extracted_record> &records)
{
    std::string out;
    for (const auto &r: records) {
        out += std::to_string(r.height);
        out += '\t';
        out += hex_encode(r.tx_id);
        out += '\t';
        out += r.kind;
        for (const auto &[k, v]: r.attributes) {
            out += '\t';
            out += k;
            out += '=';
            out += v;
        }
        out += '\n';
    }
    return out;
}

} // namespace govsim
