// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace govsim {

using uint128 = unsigned __int128;

// Every failure the engine can raise. Scenario runs map these onto failed
// actions; tests match on the code rather than the message.
enum class errc {
    insufficient_spendable,
    nonce_mismatch,
    frozen,
    overflow,
    zero_amount,
    sender_key_mismatch,
    unknown_scheme,
    pool_full,
    zero_shards,
    no_validators,
    unknown_shard,
    already_settled,
    not_closed,
    cycle_detected,
    self_delegation,
    delegation_active,
    not_dictator,
    veto_window_expired,
    tokens_not_issued,
    relay_mismatch,
    not_backward_compatible,
    insufficient_adoption,
    height_beyond_tip,
    team_still_active,
    not_yet_unlockable,
    already_resolved,
    not_privileged,
    unknown_kind,
    unknown_attribute,
    empty_range,
    rule_violation,
    empty_validator,
    syntax_error,
    unknown_action,
    undeclared_identity,
};

inline const char *errc_name(errc c)
{
    switch (c) {
    case errc::insufficient_spendable: return "InsufficientSpendable";
    case errc::nonce_mismatch: return "NonceMismatch";
    case errc::frozen: return "Frozen";
    case errc::overflow: return "Overflow";
    case errc::zero_amount: return "ZeroAmount";
    case errc::sender_key_mismatch: return "SenderKeyMismatch";
    case errc::unknown_scheme: return "UnknownScheme";
    case errc::pool_full: return "PoolFull";
    case errc::zero_shards: return "ZeroShards";
    case errc::no_validators: return "NoValidators";
    case errc::unknown_shard: return "UnknownShard";
    case errc::already_settled: return "AlreadySettled";
    case errc::not_closed: return "NotClosed";
    case errc::cycle_detected: return "CycleDetected";
    case errc::self_delegation: return "SelfDelegation";
    case errc::delegation_active: return "DelegationActive";
    case errc::not_dictator: return "NotDictator";
    case errc::veto_window_expired: return "VetoWindowExpired";
    case errc::tokens_not_issued: return "TokensNotIssued";
    case errc::relay_mismatch: return "RelayMismatch";
    case errc::not_backward_compatible: return "NotBackwardCompatible";
    case errc::insufficient_adoption: return "InsufficientAdoption";
    case errc::height_beyond_tip: return "HeightBeyondTip";
    case errc::team_still_active: return "TeamStillActive";
    case errc::not_yet_unlockable: return "NotYetUnlockable";
    case errc::already_resolved: return "AlreadyResolved";
    case errc::not_privileged: return "NotPrivileged";
    case errc::unknown_kind: return "UnknownKind";
    case errc::unknown_attribute: return "UnknownAttribute";
    case errc::empty_range: return "EmptyRange";
    case errc::rule_violation: return "RuleViolation";
    case errc::empty_validator: return "EmptyValidator";
    case errc::syntax_error: return "SyntaxError";
    case errc::unknown_action: return "UnknownAction";
    case errc::undeclared_identity: return "UndeclaredIdentity";
    }
    return "Unknown";
}

struct error : std::runtime_error {
    errc code;
    error(errc c, const std::string &msg):
        std::runtime_error { std::string { errc_name(c) } + ": " + msg },
        code { c }
    {
    }
};

using bytes = std::vector<uint8_t>;
using bytes32 = std::array<uint8_t, 32>;

inline std::string hex_encode(std::span<const uint8_t> data)
{
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (const auto b: data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

inline int hex_nibble(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

inline bytes hex_decode(const std::string &s)
{
    if (s.size() % 2 != 0)
        throw error { errc::syntax_error, "hex string has odd length" };
    bytes out;
    out.reserve(s.size() / 2);
    for (size_t i = 0; i < s.size(); i += 2) {
        const int hi = hex_nibble(s[i]);
        const int lo = hex_nibble(s[i + 1]);
        if (hi < 0 || lo < 0)
            throw error { errc::syntax_error, "invalid hex digit" };
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

// 32-byte opaque on-chain identifier. Equality is byte equality; ordering is
// lexicographic so that map iteration is deterministic.
struct address {
    bytes32 id {};

    auto operator<=>(const address &) const = default;

    bool is_zero() const
    {
        for (const auto b: id) {
            if (b != 0)
                return false;
        }
        return true;
    }

    std::string hex() const
    {
        return hex_encode(id);
    }

    static address from_hex(const std::string &s)
    {
        const auto raw = hex_decode(s);
        if (raw.size() != 32)
            throw error { errc::syntax_error, "address must be 32 bytes" };
        address a;
        std::memcpy(a.id.data(), raw.data(), 32);
        return a;
    }
};

// Append-only byte buffer used to build the canonical preimages that feed the
// hash function. Integers are little-endian; variable-size fields are
// length-prefixed so distinct field sequences can never collide.
struct byte_writer {
    bytes buf {};

    void u8(uint8_t v)
    {
        buf.push_back(v);
    }

    void u32(uint32_t v)
    {
        for (int i = 0; i < 4; ++i)
            buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u64(uint64_t v)
    {
        for (int i = 0; i < 8; ++i)
            buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void raw(std::span<const uint8_t> data)
    {
        buf.insert(buf.end(), data.begin(), data.end());
    }

    void blob(std::span<const uint8_t> data)
    {
        u64(data.size());
        raw(data);
    }

    void str(const std::string &s)
    {
        u64(s.size());
        buf.insert(buf.end(), s.begin(), s.end());
    }
};

// Bounds-checked counterpart of byte_writer; malformed input raises instead
// of reading past the end.
struct byte_reader {
    std::span<const uint8_t> buf;
    size_t pos = 0;

    void need(size_t n) const
    {
        if (buf.size() - pos < n || pos > buf.size())
            throw error { errc::syntax_error, "truncated byte stream" };
    }

    uint8_t u8()
    {
        need(1);
        return buf[pos++];
    }

    uint32_t u32()
    {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(buf[pos++]) << (8 * i);
        return v;
    }

    uint64_t u64()
    {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<uint64_t>(buf[pos++]) << (8 * i);
        return v;
    }

    bytes32 b32()
    {
        need(32);
        bytes32 out;
        std::memcpy(out.data(), buf.data() + pos, 32);
        pos += 32;
        return out;
    }

    bytes blob()
    {
        const uint64_t n = u64();
        need(n);
        bytes out { buf.begin() + static_cast<ptrdiff_t>(pos), buf.begin() + static_cast<ptrdiff_t>(pos + n) };
        pos += n;
        return out;
    }

    std::string str()
    {
        const uint64_t n = u64();
        need(n);
        std::string out { buf.begin() + static_cast<ptrdiff_t>(pos), buf.begin() + static_cast<ptrdiff_t>(pos + n) };
        pos += n;
        return out;
    }

    bool done() const
    {
        return pos == buf.size();
    }
};

} // namespace govsim
