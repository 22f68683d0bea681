// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <govsim/common.hpp>

namespace govsim {

// Integer fixed-point token value: 1 token = 1000 base units. All arithmetic
// is checked; overflow and underflow raise instead of wrapping.
struct token_amount {
    static constexpr uint64_t base_per_token = 1000;

    uint64_t base = 0;

    auto operator<=>(const token_amount &) const = default;

    static token_amount from_base(uint64_t base_units)
    {
        return token_amount { base_units };
    }

    static token_amount from_tokens(uint64_t tokens)
    {
        if (tokens > UINT64_MAX / base_per_token)
            throw error { errc::overflow, "token count too large" };
        return token_amount { tokens * base_per_token };
    }

    // Accepts "12", "12.5", "12.345"; at most 3 fractional digits.
    static token_amount parse(const std::string &s)
    {
        if (s.empty())
            throw error { errc::syntax_error, "empty token amount" };
        uint64_t whole = 0;
        size_t i = 0;
        if (s[i] == '-')
            throw error { errc::syntax_error, "token amounts are never negative: " + s };
        bool any_digit = false;
        for (; i < s.size() && s[i] != '.'; ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw error { errc::syntax_error, "bad token amount: " + s };
            if (whole > (UINT64_MAX - (s[i] - '0')) / 10)
                throw error { errc::overflow, "token amount too large: " + s };
            whole = whole * 10 + (s[i] - '0');
            any_digit = true;
        }
        uint64_t frac = 0;
        if (i < s.size()) {
            ++i; // skip '.'
            size_t digits = 0;
            if (i == s.size())
                throw error { errc::syntax_error, "bad token amount: " + s };
            for (; i < s.size(); ++i, ++digits) {
                if (s[i] < '0' || s[i] > '9' || digits >= 3)
                    throw error { errc::syntax_error, "bad token amount: " + s };
                frac = frac * 10 + (s[i] - '0');
                any_digit = true;
            }
            while (digits < 3) {
                frac *= 10;
                ++digits;
            }
        }
        if (!any_digit)
            throw error { errc::syntax_error, "bad token amount: " + s };
        const auto whole_base = from_tokens(whole);
        return whole_base + token_amount { frac };
    }

    // Canonical decimal form: fractional digits only when nonzero ("86", "0.5", "12.345").
    std::string str() const
    {
        const uint64_t whole = base / base_per_token;
        const uint64_t frac = base % base_per_token;
        auto out = std::to_string(whole);
        if (frac != 0) {
            char digits[4];
            std::snprintf(digits, sizeof digits, "%03llu", static_cast<unsigned long long>(frac));
            out.push_back('.');
            out.append(digits);
            while (out.back() == '0')
                out.pop_back();
        }
        return out;
    }

    token_amount operator+(const token_amount &o) const
    {
        uint64_t r;
        if (__builtin_add_overflow(base, o.base, &r))
            throw error { errc::overflow, "token addition overflow" };
        return token_amount { r };
    }

    token_amount operator-(const token_amount &o) const
    {
        if (o.base > base)
            throw error { errc::insufficient_spendable, "token subtraction below zero" };
        return token_amount { base - o.base };
    }

    token_amount &operator+=(const token_amount &o)
    {
        return *this = *this + o;
    }

    token_amount &operator-=(const token_amount &o)
    {
        return *this = *this - o;
    }

    bool is_zero() const
    {
        return base == 0;
    }
};

} // namespace govsim
