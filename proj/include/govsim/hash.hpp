// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <openssl/evp.h>

#include <govsim/common.hpp>

namespace govsim {

inline bytes32 sha256(std::span<const uint8_t> data)
{
    bytes32 out {};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != 32)
        throw std::runtime_error { "sha256 digest failed" };
    return out;
}

inline bytes32 sha256(const byte_writer &w)
{
    return sha256(std::span<const uint8_t> { w.buf.data(), w.buf.size() });
}

inline bytes32 sha256(const std::string &s)
{
    return sha256(std::span<const uint8_t> { reinterpret_cast<const uint8_t *>(s.data()), s.size() });
}

inline address address_of(const bytes32 &public_key)
{
    byte_writer w;
    w.str("govsim.addr");
    w.raw(public_key);
    return address { sha256(w) };
}

} // namespace govsim
