// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <functional>
#include <map>
#include <memory>

#include <govsim/common.hpp>
#include <govsim/hash.hpp>

namespace govsim {

// Detached signature over a 32-byte message digest.
struct signature {
    std::string scheme_id {};
    bytes sig {};

    bool empty() const
    {
        return sig.empty();
    }

    auto operator<=>(const signature &) const = default;
};

struct keypair {
    bytes32 private_key {};
    bytes32 public_key {};
    address owner {};

    // Deterministic keys from a seed string; fixtures name identities and the
    // engine derives the same keys every run.
    static keypair from_seed(const std::string &seed);
};

// Pluggable scheme. The default is a transparent simulation scheme
// (public_key == private_key, signature == hash(private_key || digest)):
// deterministic and tamper-evident, which is all the simulator asserts.
// A real asymmetric scheme can be registered behind the same interface.
struct signature_scheme {
    virtual ~signature_scheme() = default;
    virtual std::string name() const = 0;
    virtual bytes32 derive_public(const bytes32 &private_key) const = 0;
    virtual bytes sign(const bytes32 &private_key, const bytes32 &digest) const = 0;
    virtual bool verify(const bytes32 &public_key, const bytes32 &digest, const bytes &sig) const = 0;
};

struct sim_mac_scheme final : signature_scheme {
    static constexpr const char *id = "sim-mac-v1";

    std::string name() const override
    {
        return id;
    }

    bytes32 derive_public(const bytes32 &private_key) const override
    {
        return private_key;
    }

    bytes sign(const bytes32 &private_key, const bytes32 &digest) const override
    {
        byte_writer w;
        w.str("govsim.sig");
        w.raw(private_key);
        w.raw(digest);
        const auto mac = sha256(w);
        return bytes { mac.begin(), mac.end() };
    }

    bool verify(const bytes32 &public_key, const bytes32 &digest, const bytes &sig) const override
    {
        // public key doubles as the MAC key under the simulation scheme
        return sig == sign(public_key, digest);
    }
};

inline std::map<std::string, std::shared_ptr<const signature_scheme>> &scheme_registry()
{
    static std::map<std::string, std::shared_ptr<const signature_scheme>> reg {
        { sim_mac_scheme::id, std::make_shared<sim_mac_scheme>() },
    };
    return reg;
}

inline const signature_scheme &scheme_for(const std::string &scheme_id)
{
    const auto &reg = scheme_registry();
    const auto it = reg.find(scheme_id);
    if (it == reg.end())
        throw error { errc::unknown_scheme, scheme_id };
    return *it->second;
}

inline void register_scheme(std::shared_ptr<const signature_scheme> s)
{
    scheme_registry()[s->name()] = std::move(s);
}

inline keypair keypair::from_seed(const std::string &seed)
{
    byte_writer w;
    w.str("govsim.key");
    w.str(seed);
    keypair kp;
    kp.private_key = sha256(w);
    kp.public_key = scheme_for(sim_mac_scheme::id).derive_public(kp.private_key);
    kp.owner = address_of(kp.public_key);
    return kp;
}

inline signature sign_digest(const keypair &kp, const bytes32 &digest, const std::string &scheme_id = sim_mac_scheme::id)
{
    const auto &s = scheme_for(scheme_id);
    return signature { scheme_id, s.sign(kp.private_key, digest) };
}

inline bool verify_digest(const bytes32 &public_key, const bytes32 &digest, const signature &sig)
{
    const auto &s = scheme_for(sig.scheme_id);
    return s.verify(public_key, digest, sig.sig);
}

} // namespace govsim
