// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace govsim {

// Seeded generator with explicit reductions. std::uniform_int_distribution
// and std::shuffle are implementation-defined, so everything that can reach
// a report draws through this instead.
struct deterministic_rng {
    explicit deterministic_rng(uint64_t seed):
        _gen { seed }
    {
    }

    uint64_t next()
    {
        return _gen();
    }

    // Unbiased draw in [0, bound) by rejection sampling.
    uint64_t below(uint64_t bound)
    {
        if (bound == 0)
            return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            const uint64_t v = _gen();
            if (v < limit)
                return v % bound;
        }
    }

    template<typename T>
    void shuffle(std::vector<T> &items)
    {
        if (items.size() < 2)
            return;
        for (size_t i = items.size() - 1; i > 0; --i) {
            const size_t j = below(i + 1);
            std::swap(items[i], items[j]);
        }
    }

    template<typename T>
    const T &pick(const std::vector<T> &items)
    {
        return items[below(items.size())];
    }

private:
    std::mt19937_64 _gen;
};

} // namespace govsim
