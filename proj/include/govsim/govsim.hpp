// Copyright (c) 2026 The govsim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.
#pragma once

#include <govsim/admission.hpp>
#include <govsim/common.hpp>
#include <govsim/controls.hpp>
#include <govsim/events.hpp>
#include <govsim/hash.hpp>
#include <govsim/keys.hpp>
#include <govsim/ledger.hpp>
#include <govsim/lifecycle.hpp>
#include <govsim/rng.hpp>
#include <govsim/scenario.hpp>
#include <govsim/sharding.hpp>
#include <govsim/token.hpp>
#include <govsim/votes.hpp>
