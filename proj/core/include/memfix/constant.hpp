// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "memfix/domain.hpp"

namespace memfix {

/// Flat constant lattice without its bottom (⊥ is a state-level value).
struct Constant {
    bool is_top = true;
    std::int64_t value = 0;

    static Constant top() { return {}; }
    static Constant of(std::int64_t c) { return {false, c}; }
    friend bool operator==(const Constant&, const Constant&) = default;
};

struct ConstantOps {
    using Value = Constant;

    static Constant top() { return Constant::top(); }
    static Constant constant(std::int64_t c) { return Constant::of(c); }
    static Constant join(const Constant& a, const Constant& b);
    /// The lattice has finite height, so widening is join.
    static Constant widen(const Constant& a, const Constant& b) { return join(a, b); }
    static bool leq(const Constant& a, const Constant& b);
    static Constant arith(ArithOp op, const Constant& a, const Constant& b);
    static std::optional<Constant> refine(const Constant& a, Relation rel, std::int64_t c);
    static bool entails(const Constant& a, Relation rel, std::int64_t c);
    static bool contains(const Constant& a, std::int64_t c);
    static std::string to_string(const Constant& a);
};

using ConstantDomain = NonRelationalDomain<ConstantOps>;

}  // namespace memfix
