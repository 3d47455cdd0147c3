// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "memfix/domain.hpp"

namespace memfix {

/// [lo, hi] over int64 extended with infinities. INT64_MIN stands for −∞
/// and INT64_MAX for +∞; a finite bound therefore lies in
/// [INT64_MIN + 1, INT64_MAX − 1]. Arithmetic saturates to the infinities.
struct Interval {
    static constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
    static constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

    std::int64_t lo = kNegInf;
    std::int64_t hi = kPosInf;

    static Interval top() { return {}; }
    static Interval point(std::int64_t c);
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalOps {
    using Value = Interval;

    static Interval top() { return Interval::top(); }
    static Interval constant(std::int64_t c) { return Interval::point(c); }
    static Interval join(const Interval& a, const Interval& b);
    static Interval widen(const Interval& a, const Interval& b);
    static bool leq(const Interval& a, const Interval& b);
    static Interval arith(ArithOp op, const Interval& a, const Interval& b);
    static std::optional<Interval> refine(const Interval& a, Relation rel, std::int64_t c);
    static bool entails(const Interval& a, Relation rel, std::int64_t c);
    static bool contains(const Interval& a, std::int64_t c);
    static std::string to_string(const Interval& a);
};

using IntervalDomain = NonRelationalDomain<IntervalOps>;

}  // namespace memfix
