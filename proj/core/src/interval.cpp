// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/interval.hpp"

#include <algorithm>
#include <array>

namespace memfix {

namespace {

constexpr std::int64_t kNegInf = Interval::kNegInf;
constexpr std::int64_t kPosInf = Interval::kPosInf;

bool is_inf(std::int64_t x) { return x == kNegInf || x == kPosInf; }

// Extended-integer arithmetic. Results outside the finite range become the
// matching infinity; callers clamp bounds that would land on the wrong one.
std::int64_t ext_add(std::int64_t a, std::int64_t b) {
    if (a == kNegInf || b == kNegInf) {
        return kNegInf;
    }
    if (a == kPosInf || b == kPosInf) {
        return kPosInf;
    }
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) {
        return a > 0 ? kPosInf : kNegInf;
    }
    return r;
}

std::int64_t ext_neg(std::int64_t a) {
    if (a == kNegInf) {
        return kPosInf;
    }
    if (a == kPosInf) {
        return kNegInf;
    }
    return -a;
}

std::int64_t ext_mul(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) {
        return 0;
    }
    bool negative = (a < 0) != (b < 0);
    if (is_inf(a) || is_inf(b)) {
        return negative ? kNegInf : kPosInf;
    }
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        return negative ? kNegInf : kPosInf;
    }
    return r;
}

// A lower bound of +∞ or upper bound of −∞ comes from saturation of values
// beyond the finite range; pull it back to the nearest finite bound.
Interval make(std::int64_t lo, std::int64_t hi) {
    if (lo == kPosInf) {
        lo = kPosInf - 1;
    }
    if (hi == kNegInf) {
        hi = kNegInf + 1;
    }
    return {lo, hi};
}

}  // namespace

Interval Interval::point(std::int64_t c) { return make(c, c); }

Interval IntervalOps::join(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval IntervalOps::widen(const Interval& a, const Interval& b) {
    return {b.lo < a.lo ? kNegInf : a.lo, b.hi > a.hi ? kPosInf : a.hi};
}

bool IntervalOps::leq(const Interval& a, const Interval& b) {
    return b.lo <= a.lo && a.hi <= b.hi;
}

Interval IntervalOps::arith(ArithOp op, const Interval& a, const Interval& b) {
    switch (op) {
        case ArithOp::kAdd:
            return make(ext_add(a.lo, b.lo), ext_add(a.hi, b.hi));
        case ArithOp::kSub:
            return make(ext_add(a.lo, ext_neg(b.hi)), ext_add(a.hi, ext_neg(b.lo)));
        case ArithOp::kMul: {
            std::array<std::int64_t, 4> c{ext_mul(a.lo, b.lo), ext_mul(a.lo, b.hi),
                                          ext_mul(a.hi, b.lo), ext_mul(a.hi, b.hi)};
            return make(*std::min_element(c.begin(), c.end()), *std::max_element(c.begin(), c.end()));
        }
    }
    return top();
}

std::optional<Interval> IntervalOps::refine(const Interval& a, Relation rel, std::int64_t c) {
    std::int64_t lo = a.lo;
    std::int64_t hi = a.hi;
    switch (rel) {
        case Relation::kLt:
            if (c == kNegInf) {
                return std::nullopt;
            }
            hi = std::min(hi, c - 1);
            break;
        case Relation::kLe:
            hi = std::min(hi, c);
            break;
        case Relation::kEq:
            lo = std::max(lo, c);
            hi = std::min(hi, c);
            break;
        case Relation::kNe:
            if (lo == c && hi == c) {
                return std::nullopt;
            }
            if (lo == c) {
                ++lo;
            } else if (hi == c) {
                --hi;
            }
            break;
        case Relation::kGe:
            lo = std::max(lo, c);
            break;
        case Relation::kGt:
            if (c == kPosInf) {
                return std::nullopt;
            }
            lo = std::max(lo, c + 1);
            break;
    }
    if (lo > hi) {
        return std::nullopt;
    }
    return make(lo, hi);
}

bool IntervalOps::entails(const Interval& a, Relation rel, std::int64_t c) {
    switch (rel) {
        case Relation::kLt:
            return a.hi < c;
        case Relation::kLe:
            return a.hi != kPosInf && a.hi <= c;
        case Relation::kEq:
            return a.lo == c && a.hi == c && !is_inf(c);
        case Relation::kNe:
            return a.hi < c || a.lo > c;
        case Relation::kGe:
            return a.lo != kNegInf && a.lo >= c;
        case Relation::kGt:
            return a.lo > c;
    }
    return false;
}

bool IntervalOps::contains(const Interval& a, std::int64_t c) { return a.lo <= c && c <= a.hi; }

std::string IntervalOps::to_string(const Interval& a) {
    auto bound = [](std::int64_t x) {
        if (x == kNegInf) {
            return std::string("-oo");
        }
        if (x == kPosInf) {
            return std::string("+oo");
        }
        return std::to_string(x);
    };
    return "[" + bound(a.lo) + ", " + bound(a.hi) + "]";
}

}  // namespace memfix
