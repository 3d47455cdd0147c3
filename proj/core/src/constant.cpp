// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/constant.hpp"

namespace memfix {

Constant ConstantOps::join(const Constant& a, const Constant& b) {
    return a == b ? a : Constant::top();
}

bool ConstantOps::leq(const Constant& a, const Constant& b) { return b.is_top || a == b; }

Constant ConstantOps::arith(ArithOp op, const Constant& a, const Constant& b) {
    if (op == ArithOp::kMul && ((!a.is_top && a.value == 0) || (!b.is_top && b.value == 0))) {
        return Constant::of(0);
    }
    if (a.is_top || b.is_top) {
        return Constant::top();
    }
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
        case ArithOp::kAdd:
            overflow = __builtin_add_overflow(a.value, b.value, &r);
            break;
        case ArithOp::kSub:
            overflow = __builtin_sub_overflow(a.value, b.value, &r);
            break;
        case ArithOp::kMul:
            overflow = __builtin_mul_overflow(a.value, b.value, &r);
            break;
    }
    return overflow ? Constant::top() : Constant::of(r);
}

std::optional<Constant> ConstantOps::refine(const Constant& a, Relation rel, std::int64_t c) {
    if (a.is_top) {
        return rel == Relation::kEq ? Constant::of(c) : a;
    }
    if (!holds(rel, a.value, c)) {
        return std::nullopt;
    }
    return a;
}

bool ConstantOps::entails(const Constant& a, Relation rel, std::int64_t c) {
    return !a.is_top && holds(rel, a.value, c);
}

bool ConstantOps::contains(const Constant& a, std::int64_t c) { return a.is_top || a.value == c; }

std::string ConstantOps::to_string(const Constant& a) {
    return a.is_top ? std::string("T") : std::to_string(a.value);
}

}  // namespace memfix
