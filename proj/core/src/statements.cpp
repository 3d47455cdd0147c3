// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/statements.hpp"

#include <algorithm>

namespace memfix {

std::string_view to_string(ArithOp op) {
    switch (op) {
        case ArithOp::kAdd:
            return "+";
        case ArithOp::kSub:
            return "-";
        case ArithOp::kMul:
            return "*";
    }
    return "?";
}

std::string_view to_string(Relation rel) {
    switch (rel) {
        case Relation::kLt:
            return "<";
        case Relation::kLe:
            return "<=";
        case Relation::kEq:
            return "==";
        case Relation::kNe:
            return "!=";
        case Relation::kGe:
            return ">=";
        case Relation::kGt:
            return ">";
    }
    return "?";
}

bool holds(Relation rel, std::int64_t lhs, std::int64_t rhs) {
    switch (rel) {
        case Relation::kLt:
            return lhs < rhs;
        case Relation::kLe:
            return lhs <= rhs;
        case Relation::kEq:
            return lhs == rhs;
        case Relation::kNe:
            return lhs != rhs;
        case Relation::kGe:
            return lhs >= rhs;
        case Relation::kGt:
            return lhs > rhs;
    }
    return false;
}

bool NodeProgram::has_assert() const {
    return std::any_of(stmts.begin(), stmts.end(),
                       [](const Stmt& s) { return std::holds_alternative<Assert>(s); });
}

std::optional<VarId> NodeProgram::max_var() const {
    std::optional<VarId> best;
    auto see = [&](VarId v) { best = best ? std::max(*best, v) : v; };
    for (const Stmt& s : stmts) {
        if (const auto* a = std::get_if<Assign>(&s)) {
            see(a->target);
            if (a->left.is_var) {
                see(a->left.var);
            }
            if (a->op && a->right.is_var) {
                see(a->right.var);
            }
        } else if (const auto* a = std::get_if<Assume>(&s)) {
            see(a->guard.var);
        } else {
            see(std::get<Assert>(s).guard.var);
        }
    }
    return best;
}

VarId VarTable::intern(std::string_view name) {
    std::string key(name);
    auto it = index_.find(key);
    if (it != index_.end()) {
        return it->second;
    }
    auto id = static_cast<VarId>(names_.size());
    names_.push_back(key);
    index_.emplace(std::move(key), id);
    return id;
}

std::optional<VarId> VarTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

namespace {

std::string operand_text(const Operand& o, const VarTable& vars) {
    return o.is_var ? vars.name(o.var) : std::to_string(o.value);
}

std::string guard_text(std::string_view kw, const Guard& g, const VarTable& vars) {
    std::string out(kw);
    out += "(";
    out += vars.name(g.var);
    out += " ";
    out += to_string(g.rel);
    out += " ";
    out += std::to_string(g.bound);
    out += ")";
    return out;
}

std::optional<std::int64_t> apply(ArithOp op, std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
        case ArithOp::kAdd:
            overflow = __builtin_add_overflow(a, b, &r);
            break;
        case ArithOp::kSub:
            overflow = __builtin_sub_overflow(a, b, &r);
            break;
        case ArithOp::kMul:
            overflow = __builtin_mul_overflow(a, b, &r);
            break;
    }
    if (overflow) {
        return std::nullopt;
    }
    return r;
}

}  // namespace

std::string to_string(const Stmt& s, const VarTable& vars) {
    if (const auto* a = std::get_if<Assign>(&s)) {
        std::string out = vars.name(a->target) + " = " + operand_text(a->left, vars);
        if (a->op) {
            out += " ";
            out += to_string(*a->op);
            out += " ";
            out += operand_text(a->right, vars);
        }
        return out;
    }
    if (const auto* a = std::get_if<Assume>(&s)) {
        return guard_text("assume", a->guard, vars);
    }
    return guard_text("assert", std::get<Assert>(s).guard, vars);
}

std::string to_string(const NodeProgram& p, const VarTable& vars) {
    std::string out;
    for (std::size_t i = 0; i < p.stmts.size(); ++i) {
        if (i != 0) {
            out += "; ";
        }
        out += to_string(p.stmts[i], vars);
    }
    return out;
}

ConcreteOutcome execute_concrete(const NodeProgram& p, Store& store) {
    auto read = [&](const Operand& o) { return o.is_var ? store[o.var] : o.value; };
    for (const Stmt& s : p.stmts) {
        if (const auto* a = std::get_if<Assign>(&s)) {
            std::int64_t value = read(a->left);
            if (a->op) {
                auto r = apply(*a->op, value, read(a->right));
                if (!r) {
                    return ConcreteOutcome::kOverflow;
                }
                value = *r;
            }
            store[a->target] = value;
        } else if (const auto* a = std::get_if<Assume>(&s)) {
            if (!holds(a->guard.rel, store[a->guard.var], a->guard.bound)) {
                return ConcreteOutcome::kBlocked;
            }
        }
    }
    return ConcreteOutcome::kContinue;
}

}  // namespace memfix
