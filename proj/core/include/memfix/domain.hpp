// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "memfix/statements.hpp"

namespace memfix {

/// Operands from different variable universes.
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An abstract domain as used by the engine. Domains are chosen statically,
/// so mixing states of two domains does not compile.
template <typename D>
concept AbstractDomain = requires(const D& d, const typename D::State& s, const NodeProgram& p,
                                  std::span<const std::int64_t> store) {
    { d.bottom() } -> std::same_as<typename D::State>;
    { d.top() } -> std::same_as<typename D::State>;
    { d.is_bottom(s) } -> std::same_as<bool>;
    { d.join(s, s) } -> std::same_as<typename D::State>;
    { d.widen(s, s) } -> std::same_as<typename D::State>;
    { d.leq(s, s) } -> std::same_as<bool>;
    { d.transfer(p, s) } -> std::same_as<typename D::State>;
    { d.check(p, s) } -> std::same_as<bool>;
    { d.cells(s) } -> std::same_as<std::size_t>;
    { d.contains(s, store) } -> std::same_as<bool>;
};

/// Per-variable value lattice plugged into NonRelationalDomain. Bottom lives
/// at the state level, so Value has no bottom element.
template <typename Ops>
concept ValueOps = requires(const typename Ops::Value& a, std::int64_t c, ArithOp op,
                            Relation rel) {
    { Ops::top() } -> std::same_as<typename Ops::Value>;
    { Ops::constant(c) } -> std::same_as<typename Ops::Value>;
    { Ops::join(a, a) } -> std::same_as<typename Ops::Value>;
    { Ops::widen(a, a) } -> std::same_as<typename Ops::Value>;
    { Ops::leq(a, a) } -> std::same_as<bool>;
    { Ops::arith(op, a, a) } -> std::same_as<typename Ops::Value>;
    { Ops::refine(a, rel, c) } -> std::same_as<std::optional<typename Ops::Value>>;
    { Ops::entails(a, rel, c) } -> std::same_as<bool>;
    { Ops::contains(a, c) } -> std::same_as<bool>;
    { Ops::to_string(a) } -> std::same_as<std::string>;
};

/// A state is ⊥ or one value per variable of a fixed universe.
template <ValueOps Ops>
class NonRelationalDomain {
  public:
    using Value = typename Ops::Value;

    struct State {
        bool bottom = true;
        std::vector<Value> vars;
        friend bool operator==(const State&, const State&) = default;
    };

    explicit NonRelationalDomain(std::size_t var_count) : var_count_(var_count) {}

    [[nodiscard]] std::size_t var_count() const { return var_count_; }

    [[nodiscard]] State bottom() const { return {}; }
    [[nodiscard]] State top() const { return {false, std::vector<Value>(var_count_, Ops::top())}; }
    [[nodiscard]] State make(std::vector<Value> vars) const {
        require(vars.size());
        return {false, std::move(vars)};
    }
    [[nodiscard]] bool is_bottom(const State& s) const { return s.bottom; }

    [[nodiscard]] State join(const State& a, const State& b) const {
        return combine(a, b, [](const Value& x, const Value& y) { return Ops::join(x, y); });
    }

    [[nodiscard]] State widen(const State& a, const State& b) const {
        return combine(a, b, [](const Value& x, const Value& y) { return Ops::widen(x, y); });
    }

    [[nodiscard]] bool leq(const State& a, const State& b) const {
        if (a.bottom) {
            return true;
        }
        if (b.bottom) {
            return false;
        }
        require(a.vars.size());
        require(b.vars.size());
        for (std::size_t i = 0; i < var_count_; ++i) {
            if (!Ops::leq(a.vars[i], b.vars[i])) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] State transfer(const NodeProgram& p, State s) const {
        check_universe(p);
        for (const Stmt& stmt : p.stmts) {
            if (s.bottom) {
                break;
            }
            step(stmt, s);
        }
        return s;
    }

    [[nodiscard]] bool check(const NodeProgram& p, State s) const {
        check_universe(p);
        for (const Stmt& stmt : p.stmts) {
            if (s.bottom) {
                return true;
            }
            if (const auto* a = std::get_if<Assert>(&stmt)) {
                if (!Ops::entails(s.vars[a->guard.var], a->guard.rel, a->guard.bound)) {
                    return false;
                }
            } else {
                step(stmt, s);
            }
        }
        return true;
    }

    /// Per-variable entries held by the state.
    [[nodiscard]] std::size_t cells(const State& s) const { return s.bottom ? 0 : s.vars.size(); }

    [[nodiscard]] bool contains(const State& s, std::span<const std::int64_t> store) const {
        if (s.bottom) {
            return false;
        }
        require(store.size());
        for (std::size_t i = 0; i < var_count_; ++i) {
            if (!Ops::contains(s.vars[i], store[i])) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] std::string to_string(const State& s, const VarTable& vars) const {
        if (s.bottom) {
            return "_|_";
        }
        std::string out = "{";
        for (std::size_t i = 0; i < s.vars.size(); ++i) {
            if (i != 0) {
                out += ", ";
            }
            out += i < vars.size() ? vars.name(static_cast<VarId>(i)) : "v" + std::to_string(i);
            out += " -> ";
            out += Ops::to_string(s.vars[i]);
        }
        return out + "}";
    }

  private:
    void require(std::size_t n) const {
        if (n != var_count_) {
            throw DomainError("state has " + std::to_string(n) + " variables, domain expects " +
                              std::to_string(var_count_));
        }
    }

    void check_universe(const NodeProgram& p) const {
        if (auto m = p.max_var(); m && *m >= var_count_) {
            throw AnalysisSetupError("statement refers to undeclared variable #" +
                                     std::to_string(*m));
        }
    }

    template <typename F>
    State combine(const State& a, const State& b, F f) const {
        if (a.bottom) {
            return b;
        }
        if (b.bottom) {
            return a;
        }
        require(a.vars.size());
        require(b.vars.size());
        State out{false, {}};
        out.vars.reserve(var_count_);
        for (std::size_t i = 0; i < var_count_; ++i) {
            out.vars.push_back(f(a.vars[i], b.vars[i]));
        }
        return out;
    }

    Value eval(const Operand& o, const State& s) const {
        return o.is_var ? s.vars[o.var] : Ops::constant(o.value);
    }

    void step(const Stmt& stmt, State& s) const {
        if (const auto* a = std::get_if<Assign>(&stmt)) {
            Value v = eval(a->left, s);
            if (a->op) {
                v = Ops::arith(*a->op, v, eval(a->right, s));
            }
            s.vars[a->target] = std::move(v);
        } else if (const auto* a = std::get_if<Assume>(&stmt)) {
            auto refined = Ops::refine(s.vars[a->guard.var], a->guard.rel, a->guard.bound);
            if (!refined) {
                s = bottom();
            } else {
                s.vars[a->guard.var] = std::move(*refined);
            }
        }
    }

    std::size_t var_count_;
};

}  // namespace memfix
