// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace memfix {

using VarId = std::uint32_t;

/// Raised when a statement refers to a variable outside the domain's universe.
class AnalysisSetupError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ArithOp : std::uint8_t { kAdd, kSub, kMul };
enum class Relation : std::uint8_t { kLt, kLe, kEq, kNe, kGe, kGt };

std::string_view to_string(ArithOp op);
std::string_view to_string(Relation rel);
/// Concrete truth of `lhs rel rhs`.
bool holds(Relation rel, std::int64_t lhs, std::int64_t rhs);

struct Operand {
    bool is_var = false;
    VarId var = 0;
    std::int64_t value = 0;

    static Operand variable(VarId v) { return {true, v, 0}; }
    static Operand constant(std::int64_t c) { return {false, 0, c}; }
    friend bool operator==(const Operand&, const Operand&) = default;
};

/// x = a, or x = a op b where a is a variable.
struct Assign {
    VarId target = 0;
    Operand left;
    std::optional<ArithOp> op;
    Operand right;
    friend bool operator==(const Assign&, const Assign&) = default;
};

struct Guard {
    VarId var = 0;
    Relation rel = Relation::kEq;
    std::int64_t bound = 0;
    friend bool operator==(const Guard&, const Guard&) = default;
};

struct Assume {
    Guard guard;
    friend bool operator==(const Assume&, const Assume&) = default;
};

struct Assert {
    Guard guard;
    friend bool operator==(const Assert&, const Assert&) = default;
};

using Stmt = std::variant<Assign, Assume, Assert>;

/// Statements attached to one CFG node; τ_v runs them in order.
struct NodeProgram {
    std::vector<Stmt> stmts;

    [[nodiscard]] bool has_assert() const;
    /// Largest variable id referenced, if any.
    [[nodiscard]] std::optional<VarId> max_var() const;
    friend bool operator==(const NodeProgram&, const NodeProgram&) = default;
};

/// Interned variable names in declaration order.
class VarTable {
  public:
    VarId intern(std::string_view name);
    [[nodiscard]] std::optional<VarId> find(std::string_view name) const;
    [[nodiscard]] const std::string& name(VarId v) const { return names_[v]; }
    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    friend bool operator==(const VarTable& a, const VarTable& b) { return a.names_ == b.names_; }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> index_;
};

std::string to_string(const Stmt& s, const VarTable& vars);
/// Statements joined by "; " (empty for a skip node).
std::string to_string(const NodeProgram& p, const VarTable& vars);

/// Concrete store: one value per variable.
using Store = std::vector<std::int64_t>;

enum class ConcreteOutcome : std::uint8_t {
    kContinue,  // all statements ran
    kBlocked,   // an assume failed
    kOverflow,  // 64-bit arithmetic overflowed
};

/// Runs `p` on `store` in place. Asserts do not constrain execution.
ConcreteOutcome execute_concrete(const NodeProgram& p, Store& store);

}  // namespace memfix
