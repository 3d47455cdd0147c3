// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memfix/graph.hpp"

namespace memfix {

/// Display labels for dense node ids. An empty table prints the ids themselves.
using NodeLabels = std::vector<std::uint64_t>;

std::string node_label(const NodeLabels& labels, NodeId v);

/// A Fixpoint Machine program:
///
///   Prog ::= exec v | repeat v [Prog] | Prog ; Prog
///
/// Instructions live in an arena and refer to each other by index. Every
/// node has exactly one exec or repeat instruction, reachable through inst().
/// A repeat body may be empty (a head whose only back edge is a self-loop).
class FmProgram {
  public:
    using Index = std::uint32_t;
    static constexpr Index kNone = static_cast<Index>(-1);

    enum class Kind : std::uint8_t { kExec, kRepeat, kSeq };

    struct Instr {
        Kind kind;
        NodeId node;   // exec/repeat
        Index first;   // repeat: body (may be kNone); seq: left
        Index second;  // seq: right
    };

    FmProgram() = default;
    explicit FmProgram(std::size_t node_count);

    Index add_exec(NodeId v);
    Index add_repeat(NodeId v, Index body);
    Index add_seq(Index left, Index right);
    /// Appends `next` to `acc` as a left-associated seq; kNone acts as empty.
    Index append(Index acc, Index next);

    void set_root(Index root) { root_ = root; }

    [[nodiscard]] Index root() const { return root_; }
    [[nodiscard]] const Instr& at(Index i) const { return instrs_[i]; }
    [[nodiscard]] Index inst(NodeId v) const { return inst_[v]; }
    [[nodiscard]] std::size_t node_count() const { return inst_.size(); }
    [[nodiscard]] bool is_head(NodeId v) const { return instrs_[inst_[v]].kind == Kind::kRepeat; }

    /// Top-level instructions of a seq tree, left to right. A non-seq index
    /// yields itself; kNone yields nothing.
    [[nodiscard]] std::vector<Index> sequence(Index i) const;

    /// Node whose instruction runs last (the default configuration's z).
    [[nodiscard]] NodeId last_node() const;

    /// Checks that every node has exactly one reachable exec/repeat.
    [[nodiscard]] bool is_well_formed() const;

    [[nodiscard]] std::string to_string(const NodeLabels& labels = {}) const;
    /// Renders the instruction tree rooted at `i`.
    [[nodiscard]] std::string to_string(Index i, const NodeLabels& labels = {}) const;

    /// Structural equality of the instruction trees (arena layout ignored).
    friend bool operator==(const FmProgram& a, const FmProgram& b);

  private:
    std::vector<Instr> instrs_;
    std::vector<Index> inst_;
    Index root_ = kNone;
};

}  // namespace memfix
