// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memfix/fm_program.hpp"
#include "memfix/graph.hpp"

namespace memfix {

class WtoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Weak topological ordering: a well-parenthesized permutation of the nodes
/// in which every component starts with its head.
///
/// Stored flat. order() is the permutation (the total order ⪯); a head's
/// component occupies positions [position(h), component_end(h)].
class Wto {
  public:
    /// Parses the parenthesized notation, e.g. "1 2 (3 (4 5) 6) (7 8) 9".
    /// Tokens are mapped through `labels` when given, else read as dense ids.
    static Wto parse(std::string_view text, const NodeLabels& labels = {});

    [[nodiscard]] std::size_t size() const { return order_.size(); }
    [[nodiscard]] const std::vector<NodeId>& order() const { return order_; }
    [[nodiscard]] std::uint32_t position(NodeId v) const { return position_[v]; }
    [[nodiscard]] bool is_head(NodeId v) const { return is_head_[v] != 0; }
    [[nodiscard]] std::uint32_t component_end(NodeId v) const { return end_[v]; }

    /// Innermost head whose component strictly encloses v (a head is not its
    /// own enclosing head).
    [[nodiscard]] std::optional<NodeId> enclosing_head(NodeId v) const;

    /// ω(v): heads of the components containing v, innermost first. A head
    /// belongs to its own component.
    [[nodiscard]] std::vector<NodeId> omega(NodeId v) const;

    /// For every edge u -> v: u ≺ v, or v ⪯ u with v ∈ ω(u).
    [[nodiscard]] bool is_valid_for(const DiGraph& g) const;

    [[nodiscard]] std::string to_string(const NodeLabels& labels = {}) const;

    friend bool operator==(const Wto&, const Wto&) = default;

  private:
    friend class WtoBuilder;
    std::vector<NodeId> order_;
    std::vector<std::uint32_t> position_;
    std::vector<std::uint32_t> end_;
    std::vector<std::uint8_t> is_head_;
    std::vector<NodeId> enclosing_;
};

/// Incremental construction of a Wto in textual order.
class WtoBuilder {
  public:
    explicit WtoBuilder(std::size_t node_count);
    void leaf(NodeId v);
    void open(NodeId head);
    void close();
    Wto finish();

  private:
    void place(NodeId v);

    Wto w_;
    std::vector<NodeId> open_heads_;
    std::size_t placed_ = 0;
};

/// The nesting relation x ⪯_N y (x = y or y ∈ ω(x)) as a forest.
class NestingForest {
  public:
    explicit NestingForest(const Wto& w);

    [[nodiscard]] std::size_t size() const { return parent_.size(); }
    [[nodiscard]] std::optional<NodeId> parent(NodeId v) const;
    [[nodiscard]] std::uint32_t depth(NodeId v) const { return depth_[v]; }
    [[nodiscard]] bool is_head(NodeId v) const { return is_head_[v] != 0; }

    /// x ⪯_N y, answered in O(1) from the component ranges.
    [[nodiscard]] bool leq(NodeId x, NodeId y) const {
        return x == y || (is_head_[y] && pos_[y] <= pos_[x] && pos_[x] <= end_[y]);
    }

    /// ↑v: v followed by its ancestors, innermost to outermost.
    [[nodiscard]] std::vector<NodeId> up_chain(NodeId v) const;

    /// Outermost element of ↑v.
    [[nodiscard]] NodeId outermost(NodeId v) const;

  private:
    std::vector<NodeId> parent_;
    std::vector<std::uint32_t> depth_;
    std::vector<std::uint32_t> pos_;
    std::vector<std::uint32_t> end_;
    std::vector<std::uint8_t> is_head_;
};

NestingForest nesting_forest(const Wto& w);

/// The total order ⊴ in which instructions finish (postamble order):
/// x ⊴ y iff x ⪯_N y, or y ⋠_N x and x ⪯ y.
class ExecOrder {
  public:
    explicit ExecOrder(const Wto& w);

    [[nodiscard]] std::uint32_t rank(NodeId v) const { return rank_[v]; }
    [[nodiscard]] bool leq(NodeId x, NodeId y) const { return rank_[x] <= rank_[y]; }
    [[nodiscard]] const std::vector<NodeId>& sequence() const { return sequence_; }

  private:
    std::vector<std::uint32_t> rank_;
    std::vector<NodeId> sequence_;
};

bool leq_exec_order(const ExecOrder& order, NodeId x, NodeId y);

/// max_{⪯_N}((↑v ∖ ↑u) ∪ {v}): the head of the largest component that
/// contains v but not u, or v itself.
NodeId lift(const NestingForest& nf, NodeId u, NodeId v);

/// genProg: (v W') -> repeat v [genProg(W')], W1 W2 -> seq, v -> exec v.
FmProgram gen_prog(const Wto& w);

/// Inverse of gen_prog.
Wto wto_of_program(const FmProgram& p);

}  // namespace memfix
