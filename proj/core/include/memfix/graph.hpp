// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace memfix {

/// Dense node index, 0..node_count-1.
using NodeId = std::uint32_t;

struct Edge {
    NodeId from{};
    NodeId to{};

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Reachability {
    kRequired,  // every node must be reachable from the entry
    kUnchecked,
};

/// Immutable directed graph with a distinguished entry node.
///
/// Edges are stored sorted by (from, to); successor and predecessor lists are
/// therefore in ascending NodeId order. Duplicate edges and out-of-range
/// endpoints are rejected. Self-loops are allowed.
class DiGraph {
  public:
    DiGraph(std::size_t node_count, std::vector<Edge> edges, NodeId entry,
            Reachability reachability = Reachability::kRequired);

    [[nodiscard]] std::size_t node_count() const { return node_count_; }
    [[nodiscard]] NodeId entry() const { return entry_; }
    [[nodiscard]] std::span<const Edge> edges() const { return edges_; }

    [[nodiscard]] std::span<const NodeId> successors(NodeId v) const {
        return {succ_.data() + succ_offset_[v], succ_.data() + succ_offset_[v + 1]};
    }
    [[nodiscard]] std::span<const NodeId> predecessors(NodeId v) const {
        return {pred_.data() + pred_offset_[v], pred_.data() + pred_offset_[v + 1]};
    }

    /// Index of edge (u, v) in edges(), if present.
    [[nodiscard]] std::optional<std::size_t> edge_index(NodeId u, NodeId v) const;

  private:
    std::size_t node_count_;
    NodeId entry_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> succ_offset_;
    std::vector<NodeId> succ_;
    std::vector<std::size_t> pred_offset_;
    std::vector<NodeId> pred_;
};

enum class EdgeKind : std::uint8_t { kTree, kBack, kCross, kForward };

/// Depth-first spanning forest of a DiGraph.
///
/// The first tree is rooted at the entry; any node the entry cannot reach
/// starts a further tree, in ascending NodeId order. Successors are always
/// visited in ascending NodeId order, so the forest is a pure function of
/// the graph.
class DepthFirstForest {
  public:
    [[nodiscard]] std::size_t node_count() const { return dfn_.size(); }
    [[nodiscard]] std::optional<NodeId> parent(NodeId v) const;
    [[nodiscard]] std::uint32_t dfn(NodeId v) const { return dfn_[v]; }
    [[nodiscard]] std::uint32_t post_dfn(NodeId v) const { return post_dfn_[v]; }
    [[nodiscard]] std::uint32_t depth(NodeId v) const { return depth_[v]; }
    [[nodiscard]] NodeId root_of(NodeId v) const { return root_[v]; }
    [[nodiscard]] NodeId node_at_dfn(std::uint32_t n) const { return by_dfn_[n]; }
    [[nodiscard]] NodeId node_at_post_dfn(std::uint32_t n) const { return by_post_dfn_[n]; }
    [[nodiscard]] std::span<const NodeId> roots() const { return roots_; }

    /// True iff `a` is an ancestor of `d` (reflexive).
    [[nodiscard]] bool is_ancestor(NodeId a, NodeId d) const {
        return dfn_[a] <= dfn_[d] && dfn_[d] <= last_dfn_[a];
    }

    /// Classification of graph edge `i` (index into DiGraph::edges()).
    [[nodiscard]] EdgeKind edge_kind(std::size_t i) const { return kinds_[i]; }

    friend DepthFirstForest build_dfs_forest(const DiGraph& g);

    friend bool operator==(const DepthFirstForest&, const DepthFirstForest&) = default;

  private:
    static constexpr NodeId kNoParent = static_cast<NodeId>(-1);

    std::vector<NodeId> parent_;
    std::vector<std::uint32_t> dfn_;
    std::vector<std::uint32_t> post_dfn_;
    std::vector<std::uint32_t> last_dfn_;
    std::vector<std::uint32_t> depth_;
    std::vector<NodeId> root_;
    std::vector<NodeId> by_dfn_;
    std::vector<NodeId> by_post_dfn_;
    std::vector<NodeId> roots_;
    std::vector<EdgeKind> kinds_;
};

DepthFirstForest build_dfs_forest(const DiGraph& g);

/// Lowest common ancestor under the tree-edge parent relation.
/// Throws GraphError if u and v lie in different trees.
NodeId lca(const DepthFirstForest& f, NodeId u, NodeId v);

/// Batch LCA (Tarjan's offline algorithm). Same contract as lca().
std::vector<NodeId> lca_offline(const DepthFirstForest& f,
                                std::span<const std::pair<NodeId, NodeId>> queries);

struct EdgeClassification {
    std::vector<Edge> back;
    std::vector<Edge> cross_forward;
};

EdgeClassification classify_edges(const DepthFirstForest& f, const DiGraph& g);

}  // namespace memfix
