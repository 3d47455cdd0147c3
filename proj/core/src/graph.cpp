// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/graph.hpp"

#include <algorithm>
#include <numeric>

namespace memfix {

DiGraph::DiGraph(std::size_t node_count, std::vector<Edge> edges, NodeId entry,
                 Reachability reachability)
    : node_count_(node_count), entry_(entry), edges_(std::move(edges)) {
    if (node_count_ == 0) {
        throw GraphError("graph has no nodes");
    }
    if (entry_ >= node_count_) {
        throw GraphError("entry node " + std::to_string(entry_) + " out of range");
    }
    for (const Edge& e : edges_) {
        if (e.from >= node_count_ || e.to >= node_count_) {
            throw GraphError("edge " + std::to_string(e.from) + " -> " + std::to_string(e.to) +
                             " has an endpoint out of range");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
        throw GraphError("duplicate edge " + std::to_string(dup->from) + " -> " +
                         std::to_string(dup->to));
    }

    succ_offset_.assign(node_count_ + 1, 0);
    pred_offset_.assign(node_count_ + 1, 0);
    for (const Edge& e : edges_) {
        ++succ_offset_[e.from + 1];
        ++pred_offset_[e.to + 1];
    }
    std::partial_sum(succ_offset_.begin(), succ_offset_.end(), succ_offset_.begin());
    std::partial_sum(pred_offset_.begin(), pred_offset_.end(), pred_offset_.begin());
    succ_.resize(edges_.size());
    pred_.resize(edges_.size());
    std::vector<std::size_t> pred_fill(pred_offset_.begin(), pred_offset_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        // edges_ is sorted by source, so successors land in place and in order.
        succ_[i] = edges_[i].to;
    }
    // Predecessors: iterate edges sorted by (to, from) to keep them ascending.
    std::vector<std::size_t> order(edges_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return edges_[a].to < edges_[b].to;
    });
    for (std::size_t i : order) {
        pred_[pred_fill[edges_[i].to]++] = edges_[i].from;
    }

    if (reachability == Reachability::kRequired) {
        std::vector<char> seen(node_count_, 0);
        std::vector<NodeId> stack{entry_};
        seen[entry_] = 1;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId w : successors(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        auto it = std::find(seen.begin(), seen.end(), 0);
        if (it != seen.end()) {
            throw GraphError("node " + std::to_string(it - seen.begin()) +
                             " is unreachable from the entry");
        }
    }
}

std::optional<std::size_t> DiGraph::edge_index(NodeId u, NodeId v) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
    if (it == edges_.end() || *it != Edge{u, v}) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - edges_.begin());
}

std::optional<NodeId> DepthFirstForest::parent(NodeId v) const {
    if (parent_[v] == kNoParent) {
        return std::nullopt;
    }
    return parent_[v];
}

DepthFirstForest build_dfs_forest(const DiGraph& g) {
    const std::size_t n = g.node_count();
    constexpr auto kUnvisited = static_cast<std::uint32_t>(-1);

    DepthFirstForest f;
    f.parent_.assign(n, DepthFirstForest::kNoParent);
    f.dfn_.assign(n, kUnvisited);
    f.post_dfn_.assign(n, kUnvisited);
    f.last_dfn_.assign(n, 0);
    f.depth_.assign(n, 0);
    f.root_.assign(n, 0);
    f.by_dfn_.reserve(n);
    f.by_post_dfn_.reserve(n);

    std::uint32_t next_dfn = 0;
    std::uint32_t next_post = 0;

    struct Frame {
        NodeId node;
        std::size_t next_succ;
    };
    std::vector<Frame> stack;

    auto visit = [&](NodeId root) {
        f.roots_.push_back(root);
        f.dfn_[root] = next_dfn++;
        f.by_dfn_.push_back(root);
        f.root_[root] = root;
        stack.push_back({root, 0});
        while (!stack.empty()) {
            Frame& top = stack.back();
            auto succs = g.successors(top.node);
            if (top.next_succ < succs.size()) {
                NodeId w = succs[top.next_succ++];
                if (f.dfn_[w] == kUnvisited) {
                    f.parent_[w] = top.node;
                    f.depth_[w] = f.depth_[top.node] + 1;
                    f.root_[w] = root;
                    f.dfn_[w] = next_dfn++;
                    f.by_dfn_.push_back(w);
                    stack.push_back({w, 0});
                }
                continue;
            }
            NodeId done = top.node;
            f.post_dfn_[done] = next_post++;
            f.by_post_dfn_.push_back(done);
            f.last_dfn_[done] = next_dfn - 1;
            stack.pop_back();
        }
    };

    visit(g.entry());
    for (NodeId v = 0; v < n; ++v) {
        if (f.dfn_[v] == kUnvisited) {
            visit(v);
        }
    }

    auto edges = g.edges();
    f.kinds_.resize(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (f.parent_[e.to] == e.from && e.from != e.to) {
            f.kinds_[i] = EdgeKind::kTree;
        } else if (f.is_ancestor(e.to, e.from)) {
            f.kinds_[i] = EdgeKind::kBack;
        } else if (f.is_ancestor(e.from, e.to)) {
            f.kinds_[i] = EdgeKind::kForward;
        } else {
            f.kinds_[i] = EdgeKind::kCross;
        }
    }
    return f;
}

NodeId lca(const DepthFirstForest& f, NodeId u, NodeId v) {
    if (f.root_of(u) != f.root_of(v)) {
        throw GraphError("lca: nodes " + std::to_string(u) + " and " + std::to_string(v) +
                         " are in different trees");
    }
    while (f.depth(u) > f.depth(v)) {
        u = *f.parent(u);
    }
    while (f.depth(v) > f.depth(u)) {
        v = *f.parent(v);
    }
    while (u != v) {
        u = *f.parent(u);
        v = *f.parent(v);
    }
    return u;
}

namespace {

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), NodeId{0});
    }

    NodeId find(NodeId x) {
        NodeId root = x;
        while (parent_[root] != root) {
            root = parent_[root];
        }
        while (parent_[x] != root) {
            NodeId next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    NodeId unite(NodeId a, NodeId b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return a;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
        return a;
    }

  private:
    std::vector<NodeId> parent_;
    std::vector<std::uint8_t> rank_;
};

}  // namespace

std::vector<NodeId> lca_offline(const DepthFirstForest& f,
                                std::span<const std::pair<NodeId, NodeId>> queries) {
    const std::size_t n = f.node_count();
    std::vector<NodeId> answer(queries.size(), 0);

    // Queries bucketed by endpoint.
    std::vector<std::size_t> offset(n + 1, 0);
    for (const auto& [u, v] : queries) {
        if (f.root_of(u) != f.root_of(v)) {
            throw GraphError("lca: nodes " + std::to_string(u) + " and " + std::to_string(v) +
                             " are in different trees");
        }
        ++offset[u + 1];
        if (u != v) {
            ++offset[v + 1];
        }
    }
    std::partial_sum(offset.begin(), offset.end(), offset.begin());
    std::vector<std::size_t> bucket(offset.back());
    {
        std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
        for (std::size_t q = 0; q < queries.size(); ++q) {
            bucket[fill[queries[q].first]++] = q;
            if (queries[q].first != queries[q].second) {
                bucket[fill[queries[q].second]++] = q;
            }
        }
    }

    // Children lists in dfn order reproduce the forest traversal.
    std::vector<std::size_t> child_offset(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
        if (auto p = f.parent(v)) {
            ++child_offset[*p + 1];
        }
    }
    std::partial_sum(child_offset.begin(), child_offset.end(), child_offset.begin());
    std::vector<NodeId> children(child_offset.back());
    {
        std::vector<std::size_t> fill(child_offset.begin(), child_offset.end() - 1);
        for (std::uint32_t d = 0; d < n; ++d) {
            NodeId v = f.node_at_dfn(d);
            if (auto p = f.parent(v)) {
                children[fill[*p]++] = v;
            }
        }
    }

    UnionFind sets(n);
    std::vector<NodeId> ancestor(n);
    std::vector<char> finished(n, 0);
    struct Frame {
        NodeId node;
        std::size_t next_child;
    };
    std::vector<Frame> stack;
    for (NodeId root : f.roots()) {
        ancestor[root] = root;
        stack.push_back({root, child_offset[root]});
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.next_child < child_offset[top.node + 1]) {
                NodeId c = children[top.next_child++];
                ancestor[c] = c;
                stack.push_back({c, child_offset[c]});
                continue;
            }
            NodeId u = top.node;
            stack.pop_back();
            finished[u] = 1;
            for (std::size_t i = offset[u]; i < offset[u + 1]; ++i) {
                std::size_t q = bucket[i];
                NodeId other = queries[q].first == u ? queries[q].second : queries[q].first;
                if (finished[other]) {
                    answer[q] = ancestor[sets.find(other)];
                }
            }
            if (!stack.empty()) {
                NodeId p = stack.back().node;
                ancestor[sets.unite(p, u)] = p;
            }
        }
    }
    return answer;
}

EdgeClassification classify_edges(const DepthFirstForest& f, const DiGraph& g) {
    EdgeClassification out;
    auto edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        switch (f.edge_kind(i)) {
            case EdgeKind::kBack:
                out.back.push_back(edges[i]);
                break;
            case EdgeKind::kCross:
            case EdgeKind::kForward:
                out.cross_forward.push_back(edges[i]);
                break;
            case EdgeKind::kTree:
                break;
        }
    }
    return out;
}

}  // namespace memfix
