// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/generate.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <utility>

namespace memfix {

DisjointSets::DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
}

NodeId DisjointSets::rep(NodeId v) {
    NodeId root = v;
    while (parent_[root] != root) {
        root = parent_[root];
    }
    while (parent_[v] != root) {
        NodeId next = parent_[v];
        parent_[v] = root;
        v = next;
    }
    return root;
}

void DisjointSets::merge(NodeId v, NodeId h) {
    NodeId rv = rep(v);
    NodeId rh = rep(h);
    if (rv != rh) {
        parent_[rv] = rh;
    }
}

std::vector<NodeId> DisjointSets::members(NodeId r) {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < parent_.size(); ++v) {
        if (rep(v) == r) {
            out.push_back(v);
        }
    }
    return out;
}

namespace {

constexpr auto kNoEdge = static_cast<std::uint32_t>(-1);

class Generator {
  public:
    Generator(const DiGraph& g, const CheckSet& checks, GenerationTrace* trace)
        : g_(g),
          checks_(checks),
          trace_(trace),
          n_(g.node_count()),
          forest_(build_dfs_forest(g)),
          sets_(n_),
          program_(n_),
          inst_(n_, FmProgram::kNone),
          bucket_head_(n_, kNoEdge),
          restored_head_(n_, kNoEdge),
          stamp_(n_, 0) {
        out_.config.dpost.resize(n_);
        out_.config.achk.assign(n_, std::nullopt);
        out_.config.dpostl.assign(n_, {});
        out_.config.dprel.assign(n_, {});
        out_.t_map.resize(n_);
        out_.nest_parent.resize(n_);
        for (NodeId v = 0; v < n_; ++v) {
            // A node without successors keeps Post[v] only through its own instruction.
            out_.config.dpost[v] = v;
            out_.t_map[v] = v;
            out_.nest_parent[v] = v;
        }
    }

    GeneratedProgram run() {
        collect_edges();
        remove_cross_forward_edges();
        for (std::uint32_t d = static_cast<std::uint32_t>(n_); d-- > 0;) {
            NodeId h = forest_.node_at_dfn(d);
            restore_cross_forward_edges(h);
            generate_instruction(h);
        }
        connect_instructions();
        out_.program = std::move(program_);
        return std::move(out_);
    }

  private:
    // ->' is the tree edges plus restored cross/forward edges. Every node has
    // at most one tree predecessor (its DFS parent); restored edges are kept
    // as intrusive lists keyed by target.
    template <typename F>
    void for_each_pred(NodeId v, F&& f) const {
        if (auto p = forest_.parent(v)) {
            f(*p);
        }
        for (std::uint32_t e = restored_head_[v]; e != kNoEdge; e = restored_next_[e]) {
            f(restored_from_[e]);
        }
    }

    void collect_edges() {
        auto edges = g_.edges();
        back_offset_.assign(n_ + 1, 0);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            switch (forest_.edge_kind(i)) {
                case EdgeKind::kBack:
                    ++back_offset_[edges[i].to + 1];
                    break;
                case EdgeKind::kCross:
                case EdgeKind::kForward:
                    cross_forward_.push_back(edges[i]);
                    break;
                case EdgeKind::kTree:
                    break;
            }
        }
        std::partial_sum(back_offset_.begin(), back_offset_.end(), back_offset_.begin());
        back_from_.resize(back_offset_.back());
        std::vector<std::size_t> fill(back_offset_.begin(), back_offset_.end() - 1);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (forest_.edge_kind(i) == EdgeKind::kBack) {
                back_from_[fill[edges[i].to]++] = edges[i].from;
            }
        }
    }

    void remove_cross_forward_edges() {
        std::vector<std::pair<NodeId, NodeId>> queries;
        queries.reserve(cross_forward_.size());
        for (const Edge& e : cross_forward_) {
            queries.emplace_back(e.from, e.to);
        }
        std::vector<NodeId> ancestors = lca_offline(forest_, queries);
        bucket_next_.resize(cross_forward_.size());
        for (std::uint32_t i = 0; i < cross_forward_.size(); ++i) {
            bucket_next_[i] = bucket_head_[ancestors[i]];
            bucket_head_[ancestors[i]] = i;
        }
    }

    void restore_cross_forward_edges(NodeId h) {
        GenerationTrace::HeadStep* step = nullptr;
        if (trace_ != nullptr) {
            trace_->steps.push_back({});
            step = &trace_->steps.back();
            step->head = h;
        }
        // Buckets are LIFO; restore in insertion order for stable traces.
        std::vector<std::uint32_t> pending;
        for (std::uint32_t i = bucket_head_[h]; i != kNoEdge; i = bucket_next_[i]) {
            pending.push_back(i);
        }
        for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
            const Edge& e = cross_forward_[*it];
            NodeId target = sets_.rep(e.to);
            restored_from_.push_back(e.from);
            restored_next_.push_back(restored_head_[target]);
            restored_head_[target] = static_cast<std::uint32_t>(restored_from_.size() - 1);
            if (step != nullptr) {
                step->restored_original.push_back(e);
                step->restored.push_back({e.from, target});
                step->restored_target_is_rep.push_back(sets_.rep(target) == target);
            }
        }
    }

    // Returns B_h, fills nested_ with N_h.
    std::vector<NodeId> find_nested_sccs(NodeId h) {
        ++generation_;
        std::vector<NodeId> back_reps;
        for (std::size_t i = back_offset_[h]; i < back_offset_[h + 1]; ++i) {
            NodeId r = sets_.rep(back_from_[i]);
            if (std::find(back_reps.begin(), back_reps.end(), r) == back_reps.end()) {
                back_reps.push_back(r);
            }
        }
        nested_.clear();
        worklist_.clear();
        stamp_[h] = generation_;
        for (NodeId r : back_reps) {
            if (r != h && stamp_[r] != generation_) {
                stamp_[r] = generation_;
                worklist_.push_back(r);
            }
        }
        while (!worklist_.empty()) {
            NodeId v = worklist_.back();
            worklist_.pop_back();
            nested_.push_back(v);
            for_each_pred(v, [&](NodeId u) {
                NodeId r = sets_.rep(u);
                // stamp marks N_h ∪ {h} ∪ W.
                if (stamp_[r] != generation_) {
                    stamp_[r] = generation_;
                    worklist_.push_back(r);
                }
            });
        }
        return back_reps;
    }

    void generate_instruction(NodeId h) {
        GenerationTrace::HeadStep* step = trace_ != nullptr ? &trace_->steps.back() : nullptr;
        std::vector<NodeId> back_reps = find_nested_sccs(h);
        if (step != nullptr) {
            step->back_reps = back_reps;
        }
        if (back_reps.empty()) {
            inst_[h] = program_.add_exec(h);
            if (step != nullptr) {
                step->instruction = inst_[h];
            }
            return;
        }

        std::sort(nested_.begin(), nested_.end(), [&](NodeId a, NodeId b) {
            return forest_.post_dfn(a) > forest_.post_dfn(b);
        });
        FmProgram::Index body = FmProgram::kNone;
        for (NodeId v : nested_) {
            body = program_.append(body, inst_[v]);
            for_each_pred(v, [&](NodeId u) {
                out_.config.dpost[u] = v;
                // rep(u) == h only for u == h, whose dpost then lies inside
                // its own component and whose dpostl is empty.
                NodeId r = sets_.rep(u);
                out_.t_map[u] = r == h ? std::nullopt : std::optional<NodeId>(r);
                if (step != nullptr) {
                    step->dpost_body.push_back({u, v});
                    step->t_body.push_back({u, r});
                }
            });
        }
        inst_[h] = program_.add_repeat(h, body);
        for (std::size_t i = back_offset_[h]; i < back_offset_[h + 1]; ++i) {
            NodeId u = back_from_[i];
            out_.config.dpost[u] = h;
            out_.t_map[u] = h;
            if (step != nullptr) {
                step->dpost_back.push_back({u, h});
            }
        }
        if (step != nullptr) {
            step->nested = nested_;
            step->body = body;
            step->instruction = inst_[h];
            step->merged_sets.push_back(sets_.members(h));
            for (NodeId v : nested_) {
                step->merged_sets.push_back(sets_.members(v));
            }
        }
        for (NodeId v : nested_) {
            sets_.merge(v, h);
            out_.nest_parent[v] = h;
        }
    }

    // [x, y] under the transitive closure of nest_parent.
    std::vector<NodeId> nest_interval(NodeId x, NodeId y) const {
        std::vector<NodeId> out{x};
        while (x != y) {
            assert(out_.nest_parent[x] != x && "interval end is not an ancestor");
            x = out_.nest_parent[x];
            out.push_back(x);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    void connect_instructions() {
        FmProgram::Index pgm = FmProgram::kNone;
        for (std::uint32_t p = static_cast<std::uint32_t>(n_); p-- > 0;) {
            NodeId v = forest_.node_at_post_dfn(p);
            if (sets_.rep(v) == v) {
                pgm = program_.append(pgm, inst_[v]);
                if (trace_ != nullptr) {
                    trace_->connected_roots.push_back(v);
                }
                for_each_pred(v, [&](NodeId u) {
                    out_.config.dpost[u] = v;
                    out_.t_map[u] = sets_.rep(u);
                    if (trace_ != nullptr) {
                        trace_->dpost_connect.push_back({u, v});
                        trace_->t_connect.push_back({u, *out_.t_map[u]});
                    }
                });
            }
            if (checks_[v]) {
                NodeId r = sets_.rep(v);
                out_.config.achk[v] = r;
                std::vector<NodeId> chain = nest_interval(v, r);
                chain.erase(std::find(chain.begin(), chain.end(), v));
                out_.config.dprel[v] = std::move(chain);
            }
        }
        for (NodeId v = 0; v < n_; ++v) {
            if (out_.t_map[v]) {
                out_.config.dpostl[v] = nest_interval(v, *out_.t_map[v]);
            }
        }
        program_.set_root(pgm);
    }

    const DiGraph& g_;
    const CheckSet& checks_;
    GenerationTrace* trace_;
    std::size_t n_;
    DepthFirstForest forest_;
    DisjointSets sets_;
    FmProgram program_;
    std::vector<FmProgram::Index> inst_;
    GeneratedProgram out_;

    std::vector<std::size_t> back_offset_;
    std::vector<NodeId> back_from_;
    std::vector<Edge> cross_forward_;
    std::vector<std::uint32_t> bucket_head_;
    std::vector<std::uint32_t> bucket_next_;
    std::vector<std::uint32_t> restored_head_;
    std::vector<std::uint32_t> restored_next_;
    std::vector<NodeId> restored_from_;

    std::vector<std::uint32_t> stamp_;
    std::uint32_t generation_ = 0;
    std::vector<NodeId> nested_;
    std::vector<NodeId> worklist_;
};

}  // namespace

GeneratedProgram generate_fm_program(const DiGraph& g, const CheckSet& checks,
                                     GenerationTrace* trace) {
    return Generator(g, checks, trace).run();
}

}  // namespace memfix
