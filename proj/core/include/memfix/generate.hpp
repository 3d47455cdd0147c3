// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memfix/fm_program.hpp"
#include "memfix/graph.hpp"
#include "memfix/memconfig.hpp"

namespace memfix {

/// Union-find whose merge(v, h) makes h's representative the representative
/// of the union. Path compression only; there is no rank because the caller
/// dictates the representative.
class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n);

    NodeId rep(NodeId v);
    void merge(NodeId v, NodeId h);

    /// Members of the set represented by `r`, ascending. O(n); tracing only.
    std::vector<NodeId> members(NodeId r);

  private:
    std::vector<NodeId> parent_;
};

/// Per-step record of the generator, used to inspect intermediate state.
struct GenerationTrace {
    struct Assignment {
        NodeId node;
        NodeId value;
        friend bool operator==(const Assignment&, const Assignment&) = default;
    };


    struct HeadStep {
        NodeId head;
        std::vector<Edge> restored_original;  // buffered cross/forward edge (u, v)
        std::vector<Edge> restored;           // inserted as (u, rep(v))
        std::vector<bool> restored_target_is_rep;
        std::vector<NodeId> back_reps;  // B_h
        std::vector<NodeId> nested;     // N_h, in body (descending post_dfn) order
        FmProgram::Index body = FmProgram::kNone;
        FmProgram::Index instruction = FmProgram::kNone;
        std::vector<Assignment> dpost_body;  // dpost[u] := v for u ->' v, v ∈ N_h
        std::vector<Assignment> t_body;      // T[u] := rep(u) alongside, as written
        std::vector<Assignment> dpost_back;  // dpost[u] := T[u] := h for u ->_B h
        std::vector<std::vector<NodeId>> merged_sets;  // sets before merging, h's first
    };

    std::vector<HeadStep> steps;  // descending dfn
    std::vector<NodeId> connected_roots;
    std::vector<Assignment> dpost_connect;
    std::vector<Assignment> t_connect;
};

struct GeneratedProgram {
    FmProgram program;
    MemoryConfiguration config;
    /// T: the ⪯_N-maximum of dpostl[u]; empty when dpostl[u] is. That is the
    /// case for a head whose dpost lies strictly inside its own component,
    /// where T[h] := rep(h) = h would put h into dpostl[h].
    std::vector<std::optional<NodeId>> t_map;
    /// Transitive reduction of ⪯_N: nest_parent[v] = h for each pair (v, h); v itself at roots.
    std::vector<NodeId> nest_parent;
};

/// Builds the FM program for the graph's WTO together with the optimal
/// memory configuration in almost-linear time.
GeneratedProgram generate_fm_program(const DiGraph& g, const CheckSet& checks,
                                     GenerationTrace* trace = nullptr);

}  // namespace memfix
