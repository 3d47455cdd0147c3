// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memfix/fm_program.hpp"
#include "memfix/graph.hpp"
#include "memfix/wto.hpp"

namespace memfix {

/// Dense membership of the check set V_C.
using CheckSet = std::vector<bool>;

CheckSet make_check_set(std::size_t node_count, std::initializer_list<NodeId> members);

/// When abstract values are released and checks run.
///
///  dpost[u] = v   Post[u] is freed after Inst[v].
///  achk[u] = v    u's check runs (then Pre[u] is freed) after Inst[v]; set iff u ∈ V_C.
///  dpostl[u] ∋ v  Post[u] is freed at the top of every loop iteration of Inst[v].
///  dprel[u] ∋ v   Pre[u] is freed at the top of every loop iteration of Inst[v].
///
/// Sets are kept sorted by NodeId.
struct MemoryConfiguration {
    std::vector<NodeId> dpost;
    std::vector<std::optional<NodeId>> achk;
    std::vector<std::vector<NodeId>> dpostl;
    std::vector<std::vector<NodeId>> dprel;

    [[nodiscard]] std::size_t node_count() const { return dpost.size(); }
    [[nodiscard]] bool is_checked(NodeId v) const { return achk[v].has_value(); }

    friend bool operator==(const MemoryConfiguration&, const MemoryConfiguration&) = default;
};

/// Everything is freed and checked after the program's last instruction.
MemoryConfiguration default_config(const FmProgram& p, const CheckSet& checks);

/// max_⊴ { lift(u, v) | u -> v }; a node without successors maps to itself.
std::vector<NodeId> dpost_opt(const DiGraph& g, const Wto& w, const NestingForest& nf);

/// max_{⪯_N} ↑u for u ∈ V_C.
std::vector<std::optional<NodeId>> achk_opt(const NestingForest& nf, const CheckSet& checks);

/// (↑u ∖ ↑d) ∪ (u ⪯_N d ? {d} : ∅) with d = dpost[u].
std::vector<std::vector<NodeId>> dpostl_opt(const NestingForest& nf,
                                            const std::vector<NodeId>& dpost);

/// ↑u ∖ {u} for u ∈ V_C.
std::vector<std::vector<NodeId>> dprel_opt(const NestingForest& nf, const CheckSet& checks);

/// The four optimal maps evaluated from their definitions.
MemoryConfiguration optimal_config(const DiGraph& g, const Wto& w, const CheckSet& checks);

/// One line per map entry, e.g. "dpost 2 -> 7", "dpostl 5 -> {3, 4, 5}".
/// Entries are ordered by label.
std::string to_text(const MemoryConfiguration& m, const NodeLabels& labels = {});

}  // namespace memfix
