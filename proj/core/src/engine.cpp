// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/engine_impl.hpp"

namespace memfix {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::kAllocPre:
            return "AllocPre";
        case EventKind::kAllocPost:
            return "AllocPost";
        case EventKind::kDeallocPre:
            return "DeallocPre";
        case EventKind::kDeallocPost:
            return "DeallocPost";
        case EventKind::kReadPost:
            return "ReadPost";
        case EventKind::kCheck:
            return "Check";
        case EventKind::kWidenIter:
            return "WidenIter";
    }
    return "?";
}

bool CheckMap::record(NodeId u, bool verdict) {
    if (ck_[u]) {
        return false;
    }
    ck_[u] = verdict;
    return true;
}

IterationCapExceeded::IterationCapExceeded(NodeId head, std::uint64_t cap)
    : std::runtime_error("loop at node #" + std::to_string(head) + " exceeded " +
                         std::to_string(cap) + " iterations"),
      head_(head) {}

namespace detail {

ProgramTables::ProgramTables(const FmProgram& p, const DiGraph& g) {
    const std::size_t n = g.node_count();
    pred_offset.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
        pred_offset[v + 1] = pred_offset[v] + g.predecessors(v).size();
    }
    back_into.assign(pred_offset[n], 0);
    const NestingForest nf(wto_of_program(p));
    for (NodeId v = 0; v < n; ++v) {
        if (!nf.is_head(v)) {
            continue;
        }
        auto preds = g.predecessors(v);
        for (std::size_t i = 0; i < preds.size(); ++i) {
            back_into[pred_offset[v] + i] = nf.leq(preds[i], v) ? 1 : 0;
        }
    }
}

ConfigIndex::ConfigIndex(const MemoryConfiguration& m) {
    const std::size_t n = m.node_count();
    dpost_at.resize(n);
    achk_at.resize(n);
    dpostl_at.resize(n);
    dprel_at.resize(n);
    checked.assign(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        dpost_at[m.dpost[u]].push_back(u);
        for (NodeId v : m.dpostl[u]) {
            dpostl_at[v].push_back(u);
        }
        if (m.achk[u]) {
            checked[u] = 1;
            achk_at[*m.achk[u]].push_back(u);
            for (NodeId v : m.dprel[u]) {
                dprel_at[v].push_back(u);
            }
        }
    }
}

}  // namespace detail

#define MEMFIX_ENGINE_INSTANTIATE(D)                                                          \
    template AnalysisResult<D> run<D>(const FmProgram&, const MemoryConfiguration&,           \
                                      const DiGraph&, std::span<const NodeProgram>, const D&, \
                                      const EngineOptions&);                                  \
    template ValidityReport run_shadow<D>(const FmProgram&, const MemoryConfiguration&,       \
                                          const DiGraph&, std::span<const NodeProgram>,       \
                                          const D&, const EngineOptions&);                    \
    template ReferenceResult<D> run_reference<D>(const Wto&, const DiGraph&,                  \
                                                 std::span<const NodeProgram>,                \
                                                 const CheckSet&, const D&,                   \
                                                 const EngineOptions&);

MEMFIX_ENGINE_INSTANTIATE(IntervalDomain)
MEMFIX_ENGINE_INSTANTIATE(ConstantDomain)

}  // namespace memfix
