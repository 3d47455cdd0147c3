// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memfix/constant.hpp"
#include "memfix/domain.hpp"
#include "memfix/fm_program.hpp"
#include "memfix/graph.hpp"
#include "memfix/interval.hpp"
#include "memfix/memconfig.hpp"
#include "memfix/statements.hpp"
#include "memfix/wto.hpp"

namespace memfix {

/// Value joined into the entry node's Pre on top of its predecessors.
enum class EntryState : std::uint8_t { kTop, kBottom };

struct EngineOptions {
    /// Loop iterations allowed per activation of a repeat instruction.
    std::uint64_t iteration_cap = 10000;
    /// Iterations per activation that join instead of widen.
    std::uint32_t widen_delay = 0;
    EntryState entry_state = EntryState::kTop;
    bool record_events = false;
    /// Keep the final Pre/Post tables in the result.
    bool retain = false;
};

enum class EventKind : std::uint8_t {
    kAllocPre,
    kAllocPost,
    kDeallocPre,
    kDeallocPost,
    kReadPost,
    kCheck,
    kWidenIter,
};

std::string_view to_string(EventKind kind);

struct Event {
    std::uint64_t step;
    EventKind kind;
    NodeId node;
    /// Node of the instruction that performed the event.
    NodeId site;
    friend bool operator==(const Event&, const Event&) = default;
};

struct Profile {
    std::vector<Event> events;  // empty unless EngineOptions::record_events
    std::int64_t live_now = 0;
    std::int64_t peak_live = 0;
    std::uint64_t total_allocs = 0;
    std::vector<std::uint64_t> iterations_per_head;
    /// Same as live_now/peak_live, weighted by per-state variable entries.
    std::uint64_t live_cells_now = 0;
    std::uint64_t peak_live_cells = 0;
};

/// Check verdicts. The first recorded verdict for a node wins.
class CheckMap {
  public:
    CheckMap() = default;
    explicit CheckMap(std::size_t node_count) : ck_(node_count) {}

    /// Returns false (and keeps the old verdict) if `u` already has one.
    bool record(NodeId u, bool verdict);
    [[nodiscard]] std::optional<bool> get(NodeId u) const { return ck_[u]; }
    [[nodiscard]] std::size_t node_count() const { return ck_.size(); }
    friend bool operator==(const CheckMap&, const CheckMap&) = default;

  private:
    std::vector<std::optional<bool>> ck_;
};

class IterationCapExceeded : public std::runtime_error {
  public:
    IterationCapExceeded(NodeId head, std::uint64_t cap);
    [[nodiscard]] NodeId head() const { return head_; }

  private:
    NodeId head_;
};

template <AbstractDomain D>
struct ValueSnapshot {
    std::vector<typename D::State> pre;
    std::vector<typename D::State> post;
};

template <AbstractDomain D>
struct AnalysisResult {
    CheckMap ck;
    Profile profile;
    /// Final tables; a deallocated slot shows the value it held when freed
    /// (⊥ if never written). Set when requested.
    std::optional<ValueSnapshot<D>> retained;
};

struct DivergentRead {
    enum class Slot : std::uint8_t { kPre, kPost };
    Slot slot;
    NodeId node;
    NodeId reader;
    /// 1-based count of the reader instruction's executions (loop iterations for a repeat).
    std::uint64_t reader_execution;
    std::uint64_t step;
    friend bool operator==(const DivergentRead&, const DivergentRead&) = default;
};

struct ValidityReport {
    bool valid = true;
    bool ck_equal = true;
    std::vector<DivergentRead> divergences;
    CheckMap ck_default;
    CheckMap ck_candidate;
    Profile profile_default;
    Profile profile_candidate;
};

template <AbstractDomain D>
struct ReferenceResult {
    ValueSnapshot<D> values;
    CheckMap ck;
    std::vector<std::uint64_t> iterations_per_head;
};

/// Executes `p` under configuration `m`. V_C is the set of nodes with an achk entry.
template <AbstractDomain D>
AnalysisResult<D> run(const FmProgram& p, const MemoryConfiguration& m, const DiGraph& g,
                      std::span<const NodeProgram> programs, const D& domain,
                      const EngineOptions& opts = {});

/// Runs the default configuration and `m` in lockstep. The default lane
/// decides loop exits; the candidate lane replays the same instruction trace.
template <AbstractDomain D>
ValidityReport run_shadow(const FmProgram& p, const MemoryConfiguration& m, const DiGraph& g,
                          std::span<const NodeProgram> programs, const D& domain,
                          const EngineOptions& opts = {});

/// Recursive iteration strategy over `w` with every value kept; checks are
/// evaluated once the fixpoint is reached.
template <AbstractDomain D>
ReferenceResult<D> run_reference(const Wto& w, const DiGraph& g,
                                 std::span<const NodeProgram> programs, const CheckSet& checks,
                                 const D& domain, const EngineOptions& opts = {});

#define MEMFIX_ENGINE_EXTERN(D)                                                                \
    extern template AnalysisResult<D> run<D>(const FmProgram&, const MemoryConfiguration&,     \
                                             const DiGraph&, std::span<const NodeProgram>,     \
                                             const D&, const EngineOptions&);                  \
    extern template ValidityReport run_shadow<D>(                                              \
        const FmProgram&, const MemoryConfiguration&, const DiGraph&,                          \
        std::span<const NodeProgram>, const D&, const EngineOptions&);                         \
    extern template ReferenceResult<D> run_reference<D>(const Wto&, const DiGraph&,            \
                                                        std::span<const NodeProgram>,          \
                                                        const CheckSet&, const D&,             \
                                                        const EngineOptions&);

MEMFIX_ENGINE_EXTERN(IntervalDomain)
MEMFIX_ENGINE_EXTERN(ConstantDomain)

#undef MEMFIX_ENGINE_EXTERN

}  // namespace memfix
