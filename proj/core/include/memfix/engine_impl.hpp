// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Template definitions behind engine.hpp. The library instantiates them for
// IntervalDomain and ConstantDomain; include this header to run the engine
// over another AbstractDomain.
#pragma once

#include <algorithm>
#include <utility>

#include "memfix/engine.hpp"

namespace memfix::detail {

/// Per-(program, graph) data shared by every lane.
struct ProgramTables {
    ProgramTables(const FmProgram& p, const DiGraph& g);

    std::vector<std::size_t> pred_offset;
    /// One flag per predecessor entry of v: v ∈ ω(p), i.e. the edge p -> v
    /// closes a loop of the component headed by v.
    std::vector<std::uint8_t> back_into;
};

/// A memory configuration inverted into per-site lists.
struct ConfigIndex {
    explicit ConfigIndex(const MemoryConfiguration& m);

    std::vector<std::vector<NodeId>> dpost_at;
    std::vector<std::vector<NodeId>> achk_at;
    std::vector<std::vector<NodeId>> dpostl_at;
    std::vector<std::vector<NodeId>> dprel_at;
    std::vector<std::uint8_t> checked;
};

template <AbstractDomain D>
struct Lane {
    using State = typename D::State;

    std::size_t index = 0;
    const ConfigIndex* config = nullptr;
    std::vector<std::optional<State>> pre;
    std::vector<std::optional<State>> post;
    // Values at their last deallocation; kept only when retaining.
    std::vector<std::optional<State>> last_pre;
    std::vector<std::optional<State>> last_post;
    CheckMap ck;
    Profile profile;
    std::uint64_t step = 0;
};

template <AbstractDomain D>
class Interpreter {
  public:
    using State = typename D::State;

    Interpreter(const FmProgram& p, const DiGraph& g, std::span<const NodeProgram> programs,
                const D& domain, const EngineOptions& opts,
                std::span<const ConfigIndex* const> configs, bool track_divergence)
        : p_(p),
          g_(g),
          programs_(programs),
          domain_(domain),
          opts_(opts),
          tables_(p, g),
          track_(track_divergence),
          executions_(g.node_count(), 0) {
        const std::size_t n = g.node_count();
        if (programs.size() != n) {
            throw AnalysisSetupError("expected " + std::to_string(n) + " node programs, got " +
                                     std::to_string(programs.size()));
        }
        init_ = opts.entry_state == EntryState::kTop ? domain.top() : domain.bottom();
        lanes_.resize(configs.size());
        for (std::size_t i = 0; i < configs.size(); ++i) {
            Lane<D>& lane = lanes_[i];
            lane.index = i;
            lane.config = configs[i];
            lane.pre.resize(n);
            lane.post.resize(n);
            if (opts.retain) {
                lane.last_pre.resize(n);
                lane.last_post.resize(n);
            }
            lane.ck = CheckMap(n);
            lane.profile.iterations_per_head.assign(n, 0);
        }
    }

    void run() {
        if (p_.root() != FmProgram::kNone) {
            run_instr(p_.root());
        }
    }

    Lane<D>& lane(std::size_t i) { return lanes_[i]; }
    std::vector<DivergentRead>& divergences() { return divergences_; }

    ValueSnapshot<D> snapshot(const Lane<D>& lane) const {
        ValueSnapshot<D> out;
        out.pre.reserve(lane.pre.size());
        out.post.reserve(lane.post.size());
        auto pick = [&](const std::optional<State>& live, const std::vector<std::optional<State>>& last,
                        std::size_t v) {
            if (live) {
                return *live;
            }
            return v < last.size() && last[v] ? *last[v] : domain_.bottom();
        };
        for (std::size_t v = 0; v < lane.pre.size(); ++v) {
            out.pre.push_back(pick(lane.pre[v], lane.last_pre, v));
            out.post.push_back(pick(lane.post[v], lane.last_post, v));
        }
        return out;
    }

  private:
    // Later lanes run each phase first so that their reads see lane 0's
    // tables as they were before lane 0 performed the same phase.
    template <typename F>
    void for_lanes(F&& f) {
        for (std::size_t i = lanes_.size(); i-- > 0;) {
            f(lanes_[i]);
        }
    }

    void run_instr(FmProgram::Index i) {
        for (FmProgram::Index item : p_.sequence(i)) {
            const auto& in = p_.at(item);
            if (in.kind == FmProgram::Kind::kExec) {
                exec(in.node);
            } else {
                repeat(in.node, in.first);
            }
        }
    }

    void exec(NodeId v) {
        ++executions_[v];
        for_lanes([&](Lane<D>& lane) {
            assign(lane, lane.pre, v, pred_join(lane, v, false), v, EventKind::kAllocPre);
            for (NodeId u : lane.config->dpost_at[v]) {
                dealloc(lane, lane.post, u, v, EventKind::kDeallocPost);
            }
            assign(lane, lane.post, v, domain_.transfer(programs_[v], *lane.pre[v]), v,
                   EventKind::kAllocPost);
            finish(lane, v);
        });
    }

    void repeat(NodeId v, FmProgram::Index body) {
        std::vector<State> tpre(lanes_.size());
        ++executions_[v];
        for_lanes([&](Lane<D>& lane) { tpre[lane.index] = pred_join(lane, v, true); });
        for (std::uint64_t iter = 1;; ++iter) {
            if (iter > opts_.iteration_cap) {
                throw IterationCapExceeded(v, opts_.iteration_cap);
            }
            if (iter > 1) {
                ++executions_[v];
            }
            for_lanes([&](Lane<D>& lane) {
                ++lane.profile.iterations_per_head[v];
                for (NodeId u : lane.config->dpostl_at[v]) {
                    dealloc(lane, lane.post, u, v, EventKind::kDeallocPost);
                }
                for (NodeId u : lane.config->dprel_at[v]) {
                    dealloc(lane, lane.pre, u, v, EventKind::kDeallocPre);
                }
                State post = domain_.transfer(programs_[v], tpre[lane.index]);
                assign(lane, lane.pre, v, std::move(tpre[lane.index]), v, EventKind::kAllocPre);
                assign(lane, lane.post, v, std::move(post), v, EventKind::kAllocPost);
            });
            if (body != FmProgram::kNone) {
                run_instr(body);
            }
            bool stable = false;
            for_lanes([&](Lane<D>& lane) {
                State joined = pred_join(lane, v, false);
                const State& old = read(lane, lane.pre, v, v, DivergentRead::Slot::kPre);
                State next = iter <= opts_.widen_delay ? domain_.join(old, joined)
                                                       : domain_.widen(old, joined);
                emit(lane, EventKind::kWidenIter, v, v);
                bool lane_stable = domain_.leq(next, read(lane, lane.pre, v, v, DivergentRead::Slot::kPre));
                tpre[lane.index] = std::move(next);
                if (lane.index == 0) {
                    stable = lane_stable;
                }
            });
            if (stable) {
                break;
            }
        }
        for_lanes([&](Lane<D>& lane) {
            for (NodeId u : lane.config->dpost_at[v]) {
                dealloc(lane, lane.post, u, v, EventKind::kDeallocPost);
            }
            finish(lane, v);
        });
    }

    // Own-Pre release and the Achk sweep shared by exec and the postamble.
    void finish(Lane<D>& lane, NodeId v) {
        if (!lane.config->checked[v]) {
            dealloc(lane, lane.pre, v, v, EventKind::kDeallocPre);
        }
        for (NodeId u : lane.config->achk_at[v]) {
            bool verdict =
                domain_.check(programs_[u], read(lane, lane.pre, u, v, DivergentRead::Slot::kPre));
            if (lane.ck.record(u, verdict)) {
                emit(lane, EventKind::kCheck, u, v);
            }
            dealloc(lane, lane.pre, u, v, EventKind::kDeallocPre);
        }
    }

    State pred_join(Lane<D>& lane, NodeId v, bool skip_back_edges) {
        State acc = v == g_.entry() ? init_ : domain_.bottom();
        auto preds = g_.predecessors(v);
        const std::size_t base = tables_.pred_offset[v];
        for (std::size_t i = 0; i < preds.size(); ++i) {
            if (skip_back_edges && tables_.back_into[base + i] != 0) {
                continue;
            }
            acc = domain_.join(acc, read(lane, lane.post, preds[i], v, DivergentRead::Slot::kPost));
        }
        return acc;
    }

    const State& read(Lane<D>& lane, std::vector<std::optional<State>>& table, NodeId u,
                      NodeId site, DivergentRead::Slot slot) {
        const bool is_post = slot == DivergentRead::Slot::kPost;
        if (!table[u]) {
            if (track_ && lane.index == 1) {
                const auto& reference = is_post ? lanes_[0].post[u] : lanes_[0].pre[u];
                if (reference && !domain_.is_bottom(*reference)) {
                    divergences_.push_back({slot, u, site, executions_[site], lane.step});
                }
            }
            assign(lane, table, u, domain_.bottom(), site,
                   is_post ? EventKind::kAllocPost : EventKind::kAllocPre);
        }
        if (is_post) {
            emit(lane, EventKind::kReadPost, u, site);
        }
        return *table[u];
    }

    void assign(Lane<D>& lane, std::vector<std::optional<State>>& table, NodeId u, State value,
                NodeId site, EventKind alloc_kind) {
        Profile& prof = lane.profile;
        if (table[u]) {
            prof.live_cells_now -= domain_.cells(*table[u]);
        } else {
            ++prof.live_now;
            ++prof.total_allocs;
            prof.peak_live = std::max(prof.peak_live, prof.live_now);
            emit(lane, alloc_kind, u, site);
        }
        prof.live_cells_now += domain_.cells(value);
        prof.peak_live_cells = std::max(prof.peak_live_cells, prof.live_cells_now);
        table[u] = std::move(value);
    }

    void dealloc(Lane<D>& lane, std::vector<std::optional<State>>& table, NodeId u, NodeId site,
                 EventKind kind) {
        if (!table[u]) {
            return;
        }
        lane.profile.live_cells_now -= domain_.cells(*table[u]);
        --lane.profile.live_now;
        if (opts_.retain) {
            auto& last = kind == EventKind::kDeallocPre ? lane.last_pre : lane.last_post;
            last[u] = std::move(table[u]);
        }
        table[u].reset();
        emit(lane, kind, u, site);
    }

    void emit(Lane<D>& lane, EventKind kind, NodeId node, NodeId site) {
        if (opts_.record_events) {
            lane.profile.events.push_back({lane.step, kind, node, site});
        }
        ++lane.step;
    }

    const FmProgram& p_;
    const DiGraph& g_;
    std::span<const NodeProgram> programs_;
    const D& domain_;
    const EngineOptions& opts_;
    ProgramTables tables_;
    bool track_;
    State init_;
    std::vector<Lane<D>> lanes_;
    std::vector<std::uint64_t> executions_;
    std::vector<DivergentRead> divergences_;
};

template <AbstractDomain D>
class ReferenceSolver {
  public:
    using State = typename D::State;

    ReferenceSolver(const Wto& w, const DiGraph& g, std::span<const NodeProgram> programs,
                    const D& domain, const EngineOptions& opts)
        : w_(w), g_(g), programs_(programs), domain_(domain), opts_(opts) {
        const std::size_t n = g.node_count();
        if (programs.size() != n || w.size() != n) {
            throw AnalysisSetupError("reference solver inputs disagree on the node count");
        }
        init_ = opts.entry_state == EntryState::kTop ? domain.top() : domain.bottom();
        pre_.assign(n, domain.bottom());
        post_.assign(n, domain.bottom());
        iterations_.assign(n, 0);
    }

    void solve() { solve_range(0, static_cast<std::uint32_t>(w_.size())); }

    ReferenceResult<D> result(const CheckSet& checks) {
        ReferenceResult<D> out;
        out.ck = CheckMap(g_.node_count());
        for (NodeId u = 0; u < g_.node_count(); ++u) {
            if (checks[u]) {
                out.ck.record(u, domain_.check(programs_[u], pre_[u]));
            }
        }
        out.values.pre = std::move(pre_);
        out.values.post = std::move(post_);
        out.iterations_per_head = std::move(iterations_);
        return out;
    }

  private:
    void solve_range(std::uint32_t begin, std::uint32_t end) {
        std::uint32_t pos = begin;
        while (pos < end) {
            NodeId v = w_.order()[pos];
            if (w_.is_head(v)) {
                solve_component(v);
                pos = w_.component_end(v) + 1;
            } else {
                pre_[v] = join_preds(v, std::nullopt);
                post_[v] = domain_.transfer(programs_[v], pre_[v]);
                ++pos;
            }
        }
    }

    void solve_component(NodeId h) {
        State tpre = join_preds(h, h);
        for (std::uint64_t iter = 1;; ++iter) {
            if (iter > opts_.iteration_cap) {
                throw IterationCapExceeded(h, opts_.iteration_cap);
            }
            ++iterations_[h];
            pre_[h] = tpre;
            post_[h] = domain_.transfer(programs_[h], pre_[h]);
            solve_range(w_.position(h) + 1, w_.component_end(h) + 1);
            State joined = join_preds(h, std::nullopt);
            tpre = iter <= opts_.widen_delay ? domain_.join(pre_[h], joined)
                                             : domain_.widen(pre_[h], joined);
            if (domain_.leq(tpre, pre_[h])) {
                break;
            }
        }
    }

    // With `outside_of` set, skips predecessors inside that head's component.
    State join_preds(NodeId v, std::optional<NodeId> outside_of) {
        State acc = v == g_.entry() ? init_ : domain_.bottom();
        for (NodeId p : g_.predecessors(v)) {
            if (outside_of) {
                const auto lo = w_.position(*outside_of);
                const auto hi = w_.component_end(*outside_of);
                if (lo <= w_.position(p) && w_.position(p) <= hi) {
                    continue;
                }
            }
            acc = domain_.join(acc, post_[p]);
        }
        return acc;
    }

    const Wto& w_;
    const DiGraph& g_;
    std::span<const NodeProgram> programs_;
    const D& domain_;
    const EngineOptions& opts_;
    State init_;
    std::vector<State> pre_;
    std::vector<State> post_;
    std::vector<std::uint64_t> iterations_;
};

}  // namespace memfix::detail

namespace memfix {

template <AbstractDomain D>
AnalysisResult<D> run(const FmProgram& p, const MemoryConfiguration& m, const DiGraph& g,
                      std::span<const NodeProgram> programs, const D& domain,
                      const EngineOptions& opts) {
    const detail::ConfigIndex index(m);
    const detail::ConfigIndex* configs[] = {&index};
    detail::Interpreter<D> interp(p, g, programs, domain, opts, configs, false);
    interp.run();
    auto& lane = interp.lane(0);
    AnalysisResult<D> out;
    if (opts.retain) {
        out.retained = interp.snapshot(lane);
    }
    out.ck = std::move(lane.ck);
    out.profile = std::move(lane.profile);
    return out;
}

template <AbstractDomain D>
ValidityReport run_shadow(const FmProgram& p, const MemoryConfiguration& m, const DiGraph& g,
                          std::span<const NodeProgram> programs, const D& domain,
                          const EngineOptions& opts) {
    CheckSet checks(m.node_count(), false);
    for (NodeId v = 0; v < m.node_count(); ++v) {
        checks[v] = m.is_checked(v);
    }
    const detail::ConfigIndex reference(default_config(p, checks));
    const detail::ConfigIndex candidate(m);
    const detail::ConfigIndex* configs[] = {&reference, &candidate};
    detail::Interpreter<D> interp(p, g, programs, domain, opts, configs, true);
    interp.run();
    ValidityReport out;
    out.divergences = std::move(interp.divergences());
    out.ck_default = std::move(interp.lane(0).ck);
    out.ck_candidate = std::move(interp.lane(1).ck);
    out.profile_default = std::move(interp.lane(0).profile);
    out.profile_candidate = std::move(interp.lane(1).profile);
    out.ck_equal = out.ck_default == out.ck_candidate;
    out.valid = out.ck_equal && out.divergences.empty();
    return out;
}

template <AbstractDomain D>
ReferenceResult<D> run_reference(const Wto& w, const DiGraph& g,
                                 std::span<const NodeProgram> programs, const CheckSet& checks,
                                 const D& domain, const EngineOptions& opts) {
    detail::ReferenceSolver<D> solver(w, g, programs, domain, opts);
    solver.solve();
    return solver.result(checks);
}

}  // namespace memfix
