// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/validation.hpp"

#include <algorithm>

#include "memfix/generate.hpp"

namespace memfix {

namespace {

struct Context {
    const CompiledCfg& cfg;
    const FmProgram& program;
    const Wto& wto;
    const MemoryConfiguration& optimal;
    const MemoryConfiguration& fallback;
    const ValidationOptions& opts;
    InstanceOutcome& out;

    void fail(const std::string& domain, const std::string& what) {
        out.valid = false;
        out.problems.push_back(domain + ": " + what);
    }

    std::string label(NodeId v) const { return node_label(cfg.labels, v); }
};

void check_trace(Context& ctx, const std::string& name, const Profile& p) {
    const ExecOrder order(ctx.wto);
    const NestingForest nf(ctx.wto);
    const std::size_t n = ctx.cfg.graph.node_count();
    std::vector<int> checks(n, 0);
    std::vector<std::optional<NodeId>> last_free(n);
    for (const Event& e : p.events) {
        switch (e.kind) {
            case EventKind::kReadPost:
                // A read inside the reader's own loop body happens during
                // Inst[u] itself.
                if (!order.leq(e.node, e.site) && !nf.leq(e.site, e.node)) {
                    ctx.fail(name, "Post[" + ctx.label(e.node) + "] read by Inst[" +
                                       ctx.label(e.site) + "] out of order");
                }
                break;
            case EventKind::kCheck:
                if (++checks[e.node] > 1) {
                    ctx.fail(name, "check of " + ctx.label(e.node) + " recorded twice");
                }
                break;
            case EventKind::kDeallocPost:
                last_free[e.node] = e.site;
                break;
            default:
                break;
        }
    }
    for (NodeId u = 0; u < n; ++u) {
        if (!last_free[u]) {
            continue;
        }
        const NodeId site = *last_free[u];
        const auto& loops = ctx.optimal.dpostl[u];
        if (site != ctx.optimal.dpost[u] &&
            std::find(loops.begin(), loops.end(), site) == loops.end()) {
            ctx.fail(name, "Post[" + ctx.label(u) + "] last freed at " + ctx.label(site));
        }
    }
}

template <AbstractDomain D>
DomainOutcome check_domain(Context& ctx, const std::string& name, const D& domain) {
    const auto& programs = ctx.cfg.programs;
    EngineOptions traced = ctx.opts.engine;
    traced.record_events = ctx.opts.trace_properties;

    DomainOutcome out;
    auto dflt = run(ctx.program, ctx.fallback, ctx.cfg.graph, programs, domain, ctx.opts.engine);
    auto opt = run(ctx.program, ctx.optimal, ctx.cfg.graph, programs, domain, traced);
    auto ref =
        run_reference(ctx.wto, ctx.cfg.graph, programs, ctx.cfg.checks, domain, ctx.opts.engine);
    out.peak_default = dflt.profile.peak_live;
    out.peak_optimal = opt.profile.peak_live;

    if (!(opt.ck == dflt.ck)) {
        ctx.fail(name, "Ck(optimal) differs from Ck(default)");
    }
    if (!(ref.ck == dflt.ck)) {
        ctx.fail(name, "Ck(reference) differs from Ck(default)");
    }
    if (out.peak_optimal > out.peak_default) {
        ctx.fail(name, "peak_live(optimal) " + std::to_string(out.peak_optimal) +
                           " exceeds peak_live(default) " + std::to_string(out.peak_default));
    }
    if (ctx.opts.trace_properties) {
        check_trace(ctx, name, opt.profile);
    }
    if (ctx.opts.shadow) {
        ValidityReport shadow =
            run_shadow(ctx.program, ctx.optimal, ctx.cfg.graph, programs, domain, ctx.opts.engine);
        out.divergent_reads = shadow.divergences.size();
        if (!shadow.valid) {
            ctx.fail(name, "shadow run reports " + std::to_string(shadow.divergences.size()) +
                               " divergent reads" + (shadow.ck_equal ? "" : " and a Ck mismatch"));
        }
    }
    return out;
}

}  // namespace

InstanceOutcome validate_instance(const CompiledCfg& cfg, const ValidationOptions& opts) {
    InstanceOutcome out;
    GeneratedProgram gen = generate_fm_program(cfg.graph, cfg.checks);
    const Wto wto = wto_of_program(gen.program);
    if (!wto.is_valid_for(cfg.graph)) {
        out.oracle_ok = false;
        out.problems.push_back("generated ordering is not a WTO of the graph");
    }
    if (!(gen_prog(wto) == gen.program)) {
        out.oracle_ok = false;
        out.problems.push_back("program differs from genProg of its WTO");
    }
    if (!(optimal_config(cfg.graph, wto, cfg.checks) == gen.config)) {
        out.oracle_ok = false;
        out.problems.push_back("generated configuration differs from the declarative maps");
    }
    if (!out.oracle_ok) {
        return out;
    }

    const MemoryConfiguration fallback = default_config(gen.program, cfg.checks);
    Context ctx{cfg, gen.program, wto, gen.config, fallback, opts, out};
    const std::size_t vars = cfg.vars.size();
    out.interval = check_domain(ctx, "interval", IntervalDomain(vars));
    out.constant = check_domain(ctx, "const", ConstantDomain(vars));
    return out;
}

}  // namespace memfix
