// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/memconfig.hpp"

#include <algorithm>
#include <numeric>

namespace memfix {

CheckSet make_check_set(std::size_t node_count, std::initializer_list<NodeId> members) {
    CheckSet out(node_count, false);
    for (NodeId v : members) {
        out.at(v) = true;
    }
    return out;
}

MemoryConfiguration default_config(const FmProgram& p, const CheckSet& checks) {
    const std::size_t n = p.node_count();
    const NodeId z = p.last_node();
    MemoryConfiguration m;
    m.dpost.assign(n, z);
    m.achk.assign(n, std::nullopt);
    m.dpostl.assign(n, {});
    m.dprel.assign(n, {});
    for (NodeId v = 0; v < n; ++v) {
        if (checks[v]) {
            m.achk[v] = z;
        }
    }
    return m;
}

std::vector<NodeId> dpost_opt(const DiGraph& g, const Wto& w, const NestingForest& nf) {
    const ExecOrder order(w);
    std::vector<NodeId> dpost(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        NodeId best = u;
        bool any = false;
        for (NodeId v : g.successors(u)) {
            NodeId cand = lift(nf, u, v);
            if (!any || order.leq(best, cand)) {
                best = cand;
                any = true;
            }
        }
        dpost[u] = best;
    }
    return dpost;
}

std::vector<std::optional<NodeId>> achk_opt(const NestingForest& nf, const CheckSet& checks) {
    std::vector<std::optional<NodeId>> achk(nf.size());
    for (NodeId u = 0; u < nf.size(); ++u) {
        if (checks[u]) {
            achk[u] = nf.outermost(u);
        }
    }
    return achk;
}

std::vector<std::vector<NodeId>> dpostl_opt(const NestingForest& nf,
                                            const std::vector<NodeId>& dpost) {
    std::vector<std::vector<NodeId>> out(nf.size());
    for (NodeId u = 0; u < nf.size(); ++u) {
        const NodeId d = dpost[u];
        std::vector<NodeId> up_u = nf.up_chain(u);
        std::vector<NodeId> up_d = nf.up_chain(d);
        std::sort(up_u.begin(), up_u.end());
        std::sort(up_d.begin(), up_d.end());
        std::set_difference(up_u.begin(), up_u.end(), up_d.begin(), up_d.end(),
                            std::back_inserter(out[u]));
        if (nf.leq(u, d)) {
            out[u].push_back(d);
            std::sort(out[u].begin(), out[u].end());
        }
    }
    return out;
}

std::vector<std::vector<NodeId>> dprel_opt(const NestingForest& nf, const CheckSet& checks) {
    std::vector<std::vector<NodeId>> out(nf.size());
    for (NodeId u = 0; u < nf.size(); ++u) {
        if (!checks[u]) {
            continue;
        }
        for (NodeId x : nf.up_chain(u)) {
            if (x != u) {
                out[u].push_back(x);
            }
        }
        std::sort(out[u].begin(), out[u].end());
    }
    return out;
}

MemoryConfiguration optimal_config(const DiGraph& g, const Wto& w, const CheckSet& checks) {
    const NestingForest nf(w);
    MemoryConfiguration m;
    m.dpost = dpost_opt(g, w, nf);
    m.achk = achk_opt(nf, checks);
    m.dpostl = dpostl_opt(nf, m.dpost);
    m.dprel = dprel_opt(nf, checks);
    return m;
}

namespace {

std::string set_text(const std::vector<NodeId>& s, const NodeLabels& labels) {
    std::vector<NodeId> sorted = s;
    std::sort(sorted.begin(), sorted.end(), [&](NodeId a, NodeId b) {
        return labels.empty() ? a < b : labels[a] < labels[b];
    });
    std::string out = "{";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i != 0) {
            out += ", ";
        }
        out += node_label(labels, sorted[i]);
    }
    return out + "}";
}

}  // namespace

std::string to_text(const MemoryConfiguration& m, const NodeLabels& labels) {
    std::vector<NodeId> nodes(m.node_count());
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    if (!labels.empty()) {
        std::sort(nodes.begin(), nodes.end(),
                  [&](NodeId a, NodeId b) { return labels[a] < labels[b]; });
    }
    std::string out;
    for (NodeId v : nodes) {
        out += "dpost " + node_label(labels, v) + " -> " + node_label(labels, m.dpost[v]) + "\n";
    }
    for (NodeId v : nodes) {
        if (m.achk[v]) {
            out += "achk " + node_label(labels, v) + " -> " + node_label(labels, *m.achk[v]) + "\n";
        }
    }
    for (NodeId v : nodes) {
        out += "dpostl " + node_label(labels, v) + " -> " + set_text(m.dpostl[v], labels) + "\n";
    }
    for (NodeId v : nodes) {
        if (m.achk[v]) {
            out += "dprel " + node_label(labels, v) + " -> " + set_text(m.dprel[v], labels) + "\n";
        }
    }
    return out;
}

}  // namespace memfix
