// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/random_cfg.hpp"

#include <limits>
#include <numeric>
#include <unordered_set>

namespace memfix {

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection sampling on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = next();
    } while (x >= limit);
    return x % bound;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) {
        return static_cast<std::int64_t>(next());
    }
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
}

bool Rng::chance(double p) {
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
}

namespace {

// Random spanning tree rooted at perm[0], returned with the order.
std::vector<NodeId> tree_edges(Rng& rng, std::size_t n, std::vector<Edge>& edges) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    rng.shuffle(perm);
    for (std::size_t i = 1; i < n; ++i) {
        edges.push_back({perm[rng.below(i)], perm[i]});
    }
    return perm;
}

}  // namespace

DiGraph random_graph(Rng& rng, std::size_t n, double edge_prob) {
    std::vector<Edge> edges;
    std::vector<NodeId> perm = tree_edges(rng, n, edges);
    std::vector<std::uint8_t> present(n * n, 0);
    for (const Edge& e : edges) {
        present[e.from * n + e.to] = 1;
    }
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
            if (present[u * n + v] == 0 && rng.chance(edge_prob)) {
                edges.push_back({u, v});
            }
        }
    }
    return DiGraph(n, std::move(edges), perm[0]);
}

DiGraph random_sparse_graph(Rng& rng, std::size_t n, std::size_t m) {
    std::vector<Edge> edges;
    edges.reserve(m);
    std::vector<NodeId> perm = tree_edges(rng, n, edges);
    std::unordered_set<std::uint64_t> present;
    present.reserve(m * 2);
    for (const Edge& e : edges) {
        present.insert(std::uint64_t{e.from} << 32 | e.to);
    }
    while (edges.size() < m) {
        auto u = static_cast<NodeId>(rng.below(n));
        auto v = static_cast<NodeId>(rng.below(n));
        if (present.insert(std::uint64_t{u} << 32 | v).second) {
            edges.push_back({u, v});
        }
    }
    return DiGraph(n, std::move(edges), perm[0]);
}

VarTable generated_vars(std::size_t count) {
    VarTable vars;
    for (std::size_t i = 0; i < count; ++i) {
        vars.intern("x" + std::to_string(i));
    }
    return vars;
}

std::vector<NodeProgram> random_programs(Rng& rng, std::size_t n, const ProgramGenOptions& opts) {
    const auto k = opts.var_count;
    const auto c = opts.const_bound;
    auto var = [&] { return static_cast<VarId>(rng.below(k)); };
    auto relation = [&] { return static_cast<Relation>(rng.below(6)); };
    std::vector<NodeProgram> out(n);
    if (k == 0) {
        return out;
    }
    for (NodeProgram& prog : out) {
        const std::size_t count = rng.below(opts.max_stmts + 1);
        for (std::size_t i = 0; i < count; ++i) {
            if (rng.chance(opts.assume_prob)) {
                prog.stmts.push_back(Assume{{var(), relation(), rng.range(-c, c)}});
                continue;
            }
            Assign a;
            a.target = var();
            switch (rng.below(4)) {
                case 0:
                    a.left = Operand::constant(rng.range(-c, c));
                    break;
                case 1:
                    a.left = Operand::variable(var());
                    break;
                case 2:
                    a.left = Operand::variable(var());
                    a.op = rng.chance(0.5) ? ArithOp::kAdd : ArithOp::kSub;
                    a.right = Operand::constant(rng.range(-c, c));
                    break;
                default:
                    a.left = Operand::variable(var());
                    a.op = rng.chance(0.5) ? ArithOp::kAdd : ArithOp::kSub;
                    a.right = Operand::variable(var());
                    break;
            }
            prog.stmts.push_back(a);
        }
        if (rng.chance(opts.assert_prob)) {
            prog.stmts.push_back(Assert{{var(), relation(), rng.range(-c, c)}});
        }
    }
    return out;
}

CfgDocument random_document(Rng& rng, std::string name, std::size_t n, double edge_prob,
                            const ProgramGenOptions& opts) {
    DiGraph g = random_graph(rng, n, edge_prob);
    std::vector<NodeProgram> programs = random_programs(rng, n, opts);
    CfgDocument doc;
    doc.name = std::move(name);
    doc.entry = g.entry();
    doc.vars = generated_vars(opts.var_count);
    for (NodeId v = 0; v < n; ++v) {
        doc.nodes.emplace(v, std::move(programs[v]));
    }
    for (const Edge& e : g.edges()) {
        doc.edges.emplace_back(e.from, e.to);
    }
    return doc;
}

CfgDocument nested_loops_document(std::size_t depth, std::size_t body) {
    std::string text = "graph nested_" + std::to_string(depth) + "x" + std::to_string(body) +
                       "\nvars x\nentry 0\nnode 0 { x = 0 }\n";
    const std::size_t level = body + 1;
    const std::size_t sink = depth * level + 1;
    auto head = [&](std::size_t k) { return k * level + 1; };
    auto edge = [&](std::size_t u, std::size_t v) {
        text += "edge " + std::to_string(u) + " -> " + std::to_string(v) + "\n";
    };
    for (std::size_t k = 0; k < depth; ++k) {
        text += "node " + std::to_string(head(k)) + " {}\n";
        for (std::size_t i = 1; i <= body; ++i) {
            text += "node " + std::to_string(head(k) + i) + " { x = x + 1 }\n";
            edge(head(k) + i - 1, head(k) + i);
        }
        edge(head(k) + body, k + 1 < depth ? head(k + 1) : head(k));
        edge(head(k), k == 0 ? sink : head(k - 1));
    }
    text += "node " + std::to_string(sink) + " { assert(x >= 0) }\n";
    edge(0, depth == 0 ? sink : head(0));
    return parse_cfg(text);
}

Wto random_wto(Rng& rng, std::size_t n) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    rng.shuffle(perm);
    WtoBuilder b(n);
    std::size_t open = 0;
    for (NodeId v : perm) {
        if (rng.chance(0.35)) {
            b.open(v);
            ++open;
        } else {
            b.leaf(v);
        }
        while (open > 0 && rng.chance(0.3)) {
            b.close();
            --open;
        }
    }
    while (open-- > 0) {
        b.close();
    }
    return b.finish();
}

}  // namespace memfix
