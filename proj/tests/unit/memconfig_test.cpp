// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "memfix/memconfig.hpp"
#include "memfix/wto.hpp"
#include "test_support.hpp"

using namespace memfix;
using memfix::test::g1;

namespace {

Wto w1() { return Wto::parse("1 2 (3 (4 5) 6) (7 8) 9", test::g1_labels()); }

std::vector<NodeId> ids(std::initializer_list<int> ls) {
    std::vector<NodeId> out;
    for (int l : ls) {
        out.push_back(g1(l));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> sorted(std::vector<NodeId> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Set-based re-evaluation of the four maps from ω alone.
struct DirectOracle {
    const Wto& w;

    [[nodiscard]] std::set<NodeId> up(NodeId v) const {
        std::set<NodeId> s{v};
        for (NodeId h : w.omega(v)) {
            s.insert(h);
        }
        return s;
    }

    [[nodiscard]] bool nest_leq(NodeId x, NodeId y) const { return up(x).count(y) != 0; }

    [[nodiscard]] bool exec_leq(NodeId x, NodeId y) const {
        return nest_leq(x, y) || (!nest_leq(y, x) && w.position(x) <= w.position(y));
    }

    // Maximum under ⪯_N of a chain.
    [[nodiscard]] NodeId nest_max(const std::set<NodeId>& chain) const {
        for (NodeId c : chain) {
            bool top = true;
            for (NodeId d : chain) {
                top = top && nest_leq(d, c);
            }
            if (top) {
                return c;
            }
        }
        throw std::logic_error("not a chain");
    }

    [[nodiscard]] NodeId lift(NodeId u, NodeId v) const {
        std::set<NodeId> s{v};
        const auto uu = up(u);
        for (NodeId h : up(v)) {
            if (uu.count(h) == 0) {
                s.insert(h);
            }
        }
        return nest_max(s);
    }

    [[nodiscard]] NodeId dpost(const DiGraph& g, NodeId u) const {
        std::optional<NodeId> best;
        for (NodeId v : g.successors(u)) {
            const NodeId l = lift(u, v);
            if (!best || exec_leq(*best, l)) {
                best = l;
            }
        }
        return best.value_or(u);
    }

    [[nodiscard]] std::vector<NodeId> dpostl(NodeId u, NodeId d) const {
        std::vector<NodeId> out;
        const auto ud = up(d);
        for (NodeId h : up(u)) {
            if (ud.count(h) == 0) {
                out.push_back(h);
            }
        }
        if (nest_leq(u, d)) {
            out.push_back(d);
        }
        return sorted(out);
    }
};

}  // namespace

TEST_CASE("optimal configuration of G1", "[memconfig]") {
    const DiGraph g = test::g1_graph();
    const Wto w = w1();
    const CheckSet checks = make_check_set(9, {g1(4), g1(9)});
    const MemoryConfiguration m = optimal_config(g, w, checks);

    const std::map<int, int> dpost = {{1, 2}, {2, 7}, {3, 7}, {8, 7}, {4, 6},
                                      {5, 3}, {6, 3}, {7, 9}, {9, 9}};
    for (auto [u, v] : dpost) {
        CHECK(m.dpost[g1(u)] == g1(v));
    }
    for (int u = 1; u <= 9; ++u) {
        if (u == 4) {
            CHECK(m.achk[g1(u)] == g1(3));
        } else if (u == 9) {
            CHECK(m.achk[g1(u)] == g1(9));
        } else {
            CHECK_FALSE(m.achk[g1(u)].has_value());
        }
    }
    const std::map<int, std::vector<NodeId>> dpostl = {
        {1, ids({1})}, {2, ids({2})},       {3, ids({3})},    {4, ids({4})}, {5, ids({3, 4, 5})},
        {6, ids({3, 6})}, {7, ids({7})}, {8, ids({7, 8})}, {9, ids({9})}};
    for (const auto& [u, set] : dpostl) {
        CHECK(sorted(m.dpostl[g1(u)]) == set);
    }
    CHECK(sorted(m.dprel[g1(4)]) == ids({3}));
    CHECK(m.dprel[g1(9)].empty());
}

TEST_CASE("default configuration", "[memconfig]") {
    const FmProgram p = gen_prog(w1());
    const MemoryConfiguration m = default_config(p, make_check_set(9, {g1(4), g1(9)}));
    for (NodeId v = 0; v < 9; ++v) {
        CHECK(m.dpost[v] == g1(9));
        CHECK(m.dpostl[v].empty());
        CHECK(m.dprel[v].empty());
    }
    CHECK(m.achk[g1(4)] == g1(9));
    CHECK(m.achk[g1(9)] == g1(9));
    CHECK_FALSE(m.achk[g1(1)].has_value());

    const FmProgram single = gen_prog(Wto::parse("0"));
    const MemoryConfiguration s = default_config(single, CheckSet(1, false));
    CHECK(s.dpost[0] == 0);
}

TEST_CASE("configuration text form", "[memconfig]") {
    const DiGraph g = test::g1_graph();
    const MemoryConfiguration m = optimal_config(g, w1(), make_check_set(9, {g1(4), g1(9)}));
    const std::string text = to_text(m, test::g1_labels());
    CHECK(text.find("dpost 2 -> 7\n") != std::string::npos);
    CHECK(text.find("achk 4 -> 3\n") != std::string::npos);
    CHECK(text.find("dpostl 5 -> {3, 4, 5}\n") != std::string::npos);
    CHECK(text.find("dprel 9 -> {}\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 9 + 2 + 9 + 2);
}

TEST_CASE("loop-free path graph", "[memconfig]") {
    const DiGraph g(3, {{0, 1}, {1, 2}}, 0);
    const Wto w = Wto::parse("0 1 2");
    const MemoryConfiguration m = optimal_config(g, w, CheckSet(3, false));
    CHECK(m.dpost == std::vector<NodeId>{1, 2, 2});
    CHECK(m.dpostl[0] == std::vector<NodeId>{0});
    CHECK(m.dpostl[1] == std::vector<NodeId>{1});
}

TEST_CASE("declarative maps match direct set evaluation", "[memconfig][property]") {
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        Rng rng(seed);
        const std::size_t n = 1 + rng.below(16);
        const DiGraph g = random_graph(rng, n, test::edge_prob_for(seed));
        CheckSet checks(n, false);
        for (NodeId v = 0; v < n; ++v) {
            checks[v] = rng.chance(0.3);
        }
        const Wto w = wto_of_program(generate_fm_program(g, checks).program);
        const MemoryConfiguration m = optimal_config(g, w, checks);
        const DirectOracle o{w};
        const NestingForest nf(w);
        INFO("seed " << seed << " wto " << w.to_string());
        for (NodeId u = 0; u < n; ++u) {
            const NodeId d = o.dpost(g, u);
            CHECK(m.dpost[u] == d);
            CHECK(sorted(m.dpostl[u]) == o.dpostl(u, d));
            for (NodeId h : m.dpostl[u]) {
                CHECK((h == u || w.is_head(h)));
            }
            if (checks[u]) {
                const auto up = o.up(u);
                CHECK(m.achk[u] == o.nest_max(up));
                CHECK(m.achk[u] == nf.up_chain(u).back());
                std::vector<NodeId> rel(up.begin(), up.end());
                rel.erase(std::remove(rel.begin(), rel.end(), u), rel.end());
                CHECK(sorted(m.dprel[u]) == rel);
                for (NodeId h : m.dprel[u]) {
                    CHECK(w.is_head(h));
                }
            } else {
                CHECK_FALSE(m.achk[u].has_value());
                CHECK(m.dprel[u].empty());
            }
        }
        const MemoryConfiguration dflt = default_config(gen_prog(w), checks);
        const NodeId z = ExecOrder(w).sequence().back();
        for (NodeId u = 0; u < n; ++u) {
            CHECK(dflt.dpost[u] == z);
        }
    }
}
