// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "memfix/generate.hpp"
#include "memfix/wto.hpp"
#include "test_support.hpp"

using namespace memfix;
using memfix::test::g1;

namespace {

using Assignment = GenerationTrace::Assignment;

const GenerationTrace::HeadStep& step_for(const GenerationTrace& t, NodeId h) {
    for (const auto& s : t.steps) {
        if (s.head == h) {
            return s;
        }
    }
    throw std::logic_error("no step");
}

std::vector<Assignment> sorted(std::vector<Assignment> v) {
    std::sort(v.begin(), v.end(), [](const Assignment& a, const Assignment& b) {
        return std::pair(a.node, a.value) < std::pair(b.node, b.value);
    });
    return v;
}

Assignment at(int u, int v) { return {g1(u), g1(v)}; }

std::vector<NodeId> ids(std::initializer_list<int> ls) {
    std::vector<NodeId> out;
    for (int l : ls) {
        out.push_back(g1(l));
    }
    return out;
}

}  // namespace

TEST_CASE("disjoint sets keep the requested representative", "[fmachine]") {
    DisjointSets ds(5);
    ds.merge(1, 0);
    CHECK(ds.rep(1) == 0);
    ds.merge(0, 3);
    CHECK(ds.rep(1) == 3);
    CHECK(ds.rep(0) == 3);
    CHECK(ds.members(3) == std::vector<NodeId>{0, 1, 3});
    CHECK(ds.rep(4) == 4);
}

TEST_CASE("program and configuration of G1", "[fmachine]") {
    const DiGraph g = test::g1_graph();
    const CheckSet checks = make_check_set(9, {g1(4), g1(9)});
    const GeneratedProgram gen = generate_fm_program(g, checks);
    CHECK(gen.program.to_string(test::g1_labels()) ==
          "exec 1 ; exec 2 ; repeat 3 [repeat 4 [exec 5] ; exec 6] ; repeat 7 [exec 8] ; exec 9");
    const Wto w = wto_of_program(gen.program);
    CHECK(w.to_string(test::g1_labels()) == "1 2 (3 (4 5) 6) (7 8) 9");
    CHECK(gen.config == optimal_config(g, w, checks));
    CHECK(gen.nest_parent[g1(5)] == g1(4));
    CHECK(gen.nest_parent[g1(4)] == g1(3));
    CHECK(gen.nest_parent[g1(6)] == g1(3));
    CHECK(gen.nest_parent[g1(8)] == g1(7));
    CHECK(gen.nest_parent[g1(3)] == g1(3));
    CHECK(gen.nest_parent[g1(1)] == g1(1));
}

TEST_CASE("generation trace on G1", "[fmachine]") {
    const DiGraph g = test::g1_graph();
    GenerationTrace t;
    const GeneratedProgram gen = generate_fm_program(g, make_check_set(9, {g1(4), g1(9)}), &t);
    const NodeLabels labels = test::g1_labels();

    SECTION("major iteration h = 4") {
        const auto& s = step_for(t, g1(4));
        CHECK(gen.program.to_string(s.body, labels) == "exec 5");
        CHECK(gen.program.to_string(s.instruction, labels) == "repeat 4 [exec 5]");
        CHECK(s.nested == ids({5}));
        CHECK(s.dpost_body == std::vector<Assignment>{at(4, 5)});
        CHECK(s.t_body == std::vector<Assignment>{at(4, 4)});
        CHECK(s.dpost_back == std::vector<Assignment>{at(5, 4)});
        CHECK(s.merged_sets == std::vector<std::vector<NodeId>>{ids({4}), ids({5})});
    }
    SECTION("major iteration h = 3") {
        const auto& s = step_for(t, g1(3));
        CHECK(gen.program.to_string(s.body, labels) == "repeat 4 [exec 5] ; exec 6");
        CHECK(gen.program.to_string(s.instruction, labels) == "repeat 3 [repeat 4 [exec 5] ; exec 6]");
        CHECK(s.nested == ids({4, 6}));
        CHECK(sorted(s.dpost_body) == sorted({at(4, 6), at(3, 4)}));
        CHECK(sorted(s.t_body) == sorted({at(4, 4), at(3, 3)}));
        CHECK(sorted(s.dpost_back) == sorted({at(6, 3), at(5, 3)}));
        CHECK(s.merged_sets == std::vector<std::vector<NodeId>>{ids({3}), ids({4, 5}), ids({6})});
    }
    SECTION("dpost[4] moves from 5 to 6") {
        CHECK(gen.config.dpost[g1(4)] == g1(6));
    }
    SECTION("cross edge restoration") {
        const auto& s = step_for(t, g1(2));
        REQUIRE(s.restored_original.size() == 1);
        CHECK(s.restored_original[0] == Edge{g1(2), g1(8)});
        CHECK(s.restored[0] == Edge{g1(2), g1(7)});
        CHECK(s.restored_target_is_rep[0]);
    }
    SECTION("nested components and plain nodes") {
        CHECK(step_for(t, g1(7)).nested == ids({8}));
        CHECK(step_for(t, g1(7)).back_reps == ids({8}));
        const auto& s9 = step_for(t, g1(9));
        CHECK(s9.back_reps.empty());
        CHECK(s9.nested.empty());
        CHECK(gen.program.to_string(s9.instruction, labels) == "exec 9");
    }
    SECTION("connect phase") {
        CHECK(t.connected_roots == ids({1, 2, 3, 7, 9}));
        const std::vector<Assignment> connect = sorted(t.dpost_connect);
        CHECK(std::find(connect.begin(), connect.end(), at(2, 7)) != connect.end());
        CHECK(std::find(connect.begin(), connect.end(), at(1, 2)) != connect.end());
        CHECK(std::find(t.t_connect.begin(), t.t_connect.end(), at(2, 2)) != t.t_connect.end());
    }
    SECTION("head loop runs in descending dfn") {
        const DepthFirstForest f = build_dfs_forest(g);
        for (std::size_t i = 1; i < t.steps.size(); ++i) {
            CHECK(f.dfn(t.steps[i - 1].head) > f.dfn(t.steps[i].head));
        }
    }
}

TEST_CASE("single node program", "[fmachine]") {
    const DiGraph g(1, {}, 0);
    const GeneratedProgram gen = generate_fm_program(g, CheckSet(1, false));
    CHECK(gen.program.to_string() == "exec 0");
    CHECK(gen.config.dpost[0] == 0);
    CHECK(gen.config.dpostl[0] == std::vector<NodeId>{0});

    const DiGraph loop(1, {{0, 0}}, 0);
    const GeneratedProgram self = generate_fm_program(loop, CheckSet{true});
    CHECK(self.program.to_string() == "repeat 0 []");
    CHECK(self.config.dpost[0] == 0);
    CHECK(self.config.achk[0] == 0);
    CHECK(self.config.dprel[0].empty());
}

TEST_CASE("generation matches the declarative configuration", "[fmachine][property]") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(7000 + seed);
        const std::size_t n = 1 + rng.below(64);
        const DiGraph g = random_graph(rng, n, test::edge_prob_for(seed) / 4);
        CheckSet checks(n, false);
        for (NodeId v = 0; v < n; ++v) {
            checks[v] = rng.chance(0.25);
        }
        GenerationTrace t;
        const GeneratedProgram gen = generate_fm_program(g, checks, &t);
        const Wto w = wto_of_program(gen.program);
        INFO("seed " << seed);
        REQUIRE(w.is_valid_for(g));
        CHECK(gen.config == optimal_config(g, w, checks));
        CHECK(gen_prog(w) == gen.program);

        const DepthFirstForest f = build_dfs_forest(g);
        const EdgeClassification c = classify_edges(f, g);
        std::vector<bool> back_target(n, false);
        for (const Edge& e : c.back) {
            back_target[e.to] = true;
        }
        for (NodeId v = 0; v < n; ++v) {
            CHECK(gen.program.is_head(v) == back_target[v]);
        }
        const NestingForest nf(w);
        for (NodeId v = 0; v < n; ++v) {
            CHECK(gen.nest_parent[v] == nf.parent(v).value_or(v));
        }
        for (const auto& s : t.steps) {
            for (bool is_rep : s.restored_target_is_rep) {
                CHECK(is_rep);
            }
        }
        for (std::size_t i = 1; i < t.connected_roots.size(); ++i) {
            CHECK(f.post_dfn(t.connected_roots[i - 1]) > f.post_dfn(t.connected_roots[i]));
        }
    }
}

TEST_CASE("generation on sparse graphs", "[fmachine][property]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const std::size_t n = 200 + rng.below(800);
        const DiGraph g = random_sparse_graph(rng, n, 2 * n);
        CheckSet checks(n, false);
        for (NodeId v = 0; v < n; v += 7) {
            checks[v] = true;
        }
        const GeneratedProgram gen = generate_fm_program(g, checks);
        const Wto w = wto_of_program(gen.program);
        INFO("seed " << seed);
        CHECK(w.is_valid_for(g));
        CHECK(gen.config == optimal_config(g, w, checks));
    }
}
