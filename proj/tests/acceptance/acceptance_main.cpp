// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "memfix/validation.hpp"
#include "test_support.hpp"

using namespace memfix;
using memfix::test::g1;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            detail = what;
        }
        pass = pass && ok;
    }
};

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Verdict()> body;
};

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

const GenerationTrace::HeadStep* step_for(const GenerationTrace& t, NodeId h) {
    for (const auto& s : t.steps) {
        if (s.head == h) {
            return &s;
        }
    }
    return nullptr;
}

using Assignment = GenerationTrace::Assignment;

std::vector<Assignment> sorted(std::vector<Assignment> v) {
    std::sort(v.begin(), v.end(), [](const Assignment& a, const Assignment& b) {
        return std::pair(a.node, a.value) < std::pair(b.node, b.value);
    });
    return v;
}

Assignment at(int u, int v) { return {g1(u), g1(v)}; }

Verdict golden_g1() {
    Verdict v;
    const DiGraph g = test::g1_graph();
    const NodeLabels labels = test::g1_labels();
    const CheckSet checks = make_check_set(9, {g1(4), g1(9)});
    const GeneratedProgram gen = generate_fm_program(g, checks);
    v.require(gen.program.to_string(labels) ==
                  "exec 1 ; exec 2 ; repeat 3 [repeat 4 [exec 5] ; exec 6] ; repeat 7 [exec 8] ; exec 9",
              "program");
    const Wto w = wto_of_program(gen.program);
    v.require(w.to_string(labels) == "1 2 (3 (4 5) 6) (7 8) 9", "wto");
    std::vector<NodeId> seq;
    for (int l : {1, 2, 5, 4, 6, 3, 8, 7, 9}) {
        seq.push_back(g1(l));
    }
    v.require(ExecOrder(w).sequence() == seq, "execution order");

    const MemoryConfiguration& m = gen.config;
    const std::map<int, int> dpost = {{1, 2}, {2, 7}, {3, 7}, {8, 7}, {4, 6},
                                      {5, 3}, {6, 3}, {7, 9}, {9, 9}};
    for (auto [u, d] : dpost) {
        v.require(m.dpost[g1(u)] == g1(d), "dpost " + std::to_string(u));
    }
    for (int u = 1; u <= 9; ++u) {
        std::optional<NodeId> expected;
        if (u == 4) {
            expected = g1(3);
        } else if (u == 9) {
            expected = g1(9);
        }
        v.require(m.achk[g1(u)] == expected, "achk " + std::to_string(u));
    }
    const std::map<int, std::vector<NodeId>> dpostl = {
        {1, ids({1})}, {2, ids({2})}, {3, ids({3})},       {4, ids({4})},    {5, ids({3, 4, 5})},
        {6, ids({3, 6})}, {7, ids({7})}, {8, ids({7, 8})}, {9, ids({9})}};
    for (const auto& [u, set] : dpostl) {
        v.require(sorted(m.dpostl[g1(u)]) == set, "dpostl " + std::to_string(u));
    }
    for (int u = 1; u <= 9; ++u) {
        std::vector<NodeId> expected;
        if (u == 4) {
            expected = ids({3});
        }
        v.require(sorted(m.dprel[g1(u)]) == expected, "dprel " + std::to_string(u));
    }
    v.require(m == optimal_config(g, w, checks), "declarative maps");
    return v;
}

Verdict table_trace() {
    Verdict v;
    GenerationTrace t;
    const GeneratedProgram gen =
        generate_fm_program(test::g1_graph(), make_check_set(9, {g1(4), g1(9)}), &t);
    const NodeLabels labels = test::g1_labels();
    const auto* s4 = step_for(t, g1(4));
    const auto* s3 = step_for(t, g1(3));
    if (s4 == nullptr || s3 == nullptr) {
        v.require(false, "missing head step");
        return v;
    }
    v.require(gen.program.to_string(s4->instruction, labels) == "repeat 4 [exec 5]", "P[4]");
    v.require(s4->nested == ids({5}), "N_4");
    v.require(s4->dpost_body == std::vector<Assignment>{at(4, 5)}, "dpost at h=4");
    v.require(s4->t_body == std::vector<Assignment>{at(4, 4)}, "T at h=4");
    v.require(s4->dpost_back == std::vector<Assignment>{at(5, 4)}, "back dpost at h=4");
    v.require(s4->merged_sets == std::vector<std::vector<NodeId>>{ids({4}), ids({5})},
              "merge sets at h=4");

    v.require(gen.program.to_string(s3->instruction, labels) ==
                  "repeat 3 [repeat 4 [exec 5] ; exec 6]",
              "P[3]");
    v.require(s3->nested == ids({4, 6}), "N_3");
    v.require(sorted(s3->dpost_body) == sorted({at(4, 6), at(3, 4)}), "dpost at h=3");
    v.require(sorted(s3->t_body) == sorted({at(4, 4), at(3, 3)}), "T at h=3");
    v.require(sorted(s3->dpost_back) == sorted({at(6, 3), at(5, 3)}), "back dpost at h=3");
    v.require(s3->merged_sets == std::vector<std::vector<NodeId>>{ids({3}), ids({4, 5}), ids({6})},
              "merge sets at h=3");
    v.require(gen.config.dpost[g1(4)] == g1(6), "final dpost[4]");
    return v;
}

Verdict oracle_gate() {
    Verdict v;
    std::size_t agreed = 0;
    constexpr std::size_t kSeeds = 1000;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        Rng rng(1'000'000 + seed);
        const std::size_t n = 1 + rng.below(64);
        const DiGraph g = random_graph(rng, n, test::edge_prob_for(seed));
        CheckSet checks(n, false);
        for (NodeId u = 0; u < n; ++u) {
            checks[u] = rng.chance(0.25);
        }
        const GeneratedProgram gen = generate_fm_program(g, checks);
        const Wto w = wto_of_program(gen.program);
        if (w.is_valid_for(g) && gen.config == optimal_config(g, w, checks)) {
            ++agreed;
        } else {
            v.require(false, "seed " + std::to_string(seed));
        }
    }
    v.detail = std::to_string(agreed) + "/" + std::to_string(kSeeds) + " seeds agree" +
               (v.pass ? "" : ", first failure " + v.detail);
    return v;
}

Verdict validity_gate() {
    Verdict v;
    std::size_t ok = 0;
    constexpr std::size_t kSeeds = 1000;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        Rng rng(2'000'000 + seed);
        const std::size_t n = 1 + rng.below(24);
        const CompiledCfg cfg = compile(random_document(rng, "v", n, test::edge_prob_for(seed)));
        const InstanceOutcome o = validate_instance(cfg);
        if (o.oracle_ok && o.valid && o.interval.divergent_reads == 0 &&
            o.constant.divergent_reads == 0) {
            ++ok;
        } else {
            v.require(false, "seed " + std::to_string(seed) +
                                 (o.problems.empty() ? "" : ": " + o.problems.front()));
        }
    }
    v.detail = std::to_string(ok) + "/" + std::to_string(kSeeds) + " instances valid" +
               (v.pass ? "" : ", first failure " + v.detail);
    return v;
}

/// G1 with seeded counter programs: 1 initializes x and y, 5 steps x, 6 steps
/// y, 8 steps a random one, 4 and 9 assert a random bound.
std::vector<NodeProgram> g1_programs(Rng& rng) {
    const char* names[] = {"x", "y"};
    const char* relations[] = {"<=", ">="};
    auto var = [&] { return names[rng.below(2)]; };
    auto constant = [&] { return std::to_string(rng.range(-8, 8)); };
    auto bump = [&](const std::string& v) {
        return v + " = " + v + (rng.chance(0.5) ? " + " : " - ") + std::to_string(rng.range(1, 3));
    };
    auto check = [&] {
        return std::string("assert(") + var() + " " + relations[rng.below(2)] + " " + constant() +
               ")";
    };
    std::string text = "graph g1\nvars x y\nentry 1\n";
    text += "node 1 { x = " + constant() + "; y = " + constant() + " }\n";
    text += "node 2 {}\nnode 3 {}\nnode 7 {}\n";
    text += "node 4 { " + check() + " }\n";
    text += "node 5 { " + bump("x") + " }\n";
    text += "node 6 { " + bump("y") + " }\n";
    text += "node 8 { " + bump(var()) + " }\n";
    text += "node 9 { " + check() + " }\n";
    const DiGraph g = test::g1_graph();
    for (const Edge& e : g.edges()) {
        text += "edge " + std::to_string(e.from + 1) + " -> " + std::to_string(e.to + 1) + "\n";
    }
    return compile(parse_cfg(text)).programs;
}

Verdict known_invalid() {
    Verdict v;
    const DiGraph g = test::g1_graph();
    const CheckSet checks = make_check_set(9, {g1(4), g1(9)});
    const GeneratedProgram gen = generate_fm_program(g, checks);
    struct Perturbation {
        const char* name;
        std::function<void(MemoryConfiguration&)> apply;
    };
    const std::vector<Perturbation> perturbations = {
        {"Dpost[2]:=8", [](MemoryConfiguration& m) { m.dpost[g1(2)] = g1(8); }},
        {"Dpost[5]:=4", [](MemoryConfiguration& m) { m.dpost[g1(5)] = g1(4); }},
        {"Achk[4]:=4", [](MemoryConfiguration& m) { m.achk[g1(4)] = g1(4); }},
        {"Dprel[4]:={3,4}", [](MemoryConfiguration& m) { m.dprel[g1(4)] = {g1(3), g1(4)}; }},
    };
    std::string summary;
    for (const Perturbation& p : perturbations) {
        MemoryConfiguration m = gen.config;
        p.apply(m);
        std::size_t flagged = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(3'000'000 + seed);
            const std::vector<NodeProgram> programs = g1_programs(rng);
            const IntervalDomain d(2);
            if (!run_shadow(gen.program, m, g, programs, d).valid) {
                ++flagged;
            }
        }
        summary += std::string(summary.empty() ? "" : ", ") + p.name + " flagged on " +
                   std::to_string(flagged) + "/20";
        v.require(flagged > 0, "");
    }
    v.detail = summary;
    return v;
}

Verdict memory_reduction() {
    Verdict v;
    std::string summary;
    for (std::size_t b : {4, 8}) {
        double previous = 2.0;
        for (std::size_t d = 1; d <= 4; ++d) {
            const CfgDocument doc = nested_loops_document(d, b);
            const CompiledCfg cfg = compile(doc);
            const std::size_t n = cfg.graph.node_count();
            const GeneratedProgram gen = generate_fm_program(cfg.graph, cfg.checks);
            const IntervalDomain dom(cfg.vars.size());
            const auto opt = run(gen.program, gen.config, cfg.graph, cfg.programs, dom);
            const auto dflt = run(gen.program, default_config(gen.program, cfg.checks), cfg.graph,
                                  cfg.programs, dom);
            const double ratio = static_cast<double>(opt.profile.peak_live) /
                                 static_cast<double>(dflt.profile.peak_live);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%sn=%zu:%.3f", summary.empty() ? "" : " ", n, ratio);
            summary += buf;
            if (n >= 16) {
                v.require(ratio <= 0.5, "ratio above 0.5 at n=" + std::to_string(n));
            }
            v.require(ratio < previous, "ratio not decreasing at n=" + std::to_string(n));
            v.require(opt.ck == dflt.ck, "verdicts differ at n=" + std::to_string(n));
            previous = ratio;
        }
    }
    v.detail = v.pass ? summary : v.detail + "; " + summary;
    return v;
}

struct GenerationTiming {
    double median_seconds = 0;
    std::size_t config_entries = 0;
};

GenerationTiming time_generation(std::size_t edges) {
    GenerationTiming out;
    std::vector<double> times;
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
        Rng rng(4'000'000 + rep);
        const std::size_t n = edges / 2;
        const DiGraph g = random_sparse_graph(rng, n, edges);
        CheckSet checks(n, false);
        for (NodeId v = 0; v < n; v += 7) {
            checks[v] = true;
        }
        const auto start = std::chrono::steady_clock::now();
        const GeneratedProgram gen = generate_fm_program(g, checks);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        times.push_back(dt.count());
        if (rep == 0) {
            for (NodeId v = 0; v < n; ++v) {
                out.config_entries += gen.config.dpostl[v].size() + gen.config.dprel[v].size();
            }
        }
    }
    std::sort(times.begin(), times.end());
    out.median_seconds = times[2];
    return out;
}

Verdict scaling() {
    Verdict v;
    const GenerationTiming small = time_generation(10'000);
    const GenerationTiming large = time_generation(100'000);
    const double factor = large.median_seconds / small.median_seconds;
    const double output_factor =
        static_cast<double>(large.config_entries) / static_cast<double>(small.config_entries);
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "m=1e4: %.4f s, m=1e5: %.4f s, factor %.2f (limit 15); "
                  "dpostl/dprel entries %zu -> %zu (x%.1f)",
                  small.median_seconds, large.median_seconds, factor, small.config_entries,
                  large.config_entries, output_factor);
    v.detail = buf;
    v.pass = factor <= 15.0;
    return v;
}

Verdict order_theory() {
    Verdict v;
    std::size_t checked_reads = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(5'000'000 + seed);
        const std::size_t n = 1 + rng.below(24);
        const Wto w = random_wto(rng, n);
        const NestingForest nf(w);
        const ExecOrder order(w);
        for (NodeId x = 0; x < n; ++x) {
            v.require(nf.leq(x, x), "reflexivity");
            std::size_t parents = 0;
            for (NodeId y = 0; y < n; ++y) {
                if (x != y && nf.leq(x, y) && nf.leq(y, x)) {
                    v.require(false, "antisymmetry");
                }
                if (nf.parent(x) == y) {
                    ++parents;
                }
                v.require(order.leq(x, y) || order.leq(y, x), "totality");
                for (NodeId z = 0; z < n; ++z) {
                    if (nf.leq(x, y) && nf.leq(y, z)) {
                        v.require(nf.leq(x, z), "transitivity");
                    }
                    // Forest: the upper set of x is a chain.
                    if (nf.leq(x, y) && nf.leq(x, z)) {
                        v.require(nf.leq(y, z) || nf.leq(z, y), "forest");
                    }
                }
            }
            v.require(parents <= 1, "single parent");
        }
    }
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(5'500'000 + seed);
        const std::size_t n = 1 + rng.below(20);
        const CompiledCfg cfg = compile(random_document(rng, "o", n, test::edge_prob_for(seed)));
        const GeneratedProgram gen = generate_fm_program(cfg.graph, cfg.checks);
        const Wto w = wto_of_program(gen.program);
        const NestingForest nf(w);
        const ExecOrder order(w);
        const IntervalDomain d(cfg.vars.size());
        EngineOptions opts;
        opts.record_events = true;
        const auto r = run(gen.program, gen.config, cfg.graph, cfg.programs, d, opts);
        for (const Event& e : r.profile.events) {
            if (e.kind != EventKind::kReadPost) {
                continue;
            }
            ++checked_reads;
            // A read inside the reader's own loop may see a later head.
            v.require(order.leq(e.node, e.site) || nf.leq(e.site, e.node),
                      "read order seed " + std::to_string(seed));
        }
    }
    if (v.pass) {
        v.detail = "500 WTOs, " + std::to_string(checked_reads) + " Post reads checked";
    }
    return v;
}

template <typename D>
bool sound_at_every_node(const CompiledCfg& cfg, const test::ConcreteStates& concrete) {
    const D d(cfg.vars.size());
    const Wto w = wto_of_program(generate_fm_program(cfg.graph, cfg.checks).program);
    const auto ref = run_reference(w, cfg.graph, cfg.programs, cfg.checks, d);
    for (NodeId v = 0; v < cfg.graph.node_count(); ++v) {
        for (const Store& s : concrete.pre[v]) {
            if (!d.contains(ref.values.pre[v], s)) {
                return false;
            }
        }
    }
    return true;
}

Verdict domain_soundness() {
    Verdict v;
    std::size_t stores = 0;
    std::size_t truncated = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(6'000'000 + seed);
        ProgramGenOptions opts;
        opts.var_count = 1 + rng.below(4);
        opts.const_bound = 8;
        const std::size_t n = 1 + rng.below(10);
        const CompiledCfg cfg =
            compile(random_document(rng, "s", n, test::edge_prob_for(seed), opts));
        const auto concrete =
            test::explore_concrete(cfg, test::store_grid(opts.var_count, -2, 2), 100'000);
        stores += concrete.visited;
        truncated += concrete.truncated ? 1 : 0;
        v.require(sound_at_every_node<IntervalDomain>(cfg, concrete),
                  "interval seed " + std::to_string(seed));
        v.require(sound_at_every_node<ConstantDomain>(cfg, concrete),
                  "constant seed " + std::to_string(seed));
    }
    if (v.pass) {
        v.detail = "200 programs, " + std::to_string(stores) + " concrete states, " +
                   std::to_string(truncated) + " explorations truncated";
    }
    return v;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "G1 golden suite", 1.0, golden_g1},
        {2, "generation trace", 1.0, table_trace},
        {3, "declarative oracle gate", 30.0, oracle_gate},
        {4, "validity gate", 120.0, validity_gate},
        {5, "known-invalid configurations", 1.0, known_invalid},
        {6, "memory reduction", 10.0, memory_reduction},
        {7, "generation scaling", 120.0, scaling},
        {8, "order-theory properties", 10.0, order_theory},
        {9, "domain soundness", 60.0, domain_soundness},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.body();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        const bool in_time = dt.count() <= c.limit_seconds;
        const bool pass = v.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("criterion %d %s: %s (%.2f s, limit %.0f s%s)%s%s\n", c.id, c.name,
                    pass ? "PASS" : "FAIL", dt.count(), c.limit_seconds,
                    in_time ? "" : ", over time", v.detail.empty() ? "" : ": ",
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
