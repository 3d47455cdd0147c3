// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "memfix/report.hpp"
#include "test_support.hpp"

using namespace memfix;

namespace {

struct ErrorCase {
    const char* text;
    std::size_t line;
    std::size_t column;
};

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) {
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("parse the G1 fixture", "[cfg]") {
    const CfgDocument doc = parse_cfg(test::read_fixture("g1.cfg"));
    CHECK(doc.name == "g1");
    CHECK(doc.entry == 1);
    CHECK(doc.nodes.size() == 9);
    CHECK(doc.edges.size() == 13);
    CHECK(doc.forced_checks == std::vector<NodeLabel>{4, 9});

    const CompiledCfg cfg = compile(doc);
    CHECK(cfg.graph.node_count() == 9);
    CHECK(cfg.graph.edges().size() == 13);
    CHECK(cfg.graph.entry() == 0);
    CHECK(cfg.id_of(7) == 6);
    CHECK_FALSE(cfg.id_of(42).has_value());
    CHECK(cfg.checks == make_check_set(9, {3, 8}));
}

TEST_CASE("statements and variables", "[cfg]") {
    const CfgDocument doc = parse_cfg(test::read_fixture("counting_loop.cfg"));
    CHECK(doc.vars.size() == 1);
    const CompiledCfg cfg = compile(doc);
    CHECK(cfg.checks[*cfg.id_of(5)]);
    CHECK(cfg.programs[*cfg.id_of(6)].stmts.empty());

    const CfgDocument implicit = parse_cfg("graph g\nentry 0\nnode 0 { a = 1; b = a * 3; assume(b != 2) }\n");
    CHECK(implicit.vars.size() == 2);
    CHECK(implicit.nodes.at(0).stmts.size() == 3);
}

TEST_CASE("parse errors carry positions", "[cfg]") {
    const ErrorCase cases[] = {
        {"graph g\nentry 1\nnode 1 {}\nedge 1 ->\n", 4, 10},
        {"graph g\nentry 1\nnode 1 {}\nnode 1 {}\n", 4, 6},
        {"graph g\nentry 1\nnode 1 {}\nedge 1 -> 2\n", 4, 1},
        {"graph g\nvars x\nentry 1\nnode 1 { y = 1 }\n", 4, 10},
        {"graph g\nentry 1\nnode 1 {}\nnode 2 {}\n", 4, 1},
        {"graph g\nnode 1 {}\n", 3, 1},
        {"graph g\nentry 1\nnode 1 { x = }\n", 3, 14},
        {"graph g\nentry 1\nnode 1 {}\nfrob 1\n", 4, 1},
        {"graph g\nentry 1\nnode 1 {}\nedge 1 -> 1\nedge 1 -> 1\n", 5, 1},
        {"graph g\nentry 1\nnode 1 { x = 1 $ }\n", 3, 16},
    };
    for (const ErrorCase& c : cases) {
        INFO(c.text);
        try {
            (void)parse_cfg(c.text);
            FAIL("no error");
        } catch (const ParseError& e) {
            CHECK(e.line() == c.line);
            CHECK(e.column() == c.column);
        }
    }
}

TEST_CASE("extra checks", "[cfg]") {
    const CfgDocument doc = parse_cfg(test::read_fixture("g1.cfg"));
    const std::vector<NodeLabel> extra{2};
    const CompiledCfg cfg = compile(doc, extra);
    CHECK(cfg.checks == make_check_set(9, {1, 3, 8}));
    const std::vector<NodeLabel> bogus{99};
    CHECK_THROWS_AS(compile(doc, bogus), ParseError);
}

TEST_CASE("serialization round-trips", "[cfg][property]") {
    const CfgDocument g1 = parse_cfg(test::read_fixture("g1.cfg"));
    const std::string text = serialize_cfg(g1);
    CHECK(parse_cfg(text) == g1);
    CHECK(serialize_cfg(parse_cfg(text)) == text);

    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Rng rng(seed);
        const CfgDocument doc =
            random_document(rng, "fuzz", 1 + rng.below(24), test::edge_prob_for(seed));
        const std::string s = serialize_cfg(doc);
        INFO("seed " << seed << "\n" << s);
        const CfgDocument back = parse_cfg(s);
        CHECK(back == doc);
        CHECK(serialize_cfg(back) == s);
    }
}

TEST_CASE("json report layout", "[cfg]") {
    const CompiledCfg cfg = test::load_fixture("g1.cfg");
    const GeneratedProgram gen = generate_fm_program(cfg.graph, cfg.checks);
    const IntervalDomain d(cfg.vars.size());
    ReportDocument r;
    r.labels = cfg.labels;
    r.checks = cfg.checks;
    r.wto = wto_of_program(gen.program).to_string(cfg.labels);
    r.program = gen.program.to_string(cfg.labels);
    r.config_name = "optimal";
    r.config = gen.config;
    auto res = run(gen.program, gen.config, cfg.graph, cfg.programs, d);
    r.runs.push_back({"optimal", res.ck, res.profile});
    r.include_profile = true;

    const std::string json = report_json(r);
    const std::vector<std::string> keys = {"\"verdicts\"", "\"wto\"", "\"program\"", "\"config\"",
                                           "\"profile\""};
    std::size_t last = 0;
    for (const std::string& k : keys) {
        const std::size_t p = json.find(k);
        INFO(k);
        REQUIRE(p != std::string::npos);
        CHECK(p >= last);
        last = p;
    }
    CHECK(json.find("1 2 (3 (4 5) 6) (7 8) 9") != std::string::npos);
    CHECK_FALSE(report_text(r).empty());
}

TEST_CASE("dot rendering", "[cfg]") {
    const CfgDocument doc = parse_cfg(test::read_fixture("g1.cfg"));
    const CompiledCfg cfg = compile(doc);
    const std::string plain = to_dot(doc, cfg);
    CHECK(count_of(plain, "[label=") == 9);
    CHECK(count_of(plain, " -> ") == 13);
    CHECK(count_of(plain, "dashed") == 0);

    const Wto w = wto_of_program(generate_fm_program(cfg.graph, cfg.checks).program);
    const std::string overlay = to_dot(doc, cfg, &w);
    CHECK(count_of(overlay, "dashed") == 4);
    for (const char* e : {"n3 -> n4 [style=dashed", "n4 -> n5 [style=dashed",
                          "n3 -> n6 [style=dashed", "n7 -> n8 [style=dashed"}) {
        CHECK(overlay.find(e) != std::string::npos);
    }
}
