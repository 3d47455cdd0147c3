// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "memfix/cfg_document.hpp"
#include "memfix/cli.hpp"
#include "memfix/generate.hpp"
#include "memfix/random_cfg.hpp"
#include "memfix/report.hpp"
#include "memfix/validation.hpp"

namespace memfix::cli {

namespace {

struct EngineFlags {
    std::uint64_t iter_cap = 10000;
    std::uint32_t widen_delay = 0;
    std::string entry_state = "top";

    void add_to(CLI::App& cmd) {
        cmd.add_option("--iter-cap", iter_cap, "Loop iterations allowed per repeat activation")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd.add_option("--widen-delay", widen_delay, "Iterations that join before widening")
            ->capture_default_str();
        cmd.add_option("--entry-state", entry_state, "State joined into the entry node")
            ->check(CLI::IsMember({"top", "bottom"}))
            ->capture_default_str();
    }

    [[nodiscard]] EngineOptions options() const {
        EngineOptions o;
        o.iteration_cap = iter_cap;
        o.widen_delay = widen_delay;
        o.entry_state = entry_state == "top" ? EntryState::kTop : EntryState::kBottom;
        return o;
    }
};

struct InputFlags {
    std::string file;
    std::vector<NodeLabel> checks;

    void add_to(CLI::App& cmd) {
        cmd.add_option("file", file, "CFG file")->required();
        cmd.add_option("--check", checks, "Force a check at a node (repeatable)")
            ->allow_extra_args(false);
    }
};

/// A parsed and compiled input with its generated program.
struct Loaded {
    CfgDocument doc;
    CompiledCfg cfg;
    GeneratedProgram gen;
    Wto wto;
};

class CommandError : public std::runtime_error {
  public:
    CommandError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
    [[nodiscard]] int code() const { return code_; }

  private:
    int code_;
};

Loaded load(const InputFlags& in) {
    std::ifstream stream(in.file, std::ios::binary);
    if (!stream) {
        throw CommandError(kUsage, "cannot open " + in.file);
    }
    std::stringstream text;
    text << stream.rdbuf();
    try {
        CfgDocument doc = parse_cfg(text.str());
        CompiledCfg cfg = compile(doc, in.checks);
        GeneratedProgram gen = generate_fm_program(cfg.graph, cfg.checks);
        Wto wto = wto_of_program(gen.program);
        return {std::move(doc), std::move(cfg), std::move(gen), std::move(wto)};
    } catch (const ParseError& e) {
        throw CommandError(kParseFailure, in.file + ":" + std::to_string(e.line()) + ":" +
                                              std::to_string(e.column()) + ": " + e.what());
    } catch (const AnalysisSetupError& e) {
        throw CommandError(kParseFailure, in.file + ": " + e.what());
    } catch (const GraphError& e) {
        throw CommandError(kParseFailure, in.file + ": " + e.what());
    }
}

ReportDocument base_report(const Loaded& l, std::string config_name, MemoryConfiguration config) {
    ReportDocument r;
    r.labels = l.cfg.labels;
    r.checks = l.cfg.checks;
    r.wto = l.wto.to_string(l.cfg.labels);
    r.program = l.gen.program.to_string(l.cfg.labels);
    r.config_name = std::move(config_name);
    r.config = std::move(config);
    return r;
}

template <typename F>
auto with_domain(const std::string& name, std::size_t vars, F&& f) {
    if (name == "const") {
        return f(ConstantDomain(vars));
    }
    return f(IntervalDomain(vars));
}

std::vector<std::string> oracle_problems(const Loaded& l) {
    std::vector<std::string> problems;
    if (!l.wto.is_valid_for(l.cfg.graph)) {
        problems.emplace_back("generated ordering is not a WTO of the graph");
    }
    if (!(gen_prog(l.wto) == l.gen.program)) {
        problems.emplace_back("program differs from genProg of its WTO");
    }
    const MemoryConfiguration expected = optimal_config(l.cfg.graph, l.wto, l.cfg.checks);
    if (!(expected == l.gen.config)) {
        problems.emplace_back("generated configuration differs from the declarative maps");
    }
    return problems;
}

std::string cap_message(const IterationCapExceeded& e, const NodeLabels& labels) {
    return "iteration cap exceeded at head " + node_label(labels, e.head());
}

int cmd_plan(const InputFlags& in, bool validate, bool json, std::ostream& out,
             std::ostream& err) {
    const Loaded l = load(in);
    if (validate) {
        const auto problems = oracle_problems(l);
        for (const std::string& p : problems) {
            err << "oracle mismatch: " << p << "\n";
        }
        if (!problems.empty()) {
            return kOracleMismatch;
        }
    }
    ReportDocument r = base_report(l, "optimal", l.gen.config);
    if (json) {
        out << report_json(r);
        return kOk;
    }
    out << "wto: " << r.wto << "\n";
    out << "program: " << r.program << "\n";
    out << to_text(r.config, r.labels);
    if (validate) {
        out << "oracle: ok\n";
    }
    return kOk;
}

struct AnalyzeFlags {
    std::string domain = "interval";
    std::string config = "optimal";
    bool profile = false;
    bool events = false;
    bool json = false;
};

void add_domain_option(CLI::App& cmd, std::string& domain) {
    cmd.add_option("--domain", domain, "Abstract domain")
        ->check(CLI::IsMember({"interval", "const"}))
        ->capture_default_str();
}

int cmd_analyze(const InputFlags& in, const AnalyzeFlags& f, const EngineFlags& ef,
                std::ostream& out, std::ostream& err) {
    const Loaded l = load(in);
    MemoryConfiguration config = f.config == "default" ? default_config(l.gen.program, l.cfg.checks)
                                                       : l.gen.config;
    EngineOptions opts = ef.options();
    opts.record_events = f.events;
    try {
        RunSummary run = with_domain(f.domain, l.cfg.vars.size(), [&](const auto& d) {
            auto r = memfix::run(l.gen.program, config, l.cfg.graph, l.cfg.programs, d, opts);
            return RunSummary{f.config, r.ck, std::move(r.profile)};
        });
        ReportDocument r = base_report(l, f.config, std::move(config));
        r.runs.push_back(std::move(run));
        r.include_profile = f.profile || f.events;
        r.include_events = f.events;
        out << (f.json ? report_json(r) : report_text(r));
    } catch (const IterationCapExceeded& e) {
        err << in.file << ": " << cap_message(e, l.cfg.labels) << "\n";
        return kIterationCap;
    }
    return kOk;
}

int cmd_compare(const InputFlags& in, const AnalyzeFlags& f, const EngineFlags& ef,
                std::ostream& out, std::ostream& err) {
    const Loaded l = load(in);
    const MemoryConfiguration fallback = default_config(l.gen.program, l.cfg.checks);
    const EngineOptions opts = ef.options();
    ReportDocument r = base_report(l, "optimal", l.gen.config);
    std::size_t divergent = 0;
    try {
        with_domain(f.domain, l.cfg.vars.size(), [&](const auto& d) {
            auto opt = run(l.gen.program, l.gen.config, l.cfg.graph, l.cfg.programs, d, opts);
            auto dflt = run(l.gen.program, fallback, l.cfg.graph, l.cfg.programs, d, opts);
            ValidityReport shadow =
                run_shadow(l.gen.program, l.gen.config, l.cfg.graph, l.cfg.programs, d, opts);
            divergent = shadow.divergences.size();
            r.runs.push_back({"optimal", opt.ck, std::move(opt.profile)});
            r.runs.push_back({"default", dflt.ck, std::move(dflt.profile)});
            return 0;
        });
    } catch (const IterationCapExceeded& e) {
        err << in.file << ": " << cap_message(e, l.cfg.labels) << "\n";
        return kIterationCap;
    }
    const auto peak_opt = static_cast<double>(r.runs[0].profile.peak_live);
    const auto peak_dflt = static_cast<double>(r.runs[1].profile.peak_live);
    r.live_ratio = peak_dflt > 0 ? peak_opt / peak_dflt : 1.0;
    r.include_profile = true;
    out << (f.json ? report_json(r) : report_text(r));

    int code = kOk;
    if (!(r.runs[0].ck == r.runs[1].ck)) {
        err << "validity violation: Ck(optimal) differs from Ck(default)\n";
        code = kValidityViolation;
    }
    if (divergent != 0) {
        err << "validity violation: " << divergent << " divergent reads under the optimal configuration\n";
        code = kValidityViolation;
    }
    return code;
}

struct FuzzFlags {
    std::size_t nodes = 16;
    double edge_prob = 0.1;
    std::uint64_t seed = 1;
    std::size_t count = 100;
    std::size_t vars = 3;
    std::string out_dir;
    unsigned jobs = 1;
};

std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 of the pair, so neighbouring seeds give unrelated corpora.
    std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + index + 0x632be59bd9b4e019ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct FuzzResult {
    std::string text;
    bool oracle_ok = true;
    bool valid = true;
    bool capped = false;
    std::vector<std::string> problems;
    double ratio = 1.0;
};

FuzzResult fuzz_one(const FuzzFlags& f, const EngineOptions& opts, std::size_t index) {
    Rng rng(instance_seed(f.seed, index));
    ProgramGenOptions gen;
    gen.var_count = f.vars;
    char name[32];
    std::snprintf(name, sizeof name, "fuzz_%06zu", index);
    const CfgDocument doc = random_document(rng, name, f.nodes, f.edge_prob, gen);
    FuzzResult res;
    res.text = serialize_cfg(doc);
    if (!(parse_cfg(res.text) == doc)) {
        res.valid = false;
        res.problems.emplace_back("serialized document does not round-trip");
    }
    ValidationOptions vopts;
    vopts.engine = opts;
    try {
        InstanceOutcome o = validate_instance(compile(doc), vopts);
        res.oracle_ok = o.oracle_ok;
        res.valid = res.valid && o.valid;
        res.problems.insert(res.problems.end(), o.problems.begin(), o.problems.end());
        if (o.interval.peak_default > 0) {
            res.ratio = static_cast<double>(o.interval.peak_optimal) /
                        static_cast<double>(o.interval.peak_default);
        }
    } catch (const IterationCapExceeded& e) {
        res.capped = true;
        res.problems.emplace_back("iteration cap exceeded at head " + std::to_string(e.head()));
    }
    return res;
}

int cmd_fuzz(const FuzzFlags& f, const EngineFlags& ef, std::ostream& out, std::ostream& err) {
    const EngineOptions opts = ef.options();
    std::vector<FuzzResult> results(f.count);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i = next++; i < f.count; i = next++) {
            try {
                results[i] = fuzz_one(f, opts, i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                failure = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1U, std::min<unsigned>(f.jobs, static_cast<unsigned>(f.count)));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    if (!f.out_dir.empty()) {
        std::filesystem::create_directories(f.out_dir);
        for (std::size_t i = 0; i < f.count; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "fuzz_%06zu.cfg", i);
            std::ofstream file(std::filesystem::path(f.out_dir) / name, std::ios::binary);
            file << results[i].text;
            if (!file) {
                err << "cannot write " << (std::filesystem::path(f.out_dir) / name).string() << "\n";
                return kUsage;
            }
        }
    }

    std::size_t oracle = 0;
    std::size_t invalid = 0;
    std::size_t capped = 0;
    double log_sum = 0;
    for (std::size_t i = 0; i < f.count; ++i) {
        const FuzzResult& r = results[i];
        oracle += r.oracle_ok ? 0 : 1;
        invalid += r.valid ? 0 : 1;
        capped += r.capped ? 1 : 0;
        log_sum += std::log(r.ratio);
        for (const std::string& p : r.problems) {
            err << "instance " << i << ": " << p << "\n";
        }
    }
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.4f",
                  f.count == 0 ? 1.0 : std::exp(log_sum / static_cast<double>(f.count)));
    out << "instances: " << f.count << "\n";
    out << "oracle_mismatches: " << oracle << "\n";
    out << "validity_violations: " << invalid << "\n";
    out << "cap_exceeded: " << capped << "\n";
    out << "geomean_live_ratio: " << ratio << "\n";
    if (oracle != 0) {
        return kOracleMismatch;
    }
    if (invalid != 0) {
        return kValidityViolation;
    }
    return capped != 0 ? kIterationCap : kOk;
}

int cmd_dot(const InputFlags& in, const std::string& overlay, std::ostream& out) {
    const Loaded l = load(in);
    out << to_dot(l.doc, l.cfg, overlay == "nesting" ? &l.wto : nullptr);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Memory-optimal fixpoint iteration over weak topological orderings", "memfix"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "memfix 0.1.0");

    InputFlags in;
    EngineFlags ef;
    AnalyzeFlags af;
    FuzzFlags ff;
    bool validate = false;
    std::string overlay;

    CLI::App* plan = app.add_subcommand("plan", "Print the WTO, FM program and optimal configuration");
    in.add_to(*plan);
    plan->add_flag("--validate", validate, "Check the output against the declarative definitions");
    plan->add_flag("--json", af.json, "Emit a JSON report");

    CLI::App* analyze = app.add_subcommand("analyze", "Run the analysis under one configuration");
    in.add_to(*analyze);
    add_domain_option(*analyze, af.domain);
    analyze->add_option("--config", af.config, "Memory configuration")
        ->check(CLI::IsMember({"default", "optimal"}))
        ->capture_default_str();
    analyze->add_flag("--profile", af.profile, "Include peak-live and iteration statistics");
    analyze->add_flag("--events", af.events, "Include the full event trace");
    analyze->add_flag("--json", af.json, "Emit a JSON report");
    ef.add_to(*analyze);

    CLI::App* compare = app.add_subcommand("compare", "Run both configurations and compare them");
    in.add_to(*compare);
    add_domain_option(*compare, af.domain);
    compare->add_flag("--json", af.json, "Emit a JSON report");
    ef.add_to(*compare);

    CLI::App* fuzz = app.add_subcommand("fuzz", "Generate random CFGs and run the validation suite");
    fuzz->add_option("--nodes", ff.nodes, "Nodes per graph")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20))
        ->capture_default_str();
    fuzz->add_option("--edge-prob", ff.edge_prob, "Probability of each extra edge")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    fuzz->add_option("--seed", ff.seed, "Corpus seed")->capture_default_str();
    fuzz->add_option("--count", ff.count, "Number of instances")->capture_default_str();
    fuzz->add_option("--vars", ff.vars, "Variables per program")
        ->check(CLI::Range(std::size_t{0}, std::size_t{4}))
        ->capture_default_str();
    fuzz->add_option("--out", ff.out_dir, "Directory for the generated CFG files");
    fuzz->add_option("--jobs", ff.jobs, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ef.add_to(*fuzz);

    CLI::App* dot = app.add_subcommand("dot", "Render the CFG in Graphviz syntax");
    in.add_to(*dot);
    dot->add_option("--overlay", overlay, "Overlay the nesting forest")
        ->check(CLI::IsMember({"nesting"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (plan->parsed()) {
            return cmd_plan(in, validate, af.json, out, err);
        }
        if (analyze->parsed()) {
            return cmd_analyze(in, af, ef, out, err);
        }
        if (compare->parsed()) {
            return cmd_compare(in, af, ef, out, err);
        }
        if (fuzz->parsed()) {
            return cmd_fuzz(ff, ef, out, err);
        }
        return cmd_dot(in, overlay, out);
    } catch (const CommandError& e) {
        err << e.what() << "\n";
        return e.code();
    }
}

}  // namespace memfix::cli
