// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/report.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>

namespace memfix {

namespace {

using Json = nlohmann::ordered_json;

Json node_set(const std::vector<NodeId>& s, const NodeLabels& labels) {
    std::vector<NodeLabel> out;
    for (NodeId v : s) {
        out.push_back(labels[v]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Json config_json(const ReportDocument& r) {
    const MemoryConfiguration& m = r.config;
    Json dpost = Json::object();
    Json achk = Json::object();
    Json dpostl = Json::object();
    Json dprel = Json::object();
    for (NodeId v = 0; v < m.node_count(); ++v) {
        const std::string key = node_label(r.labels, v);
        dpost[key] = r.labels[m.dpost[v]];
        dpostl[key] = node_set(m.dpostl[v], r.labels);
        if (m.achk[v]) {
            achk[key] = r.labels[*m.achk[v]];
            dprel[key] = node_set(m.dprel[v], r.labels);
        }
    }
    Json out = Json::object();
    out["name"] = r.config_name;
    out["dpost"] = std::move(dpost);
    out["achk"] = std::move(achk);
    out["dpostl"] = std::move(dpostl);
    out["dprel"] = std::move(dprel);
    return out;
}

Json profile_json(const Profile& p, const NodeLabels& labels, bool events) {
    Json out = Json::object();
    out["peak_live"] = p.peak_live;
    out["total_allocs"] = p.total_allocs;
    out["live_at_exit"] = p.live_now;
    out["peak_live_cells"] = p.peak_live_cells;
    Json iters = Json::object();
    for (NodeId v = 0; v < p.iterations_per_head.size(); ++v) {
        if (p.iterations_per_head[v] != 0) {
            iters[node_label(labels, v)] = p.iterations_per_head[v];
        }
    }
    out["iterations_per_head"] = std::move(iters);
    if (events) {
        Json list = Json::array();
        for (const Event& e : p.events) {
            list.push_back({{"step", e.step},
                            {"kind", std::string(to_string(e.kind))},
                            {"node", labels[e.node]},
                            {"site", labels[e.site]}});
        }
        out["events"] = std::move(list);
    }
    return out;
}

std::string ratio_text(double ratio) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", ratio);
    return buf;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

}  // namespace

std::string report_json(const ReportDocument& r) {
    Json doc = Json::object();
    Json verdicts = Json::object();
    if (!r.runs.empty()) {
        for (NodeId v = 0; v < r.checks.size(); ++v) {
            if (auto ck = r.runs.front().ck.get(v)) {
                verdicts[node_label(r.labels, v)] = *ck;
            }
        }
    }
    doc["verdicts"] = std::move(verdicts);
    doc["wto"] = r.wto;
    doc["program"] = r.program;
    doc["config"] = config_json(r);
    if (r.include_profile) {
        Json profile = Json::object();
        for (const RunSummary& run : r.runs) {
            profile[run.config] = profile_json(run.profile, r.labels, r.include_events);
        }
        if (r.live_ratio) {
            profile["live_ratio"] = *r.live_ratio;
        }
        doc["profile"] = std::move(profile);
    } else {
        doc["profile"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

std::string report_text(const ReportDocument& r) {
    std::string out;
    out += "wto: " + r.wto + "\n";
    out += "program: " + r.program + "\n";
    for (const RunSummary& run : r.runs) {
        for (NodeId v = 0; v < r.checks.size(); ++v) {
            if (auto ck = run.ck.get(v)) {
                out += "check " + node_label(r.labels, v) + " [" + run.config + "]: " +
                       (*ck ? "true" : "false") + "\n";
            }
        }
    }
    if (r.include_profile) {
        for (const RunSummary& run : r.runs) {
            const Profile& p = run.profile;
            out += "profile [" + run.config + "]: peak_live=" + std::to_string(p.peak_live) +
                   " total_allocs=" + std::to_string(p.total_allocs) +
                   " peak_live_cells=" + std::to_string(p.peak_live_cells) + "\n";
            for (NodeId v = 0; v < p.iterations_per_head.size(); ++v) {
                if (p.iterations_per_head[v] != 0) {
                    out += "  iterations " + node_label(r.labels, v) + ": " +
                           std::to_string(p.iterations_per_head[v]) + "\n";
                }
            }
            if (r.include_events) {
                for (const Event& e : p.events) {
                    out += "  event " + std::to_string(e.step) + " " +
                           std::string(to_string(e.kind)) + " " + node_label(r.labels, e.node) +
                           " @" + node_label(r.labels, e.site) + "\n";
                }
            }
        }
        if (r.live_ratio) {
            out += "live_ratio: " + ratio_text(*r.live_ratio) + "\n";
        }
    }
    return out;
}

std::string to_dot(const CfgDocument& doc, const CompiledCfg& cfg, const Wto* nesting) {
    std::string out = "digraph \"" + dot_escape(doc.name) + "\" {\n";
    for (NodeId v = 0; v < cfg.labels.size(); ++v) {
        std::string label = std::to_string(cfg.labels[v]);
        if (!cfg.programs[v].stmts.empty()) {
            label += "\\n" + dot_escape(to_string(cfg.programs[v], cfg.vars));
        }
        out += "  n" + std::to_string(cfg.labels[v]) + " [label=\"" + label + "\"";
        if (cfg.graph.entry() == v) {
            out += ", shape=box";
        }
        if (cfg.checks[v]) {
            out += ", peripheries=2";
        }
        out += "];\n";
    }
    for (const Edge& e : cfg.graph.edges()) {
        out += "  n" + std::to_string(cfg.labels[e.from]) + " -> n" +
               std::to_string(cfg.labels[e.to]) + ";\n";
    }
    if (nesting != nullptr) {
        const NestingForest nf(*nesting);
        for (NodeId v = 0; v < nf.size(); ++v) {
            if (auto parent = nf.parent(v)) {
                out += "  n" + std::to_string(cfg.labels[*parent]) + " -> n" +
                       std::to_string(cfg.labels[v]) +
                       " [style=dashed, color=gray50, constraint=false];\n";
            }
        }
    }
    out += "}\n";
    return out;
}

}  // namespace memfix
