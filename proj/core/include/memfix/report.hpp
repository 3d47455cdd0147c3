// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memfix/cfg_document.hpp"
#include "memfix/engine.hpp"
#include "memfix/memconfig.hpp"
#include "memfix/wto.hpp"

namespace memfix {

struct RunSummary {
    std::string config;  // "default" or "optimal"
    CheckMap ck;
    Profile profile;
};

/// Everything a command reports. The JSON form always has exactly the keys
/// verdicts, wto, program, config and profile, in that order.
struct ReportDocument {
    NodeLabels labels;
    CheckSet checks;
    std::string wto;
    std::string program;
    std::string config_name;
    MemoryConfiguration config;
    /// The first run supplies the verdicts.
    std::vector<RunSummary> runs;
    bool include_profile = false;
    bool include_events = false;
    /// peak_live(optimal) / peak_live(default), when both ran.
    std::optional<double> live_ratio;
};

std::string report_json(const ReportDocument& r);
std::string report_text(const ReportDocument& r);

/// Graphviz rendering of the CFG. With `nesting`, the nesting forest is
/// overlaid as dashed parent -> child edges.
std::string to_dot(const CfgDocument& doc, const CompiledCfg& cfg, const Wto* nesting = nullptr);

}  // namespace memfix
