// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memfix/cfg_document.hpp"
#include "memfix/engine.hpp"

namespace memfix {

struct ValidationOptions {
    EngineOptions engine;
    bool shadow = true;
    /// Record engine events and check read order, write-once checks and
    /// deallocation sites.
    bool trace_properties = true;
};

struct DomainOutcome {
    std::int64_t peak_default = 0;
    std::int64_t peak_optimal = 0;
    std::size_t divergent_reads = 0;
};

/// Result of the full suite on one CFG.
struct InstanceOutcome {
    /// Generated program and configuration agree with the declarative
    /// definitions.
    bool oracle_ok = true;
    /// Every engine-level property held in both domains.
    bool valid = true;
    std::vector<std::string> problems;
    DomainOutcome interval;
    DomainOutcome constant;
};

/// Runs generation against the oracle, then for both domains: default,
/// optimal and reference runs with Ck equality, the shadow comparison, peak
/// dominance and the trace properties. IterationCapExceeded propagates.
InstanceOutcome validate_instance(const CompiledCfg& cfg, const ValidationOptions& opts = {});

}  // namespace memfix
