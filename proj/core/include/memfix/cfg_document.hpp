// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memfix/fm_program.hpp"
#include "memfix/graph.hpp"
#include "memfix/memconfig.hpp"
#include "memfix/statements.hpp"

namespace memfix {

/// Any error in a CFG file. Positions are 1-based.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

using NodeLabel = std::uint64_t;

/// A CFG file:
///
///   graph <name>
///   vars <x> <y> ...          optional; when absent, variables are
///                             declared by first use
///   entry <label>
///   node <label> { stmt; stmt; ... }
///   edge <label> -> <label>
///   check <label>             force membership in V_C
///   # comment
///
/// Statements: `x = 0`, `x = y`, `x = y + z`, `x = y * 3`, `assume(x <= 10)`,
/// `assert(x >= 0)`; operators + - *, relations < <= == != >= > (a single
/// `=` is read as ==).
struct CfgDocument {
    std::string name = "cfg";
    NodeLabel entry = 0;
    std::map<NodeLabel, NodeProgram> nodes;
    std::vector<std::pair<NodeLabel, NodeLabel>> edges;  // sorted
    std::vector<NodeLabel> forced_checks;                // sorted
    VarTable vars;

    friend bool operator==(const CfgDocument&, const CfgDocument&) = default;
};

CfgDocument parse_cfg(std::string_view text);
/// Canonical text; parse_cfg(serialize_cfg(d)) == d.
std::string serialize_cfg(const CfgDocument& doc);

/// A document lowered to dense node ids (ascending label order).
struct CompiledCfg {
    DiGraph graph;
    NodeLabels labels;
    std::vector<NodeProgram> programs;
    CheckSet checks;
    VarTable vars;

    [[nodiscard]] std::optional<NodeId> id_of(NodeLabel label) const;
};

/// V_C is every node with an assert, the document's forced checks, and
/// `extra_checks`. Unknown labels in `extra_checks` throw ParseError at 0:0.
CompiledCfg compile(const CfgDocument& doc, std::span<const NodeLabel> extra_checks = {});

}  // namespace memfix
