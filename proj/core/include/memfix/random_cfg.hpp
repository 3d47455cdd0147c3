// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "memfix/cfg_document.hpp"
#include "memfix/graph.hpp"
#include "memfix/statements.hpp"
#include "memfix/wto.hpp"

namespace memfix {

/// Seeded generator with platform-independent bounded draws (the standard
/// distributions are implementation-defined, which would make corpora differ
/// between standard libraries).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi);
    /// True with probability p.
    bool chance(double p);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

/// Entry-reachable graph on n nodes: a random spanning tree from the entry
/// plus every other ordered pair (self-loops included) with probability p.
DiGraph random_graph(Rng& rng, std::size_t n, double edge_prob);

/// Entry-reachable graph with n nodes and exactly m >= n - 1 edges.
DiGraph random_sparse_graph(Rng& rng, std::size_t n, std::size_t m);

struct ProgramGenOptions {
    std::size_t var_count = 3;
    std::int64_t const_bound = 8;  // constants drawn from [-bound, bound]
    std::size_t max_stmts = 3;
    double assert_prob = 0.2;
    double assume_prob = 0.25;
};

/// Random node programs: assignments over + and -, assumes and asserts.
std::vector<NodeProgram> random_programs(Rng& rng, std::size_t n, const ProgramGenOptions& opts);

/// A random graph with random node programs as a CFG document; labels are
/// the dense ids.
CfgDocument random_document(Rng& rng, std::string name, std::size_t n, double edge_prob,
                            const ProgramGenOptions& opts = {});

/// `depth` nested loops whose bodies are chains of `body` nodes. Each loop
/// head leads into its chain; the chain ends in the next inner head, or
/// back at its own head for the innermost loop; an inner head exits to the
/// head enclosing it. The outermost head exits to an asserting sink.
/// Node count is depth * (body + 1) + 2.
CfgDocument nested_loops_document(std::size_t depth, std::size_t body);

/// A random WTO of n nodes (not tied to any graph): a random permutation
/// with random well-nested parentheses.
Wto random_wto(Rng& rng, std::size_t n);

/// Variable names used by generated programs: x0, x1, ...
VarTable generated_vars(std::size_t count);

}  // namespace memfix
