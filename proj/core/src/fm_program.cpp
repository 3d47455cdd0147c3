// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/fm_program.hpp"

#include <algorithm>
#include <utility>

namespace memfix {

std::string node_label(const NodeLabels& labels, NodeId v) {
    if (labels.empty()) {
        return std::to_string(v);
    }
    return std::to_string(labels[v]);
}

FmProgram::FmProgram(std::size_t node_count) : inst_(node_count, kNone) {}

FmProgram::Index FmProgram::add_exec(NodeId v) {
    instrs_.push_back({Kind::kExec, v, kNone, kNone});
    inst_[v] = static_cast<Index>(instrs_.size() - 1);
    return inst_[v];
}

FmProgram::Index FmProgram::add_repeat(NodeId v, Index body) {
    instrs_.push_back({Kind::kRepeat, v, body, kNone});
    inst_[v] = static_cast<Index>(instrs_.size() - 1);
    return inst_[v];
}

FmProgram::Index FmProgram::add_seq(Index left, Index right) {
    instrs_.push_back({Kind::kSeq, 0, left, right});
    return static_cast<Index>(instrs_.size() - 1);
}

FmProgram::Index FmProgram::append(Index acc, Index next) {
    if (acc == kNone) {
        return next;
    }
    return add_seq(acc, next);
}

std::vector<FmProgram::Index> FmProgram::sequence(Index i) const {
    std::vector<Index> out;
    std::vector<Index> pending;
    if (i != kNone) {
        pending.push_back(i);
    }
    while (!pending.empty()) {
        Index cur = pending.back();
        pending.pop_back();
        if (instrs_[cur].kind == Kind::kSeq) {
            pending.push_back(instrs_[cur].second);
            pending.push_back(instrs_[cur].first);
        } else {
            out.push_back(cur);
        }
    }
    return out;
}

NodeId FmProgram::last_node() const {
    auto top = sequence(root_);
    return instrs_[top.back()].node;
}

bool FmProgram::is_well_formed() const {
    if (root_ == kNone) {
        return false;
    }
    std::vector<int> seen(inst_.size(), 0);
    std::vector<Index> pending{root_};
    while (!pending.empty()) {
        Index cur = pending.back();
        pending.pop_back();
        const Instr& in = instrs_[cur];
        switch (in.kind) {
            case Kind::kSeq:
                pending.push_back(in.first);
                pending.push_back(in.second);
                break;
            case Kind::kRepeat:
                if (in.first != kNone) {
                    pending.push_back(in.first);
                }
                [[fallthrough]];
            case Kind::kExec:
                if (in.node >= inst_.size() || inst_[in.node] != cur) {
                    return false;
                }
                ++seen[in.node];
                break;
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

namespace {

void print(const FmProgram& p, FmProgram::Index i, const NodeLabels& labels, std::string& out) {
    bool first = true;
    for (FmProgram::Index item : p.sequence(i)) {
        if (!first) {
            out += " ; ";
        }
        first = false;
        const auto& in = p.at(item);
        if (in.kind == FmProgram::Kind::kExec) {
            out += "exec ";
            out += node_label(labels, in.node);
        } else {
            out += "repeat ";
            out += node_label(labels, in.node);
            out += " [";
            print(p, in.first, labels, out);
            out += "]";
        }
    }
}

}  // namespace

std::string FmProgram::to_string(const NodeLabels& labels) const {
    return to_string(root_, labels);
}

std::string FmProgram::to_string(Index i, const NodeLabels& labels) const {
    std::string out;
    print(*this, i, labels, out);
    return out;
}

bool operator==(const FmProgram& a, const FmProgram& b) {
    using Index = FmProgram::Index;
    if (a.node_count() != b.node_count()) {
        return false;
    }
    std::vector<std::pair<Index, Index>> pending{{a.root_, b.root_}};
    while (!pending.empty()) {
        auto [x, y] = pending.back();
        pending.pop_back();
        if (x == FmProgram::kNone || y == FmProgram::kNone) {
            if (x != y) {
                return false;
            }
            continue;
        }
        const auto& ix = a.instrs_[x];
        const auto& iy = b.instrs_[y];
        if (ix.kind != iy.kind) {
            return false;
        }
        switch (ix.kind) {
            case FmProgram::Kind::kExec:
                if (ix.node != iy.node) {
                    return false;
                }
                break;
            case FmProgram::Kind::kRepeat:
                if (ix.node != iy.node) {
                    return false;
                }
                pending.emplace_back(ix.first, iy.first);
                break;
            case FmProgram::Kind::kSeq:
                pending.emplace_back(ix.first, iy.first);
                pending.emplace_back(ix.second, iy.second);
                break;
        }
    }
    return true;
}

}  // namespace memfix
