// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/wto.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

namespace memfix {

namespace {
constexpr NodeId kNoNode = static_cast<NodeId>(-1);
constexpr auto kUnplaced = static_cast<std::uint32_t>(-1);
}  // namespace

WtoBuilder::WtoBuilder(std::size_t node_count) {
    w_.order_.reserve(node_count);
    w_.position_.assign(node_count, kUnplaced);
    w_.end_.assign(node_count, 0);
    w_.is_head_.assign(node_count, 0);
    w_.enclosing_.assign(node_count, kNoNode);
}

void WtoBuilder::place(NodeId v) {
    if (v >= w_.position_.size()) {
        throw WtoError("node " + std::to_string(v) + " out of range");
    }
    if (w_.position_[v] != kUnplaced) {
        throw WtoError("node " + std::to_string(v) + " appears twice");
    }
    w_.position_[v] = static_cast<std::uint32_t>(w_.order_.size());
    w_.end_[v] = w_.position_[v];
    w_.enclosing_[v] = open_heads_.empty() ? kNoNode : open_heads_.back();
    w_.order_.push_back(v);
    ++placed_;
}

void WtoBuilder::leaf(NodeId v) { place(v); }

void WtoBuilder::open(NodeId head) {
    place(head);
    w_.is_head_[head] = 1;
    open_heads_.push_back(head);
}

void WtoBuilder::close() {
    if (open_heads_.empty()) {
        throw WtoError("unbalanced ')'");
    }
    NodeId h = open_heads_.back();
    open_heads_.pop_back();
    w_.end_[h] = static_cast<std::uint32_t>(w_.order_.size() - 1);
}

Wto WtoBuilder::finish() {
    if (!open_heads_.empty()) {
        throw WtoError("unbalanced '('");
    }
    if (placed_ != w_.position_.size()) {
        throw WtoError("WTO does not mention every node");
    }
    return std::move(w_);
}

Wto Wto::parse(std::string_view text, const NodeLabels& labels) {
    struct Token {
        char kind;  // '(' ')' or 'n'
        std::uint64_t value;
    };
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(' || c == ')') {
            tokens.push_back({c, 0});
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::uint64_t value = 0;
            auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
            if (ec != std::errc{}) {
                throw WtoError("bad node token in WTO");
            }
            i = static_cast<std::size_t>(ptr - text.data());
            tokens.push_back({'n', value});
        } else {
            throw WtoError(std::string("unexpected character '") + c + "' in WTO");
        }
    }

    std::unordered_map<std::uint64_t, NodeId> by_label;
    for (NodeId v = 0; v < labels.size(); ++v) {
        by_label.emplace(labels[v], v);
    }
    auto resolve = [&](std::uint64_t token) -> NodeId {
        if (labels.empty()) {
            return static_cast<NodeId>(token);
        }
        auto it = by_label.find(token);
        if (it == by_label.end()) {
            throw WtoError("unknown node label " + std::to_string(token));
        }
        return it->second;
    };

    std::size_t node_count = static_cast<std::size_t>(
        std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.kind == 'n'; }));
    WtoBuilder b(node_count);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        switch (tokens[i].kind) {
            case '(':
                if (i + 1 >= tokens.size() || tokens[i + 1].kind != 'n') {
                    throw WtoError("a component must start with its head");
                }
                b.open(resolve(tokens[++i].value));
                break;
            case ')':
                b.close();
                break;
            default:
                b.leaf(resolve(tokens[i].value));
        }
    }
    return b.finish();
}

std::optional<NodeId> Wto::enclosing_head(NodeId v) const {
    if (enclosing_[v] == kNoNode) {
        return std::nullopt;
    }
    return enclosing_[v];
}

std::vector<NodeId> Wto::omega(NodeId v) const {
    std::vector<NodeId> out;
    if (is_head(v)) {
        out.push_back(v);
    }
    for (NodeId h = enclosing_[v]; h != kNoNode; h = enclosing_[h]) {
        out.push_back(h);
    }
    return out;
}

bool Wto::is_valid_for(const DiGraph& g) const {
    if (g.node_count() != size()) {
        return false;
    }
    for (const Edge& e : g.edges()) {
        if (position_[e.from] < position_[e.to]) {
            continue;
        }
        // Backward (or self) edge: the target must head a component holding the source.
        NodeId v = e.to;
        if (!(is_head(v) && position_[v] <= position_[e.from] && position_[e.from] <= end_[v])) {
            return false;
        }
    }
    return true;
}

std::string Wto::to_string(const NodeLabels& labels) const {
    std::string out;
    std::vector<NodeId> open;
    for (std::uint32_t i = 0; i < order_.size(); ++i) {
        NodeId v = order_[i];
        if (!out.empty()) {
            out += ' ';
        }
        if (is_head(v)) {
            out += '(';
            open.push_back(v);
        }
        out += node_label(labels, v);
        while (!open.empty() && end_[open.back()] == i) {
            out += ')';
            open.pop_back();
        }
    }
    return out;
}

NestingForest::NestingForest(const Wto& w)
    : parent_(w.size(), kNoNode),
      depth_(w.size(), 0),
      pos_(w.size()),
      end_(w.size()),
      is_head_(w.size()) {
    for (NodeId v = 0; v < w.size(); ++v) {
        pos_[v] = w.position(v);
        end_[v] = w.component_end(v);
        is_head_[v] = w.is_head(v) ? 1 : 0;
        if (auto h = w.enclosing_head(v)) {
            parent_[v] = *h;
        }
    }
    // Parents precede their children in ⪯, so one pass in order fixes depths.
    for (NodeId v : w.order()) {
        if (parent_[v] != kNoNode) {
            depth_[v] = depth_[parent_[v]] + 1;
        }
    }
}

std::optional<NodeId> NestingForest::parent(NodeId v) const {
    if (parent_[v] == kNoNode) {
        return std::nullopt;
    }
    return parent_[v];
}

std::vector<NodeId> NestingForest::up_chain(NodeId v) const {
    std::vector<NodeId> out;
    out.reserve(depth_[v] + 1);
    for (NodeId x = v; x != kNoNode; x = parent_[x]) {
        out.push_back(x);
    }
    return out;
}

NodeId NestingForest::outermost(NodeId v) const {
    while (parent_[v] != kNoNode) {
        v = parent_[v];
    }
    return v;
}

NestingForest nesting_forest(const Wto& w) { return NestingForest(w); }

ExecOrder::ExecOrder(const Wto& w) : rank_(w.size(), 0) {
    sequence_.reserve(w.size());
    std::vector<NodeId> open;
    auto emit = [&](NodeId v) {
        rank_[v] = static_cast<std::uint32_t>(sequence_.size());
        sequence_.push_back(v);
    };
    for (std::uint32_t i = 0; i < w.size(); ++i) {
        NodeId v = w.order()[i];
        if (w.is_head(v)) {
            open.push_back(v);
        } else {
            emit(v);
        }
        while (!open.empty() && w.component_end(open.back()) == i) {
            emit(open.back());
            open.pop_back();
        }
    }
}

bool leq_exec_order(const ExecOrder& order, NodeId x, NodeId y) { return order.leq(x, y); }

NodeId lift(const NestingForest& nf, NodeId u, NodeId v) {
    if (nf.leq(u, v)) {
        return v;  // v ∈ ↑u, so ↑v ⊆ ↑u
    }
    NodeId cur = v;
    while (auto p = nf.parent(cur)) {
        if (nf.leq(u, *p)) {
            break;
        }
        cur = *p;
    }
    return cur;
}

namespace {

FmProgram::Index gen_range(const Wto& w, FmProgram& p, std::uint32_t begin, std::uint32_t end) {
    FmProgram::Index acc = FmProgram::kNone;
    std::uint32_t i = begin;
    while (i < end) {
        NodeId v = w.order()[i];
        if (w.is_head(v)) {
            std::uint32_t last = w.component_end(v);
            FmProgram::Index body = gen_range(w, p, i + 1, last + 1);
            acc = p.append(acc, p.add_repeat(v, body));
            i = last + 1;
        } else {
            acc = p.append(acc, p.add_exec(v));
            ++i;
        }
    }
    return acc;
}

void wto_range(const FmProgram& p, FmProgram::Index i, WtoBuilder& b) {
    for (FmProgram::Index item : p.sequence(i)) {
        const auto& in = p.at(item);
        if (in.kind == FmProgram::Kind::kExec) {
            b.leaf(in.node);
        } else {
            b.open(in.node);
            wto_range(p, in.first, b);
            b.close();
        }
    }
}

}  // namespace

FmProgram gen_prog(const Wto& w) {
    FmProgram p(w.size());
    p.set_root(gen_range(w, p, 0, static_cast<std::uint32_t>(w.size())));
    return p;
}

Wto wto_of_program(const FmProgram& p) {
    WtoBuilder b(p.node_count());
    wto_range(p, p.root(), b);
    return b.finish();
}

}  // namespace memfix
