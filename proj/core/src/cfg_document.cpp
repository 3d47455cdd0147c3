// Copyright (c) memfix contributors.
// SPDX-License-Identifier: Apache-2.0
#include "memfix/cfg_document.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <set>
#include <unordered_map>

namespace memfix {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok : std::uint8_t {
    kIdent,
    kNumber,
    kLBrace,
    kRBrace,
    kLParen,
    kRParen,
    kSemi,
    kArrow,
    kAssign,
    kPlus,
    kMinus,
    kStar,
    kRel,
    kNewline,
    kEnd,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::kNewline:
            return "end of line";
        case Tok::kEnd:
            return "end of input";
        default:
            return "'" + t.text + "'";
    }
}

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                out.push_back({Tok::kNewline, "\n", line_, col_});
                advance();
            } else if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(take_while(Tok::kIdent, [](char ch) {
                    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
                }));
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back(take_while(
                    Tok::kNumber, [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }));
            } else {
                out.push_back(punct());
            }
        }
        out.push_back({Tok::kEnd, "", line_, col_});
        return out;
    }

  private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    template <typename Pred>
    Token take_while(Tok kind, Pred pred) {
        Token t{kind, "", line_, col_};
        while (pos_ < text_.size() && pred(text_[pos_])) {
            t.text += text_[pos_];
            advance();
        }
        return t;
    }

    Token punct() {
        const std::size_t line = line_;
        const std::size_t col = col_;
        auto two = text_.substr(pos_, 2);
        auto make = [&](Tok kind, std::size_t len) {
            Token t{kind, std::string(text_.substr(pos_, len)), line, col};
            for (std::size_t i = 0; i < len; ++i) {
                advance();
            }
            return t;
        };
        if (two == "->") {
            return make(Tok::kArrow, 2);
        }
        if (two == "<=" || two == ">=" || two == "==" || two == "!=") {
            return make(Tok::kRel, 2);
        }
        switch (text_[pos_]) {
            case '{':
                return make(Tok::kLBrace, 1);
            case '}':
                return make(Tok::kRBrace, 1);
            case '(':
                return make(Tok::kLParen, 1);
            case ')':
                return make(Tok::kRParen, 1);
            case ';':
                return make(Tok::kSemi, 1);
            case '=':
                return make(Tok::kAssign, 1);
            case '+':
                return make(Tok::kPlus, 1);
            case '-':
                return make(Tok::kMinus, 1);
            case '*':
                return make(Tok::kStar, 1);
            case '<':
            case '>':
                return make(Tok::kRel, 1);
            default:
                break;
        }
        throw ParseError(line, col, "unexpected character '" + std::string(1, text_[pos_]) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

struct Position {
    std::size_t line;
    std::size_t column;
};

class Parser {
  public:
    explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

    CfgDocument run() {
        std::optional<Position> entry_pos;
        std::vector<std::pair<std::pair<NodeLabel, NodeLabel>, Position>> edges;
        std::vector<std::pair<NodeLabel, Position>> checks;
        bool seen_graph = false;
        while (peek().kind != Tok::kEnd) {
            if (accept(Tok::kNewline)) {
                continue;
            }
            const Token& kw = expect(Tok::kIdent, "a directive");
            const Position at{kw.line, kw.column};
            if (kw.text == "graph") {
                if (seen_graph) {
                    fail(kw, "duplicate 'graph' directive");
                }
                seen_graph = true;
                doc_.name = expect_word("a graph name");
            } else if (kw.text == "vars") {
                if (!doc_.nodes.empty() || explicit_vars_) {
                    fail(kw, "'vars' must appear once, before any node");
                }
                explicit_vars_ = true;
                while (peek().kind == Tok::kIdent) {
                    const Token& v = next();
                    check_var_name(v);
                    if (doc_.vars.find(v.text)) {
                        fail(v, "variable '" + v.text + "' declared twice");
                    }
                    doc_.vars.intern(v.text);
                }
            } else if (kw.text == "entry") {
                if (entry_pos) {
                    fail(kw, "duplicate 'entry' directive");
                }
                doc_.entry = label();
                entry_pos = at;
            } else if (kw.text == "node") {
                const Token& id_tok = peek();
                NodeLabel id = label();
                if (doc_.nodes.count(id) != 0) {
                    fail(id_tok, "duplicate node " + std::to_string(id));
                }
                node_pos_.emplace(id, at);
                doc_.nodes.emplace(id, body());
            } else if (kw.text == "edge") {
                NodeLabel from = label();
                expect(Tok::kArrow, "'->'");
                NodeLabel to = label();
                edges.push_back({{from, to}, at});
            } else if (kw.text == "check") {
                checks.emplace_back(label(), at);
            } else {
                fail(kw, "unknown directive '" + kw.text + "'");
            }
            end_of_directive();
        }

        if (!entry_pos) {
            throw ParseError(peek().line, peek().column, "missing 'entry' directive");
        }
        if (doc_.nodes.count(doc_.entry) == 0) {
            throw ParseError(entry_pos->line, entry_pos->column,
                             "entry " + std::to_string(doc_.entry) + " is not a declared node");
        }
        std::set<std::pair<NodeLabel, NodeLabel>> seen_edges;
        for (const auto& [e, pos] : edges) {
            for (NodeLabel end : {e.first, e.second}) {
                if (doc_.nodes.count(end) == 0) {
                    throw ParseError(pos.line, pos.column,
                                     "edge endpoint " + std::to_string(end) + " is not a declared node");
                }
            }
            if (!seen_edges.insert(e).second) {
                throw ParseError(pos.line, pos.column,
                                 "duplicate edge " + std::to_string(e.first) + " -> " +
                                     std::to_string(e.second));
            }
        }
        doc_.edges.assign(seen_edges.begin(), seen_edges.end());
        std::set<NodeLabel> forced;
        for (const auto& [c, pos] : checks) {
            if (doc_.nodes.count(c) == 0) {
                throw ParseError(pos.line, pos.column,
                                 "check target " + std::to_string(c) + " is not a declared node");
            }
            forced.insert(c);
        }
        doc_.forced_checks.assign(forced.begin(), forced.end());
        check_reachable();
        return std::move(doc_);
    }

  private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    bool accept(Tok kind) {
        if (peek().kind == kind) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] static void fail(const Token& t, const std::string& message) {
        throw ParseError(t.line, t.column, message);
    }

    const Token& expect(Tok kind, const std::string& what) {
        if (peek().kind != kind) {
            fail(peek(), "expected " + what + ", found " + describe(peek()));
        }
        return next();
    }

    std::string expect_word(const std::string& what) {
        if (peek().kind != Tok::kIdent && peek().kind != Tok::kNumber) {
            fail(peek(), "expected " + what + ", found " + describe(peek()));
        }
        return next().text;
    }

    void end_of_directive() {
        if (peek().kind != Tok::kNewline && peek().kind != Tok::kEnd) {
            fail(peek(), "expected end of line, found " + describe(peek()));
        }
    }

    NodeLabel label() {
        const Token& t = expect(Tok::kNumber, "a node id");
        NodeLabel value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
            fail(t, "node id '" + t.text + "' is out of range");
        }
        return value;
    }

    std::int64_t integer() {
        const Token& first = peek();
        bool negative = accept(Tok::kMinus);
        const Token& t = expect(Tok::kNumber, "an integer");
        std::string digits = (negative ? "-" : "") + t.text;
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
            fail(first, "integer '" + digits + "' does not fit in 64 bits");
        }
        return value;
    }

    static void check_var_name(const Token& t) {
        if (t.text == "assume" || t.text == "assert") {
            fail(t, "'" + t.text + "' is reserved");
        }
    }

    VarId variable(const Token& t) {
        check_var_name(t);
        if (auto id = doc_.vars.find(t.text)) {
            return *id;
        }
        if (explicit_vars_) {
            fail(t, "undeclared variable '" + t.text + "'");
        }
        return doc_.vars.intern(t.text);
    }

    Operand operand() {
        if (peek().kind == Tok::kIdent) {
            return Operand::variable(variable(next()));
        }
        if (peek().kind == Tok::kNumber || peek().kind == Tok::kMinus) {
            return Operand::constant(integer());
        }
        fail(peek(), "expected a variable or integer, found " + describe(peek()));
    }

    Relation relation() {
        const Token& t = peek();
        if (accept(Tok::kAssign)) {
            return Relation::kEq;
        }
        expect(Tok::kRel, "a comparison operator");
        if (t.text == "<") {
            return Relation::kLt;
        }
        if (t.text == "<=") {
            return Relation::kLe;
        }
        if (t.text == "==") {
            return Relation::kEq;
        }
        if (t.text == "!=") {
            return Relation::kNe;
        }
        if (t.text == ">=") {
            return Relation::kGe;
        }
        return Relation::kGt;
    }

    Guard guard() {
        expect(Tok::kLParen, "'('");
        const Token& v = expect(Tok::kIdent, "a variable");
        Guard g;
        g.var = variable(v);
        g.rel = relation();
        g.bound = integer();
        expect(Tok::kRParen, "')'");
        return g;
    }

    Stmt statement() {
        const Token& head = expect(Tok::kIdent, "a statement");
        if (head.text == "assume") {
            return Assume{guard()};
        }
        if (head.text == "assert") {
            return Assert{guard()};
        }
        Assign a;
        a.target = variable(head);
        expect(Tok::kAssign, "'='");
        const Token& left_tok = peek();
        a.left = operand();
        std::optional<ArithOp> op;
        switch (peek().kind) {
            case Tok::kPlus:
                op = ArithOp::kAdd;
                break;
            case Tok::kMinus:
                op = ArithOp::kSub;
                break;
            case Tok::kStar:
                op = ArithOp::kMul;
                break;
            default:
                break;
        }
        if (op) {
            if (!a.left.is_var) {
                fail(left_tok, "left operand of an arithmetic expression must be a variable");
            }
            next();
            a.op = op;
            a.right = operand();
        }
        return a;
    }

    NodeProgram body() {
        NodeProgram prog;
        expect(Tok::kLBrace, "'{'");
        while (true) {
            while (accept(Tok::kNewline) || accept(Tok::kSemi)) {
            }
            if (accept(Tok::kRBrace)) {
                return prog;
            }
            prog.stmts.push_back(statement());
            if (peek().kind != Tok::kSemi && peek().kind != Tok::kNewline &&
                peek().kind != Tok::kRBrace) {
                fail(peek(), "expected ';' or '}', found " + describe(peek()));
            }
        }
    }

    void check_reachable() const {
        std::unordered_map<NodeLabel, std::vector<NodeLabel>> succ;
        for (const auto& [u, v] : doc_.edges) {
            succ[u].push_back(v);
        }
        std::set<NodeLabel> seen{doc_.entry};
        std::deque<NodeLabel> queue{doc_.entry};
        while (!queue.empty()) {
            NodeLabel u = queue.front();
            queue.pop_front();
            for (NodeLabel v : succ[u]) {
                if (seen.insert(v).second) {
                    queue.push_back(v);
                }
            }
        }
        for (const auto& [id, prog] : doc_.nodes) {
            if (seen.count(id) == 0) {
                const Position& p = node_pos_.at(id);
                throw ParseError(p.line, p.column,
                                 "node " + std::to_string(id) + " is unreachable from the entry");
            }
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    CfgDocument doc_;
    bool explicit_vars_ = false;
    std::unordered_map<NodeLabel, Position> node_pos_;
};

}  // namespace

CfgDocument parse_cfg(std::string_view text) { return Parser(text).run(); }

std::string serialize_cfg(const CfgDocument& doc) {
    std::string out = "graph " + doc.name + "\n";
    if (doc.vars.size() != 0) {
        out += "vars";
        for (const std::string& v : doc.vars.names()) {
            out += " " + v;
        }
        out += "\n";
    }
    out += "entry " + std::to_string(doc.entry) + "\n";
    for (const auto& [id, prog] : doc.nodes) {
        out += "node " + std::to_string(id);
        out += prog.stmts.empty() ? " {}" : " { " + to_string(prog, doc.vars) + " }";
        out += "\n";
    }
    for (const auto& [u, v] : doc.edges) {
        out += "edge " + std::to_string(u) + " -> " + std::to_string(v) + "\n";
    }
    for (NodeLabel c : doc.forced_checks) {
        out += "check " + std::to_string(c) + "\n";
    }
    return out;
}

std::optional<NodeId> CompiledCfg::id_of(NodeLabel label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
        return std::nullopt;
    }
    return static_cast<NodeId>(it - labels.begin());
}

CompiledCfg compile(const CfgDocument& doc, std::span<const NodeLabel> extra_checks) {
    NodeLabels labels;
    std::vector<NodeProgram> programs;
    labels.reserve(doc.nodes.size());
    for (const auto& [id, prog] : doc.nodes) {
        labels.push_back(id);
        programs.push_back(prog);
    }
    auto dense = [&](NodeLabel l) {
        return static_cast<NodeId>(std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
    };
    std::vector<Edge> edges;
    edges.reserve(doc.edges.size());
    for (const auto& [u, v] : doc.edges) {
        edges.push_back({dense(u), dense(v)});
    }
    CompiledCfg out{DiGraph(labels.size(), std::move(edges), dense(doc.entry)), labels,
                    std::move(programs), CheckSet(labels.size(), false), doc.vars};
    for (NodeId v = 0; v < out.programs.size(); ++v) {
        out.checks[v] = out.programs[v].has_assert();
    }
    for (NodeLabel c : doc.forced_checks) {
        out.checks[dense(c)] = true;
    }
    for (NodeLabel c : extra_checks) {
        auto id = out.id_of(c);
        if (!id) {
            throw ParseError(0, 0, "check target " + std::to_string(c) + " is not a node");
        }
        out.checks[*id] = true;
    }
    return out;
}

}  // namespace memfix
