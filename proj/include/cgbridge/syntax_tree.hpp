// Copyright (c) 2026 CGBridge Contributors
// SPDX-License-Identifier: Apache-2.0
//
// Recursive-descent parser for the Python subset covered by the node
// taxonomy. Produces a concrete syntax tree of named nodes only (punctuation
// and comments are dropped) with byte spans into the source, matching the
// node kinds and field names a tree-sitter-python grammar would emit. The
// grammar registry keeps language support pluggable.
#ifndef CGBRIDGE_SYNTAX_TREE_HPP
#define CGBRIDGE_SYNTAX_TREE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgbridge/common.hpp"
#include "cgbridge/taxonomy.hpp"

namespace cgb {

enum class Language { python, java };

inline std::string_view language_name(Language l) {
    return l == Language::python ? "python" : "java";
}

inline std::optional<Language> language_from_name(std::string_view name) {
    if (name == "python") return Language::python;
    if (name == "java") return Language::java;
    return std::nullopt;
}

struct SourceUnit {
    std::string id;
    Language language = Language::python;
    std::string code;
};

struct SyntaxNode {
    std::string kind;
    std::uint32_t start = 0;
    std::uint32_t end = 0;
    std::string field;  // role relative to parent; "" means plain containment
    int parent = -1;
    std::vector<int> children;  // source order
};

class SyntaxTree {
public:
    SyntaxTree() = default;
    SyntaxTree(std::vector<SyntaxNode> nodes, int root, std::string source)
        : nodes_(std::move(nodes)), root_(root), source_(std::move(source)) {}

    const SyntaxNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    SyntaxNode& node(int i) { return nodes_[static_cast<std::size_t>(i)]; }
    int root() const { return root_; }
    std::size_t size() const { return nodes_.size(); }
    const std::string& source() const { return source_; }

    std::string text_of(int i) const {
        const auto& n = node(i);
        return source_.substr(n.start, n.end - n.start);
    }

    /// Number of nodes of a given kind (test/diagnostic helper).
    std::size_t count_kind(std::string_view kind) const {
        std::size_t c = 0;
        for (const auto& n : nodes_) {
            if (n.kind == kind) ++c;
        }
        return c;
    }

private:
    std::vector<SyntaxNode> nodes_;
    int root_ = -1;
    std::string source_;
};

// ----------------------------- grammar registry -----------------------------

class Grammar {
public:
    virtual ~Grammar() = default;
    virtual SyntaxTree parse(const std::string& source) const = 0;
    virtual const KindMap& kind_map() const = 0;
};

namespace detail {

// ----------------------------- lexer -----------------------------

enum class Tok : std::uint8_t { Newline, Indent, Dedent, Name, Keyword, Int, Float, Str, Op, End };

struct Token {
    Tok type = Tok::End;
    std::string text;
    std::uint32_t start = 0;
    std::uint32_t end = 0;
    // string sub-spans (quote run / payload / quote run)
    std::uint32_t content_start = 0;
    std::uint32_t content_end = 0;
};

inline bool is_python_keyword(std::string_view s) {
    static const char* kw[] = {"def",   "return", "if",     "elif",    "else", "for",  "while",
                               "in",    "break",  "continue", "try",   "except", "finally",
                               "import", "from",  "as",     "pass",    "not",  "and",  "or",
                               "None",  "True",   "False",  "is",      "lambda", "class", "with",
                               "global", "nonlocal", "yield", "raise", "assert", "del"};
    for (const char* k : kw) {
        if (s == k) return true;
    }
    return false;
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        indents_.push_back(0);
        std::size_t i = 0;
        const std::size_t n = src_.size();
        bool line_start = true;
        int bracket_depth = 0;
        bool line_had_tokens = false;

        while (i < n) {
            if (line_start && bracket_depth == 0) {
                std::size_t indent = 0;
                std::size_t j = i;
                while (j < n && (src_[j] == ' ' || src_[j] == '\t')) {
                    if (src_[j] == '\t') throw ParseError("tab in indentation", j);
                    ++indent;
                    ++j;
                }
                if (j >= n || src_[j] == '\n' || src_[j] == '#') {
                    // blank or comment-only line
                    while (j < n && src_[j] != '\n') ++j;
                    if (j < n) ++j;
                    i = j;
                    continue;
                }
                if (indent > indents_.back()) {
                    indents_.push_back(indent);
                    out.push_back({Tok::Indent, "", u32(j), u32(j), 0, 0});
                } else {
                    while (indent < indents_.back()) {
                        indents_.pop_back();
                        out.push_back({Tok::Dedent, "", u32(j), u32(j), 0, 0});
                    }
                    if (indent != indents_.back()) throw ParseError("inconsistent dedent", j);
                }
                i = j;
                line_start = false;
                line_had_tokens = false;
                continue;
            }

            const char c = src_[i];
            if (c == '\n') {
                if (bracket_depth == 0) {
                    if (line_had_tokens) out.push_back({Tok::Newline, "", u32(i), u32(i + 1), 0, 0});
                    line_start = true;
                }
                ++i;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                ++i;
                continue;
            }
            if (c == '#') {
                while (i < n && src_[i] != '\n') ++i;
                continue;
            }
            line_had_tokens = true;
            if (is_ident_start(c)) {
                std::size_t j = i + 1;
                while (j < n && is_ident_char(src_[j])) ++j;
                std::string word = src_.substr(i, j - i);
                out.push_back({is_python_keyword(word) ? Tok::Keyword : Tok::Name, word, u32(i), u32(j), 0, 0});
                i = j;
                continue;
            }
            if (is_digit(c)) {
                std::size_t j = i;
                while (j < n && is_digit(src_[j])) ++j;
                bool is_float = false;
                if (j < n && src_[j] == '.' && j + 1 < n && is_digit(src_[j + 1])) {
                    is_float = true;
                    ++j;
                    while (j < n && is_digit(src_[j])) ++j;
                }
                if (j < n && is_ident_start(src_[j])) throw ParseError("malformed number literal", j);
                out.push_back({is_float ? Tok::Float : Tok::Int, src_.substr(i, j - i), u32(i), u32(j), 0, 0});
                i = j;
                continue;
            }
            if (c == '"' || c == '\'') {
                out.push_back(lex_string(i));
                continue;
            }
            // operators / punctuation, longest match first
            static const char* ops3[] = {"**=", "//=", "<<=", ">>="};
            static const char* ops2[] = {"**", "//", "<<", ">>", "<=", ">=", "==", "!=",
                                         "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "->"};
            std::string tok;
            for (const char* o : ops3) {
                if (src_.compare(i, 3, o) == 0) {
                    tok = o;
                    break;
                }
            }
            if (tok.empty()) {
                for (const char* o : ops2) {
                    if (src_.compare(i, 2, o) == 0) {
                        tok = o;
                        break;
                    }
                }
            }
            if (tok.empty()) {
                static const std::string singles = "+-*/%<>=()[]{},:.&|^~;@";
                if (singles.find(c) == std::string::npos) throw ParseError("unexpected character", i);
                tok = std::string(1, c);
            }
            if (tok == "(" || tok == "[" || tok == "{") ++bracket_depth;
            if (tok == ")" || tok == "]" || tok == "}") bracket_depth = bracket_depth > 0 ? bracket_depth - 1 : 0;
            out.push_back({Tok::Op, tok, u32(i), u32(i + tok.size()), 0, 0});
            i += tok.size();
        }

        return finish(std::move(out));
    }

private:
    static std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }

    // Synthesizes the trailing Newline when the last line lacks '\n', then
    // closes open indentation levels.
    std::vector<Token> finish(std::vector<Token> out) {
        const std::uint32_t eof = u32(src_.size());
        if (!out.empty()) {
            const Tok last = out.back().type;
            if (last != Tok::Newline && last != Tok::Dedent && last != Tok::Indent) {
                out.push_back({Tok::Newline, "", eof, eof, 0, 0});
            }
        }
        while (indents_.size() > 1) {
            indents_.pop_back();
            out.push_back({Tok::Dedent, "", eof, eof, 0, 0});
        }
        out.push_back({Tok::End, "", eof, eof, 0, 0});
        return out;
    }

    Token lex_string(std::size_t& i) {
        const std::size_t n = src_.size();
        const char q = src_[i];
        const std::size_t start = i;
        std::size_t quote_len = 1;
        if (i + 2 < n && src_[i + 1] == q && src_[i + 2] == q) quote_len = 3;
        std::size_t j = i + quote_len;
        const std::size_t content_start = j;
        while (j < n) {
            if (src_[j] == '\\' && j + 1 < n) {
                j += 2;
                continue;
            }
            if (quote_len == 1) {
                if (src_[j] == q) break;
                if (src_[j] == '\n') throw ParseError("unterminated string literal", j);
                ++j;
            } else {
                if (src_[j] == q && j + 3 <= n && src_[j + 1] == q && src_[j + 2] == q) break;
                ++j;
            }
        }
        if (j >= n) throw ParseError("unterminated string literal", start);
        const std::size_t content_end = j;
        j += quote_len;
        i = j;
        Token t;
        t.type = Tok::Str;
        t.text = src_.substr(start, j - start);
        t.start = u32(start);
        t.end = u32(j);
        t.content_start = u32(content_start);
        t.content_end = u32(content_end);
        return t;
    }

    const std::string& src_;
    std::vector<std::size_t> indents_;
};

// ----------------------------- parser -----------------------------

class PythonParser {
public:
    explicit PythonParser(const std::string& source) : src_(source) {}

    SyntaxTree parse() {
        Lexer lexer(src_);
        toks_ = lexer.run();
        pos_ = 0;

        std::vector<int> stmts;
        while (!at(Tok::End)) {
            stmts.push_back(parse_statement());
        }
        const int root = add_node("module", 0, u32(src_.size()));
        for (int s : stmts) attach(root, s, "");
        return SyntaxTree(std::move(nodes_), root, src_);
    }

private:
    static std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t k = 1) const {
        const std::size_t i = pos_ + k;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok t) const { return cur().type == t; }
    bool at_op(std::string_view s) const { return cur().type == Tok::Op && cur().text == s; }
    bool at_kw(std::string_view s) const { return cur().type == Tok::Keyword && cur().text == s; }
    const Token& advance() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expected " + what, cur().start);
    }

    void expect_op(std::string_view s) {
        if (!at_op(s)) fail("'" + std::string(s) + "'");
        advance();
    }
    void expect_kw(std::string_view s) {
        if (!at_kw(s)) fail("'" + std::string(s) + "'");
        advance();
    }
    void expect_newline() {
        if (!at(Tok::Newline)) fail("end of line");
        advance();
    }

    int add_node(std::string kind, std::uint32_t start, std::uint32_t end) {
        SyntaxNode n;
        n.kind = std::move(kind);
        n.start = start;
        n.end = end;
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size() - 1);
    }

    void attach(int parent, int child, std::string field) {
        nodes_[child].parent = parent;
        nodes_[child].field = std::move(field);
        nodes_[parent].children.push_back(child);
    }

    void grow(int node, int child) {
        nodes_[node].start = std::min(nodes_[node].start, nodes_[child].start);
        nodes_[node].end = std::max(nodes_[node].end, nodes_[child].end);
    }

    // --- statements ---

    int parse_statement() {
        if (at_kw("def")) return parse_function_def();
        if (at_kw("if")) return parse_if();
        if (at_kw("while")) return parse_while();
        if (at_kw("for")) return parse_for();
        if (at_kw("try")) return parse_try();
        const int s = parse_small_statement();
        expect_newline();
        return s;
    }

    int parse_small_statement() {
        if (at_kw("return")) return parse_return();
        if (at_kw("break")) return keyword_statement("break", "break_statement");
        if (at_kw("continue")) return keyword_statement("continue", "continue_statement");
        if (at_kw("pass")) return keyword_statement("pass", "pass_statement");
        if (at_kw("import")) return parse_import();
        if (at_kw("from")) return parse_from_import();
        return parse_expression_statement();
    }

    int keyword_statement(std::string_view kw, std::string kind) {
        const Token& t = cur();
        expect_kw(kw);
        return add_node(std::move(kind), t.start, t.end);
    }

    int parse_return() {
        const Token& t = cur();
        expect_kw("return");
        const int node = add_node("return_statement", t.start, t.end);
        if (!at(Tok::Newline) && !at(Tok::End)) {
            const int value = parse_expression_list();
            attach(node, value, "value");
            grow(node, value);
        }
        return node;
    }

    int parse_import() {
        const Token& t = cur();
        expect_kw("import");
        const int node = add_node("import_statement", t.start, t.end);
        while (true) {
            const int name = parse_dotted_name();
            int item = name;
            if (at_kw("as")) {
                advance();
                const int alias = parse_identifier();
                item = add_node("aliased_import", nodes_[name].start, nodes_[alias].end);
                attach(item, name, "name");
                attach(item, alias, "alias");
            }
            attach(node, item, "");
            grow(node, item);
            if (!at_op(",")) break;
            advance();
        }
        return node;
    }

    int parse_from_import() {
        const Token& t = cur();
        expect_kw("from");
        const int node = add_node("import_from_statement", t.start, t.end);
        const int mod = parse_dotted_name();
        attach(node, mod, "module_name");
        grow(node, mod);
        expect_kw("import");
        while (true) {
            const int name = parse_identifier();
            int item = name;
            if (at_kw("as")) {
                advance();
                const int alias = parse_identifier();
                item = add_node("aliased_import", nodes_[name].start, nodes_[alias].end);
                attach(item, name, "name");
                attach(item, alias, "alias");
            }
            attach(node, item, "");
            grow(node, item);
            if (!at_op(",")) break;
            advance();
        }
        return node;
    }

    int parse_dotted_name() {
        const int first = parse_identifier();
        if (!at_op(".")) return first;
        const int node = add_node("dotted_name", nodes_[first].start, nodes_[first].end);
        attach(node, first, "");
        while (at_op(".")) {
            advance();
            const int part = parse_identifier();
            attach(node, part, "");
            grow(node, part);
        }
        return node;
    }

    int parse_expression_statement() {
        const int first = parse_expression();
        int inner = first;
        if (at_op(",") || at_op("=")) {
            std::vector<int> targets{first};
            while (at_op(",")) {
                advance();
                targets.push_back(parse_expression());
            }
            if (at_op("=")) {
                advance();
                const int left = wrap_list(targets, "pattern_list");
                const int right = parse_expression_list();
                inner = add_node("assignment", nodes_[left].start, nodes_[right].end);
                attach(inner, left, "left");
                attach(inner, right, "right");
            } else {
                inner = wrap_list(targets, "expression_list");
            }
        } else if (cur().type == Tok::Op && is_aug_op(cur().text)) {
            advance();
            const int right = parse_expression();
            inner = add_node("augmented_assignment", nodes_[first].start, nodes_[right].end);
            attach(inner, first, "left");
            attach(inner, right, "right");
        }
        const int stmt = add_node("expression_statement", nodes_[inner].start, nodes_[inner].end);
        attach(stmt, inner, "");
        return stmt;
    }

    static bool is_aug_op(const std::string& s) {
        static const char* ops[] = {"+=", "-=", "*=", "/=", "//=", "%=", "**=", "&=", "|=", "^=", "<<=", ">>="};
        for (const char* o : ops) {
            if (s == o) return true;
        }
        return false;
    }

    int wrap_list(const std::vector<int>& items, std::string kind) {
        if (items.size() == 1) return items[0];
        const int node = add_node(std::move(kind), nodes_[items.front()].start, nodes_[items.back()].end);
        for (int it : items) attach(node, it, "");
        return node;
    }

    int parse_expression_list() {
        std::vector<int> items{parse_expression()};
        while (at_op(",")) {
            advance();
            items.push_back(parse_expression());
        }
        return wrap_list(items, "expression_list");
    }

    int parse_function_def() {
        const Token& t = cur();
        expect_kw("def");
        const int node = add_node("function_definition", t.start, t.end);
        const int name = parse_identifier();
        attach(node, name, "name");
        const int params = parse_parameters();
        attach(node, params, "parameters");
        expect_op(":");
        const int body = parse_suite();
        attach(node, body, "body");
        grow(node, body);
        return node;
    }

    int parse_parameters() {
        const Token& open = cur();
        expect_op("(");
        const int node = add_node("parameters", open.start, open.end);
        if (!at_op(")")) {
            while (true) {
                const int name = parse_identifier();
                int param = name;
                if (at_op("=")) {
                    advance();
                    const int value = parse_expression();
                    param = add_node("default_parameter", nodes_[name].start, nodes_[value].end);
                    attach(param, name, "name");
                    attach(param, value, "value");
                }
                attach(node, param, "");
                if (!at_op(",")) break;
                advance();
            }
        }
        if (!at_op(")")) fail("')'");
        nodes_[node].end = cur().end;
        advance();
        return node;
    }

    int parse_if() {
        const Token& t = cur();
        expect_kw("if");
        const int node = add_node("if_statement", t.start, t.end);
        const int cond = parse_expression();
        attach(node, cond, "condition");
        expect_op(":");
        const int body = parse_suite();
        attach(node, body, "consequence");
        grow(node, body);
        while (at_kw("elif")) {
            const Token& et = cur();
            advance();
            const int clause = add_node("elif_clause", et.start, et.end);
            const int c = parse_expression();
            attach(clause, c, "condition");
            expect_op(":");
            const int b = parse_suite();
            attach(clause, b, "consequence");
            grow(clause, b);
            attach(node, clause, "alternative");
            grow(node, clause);
        }
        if (at_kw("else")) {
            const int clause = parse_else_clause();
            attach(node, clause, "alternative");
            grow(node, clause);
        }
        return node;
    }

    int parse_else_clause() {
        const Token& t = cur();
        expect_kw("else");
        const int clause = add_node("else_clause", t.start, t.end);
        expect_op(":");
        const int body = parse_suite();
        attach(clause, body, "body");
        grow(clause, body);
        return clause;
    }

    int parse_while() {
        const Token& t = cur();
        expect_kw("while");
        const int node = add_node("while_statement", t.start, t.end);
        const int cond = parse_expression();
        attach(node, cond, "condition");
        expect_op(":");
        const int body = parse_suite();
        attach(node, body, "body");
        grow(node, body);
        return node;
    }

    int parse_for() {
        const Token& t = cur();
        expect_kw("for");
        const int node = add_node("for_statement", t.start, t.end);
        std::vector<int> targets{parse_identifier()};
        while (at_op(",")) {
            advance();
            targets.push_back(parse_identifier());
        }
        const int left = wrap_list(targets, "pattern_list");
        attach(node, left, "left");
        expect_kw("in");
        const int iterable = parse_expression();
        attach(node, iterable, "right");
        expect_op(":");
        const int body = parse_suite();
        attach(node, body, "body");
        grow(node, body);
        return node;
    }

    int parse_try() {
        const Token& t = cur();
        expect_kw("try");
        const int node = add_node("try_statement", t.start, t.end);
        expect_op(":");
        const int body = parse_suite();
        attach(node, body, "body");
        grow(node, body);
        bool has_handler = false;
        while (at_kw("except")) {
            has_handler = true;
            const Token& et = cur();
            advance();
            const int clause = add_node("except_clause", et.start, et.end);
            if (!at_op(":")) {
                const int type = parse_expression();
                attach(clause, type, "");
                if (at_kw("as")) {
                    advance();
                    const int alias = parse_identifier();
                    attach(clause, alias, "alias");
                }
            }
            expect_op(":");
            const int b = parse_suite();
            attach(clause, b, "body");
            grow(clause, b);
            attach(node, clause, "");
            grow(node, clause);
        }
        if (at_kw("finally")) {
            has_handler = true;
            const Token& ft = cur();
            advance();
            const int clause = add_node("finally_clause", ft.start, ft.end);
            expect_op(":");
            const int b = parse_suite();
            attach(clause, b, "body");
            grow(clause, b);
            attach(node, clause, "");
            grow(node, clause);
        }
        if (!has_handler) fail("'except' or 'finally'");
        return node;
    }

    /// Either an indented block or an inline simple statement after ':'.
    int parse_suite() {
        if (at(Tok::Newline)) {
            advance();
            if (!at(Tok::Indent)) fail("indented block");
            advance();
            std::vector<int> stmts;
            while (!at(Tok::Dedent) && !at(Tok::End)) {
                stmts.push_back(parse_statement());
            }
            if (at(Tok::Dedent)) advance();
            if (stmts.empty()) fail("statement");
            const int block = add_node("block", nodes_[stmts.front()].start, nodes_[stmts.back()].end);
            for (int s : stmts) attach(block, s, "");
            return block;
        }
        const int stmt = parse_small_statement();
        expect_newline();
        const int block = add_node("block", nodes_[stmt].start, nodes_[stmt].end);
        attach(block, stmt, "");
        return block;
    }

    // --- expressions ---

    int parse_identifier() {
        if (!at(Tok::Name)) fail("identifier");
        const Token& t = advance();
        return add_node("identifier", t.start, t.end);
    }

    int parse_expression() { return parse_or(); }

    int parse_or() {
        int left = parse_and();
        while (at_kw("or")) {
            advance();
            const int right = parse_and();
            left = binary_like("boolean_operator", left, right);
        }
        return left;
    }

    int parse_and() {
        int left = parse_not();
        while (at_kw("and")) {
            advance();
            const int right = parse_not();
            left = binary_like("boolean_operator", left, right);
        }
        return left;
    }

    int parse_not() {
        if (at_kw("not")) {
            const Token& t = cur();
            advance();
            const int operand = parse_not();
            const int node = add_node("not_operator", t.start, nodes_[operand].end);
            attach(node, operand, "");
            return node;
        }
        return parse_comparison();
    }

    bool at_comparison_op() const {
        if (cur().type == Tok::Op) {
            const std::string& s = cur().text;
            return s == "<" || s == ">" || s == "<=" || s == ">=" || s == "==" || s == "!=";
        }
        return at_kw("in") || at_kw("is") ||
               (at_kw("not") && peek().type == Tok::Keyword && peek().text == "in");
    }

    int parse_comparison() {
        const int first = parse_bit_or();
        if (!at_comparison_op()) return first;
        std::vector<int> operands{first};
        while (at_comparison_op()) {
            if (at_kw("not")) {
                advance();
                expect_kw("in");
            } else if (at_kw("is")) {
                advance();
                if (at_kw("not")) advance();
            } else {
                advance();
            }
            operands.push_back(parse_bit_or());
        }
        const int node =
            add_node("comparison_operator", nodes_[operands.front()].start, nodes_[operands.back()].end);
        for (int o : operands) attach(node, o, "");
        return node;
    }

    int parse_bit_or() { return parse_left_assoc({"|"}, [this] { return parse_bit_xor(); }); }
    int parse_bit_xor() { return parse_left_assoc({"^"}, [this] { return parse_bit_and(); }); }
    int parse_bit_and() { return parse_left_assoc({"&"}, [this] { return parse_shift(); }); }
    int parse_shift() { return parse_left_assoc({"<<", ">>"}, [this] { return parse_arith(); }); }
    int parse_arith() { return parse_left_assoc({"+", "-"}, [this] { return parse_term(); }); }
    int parse_term() { return parse_left_assoc({"*", "/", "//", "%"}, [this] { return parse_factor(); }); }

    int parse_left_assoc(std::vector<std::string> ops, const std::function<int()>& next) {
        int left = next();
        while (true) {
            bool matched = false;
            for (const auto& o : ops) {
                if (at_op(o)) {
                    advance();
                    const int right = next();
                    left = binary_like("binary_operator", left, right);
                    matched = true;
                    break;
                }
            }
            if (!matched) return left;
        }
    }

    int binary_like(std::string kind, int left, int right) {
        const int node = add_node(std::move(kind), nodes_[left].start, nodes_[right].end);
        attach(node, left, "left");
        attach(node, right, "right");
        return node;
    }

    int parse_factor() {
        if (at_op("-") || at_op("+") || at_op("~")) {
            const Token& t = cur();
            advance();
            const int operand = parse_factor();
            const int node = add_node("unary_operator", t.start, nodes_[operand].end);
            attach(node, operand, "");
            return node;
        }
        return parse_power();
    }

    int parse_power() {
        const int base = parse_postfix();
        if (at_op("**")) {
            advance();
            const int exp = parse_factor();  // right associative
            return binary_like("binary_operator", base, exp);
        }
        return base;
    }

    int parse_postfix() {
        int node = parse_atom();
        while (true) {
            if (at_op("(")) {
                const Token& open = cur();
                advance();
                const int args = add_node("argument_list", open.start, open.end);
                if (!at_op(")")) {
                    while (true) {
                        int arg;
                        if (at(Tok::Name) && peek().type == Tok::Op && peek().text == "=") {
                            const int name = parse_identifier();
                            advance();  // '='
                            const int value = parse_expression();
                            arg = add_node("keyword_argument", nodes_[name].start, nodes_[value].end);
                            attach(arg, name, "name");
                            attach(arg, value, "value");
                        } else {
                            arg = parse_expression();
                        }
                        attach(args, arg, "");
                        grow(args, arg);
                        if (!at_op(",")) break;
                        advance();
                    }
                }
                if (!at_op(")")) fail("')'");
                nodes_[args].end = cur().end;
                advance();
                const int call = add_node("call", nodes_[node].start, nodes_[args].end);
                attach(call, node, "function");
                attach(call, args, "arguments");
                node = call;
            } else if (at_op("[")) {
                advance();
                const int index = parse_expression();
                if (!at_op("]")) fail("']'");
                const std::uint32_t end = cur().end;
                advance();
                const int sub = add_node("subscript", nodes_[node].start, end);
                attach(sub, node, "");
                attach(sub, index, "");
                node = sub;
            } else if (at_op(".")) {
                advance();
                const int attr = parse_identifier();
                const int acc = add_node("attribute", nodes_[node].start, nodes_[attr].end);
                attach(acc, node, "");
                attach(acc, attr, "attribute");
                node = acc;
            } else {
                return node;
            }
        }
    }

    int parse_atom() {
        const Token& t = cur();
        switch (t.type) {
            case Tok::Name:
                return parse_identifier();
            case Tok::Int:
                advance();
                return add_node("integer", t.start, t.end);
            case Tok::Float:
                advance();
                return add_node("float", t.start, t.end);
            case Tok::Str: {
                advance();
                const int node = add_node("string", t.start, t.end);
                const int s = add_node("string_start", t.start, t.content_start);
                attach(node, s, "");
                if (t.content_end > t.content_start) {
                    const int c = add_node("string_content", t.content_start, t.content_end);
                    attach(node, c, "");
                }
                const int e = add_node("string_end", t.content_end, t.end);
                attach(node, e, "");
                return node;
            }
            case Tok::Keyword:
                if (t.text == "None") {
                    advance();
                    return add_node("none", t.start, t.end);
                }
                if (t.text == "True") {
                    advance();
                    return add_node("true", t.start, t.end);
                }
                if (t.text == "False") {
                    advance();
                    return add_node("false", t.start, t.end);
                }
                fail("expression");
            case Tok::Op:
                if (t.text == "(") {
                    advance();
                    const int inner = parse_expression();
                    if (!at_op(")")) fail("')'");
                    const std::uint32_t end = cur().end;
                    advance();
                    const int node = add_node("parenthesized_expression", t.start, end);
                    attach(node, inner, "");
                    return node;
                }
                if (t.text == "[") {
                    advance();
                    const int node = add_node("list", t.start, t.end);
                    if (!at_op("]")) {
                        while (true) {
                            const int item = parse_expression();
                            attach(node, item, "");
                            grow(node, item);
                            if (!at_op(",")) break;
                            advance();
                        }
                    }
                    if (!at_op("]")) fail("']'");
                    nodes_[node].end = cur().end;
                    advance();
                    return node;
                }
                fail("expression");
            default:
                fail("expression");
        }
    }

    const std::string& src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<SyntaxNode> nodes_;
};

}  // namespace detail

class PythonGrammar : public Grammar {
public:
    SyntaxTree parse(const std::string& source) const override {
        detail::PythonParser parser(source);
        return parser.parse();
    }
    const KindMap& kind_map() const override { return python_kind_map(); }
};

inline std::map<Language, std::shared_ptr<const Grammar>>& grammar_registry() {
    static std::map<Language, std::shared_ptr<const Grammar>> registry = {
        {Language::python, std::make_shared<PythonGrammar>()},
    };
    return registry;
}

inline void register_grammar(Language lang, std::shared_ptr<const Grammar> grammar) {
    grammar_registry()[lang] = std::move(grammar);
}

inline const Grammar& grammar_for(Language lang) {
    const auto& reg = grammar_registry();
    auto it = reg.find(lang);
    if (it == reg.end()) {
        throw Error("no grammar registered for language '" + std::string(language_name(lang)) + "'");
    }
    return *it->second;
}

/// Parses a unit into a concrete syntax tree of named nodes.
inline SyntaxTree parse_source(const SourceUnit& unit) {
    if (unit.code.empty()) throw Error("source unit '" + unit.id + "' is empty");
    return grammar_for(unit.language).parse(unit.code);
}

}  // namespace cgb

#endif  // CGBRIDGE_SYNTAX_TREE_HPP
