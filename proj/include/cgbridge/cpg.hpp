// Copyright (c) 2026 CGBridge Contributors
// SPDX-License-Identifier: Apache-2.0
//
// Code property graph structure and AST-layer construction. Node ids are
// assigned in depth-first pre-order over the syntax tree; AST edges form a
// tree rooted at the module node. CFG/DFG layers are added by separate
// passes that return new graphs.
#ifndef CGBRIDGE_CPG_HPP
#define CGBRIDGE_CPG_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgbridge/common.hpp"
#include "cgbridge/syntax_tree.hpp"
#include "cgbridge/taxonomy.hpp"

namespace cgb {

struct CpgNode {
    std::uint32_t id = 0;
    NodeType type = NodeType::module;
    std::string text;
    std::uint32_t start = 0;
    std::uint32_t end = 0;
};

struct CpgEdge {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    EdgeClass cls = EdgeClass::AST;
    EdgeAttr attr = EdgeAttr::contains;

    friend bool operator==(const CpgEdge&, const CpgEdge&) = default;
    friend auto operator<=>(const CpgEdge&, const CpgEdge&) = default;
};

struct CodePropertyGraph {
    std::string source_id;
    std::vector<CpgNode> nodes;
    std::vector<CpgEdge> edges;

    std::size_t edge_count(EdgeClass cls) const {
        std::size_t c = 0;
        for (const auto& e : edges) {
            if (e.cls == cls) ++c;
        }
        return c;
    }
};

// Node types whose text keeps only the first source line of the span.
inline bool is_first_line_type(NodeType t) {
    switch (t) {
        case NodeType::if_statement:
        case NodeType::for_statement:
        case NodeType::while_statement:
        case NodeType::try_statement:
        case NodeType::function_definition:
        case NodeType::elif_clause:
        case NodeType::else_clause:
        case NodeType::except_clause:
        case NodeType::finally_clause:
            return true;
        default:
            return false;
    }
}

inline EdgeAttr ast_attr_for(const std::string& field, const std::string& child_kind) {
    if (field == "name" || field == "alias") return EdgeAttr::has_name;
    if (field == "parameters") return EdgeAttr::has_parameters;
    if (field == "body") return EdgeAttr::has_body;
    if (field == "condition") return EdgeAttr::has_condition;
    if (field == "consequence") return EdgeAttr::has_then_body;
    if (field == "alternative") {
        return child_kind == "elif_clause" ? EdgeAttr::has_elif_branch : EdgeAttr::has_else_body;
    }
    if (field == "left") return EdgeAttr::has_target;
    if (field == "right" || field == "value") return EdgeAttr::has_value;
    return EdgeAttr::contains;
}

/// Builds the AST layer of the CPG: one node per named tree node (depth-first
/// pre-order ids), role-attributed parent->child edges. Throws TaxonomyError
/// listing every unmapped node kind.
inline CodePropertyGraph build_ast_graph(const SyntaxTree& tree, const SourceUnit& unit) {
    const KindMap& kinds = grammar_for(unit.language).kind_map();

    std::set<std::string> unmapped;
    struct Frame {
        int tree_node;
        std::int64_t parent_id;  // -1 for root
        EdgeAttr attr;
    };

    CodePropertyGraph g;
    g.source_id = unit.id;

    std::vector<Frame> stack;
    stack.push_back({tree.root(), -1, EdgeAttr::contains});
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const SyntaxNode& sn = tree.node(f.tree_node);
        const auto mapped = kinds.lookup(sn.kind);
        std::int64_t my_id = -1;
        if (!mapped) {
            unmapped.insert(sn.kind);
        } else {
            CpgNode n;
            n.id = static_cast<std::uint32_t>(g.nodes.size());
            n.type = *mapped;
            n.start = sn.start;
            n.end = sn.end;
            if (is_first_line_type(n.type)) {
                n.text = first_line(unit.code, n.start, n.end);
            } else {
                n.text = unit.code.substr(n.start, n.end - n.start);
            }
            my_id = n.id;
            g.nodes.push_back(std::move(n));
            if (f.parent_id >= 0) {
                g.edges.push_back({static_cast<std::uint32_t>(f.parent_id),
                                   static_cast<std::uint32_t>(my_id), EdgeClass::AST, f.attr});
            }
        }
        // push children in reverse so pre-order pops left-to-right
        for (auto it = sn.children.rbegin(); it != sn.children.rend(); ++it) {
            const SyntaxNode& child = tree.node(*it);
            stack.push_back({*it, my_id, ast_attr_for(child.field, child.kind)});
        }
    }

    if (!unmapped.empty()) {
        std::vector<std::string> kinds_list(unmapped.begin(), unmapped.end());
        std::string msg = "node kinds outside the taxonomy:";
        for (const auto& k : kinds_list) msg += " " + k;
        throw TaxonomyError(msg, std::move(kinds_list));
    }
    return g;
}

// ----------------------------- tree navigation -----------------------------

/// Read-only index over a graph's AST layer: parents, ordered children, and
/// role lookup by edge attribute.
class CpgView {
public:
    explicit CpgView(const CodePropertyGraph& g) : g_(&g) {
        parents_.assign(g.nodes.size(), -1);
        children_.assign(g.nodes.size(), {});
        child_attr_.assign(g.nodes.size(), EdgeAttr::contains);
        for (const auto& e : g.edges) {
            if (e.cls != EdgeClass::AST) continue;
            parents_[e.dst] = static_cast<std::int64_t>(e.src);
            children_[e.src].push_back(e.dst);
            child_attr_[e.dst] = e.attr;
        }
        for (auto& c : children_) std::sort(c.begin(), c.end());
    }

    const CodePropertyGraph& graph() const { return *g_; }
    std::int64_t parent(std::uint32_t id) const { return parents_[id]; }
    const std::vector<std::uint32_t>& children(std::uint32_t id) const { return children_[id]; }
    EdgeAttr incoming_attr(std::uint32_t id) const { return child_attr_[id]; }
    NodeType type(std::uint32_t id) const { return g_->nodes[id].type; }

    /// First child whose incoming AST attr matches, or -1.
    std::int64_t child_by_attr(std::uint32_t id, EdgeAttr attr) const {
        for (auto c : children_[id]) {
            if (child_attr_[c] == attr) return c;
        }
        return -1;
    }

    std::vector<std::uint32_t> children_by_attr(std::uint32_t id, EdgeAttr attr) const {
        std::vector<std::uint32_t> out;
        for (auto c : children_[id]) {
            if (child_attr_[c] == attr) out.push_back(c);
        }
        return out;
    }

private:
    const CodePropertyGraph* g_;
    std::vector<std::int64_t> parents_;
    std::vector<std::vector<std::uint32_t>> children_;
    std::vector<EdgeAttr> child_attr_;
};

inline bool is_statement_type(NodeType t) {
    switch (t) {
        case NodeType::expression_statement:
        case NodeType::if_statement:
        case NodeType::for_statement:
        case NodeType::while_statement:
        case NodeType::try_statement:
        case NodeType::function_definition:
        case NodeType::return_statement:
        case NodeType::break_statement:
        case NodeType::continue_statement:
            return true;
        default:
            return false;
    }
}

// ----------------------------- invariants -----------------------------

/// Verifies the AST-layer invariants: edge count = nodes - 1, single-parent,
/// rooted at the unique module node, no self loops, spans nested, attrs in
/// class sets. Returns an explanation on failure.
inline std::optional<std::string> check_graph_invariants(const CodePropertyGraph& g) {
    if (g.nodes.empty()) return "graph has no nodes";
    std::size_t ast_edges = 0;
    std::vector<int> parent_count(g.nodes.size(), 0);
    for (const auto& e : g.edges) {
        if (e.src >= g.nodes.size() || e.dst >= g.nodes.size()) return "edge endpoint out of range";
        if (edge_attr_class(e.attr) != e.cls) return "edge attr outside its class set";
        if (e.cls == EdgeClass::AST) {
            ++ast_edges;
            if (e.src == e.dst) return "self-loop AST edge";
            ++parent_count[e.dst];
            const auto& p = g.nodes[e.src];
            const auto& c = g.nodes[e.dst];
            if (c.start < p.start || c.end > p.end) return "child span escapes parent span";
        }
    }
    if (ast_edges != g.nodes.size() - 1) return "AST edge count != nodes - 1";
    std::size_t roots = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (parent_count[i] == 0) {
            ++roots;
            if (g.nodes[i].type != NodeType::module) return "root is not the module node";
        }
        if (parent_count[i] > 1) return "node has multiple AST parents";
        if (g.nodes[i].id != i) return "node ids not contiguous";
        if (g.nodes[i].end < g.nodes[i].start) return "inverted span";
    }
    if (roots != 1) return "AST layer is not a single tree";
    // reachability from the root
    CpgView view(g);
    std::vector<char> seen(g.nodes.size(), 0);
    std::vector<std::uint32_t> stack{0};
    std::size_t visited = 0;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (seen[v]) return "cycle in AST layer";
        seen[v] = 1;
        ++visited;
        for (auto c : view.children(v)) stack.push_back(c);
    }
    if (visited != g.nodes.size()) return "AST tree does not reach all nodes";
    return std::nullopt;
}

// ----------------------------- serialization -----------------------------

inline std::string escape_node_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '\\') {
            out += "\\\\";
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}

/// Deterministic textual form: node lines in id order, then edge lines in
/// (src, dst, attr-name) order.
inline std::string serialize_graph_text(const CodePropertyGraph& g) {
    std::ostringstream os;
    for (const auto& n : g.nodes) {
        os << "node " << n.id << " " << node_type_name(n.type) << ": " << escape_node_text(n.text)
           << "\n";
    }
    std::vector<const CpgEdge*> order;
    order.reserve(g.edges.size());
    for (const auto& e : g.edges) order.push_back(&e);
    std::sort(order.begin(), order.end(), [](const CpgEdge* a, const CpgEdge* b) {
        if (a->src != b->src) return a->src < b->src;
        if (a->dst != b->dst) return a->dst < b->dst;
        return edge_attr_name(a->attr) < edge_attr_name(b->attr);
    });
    for (const CpgEdge* e : order) {
        os << "edge " << e->src << " -> " << e->dst << " [" << edge_class_name(e->cls) << "/"
           << edge_attr_name(e->attr) << "]\n";
    }
    return os.str();
}

// ----------------------------- JSON interchange -----------------------------

inline nlohmann::json graph_to_json(const CodePropertyGraph& g, Language language,
                                    const std::string& code) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : g.nodes) {
        nodes.push_back({{"id", n.id},
                         {"type", std::string(node_type_name(n.type))},
                         {"text", n.text},
                         {"span", {n.start, n.end}}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges) {
        edges.push_back({{"src", e.src},
                         {"dst", e.dst},
                         {"class", std::string(edge_class_name(e.cls))},
                         {"attr", std::string(edge_attr_name(e.attr))}});
    }
    return nlohmann::json{{"id", g.source_id},
                          {"language", std::string(language_name(language))},
                          {"code", code},
                          {"nodes", std::move(nodes)},
                          {"edges", std::move(edges)}};
}

struct GraphRecord {
    CodePropertyGraph graph;
    Language language = Language::python;
    std::string code;
};

inline GraphRecord graph_from_json(const nlohmann::json& j) {
    GraphRecord rec;
    rec.graph.source_id = j.at("id").get<std::string>();
    const auto lang = language_from_name(j.at("language").get<std::string>());
    if (!lang) throw FormatError("unknown language in graph record");
    rec.language = *lang;
    rec.code = j.at("code").get<std::string>();
    for (const auto& jn : j.at("nodes")) {
        CpgNode n;
        n.id = jn.at("id").get<std::uint32_t>();
        const auto t = node_type_from_name(jn.at("type").get<std::string>());
        if (!t) throw FormatError("unknown node type in graph record");
        n.type = *t;
        n.text = jn.at("text").get<std::string>();
        n.start = jn.at("span").at(0).get<std::uint32_t>();
        n.end = jn.at("span").at(1).get<std::uint32_t>();
        rec.graph.nodes.push_back(std::move(n));
    }
    for (const auto& je : j.at("edges")) {
        CpgEdge e;
        e.src = je.at("src").get<std::uint32_t>();
        e.dst = je.at("dst").get<std::uint32_t>();
        const auto cls = edge_class_from_name(je.at("class").get<std::string>());
        const auto attr = edge_attr_from_name(je.at("attr").get<std::string>());
        if (!cls || !attr) throw FormatError("unknown edge class/attr in graph record");
        e.cls = *cls;
        e.attr = *attr;
        rec.graph.edges.push_back(e);
    }
    return rec;
}

/// Canonical structural form ignoring node text: node types in id order plus
/// sorted edge tuples. Two graphs that differ only in identifier spellings
/// share a canonical form (renaming-isomorphism check).
inline std::string canonical_form(const CodePropertyGraph& g) {
    std::ostringstream os;
    for (const auto& n : g.nodes) os << node_type_name(n.type) << ";";
    os << "|";
    std::vector<CpgEdge> sorted = g.edges;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& e : sorted) {
        os << e.src << ">" << e.dst << ":" << edge_class_name(e.cls) << "/" << edge_attr_name(e.attr)
           << ";";
    }
    return os.str();
}

}  // namespace cgb

#endif  // CGBRIDGE_CPG_HPP
