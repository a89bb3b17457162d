// Copyright (c) 2026 CGBridge Contributors
// SPDX-License-Identifier: Apache-2.0
//
// Node and edge taxonomies of the code property graph: 34 node types and
// 30 edge attributes (10 AST, 18 CFG, 2 DFG). Comments never reach graphs
// (dropped during extraction), so they have no node type.
#ifndef CGBRIDGE_TAXONOMY_HPP
#define CGBRIDGE_TAXONOMY_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "cgbridge/common.hpp"

namespace cgb {

enum class NodeType : std::uint8_t {
    module,
    function_definition,
    identifier,
    parameters,
    default_parameter,
    none,
    block,
    try_statement,
    if_statement,
    comparison_operator,
    expression_statement,
    assignment,
    call,
    argument_list,
    for_statement,
    integer,
    binary_operator,
    subscript,
    pattern_list,
    expression_list,
    while_statement,
    parenthesized_expression,
    string,
    string_start,
    string_content,
    string_end,
    elif_clause,
    else_clause,
    augmented_assignment,
    break_statement,
    continue_statement,
    return_statement,
    except_clause,
    finally_clause,
};

inline constexpr std::size_t kNodeTypeCount = 34;

inline constexpr std::array<std::string_view, kNodeTypeCount> kNodeTypeNames = {
    "module",
    "function_definition",
    "identifier",
    "parameters",
    "default_parameter",
    "none",
    "block",
    "try_statement",
    "if_statement",
    "comparison_operator",
    "expression_statement",
    "assignment",
    "call",
    "argument_list",
    "for_statement",
    "integer",
    "binary_operator",
    "subscript",
    "pattern_list",
    "expression_list",
    "while_statement",
    "parenthesized_expression",
    "string",
    "string_start",
    "string_content",
    "string_end",
    "elif_clause",
    "else_clause",
    "augmented_assignment",
    "break_statement",
    "continue_statement",
    "return_statement",
    "except_clause",
    "finally_clause",
};

inline std::string_view node_type_name(NodeType t) {
    return kNodeTypeNames[static_cast<std::size_t>(t)];
}

inline std::optional<NodeType> node_type_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kNodeTypeCount; ++i) {
        if (kNodeTypeNames[i] == name) return static_cast<NodeType>(i);
    }
    return std::nullopt;
}

enum class EdgeClass : std::uint8_t { AST, CFG, DFG };

inline std::string_view edge_class_name(EdgeClass c) {
    switch (c) {
        case EdgeClass::AST: return "AST";
        case EdgeClass::CFG: return "CFG";
        case EdgeClass::DFG: return "DFG";
    }
    return "";
}

inline std::optional<EdgeClass> edge_class_from_name(std::string_view name) {
    if (name == "AST") return EdgeClass::AST;
    if (name == "CFG") return EdgeClass::CFG;
    if (name == "DFG") return EdgeClass::DFG;
    return std::nullopt;
}

// Attribute ids are contiguous per class; the ordering doubles as the class
// index space of the edge-type prediction head (NO_EDGE comes after all 30).
enum class EdgeAttr : std::uint8_t {
    // AST (10)
    has_name,
    has_parameters,
    has_body,
    has_condition,
    has_then_body,
    has_else_body,
    has_elif_branch,
    has_target,
    has_value,
    contains,
    // CFG (18)
    sequential_execution,
    true_branch,
    false_branch,
    alternate_condition_branch,
    condition_evaluation,
    for_loop_body,
    for_loop_iteration_range,
    while_loop_body,
    while_loop_condition,
    try_block,
    exception_handler,
    finally_block,
    block_exit,
    loop_exit,
    loop_back,
    break_jump,
    condition_false_jump,
    function_call,
    // DFG (2)
    contributes_to,
    flows_to,
};

inline constexpr std::size_t kEdgeAttrCount = 30;
inline constexpr std::size_t kAstAttrCount = 10;
inline constexpr std::size_t kCfgAttrCount = 18;
inline constexpr std::size_t kDfgAttrCount = 2;
/// Label space of the edge-type classifier: 30 attrs + NO_EDGE.
inline constexpr std::size_t kEdgeLabelCount = kEdgeAttrCount + 1;
inline constexpr std::size_t kNoEdgeLabel = kEdgeAttrCount;

inline constexpr std::array<std::string_view, kEdgeAttrCount> kEdgeAttrNames = {
    "has_name",
    "has_parameters",
    "has_body",
    "has_condition",
    "has_then_body",
    "has_else_body",
    "has_elif_branch",
    "has_target",
    "has_value",
    "contains",
    "sequential_execution",
    "true_branch",
    "false_branch",
    "alternate_condition_branch",
    "condition_evaluation",
    "for_loop_body",
    "for_loop_iteration_range",
    "while_loop_body",
    "while_loop_condition",
    "try_block",
    "exception_handler",
    "finally_block",
    "block_exit",
    "loop_exit",
    "loop_back",
    "break_jump",
    "condition_false_jump",
    "function_call",
    "contributes_to",
    "flows_to",
};

inline std::string_view edge_attr_name(EdgeAttr a) {
    return kEdgeAttrNames[static_cast<std::size_t>(a)];
}

inline std::optional<EdgeAttr> edge_attr_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kEdgeAttrCount; ++i) {
        if (kEdgeAttrNames[i] == name) return static_cast<EdgeAttr>(i);
    }
    return std::nullopt;
}

inline EdgeClass edge_attr_class(EdgeAttr a) {
    const auto i = static_cast<std::size_t>(a);
    if (i < kAstAttrCount) return EdgeClass::AST;
    if (i < kAstAttrCount + kCfgAttrCount) return EdgeClass::CFG;
    return EdgeClass::DFG;
}

/// Maps grammar node kinds onto the taxonomy. Kinds may legitimately miss
/// (e.g. import_statement parses for obfuscation but cannot enter a graph).
class KindMap {
public:
    void add(std::string kind, NodeType type) { map_.emplace(std::move(kind), type); }

    std::optional<NodeType> lookup(std::string_view kind) const {
        auto it = map_.find(std::string(kind));
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::unordered_map<std::string, NodeType> map_;
};

/// Built-in mapping for the Python grammar. Kind names coincide with the
/// taxonomy except unary_operator, which folds into binary_operator so that
/// expressions like `-a` stay representable.
inline const KindMap& python_kind_map() {
    static const KindMap map = [] {
        KindMap m;
        for (std::size_t i = 0; i < kNodeTypeCount; ++i) {
            m.add(std::string(kNodeTypeNames[i]), static_cast<NodeType>(i));
        }
        m.add("unary_operator", NodeType::binary_operator);
        return m;
    }();
    return map;
}

}  // namespace cgb

#endif  // CGBRIDGE_TAXONOMY_HPP
