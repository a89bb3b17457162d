// Copyright (c) 2026 CGBridge Contributors
// SPDX-License-Identifier: Apache-2.0
//
// Control-flow layer. Statement-level granularity: branch edges target the
// first statement of the taken block, a statement's post-successor is its
// next sibling in the same block (no escalation), and loops are closed by
// loop_back from the structurally last body statement. Unreachable
// statements still receive structural edges.
#ifndef CGBRIDGE_CFG_PASS_HPP
#define CGBRIDGE_CFG_PASS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cgbridge/cpg.hpp"

namespace cgb {

namespace detail {

class CfgBuilder {
public:
    explicit CfgBuilder(const CodePropertyGraph& g) : g_(g), view_(g) {}

    std::vector<CpgEdge> build() {
        // function_call targets: first definition wins
        for (const auto& n : g_.nodes) {
            if (n.type == NodeType::function_definition) {
                const auto name = view_.child_by_attr(n.id, EdgeAttr::has_name);
                if (name >= 0) {
                    const std::string& fname = g_.nodes[static_cast<std::size_t>(name)].text;
                    fn_by_name_.try_emplace(fname, n.id);
                }
            }
        }
        for (const auto& n : g_.nodes) {
            switch (n.type) {
                case NodeType::module:
                case NodeType::block:
                    sequence(n.id);
                    break;
                case NodeType::if_statement:
                    handle_if(n.id);
                    break;
                case NodeType::while_statement:
                    handle_while(n.id);
                    break;
                case NodeType::for_statement:
                    handle_for(n.id);
                    break;
                case NodeType::try_statement:
                    handle_try(n.id);
                    break;
                case NodeType::break_statement:
                    handle_break(n.id);
                    break;
                case NodeType::continue_statement:
                    handle_continue(n.id);
                    break;
                case NodeType::call:
                    handle_call(n.id);
                    break;
                default:
                    break;
            }
        }
        return edges_;
    }

private:
    std::vector<std::uint32_t> statements_of(std::uint32_t container) const {
        std::vector<std::uint32_t> out;
        for (auto c : view_.children(container)) {
            if (is_statement_type(view_.type(c))) out.push_back(c);
        }
        return out;
    }

    std::optional<std::uint32_t> first_statement(std::int64_t block) const {
        if (block < 0) return std::nullopt;
        const auto stmts = statements_of(static_cast<std::uint32_t>(block));
        if (stmts.empty()) return std::nullopt;
        return stmts.front();
    }

    std::optional<std::uint32_t> last_statement(std::int64_t block) const {
        if (block < 0) return std::nullopt;
        const auto stmts = statements_of(static_cast<std::uint32_t>(block));
        if (stmts.empty()) return std::nullopt;
        return stmts.back();
    }

    /// Next statement sibling within the enclosing block/module, if any.
    std::optional<std::uint32_t> post_successor(std::uint32_t stmt) const {
        const auto parent = view_.parent(stmt);
        if (parent < 0) return std::nullopt;
        const auto stmts = statements_of(static_cast<std::uint32_t>(parent));
        for (std::size_t i = 0; i + 1 < stmts.size(); ++i) {
            if (stmts[i] == stmt) return stmts[i + 1];
        }
        return std::nullopt;
    }

    std::optional<std::uint32_t> enclosing_loop(std::uint32_t node) const {
        std::int64_t p = view_.parent(node);
        while (p >= 0) {
            const auto t = view_.type(static_cast<std::uint32_t>(p));
            if (t == NodeType::while_statement || t == NodeType::for_statement) {
                return static_cast<std::uint32_t>(p);
            }
            if (t == NodeType::function_definition || t == NodeType::module) return std::nullopt;
            p = view_.parent(static_cast<std::uint32_t>(p));
        }
        return std::nullopt;
    }

    void add(std::uint32_t src, std::uint32_t dst, EdgeAttr attr) {
        if (seen_.insert({src, dst, attr}).second) {
            edges_.push_back({src, dst, EdgeClass::CFG, attr});
        }
    }

    void sequence(std::uint32_t container) {
        const auto stmts = statements_of(container);
        for (std::size_t i = 0; i + 1 < stmts.size(); ++i) {
            add(stmts[i], stmts[i + 1], EdgeAttr::sequential_execution);
        }
    }

    void handle_if(std::uint32_t node) {
        const auto cond = view_.child_by_attr(node, EdgeAttr::has_condition);
        if (cond >= 0) add(node, static_cast<std::uint32_t>(cond), EdgeAttr::condition_evaluation);
        if (const auto then_first = first_statement(view_.child_by_attr(node, EdgeAttr::has_then_body))) {
            add(node, *then_first, EdgeAttr::true_branch);
        }
        std::uint32_t head = node;
        for (auto elif : view_.children_by_attr(node, EdgeAttr::has_elif_branch)) {
            add(head, elif, EdgeAttr::alternate_condition_branch);
            const auto ec = view_.child_by_attr(elif, EdgeAttr::has_condition);
            if (ec >= 0) add(elif, static_cast<std::uint32_t>(ec), EdgeAttr::condition_evaluation);
            if (const auto ef = first_statement(view_.child_by_attr(elif, EdgeAttr::has_then_body))) {
                add(elif, *ef, EdgeAttr::true_branch);
            }
            head = elif;
        }
        const auto else_clause = view_.child_by_attr(node, EdgeAttr::has_else_body);
        if (else_clause >= 0) {
            if (const auto ff =
                    first_statement(view_.child_by_attr(static_cast<std::uint32_t>(else_clause), EdgeAttr::has_body))) {
                add(head, *ff, EdgeAttr::false_branch);
            }
        } else if (const auto succ = post_successor(node)) {
            add(head, *succ, EdgeAttr::condition_false_jump);
        }
    }

    void handle_while(std::uint32_t node) {
        const auto cond = view_.child_by_attr(node, EdgeAttr::has_condition);
        if (cond >= 0) add(node, static_cast<std::uint32_t>(cond), EdgeAttr::while_loop_condition);
        const auto body = view_.child_by_attr(node, EdgeAttr::has_body);
        if (const auto first = first_statement(body)) add(node, *first, EdgeAttr::while_loop_body);
        if (const auto last = last_statement(body)) add(*last, node, EdgeAttr::loop_back);
        if (const auto succ = post_successor(node)) add(node, *succ, EdgeAttr::loop_exit);
    }

    void handle_for(std::uint32_t node) {
        const auto iterable = view_.child_by_attr(node, EdgeAttr::has_value);
        if (iterable >= 0) {
            add(node, static_cast<std::uint32_t>(iterable), EdgeAttr::for_loop_iteration_range);
        }
        const auto body = view_.child_by_attr(node, EdgeAttr::has_body);
        if (const auto first = first_statement(body)) add(node, *first, EdgeAttr::for_loop_body);
        if (const auto last = last_statement(body)) add(*last, node, EdgeAttr::loop_back);
        if (const auto succ = post_successor(node)) add(node, *succ, EdgeAttr::loop_exit);
    }

    void handle_try(std::uint32_t node) {
        const auto body = view_.child_by_attr(node, EdgeAttr::has_body);
        if (const auto first = first_statement(body)) add(node, *first, EdgeAttr::try_block);

        std::optional<std::uint32_t> finally_clause;
        std::vector<std::uint32_t> handlers;
        for (auto c : view_.children(node)) {
            if (view_.type(c) == NodeType::except_clause) handlers.push_back(c);
            if (view_.type(c) == NodeType::finally_clause) finally_clause = c;
        }
        for (auto h : handlers) {
            add(node, h, EdgeAttr::exception_handler);
            if (const auto hf = first_statement(view_.child_by_attr(h, EdgeAttr::has_body))) {
                add(h, *hf, EdgeAttr::exception_handler);
            }
        }
        if (finally_clause) {
            add(node, *finally_clause, EdgeAttr::finally_block);
            if (const auto ff =
                    first_statement(view_.child_by_attr(*finally_clause, EdgeAttr::has_body))) {
                add(*finally_clause, *ff, EdgeAttr::finally_block);
            }
        }
        // normal/handled exits converge on the finally clause when present,
        // otherwise on the statement after the try
        std::optional<std::uint32_t> exit_target = finally_clause;
        if (!exit_target) exit_target = post_successor(node);
        if (exit_target) {
            if (const auto last = last_statement(body)) add(*last, *exit_target, EdgeAttr::block_exit);
            for (auto h : handlers) {
                if (const auto hl = last_statement(view_.child_by_attr(h, EdgeAttr::has_body))) {
                    add(*hl, *exit_target, EdgeAttr::block_exit);
                }
            }
        }
    }

    void handle_break(std::uint32_t node) {
        const auto loop = enclosing_loop(node);
        if (!loop) return;
        if (const auto succ = post_successor(*loop)) {
            add(node, *succ, EdgeAttr::break_jump);
        } else {
            // nothing follows the loop: exit flows through the loop head
            add(node, *loop, EdgeAttr::break_jump);
        }
    }

    void handle_continue(std::uint32_t node) {
        if (const auto loop = enclosing_loop(node)) add(node, *loop, EdgeAttr::loop_back);
    }

    void handle_call(std::uint32_t node) {
        const auto& kids = view_.children(node);
        if (kids.empty()) return;
        const auto callee = kids.front();
        if (view_.type(callee) != NodeType::identifier) return;
        const auto it = fn_by_name_.find(g_.nodes[callee].text);
        if (it != fn_by_name_.end()) add(node, it->second, EdgeAttr::function_call);
    }

    const CodePropertyGraph& g_;
    CpgView view_;
    std::map<std::string, std::uint32_t> fn_by_name_;
    std::vector<CpgEdge> edges_;
    std::set<std::tuple<std::uint32_t, std::uint32_t, EdgeAttr>> seen_;
};

}  // namespace detail

/// Returns a copy of the graph with CFG-class edges appended.
inline CodePropertyGraph attach_cfg_edges(const CodePropertyGraph& graph) {
    CodePropertyGraph out = graph;
    detail::CfgBuilder builder(graph);
    for (auto& e : builder.build()) out.edges.push_back(e);
    return out;
}

}  // namespace cgb

#endif  // CGBRIDGE_CFG_PASS_HPP
