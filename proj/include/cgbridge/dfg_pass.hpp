// Copyright (c) 2026 CGBridge Contributors
// SPDX-License-Identifier: Apache-2.0
//
// Data-flow layer via intraprocedural reaching definitions. flows_to runs
// from a defining identifier node to each use it reaches before
// redefinition; contributes_to runs from every identifier operand in an
// assignment's value expression to each identifier target. Scopes are the
// module and each function body (parameters are entry definitions); loops
// iterate to a fixpoint, branches merge by union, break/continue/return end
// the local flow and feed the appropriate join point. Unresolved names make
// no flow edges.
#ifndef CGBRIDGE_DFG_PASS_HPP
#define CGBRIDGE_DFG_PASS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cgbridge/cpg.hpp"

namespace cgb {

namespace detail {

class DfgBuilder {
public:
    explicit DfgBuilder(const CodePropertyGraph& g) : g_(g), view_(g) {}

    std::vector<CpgEdge> build() {
        analyze_scope(0, {});  // module
        for (const auto& n : g_.nodes) {
            if (n.type == NodeType::function_definition) {
                State entry;
                for (auto p : parameter_names(n.id)) entry[g_.nodes[p].text] = {p};
                analyze_scope_body(view_.child_by_attr(n.id, EdgeAttr::has_body), entry);
            }
        }
        std::vector<CpgEdge> out;
        out.reserve(edges_.size());
        for (const auto& [src, dst, attr] : edges_) out.push_back({src, dst, EdgeClass::DFG, attr});
        return out;
    }

private:
    // name -> set of defining identifier node ids (ordered for determinism)
    using State = std::map<std::string, std::set<std::uint32_t>>;

    struct LoopCtx {
        State break_states;
        State continue_states;
    };

    static void merge_into(State& into, const State& from) {
        for (const auto& [name, defs] : from) into[name].insert(defs.begin(), defs.end());
    }

    void add(std::uint32_t src, std::uint32_t dst, EdgeAttr attr) { edges_.insert({src, dst, attr}); }

    std::vector<std::uint32_t> parameter_names(std::uint32_t fn) const {
        std::vector<std::uint32_t> out;
        const auto params = view_.child_by_attr(fn, EdgeAttr::has_parameters);
        if (params < 0) return out;
        for (auto c : view_.children(static_cast<std::uint32_t>(params))) {
            if (view_.type(c) == NodeType::identifier) {
                out.push_back(c);
            } else if (view_.type(c) == NodeType::default_parameter) {
                const auto name = view_.child_by_attr(c, EdgeAttr::has_name);
                if (name >= 0) out.push_back(static_cast<std::uint32_t>(name));
            }
        }
        return out;
    }

    /// Identifier use nodes within an expression subtree, in id order.
    /// Nested function bodies cannot occur inside expressions here.
    void collect_uses(std::uint32_t node, std::vector<std::uint32_t>& out) const {
        if (view_.type(node) == NodeType::identifier) {
            out.push_back(node);
            return;
        }
        for (auto c : view_.children(node)) collect_uses(c, out);
    }

    void emit_uses(std::uint32_t expr, const State& state, std::vector<std::uint32_t>* uses_out = nullptr) {
        std::vector<std::uint32_t> uses;
        collect_uses(expr, uses);
        for (auto u : uses) {
            const auto it = state.find(g_.nodes[u].text);
            if (it != state.end()) {
                for (auto d : it->second) add(d, u, EdgeAttr::flows_to);
            }
        }
        if (uses_out) *uses_out = std::move(uses);
    }

    std::vector<std::uint32_t> target_identifiers(std::int64_t target) const {
        std::vector<std::uint32_t> out;
        if (target < 0) return out;
        const auto id = static_cast<std::uint32_t>(target);
        if (view_.type(id) == NodeType::identifier) {
            out.push_back(id);
        } else if (view_.type(id) == NodeType::pattern_list) {
            for (auto c : view_.children(id)) {
                if (view_.type(c) == NodeType::identifier) out.push_back(c);
            }
        }
        return out;
    }

    void analyze_scope(std::uint32_t container, State entry) {
        State state = std::move(entry);
        for (auto c : view_.children(container)) {
            if (is_statement_type(view_.type(c))) state = walk_statement(c, std::move(state));
        }
    }

    void analyze_scope_body(std::int64_t block, State entry) {
        if (block < 0) return;
        analyze_scope(static_cast<std::uint32_t>(block), std::move(entry));
    }

    State walk_block(std::int64_t block, State in) {
        if (block < 0) return in;
        for (auto c : view_.children(static_cast<std::uint32_t>(block))) {
            if (is_statement_type(view_.type(c))) in = walk_statement(c, std::move(in));
        }
        return in;
    }

    State walk_statement(std::uint32_t stmt, State in) {
        switch (view_.type(stmt)) {
            case NodeType::expression_statement: {
                const auto& kids = view_.children(stmt);
                if (kids.empty()) return in;
                return walk_expression_statement(kids.front(), std::move(in));
            }
            case NodeType::return_statement: {
                const auto value = view_.child_by_attr(stmt, EdgeAttr::has_value);
                if (value >= 0) emit_uses(static_cast<std::uint32_t>(value), in);
                return {};  // local flow ends
            }
            case NodeType::break_statement:
                if (!loops_.empty()) merge_into(loops_.back()->break_states, in);
                return {};
            case NodeType::continue_statement:
                if (!loops_.empty()) merge_into(loops_.back()->continue_states, in);
                return {};
            case NodeType::if_statement:
                return walk_if(stmt, std::move(in));
            case NodeType::while_statement:
                return walk_while(stmt, std::move(in));
            case NodeType::for_statement:
                return walk_for(stmt, std::move(in));
            case NodeType::try_statement:
                return walk_try(stmt, std::move(in));
            case NodeType::function_definition: {
                // default values evaluate in the enclosing scope; the body is
                // a separate scope and the name is not a tracked variable
                const auto params = view_.child_by_attr(stmt, EdgeAttr::has_parameters);
                if (params >= 0) {
                    for (auto c : view_.children(static_cast<std::uint32_t>(params))) {
                        if (view_.type(c) == NodeType::default_parameter) {
                            const auto value = view_.child_by_attr(c, EdgeAttr::has_value);
                            if (value >= 0) emit_uses(static_cast<std::uint32_t>(value), in);
                        }
                    }
                }
                return in;
            }
            default:
                return in;
        }
    }

    State walk_expression_statement(std::uint32_t inner, State in) {
        const auto type = view_.type(inner);
        if (type == NodeType::assignment || type == NodeType::augmented_assignment) {
            const auto target = view_.child_by_attr(inner, EdgeAttr::has_target);
            const auto value = view_.child_by_attr(inner, EdgeAttr::has_value);
            const auto targets = target_identifiers(target);

            if (type == NodeType::augmented_assignment) {
                // target reads its previous value first
                for (auto t : targets) {
                    const auto it = in.find(g_.nodes[t].text);
                    if (it != in.end()) {
                        for (auto d : it->second) add(d, t, EdgeAttr::flows_to);
                    }
                }
            }
            std::vector<std::uint32_t> value_uses;
            if (value >= 0) emit_uses(static_cast<std::uint32_t>(value), in, &value_uses);
            if (target >= 0 && targets.empty()) {
                // non-identifier target (e.g. subscript store): reads only
                emit_uses(static_cast<std::uint32_t>(target), in);
            }
            for (auto u : value_uses) {
                for (auto t : targets) add(u, t, EdgeAttr::contributes_to);
            }
            for (auto t : targets) in[g_.nodes[t].text] = {t};
            return in;
        }
        emit_uses(inner, in);
        return in;
    }

    State walk_if(std::uint32_t node, State in) {
        const auto cond = view_.child_by_attr(node, EdgeAttr::has_condition);
        if (cond >= 0) emit_uses(static_cast<std::uint32_t>(cond), in);

        std::vector<State> outs;
        outs.push_back(walk_block(view_.child_by_attr(node, EdgeAttr::has_then_body), in));
        for (auto elif : view_.children_by_attr(node, EdgeAttr::has_elif_branch)) {
            const auto ec = view_.child_by_attr(elif, EdgeAttr::has_condition);
            if (ec >= 0) emit_uses(static_cast<std::uint32_t>(ec), in);
            outs.push_back(walk_block(view_.child_by_attr(elif, EdgeAttr::has_then_body), in));
        }
        const auto else_clause = view_.child_by_attr(node, EdgeAttr::has_else_body);
        State merged;
        if (else_clause >= 0) {
            outs.push_back(
                walk_block(view_.child_by_attr(static_cast<std::uint32_t>(else_clause), EdgeAttr::has_body), in));
        } else {
            merged = in;  // all-false path falls through
        }
        for (const auto& o : outs) merge_into(merged, o);
        return merged;
    }

    State walk_while(std::uint32_t node, State in) {
        const auto cond = view_.child_by_attr(node, EdgeAttr::has_condition);
        const auto body = view_.child_by_attr(node, EdgeAttr::has_body);
        State head = in;
        while (true) {
            if (cond >= 0) emit_uses(static_cast<std::uint32_t>(cond), head);
            LoopCtx ctx;
            loops_.push_back(&ctx);
            State body_out = walk_block(body, head);
            loops_.pop_back();
            State next = in;
            merge_into(next, body_out);
            merge_into(next, ctx.continue_states);
            if (next == head) {
                State exit = head;
                merge_into(exit, ctx.break_states);
                return exit;
            }
            head = std::move(next);
        }
    }

    State walk_for(std::uint32_t node, State in) {
        const auto iterable = view_.child_by_attr(node, EdgeAttr::has_value);
        if (iterable >= 0) emit_uses(static_cast<std::uint32_t>(iterable), in);
        const auto targets = target_identifiers(view_.child_by_attr(node, EdgeAttr::has_target));
        const auto body = view_.child_by_attr(node, EdgeAttr::has_body);
        State head = in;
        while (true) {
            State iter_state = head;
            for (auto t : targets) iter_state[g_.nodes[t].text] = {t};
            LoopCtx ctx;
            loops_.push_back(&ctx);
            State body_out = walk_block(body, iter_state);
            loops_.pop_back();
            State next = in;
            merge_into(next, body_out);
            merge_into(next, ctx.continue_states);
            if (next == head) {
                State exit = head;
                merge_into(exit, ctx.break_states);
                return exit;
            }
            head = std::move(next);
        }
    }

    State walk_try(std::uint32_t node, State in) {
        const auto body = view_.child_by_attr(node, EdgeAttr::has_body);
        // an exception may fire after any prefix of the try body
        State handler_base = in;
        State s = in;
        if (body >= 0) {
            for (auto c : view_.children(static_cast<std::uint32_t>(body))) {
                if (!is_statement_type(view_.type(c))) continue;
                s = walk_statement(c, std::move(s));
                merge_into(handler_base, s);
            }
        }
        State merged = s;
        std::optional<std::uint32_t> finally_clause;
        for (auto c : view_.children(node)) {
            if (view_.type(c) == NodeType::finally_clause) finally_clause = c;
            if (view_.type(c) != NodeType::except_clause) continue;
            State h = handler_base;
            for (auto hc : view_.children(c)) {
                if (view_.incoming_attr(hc) == EdgeAttr::has_name) {
                    h[g_.nodes[hc].text] = {hc};  // except ... as name
                } else if (view_.incoming_attr(hc) == EdgeAttr::contains) {
                    emit_uses(hc, handler_base);  // exception type expression
                }
            }
            merge_into(merged, walk_block(view_.child_by_attr(c, EdgeAttr::has_body), h));
        }
        if (finally_clause) {
            return walk_block(view_.child_by_attr(*finally_clause, EdgeAttr::has_body), merged);
        }
        return merged;
    }

    const CodePropertyGraph& g_;
    CpgView view_;
    std::vector<LoopCtx*> loops_;
    std::set<std::tuple<std::uint32_t, std::uint32_t, EdgeAttr>> edges_;
};

}  // namespace detail

/// Returns a copy of the graph with DFG-class edges appended.
inline CodePropertyGraph attach_dfg_edges(const CodePropertyGraph& graph) {
    CodePropertyGraph out = graph;
    detail::DfgBuilder builder(graph);
    for (auto& e : builder.build()) out.edges.push_back(e);
    return out;
}

}  // namespace cgb

#endif  // CGBRIDGE_DFG_PASS_HPP
