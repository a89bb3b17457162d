// Copyright (c) 2026 CGBridge Contributors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded identifier obfuscation: function names, parameters, and local
// variables are consistently renamed per lexical scope; names bound by
// imports, attribute members, keyword-argument names, builtins, and
// unresolved globals are preserved.
#ifndef CGBRIDGE_OBFUSCATE_HPP
#define CGBRIDGE_OBFUSCATE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cgbridge/common.hpp"
#include "cgbridge/syntax_tree.hpp"

namespace cgb {

namespace detail {

inline const std::set<std::string>& python_builtins() {
    static const std::set<std::string> names = {
        "print",     "len",       "range",     "abs",        "min",       "max",
        "sum",       "int",       "float",     "str",        "bool",      "list",
        "dict",      "set",       "tuple",     "enumerate",  "zip",       "sorted",
        "reversed",  "map",       "filter",    "isinstance", "type",      "repr",
        "input",     "open",      "round",     "divmod",     "pow",       "any",
        "all",       "iter",      "next",      "ord",        "chr",       "hash",
        "Exception", "ValueError", "TypeError", "KeyError",  "IndexError",
        "ZeroDivisionError", "RuntimeError", "StopIteration", "AttributeError",
        "NameError", "OSError",
    };
    return names;
}

class Renamer {
public:
    Renamer(const SyntaxTree& tree, std::uint64_t seed) : tree_(tree), rng_(Rng::derive(seed, 0x0bf)) {}

    std::string run() {
        build_scopes(tree_.root(), make_scope(-1));
        collect_existing_names();
        assign_fresh_names();
        return apply_edits();
    }

private:
    enum class BindKind { function, variable, imported };

    struct Scope {
        int parent = -1;
        std::map<std::string, BindKind> bindings;
    };

    int make_scope(int parent) {
        scopes_.push_back({parent, {}});
        return static_cast<int>(scopes_.size() - 1);
    }

    void bind(int scope, const std::string& name, BindKind kind) {
        auto [it, inserted] = scopes_[scope].bindings.emplace(name, kind);
        if (inserted) order_.push_back({scope, name});
    }

    // --- pass A: scope tree + bindings ---

    void build_scopes(int node, int scope) {
        const SyntaxNode& n = tree_.node(node);
        if (n.kind == "function_definition") {
            for (int c : n.children) {
                if (tree_.node(c).field == "name") bind(scope, tree_.text_of(c), BindKind::function);
            }
            const int inner = make_scope(scope);
            for (int c : n.children) {
                const SyntaxNode& cn = tree_.node(c);
                if (cn.field == "parameters") {
                    for (int p : cn.children) {
                        const SyntaxNode& pn = tree_.node(p);
                        if (pn.kind == "identifier") {
                            bind(inner, tree_.text_of(p), BindKind::variable);
                        } else if (pn.kind == "default_parameter") {
                            for (int pc : pn.children) {
                                if (tree_.node(pc).field == "name") {
                                    bind(inner, tree_.text_of(pc), BindKind::variable);
                                } else {
                                    build_scopes(pc, scope);  // default value: enclosing scope
                                }
                            }
                        }
                    }
                } else if (cn.field == "body") {
                    build_scopes(c, inner);
                }
            }
            return;
        }
        if (n.kind == "import_statement" || n.kind == "import_from_statement") {
            collect_import_bindings(node, scope);
            return;
        }
        if (n.kind == "assignment" || n.kind == "augmented_assignment") {
            for (int c : n.children) {
                if (tree_.node(c).field == "left") bind_targets(c, scope);
            }
        } else if (n.kind == "for_statement") {
            for (int c : n.children) {
                if (tree_.node(c).field == "left") bind_targets(c, scope);
            }
        } else if (n.kind == "except_clause") {
            for (int c : n.children) {
                if (tree_.node(c).field == "alias") bind(scope, tree_.text_of(c), BindKind::variable);
            }
        }
        for (int c : n.children) build_scopes(c, scope);
    }

    void bind_targets(int node, int scope) {
        const SyntaxNode& n = tree_.node(node);
        if (n.kind == "identifier") {
            bind(scope, tree_.text_of(node), BindKind::variable);
        } else if (n.kind == "pattern_list") {
            for (int c : n.children) bind_targets(c, scope);
        }
        // subscript/attribute stores mutate existing objects; no new binding
    }

    void collect_import_bindings(int node, int scope) {
        const SyntaxNode& n = tree_.node(node);
        for (int c : n.children) {
            const SyntaxNode& cn = tree_.node(c);
            if (cn.field == "module_name") continue;
            if (cn.kind == "aliased_import") {
                for (int ac : cn.children) {
                    if (tree_.node(ac).field == "alias") bind(scope, tree_.text_of(ac), BindKind::imported);
                }
            } else if (cn.kind == "identifier") {
                bind(scope, tree_.text_of(c), BindKind::imported);
            } else if (cn.kind == "dotted_name") {
                // `import a.b` binds the first component
                if (!cn.children.empty()) bind(scope, tree_.text_of(cn.children.front()), BindKind::imported);
            }
        }
    }

    // --- occurrence classification ---

    bool under_import(int node) const {
        for (int p = tree_.node(node).parent; p >= 0; p = tree_.node(p).parent) {
            const std::string& k = tree_.node(p).kind;
            if (k == "import_statement" || k == "import_from_statement") return true;
        }
        return false;
    }

    /// Scope an identifier occurrence resolves in (lexical rules; parameter
    /// names live in the function scope, default values in the enclosing).
    int occurrence_scope(int node) const {
        bool in_default_value = false;
        int cur = node;
        while (true) {
            const int p = tree_.node(cur).parent;
            if (p < 0) return 0;
            const SyntaxNode& pn = tree_.node(p);
            if (pn.kind == "default_parameter" && tree_.node(cur).field == "value") {
                in_default_value = true;
            }
            if (pn.kind == "function_definition") {
                const std::string& via = tree_.node(cur).field;
                const int fn_scope = scope_of_function(p);
                if (via == "name") return scopes_[fn_scope].parent;
                if (via == "parameters") {
                    return in_default_value ? scopes_[fn_scope].parent : fn_scope;
                }
                return fn_scope;  // body
            }
            cur = p;
        }
    }

    /// Scope created for a function_definition node: scopes are created in
    /// pre-order, so replaying the traversal identifies it.
    int scope_of_function(int fn_node) const {
        // cache on first use
        if (fn_scope_cache_.empty()) {
            int counter = 0;
            build_fn_scope_cache(tree_.root(), counter);
        }
        return fn_scope_cache_.at(fn_node);
    }

    void build_fn_scope_cache(int node, int& counter) const {
        const SyntaxNode& n = tree_.node(node);
        if (n.kind == "function_definition") {
            fn_scope_cache_[node] = ++counter;  // scope 0 is the module
        }
        for (int c : n.children) build_fn_scope_cache(c, counter);
    }

    // --- fresh names ---

    void collect_existing_names() {
        for (std::size_t i = 0; i < tree_.size(); ++i) {
            if (tree_.node(static_cast<int>(i)).kind == "identifier") {
                taken_.insert(tree_.text_of(static_cast<int>(i)));
            }
        }
        const auto& builtins = python_builtins();
        taken_.insert(builtins.begin(), builtins.end());
    }

    std::string fresh_name(const std::string& prefix) {
        static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
        while (true) {
            std::string name = prefix;
            name += alphabet[rng_.below(26)];
            for (int i = 0; i < 3; ++i) name += alphabet[rng_.below(36)];
            if (taken_.insert(name).second) return name;
        }
    }

    void assign_fresh_names() {
        for (const auto& [scope, name] : order_) {
            const BindKind kind = scopes_[scope].bindings.at(name);
            if (kind == BindKind::imported) continue;
            const std::string prefix = kind == BindKind::function ? "fn_" : "v_";
            fresh_[{scope, name}] = fresh_name(prefix);
        }
    }

    // --- apply ---

    std::string apply_edits() {
        struct Edit {
            std::uint32_t start, end;
            std::string text;
        };
        std::vector<Edit> edits;
        for (std::size_t i = 0; i < tree_.size(); ++i) {
            const int node = static_cast<int>(i);
            const SyntaxNode& n = tree_.node(node);
            if (n.kind != "identifier") continue;
            if (under_import(node)) continue;
            const int parent = n.parent;
            if (parent >= 0) {
                const std::string& pk = tree_.node(parent).kind;
                if (pk == "attribute" && n.field == "attribute") continue;
                if (pk == "keyword_argument" && n.field == "name") continue;
            }
            const std::string name = tree_.text_of(node);
            int scope = occurrence_scope(node);
            while (scope >= 0 && !scopes_[scope].bindings.count(name)) scope = scopes_[scope].parent;
            if (scope < 0) continue;  // unresolved global: preserve
            const auto it = fresh_.find({scope, name});
            if (it == fresh_.end()) continue;  // imported binding
            edits.push_back({n.start, n.end, it->second});
        }
        std::sort(edits.begin(), edits.end(),
                  [](const Edit& a, const Edit& b) { return a.start > b.start; });
        std::string out = tree_.source();
        for (const auto& e : edits) {
            out.replace(e.start, e.end - e.start, e.text);
        }
        return out;
    }

    const SyntaxTree& tree_;
    Rng rng_;
    std::vector<Scope> scopes_;
    std::vector<std::pair<int, std::string>> order_;
    std::set<std::string> taken_;
    std::map<std::pair<int, std::string>, std::string> fresh_;
    mutable std::map<int, int> fn_scope_cache_;
};

}  // namespace detail

/// Renames every locally-defined function name, parameter, and local variable
/// to a fresh random identifier, deterministically per seed. The result
/// re-parses to an isomorphic tree.
inline SourceUnit obfuscate_identifiers(const SourceUnit& unit, std::uint64_t seed) {
    const SyntaxTree tree = parse_source(unit);
    detail::Renamer renamer(tree, seed);
    SourceUnit out = unit;
    out.code = renamer.run();
    parse_source(out);  // renaming must preserve parseability
    return out;
}

}  // namespace cgb

#endif  // CGBRIDGE_OBFUSCATE_HPP
