// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "restfix/span.hpp"

namespace restfix {

/// Node kinds for the tolerant Python-subset syntax tree. Constructs outside
/// the supported subset parse into Opaque nodes whose children are still
/// visited by call-site scans, so data flow degrades instead of failing.
enum class NodeKind {
    Module,       // children: statements
    FunctionDef,  // text: name; labels: parameter names; children: body
    Assign,       // labels: target names; children: [value]
    ExprStmt,     // children: [expr]
    Return,       // children: [] or [expr]
    OpaqueStmt,   // text: leading keyword or ""; children: salvaged exprs/body
    Call,         // children: [callee, args...]; labels align with children
                  // (arg labels: "" positional, kwarg name, "*", "**")
    Name,         // text: identifier
    Attribute,    // text: attribute name; children: [base]
    BinOpAdd,     // children: [lhs, rhs]
    StringLit,    // text: decoded value
    FString,      // children: FStringText chunks and hole expressions
    FStringText,  // text: decoded literal chunk
    NumberLit,    // text: canonical decimal rendering
    BoolLit,      // text: "true" | "false"
    NoneLit,      // text: "null"
    Dict,         // children: DictEntry / DictSpread nodes
    DictEntry,    // children: [key, value]
    DictSpread,   // children: [expr]
    DictMerge,    // synthetic fold of x.update(...); children: [base, operand...]
    OpaqueExpr,   // text: operator or note; children: salvaged sub-exprs
};

struct SyntaxNode {
    NodeKind kind = NodeKind::OpaqueExpr;
    std::string text;
    Span span;
    std::size_t begin = 0;  // byte offsets into the source text
    std::size_t end = 0;
    std::vector<int> children;
    std::vector<std::string> labels;
};

const char* to_string(NodeKind kind);

}  // namespace restfix
