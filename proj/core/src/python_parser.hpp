// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include "restfix/python_ast.hpp"

namespace restfix::detail {

struct ParseResult {
    std::vector<SyntaxNode> arena;
    int root = -1;  // Module node
};

/// Parses Python-subset source into a syntax tree. Unsupported constructs
/// become Opaque nodes with any parseable sub-expressions preserved as
/// children. Throws SyntaxError on malformed input (bad indentation,
/// unterminated strings, missing blocks).
ParseResult parse_python(std::string_view text);

}  // namespace restfix::detail
