// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "restfix/http_method.hpp"
#include "restfix/python_ast.hpp"
#include "restfix/span.hpp"
#include "restfix/spec_model.hpp"

namespace restfix {

/// One piece of a statically resolved string: either literal text or an
/// unresolved sub-expression carrying its source text.
struct StringPart {
    bool known = false;
    std::string text;

    bool operator==(const StringPart&) const = default;
};

struct ResolvedString {
    std::vector<StringPart> parts;
    bool fully_known = true;

    /// Concatenation of all known parts; meaningful when fully_known.
    std::string known_text() const;

    bool operator==(const ResolvedString&) const = default;
};

struct ResolvedEntry {
    ResolvedString key;
    ResolvedString value;

    bool operator==(const ResolvedEntry&) const = default;
};

struct ResolvedMap {
    std::vector<ResolvedEntry> entries;
    bool has_unknown_spread = false;

    bool operator==(const ResolvedMap&) const = default;
};

enum class WarningKind { Skipped, UnresolvedUrl, ForwardBinding };

const char* to_string(WarningKind kind);

struct AnalysisWarning {
    WarningKind kind = WarningKind::Skipped;
    std::string message;
    std::optional<Span> span;

    bool operator==(const AnalysisWarning&) const = default;
};

/// A variable binding: name assigned the expression at arena index `value`
/// (-1 when the bound value is opaque, e.g. function parameters).
struct Binding {
    std::string name;
    int value = -1;
    int seq = 0;        // document-order statement index of the assignment
    Span span;          // span of the assigning statement
};

struct Scope {
    int function_node = -1;  // -1 for module scope
    std::vector<Binding> bindings;
};

struct SourceModel {
    std::string file_path;
    std::string text;
    std::vector<SyntaxNode> arena;
    int root = -1;
    std::vector<Scope> scopes;  // scopes[0] is the module scope
    std::vector<int> scope_of;  // arena index -> scope index
    std::vector<int> seq_of;    // arena index -> enclosing statement sequence

    const SyntaxNode& node(int index) const { return arena[index]; }
    std::string_view slice(int index) const {
        const SyntaxNode& n = arena[index];
        return std::string_view(text).substr(n.begin, n.end - n.begin);
    }
};

/// Parses source text and builds the binding table in one pass.
/// Throws SyntaxError with line/column on malformed input.
SourceModel parse_source(std::string file_path, std::string text);

/// Every string literal whose text contains `domain`, in document order.
std::vector<std::pair<std::string, Span>> find_api_literals(const SourceModel& model,
                                                            std::string_view domain);

/// Constant-folds the expression at arena index `expr` into string parts.
/// Unresolvable sub-expressions become Unknown parts; nothing throws.
ResolvedString resolve_string_expression(const SourceModel& model, int expr);

/// Resolves a map literal (or a name bound to one) into key/value pairs.
/// Throws NotAMapping when the expression cannot be traced to a map literal.
ResolvedMap resolve_mapping_expression(const SourceModel& model, int expr);

struct CallSite {
    HttpMethod method = HttpMethod::Get;
    ResolvedString url;
    std::optional<ResolvedMap> headers;
    std::optional<ResolvedMap> body;
    Span call_span;
    Span endpoint_def_span;
    std::optional<Span> header_def_span;
    std::optional<Span> body_def_span;
};

/// Finds HTTP-verb calls whose URL argument contains the spec domain and
/// resolves their URL, header, and body arguments.
std::pair<std::vector<CallSite>, std::vector<AnalysisWarning>> extract_call_sites(
    const SourceModel& model, const SpecModel& spec);

}  // namespace restfix
