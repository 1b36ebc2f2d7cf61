// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace restfix {

/// Malformed specification document (YAML/JSON could not be parsed).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structurally invalid specification: no domain, duplicate endpoints,
/// unsupported HTTP method, and similar contract violations.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad path template or prompt template (unbalanced braces, empty
/// parameter name, missing placeholder).
class TemplateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Client source file rejected by the tokenizer/parser.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& message, int line, int column)
        : std::runtime_error(message + " (line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// An expression could not be traced back to a map literal.
class NotAMapping : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A repair prompt was requested for a report with no deviations.
class EmptyReport : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Corpus manifest problems: missing files, duplicate ids, unknown categories.
class ManifestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// LLM backend failure (transport error, timeout, bad response shape).
class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace restfix
