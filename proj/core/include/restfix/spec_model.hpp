// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "restfix/http_method.hpp"
#include "restfix/scalar.hpp"

namespace restfix {

// ---------------------------------------------------------------------------
// Path templates

struct PathSegment {
    bool is_param = false;
    std::string text;  // literal text, or parameter name when is_param

    friend bool operator==(const PathSegment&, const PathSegment&) = default;
};

struct PathTemplate {
    std::vector<PathSegment> segments;

    /// Renders back to "/seg/{param}/..." form ("/" for the empty template).
    std::string to_string() const;

    friend bool operator==(const PathTemplate&, const PathTemplate&) = default;
};

/// Splits "/a/{id}/b" into segments; "{name}" becomes a parameter, anything
/// else a literal. A trailing slash is dropped. Throws TemplateError on
/// unbalanced braces or an empty parameter name.
PathTemplate parse_path_template(std::string_view raw);

// ---------------------------------------------------------------------------
// Specification model

struct BodyField {
    std::string name;
    std::optional<ScalarValue> fixed_value;

    friend bool operator==(const BodyField&, const BodyField&) = default;
};

struct EndpointSpec {
    HttpMethod method = HttpMethod::Get;
    PathTemplate path_template;
    std::vector<std::string> required_headers;  // declaration order, unique case-insensitively
    std::vector<BodyField> required_body_fields;

    friend bool operator==(const EndpointSpec&, const EndpointSpec&) = default;
};

/// Normalized API specification. Immutable after load; safe to share across
/// concurrent analyses.
struct SpecModel {
    std::string api_name;
    std::string domain;     // bare hostname, no scheme or path
    std::string base_path;  // "" or "/prefix" with no trailing slash
    std::vector<EndpointSpec> endpoints;

    friend bool operator==(const SpecModel&, const SpecModel&) = default;
};

enum class SpecFormat { OpenApiYaml, OpenApiJson, Native, Auto };

/// Parses an API specification document into a SpecModel.
///
/// Auto detection: a leading "{" means JSON, anything else YAML; a document
/// whose top level carries the `restfix_spec` marker key is treated as the
/// native format, otherwise as OpenAPI 3.x.
///
/// Throws ParseError for malformed documents and SpecError for structural
/// problems (no server/domain, duplicate endpoints, unsupported methods).
SpecModel load_spec(std::string_view document, SpecFormat format = SpecFormat::Auto);

// ---------------------------------------------------------------------------
// Endpoint matching

/// One concrete path segment extracted from client code. A wildcard segment
/// stands for statically unresolvable content and matches any template
/// segment.
struct PathValue {
    std::string text;
    bool wildcard = false;
};

struct EndpointCandidate {
    const EndpointSpec* endpoint = nullptr;
    int distance = 0;
};

/// Match outcome: `exact` when a template matched segment-wise, otherwise
/// a ranked list of near-miss candidates (ascending segment edit distance,
/// capped at kCandidateDistanceLimit, ties in declaration order).
struct EndpointMatch {
    const EndpointSpec* exact = nullptr;
    std::vector<EndpointCandidate> candidates;
};

inline constexpr int kCandidateDistanceLimit = 2;

/// True when the template matches the path segment-wise: literals compare
/// exactly, parameters match any single non-empty segment, wildcards match
/// any template segment.
bool template_matches(const PathTemplate& tmpl, const std::vector<PathValue>& path);

/// Levenshtein distance over whole segments (substitution, insertion,
/// deletion). A matching segment pair costs zero.
int template_distance(const PathTemplate& tmpl, const std::vector<PathValue>& path);

/// Splits a concrete path ("/v1.1/devices") into segments; the query string
/// and a trailing slash are dropped.
std::vector<PathValue> split_concrete_path(std::string_view path);

/// Matches method + pre-split path segments against the spec's endpoints.
EndpointMatch match_endpoint(const SpecModel& spec, HttpMethod method,
                             const std::vector<PathValue>& path);

/// Matches a concrete path string (base path and query already stripped).
EndpointMatch lookup_endpoint(const SpecModel& spec, HttpMethod method,
                              std::string_view concrete_path);

}  // namespace restfix
