// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "restfix/source_analysis.hpp"
#include "restfix/spec_model.hpp"

namespace restfix {

enum class DeviationCategory { Endpoint, RequestHeaders, RequestBody };

const char* to_string(DeviationCategory category);
std::optional<DeviationCategory> parse_deviation_category(std::string_view name);

struct ValueMismatch {
    std::string field;
    std::string expected;
    std::string actual;

    friend bool operator==(const ValueMismatch&, const ValueMismatch&) = default;
};

/// The part of the specification a deviation point fails to meet. The
/// payload fields used depend on the category: Endpoint carries the actual
/// path and nearest templates, the other two carry missing attribute names
/// and (for bodies) fixed-value mismatches.
struct UnsatisfiedSpecification {
    DeviationCategory category = DeviationCategory::Endpoint;
    std::string description;
    std::string method;
    std::string actual_path;
    std::vector<std::string> candidates;
    std::vector<std::string> missing;
    std::vector<ValueMismatch> mismatches;

    friend bool operator==(const UnsatisfiedSpecification&, const UnsatisfiedSpecification&) = default;
};

struct DeviationPoint {
    DeviationCategory category = DeviationCategory::Endpoint;
    Span span;       // the deviating code fragment (definition site when known)
    Span call_span;  // the API invocation it belongs to
    std::vector<UnsatisfiedSpecification> unsatisfied;

    friend bool operator==(const DeviationPoint&, const DeviationPoint&) = default;
};

struct DeviationReport {
    std::string file_path;
    std::string spec_name;
    int call_sites_analyzed = 0;
    std::vector<DeviationPoint> deviations;  // sorted by span start
    std::vector<AnalysisWarning> warnings;
};

/// The URL path of a call site reduced to matchable segments.
struct SitePath {
    std::vector<PathValue> segments;
    bool entirely_unknown = false;  // at least one segment, all unresolvable
    std::string rendered;           // "/a/{?}/b" with wildcards masked
};

/// Extracts the path portion of the site's URL: everything after the domain,
/// minus the spec base path, query string, and fragment. Unknown string
/// parts become wildcard segments.
SitePath site_path(const CallSite& site, const SpecModel& spec);

/// Endpoint check. nullopt on an exact template match; a deviation carrying
/// ranked nearest candidates otherwise. An entirely unknown path appends a
/// Skipped warning instead of deciding.
std::optional<DeviationPoint> check_endpoint(const CallSite& site, const SpecModel& spec,
                                             std::vector<AnalysisWarning>* warnings = nullptr);

/// Required-header presence check against one endpoint. Header values are
/// never compared. An unresolvable map merge appends a Skipped warning.
std::optional<DeviationPoint> check_headers(const CallSite& site, const SpecModel& spec,
                                            const EndpointSpec& endpoint,
                                            std::vector<AnalysisWarning>* warnings = nullptr);

/// Required-body-field check (case-sensitive keys) plus fixed-value
/// comparison for fields the spec pins to a concrete value.
std::optional<DeviationPoint> check_body(const CallSite& site, const SpecModel& spec,
                                         const EndpointSpec& endpoint,
                                         std::vector<AnalysisWarning>* warnings = nullptr);

/// Full per-file detection: extracts call sites and runs the three checks.
/// When the endpoint deviates but a unique nearest candidate exists, the
/// header and body checks run against that candidate, so one report can
/// carry both the endpoint fix and the attribute fixes.
DeviationReport detect(const SourceModel& model, const SpecModel& spec);

/// Stable JSON rendering of a report.
nlohmann::ordered_json report_to_json(const DeviationReport& report);

/// Human-readable rendering of a report.
std::string report_to_text(const DeviationReport& report);

}  // namespace restfix
