// SPDX-License-Identifier: Apache-2.0
#include "restfix/deviation_detector.hpp"

#include <algorithm>
#include <cctype>

#include <nlohmann/json.hpp>

namespace restfix {

namespace {

constexpr char kUnknownMark = '\x01';

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

void add_warning(std::vector<AnalysisWarning>* sink, WarningKind kind, std::string message,
                 std::optional<Span> span) {
    if (!sink) return;
    AnalysisWarning w{kind, std::move(message), span};
    if (std::find(sink->begin(), sink->end(), w) == sink->end()) sink->push_back(std::move(w));
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

nlohmann::ordered_json span_to_json(const Span& s) {
    return nlohmann::ordered_json{{"start_line", s.start_line},
                                  {"start_col", s.start_col},
                                  {"end_line", s.end_line},
                                  {"end_col", s.end_col}};
}

}  // namespace

const char* to_string(DeviationCategory category) {
    switch (category) {
        case DeviationCategory::Endpoint: return "Endpoint";
        case DeviationCategory::RequestHeaders: return "RequestHeaders";
        case DeviationCategory::RequestBody: return "RequestBody";
    }
    return "?";
}

std::optional<DeviationCategory> parse_deviation_category(std::string_view name) {
    if (name == "Endpoint") return DeviationCategory::Endpoint;
    if (name == "RequestHeaders") return DeviationCategory::RequestHeaders;
    if (name == "RequestBody") return DeviationCategory::RequestBody;
    return std::nullopt;
}

SitePath site_path(const CallSite& site, const SpecModel& spec) {
    // Concatenate resolved parts, marking unknown stretches.
    std::string pattern;
    for (const StringPart& p : site.url.parts) {
        if (p.known) {
            pattern += p.text;
        } else {
            pattern += kUnknownMark;
        }
    }
    SitePath out;
    std::size_t dom = pattern.find(spec.domain);
    if (dom == std::string::npos) return out;  // caller guarantees otherwise
    std::string rest = pattern.substr(dom + spec.domain.size());
    if (!rest.empty() && rest.front() == ':') {  // port
        std::size_t i = 1;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
        rest = rest.substr(i);
    }
    if (auto q = rest.find('?'); q != std::string::npos) rest = rest.substr(0, q);
    if (auto h = rest.find('#'); h != std::string::npos) rest = rest.substr(0, h);

    // Render the path as written (before base-path stripping) so reports and
    // prompts smoke out version-segment mistakes like /v1.0 vs /v1.1.
    {
        std::string display = rest;
        while (!display.empty() && display.back() == '/') display.pop_back();
        if (display.empty() || display.front() != '/') display.insert(display.begin(), '/');
        out.rendered.clear();
        for (char c : display) {
            if (c == kUnknownMark)
                out.rendered += "{?}";
            else
                out.rendered += c;
        }
    }

    if (!spec.base_path.empty() && rest.rfind(spec.base_path, 0) == 0 &&
        (rest.size() == spec.base_path.size() || rest[spec.base_path.size()] == '/' ||
         rest[spec.base_path.size()] == kUnknownMark)) {
        rest = rest.substr(spec.base_path.size());
    }
    if (!rest.empty() && rest.front() == '/') rest = rest.substr(1);
    while (!rest.empty() && rest.back() == '/') rest.pop_back();

    if (!rest.empty()) {
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            std::size_t next = rest.find('/', pos);
            std::string seg = rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            pos = next == std::string::npos ? rest.size() + 1 : next + 1;
            PathValue v;
            if (seg.find(kUnknownMark) != std::string::npos) {
                v.wildcard = true;
            } else {
                v.text = seg;
            }
            out.segments.push_back(std::move(v));
        }
    }
    out.entirely_unknown = !out.segments.empty() &&
                           std::all_of(out.segments.begin(), out.segments.end(),
                                       [](const PathValue& v) { return v.wildcard; });
    return out;
}

std::optional<DeviationPoint> check_endpoint(const CallSite& site, const SpecModel& spec,
                                             std::vector<AnalysisWarning>* warnings) {
    SitePath path = site_path(site, spec);
    if (path.entirely_unknown) {
        add_warning(warnings, WarningKind::Skipped,
                    "endpoint check skipped: URL path is entirely unresolvable at line " +
                        std::to_string(site.call_span.start_line),
                    site.call_span);
        return std::nullopt;
    }
    EndpointMatch match = match_endpoint(spec, site.method, path.segments);
    if (match.exact) return std::nullopt;

    UnsatisfiedSpecification u;
    u.category = DeviationCategory::Endpoint;
    u.method = std::string(to_string(site.method));
    u.actual_path = path.rendered;
    for (const EndpointCandidate& c : match.candidates) {
        const std::string tail = c.endpoint->path_template.to_string();
        // Candidates carry the base path so a repair can rewrite the full URL.
        if (!spec.base_path.empty())
            u.candidates.push_back(tail == "/" ? spec.base_path : spec.base_path + tail);
        else
            u.candidates.push_back(tail);
    }
    u.description = u.method + " " + u.actual_path + " does not match any specified endpoint";
    if (!u.candidates.empty()) u.description += "; nearest: " + join(u.candidates, ", ");

    DeviationPoint d;
    d.category = DeviationCategory::Endpoint;
    d.span = site.endpoint_def_span;
    d.call_span = site.call_span;
    d.unsatisfied.push_back(std::move(u));
    return d;
}

std::optional<DeviationPoint> check_headers(const CallSite& site, const SpecModel& spec,
                                            const EndpointSpec& endpoint,
                                            std::vector<AnalysisWarning>* warnings) {
    (void)spec;
    if (endpoint.required_headers.empty()) return std::nullopt;
    if (site.headers && site.headers->has_unknown_spread) {
        add_warning(warnings, WarningKind::Skipped,
                    "header check skipped: headers built from unresolvable parts at line " +
                        std::to_string(site.call_span.start_line),
                    site.header_def_span ? *site.header_def_span : site.call_span);
        return std::nullopt;
    }
    std::vector<std::string> declared;
    if (site.headers) {
        for (const ResolvedEntry& e : site.headers->entries) {
            if (e.key.fully_known) declared.push_back(to_lower(e.key.known_text()));
        }
    }
    std::vector<std::string> missing;
    for (const std::string& required : endpoint.required_headers) {
        if (std::find(declared.begin(), declared.end(), to_lower(required)) == declared.end()) {
            missing.push_back(required);
        }
    }
    if (missing.empty()) return std::nullopt;

    UnsatisfiedSpecification u;
    u.category = DeviationCategory::RequestHeaders;
    u.missing = missing;
    u.description = "required header attributes not declared: " + join(missing, ", ");

    DeviationPoint d;
    d.category = DeviationCategory::RequestHeaders;
    d.span = site.header_def_span ? *site.header_def_span : site.call_span;
    d.call_span = site.call_span;
    d.unsatisfied.push_back(std::move(u));
    return d;
}

std::optional<DeviationPoint> check_body(const CallSite& site, const SpecModel& spec,
                                         const EndpointSpec& endpoint,
                                         std::vector<AnalysisWarning>* warnings) {
    (void)spec;
    if (endpoint.required_body_fields.empty()) return std::nullopt;
    if (site.body && site.body->has_unknown_spread) {
        add_warning(warnings, WarningKind::Skipped,
                    "body check skipped: body built from unresolvable parts at line " +
                        std::to_string(site.call_span.start_line),
                    site.body_def_span ? *site.body_def_span : site.call_span);
        return std::nullopt;
    }
    std::vector<std::string> missing;
    std::vector<ValueMismatch> mismatches;
    for (const BodyField& field : endpoint.required_body_fields) {
        const ResolvedEntry* found = nullptr;
        if (site.body) {
            for (const ResolvedEntry& e : site.body->entries) {
                if (e.key.fully_known && e.key.known_text() == field.name) {
                    found = &e;
                    break;
                }
            }
        }
        if (!found) {
            missing.push_back(field.name);
            continue;
        }
        if (field.fixed_value && found->value.fully_known &&
            found->value.known_text() != field.fixed_value->text) {
            mismatches.push_back(ValueMismatch{field.name, field.fixed_value->text,
                                               found->value.known_text()});
        }
    }
    if (missing.empty() && mismatches.empty()) return std::nullopt;

    UnsatisfiedSpecification u;
    u.category = DeviationCategory::RequestBody;
    u.missing = missing;
    u.mismatches = mismatches;
    std::vector<std::string> notes;
    if (!missing.empty()) notes.push_back("required body fields not declared: " + join(missing, ", "));
    for (const ValueMismatch& mm : mismatches) {
        notes.push_back("field \"" + mm.field + "\" must be " + mm.expected + ", found " + mm.actual);
    }
    u.description = join(notes, "; ");

    DeviationPoint d;
    d.category = DeviationCategory::RequestBody;
    d.span = site.body_def_span ? *site.body_def_span : site.call_span;
    d.call_span = site.call_span;
    d.unsatisfied.push_back(std::move(u));
    return d;
}

DeviationReport detect(const SourceModel& model, const SpecModel& spec) {
    DeviationReport report;
    report.file_path = model.file_path;
    report.spec_name = spec.api_name;

    auto [sites, warnings] = extract_call_sites(model, spec);
    report.call_sites_analyzed = static_cast<int>(sites.size());
    report.warnings = std::move(warnings);

    for (const CallSite& site : sites) {
        SitePath path = site_path(site, spec);
        const EndpointSpec* endpoint = nullptr;
        if (path.entirely_unknown) {
            check_endpoint(site, spec, &report.warnings);  // records the Skipped warning
        } else {
            EndpointMatch match = match_endpoint(spec, site.method, path.segments);
            if (match.exact) {
                endpoint = match.exact;
            } else {
                if (auto d = check_endpoint(site, spec, &report.warnings)) {
                    report.deviations.push_back(std::move(*d));
                }
                // A unique nearest candidate still pins down the intended
                // endpoint, so its attribute requirements stay checkable.
                if (!match.candidates.empty() &&
                    (match.candidates.size() == 1 ||
                     match.candidates[0].distance < match.candidates[1].distance)) {
                    endpoint = match.candidates[0].endpoint;
                }
            }
        }
        if (endpoint) {
            if (auto d = check_headers(site, spec, *endpoint, &report.warnings)) {
                report.deviations.push_back(std::move(*d));
            }
            if (auto d = check_body(site, spec, *endpoint, &report.warnings)) {
                report.deviations.push_back(std::move(*d));
            }
        }
    }
    std::stable_sort(report.deviations.begin(), report.deviations.end(),
                     [](const DeviationPoint& a, const DeviationPoint& b) {
                         return std::tie(a.span.start_line, a.span.start_col) <
                                std::tie(b.span.start_line, b.span.start_col);
                     });
    return report;
}

nlohmann::ordered_json report_to_json(const DeviationReport& report) {
    nlohmann::ordered_json out;
    out["file"] = report.file_path;
    out["spec"] = report.spec_name;
    out["call_sites_analyzed"] = report.call_sites_analyzed;
    out["deviations"] = nlohmann::ordered_json::array();
    for (const DeviationPoint& d : report.deviations) {
        nlohmann::ordered_json dj;
        dj["category"] = to_string(d.category);
        dj["span"] = span_to_json(d.span);
        dj["call_span"] = span_to_json(d.call_span);
        dj["unsatisfied"] = nlohmann::ordered_json::array();
        for (const UnsatisfiedSpecification& u : d.unsatisfied) {
            nlohmann::ordered_json uj;
            uj["category"] = to_string(u.category);
            uj["description"] = u.description;
            nlohmann::ordered_json expected;
            switch (u.category) {
                case DeviationCategory::Endpoint:
                    expected["method"] = u.method;
                    expected["actual"] = u.actual_path;
                    expected["candidates"] = u.candidates;
                    break;
                case DeviationCategory::RequestHeaders:
                    expected["missing"] = u.missing;
                    break;
                case DeviationCategory::RequestBody: {
                    expected["missing"] = u.missing;
                    expected["mismatches"] = nlohmann::ordered_json::array();
                    for (const ValueMismatch& mm : u.mismatches) {
                        expected["mismatches"].push_back(nlohmann::ordered_json{
                            {"field", mm.field}, {"expected", mm.expected}, {"actual", mm.actual}});
                    }
                    break;
                }
            }
            uj["expected"] = std::move(expected);
            dj["unsatisfied"].push_back(std::move(uj));
        }
        out["deviations"].push_back(std::move(dj));
    }
    out["warnings"] = nlohmann::ordered_json::array();
    for (const AnalysisWarning& w : report.warnings) {
        nlohmann::ordered_json wj;
        wj["kind"] = to_string(w.kind);
        wj["message"] = w.message;
        if (w.span) wj["span"] = span_to_json(*w.span);
        out["warnings"].push_back(std::move(wj));
    }
    return out;
}

std::string report_to_text(const DeviationReport& report) {
    std::string out;
    out += report.file_path + " vs " + report.spec_name + ": ";
    out += std::to_string(report.deviations.size()) + " deviation(s), ";
    out += std::to_string(report.call_sites_analyzed) + " call site(s)\n";
    for (const DeviationPoint& d : report.deviations) {
        out += "  " + std::string(to_string(d.category)) + " at " + to_string(d.span) + "\n";
        for (const UnsatisfiedSpecification& u : d.unsatisfied) {
            out += "    " + u.description + "\n";
        }
    }
    for (const AnalysisWarning& w : report.warnings) {
        out += "  warning [" + std::string(to_string(w.kind)) + "] " + w.message + "\n";
    }
    return out;
}

}  // namespace restfix
