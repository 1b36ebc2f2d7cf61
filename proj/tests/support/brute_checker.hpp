// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include <restfix/deviation_detector.hpp>
#include <restfix/spec_model.hpp>

#include "support/mini_interpreter.hpp"

// Deviation checking restated from the rules, independent of the production
// detector: exhaustive template comparison, plain recursion for distances,
// direct set differences. Used as the oracle for randomized programs.
namespace testsup {

inline std::string brute_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline bool brute_segment_match(const restfix::PathSegment& tmpl, const restfix::PathValue& value) {
    if (value.wildcard) return true;
    if (tmpl.is_param) return !value.text.empty();
    return tmpl.text == value.text;
}

inline int brute_distance_rec(const restfix::PathTemplate& tmpl,
                              const std::vector<restfix::PathValue>& path, std::size_t i,
                              std::size_t j, std::vector<int>& memo, std::size_t width) {
    int& slot = memo[i * width + j];
    if (slot >= 0) return slot;
    int result;
    if (i == 0) {
        result = static_cast<int>(j);
    } else if (j == 0) {
        result = static_cast<int>(i);
    } else {
        int sub = brute_distance_rec(tmpl, path, i - 1, j - 1, memo, width) +
                  (brute_segment_match(tmpl.segments[i - 1], path[j - 1]) ? 0 : 1);
        int del = brute_distance_rec(tmpl, path, i - 1, j, memo, width) + 1;
        int ins = brute_distance_rec(tmpl, path, i, j - 1, memo, width) + 1;
        result = std::min({sub, del, ins});
    }
    slot = result;
    return result;
}

inline int brute_distance(const restfix::PathTemplate& tmpl,
                          const std::vector<restfix::PathValue>& path) {
    const std::size_t width = path.size() + 1;
    std::vector<int> memo((tmpl.segments.size() + 1) * width, -1);
    return brute_distance_rec(tmpl, path, tmpl.segments.size(), path.size(), memo, width);
}

inline bool brute_exact_match(const restfix::PathTemplate& tmpl,
                              const std::vector<restfix::PathValue>& path) {
    if (tmpl.segments.size() != path.size()) return false;
    for (std::size_t i = 0; i < path.size(); ++i)
        if (!brute_segment_match(tmpl.segments[i], path[i])) return false;
    return true;
}

struct BrutePath {
    bool domain_found = false;
    std::vector<restfix::PathValue> segments;
    bool entirely_unknown = false;
    std::string rendered;
};

/// Path extraction restated: everything after the domain (and port), minus
/// query, fragment, and base path. '\x01' marks opaque stretches.
inline BrutePath brute_site_path(const MiniString& url, const restfix::SpecModel& spec) {
    std::string pattern;
    for (const MiniString::Part& p : url.parts) pattern += p.known ? p.text : std::string(1, '\x01');

    BrutePath out;
    auto dom = pattern.find(spec.domain);
    if (dom == std::string::npos) return out;
    out.domain_found = true;
    std::string rest = pattern.substr(dom + spec.domain.size());
    if (!rest.empty() && rest.front() == ':') {
        std::size_t i = 1;
        while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
        rest = rest.substr(i);
    }
    if (auto q = rest.find('?'); q != std::string::npos) rest = rest.substr(0, q);
    if (auto h = rest.find('#'); h != std::string::npos) rest = rest.substr(0, h);

    std::string display = rest;
    while (!display.empty() && display.back() == '/') display.pop_back();
    if (display.empty() || display.front() != '/') display.insert(display.begin(), '/');
    for (char c : display) {
        if (c == '\x01')
            out.rendered += "{?}";
        else
            out.rendered += c;
    }

    if (!spec.base_path.empty() && rest.rfind(spec.base_path, 0) == 0 &&
        (rest.size() == spec.base_path.size() || rest[spec.base_path.size()] == '/' ||
         rest[spec.base_path.size()] == '\x01')) {
        rest = rest.substr(spec.base_path.size());
    }
    if (!rest.empty() && rest.front() == '/') rest = rest.substr(1);
    while (!rest.empty() && rest.back() == '/') rest.pop_back();

    if (!rest.empty()) {
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            auto next = rest.find('/', pos);
            std::string seg =
                rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            pos = next == std::string::npos ? rest.size() + 1 : next + 1;
            restfix::PathValue v;
            if (seg.find('\x01') != std::string::npos)
                v.wildcard = true;
            else
                v.text = seg;
            out.segments.push_back(std::move(v));
        }
    }
    out.entirely_unknown =
        !out.segments.empty() && std::all_of(out.segments.begin(), out.segments.end(),
                                             [](const restfix::PathValue& v) { return v.wildcard; });
    return out;
}

inline std::string brute_render_candidate(const restfix::SpecModel& spec,
                                          const restfix::EndpointSpec& ep) {
    std::string tail;
    for (const restfix::PathSegment& s : ep.path_template.segments) {
        tail += '/';
        tail += s.is_param ? "{" + s.text + "}" : s.text;
    }
    if (tail.empty()) tail = "/";
    if (spec.base_path.empty()) return tail;
    return tail == "/" ? spec.base_path : spec.base_path + tail;
}

struct BruteCall {
    restfix::HttpMethod method;
    MiniString url;
    std::optional<MiniDict> headers;
    std::optional<MiniDict> body;
};

struct BruteExpectation {
    std::vector<std::string> deviations;  // canonical signatures, document order
    int skipped = 0;
};

inline std::string join_comma(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

inline void brute_check_attributes(const restfix::SpecModel& /*spec*/,
                                   const restfix::EndpointSpec& endpoint, const BruteCall& call,
                                   BruteExpectation& out) {
    if (!endpoint.required_headers.empty()) {
        if (call.headers && call.headers->unknown_spread) {
            out.skipped += 1;
        } else {
            std::vector<std::string> declared;
            if (call.headers)
                for (const auto& e : call.headers->entries) declared.push_back(brute_lower(e.first));
            std::vector<std::string> missing;
            for (const std::string& req : endpoint.required_headers) {
                if (std::find(declared.begin(), declared.end(), brute_lower(req)) == declared.end())
                    missing.push_back(req);
            }
            if (!missing.empty())
                out.deviations.push_back("RequestHeaders missing=" + join_comma(missing));
        }
    }
    if (!endpoint.required_body_fields.empty()) {
        if (call.body && call.body->unknown_spread) {
            out.skipped += 1;
            return;
        }
        std::vector<std::string> missing;
        std::vector<std::string> mismatches;
        for (const restfix::BodyField& field : endpoint.required_body_fields) {
            const MiniString* value = nullptr;
            if (call.body) {
                for (const auto& e : call.body->entries) {
                    if (e.first == field.name) {
                        value = &e.second;
                        break;
                    }
                }
            }
            if (!value) {
                missing.push_back(field.name);
                continue;
            }
            if (field.fixed_value && value->fully_known() &&
                value->known_text() != field.fixed_value->text) {
                mismatches.push_back(field.name + ":" + field.fixed_value->text + ":" +
                                     value->known_text());
            }
        }
        if (!missing.empty() || !mismatches.empty()) {
            out.deviations.push_back("RequestBody missing=" + join_comma(missing) +
                                     " mismatch=" + join_comma(mismatches));
        }
    }
}

/// Expected checker output for one call, by definition.
inline BruteExpectation brute_check(const restfix::SpecModel& spec, const BruteCall& call) {
    BruteExpectation out;
    BrutePath path = brute_site_path(call.url, spec);
    if (!path.domain_found) return out;  // the call would not qualify at all
    if (path.entirely_unknown) {
        out.skipped += 1;
        return out;
    }

    const restfix::EndpointSpec* exact = nullptr;
    for (const auto& ep : spec.endpoints) {
        if (ep.method != call.method) continue;
        if (brute_exact_match(ep.path_template, path.segments)) {
            exact = &ep;
            break;
        }
    }

    const restfix::EndpointSpec* attribute_target = exact;
    if (!exact) {
        // Bucket walk keeps declaration order inside each distance tier.
        std::vector<std::pair<const restfix::EndpointSpec*, int>> candidates;
        for (int d = 0; d <= restfix::kCandidateDistanceLimit; ++d) {
            for (const auto& ep : spec.endpoints) {
                if (ep.method != call.method) continue;
                if (brute_distance(ep.path_template, path.segments) == d)
                    candidates.emplace_back(&ep, d);
            }
        }
        std::vector<std::string> rendered;
        for (const auto& [ep, d] : candidates) rendered.push_back(brute_render_candidate(spec, *ep));
        out.deviations.push_back("Endpoint actual=" + path.rendered +
                                 " nearest=" + join_comma(rendered));
        if (candidates.size() == 1 ||
            (candidates.size() > 1 && candidates[0].second < candidates[1].second)) {
            attribute_target = candidates[0].first;
        }
    }
    if (attribute_target) brute_check_attributes(spec, *attribute_target, call, out);
    return out;
}

/// The same canonical signatures computed from a production report.
inline std::vector<std::string> report_signatures(const restfix::DeviationReport& report) {
    std::vector<std::string> out;
    for (const restfix::DeviationPoint& d : report.deviations) {
        const restfix::UnsatisfiedSpecification& u = d.unsatisfied.at(0);
        switch (d.category) {
            case restfix::DeviationCategory::Endpoint:
                out.push_back("Endpoint actual=" + u.actual_path +
                              " nearest=" + join_comma(u.candidates));
                break;
            case restfix::DeviationCategory::RequestHeaders:
                out.push_back("RequestHeaders missing=" + join_comma(u.missing));
                break;
            case restfix::DeviationCategory::RequestBody: {
                std::vector<std::string> mm;
                for (const restfix::ValueMismatch& v : u.mismatches)
                    mm.push_back(v.field + ":" + v.expected + ":" + v.actual);
                out.push_back("RequestBody missing=" + join_comma(u.missing) +
                              " mismatch=" + join_comma(mm));
                break;
            }
        }
    }
    return out;
}

inline int count_skipped(const restfix::DeviationReport& report) {
    int n = 0;
    for (const restfix::AnalysisWarning& w : report.warnings)
        if (w.kind == restfix::WarningKind::Skipped) ++n;
    return n;
}

}  // namespace testsup
