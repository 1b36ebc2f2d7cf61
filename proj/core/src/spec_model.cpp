// SPDX-License-Identifier: Apache-2.0
#include "restfix/spec_model.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "restfix/errors.hpp"
#include "yaml_json.hpp"

namespace restfix {

namespace {

using json = nlohmann::ordered_json;

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

ScalarValue scalar_from_json(const json& v) {
    if (v.is_boolean()) return scalar_from_bool(v.get<bool>());
    if (v.is_number_integer()) return scalar_from_integer(v.get<long long>());
    if (v.is_number_unsigned()) return scalar_from_integer(static_cast<long long>(v.get<unsigned long long>()));
    if (v.is_number_float()) return scalar_from_double(v.get<double>());
    if (v.is_null()) return scalar_null();
    if (v.is_string()) return scalar_from_string(v.get<std::string>());
    throw SpecError("fixed body values must be scalars, got: " + v.dump());
}

void validate_domain(const std::string& domain) {
    if (domain.empty()) throw SpecError("specification declares no domain");
    if (domain.find("://") != std::string::npos || domain.find('/') != std::string::npos) {
        throw SpecError("domain must be a bare hostname, got \"" + domain + "\"");
    }
}

std::string normalize_base_path(std::string base) {
    while (!base.empty() && base.back() == '/') base.pop_back();
    if (!base.empty() && base.front() != '/') base.insert(base.begin(), '/');
    return base;
}

/// servers[0].url -> (domain, base_path). A port is stripped from the domain.
std::pair<std::string, std::string> split_server_url(std::string_view url) {
    std::string_view rest = trim(url);
    if (auto pos = rest.find("://"); pos != std::string_view::npos) rest.remove_prefix(pos + 3);
    std::string domain;
    std::string base;
    if (auto slash = rest.find('/'); slash != std::string_view::npos) {
        domain = std::string(rest.substr(0, slash));
        base = std::string(rest.substr(slash));
    } else {
        domain = std::string(rest);
    }
    if (auto colon = domain.find(':'); colon != std::string::npos) domain.resize(colon);
    return {domain, normalize_base_path(std::move(base))};
}

void add_required_header(EndpointSpec& ep, const std::string& name) {
    std::string lower = to_lower(name);
    for (const auto& existing : ep.required_headers) {
        if (to_lower(existing) == lower) return;
    }
    ep.required_headers.push_back(name);
}

void check_duplicates_and_append(SpecModel& model, EndpointSpec ep) {
    std::string key = ep.path_template.to_string();
    for (const auto& existing : model.endpoints) {
        if (existing.method == ep.method && existing.path_template.to_string() == key) {
            throw SpecError("duplicate endpoint " + std::string(to_string(ep.method)) + " " + key);
        }
    }
    model.endpoints.push_back(std::move(ep));
}

PathTemplate parse_template_or_spec_error(const std::string& raw) {
    try {
        return parse_path_template(raw);
    } catch (const TemplateError& e) {
        throw SpecError("bad endpoint path \"" + raw + "\": " + e.what());
    }
}

SpecModel import_native(const json& doc) {
    if (!doc.is_object()) throw SpecError("native spec must be a mapping at top level");
    SpecModel model;
    model.api_name = doc.value("api_name", std::string{});
    model.domain = doc.value("domain", std::string{});
    validate_domain(model.domain);
    model.base_path = normalize_base_path(doc.value("base_path", std::string{}));

    if (doc.contains("endpoints")) {
        const json& eps = doc.at("endpoints");
        if (!eps.is_array()) throw SpecError("\"endpoints\" must be a list");
        for (const json& entry : eps) {
            if (!entry.is_object()) throw SpecError("endpoint entries must be mappings");
            EndpointSpec ep;
            std::string method_name = entry.value("method", std::string{});
            auto method = parse_http_method(method_name);
            if (!method) throw SpecError("unsupported HTTP method \"" + method_name + "\"");
            ep.method = *method;
            if (!entry.contains("path") || !entry.at("path").is_string()) {
                throw SpecError("endpoint entry is missing a \"path\" string");
            }
            ep.path_template = parse_template_or_spec_error(entry.at("path").get<std::string>());
            if (entry.contains("required_headers")) {
                for (const json& h : entry.at("required_headers")) {
                    add_required_header(ep, h.get<std::string>());
                }
            }
            if (entry.contains("required_body")) {
                for (const json& f : entry.at("required_body")) {
                    BodyField field;
                    if (f.is_string()) {
                        field.name = f.get<std::string>();
                    } else {
                        field.name = f.value("name", std::string{});
                        if (f.contains("value")) field.fixed_value = scalar_from_json(f.at("value"));
                    }
                    if (field.name.empty()) throw SpecError("body field with empty name");
                    ep.required_body_fields.push_back(std::move(field));
                }
            }
            check_duplicates_and_append(model, std::move(ep));
        }
    }
    return model;
}

// Keys of an OpenAPI path item that are structural rather than operations.
bool openapi_structural_key(const std::string& key) {
    return key == "parameters" || key == "summary" || key == "description" ||
           key == "servers" || key == "$ref" || key.rfind("x-", 0) == 0;
}

void import_openapi_parameters(EndpointSpec& ep, const json& params) {
    if (!params.is_array()) return;
    for (const json& p : params) {
        if (!p.is_object()) continue;
        if (p.value("in", std::string{}) != "header") continue;
        if (!p.value("required", false)) continue;
        std::string name = p.value("name", std::string{});
        if (!name.empty()) add_required_header(ep, name);
    }
}

const json* openapi_request_schema(const json& op) {
    auto body_it = op.find("requestBody");
    if (body_it == op.end() || !body_it->is_object()) return nullptr;
    auto content_it = body_it->find("content");
    if (content_it == body_it->end() || !content_it->is_object() || content_it->empty()) return nullptr;
    const json* media = nullptr;
    if (auto js = content_it->find("application/json"); js != content_it->end()) {
        media = &*js;
    } else {
        media = &content_it->begin().value();
    }
    if (!media->is_object()) return nullptr;
    auto schema_it = media->find("schema");
    if (schema_it == media->end() || !schema_it->is_object()) return nullptr;
    return &*schema_it;
}

void import_openapi_body(EndpointSpec& ep, const json& op) {
    const json* schema = openapi_request_schema(op);
    if (schema == nullptr) return;
    auto required_it = schema->find("required");
    if (required_it == schema->end() || !required_it->is_array()) return;
    const json props = schema->value("properties", json::object());
    for (const json& name_node : *required_it) {
        if (!name_node.is_string()) continue;
        BodyField field;
        field.name = name_node.get<std::string>();
        if (auto prop = props.find(field.name); prop != props.end() && prop->is_object()) {
            if (auto c = prop->find("const"); c != prop->end()) {
                field.fixed_value = scalar_from_json(*c);
            } else if (auto e = prop->find("enum"); e != prop->end() && e->is_array() && e->size() == 1) {
                field.fixed_value = scalar_from_json(e->front());
            }
        }
        ep.required_body_fields.push_back(std::move(field));
    }
}

SpecModel import_openapi(const json& doc) {
    if (!doc.is_object()) throw SpecError("OpenAPI document must be an object at top level");
    SpecModel model;
    if (auto info = doc.find("info"); info != doc.end() && info->is_object()) {
        model.api_name = info->value("title", std::string{});
    }
    auto servers = doc.find("servers");
    if (servers == doc.end() || !servers->is_array() || servers->empty()) {
        throw SpecError("specification declares no server URL");
    }
    std::string url = servers->front().value("url", std::string{});
    auto [domain, base_path] = split_server_url(url);
    validate_domain(domain);
    model.domain = std::move(domain);
    model.base_path = std::move(base_path);

    const json paths = doc.value("paths", json::object());
    if (!paths.is_object()) throw SpecError("\"paths\" must be an object");
    for (const auto& [raw_path, item] : paths.items()) {
        if (!item.is_object()) continue;
        const json* shared_params =
            item.contains("parameters") ? &item.at("parameters") : nullptr;
        for (const auto& [key, op] : item.items()) {
            if (openapi_structural_key(key)) continue;
            auto method = parse_http_method(key);
            if (!method) throw SpecError("unsupported HTTP method \"" + key + "\" under path " + raw_path);
            if (!op.is_object()) continue;
            EndpointSpec ep;
            ep.method = *method;
            ep.path_template = parse_template_or_spec_error(raw_path);
            if (shared_params) import_openapi_parameters(ep, *shared_params);
            if (op.contains("parameters")) import_openapi_parameters(ep, op.at("parameters"));
            import_openapi_body(ep, op);
            check_duplicates_and_append(model, std::move(ep));
        }
    }
    return model;
}

bool sniff_json(std::string_view document) {
    auto t = trim(document);
    return !t.empty() && t.front() == '{';
}

}  // namespace

// ---------------------------------------------------------------------------

std::string PathTemplate::to_string() const {
    if (segments.empty()) return "/";
    std::string out;
    for (const auto& seg : segments) {
        out += '/';
        if (seg.is_param) {
            out += '{';
            out += seg.text;
            out += '}';
        } else {
            out += seg.text;
        }
    }
    return out;
}

PathTemplate parse_path_template(std::string_view raw) {
    if (raw.empty() || raw.front() != '/') {
        throw TemplateError("path template must start with '/': \"" + std::string(raw) + "\"");
    }
    PathTemplate tmpl;
    size_t pos = 1;
    while (pos <= raw.size()) {
        size_t next = raw.find('/', pos);
        std::string_view seg = raw.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        pos = next == std::string_view::npos ? raw.size() + 1 : next + 1;
        if (seg.empty()) {
            if (pos > raw.size()) break;  // trailing slash (or the bare "/")
            throw TemplateError("empty path segment in \"" + std::string(raw) + "\"");
        }
        PathSegment out;
        if (seg.front() == '{' || seg.back() == '}') {
            if (seg.size() < 2 || seg.front() != '{' || seg.back() != '}') {
                throw TemplateError("unbalanced braces in segment \"" + std::string(seg) + "\"");
            }
            std::string_view name = seg.substr(1, seg.size() - 2);
            if (name.empty()) throw TemplateError("empty parameter name in \"" + std::string(raw) + "\"");
            if (name.find('{') != std::string_view::npos || name.find('}') != std::string_view::npos) {
                throw TemplateError("nested braces in segment \"" + std::string(seg) + "\"");
            }
            out.is_param = true;
            out.text = std::string(name);
        } else {
            if (seg.find('{') != std::string_view::npos || seg.find('}') != std::string_view::npos) {
                throw TemplateError("unbalanced braces in segment \"" + std::string(seg) + "\"");
            }
            out.text = std::string(seg);
        }
        tmpl.segments.push_back(std::move(out));
    }
    return tmpl;
}

SpecModel load_spec(std::string_view document, SpecFormat format) {
    json doc;
    switch (format) {
        case SpecFormat::OpenApiJson:
            doc = detail::json_parse(document);
            return import_openapi(doc);
        case SpecFormat::OpenApiYaml:
            doc = detail::yaml_to_json(document);
            return import_openapi(doc);
        case SpecFormat::Native:
            doc = sniff_json(document) ? detail::json_parse(document) : detail::yaml_to_json(document);
            if (!doc.is_object() || !doc.contains("restfix_spec")) {
                throw SpecError("native spec is missing the restfix_spec marker");
            }
            return import_native(doc);
        case SpecFormat::Auto:
            break;
    }
    doc = sniff_json(document) ? detail::json_parse(document) : detail::yaml_to_json(document);
    if (doc.is_object() && doc.contains("restfix_spec")) return import_native(doc);
    return import_openapi(doc);
}

// ---------------------------------------------------------------------------
// Matching

namespace {

bool segment_matches(const PathSegment& tmpl, const PathValue& value) {
    if (value.wildcard) return true;
    if (tmpl.is_param) return !value.text.empty();
    return tmpl.text == value.text;
}

}  // namespace

bool template_matches(const PathTemplate& tmpl, const std::vector<PathValue>& path) {
    if (tmpl.segments.size() != path.size()) return false;
    for (size_t i = 0; i < path.size(); ++i) {
        if (!segment_matches(tmpl.segments[i], path[i])) return false;
    }
    return true;
}

int template_distance(const PathTemplate& tmpl, const std::vector<PathValue>& path) {
    const size_t n = tmpl.segments.size();
    const size_t m = path.size();
    std::vector<int> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= m; ++j) {
            int sub = prev[j - 1] + (segment_matches(tmpl.segments[i - 1], path[j - 1]) ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

std::vector<PathValue> split_concrete_path(std::string_view path) {
    if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    if (auto h = path.find('#'); h != std::string_view::npos) path = path.substr(0, h);
    std::vector<PathValue> out;
    size_t pos = 0;
    if (!path.empty() && path.front() == '/') pos = 1;
    while (pos < path.size()) {
        size_t next = path.find('/', pos);
        std::string_view seg = path.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        pos = next == std::string_view::npos ? path.size() : next + 1;
        out.push_back(PathValue{std::string(seg), false});
    }
    while (!out.empty() && out.back().text.empty() && !out.back().wildcard) out.pop_back();
    return out;
}

EndpointMatch match_endpoint(const SpecModel& spec, HttpMethod method,
                             const std::vector<PathValue>& path) {
    EndpointMatch result;
    for (const auto& ep : spec.endpoints) {
        if (ep.method != method) continue;
        if (template_matches(ep.path_template, path)) {
            result.exact = &ep;
            result.candidates.clear();
            return result;
        }
        int d = template_distance(ep.path_template, path);
        if (d <= kCandidateDistanceLimit) result.candidates.push_back({&ep, d});
    }
    std::stable_sort(result.candidates.begin(), result.candidates.end(),
                     [](const EndpointCandidate& a, const EndpointCandidate& b) {
                         return a.distance < b.distance;
                     });
    return result;
}

EndpointMatch lookup_endpoint(const SpecModel& spec, HttpMethod method,
                              std::string_view concrete_path) {
    return match_endpoint(spec, method, split_concrete_path(concrete_path));
}

}  // namespace restfix
