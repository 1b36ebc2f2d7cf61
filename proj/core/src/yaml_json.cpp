// SPDX-License-Identifier: Apache-2.0
#include "yaml_json.hpp"

#include <charconv>
#include <string>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "restfix/errors.hpp"

namespace restfix::detail {

namespace {

using json = nlohmann::ordered_json;

bool full_match_integer(const std::string& s, long long& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

bool full_match_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

json scalar_to_json(const YAML::Node& node) {
    const std::string& s = node.Scalar();
    // Quoted scalars carry the "!" non-specific tag; keep them as strings.
    if (node.Tag() == "!") return json(s);
    if (s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL") return json(nullptr);
    if (s == "true" || s == "True" || s == "TRUE") return json(true);
    if (s == "false" || s == "False" || s == "FALSE") return json(false);
    long long i = 0;
    if (full_match_integer(s, i)) return json(i);
    double d = 0.0;
    if (full_match_double(s, d)) return json(d);
    return json(s);
}

json node_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
            return json(nullptr);
        case YAML::NodeType::Scalar:
            return scalar_to_json(node);
        case YAML::NodeType::Sequence: {
            json arr = json::array();
            for (const auto& item : node) arr.push_back(node_to_json(item));
            return arr;
        }
        case YAML::NodeType::Map: {
            json obj = json::object();
            for (const auto& kv : node) obj[kv.first.Scalar()] = node_to_json(kv.second);
            return obj;
        }
        default:
            return json(nullptr);
    }
}

}  // namespace

nlohmann::ordered_json yaml_to_json(std::string_view text) {
    try {
        YAML::Node root = YAML::Load(std::string(text));
        return node_to_json(root);
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string("YAML parse failure: ") + e.what());
    }
}

nlohmann::ordered_json json_parse(std::string_view text) {
    try {
        return nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON parse failure: ") + e.what());
    }
}

}  // namespace restfix::detail
