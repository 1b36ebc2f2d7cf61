// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace restfix {

enum class HttpMethod { Get, Post, Put, Patch, Delete, Head };

inline constexpr std::array<HttpMethod, 6> kAllMethods = {
    HttpMethod::Get,  HttpMethod::Post,   HttpMethod::Put,
    HttpMethod::Patch, HttpMethod::Delete, HttpMethod::Head};

inline std::string_view to_string(HttpMethod m) {
    switch (m) {
        case HttpMethod::Get: return "GET";
        case HttpMethod::Post: return "POST";
        case HttpMethod::Put: return "PUT";
        case HttpMethod::Patch: return "PATCH";
        case HttpMethod::Delete: return "DELETE";
        case HttpMethod::Head: return "HEAD";
    }
    return "GET";
}

/// Case-insensitive method name parse; nullopt for anything outside the
/// six supported methods.
inline std::optional<HttpMethod> parse_http_method(std::string_view name) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "get") return HttpMethod::Get;
    if (lower == "post") return HttpMethod::Post;
    if (lower == "put") return HttpMethod::Put;
    if (lower == "patch") return HttpMethod::Patch;
    if (lower == "delete") return HttpMethod::Delete;
    if (lower == "head") return HttpMethod::Head;
    return std::nullopt;
}

}  // namespace restfix
