// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

namespace restfix {

enum class ScalarKind { String, Integer, Float, Boolean, Null };

/// A scalar pinned by a specification or resolved from client code.
/// `text` holds the canonical rendering used for all value comparisons:
/// booleans as "true"/"false", integers in decimal, floats in shortest
/// round-trip form (integral floats render as integers), null as "null".
struct ScalarValue {
    ScalarKind kind = ScalarKind::String;
    std::string text;

    friend bool operator==(const ScalarValue& a, const ScalarValue& b) = default;
};

inline std::string canonical_bool(bool v) { return v ? "true" : "false"; }

inline std::string canonical_integer(long long v) { return std::to_string(v); }

inline std::string canonical_double(double v) {
    if (std::isfinite(v) && std::trunc(v) == v && std::fabs(v) < 9.007199254740992e15) {
        return std::to_string(static_cast<long long>(v));
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, ptr);
}

inline ScalarValue scalar_from_bool(bool v) { return {ScalarKind::Boolean, canonical_bool(v)}; }
inline ScalarValue scalar_from_integer(long long v) { return {ScalarKind::Integer, canonical_integer(v)}; }
inline ScalarValue scalar_from_double(double v) { return {ScalarKind::Float, canonical_double(v)}; }
inline ScalarValue scalar_from_string(std::string v) { return {ScalarKind::String, std::move(v)}; }
inline ScalarValue scalar_null() { return {ScalarKind::Null, "null"}; }

}  // namespace restfix
