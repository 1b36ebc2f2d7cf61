// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <tuple>

namespace restfix {

/// Source location range. Lines and columns are 1-based; the end column is
/// exclusive (one past the last character).
struct Span {
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;

    friend bool operator==(const Span& a, const Span& b) = default;

    friend bool operator<(const Span& a, const Span& b) {
        return std::tie(a.start_line, a.start_col, a.end_line, a.end_col) <
               std::tie(b.start_line, b.start_col, b.end_line, b.end_col);
    }
};

inline std::string to_string(const Span& s) {
    return std::to_string(s.start_line) + ":" + std::to_string(s.start_col) +
           "-" + std::to_string(s.end_line) + ":" + std::to_string(s.end_col);
}

}  // namespace restfix
