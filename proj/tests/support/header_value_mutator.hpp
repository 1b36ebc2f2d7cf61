// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <string>
#include <vector>

// Locates the value expressions inside header dict literals so tests can
// rewrite them without touching keys, URLs, or body payloads.
namespace testsup {

struct ValueSlot {
    std::size_t begin = 0;  // half-open range of the value expression text
    std::size_t end = 0;
};

namespace detail {

inline bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

/// Index just past the brace block starting at `open` ('{' expected), or npos.
inline std::size_t balanced_end(const std::string& text, std::size_t open) {
    int depth = 0;
    char quote = 0;
    for (std::size_t i = open; i < text.size(); ++i) {
        char c = text[i];
        if (quote) {
            if (c == '\\')
                ++i;
            else if (c == quote)
                quote = 0;
            continue;
        }
        if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == '{' || c == '(' || c == '[') {
            ++depth;
        } else if (c == '}' || c == ')' || c == ']') {
            --depth;
            if (depth == 0) return i + 1;
        }
    }
    return std::string::npos;
}

}  // namespace detail

/// Value ranges of entries in the dict literal starting at text[open] == '{'.
inline std::vector<ValueSlot> dict_value_slots(const std::string& text, std::size_t open) {
    std::vector<ValueSlot> out;
    const std::size_t end = detail::balanced_end(text, open);
    if (end == std::string::npos) return out;
    std::size_t i = open + 1;
    const std::size_t close = end - 1;  // position of the matching '}'
    char quote = 0;
    int depth = 0;
    std::size_t colon = std::string::npos;
    auto flush = [&](std::size_t entry_end) {
        if (colon != std::string::npos) {
            std::size_t vb = colon + 1;
            while (vb < entry_end && std::isspace(static_cast<unsigned char>(text[vb]))) ++vb;
            std::size_t ve = entry_end;
            while (ve > vb && std::isspace(static_cast<unsigned char>(text[ve - 1]))) --ve;
            if (ve > vb) out.push_back({vb, ve});
        }
        colon = std::string::npos;
    };
    for (; i < close; ++i) {
        char c = text[i];
        if (quote) {
            if (c == '\\')
                ++i;
            else if (c == quote)
                quote = 0;
            continue;
        }
        switch (c) {
            case '\'':
            case '"':
                quote = c;
                break;
            case '{':
            case '(':
            case '[':
                ++depth;
                break;
            case '}':
            case ')':
            case ']':
                --depth;
                break;
            case ':':
                if (depth == 0 && colon == std::string::npos) colon = i;
                break;
            case ',':
                if (depth == 0) flush(i);
                break;
            default:
                break;
        }
    }
    flush(close);
    return out;
}

/// Value ranges inside every dict literal used as request headers: inline
/// `headers={...}` arguments plus assignments to any name passed as
/// `headers=NAME` somewhere in the file.
inline std::vector<ValueSlot> header_value_slots(const std::string& text) {
    std::vector<ValueSlot> out;
    std::vector<std::string> header_names;
    const std::string marker = "headers=";
    for (std::size_t pos = text.find(marker); pos != std::string::npos;
         pos = text.find(marker, pos + 1)) {
        if (pos > 0 && detail::is_ident_char(text[pos - 1])) continue;
        std::size_t i = pos + marker.size();
        while (i < text.size() && text[i] == ' ') ++i;
        if (i < text.size() && text[i] == '{') {
            for (ValueSlot slot : dict_value_slots(text, i)) out.push_back(slot);
        } else {
            std::size_t start = i;
            while (i < text.size() && detail::is_ident_char(text[i])) ++i;
            if (i > start) header_names.push_back(text.substr(start, i - start));
        }
    }
    for (const std::string& name : header_names) {
        const std::string assign = name + " = {";
        for (std::size_t pos = text.find(assign); pos != std::string::npos;
             pos = text.find(assign, pos + 1)) {
            if (pos > 0 && detail::is_ident_char(text[pos - 1])) continue;
            for (ValueSlot slot : dict_value_slots(text, pos + assign.size() - 1))
                out.push_back(slot);
        }
    }
    return out;
}

/// The program with one header value replaced.
inline std::string apply_value_mutation(const std::string& text, const ValueSlot& slot,
                                        const std::string& replacement) {
    return text.substr(0, slot.begin) + replacement + text.substr(slot.end);
}

}  // namespace testsup
