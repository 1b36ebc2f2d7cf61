// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace restfix::detail {

struct Token {
    enum class Kind : uint8_t { Name, Number, String, FString, Op, Newline, Indent, Dedent, End };
    static constexpr uint8_t kRaw = 1;  // raw string literal, escapes untouched

    Kind kind = Kind::End;
    std::string text;  // Name/Op: spelling; Number: raw; String: decoded; FString: raw inner
    uint8_t flags = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    int line = 1, col = 1;
    int end_line = 1, end_col = 1;
};

/// Tokenizes a Python-subset source fragment. base_* seed the position
/// bookkeeping so embedded fragments (f-string holes) report file-absolute
/// spans. Throws SyntaxError on unterminated strings or bad indentation.
std::vector<Token> tokenize(std::string_view text, std::size_t base_offset = 0,
                            int base_line = 1, int base_col = 1);

/// Decodes the common backslash escapes; unknown escapes keep the backslash.
std::string decode_escapes(std::string_view raw);

}  // namespace restfix::detail
