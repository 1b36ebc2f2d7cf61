// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace restfix::detail {

/// Parses YAML text into a JSON tree so one importer path can serve both
/// syntaxes. Plain scalars map to bool/int/double only for the unambiguous
/// spellings (true/false, decimal digits, float grammar); everything else,
/// including YAML 1.1 oddities like "on" and "yes", stays a string.
/// Throws ParseError on malformed input.
nlohmann::ordered_json yaml_to_json(std::string_view text);

/// Parses JSON text, wrapping syntax failures in ParseError.
nlohmann::ordered_json json_parse(std::string_view text);

}  // namespace restfix::detail
