// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "restfix/deviation_detector.hpp"

namespace restfix {

inline constexpr std::string_view kTargetProgramPlaceholder = "${target program}";

/// Repair instruction template: free text containing the target-program
/// placeholder exactly once (the first occurrence is substituted).
struct PromptTemplate {
    std::string text;
};

/// The built-in template used when no template file is supplied.
PromptTemplate default_prompt_template();

/// Validates that the text carries the placeholder. Throws TemplateError.
PromptTemplate load_prompt_template(std::string text);

enum class PromptMode { Dcfix, Baseline };

const char* to_string(PromptMode mode);

struct RepairPrompt {
    std::string system_instructions;  // template text minus the placeholder
    std::string program_block;        // the full target source
    std::vector<std::string> deviation_annotations;  // one per deviation, each newline-terminated
    PromptMode mode = PromptMode::Dcfix;
    std::string template_text;        // full template, placeholder included

    /// Substitutes annotations + program for the placeholder. Template text
    /// passes through byte-identical.
    std::string render() const;
};

/// One annotation line (newline-terminated) describing a deviation point.
std::string render_annotation(const DeviationPoint& deviation);

/// Builds the deviation-annotated repair prompt. Throws EmptyReport when the
/// report carries no deviations.
RepairPrompt build_prompt(const std::string& source_text, const DeviationReport& report,
                          const PromptTemplate& prompt_template);

/// Builds the comparison prompt that embeds the program with no deviation
/// information.
RepairPrompt build_baseline_prompt(const std::string& source_text,
                                   const PromptTemplate& prompt_template);

}  // namespace restfix
