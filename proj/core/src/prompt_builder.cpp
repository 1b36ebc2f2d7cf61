// SPDX-License-Identifier: Apache-2.0
#include "restfix/prompt_builder.hpp"

#include <sstream>

#include "restfix/errors.hpp"

namespace restfix {

namespace {

constexpr const char* kTemplateText =
    "You are an AI specialized in fixing programming bugs. \n"
    "Please modify the code provided by the user according to the given instructions. \n"
    "When making changes, avoid altering the overall structure of the program. \n"
    "Focus only on simple fixes that address the bug and its related parts. \n"
    "Only return the corrected code inside a single code block. \n"
    "Do not include any explanations or additional text.\n"
    "Please Update the code to match the latest API specifications the following code.\n"
    "\n"
    "${target program}\n";

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string render_payload(const UnsatisfiedSpecification& unsat) {
    switch (unsat.category) {
        case DeviationCategory::Endpoint:
            if (!unsat.candidates.empty())
                return "endpoint " + join(unsat.candidates, " or ");
            return "an endpoint matching " + unsat.method + " " + unsat.actual_path;
        case DeviationCategory::RequestHeaders:
            return "header attributes " + join(unsat.missing, ", ");
        case DeviationCategory::RequestBody: {
            std::vector<std::string> parts;
            if (!unsat.missing.empty()) parts.push_back("body fields " + join(unsat.missing, ", "));
            for (const auto& mm : unsat.mismatches)
                parts.push_back("field " + mm.field + "=" + mm.expected);
            return join(parts, "; ");
        }
    }
    return {};
}

RepairPrompt assemble(const std::string& source_text, const PromptTemplate& prompt_template,
                      std::vector<std::string> annotations, PromptMode mode) {
    const auto pos = prompt_template.text.find(kTargetProgramPlaceholder);
    if (pos == std::string::npos)
        throw TemplateError("prompt template lacks the ${target program} placeholder");
    RepairPrompt prompt;
    prompt.template_text = prompt_template.text;
    prompt.system_instructions = prompt_template.text;
    prompt.system_instructions.erase(pos, kTargetProgramPlaceholder.size());
    prompt.program_block = source_text;
    prompt.deviation_annotations = std::move(annotations);
    prompt.mode = mode;
    return prompt;
}

}  // namespace

PromptTemplate default_prompt_template() { return PromptTemplate{kTemplateText}; }

PromptTemplate load_prompt_template(std::string text) {
    if (text.find(kTargetProgramPlaceholder) == std::string::npos)
        throw TemplateError("prompt template lacks the ${target program} placeholder");
    return PromptTemplate{std::move(text)};
}

const char* to_string(PromptMode mode) {
    return mode == PromptMode::Dcfix ? "dcfix" : "baseline";
}

std::string RepairPrompt::render() const {
    const auto pos = template_text.find(kTargetProgramPlaceholder);
    if (pos == std::string::npos)
        throw TemplateError("prompt template lacks the ${target program} placeholder");
    std::string filled;
    for (const auto& note : deviation_annotations) filled += note;
    filled += program_block;
    std::string out = template_text;
    out.replace(pos, kTargetProgramPlaceholder.size(), filled);
    return out;
}

std::string render_annotation(const DeviationPoint& deviation) {
    std::vector<std::string> payloads;
    for (const auto& unsat : deviation.unsatisfied) payloads.push_back(render_payload(unsat));
    std::ostringstream line;
    line << "Line " << deviation.span.start_line << ": " << to_string(deviation.category)
         << " deviation — required: " << join(payloads, "; ") << "\n";
    return line.str();
}

RepairPrompt build_prompt(const std::string& source_text, const DeviationReport& report,
                          const PromptTemplate& prompt_template) {
    if (report.deviations.empty())
        throw EmptyReport("cannot build a repair prompt from a report with no deviations");
    std::vector<std::string> annotations;
    annotations.reserve(report.deviations.size());
    for (const auto& dev : report.deviations) annotations.push_back(render_annotation(dev));
    return assemble(source_text, prompt_template, std::move(annotations), PromptMode::Dcfix);
}

RepairPrompt build_baseline_prompt(const std::string& source_text,
                                   const PromptTemplate& prompt_template) {
    return assemble(source_text, prompt_template, {}, PromptMode::Baseline);
}

}  // namespace restfix
