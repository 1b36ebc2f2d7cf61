// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "restfix/deviation_detector.hpp"
#include "restfix/prompt_builder.hpp"
#include "restfix/spec_model.hpp"

namespace restfix {

/// A text-completion service. Implementations turn one prompt into one
/// response and throw BackendError on transport or protocol failure.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual std::string name() const = 0;
    virtual std::string complete(const std::string& prompt) = 0;
};

/// Pulls candidate source out of a model response: the contents of the first
/// fenced code block, or the whole response when it has no fence but parses
/// as source. Returns nullopt when neither applies.
std::optional<std::string> extract_code_block(const std::string& response);

/// True when the candidate parses and re-detection finds no deviations and
/// no skipped checks.
bool verify_repair(const std::string& candidate_source, const SpecModel& spec);

enum class FailureReason { NoCodeBlock, SyntaxError, DeviationsRemain, BackendError };

const char* to_string(FailureReason reason);

struct Attempt {
    PromptMode prompt_mode = PromptMode::Dcfix;
    std::string raw_response;
    std::optional<std::string> extracted_source;
    bool verified = false;
    std::optional<FailureReason> failure_reason;
};

struct RepairOutcome {
    std::string case_id;
    std::vector<Attempt> attempts;
    bool success = false;
    int attempts_budget = 0;

    /// Source of the verified attempt; nullopt when no attempt verified.
    std::optional<std::string> fixed_source() const;
};

struct RepairOptions {
    PromptMode mode = PromptMode::Dcfix;
    int attempts_budget = 5;
    std::string case_id;
    PromptTemplate prompt_template = default_prompt_template();
};

/// Runs the prompt/verify loop until an attempt verifies or the budget runs
/// out. The prompt is built once from the report; every attempt resends it.
RepairOutcome repair(const std::string& source_text, const DeviationReport& report,
                     const SpecModel& spec, LlmBackend& backend, const RepairOptions& options);

RepairOutcome repair(const std::string& source_text, const DeviationReport& report,
                     const SpecModel& spec, LlmBackend& backend,
                     PromptMode mode = PromptMode::Dcfix, int attempts_budget = 5);

nlohmann::ordered_json outcome_to_json(const RepairOutcome& outcome);

std::string outcome_to_text(const RepairOutcome& outcome);

}  // namespace restfix
