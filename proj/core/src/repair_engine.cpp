// SPDX-License-Identifier: Apache-2.0
#include "restfix/repair_engine.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "restfix/errors.hpp"
#include "restfix/source_analysis.hpp"

namespace restfix {

namespace {

bool parses_as_source(const std::string& text) {
    try {
        parse_source("<response>", text);
        return true;
    } catch (const restfix::SyntaxError&) {
        return false;
    }
}

enum class VerifyDetail { Clean, ParseFailed, Dirty };

VerifyDetail verify_detail(const std::string& candidate, const SpecModel& spec) {
    SourceModel model;
    try {
        model = parse_source("<candidate>", candidate);
    } catch (const restfix::SyntaxError&) {
        return VerifyDetail::ParseFailed;
    }
    const DeviationReport report = detect(model, spec);
    if (!report.deviations.empty()) return VerifyDetail::Dirty;
    for (const auto& warning : report.warnings)
        if (warning.kind == WarningKind::Skipped) return VerifyDetail::Dirty;
    return VerifyDetail::Clean;
}

}  // namespace

std::optional<std::string> extract_code_block(const std::string& response) {
    const auto fence = response.find("```");
    if (fence == std::string::npos) {
        std::string_view trimmed = response;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\n' ||
                                    trimmed.front() == '\r' || trimmed.front() == '\t'))
            trimmed.remove_prefix(1);
        if (trimmed.empty()) return std::nullopt;
        if (!parses_as_source(response)) return std::nullopt;
        return response;
    }
    const auto fence_line_end = response.find('\n', fence);
    if (fence_line_end == std::string::npos) return std::nullopt;
    const auto content_start = fence_line_end + 1;
    // The closing fence must sit at the start of a line.
    auto probe = content_start;
    while (true) {
        const auto close = response.find("```", probe);
        if (close == std::string::npos) return std::nullopt;
        if (close == content_start || response[close - 1] == '\n') {
            std::string content = response.substr(content_start, close - content_start);
            if (!content.empty() && content.back() == '\n') content.pop_back();
            if (!content.empty() && content.back() == '\r') content.pop_back();
            return content;
        }
        probe = close + 3;
    }
}

bool verify_repair(const std::string& candidate_source, const SpecModel& spec) {
    return verify_detail(candidate_source, spec) == VerifyDetail::Clean;
}

const char* to_string(FailureReason reason) {
    switch (reason) {
        case FailureReason::NoCodeBlock: return "NoCodeBlock";
        case FailureReason::SyntaxError: return "SyntaxError";
        case FailureReason::DeviationsRemain: return "DeviationsRemain";
        case FailureReason::BackendError: return "BackendError";
    }
    return "?";
}

std::optional<std::string> RepairOutcome::fixed_source() const {
    for (const auto& attempt : attempts)
        if (attempt.verified) return attempt.extracted_source;
    return std::nullopt;
}

RepairOutcome repair(const std::string& source_text, const DeviationReport& report,
                     const SpecModel& spec, LlmBackend& backend, const RepairOptions& options) {
    RepairOutcome outcome;
    outcome.case_id = options.case_id;
    outcome.attempts_budget = options.attempts_budget;

    const RepairPrompt prompt = options.mode == PromptMode::Dcfix
                                    ? build_prompt(source_text, report, options.prompt_template)
                                    : build_baseline_prompt(source_text, options.prompt_template);
    const std::string rendered = prompt.render();

    for (int attempt_no = 0; attempt_no < options.attempts_budget; ++attempt_no) {
        Attempt attempt;
        attempt.prompt_mode = options.mode;
        try {
            attempt.raw_response = backend.complete(rendered);
        } catch (const BackendError& err) {
            attempt.raw_response = err.what();
            attempt.failure_reason = FailureReason::BackendError;
            outcome.attempts.push_back(std::move(attempt));
            continue;
        }
        auto candidate = extract_code_block(attempt.raw_response);
        if (!candidate) {
            attempt.failure_reason = FailureReason::NoCodeBlock;
            outcome.attempts.push_back(std::move(attempt));
            continue;
        }
        attempt.extracted_source = std::move(candidate);
        switch (verify_detail(*attempt.extracted_source, spec)) {
            case VerifyDetail::Clean:
                attempt.verified = true;
                outcome.attempts.push_back(std::move(attempt));
                outcome.success = true;
                return outcome;
            case VerifyDetail::ParseFailed:
                attempt.failure_reason = FailureReason::SyntaxError;
                break;
            case VerifyDetail::Dirty:
                attempt.failure_reason = FailureReason::DeviationsRemain;
                break;
        }
        outcome.attempts.push_back(std::move(attempt));
    }
    return outcome;
}

RepairOutcome repair(const std::string& source_text, const DeviationReport& report,
                     const SpecModel& spec, LlmBackend& backend, PromptMode mode,
                     int attempts_budget) {
    RepairOptions options;
    options.mode = mode;
    options.attempts_budget = attempts_budget;
    return repair(source_text, report, spec, backend, options);
}

nlohmann::ordered_json outcome_to_json(const RepairOutcome& outcome) {
    nlohmann::ordered_json doc;
    doc["case"] = outcome.case_id;
    doc["success"] = outcome.success;
    doc["attempts_budget"] = outcome.attempts_budget;
    doc["attempts_used"] = outcome.attempts.size();
    auto& attempts = doc["attempts"] = nlohmann::ordered_json::array();
    int number = 0;
    for (const auto& attempt : outcome.attempts) {
        nlohmann::ordered_json entry;
        entry["attempt"] = ++number;
        entry["prompt_mode"] = to_string(attempt.prompt_mode);
        entry["verified"] = attempt.verified;
        entry["failure_reason"] =
            attempt.failure_reason ? nlohmann::ordered_json(to_string(*attempt.failure_reason))
                                   : nlohmann::ordered_json(nullptr);
        entry["raw_response"] = attempt.raw_response;
        entry["extracted_source"] = attempt.extracted_source
                                        ? nlohmann::ordered_json(*attempt.extracted_source)
                                        : nlohmann::ordered_json(nullptr);
        attempts.push_back(std::move(entry));
    }
    return doc;
}

std::string outcome_to_text(const RepairOutcome& outcome) {
    std::ostringstream out;
    if (outcome.success) {
        out << "repair verified after " << outcome.attempts.size() << " attempt"
            << (outcome.attempts.size() == 1 ? "" : "s") << "\n";
    } else {
        out << "repair failed: " << outcome.attempts.size() << " attempt"
            << (outcome.attempts.size() == 1 ? "" : "s") << " of " << outcome.attempts_budget
            << " budget exhausted";
        if (!outcome.attempts.empty() && outcome.attempts.back().failure_reason)
            out << " (last: " << to_string(*outcome.attempts.back().failure_reason) << ")";
        out << "\n";
    }
    return out.str();
}

}  // namespace restfix
