// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "restfix/deviation_detector.hpp"
#include "restfix/repair_engine.hpp"

namespace restfix {

struct CorpusCase {
    std::string case_id;
    std::string api_name;
    std::filesystem::path source_file;
    std::filesystem::path spec_file;
    // Multiset in manifest order; empty marks a conforming control case.
    std::vector<DeviationCategory> expected_categories;
    std::optional<std::filesystem::path> reference_fix;
};

/// Reads the corpus manifest (root itself when it is a file, otherwise
/// root/manifest.yaml). Paths inside the manifest resolve against the
/// manifest's directory. Returns cases sorted by case_id. Throws
/// ManifestError on missing files, duplicate ids, or unknown categories.
std::vector<CorpusCase> load_corpus(const std::filesystem::path& root);

struct RatioCell {
    int numerator = 0;
    int denominator = 0;
};

/// "n/a" when the denominator is zero, else "num/den".
std::string to_string(const RatioCell& cell);

struct CaseDetection {
    std::string case_id;
    std::string api_name;
    std::vector<DeviationCategory> expected;
    std::vector<DeviationCategory> found;  // one entry per reported deviation
    bool detected = false;        // found covers expected (misuse cases only)
    bool false_positive = false;  // control case that still reported deviations
    DeviationReport report;
};

struct DetectionTable {
    std::vector<CaseDetection> cases;  // case_id order
    std::vector<std::string> apis;     // first-appearance order

    /// detected/total over misuse cases expecting the category.
    RatioCell cell(const std::string& api, DeviationCategory category) const;
    /// Sum of the category cells for one API (the table's Total row).
    RatioCell api_total(const std::string& api) const;
    RatioCell grand_total() const;
    int control_count() const;
    int false_positive_count() const;
    const CaseDetection* find(const std::string& case_id) const;
};

struct EvalOptions {
    unsigned workers = 0;  // 0 picks the processor count
};

DetectionTable run_detection_eval(const std::vector<CorpusCase>& cases,
                                  const EvalOptions& options = {});

/// Builds one backend per (case, mode) run. Must be safe to call from
/// multiple threads; each returned backend is used by a single thread.
using BackendFactory =
    std::function<std::unique_ptr<LlmBackend>(const CorpusCase&, PromptMode)>;

struct RepairCaseOutcome {
    std::string case_id;
    std::string api_name;
    std::vector<DeviationCategory> expected;
    PromptMode mode = PromptMode::Dcfix;
    RepairOutcome outcome;
};

struct FixRateTable {
    std::vector<RepairCaseOutcome> outcomes;  // case_id order, mode-major within a case
    std::vector<std::string> apis;
    std::vector<PromptMode> modes;

    /// fixed/attempted; attempted counts only cases the detector caught.
    RatioCell cell(const std::string& api, DeviationCategory category, PromptMode mode) const;
    RatioCell api_total(const std::string& api, PromptMode mode) const;
    RatioCell grand_total(PromptMode mode) const;
};

struct RepairEvalOptions {
    std::vector<PromptMode> modes = {PromptMode::Dcfix, PromptMode::Baseline};
    int attempts_budget = 5;
    PromptTemplate prompt_template = default_prompt_template();
    unsigned workers = 0;
};

/// Runs the repair loop for every detected case under every mode. Backend
/// failures are recorded in the per-case outcome, never aborting the sweep.
FixRateTable run_repair_eval(const std::vector<CorpusCase>& cases,
                             const DetectionTable& detection,
                             const BackendFactory& make_case_backend,
                             const RepairEvalOptions& options = {});

/// Convenience overload sharing one backend across cases; runs sequentially
/// because backends are stateful.
FixRateTable run_repair_eval(const std::vector<CorpusCase>& cases,
                             const DetectionTable& detection, LlmBackend& backend,
                             RepairEvalOptions options = {});

std::string render_detection_table(const DetectionTable& table);
std::string render_fix_rate_table(const FixRateTable& table);
nlohmann::ordered_json detection_to_json(const DetectionTable& table);
nlohmann::ordered_json fix_rate_to_json(const FixRateTable& table);

}  // namespace restfix
