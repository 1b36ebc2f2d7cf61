// SPDX-License-Identifier: Apache-2.0
#include "restfix/eval_harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "restfix/errors.hpp"
#include "restfix/file_util.hpp"
#include "restfix/source_analysis.hpp"
#include "restfix/spec_model.hpp"
#include "yaml_json.hpp"

namespace restfix {

namespace {

constexpr std::array<DeviationCategory, 3> kCategories = {
    DeviationCategory::Endpoint, DeviationCategory::RequestHeaders,
    DeviationCategory::RequestBody};

constexpr std::array<const char*, 3> kCategoryLabels = {"Endpoint", "Request Headers",
                                                        "Request Body"};

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    unsigned requested = workers ? workers : std::thread::hardware_concurrency();
    if (requested == 0) requested = 1;
    const auto pool_size = static_cast<unsigned>(
        std::min<std::size_t>(requested, count));
    if (pool_size <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

bool covers(const std::vector<DeviationCategory>& found,
            const std::vector<DeviationCategory>& expected) {
    std::array<int, 3> have{};
    std::array<int, 3> need{};
    for (auto c : found) ++have[static_cast<int>(c)];
    for (auto c : expected) ++need[static_cast<int>(c)];
    for (int i = 0; i < 3; ++i)
        if (have[i] < need[i]) return false;
    return true;
}

bool expects(const std::vector<DeviationCategory>& expected, DeviationCategory category) {
    return std::find(expected.begin(), expected.end(), category) != expected.end();
}

RatioCell& accumulate(RatioCell& into, const RatioCell& cell) {
    into.numerator += cell.numerator;
    into.denominator += cell.denominator;
    return into;
}

std::string manifest_string(const nlohmann::json& entry, const char* key,
                            const std::string& context) {
    if (!entry.contains(key) || !entry[key].is_string() || entry[key].get<std::string>().empty())
        throw ManifestError("corpus manifest entry " + context + " needs a string \"" + key +
                            "\" field");
    return entry[key].get<std::string>();
}

void require_exists(const std::filesystem::path& path, const std::string& case_id) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        throw ManifestError("case " + case_id + " references a missing file: " + path.string());
}

std::map<std::filesystem::path, SpecModel> preload_specs(
    const std::vector<CorpusCase>& cases) {
    std::map<std::filesystem::path, SpecModel> specs;
    for (const auto& corpus_case : cases) {
        if (specs.count(corpus_case.spec_file)) continue;
        specs.emplace(corpus_case.spec_file, load_spec(read_file(corpus_case.spec_file)));
    }
    return specs;
}

std::vector<std::string> first_appearance_apis(const std::vector<CaseDetection>& cases) {
    std::vector<std::string> apis;
    for (const auto& cd : cases)
        if (std::find(apis.begin(), apis.end(), cd.api_name) == apis.end())
            apis.push_back(cd.api_name);
    return apis;
}

std::string pad(const std::string& text, std::size_t width) {
    std::string out = text;
    if (out.size() < width) out.append(width - out.size(), ' ');
    return out;
}

class ForwardingBackend : public LlmBackend {
public:
    explicit ForwardingBackend(LlmBackend& inner) : inner_(inner) {}
    std::string name() const override { return inner_.name(); }
    std::string complete(const std::string& prompt) override { return inner_.complete(prompt); }

private:
    LlmBackend& inner_;
};

}  // namespace

std::string to_string(const RatioCell& cell) {
    if (cell.denominator == 0) return "n/a";
    return std::to_string(cell.numerator) + "/" + std::to_string(cell.denominator);
}

std::vector<CorpusCase> load_corpus(const std::filesystem::path& root) {
    std::error_code ec;
    std::filesystem::path manifest = root;
    if (std::filesystem::is_directory(root, ec)) manifest = root / "manifest.yaml";
    if (!std::filesystem::exists(manifest, ec))
        throw ManifestError("corpus manifest not found: " + manifest.string());
    const std::filesystem::path base = manifest.parent_path();

    nlohmann::ordered_json doc;
    try {
        doc = detail::yaml_to_json(read_file(manifest));
    } catch (const ParseError& err) {
        throw ManifestError("corpus manifest " + manifest.string() + ": " + err.what());
    } catch (const std::runtime_error& err) {
        throw ManifestError(err.what());
    }

    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    if (doc.is_array())
        list = doc;
    else if (doc.is_object() && doc.contains("cases") && doc["cases"].is_array())
        list = doc["cases"];
    else if (!doc.is_null())
        throw ManifestError("corpus manifest " + manifest.string() +
                            " must be a YAML list of case entries");

    std::vector<CorpusCase> cases;
    std::set<std::string> seen_ids;
    int position = 0;
    for (const auto& entry : list) {
        ++position;
        const std::string context = "#" + std::to_string(position);
        if (!entry.is_object())
            throw ManifestError("corpus manifest entry " + context + " must be a mapping");
        CorpusCase corpus_case;
        corpus_case.case_id = manifest_string(entry, "id", context);
        corpus_case.api_name = manifest_string(entry, "api", context);
        corpus_case.source_file = base / manifest_string(entry, "source", context);
        corpus_case.spec_file = base / manifest_string(entry, "spec", context);
        if (entry.contains("expected")) {
            if (!entry["expected"].is_array())
                throw ManifestError("case " + corpus_case.case_id +
                                    ": \"expected\" must be a list of categories");
            for (const auto& item : entry["expected"]) {
                if (!item.is_string())
                    throw ManifestError("case " + corpus_case.case_id +
                                        ": \"expected\" must be a list of categories");
                const auto category = parse_deviation_category(item.get<std::string>());
                if (!category)
                    throw ManifestError("case " + corpus_case.case_id +
                                        ": unknown category \"" + item.get<std::string>() + "\"");
                corpus_case.expected_categories.push_back(*category);
            }
        }
        if (entry.contains("reference_fix"))
            corpus_case.reference_fix = base / manifest_string(entry, "reference_fix", context);

        if (!seen_ids.insert(corpus_case.case_id).second)
            throw ManifestError("duplicate case id: " + corpus_case.case_id);
        require_exists(corpus_case.source_file, corpus_case.case_id);
        require_exists(corpus_case.spec_file, corpus_case.case_id);
        if (corpus_case.reference_fix)
            require_exists(*corpus_case.reference_fix, corpus_case.case_id);
        cases.push_back(std::move(corpus_case));
    }
    std::sort(cases.begin(), cases.end(),
              [](const CorpusCase& a, const CorpusCase& b) { return a.case_id < b.case_id; });
    return cases;
}

RatioCell DetectionTable::cell(const std::string& api, DeviationCategory category) const {
    RatioCell cell;
    for (const auto& cd : cases) {
        if (cd.api_name != api || cd.expected.empty()) continue;
        if (!expects(cd.expected, category)) continue;
        ++cell.denominator;
        if (cd.detected) ++cell.numerator;
    }
    return cell;
}

RatioCell DetectionTable::api_total(const std::string& api) const {
    RatioCell total;
    for (auto category : kCategories) accumulate(total, cell(api, category));
    return total;
}

RatioCell DetectionTable::grand_total() const {
    RatioCell total;
    for (const auto& api : apis) accumulate(total, api_total(api));
    return total;
}

int DetectionTable::control_count() const {
    int count = 0;
    for (const auto& cd : cases)
        if (cd.expected.empty()) ++count;
    return count;
}

int DetectionTable::false_positive_count() const {
    int count = 0;
    for (const auto& cd : cases)
        if (cd.false_positive) ++count;
    return count;
}

const CaseDetection* DetectionTable::find(const std::string& case_id) const {
    for (const auto& cd : cases)
        if (cd.case_id == case_id) return &cd;
    return nullptr;
}

DetectionTable run_detection_eval(const std::vector<CorpusCase>& cases,
                                  const EvalOptions& options) {
    DetectionTable table;
    table.cases.resize(cases.size());
    const auto specs = preload_specs(cases);

    parallel_for(cases.size(), options.workers, [&](std::size_t i) {
        const CorpusCase& corpus_case = cases[i];
        CaseDetection result;
        result.case_id = corpus_case.case_id;
        result.api_name = corpus_case.api_name;
        result.expected = corpus_case.expected_categories;
        const SpecModel& spec = specs.at(corpus_case.spec_file);
        const std::string source = read_file(corpus_case.source_file);
        try {
            const SourceModel model = parse_source(corpus_case.source_file.string(), source);
            result.report = detect(model, spec);
        } catch (const SyntaxError& err) {
            result.report.file_path = corpus_case.source_file.string();
            result.report.spec_name = spec.api_name;
            result.report.warnings.push_back(AnalysisWarning{
                WarningKind::Skipped, std::string("source failed to parse: ") + err.what(),
                std::nullopt});
        }
        for (const auto& deviation : result.report.deviations)
            result.found.push_back(deviation.category);
        if (result.expected.empty())
            result.false_positive = !result.report.deviations.empty();
        else
            result.detected = covers(result.found, result.expected);
        table.cases[i] = std::move(result);
    });

    table.apis = first_appearance_apis(table.cases);
    return table;
}

RatioCell FixRateTable::cell(const std::string& api, DeviationCategory category,
                             PromptMode mode) const {
    RatioCell cell;
    for (const auto& record : outcomes) {
        if (record.api_name != api || record.mode != mode) continue;
        if (!expects(record.expected, category)) continue;
        ++cell.denominator;
        if (record.outcome.success) ++cell.numerator;
    }
    return cell;
}

RatioCell FixRateTable::api_total(const std::string& api, PromptMode mode) const {
    RatioCell total;
    for (auto category : kCategories) accumulate(total, cell(api, category, mode));
    return total;
}

RatioCell FixRateTable::grand_total(PromptMode mode) const {
    RatioCell total;
    for (const auto& api : apis) accumulate(total, api_total(api, mode));
    return total;
}

FixRateTable run_repair_eval(const std::vector<CorpusCase>& cases,
                             const DetectionTable& detection,
                             const BackendFactory& make_case_backend,
                             const RepairEvalOptions& options) {
    FixRateTable table;
    table.apis = detection.apis;
    table.modes = options.modes;

    std::map<std::string, const CorpusCase*> by_id;
    for (const auto& corpus_case : cases) by_id[corpus_case.case_id] = &corpus_case;

    struct WorkItem {
        const CorpusCase* corpus_case;
        const CaseDetection* detection;
        PromptMode mode;
    };
    std::vector<WorkItem> work;
    for (const auto& cd : detection.cases) {
        if (!cd.detected) continue;
        const auto it = by_id.find(cd.case_id);
        if (it == by_id.end()) continue;
        for (auto mode : options.modes) work.push_back({it->second, &cd, mode});
    }

    const auto specs = preload_specs(cases);
    table.outcomes.resize(work.size());

    parallel_for(work.size(), options.workers, [&](std::size_t i) {
        const WorkItem& item = work[i];
        RepairCaseOutcome record;
        record.case_id = item.corpus_case->case_id;
        record.api_name = item.corpus_case->api_name;
        record.expected = item.corpus_case->expected_categories;
        record.mode = item.mode;

        RepairOptions repair_options;
        repair_options.mode = item.mode;
        repair_options.attempts_budget = options.attempts_budget;
        repair_options.case_id = record.case_id;
        repair_options.prompt_template = options.prompt_template;

        const std::string source = read_file(item.corpus_case->source_file);
        const SpecModel& spec = specs.at(item.corpus_case->spec_file);
        try {
            auto backend = make_case_backend(*item.corpus_case, item.mode);
            if (!backend) throw BackendError("backend factory returned no backend");
            record.outcome =
                repair(source, item.detection->report, spec, *backend, repair_options);
        } catch (const BackendError& err) {
            record.outcome.case_id = record.case_id;
            record.outcome.attempts_budget = options.attempts_budget;
            Attempt attempt;
            attempt.prompt_mode = item.mode;
            attempt.raw_response = err.what();
            attempt.failure_reason = FailureReason::BackendError;
            record.outcome.attempts.push_back(std::move(attempt));
        }
        table.outcomes[i] = std::move(record);
    });
    return table;
}

FixRateTable run_repair_eval(const std::vector<CorpusCase>& cases,
                             const DetectionTable& detection, LlmBackend& backend,
                             RepairEvalOptions options) {
    options.workers = 1;  // one shared stateful backend
    return run_repair_eval(
        cases, detection,
        [&backend](const CorpusCase&, PromptMode) {
            return std::make_unique<ForwardingBackend>(backend);
        },
        options);
}

std::string render_detection_table(const DetectionTable& table) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{""};
    for (const auto& api : table.apis) header.push_back(api);
    rows.push_back(header);
    for (std::size_t c = 0; c < kCategories.size(); ++c) {
        std::vector<std::string> row{kCategoryLabels[c]};
        for (const auto& api : table.apis)
            row.push_back(to_string(table.cell(api, kCategories[c])));
        rows.push_back(row);
    }
    std::vector<std::string> total{"Total"};
    for (const auto& api : table.apis) total.push_back(to_string(table.api_total(api)));
    rows.push_back(total);

    std::vector<std::size_t> widths(rows[0].size(), 0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());

    std::ostringstream out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            if (i) out << " | ";
            out << pad(rows[r][i], widths[i]);
        }
        out << "\n";
        if (r == 0) {
            std::size_t line = 0;
            for (std::size_t i = 0; i < widths.size(); ++i) line += widths[i] + (i ? 3 : 0);
            out << std::string(line, '-') << "\n";
        }
    }
    if (table.control_count() > 0)
        out << "conforming controls: " << table.control_count()
            << ", false positives: " << table.false_positive_count() << "\n";
    int skipped = 0;
    for (const auto& cd : table.cases)
        for (const auto& warning : cd.report.warnings)
            if (warning.kind == WarningKind::Skipped) {
                ++skipped;
                break;
            }
    if (skipped > 0) out << "cases with skipped checks: " << skipped << "\n";
    return out.str();
}

std::string render_fix_rate_table(const FixRateTable& table) {
    const std::size_t mode_count = table.modes.size();
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> mode_header{""};
    for (std::size_t a = 0; a < table.apis.size(); ++a)
        for (auto mode : table.modes) mode_header.push_back(to_string(mode));
    rows.push_back(mode_header);
    for (std::size_t c = 0; c < kCategories.size(); ++c) {
        std::vector<std::string> row{kCategoryLabels[c]};
        for (const auto& api : table.apis)
            for (auto mode : table.modes)
                row.push_back(to_string(table.cell(api, kCategories[c], mode)));
        rows.push_back(row);
    }
    std::vector<std::string> total{"Total"};
    for (const auto& api : table.apis)
        for (auto mode : table.modes) total.push_back(to_string(table.api_total(api, mode)));
    rows.push_back(total);

    std::vector<std::size_t> widths(rows[0].size(), 0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());

    std::ostringstream out;
    // API group header spanning each API's mode columns.
    out << pad("", widths[0]);
    for (std::size_t a = 0; a < table.apis.size(); ++a) {
        std::size_t span = 0;
        for (std::size_t m = 0; m < mode_count; ++m)
            span += widths[1 + a * mode_count + m] + (m ? 3 : 0);
        const auto& api = table.apis[a];
        widths[1 + a * mode_count + mode_count - 1] +=
            api.size() > span ? api.size() - span : 0;
        span = std::max(span, api.size());
        out << " | " << pad(api, span);
    }
    out << "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < rows[r].size(); ++i) {
            if (i) out << " | ";
            out << pad(rows[r][i], widths[i]);
        }
        out << "\n";
        if (r == 0) {
            std::size_t line = 0;
            for (std::size_t i = 0; i < widths.size(); ++i) line += widths[i] + (i ? 3 : 0);
            out << std::string(line, '-') << "\n";
        }
    }
    return out.str();
}

nlohmann::ordered_json detection_to_json(const DetectionTable& table) {
    nlohmann::ordered_json doc;
    doc["apis"] = table.apis;
    auto& cells = doc["cells"] = nlohmann::ordered_json::array();
    for (const auto& api : table.apis) {
        for (std::size_t c = 0; c < kCategories.size(); ++c) {
            const RatioCell cell = table.cell(api, kCategories[c]);
            cells.push_back({{"api", api},
                             {"category", to_string(kCategories[c])},
                             {"detected", cell.numerator},
                             {"total", cell.denominator}});
        }
    }
    auto& totals = doc["api_totals"] = nlohmann::ordered_json::array();
    for (const auto& api : table.apis) {
        const RatioCell cell = table.api_total(api);
        totals.push_back(
            {{"api", api}, {"detected", cell.numerator}, {"total", cell.denominator}});
    }
    const RatioCell overall = table.grand_total();
    doc["overall"] = {{"detected", overall.numerator}, {"total", overall.denominator}};
    doc["controls"] = table.control_count();
    doc["false_positives"] = table.false_positive_count();
    auto& case_list = doc["cases"] = nlohmann::ordered_json::array();
    for (const auto& cd : table.cases) {
        nlohmann::ordered_json entry;
        entry["case"] = cd.case_id;
        entry["api"] = cd.api_name;
        auto& expected = entry["expected"] = nlohmann::ordered_json::array();
        for (auto category : cd.expected) expected.push_back(to_string(category));
        auto& found = entry["found"] = nlohmann::ordered_json::array();
        for (auto category : cd.found) found.push_back(to_string(category));
        entry["detected"] = cd.detected;
        entry["false_positive"] = cd.false_positive;
        auto& warnings = entry["warnings"] = nlohmann::ordered_json::array();
        for (const auto& warning : cd.report.warnings)
            warnings.push_back(
                {{"kind", to_string(warning.kind)}, {"message", warning.message}});
        case_list.push_back(std::move(entry));
    }
    return doc;
}

nlohmann::ordered_json fix_rate_to_json(const FixRateTable& table) {
    nlohmann::ordered_json doc;
    doc["apis"] = table.apis;
    auto& modes = doc["modes"] = nlohmann::ordered_json::array();
    for (auto mode : table.modes) modes.push_back(to_string(mode));
    auto& cells = doc["cells"] = nlohmann::ordered_json::array();
    for (const auto& api : table.apis) {
        for (std::size_t c = 0; c < kCategories.size(); ++c) {
            for (auto mode : table.modes) {
                const RatioCell cell = table.cell(api, kCategories[c], mode);
                cells.push_back({{"api", api},
                                 {"category", to_string(kCategories[c])},
                                 {"mode", to_string(mode)},
                                 {"fixed", cell.numerator},
                                 {"attempted", cell.denominator}});
            }
        }
    }
    auto& totals = doc["api_totals"] = nlohmann::ordered_json::array();
    for (const auto& api : table.apis) {
        for (auto mode : table.modes) {
            const RatioCell cell = table.api_total(api, mode);
            totals.push_back({{"api", api},
                              {"mode", to_string(mode)},
                              {"fixed", cell.numerator},
                              {"attempted", cell.denominator}});
        }
    }
    auto& case_list = doc["cases"] = nlohmann::ordered_json::array();
    for (const auto& record : table.outcomes) {
        nlohmann::ordered_json entry;
        entry["case"] = record.case_id;
        entry["api"] = record.api_name;
        entry["mode"] = to_string(record.mode);
        auto& expected = entry["expected"] = nlohmann::ordered_json::array();
        for (auto category : record.expected) expected.push_back(to_string(category));
        entry["outcome"] = outcome_to_json(record.outcome);
        case_list.push_back(std::move(entry));
    }
    return doc;
}

}  // namespace restfix
