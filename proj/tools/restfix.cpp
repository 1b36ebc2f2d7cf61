// SPDX-License-Identifier: Apache-2.0
// Command-line driver: detect misuses, run the repair loop, evaluate corpora.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "restfix/backends.hpp"
#include "restfix/deviation_detector.hpp"
#include "restfix/errors.hpp"
#include "restfix/eval_harness.hpp"
#include "restfix/file_util.hpp"
#include "restfix/prompt_builder.hpp"
#include "restfix/repair_engine.hpp"
#include "restfix/source_analysis.hpp"
#include "restfix/spec_model.hpp"

namespace {

using namespace restfix;

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

struct DetectArgs {
    std::string spec_path;
    std::string format = "text";
    std::vector<std::string> files;
};

struct RepairArgs {
    std::string spec_path;
    std::string format = "text";
    std::string backend;
    std::string backend_config;
    int attempts = 5;
    std::string mode = "dcfix";
    std::string template_path;
    std::string out_path;
    std::string file;
};

struct EvalArgs {
    std::string corpus;
    std::string format = "text";
    std::string backend;
    std::string backend_config;
    int attempts = 5;
    std::string modes = "dcfix,baseline";
    std::string template_path;
    std::string out_path;
    unsigned workers = 0;
};

PromptTemplate resolve_template(const std::string& template_path) {
    if (template_path.empty()) return default_prompt_template();
    return load_prompt_template(read_file(template_path));
}

PromptMode parse_mode(const std::string& name) {
    if (name == "dcfix") return PromptMode::Dcfix;
    if (name == "baseline") return PromptMode::Baseline;
    throw std::runtime_error("unknown mode \"" + name + "\" (expected dcfix or baseline)");
}

std::filesystem::path fixed_sibling(const std::filesystem::path& input) {
    auto name = input.stem().string() + ".fixed" + input.extension().string();
    return input.parent_path() / name;
}

int cmd_detect(const DetectArgs& args) {
    const SpecModel spec = load_spec(read_file(args.spec_path));
    bool found_deviations = false;
    auto reports = nlohmann::ordered_json::array();
    std::string text_output;
    for (const auto& file : args.files) {
        const SourceModel model = parse_source(file, read_file(file));
        const DeviationReport report = detect(model, spec);
        found_deviations = found_deviations || !report.deviations.empty();
        if (args.format == "json")
            reports.push_back(report_to_json(report));
        else
            text_output += report_to_text(report);
    }
    if (args.format == "json")
        std::cout << (reports.size() == 1 ? reports[0].dump(2) : reports.dump(2)) << "\n";
    else
        std::cout << text_output;
    return found_deviations ? kExitFindings : kExitClean;
}

int cmd_repair(const RepairArgs& args) {
    const SpecModel spec = load_spec(read_file(args.spec_path));
    const std::string source = read_file(args.file);
    const SourceModel model = parse_source(args.file, source);
    const DeviationReport report = detect(model, spec);

    if (report.deviations.empty()) {
        if (args.format == "json")
            std::cout << nlohmann::ordered_json({{"nothing_to_repair", true}}).dump(2) << "\n";
        else
            std::cout << "nothing to repair\n";
        return kExitClean;
    }

    RepairOptions options;
    options.mode = parse_mode(args.mode);
    options.attempts_budget = args.attempts;
    options.case_id = std::filesystem::path(args.file).stem().string();
    options.prompt_template = resolve_template(args.template_path);

    const auto backend = make_backend(args.backend, args.backend_config, options.case_id);
    const RepairOutcome outcome = repair(source, report, spec, *backend, options);

    std::string written;
    if (outcome.success) {
        const auto out_path = args.out_path.empty()
                                  ? fixed_sibling(args.file)
                                  : std::filesystem::path(args.out_path);
        write_file(out_path, *outcome.fixed_source());
        written = out_path.string();
    }

    if (args.format == "json") {
        auto doc = outcome_to_json(outcome);
        doc["output_file"] = written.empty() ? nlohmann::ordered_json(nullptr)
                                             : nlohmann::ordered_json(written);
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << outcome_to_text(outcome);
        if (!written.empty()) std::cout << "wrote " << written << "\n";
    }
    return outcome.success ? kExitClean : kExitFindings;
}

int cmd_eval(const EvalArgs& args) {
    const auto cases = load_corpus(args.corpus);

    EvalOptions detect_options;
    detect_options.workers = args.workers;
    const DetectionTable detection = run_detection_eval(cases, detect_options);

    nlohmann::ordered_json doc;
    doc["detection"] = detection_to_json(detection);
    std::string text_output = render_detection_table(detection);

    if (!args.backend.empty()) {
        RepairEvalOptions repair_options;
        repair_options.modes.clear();
        std::stringstream tokens(args.modes);
        std::string token;
        while (std::getline(tokens, token, ','))
            if (!token.empty()) repair_options.modes.push_back(parse_mode(token));
        if (repair_options.modes.empty())
            throw std::runtime_error("--modes names no valid mode");
        repair_options.attempts_budget = args.attempts;
        repair_options.prompt_template = resolve_template(args.template_path);
        repair_options.workers = args.workers;

        const auto factory = [&args](const CorpusCase& corpus_case, PromptMode) {
            return make_backend(args.backend, args.backend_config, corpus_case.case_id);
        };
        const FixRateTable fix_rates = run_repair_eval(cases, detection, factory, repair_options);
        doc["repair"] = fix_rate_to_json(fix_rates);
        text_output += "\n" + render_fix_rate_table(fix_rates);
    }

    if (args.format == "json")
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << text_output;
    if (!args.out_path.empty()) write_file(args.out_path, doc.dump(2) + "\n");
    return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Static REST API misuse detection and LLM-driven repair"};
    app.require_subcommand(1);
    const auto format_check = CLI::IsMember({"text", "json"});

    DetectArgs detect_args;
    auto* detect_cmd = app.add_subcommand("detect", "Check client files against a spec");
    detect_cmd->add_option("--spec", detect_args.spec_path, "API specification file")->required();
    detect_cmd->add_option("--format", detect_args.format, "Output format")->check(format_check);
    detect_cmd->add_option("files", detect_args.files, "Python client files")->required();

    RepairArgs repair_args;
    auto* repair_cmd = app.add_subcommand("repair", "Detect and repair one client file");
    repair_cmd->add_option("--spec", repair_args.spec_path, "API specification file")->required();
    repair_cmd->add_option("--format", repair_args.format, "Output format")->check(format_check);
    repair_cmd->add_option("--backend", repair_args.backend, "Backend name (http, mock, echo)")
        ->required();
    repair_cmd->add_option("--backend-config", repair_args.backend_config,
                           "YAML backend config file");
    repair_cmd->add_option("--attempts", repair_args.attempts, "Attempt budget")
        ->check(CLI::PositiveNumber);
    repair_cmd->add_option("--mode", repair_args.mode, "Prompt mode")
        ->check(CLI::IsMember({"dcfix", "baseline"}));
    repair_cmd->add_option("--template", repair_args.template_path, "Prompt template file");
    repair_cmd->add_option("--out", repair_args.out_path,
                           "Repaired-source path (default: <name>.fixed<ext>)");
    repair_cmd->add_option("file", repair_args.file, "Python client file")->required();

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Run a corpus evaluation");
    eval_cmd->add_option("--format", eval_args.format, "Output format")->check(format_check);
    eval_cmd->add_option("--backend", eval_args.backend, "Backend for the repair sweep");
    eval_cmd->add_option("--backend-config", eval_args.backend_config,
                         "YAML backend config file");
    eval_cmd->add_option("--attempts", eval_args.attempts, "Attempt budget")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--modes", eval_args.modes, "Comma-separated prompt modes");
    eval_cmd->add_option("--template", eval_args.template_path, "Prompt template file");
    eval_cmd->add_option("--out", eval_args.out_path, "Write the JSON results here too");
    eval_cmd->add_option("--workers", eval_args.workers, "Worker threads (0 = processors)");
    eval_cmd->add_option("corpus", eval_args.corpus, "Corpus directory or manifest")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::CallForAllHelp& help) {
        return app.exit(help);
    } catch (const CLI::CallForVersion& version) {
        return app.exit(version);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kExitError;
    }

    try {
        if (detect_cmd->parsed()) return cmd_detect(detect_args);
        if (repair_cmd->parsed()) return cmd_repair(repair_args);
        if (eval_cmd->parsed()) return cmd_eval(eval_args);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitError;
    }
    std::cerr << "error: no command given\n";
    return kExitError;
}
