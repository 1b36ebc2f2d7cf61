// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include <restfix/deviation_detector.hpp>
#include <restfix/errors.hpp>
#include <restfix/file_util.hpp>
#include <restfix/prompt_builder.hpp>
#include <restfix/source_analysis.hpp>
#include <restfix/spec_model.hpp>

#include "support/program_generator.hpp"

using namespace restfix;

namespace {

// Frozen copy of the repair instructions; guards the built-in template
// against accidental edits.
const std::string kExpectedTemplate =
    "You are an AI specialized in fixing programming bugs. \n"
    "Please modify the code provided by the user according to the given instructions. \n"
    "When making changes, avoid altering the overall structure of the program. \n"
    "Focus only on simple fixes that address the bug and its related parts. \n"
    "Only return the corrected code inside a single code block. \n"
    "Do not include any explanations or additional text.\n"
    "Please Update the code to match the latest API specifications the following code.\n"
    "\n"
    "${target program}\n";

std::string golden_path(const char* name) {
    return std::string(RESTFIX_GOLDEN_DIR) + "/" + name;
}

/// Independent substitution: replace the first placeholder occurrence.
std::string substitute(std::string tmpl, const std::string& payload) {
    std::size_t pos = tmpl.find("${target program}");
    REQUIRE(pos != std::string::npos);
    return tmpl.replace(pos, std::string("${target program}").size(), payload);
}

DeviationReport report_for(const std::string& file, const SpecModel& spec) {
    return detect(parse_source(file, read_file(golden_path(file.c_str()))), spec);
}

}  // namespace

TEST_CASE("built-in template carries the expected instructions byte for byte") {
    CHECK(default_prompt_template().text == kExpectedTemplate);
    // the shipped template file must stay in sync with the built-in
    CHECK(read_file(RESTFIX_TEMPLATE_FILE) == kExpectedTemplate);
}

TEST_CASE("load_prompt_template requires the placeholder") {
    CHECK_THROWS_AS(load_prompt_template("fix this code\n"), TemplateError);
    PromptTemplate t = load_prompt_template("prefix ${target program} suffix");
    CHECK(t.text == "prefix ${target program} suffix");
}

TEST_CASE("prompt for the golden misuse annotates the header line") {
    SpecModel spec = load_spec(read_file(golden_path("switchbot.yaml")));
    std::string source = read_file(golden_path("header_misuse.py"));
    DeviationReport report = detect(parse_source("header_misuse.py", source), spec);
    RepairPrompt prompt = build_prompt(source, report, default_prompt_template());

    CHECK(prompt.mode == PromptMode::Dcfix);
    CHECK(prompt.program_block == source);
    REQUIRE(prompt.deviation_annotations.size() == 1);
    CHECK(prompt.deviation_annotations[0] ==
          "Line 18: RequestHeaders deviation — required: header attributes sign, t, nonce\n");

    std::string expected = substitute(kExpectedTemplate, prompt.deviation_annotations[0] + source);
    CHECK(prompt.render() == expected);
}

TEST_CASE("two deviations produce two ordered annotations") {
    SpecModel spec = load_spec(read_file(golden_path("switchbot.yaml")));
    DeviationReport report = report_for("combined_misuse.py", spec);
    std::string source = read_file(golden_path("combined_misuse.py"));
    RepairPrompt prompt = build_prompt(source, report, default_prompt_template());
    REQUIRE(prompt.deviation_annotations.size() == 2);
    CHECK(prompt.deviation_annotations[0] ==
          "Line 10: Endpoint deviation — required: endpoint /v1.1/devices or "
          "/v1.1/devices/{deviceId}/status or /v1.1/scenes\n");
    CHECK(prompt.deviation_annotations[1] ==
          "Line 12: RequestHeaders deviation — required: header attributes sign, t, nonce\n");
}

TEST_CASE("build_prompt rejects an empty report") {
    DeviationReport report;
    CHECK_THROWS_AS(build_prompt("x = 1\n", report, default_prompt_template()), EmptyReport);
}

TEST_CASE("baseline prompt is the annotated prompt minus the annotations") {
    SpecModel spec = load_spec(read_file(golden_path("switchbot.yaml")));
    std::string source = read_file(golden_path("header_misuse.py"));
    DeviationReport report = detect(parse_source("header_misuse.py", source), spec);

    RepairPrompt annotated = build_prompt(source, report, default_prompt_template());
    RepairPrompt baseline = build_baseline_prompt(source, default_prompt_template());

    CHECK(baseline.mode == PromptMode::Baseline);
    CHECK(baseline.deviation_annotations.empty());
    CHECK(baseline.render() == substitute(kExpectedTemplate, source));

    std::string stripped = annotated.render();
    for (const std::string& note : annotated.deviation_annotations) {
        std::size_t pos = stripped.find(note);
        REQUIRE(pos != std::string::npos);
        stripped.erase(pos, note.size());
    }
    CHECK(stripped == baseline.render());
}

TEST_CASE("empty source still renders the full instructions") {
    RepairPrompt prompt = build_baseline_prompt("", default_prompt_template());
    CHECK(prompt.program_block.empty());
    CHECK(prompt.render() == substitute(kExpectedTemplate, ""));
}

TEST_CASE("only the first placeholder occurrence is substituted") {
    PromptTemplate t = load_prompt_template("A ${target program} B ${target program} C");
    RepairPrompt prompt = build_baseline_prompt("X", t);
    CHECK(prompt.render() == "A X B ${target program} C");
}

TEST_CASE("rendered length follows the substitution arithmetic") {
    std::mt19937 rng(9301);
    SpecModel spec = testsup::gen_spec();
    PromptTemplate tmpl = default_prompt_template();
    const std::size_t placeholder = std::string("${target program}").size();

    int with_deviations = 0;
    for (int iter = 0; iter < 40 && with_deviations < 20; ++iter) {
        testsup::GeneratedProgram program = testsup::generate_program(rng);
        DeviationReport report = detect(parse_source("gen.py", program.source), spec);
        if (report.deviations.empty()) continue;
        ++with_deviations;

        RepairPrompt prompt = build_prompt(program.source, report, tmpl);
        std::size_t annotations = 0;
        for (const std::string& note : prompt.deviation_annotations) annotations += note.size();
        CHECK(prompt.render().size() ==
              tmpl.text.size() - placeholder + program.source.size() + annotations);
        CHECK(prompt.deviation_annotations.size() == report.deviations.size());

        // baseline never leaks any annotation payload
        std::string baseline = build_baseline_prompt(program.source, tmpl).render();
        for (const std::string& note : prompt.deviation_annotations) {
            std::size_t tail = note.find("required: ");
            REQUIRE(tail != std::string::npos);
            std::string payload = note.substr(tail);
            CHECK(baseline.find(payload) == std::string::npos);
        }
    }
    CHECK(with_deviations == 20);
}
