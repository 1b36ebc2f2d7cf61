// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <restfix/errors.hpp>
#include <restfix/file_util.hpp>
#include <restfix/source_analysis.hpp>
#include <restfix/spec_model.hpp>

#include "support/mini_interpreter.hpp"
#include "support/program_generator.hpp"

using namespace restfix;

namespace {

SourceModel parse(std::string text) { return parse_source("test.py", std::move(text)); }

std::string golden_path(const char* name) {
    return std::string(RESTFIX_GOLDEN_DIR) + "/" + name;
}

/// Arena index of the latest module-level binding for `name`, or -1.
int module_binding(const SourceModel& model, const std::string& name) {
    int value = -1;
    for (const Binding& b : model.scopes[0].bindings)
        if (b.name == name) value = b.value;
    return value;
}

testsup::MiniString ms(const char* text) {
    testsup::MiniString s;
    s.parts.push_back({true, text});
    return s;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

}  // namespace

TEST_CASE("binding table maps HEADERS to a two-key map literal") {
    SourceModel model = parse(read_file(golden_path("header_misuse.py")));
    int headers = module_binding(model, "HEADERS");
    REQUIRE(headers >= 0);
    ResolvedMap map = resolve_mapping_expression(model, headers);
    REQUIRE(map.entries.size() == 2);
    CHECK(map.entries[0].key.known_text() == "Authorization");
    CHECK(map.entries[1].key.known_text() == "Content-Type");
    CHECK_FALSE(map.has_unknown_spread);
}

TEST_CASE("empty file parses to an empty module") {
    SourceModel model = parse("");
    REQUIRE(model.root >= 0);
    CHECK(model.node(model.root).kind == NodeKind::Module);
    CHECK(model.node(model.root).children.empty());
    REQUIRE(model.scopes.size() == 1);
    CHECK(model.scopes[0].bindings.empty());
}

TEST_CASE("thirty assignments: distinct bound names match a manual line scan") {
    std::mt19937 rng(8101);
    const char* pool[] = {"alpha", "beta",  "gamma", "delta", "host", "url",
                          "token", "extra", "name",  "tag",   "kind", "mode"};
    std::string text;
    std::vector<std::string> lines;
    for (int i = 0; i < 30; ++i) {
        std::string line = std::string(pool[rng() % 12]) + " = 'v" + std::to_string(i) + "'";
        lines.push_back(line);
        text += line + "\n";
    }

    // Independent oracle: walk the lines by hand, no parser involved.
    std::set<std::string> oracle;
    for (const std::string& line : lines) {
        std::size_t eq = line.find(" = ");
        REQUIRE(eq != std::string::npos);
        std::string lhs = line.substr(0, eq);
        REQUIRE(is_identifier(lhs));
        oracle.insert(lhs);
    }

    SourceModel model = parse(text);
    CHECK(model.scopes[0].bindings.size() == 30);  // one entry per assignment
    std::set<std::string> names;
    for (const Binding& b : model.scopes[0].bindings) names.insert(b.name);
    CHECK(names == oracle);
}

TEST_CASE("parse_source reports syntax errors with position") {
    try {
        parse("x = 'unterminated\n");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("find_api_literals") {
    SUBCASE("one hit on the host assignment") {
        SourceModel model = parse(read_file(golden_path("combined_misuse.py")));
        auto hits = find_api_literals(model, "api.switch-bot.com");
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].first == "https://api.switch-bot.com");
        CHECK(hits[0].second.start_line == 9);
    }
    SUBCASE("no occurrence") {
        SourceModel model = parse("x = 'https://other.example/path'\n");
        CHECK(find_api_literals(model, "api.switch-bot.com").empty());
    }
    SUBCASE("domain inside a comment is not a literal") {
        SourceModel model = parse("# talks to api.switch-bot.com\nx = 'unrelated'\n");
        CHECK(find_api_literals(model, "api.switch-bot.com").empty());
    }
    SUBCASE("document order over several hits") {
        SourceModel model = parse(
            "a = 'https://d.example/one'\n"
            "b = 'https://d.example/two'\n"
            "c = f'{a}https://d.example/three'\n");
        auto hits = find_api_literals(model, "d.example");
        REQUIRE(hits.size() == 3);
        CHECK(hits[0].second.start_line == 1);
        CHECK(hits[1].second.start_line == 2);
        CHECK(hits[2].second.start_line == 3);
    }
}

TEST_CASE("resolve_string_expression") {
    SUBCASE("f-string over a bound host") {
        SourceModel model = parse(
            "API_HOST = 'https://api.switch-bot.com'\n"
            "URL = f\"{API_HOST}/v1.0/devices\"\n");
        ResolvedString url = resolve_string_expression(model, module_binding(model, "URL"));
        CHECK(url.fully_known);
        REQUIRE(url.parts.size() == 2);
        CHECK(url.parts[0] == StringPart{true, "https://api.switch-bot.com"});
        CHECK(url.parts[1] == StringPart{true, "/v1.0/devices"});
        CHECK(url.known_text() == "https://api.switch-bot.com/v1.0/devices");
    }
    SUBCASE("bare literal") {
        SourceModel model = parse("X = 'abc'\n");
        ResolvedString x = resolve_string_expression(model, module_binding(model, "X"));
        CHECK(x.fully_known);
        REQUIRE(x.parts.size() == 1);
        CHECK(x.parts[0] == StringPart{true, "abc"});
    }
    SUBCASE("unknown name becomes an unknown part keeping its source text") {
        SourceModel model = parse("url = f'{host}/x'\n");
        ResolvedString url = resolve_string_expression(model, module_binding(model, "url"));
        CHECK_FALSE(url.fully_known);
        REQUIRE(url.parts.size() == 2);
        CHECK(url.parts[0] == StringPart{false, "host"});
        CHECK(url.parts[1] == StringPart{true, "/x"});
    }
    SUBCASE("cyclic bindings terminate") {
        SourceModel model = parse("a = b\nb = a\nurl = a\n");
        ResolvedString url = resolve_string_expression(model, module_binding(model, "url"));
        CHECK_FALSE(url.fully_known);
    }
}

TEST_CASE("concatenation chains agree with the reference interpreter") {
    std::mt19937 rng(8102);
    const char* chunks[] = {"https://", "api", ".example", "/v1", "/items", "x", "-", "42"};
    for (int round = 0; round < 30; ++round) {
        std::string text;
        testsup::MiniEnv env;
        std::vector<std::string> names;
        for (int i = 0; i < 5; ++i) {
            std::string name = "s" + std::to_string(i);
            std::string value = chunks[rng() % 8];
            text += name + " = '" + value + "'\n";
            env.assign(name, testsup::gen_lit(value));
            names.push_back(name);
        }
        text += "total = " + names[0];
        std::vector<testsup::GenExpr> ops = {testsup::gen_name(names[0])};
        for (int i = 1; i < 5; ++i) {
            text += " + " + names[i];
            ops.push_back(testsup::gen_name(names[i]));
        }
        text += "\n";

        testsup::MiniString expected = env.eval(testsup::gen_concat(ops));
        REQUIRE(expected.fully_known());

        SourceModel model = parse(text);
        ResolvedString total = resolve_string_expression(model, module_binding(model, "total"));
        CHECK(total.fully_known);
        CHECK(total.known_text() == expected.known_text());
    }
}

TEST_CASE("monotone unknowns: an opaque call never disturbs earlier known parts") {
    const std::string literals[] = {"'https://m.example'", "'/v1'", "'/items'", "'/7'", "'/on'"};
    auto build = [&](int replaced) {
        std::string text;
        for (int i = 0; i < 5; ++i) {
            text += "p" + std::to_string(i) + " = " +
                    (i == replaced ? std::string("mystery()") : literals[i]) + "\n";
        }
        text += "total = p0 + p1 + p2 + p3 + p4\n";
        return text;
    };

    SourceModel base = parse(build(-1));
    ResolvedString all_known = resolve_string_expression(base, module_binding(base, "total"));
    REQUIRE(all_known.fully_known);
    REQUIRE(all_known.parts.size() == 5);

    for (int replaced = 0; replaced < 5; ++replaced) {
        SourceModel model = parse(build(replaced));
        ResolvedString got = resolve_string_expression(model, module_binding(model, "total"));
        CHECK_FALSE(got.fully_known);
        REQUIRE(got.parts.size() == 5);
        for (int i = 0; i < replaced; ++i) CHECK(got.parts[i] == all_known.parts[i]);
        CHECK_FALSE(got.parts[replaced].known);
    }
}

TEST_CASE("resolve_mapping_expression") {
    SUBCASE("empty map literal") {
        SourceModel model = parse("M = {}\n");
        ResolvedMap m = resolve_mapping_expression(model, module_binding(model, "M"));
        CHECK(m.entries.empty());
        CHECK_FALSE(m.has_unknown_spread);
    }
    SUBCASE("merge of two literals matches the reference interpreter") {
        SourceModel model = parse(
            "A = {'x': '1', 'y': '2'}\n"
            "B = {'y': '3', 'z': '4'}\n"
            "M = {**A, **B}\n");
        ResolvedMap m = resolve_mapping_expression(model, module_binding(model, "M"));

        testsup::MiniDict a;
        a.set("x", ms("1"));
        a.set("y", ms("2"));
        testsup::MiniDict b;
        b.set("y", ms("3"));
        b.set("z", ms("4"));
        a.merge(b);

        REQUIRE(m.entries.size() == a.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            CHECK(m.entries[i].key.known_text() == a.entries[i].first);
            CHECK(m.entries[i].value.known_text() == a.entries[i].second.known_text());
        }
        CHECK_FALSE(m.has_unknown_spread);
    }
    SUBCASE("update() folds like a merge") {
        SourceModel model = parse(
            "A = {'x': '1'}\n"
            "A.update({'x': '9', 'y': '2'})\n"
            "M = A\n");
        ResolvedMap m = resolve_mapping_expression(model, module_binding(model, "M"));
        REQUIRE(m.entries.size() == 2);
        CHECK(m.entries[0].key.known_text() == "x");
        CHECK(m.entries[0].value.known_text() == "9");
        CHECK(m.entries[1].key.known_text() == "y");
        CHECK_FALSE(m.has_unknown_spread);
    }
    SUBCASE("scalar values take canonical text") {
        SourceModel model = parse("M = {'on': True, 'level': 3, 'note': None, 'off': False}\n");
        ResolvedMap m = resolve_mapping_expression(model, module_binding(model, "M"));
        REQUIRE(m.entries.size() == 4);
        CHECK(m.entries[0].value.known_text() == "true");
        CHECK(m.entries[1].value.known_text() == "3");
        CHECK(m.entries[2].value.known_text() == "null");
        CHECK(m.entries[3].value.known_text() == "false");
    }
    SUBCASE("unresolvable spread sets the flag but keeps literal entries") {
        SourceModel model = parse("M = {**mk_auth(), 'a': '1'}\n");
        ResolvedMap m = resolve_mapping_expression(model, module_binding(model, "M"));
        CHECK(m.has_unknown_spread);
        REQUIRE(m.entries.size() == 1);
        CHECK(m.entries[0].key.known_text() == "a");
    }
    SUBCASE("NotAMapping for values that never trace to a map literal") {
        SourceModel strlit = parse("M = 'text'\n");
        CHECK_THROWS_AS(resolve_mapping_expression(strlit, module_binding(strlit, "M")),
                        NotAMapping);
        SourceModel call = parse("M = build()\n");
        CHECK_THROWS_AS(resolve_mapping_expression(call, module_binding(call, "M")), NotAMapping);
    }
}

TEST_CASE("extract_call_sites on the golden header misuse") {
    SourceModel model = parse(read_file(golden_path("header_misuse.py")));
    SpecModel spec = load_spec(read_file(golden_path("switchbot.yaml")));
    auto [sites, warnings] = extract_call_sites(model, spec);
    REQUIRE(sites.size() == 1);
    CHECK(sites[0].method == HttpMethod::Get);
    CHECK(sites[0].url.fully_known);
    CHECK(sites[0].url.known_text() == "https://api.switch-bot.com/v1.1/devices");
    REQUIRE(sites[0].headers.has_value());
    CHECK(sites[0].headers->entries.size() == 2);
    CHECK_FALSE(sites[0].body.has_value());

    // HEADERS is defined after its use; the fallback must be flagged.
    bool forward = false;
    for (const AnalysisWarning& w : warnings)
        if (w.kind == WarningKind::ForwardBinding) forward = true;
    CHECK(forward);
}

TEST_CASE("extract_call_sites ignores calls without the spec domain") {
    SpecModel spec = load_spec(read_file(golden_path("switchbot.yaml")));
    SourceModel model = parse(
        "import requests\n"
        "requests.get('https://other.example/devices')\n"
        "requests.get('https://api.switch-bot.com/v1.1/devices', headers={'a': '1'})\n");
    auto [sites, warnings] = extract_call_sites(model, spec);
    REQUIRE(sites.size() == 1);
    CHECK(sites[0].call_span.start_line == 3);
}

TEST_CASE("extract_call_sites returns nothing for a call-free file") {
    SpecModel spec = load_spec(read_file(golden_path("switchbot.yaml")));
    SourceModel model = parse("x = 'just text'\n");
    auto [sites, warnings] = extract_call_sites(model, spec);
    CHECK(sites.empty());
    CHECK(warnings.empty());
}

TEST_CASE("unresolvable url with the domain still yields a site plus a warning") {
    SpecModel spec = load_spec(read_file(golden_path("switchbot.yaml")));
    SourceModel model = parse(
        "import requests\n"
        "requests.get(f'https://api.switch-bot.com/v1.1/devices/{pick()}/status')\n");
    auto [sites, warnings] = extract_call_sites(model, spec);
    REQUIRE(sites.size() == 1);
    CHECK_FALSE(sites[0].url.fully_known);
    bool unresolved = false;
    for (const AnalysisWarning& w : warnings)
        if (w.kind == WarningKind::UnresolvedUrl) unresolved = true;
    CHECK(unresolved);
}

TEST_CASE("fifty generated files: extracted count equals planted count, in order") {
    std::mt19937 rng(8103);
    SpecModel spec = testsup::gen_spec();
    for (int i = 0; i < 50; ++i) {
        testsup::GeneratedProgram program = testsup::generate_program(rng);
        SourceModel model = parse_source("gen.py", program.source);
        auto [sites, warnings] = extract_call_sites(model, spec);
        REQUIRE(sites.size() == program.calls.size());
        for (std::size_t s = 1; s < sites.size(); ++s)
            CHECK(sites[s - 1].call_span.start_line < sites[s].call_span.start_line);
    }
}

TEST_CASE("extract_call_sites is stable across repeated runs") {
    SourceModel model = parse(read_file(golden_path("combined_misuse.py")));
    SpecModel spec = load_spec(read_file(golden_path("switchbot.yaml")));
    auto [a, wa] = extract_call_sites(model, spec);
    auto [b, wb] = extract_call_sites(model, spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].call_span == b[i].call_span);
        CHECK(a[i].url == b[i].url);
        CHECK(a[i].headers == b[i].headers);
        CHECK(a[i].body == b[i].body);
    }
    CHECK(wa.size() == wb.size());
}
