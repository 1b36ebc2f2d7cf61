// SPDX-License-Identifier: Apache-2.0
#include "restfix/backends.hpp"

#include <cstdlib>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "restfix/errors.hpp"
#include "restfix/file_util.hpp"
#include "yaml_json.hpp"

namespace restfix {

namespace {

std::string require_string(const nlohmann::ordered_json& config, const char* key,
                           const std::filesystem::path& config_path) {
    if (!config.contains(key) || !config[key].is_string())
        throw BackendError("backend config " + config_path.string() +
                           " is missing required string field \"" + key + "\"");
    return config[key].get<std::string>();
}

}  // namespace

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw BackendError("http backend needs a base_url");
    if (config_.model.empty()) throw BackendError("http backend needs a model");
}

std::string HttpChatBackend::complete(const std::string& prompt) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);

    httplib::Headers headers;
    if (!config_.credential_env.empty()) {
        const char* token = std::getenv(config_.credential_env.c_str());
        if (!token || !*token)
            throw BackendError("environment variable " + config_.credential_env +
                               " is not set; it must hold the API credential");
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    nlohmann::json body;
    body["model"] = config_.model;
    auto& messages = body["messages"] = nlohmann::json::array();
    if (!config_.system_message.empty())
        messages.push_back({{"role", "system"}, {"content", config_.system_message}});
    messages.push_back({{"role", "user"}, {"content", prompt}});
    if (config_.temperature) body["temperature"] = *config_.temperature;

    auto result = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!result)
        throw BackendError("http request to " + config_.base_url + config_.path +
                           " failed: " + httplib::to_string(result.error()));
    if (result->status != 200)
        throw BackendError("completion service returned status " +
                           std::to_string(result->status) + ": " +
                           result->body.substr(0, 400));

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& err) {
        throw BackendError(std::string("completion response is not JSON: ") + err.what());
    }
    if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty())
        throw BackendError("completion response carries no choices");
    const auto& message = doc["choices"][0];
    if (!message.contains("message") || !message["message"].contains("content") ||
        !message["message"]["content"].is_string())
        throw BackendError("completion response lacks choices[0].message.content");
    return message["message"]["content"].get<std::string>();
}

MockFixtureBackend::MockFixtureBackend(std::filesystem::path fixtures_dir, std::string case_id)
    : fixtures_dir_(std::move(fixtures_dir)), case_id_(std::move(case_id)) {
    if (case_id_.empty()) throw BackendError("mock backend needs a case id");
}

std::string MockFixtureBackend::complete(const std::string&) {
    const auto file =
        fixtures_dir_ / (case_id_ + ".attempt" + std::to_string(next_attempt_) + ".txt");
    ++next_attempt_;
    std::error_code ec;
    if (!std::filesystem::exists(file, ec))
        throw BackendError("no fixture response at " + file.string());
    return read_file(file);
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

std::string ScriptedBackend::complete(const std::string& prompt) {
    prompts_.push_back(prompt);
    if (next_ >= responses_.size())
        throw BackendError("scripted backend has no response for call " +
                           std::to_string(next_ + 1));
    return responses_[next_++];
}

std::unique_ptr<LlmBackend> make_backend(const std::string& name,
                                         const std::filesystem::path& config_path,
                                         const std::string& case_id) {
    nlohmann::ordered_json config;
    if (!config_path.empty()) {
        std::string text;
        try {
            text = read_file(config_path);
        } catch (const std::runtime_error& err) {
            throw BackendError(err.what());
        }
        try {
            config = detail::yaml_to_json(text);
        } catch (const ParseError& err) {
            throw BackendError("backend config " + config_path.string() + ": " + err.what());
        }
    }
    const auto config_dir =
        config_path.empty() ? std::filesystem::path(".") : config_path.parent_path();

    if (name == "echo") return std::make_unique<EchoBackend>();

    if (name == "mock") {
        if (config_path.empty())
            throw BackendError("mock backend needs a config file with fixtures_dir");
        std::filesystem::path dir = require_string(config, "fixtures_dir", config_path);
        if (dir.is_relative()) dir = config_dir / dir;
        return std::make_unique<MockFixtureBackend>(dir, case_id);
    }

    if (name == "http") {
        if (config_path.empty())
            throw BackendError("http backend needs a config file");
        HttpBackendConfig http;
        http.base_url = require_string(config, "base_url", config_path);
        http.model = require_string(config, "model", config_path);
        if (config.contains("path")) http.path = config["path"].get<std::string>();
        if (config.contains("credential_env"))
            http.credential_env = config["credential_env"].get<std::string>();
        if (config.contains("system_message"))
            http.system_message = config["system_message"].get<std::string>();
        if (config.contains("temperature"))
            http.temperature = config["temperature"].get<double>();
        if (config.contains("timeout_seconds"))
            http.timeout_seconds = config["timeout_seconds"].get<int>();
        return std::make_unique<HttpChatBackend>(std::move(http));
    }

    throw BackendError("unknown backend \"" + name + "\" (expected http, mock, or echo)");
}

}  // namespace restfix
