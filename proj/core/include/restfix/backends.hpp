// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "restfix/repair_engine.hpp"

namespace restfix {

/// Connection settings for an OpenAI-style chat completion service. The
/// credential is read from the named environment variable at request time;
/// nothing secret lives in the config file.
struct HttpBackendConfig {
    std::string base_url;
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string credential_env;
    std::string system_message;
    std::optional<double> temperature;
    int timeout_seconds = 120;
};

class HttpChatBackend : public LlmBackend {
public:
    explicit HttpChatBackend(HttpBackendConfig config);
    std::string name() const override { return "http"; }
    std::string complete(const std::string& prompt) override;

private:
    HttpBackendConfig config_;
};

/// Replays canned responses from files named "<case_id>.attempt<k>.txt".
class MockFixtureBackend : public LlmBackend {
public:
    MockFixtureBackend(std::filesystem::path fixtures_dir, std::string case_id);
    std::string name() const override { return "mock"; }
    std::string complete(const std::string& prompt) override;

private:
    std::filesystem::path fixtures_dir_;
    std::string case_id_;
    int next_attempt_ = 1;
};

/// Returns the prompt unchanged. Useful as a deterministic always-failing
/// subject for exercising the attempt loop.
class EchoBackend : public LlmBackend {
public:
    std::string name() const override { return "echo"; }
    std::string complete(const std::string& prompt) override { return prompt; }
};

/// Hands out a fixed list of responses in order and fails once exhausted.
class ScriptedBackend : public LlmBackend {
public:
    explicit ScriptedBackend(std::vector<std::string> responses);
    std::string name() const override { return "scripted"; }
    std::string complete(const std::string& prompt) override;

    /// Prompts seen so far, in call order.
    const std::vector<std::string>& prompts() const { return prompts_; }

private:
    std::vector<std::string> responses_;
    std::vector<std::string> prompts_;
    std::size_t next_ = 0;
};

/// Instantiates a backend by name ("http", "mock", "echo") from a YAML config
/// file. Relative paths inside the config resolve against the config file's
/// directory. Throws BackendError on unknown names or unusable configs.
std::unique_ptr<LlmBackend> make_backend(const std::string& name,
                                         const std::filesystem::path& config_path,
                                         const std::string& case_id);

}  // namespace restfix
