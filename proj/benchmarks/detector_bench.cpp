// SPDX-License-Identifier: Apache-2.0
// Microbenchmarks for the hot paths: spec loading, endpoint matching, and
// whole-file detection on a mid-sized client.
#include <sstream>
#include <string>

#include <benchmark/benchmark.h>

#include "restfix/deviation_detector.hpp"
#include "restfix/source_analysis.hpp"
#include "restfix/spec_model.hpp"

namespace {

const char* kNativeSpec = R"(restfix_spec: 1
api_name: Device Cloud API
domain: api.device-cloud.example
base_path: /v1.1
endpoints:
  - method: GET
    path: /devices
    required_headers: [Authorization, sign, t, nonce]
  - method: GET
    path: /devices/{deviceId}/status
    required_headers: [Authorization, sign, t, nonce]
  - method: POST
    path: /devices/{deviceId}/commands
    required_headers: [Authorization, sign, t, nonce]
    required_body:
      - name: commandType
        value: command
      - name: command
      - name: parameter
  - method: GET
    path: /scenes
    required_headers: [Authorization, sign, t, nonce]
  - method: POST
    path: /scenes/{sceneId}/execute
    required_headers: [Authorization, sign, t, nonce]
)";

std::string big_spec_document(int endpoint_count) {
    std::ostringstream doc;
    doc << "restfix_spec: 1\n"
           "api_name: Wide API\n"
           "domain: wide.example\n"
           "base_path: /v2\n"
           "endpoints:\n";
    for (int i = 0; i < endpoint_count; ++i) {
        doc << "  - method: GET\n    path: /resource" << i << "/{id}/detail\n"
            << "    required_headers: [Authorization]\n";
    }
    return doc.str();
}

// A client of repeating blocks: constant bindings, concatenations, one
// requests call per block. 10 lines per block.
std::string synthetic_client(int blocks) {
    std::ostringstream src;
    src << "import requests\n\n"
        << "HOST = 'https://api.device-cloud.example'\n"
        << "BASE = HOST + '/v1.1'\n"
        << "HEADERS = {'Authorization': 'token', 'sign': 's', 't': '1', 'nonce': 'n'}\n\n";
    for (int i = 0; i < blocks; ++i) {
        src << "def fetch_status_" << i << "(device_id):\n"
            << "    suffix = '/status'\n"
            << "    url = f'{BASE}/devices/{device_id}' + suffix\n"
            << "    extra = {'trace': '" << i << "'}\n"
            << "    headers = {**HEADERS}\n"
            << "    label = 'block " << i << "'\n"
            << "    if device_id:\n"
            << "        label = label + '!'\n"
            << "    resp = requests.get(url, headers=headers)\n"
            << "    return resp.json()\n\n";
    }
    return src.str();
}

void BM_LoadSpec(benchmark::State& state) {
    for (auto _ : state) {
        auto spec = restfix::load_spec(kNativeSpec);
        benchmark::DoNotOptimize(spec);
    }
}
BENCHMARK(BM_LoadSpec);

void BM_LookupEndpoint(benchmark::State& state) {
    const auto spec = restfix::load_spec(big_spec_document(64));
    for (auto _ : state) {
        auto match = restfix::lookup_endpoint(spec, restfix::HttpMethod::Get,
                                              "/v2/resource42/abc/detail");
        benchmark::DoNotOptimize(match);
    }
}
BENCHMARK(BM_LookupEndpoint);

void BM_Detect500LineFile(benchmark::State& state) {
    const auto spec = restfix::load_spec(kNativeSpec);
    const std::string source = synthetic_client(50);  // about 500 lines
    for (auto _ : state) {
        auto model = restfix::parse_source("bench.py", source);
        auto report = restfix::detect(model, spec);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_Detect500LineFile);

void BM_ParseOnly500LineFile(benchmark::State& state) {
    const std::string source = synthetic_client(50);
    for (auto _ : state) {
        auto model = restfix::parse_source("bench.py", source);
        benchmark::DoNotOptimize(model);
    }
}
BENCHMARK(BM_ParseOnly500LineFile);

}  // namespace

BENCHMARK_MAIN();
