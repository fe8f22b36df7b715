#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ccbench/prefixer.hpp"

namespace ccbench {

struct EndpointConfig {
    std::string base_url;    // e.g. "http://127.0.0.1:8080", may carry a path prefix
    std::string auth_token;  // sent as "Authorization: Bearer <token>" when non-empty
    int timeout_ms = 30000;
    int max_retries = 2;  // extra attempts after the first, on transient failures
    int max_parallel = 4;
    std::filesystem::path cache_dir;  // empty disables the response cache
};

struct CompletionOutcome {
    std::string sample_id;
    int ratio_tenths = 0;
    bool ok = false;
    std::string text;
    std::string model_id = "unknown";
    long long latency_ms = 0;  // 0 only for cache hits
    bool from_cache = false;
    std::string error;
};

// Request body: {"language": ..., "segments": {"prefix": ...}} with no
// suffix member at all.
std::string completion_request_body(const std::string& language, const std::string& prefix);

// Cache file name for a request; responses are stored verbatim.
std::string cache_key(const std::string& language, const std::string& prefix);

class CompletionClient {
public:
    explicit CompletionClient(EndpointConfig cfg, std::string language = "python");

    // One request, including cache lookup and retries on transient errors.
    CompletionOutcome complete(const PrefixCase& pc);

    // All cases with up to max_parallel concurrent requests. Results are in
    // input order regardless of completion order.
    std::vector<CompletionOutcome> run_batch(const std::vector<PrefixCase>& cases);

private:
    CompletionOutcome request_once(const PrefixCase& pc);

    EndpointConfig cfg_;
    std::string language_;
    std::string host_part_;  // scheme://host:port
    std::string path_prefix_;
};

}  // namespace ccbench
