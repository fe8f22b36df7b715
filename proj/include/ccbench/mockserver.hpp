#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccbench/corpus.hpp"

namespace ccbench {

enum class MockStrategy { echo_remainder, fixed_text, seeded_noise, fixed_empty };

const char* strategy_name(MockStrategy s);
std::optional<MockStrategy> strategy_from_name(std::string_view name);

struct MockConfig {
    MockStrategy strategy = MockStrategy::echo_remainder;
    std::string fixed_text;
    double noise_rate = 5.0;  // edits per 100 remainder characters
    std::uint64_t noise_seed = 42;
    std::size_t max_chars = 0;  // truncate returned text; 0 = unlimited
    int delay_ms = 0;
    std::string auth_token;  // require this bearer token when non-empty
};

// Deterministic splittable PRNG; identical sequences on every platform.
struct SplitMix64 {
    std::uint64_t state = 0;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

std::uint64_t fnv1a64(std::string_view bytes);

// Sample whose content starts with the prefix; ambiguity is resolved toward
// the longest id, then the lexicographically smallest. Null when none match.
const SourceSample* match_sample(const std::vector<SourceSample>& samples,
                                 const std::string& prefix);

// Completion text for a matched sample under the configured strategy.
std::string mock_completion_text(const SourceSample& sample, const std::string& prefix,
                                 const MockConfig& cfg);

class MockServer {
public:
    MockServer(std::vector<SourceSample> samples, MockConfig cfg);
    ~MockServer();

    // port 0 picks a free one. Returns false when binding fails.
    bool start(const std::string& host = "127.0.0.1", int port = 0);
    void stop();
    int port() const { return port_; }
    std::string base_url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
    std::string host_;
};

}  // namespace ccbench
