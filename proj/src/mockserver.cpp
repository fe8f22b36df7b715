#include "ccbench/mockserver.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ccbench/digest.hpp"
#include "ccbench/utf8.hpp"

namespace ccbench {

namespace {

using ordered_json = nlohmann::ordered_json;

const char32_t kNoiseAlphabet[] = U"abcdefghijklmnopqrstuvwxyz0123456789_ ";
constexpr std::size_t kNoiseAlphabetSize =
    sizeof(kNoiseAlphabet) / sizeof(kNoiseAlphabet[0]) - 1;

std::string truncate_chars(std::string text, std::size_t max_chars) {
    if (max_chars == 0) return text;
    std::size_t end = utf8::byte_offset_of_scalar(text, max_chars);
    if (end < text.size()) text.resize(end);
    return text;
}

std::string apply_noise(const std::string& remainder, const MockConfig& cfg) {
    auto decoded = utf8::decode(remainder);
    std::vector<char32_t> chars(decoded.text.begin(), decoded.text.end());
    const std::size_t edits = static_cast<std::size_t>(
        static_cast<double>(chars.size()) * cfg.noise_rate / 100.0);
    SplitMix64 rng{cfg.noise_seed ^ fnv1a64(remainder)};
    for (std::size_t e = 0; e < edits; ++e) {
        const std::uint64_t op = chars.empty() ? 2 : rng.next() % 3;
        const char32_t repl = kNoiseAlphabet[rng.next() % kNoiseAlphabetSize];
        if (op == 0) {  // replace
            chars[rng.next() % chars.size()] = repl;
        } else if (op == 1) {  // delete
            chars.erase(chars.begin() +
                        static_cast<std::ptrdiff_t>(rng.next() % chars.size()));
        } else {  // insert
            chars.insert(chars.begin() +
                             static_cast<std::ptrdiff_t>(rng.next() % (chars.size() + 1)),
                         repl);
        }
    }
    return utf8::encode(std::u32string(chars.begin(), chars.end()));
}

}  // namespace

const char* strategy_name(MockStrategy s) {
    switch (s) {
        case MockStrategy::echo_remainder: return "echo_remainder";
        case MockStrategy::fixed_text: return "fixed_text";
        case MockStrategy::seeded_noise: return "seeded_noise";
        case MockStrategy::fixed_empty: return "fixed_empty";
    }
    return "unknown";
}

std::optional<MockStrategy> strategy_from_name(std::string_view name) {
    if (name == "echo_remainder") return MockStrategy::echo_remainder;
    if (name == "fixed_text") return MockStrategy::fixed_text;
    if (name == "seeded_noise") return MockStrategy::seeded_noise;
    if (name == "fixed_empty") return MockStrategy::fixed_empty;
    return std::nullopt;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

const SourceSample* match_sample(const std::vector<SourceSample>& samples,
                                 const std::string& prefix) {
    const SourceSample* best = nullptr;
    for (const auto& s : samples) {
        if (s.content.size() < prefix.size()) continue;
        if (s.content.compare(0, prefix.size(), prefix) != 0) continue;
        if (best == nullptr || s.id.size() > best->id.size() ||
            (s.id.size() == best->id.size() && s.id < best->id)) {
            best = &s;
        }
    }
    return best;
}

std::string mock_completion_text(const SourceSample& sample, const std::string& prefix,
                                 const MockConfig& cfg) {
    const std::string remainder = sample.content.substr(prefix.size());
    std::string text;
    switch (cfg.strategy) {
        case MockStrategy::echo_remainder: text = remainder; break;
        case MockStrategy::fixed_text: text = cfg.fixed_text; break;
        case MockStrategy::seeded_noise: text = apply_noise(remainder, cfg); break;
        case MockStrategy::fixed_empty: text.clear(); break;
    }
    return truncate_chars(std::move(text), cfg.max_chars);
}

struct MockServer::Impl {
    std::vector<SourceSample> samples;
    MockConfig cfg;
    httplib::Server server;
    std::thread runner;

    Impl(std::vector<SourceSample> s, MockConfig c) : samples(std::move(s)), cfg(std::move(c)) {
        server.Post("/v1/completions", [this](const httplib::Request& req,
                                              httplib::Response& res) {
            handle(req, res);
        });
    }

    void handle(const httplib::Request& req, httplib::Response& res) {
        res.set_header("X-Mock-Strategy", strategy_name(cfg.strategy));
        if (!cfg.auth_token.empty()) {
            if (req.get_header_value("Authorization") != "Bearer " + cfg.auth_token) {
                res.status = 401;
                res.set_content(R"({"error":"missing or wrong bearer token"})",
                                "application/json");
                return;
            }
        }
        auto body = nlohmann::json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.contains("language") ||
            !body["language"].is_string() || !body.contains("segments") ||
            !body["segments"].is_object() || !body["segments"].contains("prefix") ||
            !body["segments"]["prefix"].is_string()) {
            res.status = 422;
            res.set_content(
                R"({"error":"request must carry string language and segments.prefix"})",
                "application/json");
            return;
        }
        const std::string prefix = body["segments"]["prefix"].get<std::string>();
        const SourceSample* sample = match_sample(samples, prefix);
        if (sample == nullptr) {
            res.status = 422;
            res.set_content(R"({"error":"prefix does not match any corpus sample"})",
                            "application/json");
            return;
        }
        if (cfg.delay_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(cfg.delay_ms));
        }
        const std::string text = mock_completion_text(*sample, prefix, cfg);
        ordered_json out;
        out["id"] = "cmpl-" + sha256_hex(prefix).substr(0, 12);
        out["model"] = std::string("mock-") + strategy_name(cfg.strategy);
        out["choices"] = ordered_json::array();
        ordered_json choice;
        choice["index"] = 0;
        choice["text"] = text;
        out["choices"].push_back(std::move(choice));
        res.status = 200;
        res.set_content(out.dump(), "application/json");
    }
};

MockServer::MockServer(std::vector<SourceSample> samples, MockConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(samples), std::move(cfg))) {}

MockServer::~MockServer() { stop(); }

bool MockServer::start(const std::string& host, int port) {
    host_ = host;
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port(host);
        if (port_ <= 0) return false;
    } else {
        if (!impl_->server.bind_to_port(host, port)) return false;
        port_ = port;
    }
    impl_->runner = std::thread([this]() { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return true;
}

void MockServer::stop() {
    if (impl_ && impl_->runner.joinable()) {
        impl_->server.stop();
        impl_->runner.join();
    }
}

std::string MockServer::base_url() const {
    return "http://" + host_ + ":" + std::to_string(port_);
}

}  // namespace ccbench
