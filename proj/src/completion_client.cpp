#include "ccbench/completion_client.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ccbench/digest.hpp"

namespace ccbench {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kRetryBackoffMs = 200;

// scheme://host[:port] goes to the HTTP client, the rest is a path prefix.
void split_base_url(const std::string& base, std::string& host_part, std::string& path_prefix) {
    auto scheme_end = base.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto slash = base.find('/', host_start);
    if (slash == std::string::npos) {
        host_part = base;
        path_prefix.clear();
    } else {
        host_part = base.substr(0, slash);
        path_prefix = base.substr(slash);
        while (!path_prefix.empty() && path_prefix.back() == '/') path_prefix.pop_back();
    }
}

bool atomic_write(const std::filesystem::path& path, const std::string& data) {
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid()) + "." +
           std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) & 0xFFFF);
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return false;
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) return false;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        return false;
    }
    return true;
}

// Pulls text/model out of a completion response. Returns an error message or
// empty on success.
std::string parse_completion_body(const std::string& body, std::string& text,
                                  std::string& model) {
    auto parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded()) return "response is not valid JSON";
    if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
        parsed["choices"].empty()) {
        return "response has no choices";
    }
    const auto& first = parsed["choices"][0];
    if (!first.contains("text") || !first["text"].is_string()) {
        return "first choice has no text field";
    }
    text = first["text"].get<std::string>();
    model = parsed.contains("model") && parsed["model"].is_string()
                ? parsed["model"].get<std::string>()
                : "unknown";
    return "";
}

}  // namespace

std::string completion_request_body(const std::string& language, const std::string& prefix) {
    ordered_json body;
    body["language"] = language;
    body["segments"] = ordered_json::object();
    body["segments"]["prefix"] = prefix;
    return body.dump();
}

std::string cache_key(const std::string& language, const std::string& prefix) {
    std::string material = language;
    material.push_back('\x1f');
    material += prefix;
    return sha256_hex(material);
}

CompletionClient::CompletionClient(EndpointConfig cfg, std::string language)
    : cfg_(std::move(cfg)), language_(std::move(language)) {
    split_base_url(cfg_.base_url, host_part_, path_prefix_);
    if (!cfg_.cache_dir.empty()) std::filesystem::create_directories(cfg_.cache_dir);
}

CompletionOutcome CompletionClient::complete(const PrefixCase& pc) {
    CompletionOutcome out;
    out.sample_id = pc.sample_id;
    out.ratio_tenths = pc.ratio_tenths;

    const std::string key = cache_key(language_, pc.prefix);
    const std::filesystem::path cache_file =
        cfg_.cache_dir.empty() ? std::filesystem::path{} : cfg_.cache_dir / key;

    if (!cache_file.empty()) {
        std::ifstream in(cache_file, std::ios::binary);
        if (in) {
            std::ostringstream buf;
            buf << in.rdbuf();
            std::string err = parse_completion_body(buf.str(), out.text, out.model_id);
            if (err.empty()) {
                out.ok = true;
                out.from_cache = true;
                out.latency_ms = 0;
                return out;
            }
            // unreadable cache entry: fall through to a live request
        }
    }

    CompletionOutcome live = request_once(pc);
    int attempt = 0;
    while (!live.ok && live.error.rfind("transient:", 0) == 0 && attempt < cfg_.max_retries) {
        ++attempt;
        std::this_thread::sleep_for(std::chrono::milliseconds(kRetryBackoffMs * attempt));
        live = request_once(pc);
    }
    if (!live.ok && live.error.rfind("transient:", 0) == 0) {
        live.error = live.error.substr(std::string("transient:").size());
    }
    return live;
}

CompletionOutcome CompletionClient::request_once(const PrefixCase& pc) {
    CompletionOutcome out;
    out.sample_id = pc.sample_id;
    out.ratio_tenths = pc.ratio_tenths;

    httplib::Client client(host_part_);
    client.set_connection_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
    client.set_write_timeout(std::chrono::milliseconds(cfg_.timeout_ms));

    httplib::Headers headers;
    if (!cfg_.auth_token.empty()) {
        headers.emplace("Authorization", "Bearer " + cfg_.auth_token);
    }

    const std::string body = completion_request_body(language_, pc.prefix);
    const auto start = std::chrono::steady_clock::now();
    httplib::Result res =
        client.Post(path_prefix_ + "/v1/completions", headers, body, "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    out.latency_ms = elapsed > 0 ? elapsed : 1;  // 0 is reserved for cache hits

    if (!res) {
        out.error = "transient:connection failed (" + httplib::to_string(res.error()) + ")";
        return out;
    }
    if (res->status == 429 || res->status >= 500) {
        out.error = "transient:HTTP " + std::to_string(res->status);
        return out;
    }
    if (res->status != 200) {
        out.error = "HTTP " + std::to_string(res->status);
        return out;
    }
    std::string err = parse_completion_body(res->body, out.text, out.model_id);
    if (!err.empty()) {
        out.error = err;
        return out;
    }
    out.ok = true;
    if (!cfg_.cache_dir.empty()) {
        atomic_write(cfg_.cache_dir / cache_key(language_, pc.prefix), res->body);
    }
    return out;
}

std::vector<CompletionOutcome> CompletionClient::run_batch(const std::vector<PrefixCase>& cases) {
    std::vector<CompletionOutcome> results(cases.size());
    const int workers = std::max(1, std::min<int>(cfg_.max_parallel,
                                                  static_cast<int>(cases.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cases.size()) break;
            results[i] = complete(cases[i]);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace ccbench
