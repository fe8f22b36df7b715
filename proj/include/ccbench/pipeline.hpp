#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "ccbench/completion_client.hpp"
#include "ccbench/corpus.hpp"
#include "ccbench/prefixer.hpp"
#include "ccbench/report.hpp"

namespace ccbench {

struct RunConfig {
    CorpusConfig corpus;
    EndpointConfig endpoint;
    std::vector<int> ratio_tenths = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    bool fragment_truncation = true;
    int buckets = 10;
    std::filesystem::path out_dir = "out";
    std::string language = "python";
    std::uint64_t cell_budget = 1000000000;
    std::set<std::string> formats = {"csv", "json", "svg"};
    bool mode_whole = true;
    bool mode_fragment = true;
};

// JSON config file; missing keys keep their defaults. Throws on unknown
// ratios, bad buckets, or malformed JSON.
RunConfig load_config(const std::filesystem::path& path);

// "0.1,0.3" -> {1, 3}; validates each value is a multiple of 0.1 in (0,1).
std::vector<int> parse_ratios(const std::string& csv_list);

struct ScanStage {
    ScanResult corpus;
    std::string digest;
    std::string newest_mtime_utc;  // ISO-8601, drives the report timestamp
};

struct PrefixStage {
    std::vector<PrefixCase> cases;
    std::vector<std::string> too_short_ids;
};

ScanStage stage_scan(const RunConfig& cfg);  // also writes manifest.csv
PrefixStage stage_prefixes(const RunConfig& cfg, const std::vector<SourceSample>& samples);
std::vector<CompletionOutcome> stage_complete(const RunConfig& cfg,
                                              const std::vector<PrefixCase>& cases);
std::vector<ScoreRow> stage_analyze(const RunConfig& cfg, const ScanStage& scan,
                                    const PrefixStage& prefixes,
                                    const std::vector<CompletionOutcome>& outcomes);
ReportBundle stage_report(const RunConfig& cfg, const ScanStage& scan,
                          const std::vector<ScoreRow>& rows, const std::string& model);

// scan -> prefixes -> complete -> analyze -> report.
ReportBundle run_pipeline(const RunConfig& cfg);

// Artifact IO so each stage can run standalone.
void save_prefix_cases(const std::vector<PrefixCase>& cases,
                       const std::filesystem::path& path);
std::vector<PrefixCase> load_prefix_cases(const std::filesystem::path& path);
void save_completions(const std::vector<CompletionOutcome>& outcomes,
                      const std::filesystem::path& path);
std::vector<CompletionOutcome> load_completions(const std::filesystem::path& path);
void save_skipped(const std::vector<std::string>& too_short_ids,
                  const std::filesystem::path& path);

// Model id for report metadata: first successful outcome, else "unknown".
std::string model_from_outcomes(const std::vector<CompletionOutcome>& outcomes);

}  // namespace ccbench
