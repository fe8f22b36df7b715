#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ccbench/codemetrics.hpp"
#include "ccbench/simetrics.hpp"

namespace ccbench {

enum RowFlag : unsigned {
    kFlagFailedRequest = 1u << 0,
    kFlagEmptyGeneration = 1u << 1,
    kFlagInheritedMetrics = 1u << 2,
    kFlagOversizePair = 1u << 3,
    kFlagTooShort = 1u << 4,
};

std::string flag_names(unsigned flags);       // canonical ';'-joined list
unsigned flags_from_names(const std::string&);

struct ScoreRow {
    std::string sample_id;
    std::string category;
    int ratio_tenths = 0;
    SimilarityScores whole;
    SimilarityScores fragment;
    StaticMetrics statics;
    long long generated_chars = 0;
    unsigned flags = 0;
};

struct RatioMeans {
    double cyclomatic_avg = 0.0;
    double halstead_bugs = 0.0;
    double halstead_effort = 0.0;
    double length_ratio = 0.0;
    std::size_t rows = 0;
};

struct RunMetadata {
    std::string endpoint;
    std::string model;
    std::string corpus_digest;
    std::string timestamp;  // ISO-8601 UTC of the newest corpus file
};

struct RunSummary {
    std::size_t rows_total = 0;
    std::size_t rows_scored = 0;  // rows contributing to heatmaps
    std::size_t failed_requests = 0;
    std::size_t empty_generations = 0;
    std::size_t inherited_metrics = 0;
    std::size_t oversize_pairs = 0;
    std::size_t too_short = 0;
};

enum class HeatAlg { ro, jw, hamming, dl };

struct HeatmapGrid {
    HeatAlg alg = HeatAlg::ro;
    CompareMode mode = CompareMode::whole_file;
    std::vector<int> ratio_tenths;
    int buckets = 10;
    // counts[ratio_index][bucket]; every ratio column sums to the number of
    // scored rows at that ratio
    std::vector<std::vector<long long>> counts;
};

struct ReportBundle {
    RunMetadata metadata;
    std::map<int, RatioMeans> per_ratio;  // keyed by ratio_tenths
    RatioMeans reference;                 // originals; rows = sample count
    RunSummary summary;
    std::vector<HeatmapGrid> heatmaps;
};

struct AggregateConfig {
    std::vector<int> ratio_tenths;
    int buckets = 10;
    bool fragment_truncation = true;
    bool mode_whole = true;
    bool mode_fragment = true;
};

// Similarity values land in [0,1] buckets; 1.0 falls in the top bucket.
int bucket_index(double v, int buckets);

// Builds means, summary counts and heatmap grids. char_counts maps sample id
// to its original length, needed to normalize the distance metrics. Throws
// when every row is excluded.
ReportBundle aggregate(const std::vector<ScoreRow>& rows,
                       const std::map<std::string, std::size_t>& char_counts,
                       const RatioMeans& reference, const RunMetadata& metadata,
                       const AggregateConfig& cfg);

// Fixed 6-decimal rendering used in every artifact.
std::string format_double(double v);

void write_rows_csv(std::vector<ScoreRow> rows, const std::filesystem::path& path);
std::vector<ScoreRow> read_rows_csv(const std::filesystem::path& path);

// Writes rows.csv + heatmap CSVs (csv), summary.json (json) and the SVG
// charts (svg). Returns the paths written.
std::vector<std::filesystem::path> emit(const ReportBundle& bundle,
                                        const std::vector<ScoreRow>& rows,
                                        const std::filesystem::path& out_dir,
                                        const std::set<std::string>& formats);

}  // namespace ccbench
