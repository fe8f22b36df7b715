#include "ccbench/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ccbench/codemetrics.hpp"
#include "ccbench/csvutil.hpp"
#include "ccbench/simetrics.hpp"
#include "ccbench/utf8.hpp"

namespace ccbench {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string iso8601_utc(std::time_t t) {
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::time_t newest_corpus_mtime(const CorpusConfig& cfg) {
    namespace fs = std::filesystem;
    std::time_t newest = 0;
    for (const auto& entry : fs::recursive_directory_iterator(cfg.root)) {
        if (!entry.is_regular_file()) continue;
        auto ft = fs::last_write_time(entry);
        // file_clock -> system_clock, then time_t
        auto sys = std::chrono::file_clock::to_sys(ft);
        std::time_t t = std::chrono::system_clock::to_time_t(sys);
        newest = std::max(newest, t);
    }
    return newest;
}

int validate_tenths(double ratio) {
    const double scaled = ratio * 10.0;
    const int rt = static_cast<int>(std::lround(scaled));
    if (rt < 1 || rt > 9 || std::fabs(scaled - rt) > 1e-9) {
        throw std::runtime_error("ratio must be a multiple of 0.1 in (0,1), got " +
                                 std::to_string(ratio));
    }
    return rt;
}

}  // namespace

std::vector<int> parse_ratios(const std::string& csv_list) {
    std::vector<int> out;
    std::string cur;
    std::istringstream in(csv_list);
    while (std::getline(in, cur, ',')) {
        if (cur.empty()) continue;
        out.push_back(validate_tenths(std::stod(cur)));
    }
    if (out.empty()) throw std::runtime_error("ratio list is empty");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config: " + path.string());
    json j = json::parse(in, nullptr, true, true);  // allow comments
    RunConfig cfg;
    if (j.contains("corpus")) {
        const auto& c = j["corpus"];
        if (c.contains("root")) cfg.corpus.root = c["root"].get<std::string>();
        if (c.contains("include_extension"))
            cfg.corpus.include_extension = c["include_extension"].get<std::string>();
        if (c.contains("min_chars")) cfg.corpus.min_chars = c["min_chars"].get<std::size_t>();
        if (c.contains("max_chars")) cfg.corpus.max_chars = c["max_chars"].get<std::size_t>();
        if (c.contains("category_depth"))
            cfg.corpus.category_depth = c["category_depth"].get<std::size_t>();
    }
    if (j.contains("endpoint")) {
        const auto& e = j["endpoint"];
        if (e.contains("base_url")) cfg.endpoint.base_url = e["base_url"].get<std::string>();
        if (e.contains("auth_token"))
            cfg.endpoint.auth_token = e["auth_token"].get<std::string>();
        if (e.contains("timeout_ms")) cfg.endpoint.timeout_ms = e["timeout_ms"].get<int>();
        if (e.contains("max_retries")) cfg.endpoint.max_retries = e["max_retries"].get<int>();
        if (e.contains("max_parallel"))
            cfg.endpoint.max_parallel = e["max_parallel"].get<int>();
        if (e.contains("cache_dir"))
            cfg.endpoint.cache_dir = e["cache_dir"].get<std::string>();
    }
    if (j.contains("ratios")) {
        cfg.ratio_tenths.clear();
        for (const auto& r : j["ratios"]) cfg.ratio_tenths.push_back(validate_tenths(r.get<double>()));
        std::sort(cfg.ratio_tenths.begin(), cfg.ratio_tenths.end());
        cfg.ratio_tenths.erase(
            std::unique(cfg.ratio_tenths.begin(), cfg.ratio_tenths.end()),
            cfg.ratio_tenths.end());
        if (cfg.ratio_tenths.empty()) throw std::runtime_error("config ratios list is empty");
    }
    if (j.contains("fragment_truncation"))
        cfg.fragment_truncation = j["fragment_truncation"].get<bool>();
    if (j.contains("buckets")) cfg.buckets = j["buckets"].get<int>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("language")) cfg.language = j["language"].get<std::string>();
    if (j.contains("cell_budget")) cfg.cell_budget = j["cell_budget"].get<std::uint64_t>();
    if (j.contains("formats")) {
        cfg.formats.clear();
        for (const auto& f : j["formats"]) cfg.formats.insert(f.get<std::string>());
    }
    if (j.contains("modes")) {
        cfg.mode_whole = false;
        cfg.mode_fragment = false;
        for (const auto& m : j["modes"]) {
            const std::string name = m.get<std::string>();
            if (name == "whole_file") cfg.mode_whole = true;
            else if (name == "fragment") cfg.mode_fragment = true;
            else throw std::runtime_error("unknown mode in config: " + name);
        }
        if (!cfg.mode_whole && !cfg.mode_fragment)
            throw std::runtime_error("config modes list is empty");
    }
    if (cfg.buckets < 1) throw std::runtime_error("buckets must be at least 1");
    return cfg;
}

ScanStage stage_scan(const RunConfig& cfg) {
    ScanStage stage;
    stage.corpus = scan_corpus(cfg.corpus);
    stage.digest = corpus_digest(stage.corpus.samples);
    stage.newest_mtime_utc = iso8601_utc(newest_corpus_mtime(cfg.corpus));
    std::filesystem::create_directories(cfg.out_dir);
    write_manifest(stage.corpus.samples, cfg.out_dir / "manifest.csv");
    return stage;
}

PrefixStage stage_prefixes(const RunConfig& cfg, const std::vector<SourceSample>& samples) {
    PrefixStage stage;
    for (const auto& sample : samples) {
        PrefixGenResult gen = generate_prefix_cases(sample, cfg.ratio_tenths);
        if (gen.too_short) {
            stage.too_short_ids.push_back(sample.id);
            continue;
        }
        for (auto& pc : gen.cases) stage.cases.push_back(std::move(pc));
    }
    std::filesystem::create_directories(cfg.out_dir);
    save_prefix_cases(stage.cases, cfg.out_dir / "prefix_cases.jsonl");
    save_skipped(stage.too_short_ids, cfg.out_dir / "skipped.csv");
    return stage;
}

std::vector<CompletionOutcome> stage_complete(const RunConfig& cfg,
                                              const std::vector<PrefixCase>& cases) {
    CompletionClient client(cfg.endpoint, cfg.language);
    std::vector<CompletionOutcome> outcomes = client.run_batch(cases);
    std::filesystem::create_directories(cfg.out_dir);
    save_completions(outcomes, cfg.out_dir / "completions.jsonl");
    return outcomes;
}

std::vector<ScoreRow> stage_analyze(const RunConfig& cfg, const ScanStage& scan,
                                    const PrefixStage& prefixes,
                                    const std::vector<CompletionOutcome>& outcomes) {
    if (prefixes.cases.size() != outcomes.size()) {
        throw std::runtime_error("prefix cases and completions are misaligned: " +
                                 std::to_string(prefixes.cases.size()) + " vs " +
                                 std::to_string(outcomes.size()));
    }
    std::map<std::string, const SourceSample*> by_id;
    for (const auto& s : scan.corpus.samples) by_id[s.id] = &s;

    // Originals are analyzed once and reused for every ratio.
    std::map<std::string, StaticMetrics> original_statics;
    for (const auto& s : scan.corpus.samples) {
        original_statics[s.id] = compute_static(s.content);
    }

    CompareOptions opts;
    opts.fragment_truncation = cfg.fragment_truncation;
    opts.cell_budget = cfg.cell_budget;

    std::vector<ScoreRow> rows;
    rows.reserve(prefixes.cases.size() +
                 prefixes.too_short_ids.size() * cfg.ratio_tenths.size());

    for (std::size_t i = 0; i < prefixes.cases.size(); ++i) {
        const PrefixCase& pc = prefixes.cases[i];
        const CompletionOutcome& oc = outcomes[i];
        auto found = by_id.find(pc.sample_id);
        if (found == by_id.end()) {
            throw std::runtime_error("prefix case references unknown sample: " +
                                     pc.sample_id);
        }
        const SourceSample& sample = *found->second;
        ScoreRow row;
        row.sample_id = pc.sample_id;
        row.category = sample.category;
        row.ratio_tenths = pc.ratio_tenths;
        row.whole.mode = CompareMode::whole_file;
        row.fragment.mode = CompareMode::fragment;

        if (!oc.ok) {
            row.flags |= kFlagFailedRequest;
            row.statics.length_ratio = 0.0;
            rows.push_back(std::move(row));
            continue;
        }

        DuplicateProgram dup = merge_completion(pc, oc.text);
        row.generated_chars = static_cast<long long>(
            utf8::count_scalars(dup.generated).value_or(dup.generated.size()));
        if (dup.generated.empty()) row.flags |= kFlagEmptyGeneration;

        if (cfg.mode_whole) {
            row.whole = compare(sample, dup, CompareMode::whole_file, opts);
        }
        if (row.whole.oversize) {
            // the fragment pair is never larger than the whole pair; keep the
            // two modes consistent at row level
            row.fragment.oversize = true;
        } else if (cfg.mode_fragment) {
            row.fragment = compare(sample, dup, CompareMode::fragment, opts);
        }
        if (row.whole.oversize || row.fragment.oversize) row.flags |= kFlagOversizePair;

        row.statics = analyze_with_fallback(dup, sample, original_statics[pc.sample_id]);
        if (row.statics.provenance == Provenance::inherited_from_original) {
            row.flags |= kFlagInheritedMetrics;
        }
        rows.push_back(std::move(row));
    }

    for (const auto& id : prefixes.too_short_ids) {
        auto found = by_id.find(id);
        const SourceSample* sample = found == by_id.end() ? nullptr : found->second;
        for (int rt : cfg.ratio_tenths) {
            ScoreRow row;
            row.sample_id = id;
            row.category = sample != nullptr ? sample->category : "uncategorized";
            row.ratio_tenths = rt;
            row.whole.mode = CompareMode::whole_file;
            row.fragment.mode = CompareMode::fragment;
            row.flags |= kFlagTooShort;
            row.statics.length_ratio = 0.0;
            rows.push_back(std::move(row));
        }
    }

    std::sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
        if (a.sample_id != b.sample_id) return a.sample_id < b.sample_id;
        return a.ratio_tenths < b.ratio_tenths;
    });
    std::filesystem::create_directories(cfg.out_dir);
    write_rows_csv(rows, cfg.out_dir / "rows.csv");
    return rows;
}

ReportBundle stage_report(const RunConfig& cfg, const ScanStage& scan,
                          const std::vector<ScoreRow>& rows, const std::string& model) {
    RatioMeans reference;
    for (const auto& s : scan.corpus.samples) {
        StaticMetrics m = compute_static(s.content);
        reference.cyclomatic_avg += m.cyclomatic_avg;
        reference.halstead_bugs += m.halstead.bugs;
        reference.halstead_effort += m.halstead.effort;
        ++reference.rows;
    }
    if (reference.rows > 0) {
        const double n = static_cast<double>(reference.rows);
        reference.cyclomatic_avg /= n;
        reference.halstead_bugs /= n;
        reference.halstead_effort /= n;
    }
    reference.length_ratio = 1.0;

    RunMetadata metadata;
    metadata.endpoint = cfg.endpoint.base_url;
    metadata.model = model;
    metadata.corpus_digest = scan.digest;
    metadata.timestamp = scan.newest_mtime_utc;

    std::map<std::string, std::size_t> char_counts;
    for (const auto& s : scan.corpus.samples) char_counts[s.id] = s.char_count;

    AggregateConfig agg;
    agg.ratio_tenths = cfg.ratio_tenths;
    agg.buckets = cfg.buckets;
    agg.fragment_truncation = cfg.fragment_truncation;
    agg.mode_whole = cfg.mode_whole;
    agg.mode_fragment = cfg.mode_fragment;

    ReportBundle bundle = aggregate(rows, char_counts, reference, metadata, agg);
    emit(bundle, rows, cfg.out_dir, cfg.formats);
    return bundle;
}

ReportBundle run_pipeline(const RunConfig& cfg) {
    ScanStage scan = stage_scan(cfg);
    PrefixStage prefixes = stage_prefixes(cfg, scan.corpus.samples);
    std::vector<CompletionOutcome> outcomes = stage_complete(cfg, prefixes.cases);
    std::vector<ScoreRow> rows = stage_analyze(cfg, scan, prefixes, outcomes);
    return stage_report(cfg, scan, rows, model_from_outcomes(outcomes));
}

void save_prefix_cases(const std::vector<PrefixCase>& cases,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& pc : cases) {
        ordered_json j;
        j["sample_id"] = pc.sample_id;
        j["ratio_tenths"] = pc.ratio_tenths;
        j["boundary"] = pc.boundary;
        j["prefix"] = pc.prefix;
        out << j.dump() << '\n';
    }
}

std::vector<PrefixCase> load_prefix_cases(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<PrefixCase> cases;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        PrefixCase pc;
        pc.sample_id = j.at("sample_id").get<std::string>();
        pc.ratio_tenths = j.at("ratio_tenths").get<int>();
        pc.boundary = j.at("boundary").get<std::size_t>();
        pc.prefix = j.at("prefix").get<std::string>();
        cases.push_back(std::move(pc));
    }
    return cases;
}

void save_completions(const std::vector<CompletionOutcome>& outcomes,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& oc : outcomes) {
        ordered_json j;
        j["sample_id"] = oc.sample_id;
        j["ratio_tenths"] = oc.ratio_tenths;
        j["ok"] = oc.ok;
        j["text"] = oc.text;
        j["model_id"] = oc.model_id;
        j["latency_ms"] = oc.latency_ms;
        j["from_cache"] = oc.from_cache;
        j["error"] = oc.error;
        out << j.dump() << '\n';
    }
}

std::vector<CompletionOutcome> load_completions(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::vector<CompletionOutcome> outcomes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        CompletionOutcome oc;
        oc.sample_id = j.at("sample_id").get<std::string>();
        oc.ratio_tenths = j.at("ratio_tenths").get<int>();
        oc.ok = j.at("ok").get<bool>();
        oc.text = j.at("text").get<std::string>();
        oc.model_id = j.at("model_id").get<std::string>();
        oc.latency_ms = j.at("latency_ms").get<long long>();
        oc.from_cache = j.at("from_cache").get<bool>();
        oc.error = j.at("error").get<std::string>();
        outcomes.push_back(std::move(oc));
    }
    return outcomes;
}

void save_skipped(const std::vector<std::string>& too_short_ids,
                  const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "id,reason\n";
    for (const auto& id : too_short_ids) {
        out << csv::escape(id) << ",too_short\n";
    }
}

std::string model_from_outcomes(const std::vector<CompletionOutcome>& outcomes) {
    for (const auto& oc : outcomes) {
        if (oc.ok) return oc.model_id;
    }
    return "unknown";
}

}  // namespace ccbench
