#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "ccbench/mockserver.hpp"
#include "ccbench/pipeline.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

void print_summary(const ccbench::ReportBundle& bundle) {
    const auto& s = bundle.summary;
    std::cout << "rows: " << s.rows_total << " total, " << s.rows_scored << " scored, "
              << s.failed_requests << " failed, " << s.empty_generations << " empty, "
              << s.inherited_metrics << " inherited, " << s.oversize_pairs << " oversize, "
              << s.too_short << " too short\n";
    std::cout << "model: " << bundle.metadata.model
              << "  corpus: " << bundle.metadata.corpus_digest.substr(0, 12) << "\n";
}

std::vector<std::string> derive_too_short(const std::vector<ccbench::SourceSample>& samples) {
    std::vector<std::string> ids;
    for (const auto& s : samples) {
        if (s.char_count < 10) ids.push_back(s.id);
    }
    return ids;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark harness for code completion servers"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the verb: ccbench run --corpus ...

    std::string config_path, corpus_root, out_dir, endpoint, token, ratios, cache_dir;
    std::string strategy = "echo_remainder";
    int max_parallel = 0, buckets = 0;
    bool no_frag_trunc = false;
    std::uint64_t seed = 42;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--corpus", corpus_root, "corpus root directory");
    app.add_option("--out-dir", out_dir, "artifact output directory");
    app.add_option("--endpoint", endpoint, "completion server base URL");
    app.add_option("--token", token, "bearer token (or set CCBENCH_TOKEN)");
    app.add_option("--max-parallel", max_parallel, "max concurrent requests");
    app.add_option("--ratios", ratios, "comma list of prefix ratios, e.g. 0.1,0.5,0.9");
    app.add_option("--buckets", buckets, "heatmap bucket count");
    app.add_flag("--no-fragment-truncation", no_frag_trunc,
                 "compare fragments against the full remainder");
    app.add_option("--cache-dir", cache_dir, "response cache directory");
    app.add_option("--strategy", strategy,
                   "mock strategy: echo_remainder, fixed_text, seeded_noise, fixed_empty");
    app.add_option("--seed", seed, "seed for the mock noise strategy");

    auto* cmd_run = app.add_subcommand("run", "scan, complete, score and report in one go");
    auto* cmd_scan = app.add_subcommand("scan", "load the corpus and write manifest.csv");
    auto* cmd_prefixes =
        app.add_subcommand("prefixes", "slice samples into prefix_cases.jsonl");
    auto* cmd_complete =
        app.add_subcommand("complete", "request completions into completions.jsonl");
    auto* cmd_analyze = app.add_subcommand("analyze", "score completions into rows.csv");
    auto* cmd_report = app.add_subcommand("report", "rebuild summary and charts from rows.csv");
    auto* cmd_mock = app.add_subcommand("mock-serve", "serve completions from the corpus");

    int mock_port = 8080;
    std::string mock_host = "127.0.0.1";
    std::string fixed_text;
    double noise_rate = 5.0;
    int delay_ms = 0;
    std::uint64_t mock_max_chars = 0;
    cmd_mock->add_option("--port", mock_port, "listen port (0 picks a free one)");
    cmd_mock->add_option("--host", mock_host, "listen address");
    cmd_mock->add_option("--fixed-text", fixed_text, "reply for the fixed_text strategy");
    cmd_mock->add_option("--noise-rate", noise_rate, "edits per 100 chars for seeded_noise");
    cmd_mock->add_option("--delay-ms", delay_ms, "artificial response delay");
    cmd_mock->add_option("--max-chars", mock_max_chars, "cap returned completion length");

    CLI11_PARSE(app, argc, argv);

    try {
        ccbench::RunConfig cfg =
            config_path.empty() ? ccbench::RunConfig{} : ccbench::load_config(config_path);
        if (!corpus_root.empty()) cfg.corpus.root = corpus_root;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!endpoint.empty()) cfg.endpoint.base_url = endpoint;
        if (!token.empty()) {
            cfg.endpoint.auth_token = token;
        } else if (cfg.endpoint.auth_token.empty()) {
            if (const char* env = std::getenv("CCBENCH_TOKEN")) cfg.endpoint.auth_token = env;
        }
        if (max_parallel > 0) cfg.endpoint.max_parallel = max_parallel;
        if (!ratios.empty()) cfg.ratio_tenths = ccbench::parse_ratios(ratios);
        if (buckets > 0) cfg.buckets = buckets;
        if (no_frag_trunc) cfg.fragment_truncation = false;
        if (!cache_dir.empty()) cfg.endpoint.cache_dir = cache_dir;
        if (cfg.corpus.root.empty()) throw std::runtime_error("corpus root is required");

        if (cmd_scan->parsed()) {
            auto scan = ccbench::stage_scan(cfg);
            std::cout << "samples: " << scan.corpus.samples.size() << " (skipped "
                      << scan.corpus.skipped_invalid_utf8 << " invalid utf-8, "
                      << scan.corpus.skipped_size << " size-filtered)\n";
            std::cout << "corpus digest: " << scan.digest << "\n";
            std::cout << "wrote " << (cfg.out_dir / "manifest.csv").string() << "\n";
            return 0;
        }

        if (cmd_prefixes->parsed()) {
            auto scan = ccbench::stage_scan(cfg);
            auto prefixes = ccbench::stage_prefixes(cfg, scan.corpus.samples);
            std::cout << "prefix cases: " << prefixes.cases.size() << " ("
                      << prefixes.too_short_ids.size() << " samples too short)\n";
            std::cout << "wrote " << (cfg.out_dir / "prefix_cases.jsonl").string() << "\n";
            return 0;
        }

        if (cmd_complete->parsed()) {
            if (cfg.endpoint.base_url.empty())
                throw std::runtime_error("endpoint is required for complete");
            auto cases = ccbench::load_prefix_cases(cfg.out_dir / "prefix_cases.jsonl");
            auto outcomes = ccbench::stage_complete(cfg, cases);
            std::size_t ok = 0, cached = 0;
            for (const auto& oc : outcomes) {
                if (oc.ok) ++ok;
                if (oc.from_cache) ++cached;
            }
            std::cout << "completions: " << ok << "/" << outcomes.size() << " ok (" << cached
                      << " from cache)\n";
            std::cout << "wrote " << (cfg.out_dir / "completions.jsonl").string() << "\n";
            return outcomes.empty() || ok > 0 ? 0 : 1;
        }

        if (cmd_analyze->parsed()) {
            auto scan = ccbench::stage_scan(cfg);
            ccbench::PrefixStage prefixes;
            prefixes.cases = ccbench::load_prefix_cases(cfg.out_dir / "prefix_cases.jsonl");
            prefixes.too_short_ids = derive_too_short(scan.corpus.samples);
            auto outcomes = ccbench::load_completions(cfg.out_dir / "completions.jsonl");
            auto rows = ccbench::stage_analyze(cfg, scan, prefixes, outcomes);
            std::cout << "rows: " << rows.size() << "\n";
            std::cout << "wrote " << (cfg.out_dir / "rows.csv").string() << "\n";
            return 0;
        }

        if (cmd_report->parsed()) {
            auto scan = ccbench::stage_scan(cfg);
            auto rows = ccbench::read_rows_csv(cfg.out_dir / "rows.csv");
            std::string model = "unknown";
            const auto completions_path = cfg.out_dir / "completions.jsonl";
            if (std::filesystem::exists(completions_path)) {
                model = ccbench::model_from_outcomes(
                    ccbench::load_completions(completions_path));
            }
            auto bundle = ccbench::stage_report(cfg, scan, rows, model);
            print_summary(bundle);
            std::cout << "wrote report into " << cfg.out_dir.string() << "\n";
            return 0;
        }

        if (cmd_run->parsed()) {
            if (cfg.endpoint.base_url.empty())
                throw std::runtime_error("endpoint is required for run");
            auto bundle = ccbench::run_pipeline(cfg);
            print_summary(bundle);
            std::cout << "wrote report into " << cfg.out_dir.string() << "\n";
            return 0;
        }

        if (cmd_mock->parsed()) {
            auto strat = ccbench::strategy_from_name(strategy);
            if (!strat.has_value())
                throw std::runtime_error("unknown mock strategy: " + strategy);
            auto scan = ccbench::scan_corpus(cfg.corpus);
            ccbench::MockConfig mock_cfg;
            mock_cfg.strategy = *strat;
            mock_cfg.fixed_text = fixed_text;
            mock_cfg.noise_rate = noise_rate;
            mock_cfg.noise_seed = seed;
            mock_cfg.max_chars = static_cast<std::size_t>(mock_max_chars);
            mock_cfg.delay_ms = delay_ms;
            mock_cfg.auth_token = cfg.endpoint.auth_token;
            ccbench::MockServer server(std::move(scan.samples), mock_cfg);
            if (!server.start(mock_host, mock_port)) {
                throw std::runtime_error("cannot bind " + mock_host + ":" +
                                         std::to_string(mock_port));
            }
            std::cout << "mock server (" << strategy << ") listening on "
                      << server.base_url() << "\n";
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            while (!g_stop) {
                std::this_thread::sleep_for(std::chrono::milliseconds(200));
            }
            server.stop();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
