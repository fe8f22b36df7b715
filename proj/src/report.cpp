#include "ccbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ccbench/csvutil.hpp"

namespace ccbench {

namespace {

using ordered_json = nlohmann::ordered_json;

struct FlagName {
    unsigned bit;
    const char* name;
};

constexpr FlagName kFlagNames[] = {
    {kFlagFailedRequest, "failed_request"},
    {kFlagEmptyGeneration, "empty_generation"},
    {kFlagInheritedMetrics, "inherited_metrics"},
    {kFlagOversizePair, "oversize_pair"},
    {kFlagTooShort, "too_short"},
};

constexpr const char* kRowsHeader =
    "sample_id,category,ratio,ro_whole,jw_whole,hamming_whole,dl_whole,"
    "ro_frag,jw_frag,hamming_frag,dl_frag,cc_avg,halstead_bugs,"
    "halstead_effort,length_ratio,generated_chars,provenance,flags";

double round6(double v) { return std::round(v * 1e6) / 1e6; }

const char* alg_name(HeatAlg a) {
    switch (a) {
        case HeatAlg::ro: return "ro";
        case HeatAlg::jw: return "jw";
        case HeatAlg::hamming: return "hamming";
        case HeatAlg::dl: return "dl";
    }
    return "unknown";
}

const char* mode_suffix(CompareMode m) {
    return m == CompareMode::whole_file ? "whole" : "frag";
}

bool excluded_from_means(const ScoreRow& r) {
    return (r.flags & (kFlagFailedRequest | kFlagTooShort)) != 0;
}

bool excluded_from_heatmaps(const ScoreRow& r) {
    return (r.flags & (kFlagFailedRequest | kFlagTooShort | kFlagOversizePair)) != 0;
}

// Heatmap value of one row for an algorithm/mode: similarity ratios map
// directly, distances are normalized by the longer side of the pair. The
// pair lengths are recovered from the sample length, the ratio, and
// generated_chars, so the same code serves both a live run and rows
// reloaded from CSV.
double heat_value(const ScoreRow& r, HeatAlg alg, CompareMode mode,
                  std::size_t sample_chars, bool fragment_truncation) {
    const SimilarityScores& s = mode == CompareMode::whole_file ? r.whole : r.fragment;
    if (alg == HeatAlg::ro) return s.ratcliff_obershelp;
    if (alg == HeatAlg::jw) return s.jaro_winkler;
    const std::size_t boundary =
        sample_chars * static_cast<std::size_t>(r.ratio_tenths) / 10;
    const std::size_t gen = static_cast<std::size_t>(r.generated_chars);
    std::size_t ref_len, cand_len;
    if (mode == CompareMode::whole_file) {
        ref_len = sample_chars;
        cand_len = boundary + gen;
    } else {
        const std::size_t remainder = sample_chars - boundary;
        ref_len = fragment_truncation ? std::min(remainder, gen) : remainder;
        cand_len = gen;
    }
    const long long d = alg == HeatAlg::hamming ? s.hamming : s.damerau_levenshtein;
    return normalize_distance(d, ref_len, cand_len);
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("short write on " + path.string());
}

std::string format_sig(double v) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// --- SVG helpers -----------------------------------------------------------

std::string svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct Panel {
    double x0, y0, w, h;  // plot area
};

void svg_line(std::string& out, double x1, double y1, double x2, double y2,
              const std::string& style) {
    out += "<line x1=\"" + svg_coord(x1) + "\" y1=\"" + svg_coord(y1) + "\" x2=\"" +
           svg_coord(x2) + "\" y2=\"" + svg_coord(y2) + "\" " + style + "/>\n";
}

void svg_text(std::string& out, double x, double y, const std::string& text,
              const std::string& extra = "") {
    out += "<text x=\"" + svg_coord(x) + "\" y=\"" + svg_coord(y) +
           "\" font-family=\"sans-serif\" font-size=\"11\" " + extra + ">" + text +
           "</text>\n";
}

std::string build_static_means_svg(const ReportBundle& bundle) {
    struct Series {
        const char* title;
        double RatioMeans::*field;
    };
    const Series series[] = {
        {"cyclomatic complexity (avg)", &RatioMeans::cyclomatic_avg},
        {"halstead bugs", &RatioMeans::halstead_bugs},
        {"halstead effort", &RatioMeans::halstead_effort},
        {"length ratio", &RatioMeans::length_ratio},
    };
    const double panel_w = 390, panel_h = 270, total_w = panel_w * 2, total_h = panel_h * 2;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      svg_coord(total_w) + "\" height=\"" + svg_coord(total_h) +
                      "\" viewBox=\"0 0 " + svg_coord(total_w) + " " + svg_coord(total_h) +
                      "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int p = 0; p < 4; ++p) {
        const double ox = (p % 2) * panel_w, oy = (p / 2) * panel_h;
        const Panel area{ox + 60, oy + 36, panel_w - 84, panel_h - 72};
        svg_text(out, ox + 28, oy + 20, series[p].title, "font-weight=\"bold\"");
        // y scale over data plus the reference line
        double hi = bundle.reference.*(series[p].field);
        for (const auto& [rt, m] : bundle.per_ratio) hi = std::max(hi, m.*(series[p].field));
        if (hi <= 0) hi = 1.0;
        hi *= 1.1;
        auto xmap = [&](double ratio) { return area.x0 + ratio * area.w; };
        auto ymap = [&](double v) { return area.y0 + area.h - (v / hi) * area.h; };
        // frame
        svg_line(out, area.x0, area.y0, area.x0, area.y0 + area.h,
                 "stroke=\"#444\" stroke-width=\"1\"");
        svg_line(out, area.x0, area.y0 + area.h, area.x0 + area.w, area.y0 + area.h,
                 "stroke=\"#444\" stroke-width=\"1\"");
        // y labels at 0, mid, top
        for (double frac : {0.0, 0.5, 1.0}) {
            const double v = hi * frac;
            svg_text(out, ox + 6, ymap(v) + 4, format_sig(v));
        }
        // x ticks at each ratio
        for (const auto& [rt, m] : bundle.per_ratio) {
            const double x = xmap(rt / 10.0);
            svg_line(out, x, area.y0 + area.h, x, area.y0 + area.h + 4,
                     "stroke=\"#444\" stroke-width=\"1\"");
            svg_text(out, x - 9, area.y0 + area.h + 17, format_double(rt / 10.0).substr(0, 3));
        }
        // reference line (originals)
        const double ry = ymap(bundle.reference.*(series[p].field));
        svg_line(out, area.x0, ry, area.x0 + area.w, ry,
                 "stroke=\"#2ca02c\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"");
        // series polyline
        std::string pts;
        for (const auto& [rt, m] : bundle.per_ratio) {
            if (!pts.empty()) pts += " ";
            pts += svg_coord(xmap(rt / 10.0)) + "," + svg_coord(ymap(m.*(series[p].field)));
        }
        out += "<polyline points=\"" + pts +
               "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
        for (const auto& [rt, m] : bundle.per_ratio) {
            out += "<circle cx=\"" + svg_coord(xmap(rt / 10.0)) + "\" cy=\"" +
                   svg_coord(ymap(m.*(series[p].field))) +
                   "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

std::string build_heatmaps_svg(const ReportBundle& bundle) {
    const double panel_w = 330, panel_h = 260;
    const int cols = 2;
    const int rows = static_cast<int>((bundle.heatmaps.size() + 1) / 2);
    const double total_w = panel_w * cols, total_h = panel_h * std::max(rows, 1);
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      svg_coord(total_w) + "\" height=\"" + svg_coord(total_h) +
                      "\" viewBox=\"0 0 " + svg_coord(total_w) + " " + svg_coord(total_h) +
                      "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    int p = 0;
    for (const auto& grid : bundle.heatmaps) {
        const double ox = (p % cols) * panel_w, oy = (p / cols) * panel_h;
        ++p;
        const Panel area{ox + 52, oy + 34, panel_w - 70, panel_h - 64};
        const std::string title = std::string(alg_name(grid.alg)) + " " +
                                  (grid.mode == CompareMode::whole_file ? "whole_file"
                                                                        : "fragment");
        svg_text(out, ox + 24, oy + 20, title, "font-weight=\"bold\"");
        long long maxc = 0;
        for (const auto& col : grid.counts)
            for (long long c : col) maxc = std::max(maxc, c);
        const std::size_t nratios = grid.ratio_tenths.size();
        const double cw = area.w / static_cast<double>(std::max<std::size_t>(nratios, 1));
        const double ch = area.h / static_cast<double>(std::max(grid.buckets, 1));
        for (std::size_t ri = 0; ri < nratios; ++ri) {
            for (int b = 0; b < grid.buckets; ++b) {
                const long long c = grid.counts[ri][static_cast<std::size_t>(b)];
                const double f = maxc > 0 ? static_cast<double>(c) / static_cast<double>(maxc)
                                          : 0.0;
                const int rr = static_cast<int>(std::lround(255 + (31 - 255) * f));
                const int gg = static_cast<int>(std::lround(255 + (119 - 255) * f));
                const int bb = static_cast<int>(std::lround(255 + (180 - 255) * f));
                // bucket 0 sits at the bottom
                const double x = area.x0 + static_cast<double>(ri) * cw;
                const double y = area.y0 + area.h - static_cast<double>(b + 1) * ch;
                out += "<rect x=\"" + svg_coord(x) + "\" y=\"" + svg_coord(y) +
                       "\" width=\"" + svg_coord(cw) + "\" height=\"" + svg_coord(ch) +
                       "\" fill=\"rgb(" + std::to_string(rr) + "," + std::to_string(gg) +
                       "," + std::to_string(bb) + ")\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
            }
        }
        for (std::size_t ri = 0; ri < nratios; ++ri) {
            const double x = area.x0 + (static_cast<double>(ri) + 0.5) * cw;
            svg_text(out, x - 9, area.y0 + area.h + 15,
                     format_double(grid.ratio_tenths[ri] / 10.0).substr(0, 3));
        }
        for (double frac : {0.0, 0.5, 1.0}) {
            const double y = area.y0 + area.h - frac * area.h;
            svg_text(out, ox + 24, y + 4, format_sig(frac));
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace

std::string flag_names(unsigned flags) {
    std::string out;
    for (const auto& f : kFlagNames) {
        if ((flags & f.bit) == 0) continue;
        if (!out.empty()) out.push_back(';');
        out += f.name;
    }
    return out;
}

unsigned flags_from_names(const std::string& names) {
    unsigned flags = 0;
    std::string cur;
    auto apply = [&]() {
        if (cur.empty()) return;
        for (const auto& f : kFlagNames) {
            if (cur == f.name) {
                flags |= f.bit;
                return;
            }
        }
        throw std::runtime_error("unknown row flag: " + cur);
    };
    for (char c : names) {
        if (c == ';') {
            apply();
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    apply();
    return flags;
}

int bucket_index(double v, int buckets) {
    if (buckets < 1) return 0;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    const int idx = static_cast<int>(v * buckets);
    return std::min(idx, buckets - 1);
}

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

ReportBundle aggregate(const std::vector<ScoreRow>& rows,
                       const std::map<std::string, std::size_t>& char_counts,
                       const RatioMeans& reference, const RunMetadata& metadata,
                       const AggregateConfig& cfg) {
    ReportBundle bundle;
    bundle.metadata = metadata;
    bundle.reference = reference;

    bundle.summary.rows_total = rows.size();
    std::size_t usable = 0;
    for (const auto& r : rows) {
        if (r.flags & kFlagFailedRequest) ++bundle.summary.failed_requests;
        if (r.flags & kFlagEmptyGeneration) ++bundle.summary.empty_generations;
        if (r.flags & kFlagInheritedMetrics) ++bundle.summary.inherited_metrics;
        if (r.flags & kFlagOversizePair) ++bundle.summary.oversize_pairs;
        if (r.flags & kFlagTooShort) ++bundle.summary.too_short;
        if (!excluded_from_means(r)) ++usable;
        if (!excluded_from_heatmaps(r)) ++bundle.summary.rows_scored;
    }
    if (usable == 0) {
        throw std::runtime_error(
            "empty report: every row is excluded (failed requests or too-short samples)");
    }

    for (int rt : cfg.ratio_tenths) bundle.per_ratio[rt] = RatioMeans{};
    for (const auto& r : rows) {
        if (excluded_from_means(r)) continue;
        auto it = bundle.per_ratio.find(r.ratio_tenths);
        if (it == bundle.per_ratio.end()) continue;
        RatioMeans& m = it->second;
        m.cyclomatic_avg += r.statics.cyclomatic_avg;
        m.halstead_bugs += r.statics.halstead.bugs;
        m.halstead_effort += r.statics.halstead.effort;
        m.length_ratio += r.statics.length_ratio;
        ++m.rows;
    }
    for (auto& [rt, m] : bundle.per_ratio) {
        if (m.rows == 0) continue;
        const double n = static_cast<double>(m.rows);
        m.cyclomatic_avg /= n;
        m.halstead_bugs /= n;
        m.halstead_effort /= n;
        m.length_ratio /= n;
    }

    std::vector<std::pair<HeatAlg, CompareMode>> wanted;
    for (HeatAlg alg : {HeatAlg::ro, HeatAlg::jw, HeatAlg::hamming, HeatAlg::dl}) {
        if (cfg.mode_whole) wanted.emplace_back(alg, CompareMode::whole_file);
        if (cfg.mode_fragment) wanted.emplace_back(alg, CompareMode::fragment);
    }
    for (auto [alg, mode] : wanted) {
        HeatmapGrid grid;
        grid.alg = alg;
        grid.mode = mode;
        grid.ratio_tenths = cfg.ratio_tenths;
        grid.buckets = cfg.buckets;
        grid.counts.assign(cfg.ratio_tenths.size(),
                           std::vector<long long>(static_cast<std::size_t>(cfg.buckets), 0));
        for (const auto& r : rows) {
            if (excluded_from_heatmaps(r)) continue;
            auto pos = std::find(cfg.ratio_tenths.begin(), cfg.ratio_tenths.end(),
                                 r.ratio_tenths);
            if (pos == cfg.ratio_tenths.end()) continue;
            auto cc = char_counts.find(r.sample_id);
            if (cc == char_counts.end()) continue;
            const double v = heat_value(r, alg, mode, cc->second, cfg.fragment_truncation);
            const std::size_t ri =
                static_cast<std::size_t>(pos - cfg.ratio_tenths.begin());
            ++grid.counts[ri][static_cast<std::size_t>(bucket_index(v, cfg.buckets))];
        }
        bundle.heatmaps.push_back(std::move(grid));
    }
    return bundle;
}

void write_rows_csv(std::vector<ScoreRow> rows, const std::filesystem::path& path) {
    std::sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
        if (a.sample_id != b.sample_id) return a.sample_id < b.sample_id;
        return a.ratio_tenths < b.ratio_tenths;
    });
    std::string out = std::string(kRowsHeader) + "\n";
    for (const auto& r : rows) {
        out += csv::escape(r.sample_id);
        out += ',';
        out += csv::escape(r.category);
        out += ',';
        out += format_double(r.ratio_tenths / 10.0);
        out += ',';
        out += format_double(r.whole.ratcliff_obershelp);
        out += ',';
        out += format_double(r.whole.jaro_winkler);
        out += ',';
        out += std::to_string(r.whole.hamming);
        out += ',';
        out += std::to_string(r.whole.damerau_levenshtein);
        out += ',';
        out += format_double(r.fragment.ratcliff_obershelp);
        out += ',';
        out += format_double(r.fragment.jaro_winkler);
        out += ',';
        out += std::to_string(r.fragment.hamming);
        out += ',';
        out += std::to_string(r.fragment.damerau_levenshtein);
        out += ',';
        out += format_double(r.statics.cyclomatic_avg);
        out += ',';
        out += format_double(r.statics.halstead.bugs);
        out += ',';
        out += format_double(r.statics.halstead.effort);
        out += ',';
        out += format_double(r.statics.length_ratio);
        out += ',';
        out += std::to_string(r.generated_chars);
        out += ',';
        out += provenance_name(r.statics.provenance);
        out += ',';
        out += csv::escape(flag_names(r.flags));
        out += '\n';
    }
    write_file(path, out);
}

std::vector<ScoreRow> read_rows_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty rows file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRowsHeader) {
        throw std::runtime_error("unexpected rows.csv header in " + path.string());
    }
    std::vector<ScoreRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = csv::split_line(line);
        if (f.size() != 18) {
            throw std::runtime_error("bad rows.csv line with " + std::to_string(f.size()) +
                                     " fields");
        }
        ScoreRow r;
        r.sample_id = f[0];
        r.category = f[1];
        r.ratio_tenths = static_cast<int>(std::lround(std::stod(f[2]) * 10.0));
        r.whole.mode = CompareMode::whole_file;
        r.whole.ratcliff_obershelp = std::stod(f[3]);
        r.whole.jaro_winkler = std::stod(f[4]);
        r.whole.hamming = std::stoll(f[5]);
        r.whole.damerau_levenshtein = std::stoll(f[6]);
        r.fragment.mode = CompareMode::fragment;
        r.fragment.ratcliff_obershelp = std::stod(f[7]);
        r.fragment.jaro_winkler = std::stod(f[8]);
        r.fragment.hamming = std::stoll(f[9]);
        r.fragment.damerau_levenshtein = std::stoll(f[10]);
        r.statics.cyclomatic_avg = std::stod(f[11]);
        r.statics.halstead.bugs = std::stod(f[12]);
        r.statics.halstead.volume = r.statics.halstead.bugs * 3000.0;
        r.statics.halstead.effort = std::stod(f[13]);
        r.statics.length_ratio = std::stod(f[14]);
        r.generated_chars = std::stoll(f[15]);
        if (f[16] == "computed") {
            r.statics.provenance = Provenance::computed;
        } else if (f[16] == "inherited_from_original") {
            r.statics.provenance = Provenance::inherited_from_original;
        } else {
            throw std::runtime_error("unknown provenance: " + f[16]);
        }
        r.flags = flags_from_names(f[17]);
        r.whole.oversize = r.fragment.oversize = (r.flags & kFlagOversizePair) != 0;
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<std::filesystem::path> emit(const ReportBundle& bundle,
                                        const std::vector<ScoreRow>& rows,
                                        const std::filesystem::path& out_dir,
                                        const std::set<std::string>& formats) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;

    if (formats.count("csv") > 0) {
        const auto rows_path = out_dir / "rows.csv";
        write_rows_csv(rows, rows_path);
        written.push_back(rows_path);
        for (const auto& grid : bundle.heatmaps) {
            std::string out = "ratio";
            for (int b = 0; b < grid.buckets; ++b) out += ",bucket_" + std::to_string(b);
            out += "\n";
            for (std::size_t ri = 0; ri < grid.ratio_tenths.size(); ++ri) {
                out += format_double(grid.ratio_tenths[ri] / 10.0);
                for (int b = 0; b < grid.buckets; ++b) {
                    out += ',' + std::to_string(grid.counts[ri][static_cast<std::size_t>(b)]);
                }
                out += '\n';
            }
            const auto path = out_dir / (std::string("heatmap_") + alg_name(grid.alg) + "_" +
                                         mode_suffix(grid.mode) + ".csv");
            write_file(path, out);
            written.push_back(path);
        }
    }

    if (formats.count("json") > 0) {
        ordered_json j;
        j["run_metadata"] = {{"endpoint", bundle.metadata.endpoint},
                             {"model", bundle.metadata.model},
                             {"corpus_digest", bundle.metadata.corpus_digest},
                             {"timestamp", bundle.metadata.timestamp}};
        ordered_json per;
        for (const auto& [rt, m] : bundle.per_ratio) {
            char key[8];
            std::snprintf(key, sizeof(key), "0.%d", rt);
            per[key] = {{"cyclomatic_avg", round6(m.cyclomatic_avg)},
                        {"halstead_bugs", round6(m.halstead_bugs)},
                        {"halstead_effort", round6(m.halstead_effort)},
                        {"length_ratio", round6(m.length_ratio)},
                        {"rows", m.rows}};
        }
        j["per_ratio_means"] = std::move(per);
        j["reference_means"] = {{"cyclomatic_avg", round6(bundle.reference.cyclomatic_avg)},
                                {"halstead_bugs", round6(bundle.reference.halstead_bugs)},
                                {"halstead_effort", round6(bundle.reference.halstead_effort)},
                                {"length_ratio", round6(bundle.reference.length_ratio)},
                                {"samples", bundle.reference.rows}};
        j["run_summary"] = {{"rows_total", bundle.summary.rows_total},
                            {"rows_scored", bundle.summary.rows_scored},
                            {"failed_requests", bundle.summary.failed_requests},
                            {"empty_generations", bundle.summary.empty_generations},
                            {"inherited_metrics", bundle.summary.inherited_metrics},
                            {"oversize_pairs", bundle.summary.oversize_pairs},
                            {"too_short", bundle.summary.too_short}};
        const auto path = out_dir / "summary.json";
        write_file(path, j.dump(2) + "\n");
        written.push_back(path);
    }

    if (formats.count("svg") > 0) {
        const auto means_path = out_dir / "static_means.svg";
        write_file(means_path, build_static_means_svg(bundle));
        written.push_back(means_path);
        const auto heat_path = out_dir / "heatmaps.svg";
        write_file(heat_path, build_heatmaps_svg(bundle));
        written.push_back(heat_path);
    }
    return written;
}

}  // namespace ccbench
