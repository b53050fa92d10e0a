#include "hera/commands.hpp"

#include "hera/errors.hpp"
#include "hera/metrics.hpp"
#include "hera/util.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hera {

using nlohmann::json;

namespace {

// A plain-text file (no JSONL record on the first line) is treated as a
// single article.
Dataset load_input(const std::string& path, std::optional<std::size_t> limit) {
    std::ifstream probe(path);
    if (!probe) throw DatasetNotFound(path);
    std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".jsonl" || ext == ".ndjson") {
        return load_dataset(path, limit);
    }
    std::string first_line;
    std::getline(probe, first_line);
    json j = json::parse(first_line, nullptr, false);
    if (j.is_object() && j.contains("article")) {
        return load_dataset(path, limit);
    }
    Dataset ds;
    DocumentRecord rec;
    rec.id = std::filesystem::path(path).stem().string();
    rec.article = normalize(read_file(path));
    if (rec.article.empty()) throw DatasetEmpty(path);
    ds.records.push_back(std::move(rec));
    return ds;
}

}  // namespace

int cmd_summarize(const SummarizeOptions& opts, const PipelineConfig& config,
                  std::ostream& log) {
    Dataset ds = load_input(opts.input_path, opts.limit);
    if (ds.skipped > 0) log << "warning: skipped " << ds.skipped << " malformed record(s)\n";

    Pipeline pipeline(config);
    std::vector<BatchItem> items = run_batch(ds.records, pipeline);

    std::string out;
    int failures = 0;
    for (const BatchItem& item : items) {
        json rec;
        rec["id"] = item.id;
        if (item.ok) {
            rec["summary"] = item.summary.text;
            rec["trace"] = json::parse(item.trace.to_json());
        } else {
            rec["error"] = item.error;
            ++failures;
        }
        out += rec.dump();
        out += "\n";
    }
    write_file_atomic(opts.out_path, out);
    log << items.size() - static_cast<std::size_t>(failures) << " summarized, " << failures
        << " failed -> " << opts.out_path << "\n";
    return failures;
}

namespace {

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0;
    double sum = 0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

}  // namespace

std::string Report::to_json() const {
    json rows_json = json::array();
    for (const ReportRow& r : rows) {
        json row = {{"id", r.id},     {"rouge1", r.r1},         {"rouge2", r.r2},
                    {"rougeL", r.rl}, {"wall_ms", r.wall_ms},   {"backend_calls", r.backend_calls}};
        for (const auto& [k, v] : r.external) row[k] = v;
        rows_json.push_back(row);
    }
    json j = {{"rows", rows_json}, {"means", means}};
    if (!config_snapshot.empty()) j["config"] = json::parse(config_snapshot);
    return j.dump(2);
}

std::string Report::to_table() const {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2);
    ss << std::left << std::setw(16) << "id" << std::right << std::setw(8) << "R-1"
       << std::setw(8) << "R-2" << std::setw(8) << "R-L";
    std::vector<std::string> extra;
    for (const auto& [k, v] : means) {
        if (k != "rouge1" && k != "rouge2" && k != "rougeL") extra.push_back(k);
    }
    for (const auto& k : extra) ss << std::setw(10) << k;
    ss << std::setw(10) << "calls" << "\n";
    for (const ReportRow& r : rows) {
        ss << std::left << std::setw(16) << r.id << std::right << std::setw(8) << r.r1 * 100
           << std::setw(8) << r.r2 * 100 << std::setw(8) << r.rl * 100;
        for (const auto& k : extra) {
            auto it = r.external.find(k);
            if (it != r.external.end()) ss << std::setw(10) << it->second * 100;
            else ss << std::setw(10) << "-";
        }
        ss << std::setw(10) << r.backend_calls << "\n";
    }
    ss << std::left << std::setw(16) << "mean" << std::right << std::setw(8)
       << means.at("rouge1") * 100 << std::setw(8) << means.at("rouge2") * 100 << std::setw(8)
       << means.at("rougeL") * 100;
    for (const auto& k : extra) ss << std::setw(10) << means.at(k) * 100;
    ss << "\n";
    return ss.str();
}

Report cmd_evaluate(const EvaluateOptions& opts, std::ostream& log) {
    // Predictions: one {"id", "summary", ...} per line.
    struct Prediction {
        std::string summary;
        double wall_ms = 0;
        long calls = 0;
    };
    std::map<std::string, Prediction> predictions;
    std::vector<std::string> prediction_order;
    {
        std::ifstream in(opts.predictions_path);
        if (!in) throw DatasetNotFound(opts.predictions_path);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("id") || !j.contains("summary")) continue;
            Prediction p;
            p.summary = j["summary"].get<std::string>();
            if (j.contains("trace")) {
                p.wall_ms = j["trace"].value("total_ms", 0.0);
                if (j["trace"].contains("timings")) {
                    p.wall_ms = j["trace"]["timings"].value("total_ms", 0.0);
                }
                p.calls = j["trace"].value("backend_calls", 0l);
            }
            std::string id = j["id"].get<std::string>();
            if (predictions.emplace(id, std::move(p)).second) prediction_order.push_back(id);
        }
    }
    if (predictions.empty()) throw DatasetEmpty(opts.predictions_path);

    Dataset ds = load_dataset(opts.dataset_path);
    std::map<std::string, std::string> references;
    for (const DocumentRecord& rec : ds.records) {
        if (rec.reference) references[rec.id] = *rec.reference;
    }

    std::vector<std::string> unmatched;
    for (const std::string& id : prediction_order) {
        if (!references.count(id)) unmatched.push_back(id);
    }
    if (!unmatched.empty()) {
        std::string names;
        for (const auto& id : unmatched) names += (names.empty() ? "" : ", ") + id;
        throw IdMismatch("predictions without matching reference: " + names);
    }

    // External-scorer side file: {"id", <score fields>} per line.
    std::map<std::string, std::map<std::string, double>> external;
    if (!opts.external_scores_path.empty()) {
        std::ifstream in(opts.external_scores_path);
        if (!in) throw DatasetNotFound(opts.external_scores_path);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("id")) continue;
            std::string id = j["id"].get<std::string>();
            for (auto& [k, v] : j.items()) {
                if (k != "id" && v.is_number()) external[id][k] = v.get<double>();
            }
        }
    }

    Report report;
    std::map<std::string, std::vector<double>> columns;
    for (const std::string& id : prediction_order) {
        const Prediction& p = predictions.at(id);
        ReportRow row;
        row.id = id;
        const std::string& ref = references.at(id);
        row.r1 = rouge_n(p.summary, ref, 1).f1;
        row.r2 = rouge_n(p.summary, ref, 2).f1;
        row.rl = rouge_l(p.summary, ref).f1;
        row.wall_ms = p.wall_ms;
        row.backend_calls = p.calls;
        auto ext = external.find(id);
        if (ext != external.end()) row.external = ext->second;
        columns["rouge1"].push_back(row.r1);
        columns["rouge2"].push_back(row.r2);
        columns["rougeL"].push_back(row.rl);
        for (const auto& [k, v] : row.external) columns[k].push_back(v);
        report.rows.push_back(std::move(row));
    }
    for (const auto& [k, xs] : columns) report.means[k] = mean_of(xs);

    if (!opts.out_path.empty()) {
        write_file_atomic(opts.out_path, report.to_json());
        log << "report -> " << opts.out_path << "\n";
    }
    return report;
}

std::string SweepResult::to_table() const {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2);
    ss << std::setw(6) << "k" << std::setw(10) << "R-L" << std::setw(10) << "calls"
       << std::setw(12) << "wall_ms" << "\n";
    for (const SweepRow& r : rows) {
        ss << std::setw(6) << r.k << std::setw(10) << r.mean_rl * 100 << std::setw(10)
           << r.backend_calls << std::setw(12) << r.wall_ms << "\n";
    }
    return ss.str();
}

SweepResult cmd_sweep(const std::string& dataset_path, const PipelineConfig& config,
                      const std::vector<int>& k_values, std::optional<std::size_t> limit,
                      std::ostream& log) {
    if (k_values.empty()) throw Error("sweep: no k values");
    for (int k : k_values) {
        if (k < 1) throw Error("sweep: k must be >= 1");
    }
    Dataset ds = load_dataset(dataset_path, limit);

    // One backend and one cache for the whole sweep; k-independent prompts
    // (local summaries, event extraction) hit the cache after the first k.
    std::unique_ptr<Backend> backend;
    if (config.backend == "http") backend = std::make_unique<HttpBackend>(config.http);
    else backend = std::make_unique<ScriptedBackend>();
    std::unique_ptr<ResponseCache> cache;
    if (config.cache_dir.empty()) cache = std::make_unique<MemoryCache>();
    else cache = std::make_unique<DiskCache>(config.cache_dir);

    SweepResult result;
    for (int k : k_values) {
        PipelineConfig cfg = config;
        cfg.bag_size = k;
        Pipeline pipeline(cfg, *backend, *cache);
        auto t0 = std::chrono::steady_clock::now();
        std::vector<BatchItem> items;
        try {
            items = run_batch(ds.records, pipeline);
        } catch (const std::exception& e) {
            log << "k=" << k << " failed: " << e.what() << "\n";
            continue;
        }
        SweepRow row;
        row.k = k;
        row.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        std::vector<double> rls;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (!items[i].ok) continue;
            row.backend_calls += items[i].trace.backend_calls;
            for (const CallRecord& c : items[i].trace.calls) {
                if (c.template_id == TemplateId::LocalSummary && !c.from_cache) {
                    ++result.local_summary_misses;
                }
            }
            if (ds.records[i].reference) {
                rls.push_back(rouge_l(items[i].summary.text, *ds.records[i].reference).f1);
            }
        }
        row.mean_rl = mean_of(rls);
        result.rows.push_back(row);
    }
    log << result.to_table();
    return result;
}

std::string BenchResult::to_table() const {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2);
    ss << std::setw(12) << "mode" << std::setw(12) << "wall_ms" << std::setw(10) << "calls"
       << "\n";
    ss << std::setw(12) << "baseline" << std::setw(12) << baseline_ms << std::setw(10)
       << baseline_calls << "\n";
    ss << std::setw(12) << "hera" << std::setw(12) << hera_ms << std::setw(10) << hera_calls
       << "\n";
    ss << "time ratio (hera/baseline): " << time_ratio << "\n";
    return ss.str();
}

BenchResult cmd_bench(const std::string& dataset_path, const PipelineConfig& config,
                      std::optional<std::size_t> limit, std::ostream& log) {
    Dataset ds = load_dataset(dataset_path, limit);
    BenchResult result;

    auto measure = [&](bool packaging, double& out_ms, long& out_calls) {
        PipelineConfig cfg = config;
        cfg.packaging_enabled = packaging;
        cfg.cache_dir.clear();  // timing run: no cross-mode cache reuse
        Pipeline pipeline(cfg);
        auto t0 = std::chrono::steady_clock::now();
        std::vector<BatchItem> items = run_batch(ds.records, pipeline);
        out_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
        for (const BatchItem& item : items) {
            if (item.ok) out_calls += item.trace.backend_calls;
        }
    };
    measure(false, result.baseline_ms, result.baseline_calls);
    measure(true, result.hera_ms, result.hera_calls);
    result.time_ratio = result.baseline_ms > 0 ? result.hera_ms / result.baseline_ms : 0;
    log << result.to_table();
    return result;
}

CacheStats cmd_cache_stats(const std::string& cache_dir) {
    DiskCache cache(cache_dir);
    return {cache.entry_count(), cache.total_bytes()};
}

void cmd_cache_clear(const std::string& cache_dir) {
    DiskCache cache(cache_dir);
    cache.clear();
}

}  // namespace hera
