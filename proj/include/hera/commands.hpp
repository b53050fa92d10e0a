#pragma once

#include "hera/pipeline.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hera {

// Runs the pipeline over a JSONL dataset (or a plain-text file holding one
// article) and writes one record per line: {"id", "summary", "trace"}.
// Writes are atomic. Returns the number of failed documents.
struct SummarizeOptions {
    std::string input_path;
    std::string out_path;
    std::optional<std::size_t> limit;
};
int cmd_summarize(const SummarizeOptions& opts, const PipelineConfig& config,
                  std::ostream& log);

struct ReportRow {
    std::string id;
    double r1 = 0, r2 = 0, rl = 0;           // F1 in [0,1]
    std::map<std::string, double> external;  // merged side-file scores
    double wall_ms = 0;
    long backend_calls = 0;
};

struct Report {
    std::vector<ReportRow> rows;
    std::map<std::string, double> means;
    std::string config_snapshot;

    std::string to_json() const;
    std::string to_table() const;  // scores x100, 2 decimals
};

// Joins predictions and references by id, computes ROUGE-1/2/L, merges the
// optional external-scores side file. Throws IdMismatch naming unmatched
// prediction ids. Documents without a reference are skipped.
struct EvaluateOptions {
    std::string predictions_path;
    std::string dataset_path;
    std::string external_scores_path;  // optional
    std::string out_path;              // optional report file
};
Report cmd_evaluate(const EvaluateOptions& opts, std::ostream& log);

struct SweepRow {
    int k = 0;
    double mean_rl = 0;  // vs references when available, else 0
    long backend_calls = 0;
    double wall_ms = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    long local_summary_misses = 0;  // across the whole sweep

    std::string to_table() const;
};

// run_batch per k over a shared cache, so prompts that do not depend on k
// (local summaries in particular) are only issued once.
SweepResult cmd_sweep(const std::string& dataset_path, const PipelineConfig& config,
                      const std::vector<int>& k_values, std::optional<std::size_t> limit,
                      std::ostream& log);

struct BenchResult {
    double hera_ms = 0;
    double baseline_ms = 0;
    long hera_calls = 0;
    long baseline_calls = 0;
    double time_ratio = 0;  // hera / baseline

    std::string to_table() const;
};

// Same documents through HERA mode and baseline (packaging disabled).
BenchResult cmd_bench(const std::string& dataset_path, const PipelineConfig& config,
                      std::optional<std::size_t> limit, std::ostream& log);

struct CacheStats {
    std::size_t entries = 0;
    std::uintmax_t bytes = 0;
};
CacheStats cmd_cache_stats(const std::string& cache_dir);
void cmd_cache_clear(const std::string& cache_dir);

}  // namespace hera
